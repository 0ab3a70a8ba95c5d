from fractions import Fraction

import pytest

from polycartan.algebra import Chart, Derivation, coordinate_field
from polycartan.cartan import PolyForm, ShiftedChart, de_rham, interior
from polycartan.poisson import (
    AdmissibleFunction,
    DegenerateKernel,
    FrameDependent,
    NotAdmissible,
    NotClosed,
    PolyPoissonStructure,
    SectionTuple,
    admissible,
    admissible_bracket,
    anchor_morphism_residual,
    bracket_sections,
    bracket_with,
    check_axioms,
    differential_compatibility_residual,
    from_polysymplectic,
    jacobi_sum,
)
from conftest import broken_jacobi_b, broken_jacobi_c, canonical_r2, section, so3


def test_canonical_r2_passes_all_axioms(canonical_structure):
    report = check_axioms(canonical_structure)
    assert report.passed, [c.witness for c in report.checks if not c.passed]
    # abelian: every structure function vanishes
    f = report.structure_functions
    assert all(
        f[a][b][c].is_zero() for a in range(3) for b in range(3) for c in range(3)
    )


def test_so3_passes_all_axioms(so3_structure):
    report = check_axioms(so3_structure)
    assert report.passed, [c.witness for c in report.checks if not c.passed]
    # f^3_12 = 1 from {x1,x2} = x3
    assert so3_structure.r == 1
    assert report.structure_functions[0][1][2] == 1


def test_negated_anchor_fails_skew(canonical_structure):
    s = canonical_structure
    anchors = (-s.anchors[0],) + s.anchors[1:]
    broken = PolyPoissonStructure(s.chart, s.r, s.frame, anchors, s.sample_points)
    report = check_axioms(broken)
    assert not report.skew.passed
    # witness fixed by the polarized pair (1,2): residual (2, 0)
    assert "(1,2)" in report.skew.witness and "(2, 0)" in report.skew.witness


def test_mutation_sensitivity_canonical(canonical_structure):
    # negating any single anchor component flips at least one verdict
    s = canonical_structure
    for a, anchor in enumerate(s.anchors):
        for name, comp in anchor.components.items():
            comps = dict(anchor.components)
            comps[name] = -comp
            anchors = list(s.anchors)
            anchors[a] = Derivation(s.chart, comps, 0)
            broken = PolyPoissonStructure(
                s.chart, s.r, s.frame, tuple(anchors), s.sample_points
            )
            assert not check_axioms(broken).passed


def test_mutation_sensitivity_so3(so3_structure):
    s = so3_structure
    for a, anchor in enumerate(s.anchors):
        for name, comp in anchor.components.items():
            comps = dict(anchor.components)
            comps[name] = -comp
            anchors = list(s.anchors)
            anchors[a] = Derivation(s.chart, comps, 0)
            broken = PolyPoissonStructure(
                s.chart, s.r, s.frame, tuple(anchors), s.sample_points
            )
            assert not check_axioms(broken).passed


def test_broken_jacobi_fixtures():
    for build in (broken_jacobi_b, broken_jacobi_c):
        report = check_axioms(build())
        assert report.skew.passed
        assert report.closure.passed
        assert not report.jacobi.passed
        assert "jacobiator" in report.jacobi.witness


def test_dependent_frame_raises(canonical_structure):
    s = canonical_structure
    frame = s.frame + (s.frame[0],)
    anchors = s.anchors + (s.anchors[0],)
    with pytest.raises(FrameDependent):
        check_axioms(
            PolyPoissonStructure(s.chart, s.r, frame, anchors, s.sample_points)
        )


def test_rank_inconclusive_reported():
    # a single r=2 section that spans both covectors generically but
    # collapses at the origin; the frame itself stays independent
    chart = Chart([("x", 0), ("y", 0)])
    x = chart.var("x")
    frame = (section(chart, [[1, 0], [chart.zero(), x]]),)
    anchors = (Derivation(chart, {}, 0),)
    s = PolyPoissonStructure(
        chart, 2, frame, anchors, ((Fraction(0), Fraction(0)),)
    )
    report = check_axioms(s)
    assert not report.nondegenerate.passed
    assert "inconclusive" in report.nondegenerate.witness


def test_bracket_of_constant_frame_sections_vanishes(canonical_structure):
    s = canonical_structure
    out = bracket_sections(s.frame[0], s.frame[1], s)
    assert out.is_zero()


def test_bracket_so3_frame(so3_structure):
    s = so3_structure
    out = bracket_sections(s.frame[0], s.frame[1], s)
    expected = section(s.chart, [[0, 0, 1]])  # dx3
    assert out.coeffs == expected.coeffs


def test_bracket_self_with_closed_section(so3_structure):
    s = so3_structure
    assert bracket_sections(s.frame[2], s.frame[2], s).is_zero()


def test_admissible_examples(canonical_structure):
    s = canonical_structure
    chart = s.chart
    alpha = admissible((chart.var("p1"), chart.var("p2")), s)
    assert isinstance(alpha, AdmissibleFunction)
    assert [c.as_polynomial() for c in alpha.expansion] == [1, 0, 0]
    assert alpha.anchor_field() == coordinate_field(chart, "x")

    const = admissible((chart.const(3), chart.const(-2)), s)
    assert isinstance(const, AdmissibleFunction)
    assert all(c.is_zero() for c in const.expansion)

    bad = admissible((chart.var("p1"), chart.zero()), s)
    assert isinstance(bad, NotAdmissible)
    assert any(not r.is_zero() for r in bad.residual)


def test_admissible_bracket_fixture(canonical_structure):
    s = canonical_structure
    chart = s.chart
    alpha = admissible((chart.var("p1"), chart.var("p2")), s)
    beta = admissible((-chart.var("x"), chart.zero()), s)
    vals = admissible_bracket(alpha, beta)
    assert vals[0] == -1 and vals[1].is_zero()
    # {a, a} = 0 and {a, const} = 0
    assert all(v.is_zero() for v in admissible_bracket(alpha, alpha))
    const = admissible((chart.const(5), chart.const(7)), s)
    assert all(v.is_zero() for v in admissible_bracket(alpha, const))


def test_so3_bracket_is_lie_poisson(so3_structure):
    s = so3_structure
    chart = s.chart
    x1 = admissible((chart.var("x1"),), s)
    x2 = admissible((chart.var("x2"),), s)
    vals = admissible_bracket(x1, x2)
    assert vals[0] == chart.var("x3")


def test_bracket_identities_on_fixtures(canonical_structure, so3_structure):
    chart = canonical_structure.chart
    triples = {
        "canonical": (
            canonical_structure,
            [
                (chart.var("p1"), chart.var("p2")),
                (-chart.var("x"), chart.zero()),
                (chart.zero(), -chart.var("x")),
            ],
        ),
    }
    c3 = so3_structure.chart
    triples["so3"] = (
        so3_structure,
        [(c3.var("x1"),), (c3.var("x2"),), (c3.var("x3"),)],
    )
    for s, raw in triples.values():
        a, b, c = (admissible(v, s) for v in raw)
        assert all(isinstance(f, AdmissibleFunction) for f in (a, b, c))
        assert all(v.is_zero() for v in jacobi_sum(a, b, c))
        for x, y in ((a, b), (b, c), (a, c)):
            assert all(v.is_zero() for v in anchor_morphism_residual(x, y))
            res = differential_compatibility_residual(x, y)
            assert all(v.is_zero() for row in res for v in row)


def test_from_polysymplectic_r1_classical():
    chart = Chart([("x", 0), ("y", 0)])
    sc = ShiftedChart(chart)
    omega = PolyForm((sc.var("dx") * sc.var("dy"),))
    s = from_polysymplectic(omega)
    assert check_axioms(s).passed
    # the induced bracket pairs x and y to a unit
    a = admissible((chart.var("x"),), s)
    b = admissible((chart.var("y"),), s)
    vals = admissible_bracket(a, b)
    assert vals[0] in (chart.one(), -chart.one()) or vals[0] == -1 or vals[0] == 1


def test_from_polysymplectic_canonical_r2(canonical_structure):
    chart = canonical_structure.chart
    sc = ShiftedChart(chart)
    omega = PolyForm(
        (sc.var("dx") * sc.var("dp1"), sc.var("dx") * sc.var("dp2"))
    )
    s = from_polysymplectic(omega, sample_points=((0, 0, 0),))
    assert check_axioms(s).passed
    # frame matches the fixture frame up to the construction's ordering
    assert s.k == 3
    assert s.frame[0].coeffs == canonical_structure.frame[0].coeffs
    assert s.frame[1].coeffs == canonical_structure.frame[1].coeffs
    assert s.frame[2].coeffs == canonical_structure.frame[2].coeffs


def test_from_polysymplectic_not_closed():
    chart = Chart([("x", 0), ("y", 0), ("z", 0)])
    sc = ShiftedChart(chart)
    omega = PolyForm((sc.var("z") * sc.var("dx") * sc.var("dy"),))
    with pytest.raises(NotClosed):
        from_polysymplectic(omega)


def test_from_polysymplectic_degenerate_kernel():
    chart = Chart([("x", 0), ("y", 0), ("z", 0)])
    sc = ShiftedChart(chart)
    w = sc.var("dx") * sc.var("dy")
    with pytest.raises(DegenerateKernel) as err:
        from_polysymplectic(PolyForm((w, w)))
    assert "d/dz" in str(err.value)


def test_bracket_sections_cross_check_with_cartan_engine(so3_structure):
    # same bracket computed on the shifted chart with the graded operators
    s = so3_structure
    sc = ShiftedChart(s.chart)
    from polycartan.cartan import lie_derivative

    for a in range(s.k):
        for b in range(s.k):
            direct = bracket_sections(s.frame[a], s.frame[b], s)
            eta = s.frame[a].to_form(sc)
            gamma = s.frame[b].to_form(sc)
            lhs = lie_derivative(s.anchors[a], gamma) - interior(
                s.anchors[b], de_rham(eta)
            )
            assert SectionTuple.from_form(lhs).coeffs == direct.coeffs
