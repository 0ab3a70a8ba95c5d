"""Poly-Poisson structures on ordinary charts, with exact axiom checks.

A structure of order r is a frame of R^r-valued one-forms (sections of
S inside the r-fold sum of cotangent spaces) together with one anchor
vector field per frame section.  The three defining conditions are
verified exactly over the rationals:

  (i)   the pairing i_{P(eta_a)} eta_b is antisymmetric (polarized form
        of the quadratic condition),
  (ii)  the sections annihilate no tangent vector: the stacked
        coefficient matrix has full column rank, generically and at
        user-supplied sample points,
  (iii) the section bracket closes on the frame (expansion solved over
        the fraction field) and satisfies the Jacobi identity on all
        frame triples.

Rational-function coefficients appear only as expansion solutions;
their denominators are kept and reported, never cleared.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .algebra import Chart, ChartError, Derivation, GradedPoly, partial
from .cartan import PolyForm, ShiftedChart, de_rham, interior, one_form_coefficients
from .linsolve import (
    PolySolve,
    RatFunc,
    nullspace_poly,
    rank_at_point,
    rank_poly,
    solve_poly,
)
from .parser import format_poly
from .report import CheckResult


class FrameDependent(ValueError):
    """The frame sections are linearly dependent at the generic point."""


class NoExpansion(ValueError):
    """A section required an expansion over the frame and has none."""


class RationalCoefficients(ValueError):
    """A computation required polynomial data but met true denominators."""


# -- sections -----------------------------------------------------------------


@dataclass(frozen=True)
class SectionTuple:
    """R^r-valued one-form with polynomial coefficients.

    ``coeffs[j][i]`` is the coefficient of dx_i in the j-th slot.
    """

    chart: Chart
    coeffs: tuple[tuple[GradedPoly, ...], ...]

    def __post_init__(self):
        for row in self.coeffs:
            if len(row) != len(self.chart):
                raise ValueError("coefficient row length differs from chart dimension")
            for entry in row:
                if entry.chart != self.chart:
                    raise ChartError("section coefficients on the wrong chart")

    @property
    def r(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.coeffs for e in row)

    def __add__(self, other: "SectionTuple") -> "SectionTuple":
        return SectionTuple(
            self.chart,
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.coeffs, other.coeffs)
            ),
        )

    def __sub__(self, other: "SectionTuple") -> "SectionTuple":
        return self + (-other)

    def __neg__(self) -> "SectionTuple":
        return SectionTuple(
            self.chart, tuple(tuple(-e for e in row) for row in self.coeffs)
        )

    def __mul__(self, scalar) -> "SectionTuple":
        return SectionTuple(
            self.chart, tuple(tuple(e * scalar for e in row) for row in self.coeffs)
        )

    __rmul__ = __mul__

    def to_form(self, shifted: ShiftedChart) -> PolyForm:
        from .algebra import promote

        comps = []
        for row in self.coeffs:
            acc = shifted.zero()
            for name, entry in zip(self.chart.names, row):
                acc = acc + promote(entry, shifted) * shifted.var("d" + name)
            comps.append(acc)
        return PolyForm(tuple(comps))

    @classmethod
    def from_form(cls, form: PolyForm) -> "SectionTuple":
        chart = form.chart.base
        rows = []
        for comp in form.components:
            coeffs = one_form_coefficients(comp) if not comp.is_zero() else {}
            row = []
            for name in chart.names:
                entry = coeffs.get(name, form.chart.zero())
                from .algebra import restrict

                row.append(restrict(entry, chart))
            rows.append(tuple(row))
        return cls(chart, tuple(rows))

    def __repr__(self) -> str:
        rows = []
        for row in self.coeffs:
            parts = [
                f"{format_poly(e)}*d{n}"
                for n, e in zip(self.chart.names, row)
                if not e.is_zero()
            ]
            rows.append(" + ".join(parts) or "0")
        return "<(" + " | ".join(rows) + ")>"


# -- coordinate calculus, generic over GradedPoly / RatFunc scalars -----------


def _contract(x_comps, w_row, zero):
    acc = zero
    for xi, wi in zip(x_comps, w_row):
        acc = acc + xi * wi
    return acc


def _diff(scalar, name):
    if isinstance(scalar, GradedPoly):
        return partial(scalar, name)
    return scalar.diff(name)


def _lie_one_form(x_comps, w_row, names, zero):
    """(L_X w)_m = sum_i (X^i d_i w_m + w_i d_m X^i)."""
    out = []
    for m, nm in enumerate(names):
        acc = zero
        for i, ni in enumerate(names):
            acc = acc + x_comps[i] * _diff(w_row[m], ni)
            acc = acc + w_row[i] * _diff(x_comps[i], nm)
        out.append(acc)
    return out


def _ix_d_one_form(x_comps, w_row, names, zero):
    """(i_X dw)_k = sum_i X^i (d_i w_k - d_k w_i)."""
    out = []
    for k, nk in enumerate(names):
        acc = zero
        for i, ni in enumerate(names):
            acc = acc + x_comps[i] * (_diff(w_row[k], ni) - _diff(w_row[i], nk))
        out.append(acc)
    return out


def _bracket_rows(eta_rows, gamma_rows, p_eta, p_gamma, names, zero):
    """Slotwise L_{P eta} gamma - i_{P gamma} d eta on coefficient rows."""
    out = []
    for w_eta, w_gamma in zip(eta_rows, gamma_rows):
        lie = _lie_one_form(p_eta, w_gamma, names, zero)
        ixd = _ix_d_one_form(p_gamma, w_eta, names, zero)
        out.append([a - b for a, b in zip(lie, ixd)])
    return out


def _anchor_components(anchor: Derivation) -> list[GradedPoly]:
    return [anchor.on(name) for name in anchor.chart.names]


# -- the structure ------------------------------------------------------------


@dataclass(frozen=True)
class PolyPoissonStructure:
    chart: Chart
    r: int
    frame: tuple[SectionTuple, ...]
    anchors: tuple[Derivation, ...]
    sample_points: tuple[tuple[Fraction, ...], ...] = ()

    def __post_init__(self):
        if any(g.degree != 0 for g in self.chart.generators):
            raise ChartError("poly-Poisson charts carry degree-zero coordinates only")
        if len(self.frame) != len(self.anchors):
            raise ValueError("frame and anchor counts differ")
        for sec in self.frame:
            if sec.chart != self.chart or sec.r != self.r:
                raise ValueError("section shape does not match the structure")
        for anc in self.anchors:
            if anc.chart != self.chart:
                raise ChartError("anchor on the wrong chart")
        for pt in self.sample_points:
            if len(pt) != len(self.chart):
                raise ValueError("sample point dimension mismatch")

    @property
    def k(self) -> int:
        return len(self.frame)

    def point_values(self, pt: tuple[Fraction, ...]) -> dict[str, Fraction]:
        return dict(zip(self.chart.names, pt))

    def frame_matrix(self) -> list[list[GradedPoly]]:
        """k x (r*n) matrix: each section flattened row-major by slots."""
        return [
            [e for row in sec.coeffs for e in row]
            for sec in self.frame
        ]

    def section_from_coeffs(self, coeffs: Sequence) -> SectionTuple:
        """Linear combination sum_a coeffs[a] * frame[a] (polynomial only)."""
        out = None
        for c, sec in zip(coeffs, self.frame):
            if isinstance(c, RatFunc):
                p = c.as_polynomial()
                if p is None:
                    raise RationalCoefficients(
                        "combination has a non-polynomial coefficient"
                    )
                c = p
            term = sec * c
            out = term if out is None else out + term
        assert out is not None
        return out


@dataclass
class AxiomReport:
    skew: CheckResult
    nondegenerate: CheckResult
    closure: CheckResult
    jacobi: CheckResult
    structure_functions: list[list[list[RatFunc]]] | None = None

    @property
    def checks(self) -> list[CheckResult]:
        return [self.skew, self.nondegenerate, self.closure, self.jacobi]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _format_tuple_of(values) -> str:
    return "(" + ", ".join(repr(v)[1:-1] if hasattr(v, "chart") else str(v) for v in values) + ")"


def pairing(structure: PolyPoissonStructure, a: int, b: int) -> list[GradedPoly]:
    """i_{P(eta_a)} eta_b as an r-tuple of polynomials."""
    x = _anchor_components(structure.anchors[a])
    zero = structure.chart.zero()
    return [_contract(x, row, zero) for row in structure.frame[b].coeffs]


def check_frame_independent(structure: PolyPoissonStructure):
    m = structure.frame_matrix()
    if rank_poly(m, structure.chart) < structure.k:
        raise FrameDependent("frame sections are generically dependent")
    for pt in structure.sample_points:
        if rank_at_point(m, structure.point_values(pt)) < structure.k:
            raise FrameDependent(f"frame sections are dependent at {pt}")


def closure_expansion(structure: PolyPoissonStructure):
    """Expand every frame bracket over the frame.

    Returns (f, brackets, failures): f[a][b][c] are the expansion
    coefficients of the bracket of frame sections a, b; failures lists
    (a, b, residual) witnesses.
    """
    chart = structure.chart
    names = chart.names
    zero = chart.zero()
    k = structure.k
    anchors = [_anchor_components(x) for x in structure.anchors]
    columns = structure.frame_matrix()
    matrix = [[columns[c][row] for c in range(k)] for row in range(len(columns[0]))]
    f = [[None] * k for _ in range(k)]
    brackets = [[None] * k for _ in range(k)]
    failures = []
    for a in range(k):
        for b in range(k):
            rows = _bracket_rows(
                structure.frame[a].coeffs,
                structure.frame[b].coeffs,
                anchors[a],
                anchors[b],
                names,
                zero,
            )
            brackets[a][b] = rows
            flat = [rows[j][i] for j in range(structure.r) for i in range(len(names))]
            out = solve_poly(matrix, flat, chart)
            if out.solution is None:
                failures.append((a, b, out.residual))
            else:
                f[a][b] = out.solution
    return f, brackets, failures


def check_axioms(structure: PolyPoissonStructure) -> AxiomReport:
    check_frame_independent(structure)
    chart = structure.chart
    names = chart.names
    zero = chart.zero()
    k = structure.k

    # (i) polarized skewness of the pairing
    skew_witness = None
    for a in range(k):
        for b in range(a, k):
            res = [
                u + v for u, v in zip(pairing(structure, a, b), pairing(structure, b, a))
            ]
            if any(not x.is_zero() for x in res):
                skew_witness = (
                    f"pair (a,b)=({a + 1},{b + 1}): residual "
                    f"({', '.join(format_poly(x) for x in res)})"
                )
                break
        if skew_witness:
            break
    skew = CheckResult("axiom-i-skew-pairing", skew_witness is None, skew_witness)

    # (ii) trivial annihilator: stacked coefficients have full column rank
    n = len(names)
    stacked = [
        [sec.coeffs[j][i] for i in range(n)]
        for sec in structure.frame
        for j in range(structure.r)
    ]
    generic = rank_poly(stacked, chart)
    nd_witness = None
    if generic < n:
        kernel = nullspace_poly(stacked, chart)
        vec = kernel[0] if kernel else []
        nd_witness = (
            f"generic rank {generic} < {n}; kernel direction "
            f"({', '.join(repr(v)[1:-1] for v in vec)})"
        )
    else:
        for pt in structure.sample_points:
            if rank_at_point(stacked, structure.point_values(pt)) < n:
                nd_witness = f"rank inconclusive: drops at sample point {tuple(map(str, pt))}"
                break
    nondeg = CheckResult("axiom-ii-nondegenerate", nd_witness is None, nd_witness)

    # (iii) closure under the bracket ...
    f, brackets, failures = closure_expansion(structure)
    if failures:
        a, b, residual = failures[0]
        closure = CheckResult(
            "axiom-iii-closure",
            False,
            f"bracket of sections {a + 1},{b + 1} leaves the span; residual "
            f"({', '.join(repr(v)[1:-1] for v in residual)})",
        )
        return AxiomReport(skew, nondeg, closure, CheckResult("axiom-iii-jacobi", False, "skipped: no expansion"))
    closure = CheckResult("axiom-iii-closure", True, None)

    # ... and the Jacobi identity on frame triples, computed over the
    # fraction field with the Leibniz rule for function coefficients
    anchors = [_anchor_components(x) for x in structure.anchors]
    rat_anchors = [[RatFunc(c) for c in comps] for comps in anchors]
    rzero = RatFunc(zero)
    rat_frame = [
        [[RatFunc(e) for e in row] for row in sec.coeffs] for sec in structure.frame
    ]
    rat_brackets = [
        [[[RatFunc(e) for e in row] for row in brackets[a][b]] for b in range(k)]
        for a in range(k)
    ]

    def bracket_with_combination(a: int, coeffs):
        # bracket of frame section a with sum_d coeffs[d] * eta_d
        rows = [[rzero] * n for _ in range(structure.r)]
        for d in range(k):
            c = coeffs[d]
            if c.is_zero():
                continue
            for j in range(structure.r):
                for i in range(n):
                    rows[j][i] = rows[j][i] + c * rat_brackets[a][d][j][i]
            # Leibniz term (P(eta_a) c) * eta_d
            pc = rzero
            for i, nm in enumerate(names):
                pc = pc + rat_anchors[a][i] * c.diff(nm)
            if not pc.is_zero():
                for j in range(structure.r):
                    for i in range(n):
                        rows[j][i] = rows[j][i] + pc * rat_frame[d][j][i]
        return rows

    jac_witness = None
    for a, b, c in combinations(range(k), 3):
        total = [[rzero] * n for _ in range(structure.r)]
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            rows = bracket_with_combination(x, f[y][z])
            for j in range(structure.r):
                for i in range(n):
                    total[j][i] = total[j][i] + rows[j][i]
        if any(not total[j][i].is_zero() for j in range(structure.r) for i in range(n)):
            parts = []
            for j in range(structure.r):
                row = " + ".join(
                    f"({repr(total[j][i])[1:-1]})*d{names[i]}"
                    for i in range(n)
                    if not total[j][i].is_zero()
                )
                parts.append(row or "0")
            jac_witness = (
                f"triple ({a + 1},{b + 1},{c + 1}): jacobiator ("
                + " | ".join(parts)
                + ")"
            )
            break
    jacobi = CheckResult("axiom-iii-jacobi", jac_witness is None, jac_witness)
    return AxiomReport(skew, nondeg, closure, jacobi, f)


# -- brackets on sections and admissible functions ----------------------------


def expand_over_frame(section: SectionTuple, structure: PolyPoissonStructure) -> PolySolve:
    columns = structure.frame_matrix()
    matrix = [
        [columns[c][row] for c in range(structure.k)]
        for row in range(len(columns[0]))
    ]
    flat = [e for row in section.coeffs for e in row]
    return solve_poly(matrix, flat, structure.chart)


def bracket_sections(
    eta: SectionTuple, gamma: SectionTuple, structure: PolyPoissonStructure
) -> SectionTuple:
    """L_{P(eta)} gamma - i_{P(gamma)} d eta, with P extended over the frame."""
    chart = structure.chart
    names = chart.names
    zero = chart.zero()

    def anchor_of(section: SectionTuple) -> list[GradedPoly]:
        out = expand_over_frame(section, structure)
        if out.solution is None:
            raise NoExpansion("section is not in the span of the frame")
        comps = [zero] * len(names)
        for c, anchor in zip(out.solution, structure.anchors):
            p = c.as_polynomial()
            if p is None:
                raise RationalCoefficients(
                    "anchor extension needs a non-polynomial coefficient; "
                    f"denominator {format_poly(c.den)}"
                )
            for i, name in enumerate(names):
                comps[i] = comps[i] + p * anchor.on(name)
        return comps

    rows = _bracket_rows(
        eta.coeffs, gamma.coeffs, anchor_of(eta), anchor_of(gamma), names, zero
    )
    return SectionTuple(chart, tuple(tuple(row) for row in rows))


@dataclass(frozen=True)
class AdmissibleFunction:
    """R^r-valued function whose differential lies in the span of the frame."""

    values: tuple[GradedPoly, ...]
    expansion: tuple[RatFunc, ...]
    structure: PolyPoissonStructure

    def differential(self) -> SectionTuple:
        chart = self.structure.chart
        return SectionTuple(
            chart,
            tuple(
                tuple(partial(v, name) for name in chart.names) for v in self.values
            ),
        )

    def anchor_components(self) -> list[RatFunc]:
        chart = self.structure.chart
        comps = [RatFunc(chart.zero())] * len(chart)
        for c, anchor in zip(self.expansion, self.structure.anchors):
            for i, name in enumerate(chart.names):
                comps[i] = comps[i] + c * RatFunc(anchor.on(name))
        return comps

    def anchor_field(self) -> Derivation:
        """P(d alpha) as a Derivation; requires polynomial components."""
        chart = self.structure.chart
        comps = {}
        for name, c in zip(chart.names, self.anchor_components()):
            p = c.as_polynomial()
            if p is None:
                raise RationalCoefficients(
                    f"anchor component for {name} has denominator "
                    f"{format_poly(c.den)}"
                )
            comps[name] = p
        return Derivation(chart, comps, 0)


@dataclass(frozen=True)
class NotAdmissible:
    """Witness that d alpha lies outside the span of the frame."""

    values: tuple[GradedPoly, ...]
    residual: tuple[RatFunc, ...]

    def __bool__(self) -> bool:
        return False


def admissible(
    alpha: Sequence[GradedPoly], structure: PolyPoissonStructure
) -> AdmissibleFunction | NotAdmissible:
    if len(alpha) != structure.r:
        raise ValueError("component count differs from the structure order")
    chart = structure.chart
    d_alpha = SectionTuple(
        chart,
        tuple(tuple(partial(v, name) for name in chart.names) for v in alpha),
    )
    out = expand_over_frame(d_alpha, structure)
    if out.solution is None:
        return NotAdmissible(tuple(alpha), tuple(out.residual))
    return AdmissibleFunction(tuple(alpha), tuple(out.solution), structure)


def bracket_with(adm: AdmissibleFunction, values: Sequence) -> list[RatFunc]:
    """i_{P(d alpha)} d(values) for an arbitrary R^r-valued function."""
    chart = adm.structure.chart
    x = adm.anchor_components()
    out = []
    for v in values:
        v = RatFunc.coerce(v, chart)
        acc = RatFunc(chart.zero())
        for xi, name in zip(x, chart.names):
            acc = acc + xi * v.diff(name)
        out.append(acc)
    return out


def admissible_bracket(
    alpha: AdmissibleFunction, beta: AdmissibleFunction, structure=None
) -> list[RatFunc]:
    return bracket_with(alpha, beta.values)


def jacobi_sum(
    alpha: AdmissibleFunction,
    beta: AdmissibleFunction,
    gamma: AdmissibleFunction,
) -> list[RatFunc]:
    """{a,{b,c}} + {b,{c,a}} + {c,{a,b}}, identically zero on poly-Poisson."""
    chart = alpha.structure.chart
    total = [RatFunc(chart.zero())] * alpha.structure.r
    for x, y, z in ((alpha, beta, gamma), (beta, gamma, alpha), (gamma, alpha, beta)):
        inner = bracket_with(y, z.values)
        outer = bracket_with(x, inner)
        total = [t + o for t, o in zip(total, outer)]
    return total


def anchor_morphism_residual(
    alpha: AdmissibleFunction, beta: AdmissibleFunction
) -> list[RatFunc]:
    """Components of [P(d a), P(d b)] - P(d {a, b})."""
    structure = alpha.structure
    chart = structure.chart
    names = chart.names
    x = alpha.anchor_components()
    y = beta.anchor_components()
    commutator_comps = []
    for i in range(len(names)):
        acc = RatFunc(chart.zero())
        for m, nm in enumerate(names):
            acc = acc + x[m] * y[i].diff(nm) - y[m] * x[i].diff(nm)
        commutator_comps.append(acc)

    bracket_vals = admissible_bracket(alpha, beta)
    polys = []
    for v in bracket_vals:
        p = v.as_polynomial()
        if p is None:
            raise RationalCoefficients("bracket value has a true denominator")
        polys.append(p)
    adm = admissible(polys, structure)
    if isinstance(adm, NotAdmissible):
        raise NoExpansion("bracket of admissible functions failed to be admissible")
    z = adm.anchor_components()
    return [a - b for a, b in zip(commutator_comps, z)]


def differential_compatibility_residual(
    alpha: AdmissibleFunction, beta: AdmissibleFunction
) -> list[list[RatFunc]]:
    """d {a, b} - bracket(d a, d b), as an r x n matrix of residuals."""
    structure = alpha.structure
    chart = structure.chart
    names = chart.names
    vals = admissible_bracket(alpha, beta)
    d_vals = [[v.diff(nm) for nm in names] for v in vals]

    rows = _bracket_rows(
        alpha.differential().coeffs,
        beta.differential().coeffs,
        [c for c in alpha.anchor_components()],
        [c for c in beta.anchor_components()],
        names,
        RatFunc(chart.zero()),
    )
    return [
        [d_vals[j][i] - rows[j][i] for i in range(len(names))]
        for j in range(structure.r)
    ]


# -- poly-symplectic to poly-Poisson ------------------------------------------


class NotClosed(ValueError):
    def __init__(self, j: int, witness: str):
        super().__init__(f"form {j + 1} is not closed: d omega = {witness}")
        self.j = j


class DegenerateKernel(ValueError):
    def __init__(self, witness: str):
        super().__init__(f"common kernel is nonzero: {witness}")
        self.witness = witness


def from_polysymplectic(
    omega: PolyForm, sample_points: Sequence[tuple[Fraction, ...]] = ()
) -> PolyPoissonStructure:
    """Canonical structure of an R^r-valued symplectic tuple.

    The frame consists of the coordinate contractions, the anchors are
    the coordinate fields, so P(i_X omega) = X by construction.
    """
    shifted = omega.chart
    chart = shifted.base
    if any(g.degree != 0 for g in chart.generators):
        raise ChartError("expected an all-degree-zero chart")
    from .algebra import coordinate_field

    for j, comp in enumerate(omega.components):
        d = de_rham(comp)
        if not d.is_zero():
            raise NotClosed(j, format_poly(d))

    frame = []
    for name in chart.names:
        contraction = interior(coordinate_field(chart, name), omega)
        frame.append(SectionTuple.from_form(contraction))

    n = len(chart)
    stacked_cols = [
        [sec.coeffs[j][i] for j in range(omega.r) for i in range(n)]
        for sec in frame
    ]
    # kernel of X -> i_X omega: combination sum u_m (i_{d/dx_m} omega) = 0
    matrix = [
        [stacked_cols[m][row] for m in range(n)]
        for row in range(omega.r * n)
    ]
    if rank_poly(matrix, chart) < n:
        kernel = nullspace_poly(matrix, chart)
        vec = kernel[0]
        parts = [
            f"({repr(v)[1:-1]})*d/d{nm}"
            for v, nm in zip(vec, chart.names)
            if not v.is_zero()
        ]
        raise DegenerateKernel(" + ".join(parts))

    anchors = tuple(coordinate_field(chart, name) for name in chart.names)
    return PolyPoissonStructure(
        chart=chart,
        r=omega.r,
        frame=tuple(frame),
        anchors=anchors,
        sample_points=tuple(tuple(Fraction(x) for x in pt) for pt in sample_points),
    )
