"""Seeded randomized identity suites for the core calculus.

Used by the command-line ``selftest`` and by the acceptance tests.
Every check is an exact identity over the rationals; a failure returns
a witness string instead of raising so callers can report it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Chart, Derivation, GradedPoly, commutator, partial
from .cartan import ShiftedChart, de_rham, interior, lie_derivative
from .parser import format_poly


@dataclass
class SuiteResult:
    name: str
    cases: int
    failures: list[str]

    @property
    def passed(self) -> bool:
        return not self.failures


def random_chart(rng: random.Random, max_gens: int = 6, degree_span=(-2, 3)) -> Chart:
    n = rng.randint(1, max_gens)
    return Chart(
        [(f"g{i}", rng.randint(degree_span[0], degree_span[1])) for i in range(n)]
    )


def random_poly(
    rng: random.Random,
    chart: Chart,
    max_terms: int = 4,
    max_degree: int = 4,
    coeff_bound: int = 9,
) -> GradedPoly:
    out = chart.zero()
    for _ in range(rng.randint(0, max_terms)):
        size = rng.randint(0, max_degree)
        factors = [rng.choice(chart.names) for _ in range(size)]
        coeff = rng.randint(-coeff_bound, coeff_bound)
        out = out + chart.monomial(coeff, factors)
    return out


def random_derivation(rng: random.Random, chart: Chart, degree: int) -> Derivation:
    comps = {}
    for g in chart.generators:
        want = g.degree + degree
        # assemble a homogeneous component of the right degree
        acc = chart.zero()
        for _ in range(rng.randint(0, 2)):
            term = _random_monomial_of_degree(rng, chart, want)
            if term is not None:
                acc = acc + term
        comps[g.name] = acc
    return Derivation(chart, comps, degree)


def _random_monomial_of_degree(rng, chart, want, tries: int = 25):
    for _ in range(tries):
        size = rng.randint(0, 4)
        factors = [rng.choice(chart.names) for _ in range(size)]
        m = chart.monomial(rng.randint(-9, 9) or 1, factors)
        if not m.is_zero() and m.degree() == want:
            return m
    return None


def algebra_suite(seed: int, cases: int = 500) -> list[SuiteResult]:
    """Graded commutativity, associativity, derivation Leibniz, partials."""
    rng = random.Random(seed)
    comm = SuiteResult("graded-commutativity", cases, [])
    asso = SuiteResult("associativity", cases, [])
    leib = SuiteResult("leibniz", cases, [])
    part = SuiteResult("partial-commutation", cases, [])
    for _ in range(cases):
        chart = random_chart(rng)
        f = random_poly(rng, chart)
        g = random_poly(rng, chart)
        h = random_poly(rng, chart)

        # commutativity on homogeneous pieces: fg = (-1)^{|f||g|} gf
        for df, fp in f.homogeneous_parts().items():
            for dg, gp in g.homogeneous_parts().items():
                sign = -1 if (df & 1) and (dg & 1) else 1
                if fp * gp != sign * (gp * fp):
                    comm.failures.append(format_poly(fp * gp - sign * (gp * fp)))
        if (f * g) * h != f * (g * h):
            asso.failures.append(format_poly((f * g) * h - f * (g * h)))

        deg = rng.randint(-2, 2)
        x = random_derivation(rng, chart, deg)
        for df, fp in f.homogeneous_parts().items():
            sign = -1 if (deg & 1) and (df & 1) else 1
            res = x(fp * g) - (x(fp) * g + sign * (fp * x(g)))
            if not res.is_zero():
                leib.failures.append(format_poly(res))

        a = rng.choice(chart.names)
        b = rng.choice(chart.names)
        sign = -1 if chart.gen(a).parity and chart.gen(b).parity else 1
        res = partial(partial(f, a), b) - sign * partial(partial(f, b), a)
        if not res.is_zero():
            part.failures.append(format_poly(res))
    return [comm, asso, leib, part]


def cartan_suite(seed: int, cases: int = 200) -> list[SuiteResult]:
    """d^2 = 0, Cartan magic formula, [L_X, i_Y] = i_{[X,Y]}."""
    rng = random.Random(seed)
    dd = SuiteResult("d-squared", cases, [])
    magic = SuiteResult("cartan-magic", cases, [])
    lixy = SuiteResult("lie-interior", cases, [])
    for _ in range(cases):
        base = random_chart(rng, max_gens=3, degree_span=(-1, 2))
        chart = ShiftedChart(base)
        f = random_poly(rng, chart, max_terms=3, max_degree=3)

        res = de_rham(de_rham(f))
        if not res.is_zero():
            dd.failures.append(format_poly(res))

        dx = rng.randint(-1, 2)
        x = random_derivation(rng, base, dx)
        # L_X = i_X d + (-1)^{|X|} d i_X, checked against the
        # component-level derivation it must equal on generators
        lhs = lie_derivative(x, f)
        sign = -1 if dx & 1 else 1
        rhs = interior(x, de_rham(f)) + sign * de_rham(interior(x, f))
        if lhs != rhs:
            magic.failures.append(format_poly(lhs - rhs))

        dy = rng.randint(-1, 2)
        y = random_derivation(rng, base, dy)
        from .cartan import interior_derivation

        ix = interior_derivation(x, chart)
        # [L_X, i_Y] = i_{[X,Y]} as operators on a random form
        lx_iy = lie_derivative(x, interior(y, f))
        sgn = -1 if (dx & 1) and ((dy - 1) & 1) else 1
        iy_lx = interior(y, lie_derivative(x, f))
        lhs2 = lx_iy - sgn * iy_lx
        rhs2 = interior(commutator(x, y), f)
        if lhs2 != rhs2:
            lixy.failures.append(format_poly(lhs2 - rhs2))
    return [dd, magic, lixy]
