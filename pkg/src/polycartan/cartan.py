"""Differential forms on graded charts via the shifted-tangent model.

Forms on a chart are functions on its shifted chart: each generator x
gains a companion dx with algebra degree deg(x)+1 and internal degree
deg(x).  The wedge product is the graded product, d is the odd
derivation x -> dx, and the interior product along a base vector field
X is the derivation with i_X(x) = 0, i_X(dx) = X(x).  Every other sign
(Cartan formula, L_E homogeneity, d^2 = 0) is a consequence.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    Chart,
    ChartError,
    DegreeError,
    Derivation,
    Generator,
    GradedPoly,
    commutator,
    promote,
)


class ShiftedChart(Chart):
    """Base chart followed by its d-generators, in base order."""

    def __init__(self, base: Chart):
        if isinstance(base, ShiftedChart):
            raise ChartError("iterated shifted charts are not supported")
        shifted = tuple(
            Generator("d" + g.name, g.degree + 1, g.internal_degree)
            for g in base.generators
        )
        super().__init__(base.generators + shifted)
        self.base = base

    def d_name(self, name: str) -> str:
        self.base.index(name)
        return "d" + name

    def is_d_generator(self, name: str) -> bool:
        return self.index(name) >= len(self.base)

    def base_name(self, dname: str) -> str:
        if not self.is_d_generator(dname):
            raise ChartError(f"{dname!r} is not a d-generator")
        return dname[1:]


@dataclass(frozen=True)
class PolyForm:
    """R^r-valued form: a tuple of functions on one shifted chart."""

    components: tuple[GradedPoly, ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("a PolyForm needs at least one component")
        chart = self.components[0].chart
        if not isinstance(chart, ShiftedChart):
            raise ChartError("PolyForm components must live on a shifted chart")
        for c in self.components:
            if c.chart != chart:
                raise ChartError("components live on different charts")

    @property
    def chart(self) -> ShiftedChart:
        return self.components[0].chart

    @property
    def r(self) -> int:
        return len(self.components)

    def form_degrees(self) -> set[int]:
        chart = self.chart
        n = len(chart.base)
        out = set()
        for c in self.components:
            for m in c.terms:
                out.add(sum(m[n:]))
        return out

    def form_degree(self) -> int | None:
        degs = self.form_degrees()
        return degs.pop() if len(degs) == 1 else None

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other: "PolyForm") -> "PolyForm":
        if self.r != other.r:
            raise ValueError("component counts differ")
        return PolyForm(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + (-other)

    def __neg__(self) -> "PolyForm":
        return PolyForm(tuple(-c for c in self.components))

    def __mul__(self, scalar) -> "PolyForm":
        return PolyForm(tuple(c * scalar for c in self.components))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyForm):
            return NotImplemented
        return self.components == other.components

    def __repr__(self) -> str:
        from .parser import format_poly

        inner = " | ".join(format_poly(c) for c in self.components)
        return f"<({inner})>"


def d_operator(chart: ShiftedChart) -> Derivation:
    """The de Rham derivation x -> dx, dx -> 0 on a shifted chart."""
    comps = {}
    for g in chart.base.generators:
        comps[g.name] = chart.var(chart.d_name(g.name))
    return Derivation(chart, comps, 1)


def de_rham(x: PolyForm | GradedPoly):
    if isinstance(x, GradedPoly):
        if not isinstance(x.chart, ShiftedChart):
            raise ChartError("de_rham expects a function on a shifted chart")
        return d_operator(x.chart)(x)
    d = d_operator(x.chart)
    return PolyForm(tuple(d(c) for c in x.components))


def interior_derivation(x: Derivation, chart: ShiftedChart) -> Derivation:
    """Contraction i_X as a derivation on the shifted chart."""
    if x.chart != chart.base:
        raise ChartError("vector field must live on the base chart")
    comps = {}
    for g in chart.base.generators:
        val = x.on(g.name)
        if not val.is_zero():
            comps[chart.d_name(g.name)] = promote(val, chart)
    degree = None if x.degree is None else x.degree - 1
    return Derivation(chart, comps, degree)


def interior(x: Derivation, form: PolyForm | GradedPoly):
    if isinstance(form, GradedPoly):
        chart = form.chart
        if not isinstance(chart, ShiftedChart):
            raise ChartError("interior expects a form on a shifted chart")
        return interior_derivation(x, chart)(form)
    i_x = interior_derivation(x, form.chart)
    return PolyForm(tuple(i_x(c) for c in form.components))


def lie_derivative(x: Derivation, form: PolyForm | GradedPoly):
    """Graded Cartan formula L_X = [i_X, d] = i_X d + (-1)^{|X|} d i_X."""
    if x.degree is None:
        raise DegreeError("Lie derivative needs a homogeneous vector field")
    sign = -1 if x.degree & 1 else 1
    if isinstance(form, GradedPoly):
        return interior(x, de_rham(form)) + sign * de_rham(interior(x, form))
    return interior(x, de_rham(form)) + sign * de_rham(interior(x, form))


def euler(chart: Chart) -> Derivation:
    """Euler field: multiplies each generator by its internal degree."""
    comps = {}
    for g in chart.generators:
        w = g.internal_degree
        if w:
            comps[g.name] = chart.var(g.name) * w
    return Derivation(chart, comps, 0)


@dataclass(frozen=True)
class CohomologyCertificate:
    """Outcome of the cohomological-field check with failure witnesses."""

    ok: bool
    degree_ok: bool
    square: dict[str, GradedPoly]

    def __bool__(self) -> bool:
        return self.ok


def is_cohomological(q: Derivation) -> CohomologyCertificate:
    """True iff deg(Q) = +1 and [Q, Q] = 0; carries [Q,Q] as witness."""
    degree_ok = q.degree == 1
    if not degree_ok:
        return CohomologyCertificate(False, False, {})
    square = commutator(q, q)
    bad = {n: v for n, v in square.components.items() if not v.is_zero()}
    return CohomologyCertificate(not bad, True, bad)


def one_form_coefficients(f: GradedPoly) -> dict[str, GradedPoly]:
    """Write a form-degree-1 function as sum dg * A_g with dg leftmost.

    Returns the map base-generator-name -> A_g.  Raises if any term does
    not contain exactly one d-generator.
    """
    chart = f.chart
    if not isinstance(chart, ShiftedChart):
        raise ChartError("expected a function on a shifted chart")
    n = len(chart.base)
    out: dict[str, dict] = {}
    for mono, c in f.terms.items():
        d_slots = [i for i in range(n, len(chart)) if mono[i]]
        if len(d_slots) != 1 or mono[d_slots[0]] != 1:
            raise ValueError("term is not of form degree one")
        i = d_slots[0]
        # sign from moving the d-generator to the front past earlier factors
        if chart.generators[i].parity:
            crossings = sum(mono[j] for j in chart._odd if j < i)
            sign = -1 if crossings & 1 else 1
        else:
            sign = 1
        m2 = mono[:i] + (0,) + mono[i + 1 :]
        name = chart.generators[i].name[1:]
        slot = out.setdefault(name, {})
        s = slot.get(m2, 0) + sign * c
        if s:
            slot[m2] = s
        else:
            del slot[m2]
    return {name: GradedPoly(chart, terms) for name, terms in out.items() if terms}


def two_form_constant_matrix(f: GradedPoly) -> dict[tuple[str, str], "Fraction"]:
    """Constant coefficients of a 2-form: f = sum W_{ab} dg_a dg_b, a < b.

    Raises when a term has a non-constant prefactor or is not quadratic
    in the d-generators.
    """
    chart = f.chart
    if not isinstance(chart, ShiftedChart):
        raise ChartError("expected a function on a shifted chart")
    n = len(chart.base)
    out: dict[tuple[str, str], object] = {}
    for mono, c in f.terms.items():
        if any(mono[:n]):
            raise ValueError("two-form has a non-constant coefficient term")
        d_slots = [i for i in range(n, len(chart)) for _ in range(mono[i])]
        if len(d_slots) != 2:
            raise ValueError("term is not of form degree two")
        a, b = d_slots
        key = (chart.generators[a].name, chart.generators[b].name)
        out[key] = out.get(key, 0) + c
    return {k: v for k, v in out.items() if v}
