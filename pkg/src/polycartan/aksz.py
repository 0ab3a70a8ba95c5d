"""Discrete AKSZ machinery on simplicial sources.

Mapping spaces are modeled by finite charts: every target coordinate g
and every cell c of the source contributes a field generator g_c of
degree deg(g) - dim(c).  Pullback along evaluation is implemented by a
superfield substitution: over an edge with anchor vertex v the
coordinate g becomes g_v + theta * g_e in an auxiliary chart with one
extra odd generator theta, forms gain their differentials through the
auxiliary de Rham operator, and the pushforward along the fundamental
chain is Berezinian extraction of the top theta coefficient.  Because
the substitution is an honest morphism of graded commutative algebras
and extraction commutes with the differential, the chain-map property
d(T alpha) = T(d alpha) holds exactly, on every complex.

The one genuine convention is which endpoint of a cell anchors the
superfield ("source" is shipped; "target" is the mirror).  The gauge
machinery carries a second flag for the anchor-Jacobian term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import (
    Chart,
    ChartError,
    Derivation,
    Generator,
    GradedPoly,
    commutator,
    partial,
    partial_right,
    promote,
    restrict,
    substitute,
)
from .cartan import (
    CohomologyCertificate,
    PolyForm,
    ShiftedChart,
    d_operator,
    de_rham,
    euler,
    interior,
    is_cohomological,
    lie_derivative,
)
from .linsolve import RatFunc
from .parser import format_poly
from .poisson import (
    NoExpansion,
    PolyPoissonStructure,
    RationalCoefficients,
    closure_expansion,
    pairing,
)
from .polysymplectic import (
    NotExact,
    UnsupportedOmega,
    constant_kernel,
    hamiltonian_solve,
    liouville_primitive,
)
from .simplicial import ComplexError, SimplicialSource


@dataclass(frozen=True)
class Convention:
    """Superfield anchor choice: expand cells from their source or target."""

    anchor: str = "source"

    def __post_init__(self):
        if self.anchor not in ("source", "target"):
            raise ValueError("anchor must be 'source' or 'target'")


DEFAULT_CONVENTION = Convention("source")
CONVENTIONS = {
    "source": DEFAULT_CONVENTION,
    "target": Convention("target"),
}


class NotHamiltonian(ValueError):
    pass


def berezin_integrate(f: GradedPoly, odd_vars: Sequence[str]) -> GradedPoly:
    """Iterated odd integration; the first listed variable integrates first.

    Each step extracts the right coefficient of the variable, so the
    single-variable rule sends a + b*xi to b.
    """
    for name in odd_vars:
        if not f.chart.gen(name).parity:
            raise ChartError(f"generator {name!r} is even; Berezin needs odd variables")
        f = partial_right(f, name)
    return f


class MappingChart:
    """Finite chart of maps from a simplicial source into a target chart."""

    def __init__(self, source: SimplicialSource, target: Chart):
        self.source = source
        self.target = target
        gens = []
        for g in target.generators:
            for cell in source.cells():
                gens.append(Generator(f"{g.name}_{cell}", g.degree - source.dim_of(cell)))
        self.chart = Chart(gens)
        self.shifted = ShiftedChart(self.chart)

    def field_name(self, gname: str, cell: str) -> str:
        self.target.index(gname)
        self.source.dim_of(cell)
        return f"{gname}_{cell}"

    def field(self, gname: str, cell: str) -> GradedPoly:
        return self.chart.var(self.field_name(gname, cell))


class _CellEvaluator:
    """Per-cell superfield substitution and Berezin extraction."""

    def __init__(self, mchart: MappingChart, convention: Convention):
        self.mchart = mchart
        self.convention = convention
        self._aux: dict[int, tuple[Chart, Derivation]] = {}

    def _aux_chart(self, n_theta: int) -> tuple[Chart, Derivation]:
        if n_theta not in self._aux:
            gens = tuple(self.mchart.shifted.generators) + tuple(
                Generator(f"_theta{i + 1}", 1) for i in range(n_theta)
            )
            aux = Chart(gens)
            comps = {
                g.name: aux.var("d" + g.name)
                for g in self.mchart.chart.generators
            }
            self._aux[n_theta] = (aux, Derivation(aux, comps, 1))
        return self._aux[n_theta]

    def _edge_data(self, cell: str):
        e = self.mchart.source.edge(cell)
        if self.convention.anchor == "source":
            return e.src, 1
        return e.dst, -1

    def _face_data(self, cell: str):
        f = self.mchart.source.face(cell)
        v0, v1, v2 = f.vertices
        src = self.mchart.source
        if self.convention.anchor == "source":
            anchor = v0
            front = src.find_edge(v0, v1)
            back = src.find_edge(v1, v2)
            face_sign = 1
        else:
            anchor = v2
            front = src.find_edge(v2, v1)
            back = src.find_edge(v1, v0)
            face_sign = -1
        return anchor, front, back, face_sign

    def _superfield_images(self, cell: str, dim: int, aux: Chart, d_aux: Derivation):
        """Images of target and target-differential generators."""
        images: dict[str, GradedPoly] = {}
        name_of = self.mchart.field_name
        for g in self.mchart.target.generators:
            if dim == 0:
                hat = aux.var(name_of(g.name, cell))
            elif dim == 1:
                anchor, leg = self._edge_data(cell)
                hat = aux.var(name_of(g.name, anchor)) + aux.monomial(
                    leg, ["_theta1", name_of(g.name, cell)]
                )
            else:
                anchor, (ea, sa), (eb, sb), fs = self._face_data(cell)
                hat = (
                    aux.var(name_of(g.name, anchor))
                    + aux.monomial(sa, ["_theta1", name_of(g.name, ea.name)])
                    + aux.monomial(sb, ["_theta2", name_of(g.name, eb.name)])
                    + aux.monomial(fs, ["_theta1", "_theta2", name_of(g.name, cell)])
                )
            images[g.name] = hat
            images["d" + g.name] = d_aux(hat)
        return images

    def value(self, f: GradedPoly, cell: str) -> GradedPoly:
        """T_cell(f) on the shifted mapping chart.

        ``f`` may live on the target chart (functions) or its shifted
        chart (forms).
        """
        dim = self.mchart.source.dim_of(cell)
        aux, d_aux = self._aux_chart(dim)
        images = self._superfield_images(cell, dim, aux, d_aux)
        if f.chart == self.mchart.target:
            needed = {g.name: images[g.name] for g in self.mchart.target.generators}
        else:
            needed = images
        out = substitute(f, needed, aux)
        if dim == 1:
            out = berezin_integrate(out, ["_theta1"])
        elif dim == 2:
            out = berezin_integrate(out, ["_theta2", "_theta1"])
        return restrict(out, self.mchart.shifted)


def transgress_poly(
    f: GradedPoly,
    mchart: MappingChart,
    convention: Convention = DEFAULT_CONVENTION,
) -> GradedPoly:
    """Fundamental-chain pairing of the evaluated superfield expansion."""
    ev = _CellEvaluator(mchart, convention)
    out = mchart.shifted.zero()
    for cell, weight in mchart.source.chain:
        out = out + ev.value(f, cell) * weight
    return out


def transgress(
    form: PolyForm,
    mchart: MappingChart,
    convention: Convention = DEFAULT_CONVENTION,
) -> PolyForm:
    return PolyForm(
        tuple(transgress_poly(c, mchart, convention) for c in form.components)
    )


def transgress_functions(
    functions: Sequence[GradedPoly],
    mchart: MappingChart,
    convention: Convention = DEFAULT_CONVENTION,
) -> tuple[GradedPoly, ...]:
    out = []
    for f in functions:
        value = transgress_poly(f, mchart, convention)
        out.append(restrict(value, mchart.chart))
    return tuple(out)


# -- lifted cohomological fields ------------------------------------------------


def lift_source(mchart: MappingChart) -> Derivation:
    """Transport of the simplicial coboundary to the field chart."""
    src = mchart.source
    comps: dict[str, GradedPoly] = {}
    for g in mchart.target.generators:
        for e in src.edges:
            val = mchart.chart.zero()
            for v in src.vertices:
                s = src.incidence_edge_vertex(e, v)
                if s:
                    val = val + mchart.field(g.name, v) * s
            comps[mchart.field_name(g.name, e.name)] = val
        for f in src.faces:
            val = mchart.chart.zero()
            for e, s in src.face_sides(f):
                val = val + mchart.field(g.name, e.name) * s
            comps[mchart.field_name(g.name, f.name)] = val
    return Derivation(mchart.chart, comps, 1)


def lift_target(
    q_target: Derivation,
    mchart: MappingChart,
    convention: Convention = DEFAULT_CONVENTION,
) -> Derivation:
    """Cell-wise substitution of superfields into the target field.

    The component on an edge field carries the Koszul sign of that
    field's parity: it accounts for the odd target field crossing the
    theta leg of the superfield and for the right-handed extraction.
    Vertex and face components carry no sign (zero or two crossings).
    """
    if q_target.chart != mchart.target:
        raise ChartError("target field lives on the wrong chart")
    ev = _CellEvaluator(mchart, convention)
    comps: dict[str, GradedPoly] = {}
    for g in mchart.target.generators:
        image = q_target.on(g.name)
        for cell in mchart.source.cells():
            dim = mchart.source.dim_of(cell)
            value = restrict(ev.value(image, cell), mchart.chart)
            if dim == 1 and (g.degree - 1) & 1:
                value = -value
            comps[mchart.field_name(g.name, cell)] = value
    return Derivation(mchart.chart, comps, 1)


@dataclass(frozen=True)
class Lifts:
    qhat: Derivation
    qcheck: Derivation
    qtotal: Derivation
    qhat_square: CohomologyCertificate
    qcheck_square: CohomologyCertificate
    commute: dict[str, GradedPoly]

    @property
    def compatible(self) -> bool:
        return (
            self.qhat_square.ok and self.qcheck_square.ok and not self.commute
        )


def lift_fields(
    mchart: MappingChart,
    q_target: Derivation | None,
    convention: Convention = DEFAULT_CONVENTION,
) -> Lifts:
    """Both lifts with their squares and commutator verified, not assumed."""
    qhat = lift_source(mchart)
    if q_target is None:
        q_target = Derivation(mchart.target, {}, 1)
    qcheck = lift_target(q_target, mchart, convention)
    cross = commutator(qhat, qcheck)
    commute = {n: v for n, v in cross.components.items() if not v.is_zero()}
    return Lifts(
        qhat,
        qcheck,
        qhat + qcheck,
        is_cohomological(qhat),
        is_cohomological(qcheck),
        commute,
    )


# -- the algebroid target --------------------------------------------------------


@dataclass(frozen=True)
class AlgebroidTarget:
    """Shifted section space of a poly-Poisson structure as a QP target."""

    structure: PolyPoissonStructure
    chart: Chart
    q_field: Derivation
    hamiltonian: tuple[GradedPoly, ...]
    omega: PolyForm
    theta: PolyForm

    def cohomology(self) -> CohomologyCertificate:
        return is_cohomological(self.q_field)

    def target_cme_residual(self) -> tuple[GradedPoly, ...]:
        return tuple(self.q_field(s) for s in self.hamiltonian)


def algebroid_target(structure: PolyPoissonStructure) -> AlgebroidTarget:
    """Build (Q_P, S_P) on the degree-shifted section space.

    Q_P(x^i) = sum_a anchor_a(x^i) u^a, Q_P(u^c) = -1/2 sum f^c_ab u^a u^b,
    S_P = 1/2 sum u^a u^b i_{P(eta_a)} eta_b.  Structure functions must be
    polynomial; true denominators are unsupported and reported.
    """
    f, _brackets, failures = closure_expansion(structure)
    if failures:
        a, b, _res = failures[0]
        raise NoExpansion(
            f"bracket of frame sections {a + 1},{b + 1} does not close"
        )
    k = structure.k
    f_poly = [[[None] * k for _ in range(k)] for _ in range(k)]
    for a in range(k):
        for b in range(k):
            for c in range(k):
                p = f[a][b][c].as_polynomial()
                if p is None:
                    raise RationalCoefficients(
                        f"structure function f^{c + 1}_{a + 1}{b + 1} has denominator "
                        f"{format_poly(f[a][b][c].den)}"
                    )
                f_poly[a][b][c] = p

    base_gens = list(structure.chart.generators)
    u_names = [f"u{a + 1}" for a in range(k)]
    chart = Chart(base_gens + [Generator(n, 1) for n in u_names])

    comps: dict[str, GradedPoly] = {}
    for name in structure.chart.names:
        acc = chart.zero()
        for a in range(k):
            rho = structure.anchors[a].on(name)
            if not rho.is_zero():
                acc = acc + promote(rho, chart) * chart.var(u_names[a])
        comps[name] = acc
    for c in range(k):
        acc = chart.zero()
        for a in range(k):
            for b in range(k):
                fc = f_poly[a][b][c]
                if not fc.is_zero():
                    acc = acc - Fraction(1, 2) * promote(fc, chart) * chart.var(
                        u_names[a]
                    ) * chart.var(u_names[b])
        comps[u_names[c]] = acc
    q_field = Derivation(chart, comps, 1)

    hamiltonian = []
    for j in range(structure.r):
        acc = chart.zero()
        for a in range(k):
            for b in range(k):
                val = pairing(structure, a, b)[j]
                if not val.is_zero():
                    acc = acc + Fraction(1, 2) * promote(val, chart) * chart.var(
                        u_names[a]
                    ) * chart.var(u_names[b])
        hamiltonian.append(acc)

    shifted = ShiftedChart(chart)
    omega_comps = []
    for j in range(structure.r):
        acc = shifted.zero()
        for i, name in enumerate(structure.chart.names):
            s_ij = chart.zero()
            for a in range(k):
                coeff = structure.frame[a].coeffs[j][i]
                if not coeff.is_zero():
                    s_ij = s_ij + promote(coeff, chart) * chart.var(u_names[a])
            if not s_ij.is_zero():
                acc = acc + shifted.var("d" + name) * de_rham(promote(s_ij, shifted))
        omega_comps.append(acc)
    omega = PolyForm(tuple(omega_comps))
    theta = interior(euler(chart), omega)
    if de_rham(theta) != omega:
        raise NotExact("pulled-back form lost its weight-one primitive")
    return AlgebroidTarget(structure, chart, q_field, tuple(hamiltonian), omega, theta)


# -- classical master equation pieces --------------------------------------------


def omega_bracket(
    f_values: Sequence[GradedPoly],
    g_values: Sequence[GradedPoly],
    omega: PolyForm,
):
    """(F, G)_j = X_F(G_j) through the Hamiltonian field of F.

    Returns (values, field, unique); values is None when F fails to be
    Hamiltonian for the given form.
    """
    field, unique, residuals = hamiltonian_solve(f_values, omega)
    if field is None:
        return None, None, residuals
    return tuple(field(g) for g in g_values), field, unique


@dataclass(frozen=True)
class CmePieces:
    mchart: MappingChart
    theta_field: PolyForm
    omega_field: PolyForm
    s_hat: tuple[GradedPoly, ...]
    s_check: tuple[GradedPoly, ...]
    s_total: tuple[GradedPoly, ...]
    lifts: Lifts
    closed_source: bool
    bracket_hat_hat: tuple[GradedPoly, ...] | None
    bracket_check_check: tuple[GradedPoly, ...] | None
    bracket_hat_check: tuple[GradedPoly, ...] | None
    kernel: tuple[Derivation, ...]
    target_hamiltonian_sign: int


def cme_pieces(
    source: SimplicialSource,
    omega: PolyForm,
    s_target: Sequence[GradedPoly],
    q_target: Derivation | None,
    theta: PolyForm | None = None,
    convention: Convention = DEFAULT_CONVENTION,
) -> CmePieces:
    """Transgressed action pieces and their pairwise brackets.

    The target form must be exact with the Euler primitive unless a
    primitive is supplied; the target Hamiltonian relation
    d S = +/- i_Q omega is verified before anything is transgressed.
    """
    target = omega.chart.base
    if theta is None:
        theta = interior(euler(target), omega)
    if de_rham(theta) != omega:
        raise NotExact("theta is not a primitive of omega")

    sign = 0
    if q_target is not None and any(not s.is_zero() for s in s_target):
        iq = interior(q_target, omega)
        ds = PolyForm(tuple(de_rham(promote(s, omega.chart)) for s in s_target))
        if iq == ds:
            sign = 1
        elif iq == -ds:
            sign = -1
        else:
            witness = (iq - ds).components[0]
            raise NotHamiltonian(
                "target function is not Hamiltonian for the target field; "
                f"first residual {format_poly(witness)}"
            )

    mchart = MappingChart(source, target)
    theta_f = transgress(theta, mchart, convention)
    omega_f = transgress(omega, mchart, convention)
    if omega_f != de_rham(theta_f):
        raise AssertionError("chain map violated: T(d theta) != d T(theta)")

    lifts = lift_fields(mchart, q_target, convention)
    s_hat = tuple(
        -restrict(c, mchart.chart)
        for c in interior(lifts.qhat, theta_f).components
    )
    s_check = transgress_functions(tuple(s_target), mchart, convention)
    s_total = tuple(a + b for a, b in zip(s_hat, s_check))

    closed = source.is_closed()
    b_hh = b_cc = b_hc = None
    if closed:
        b_hh, _, _ = omega_bracket(s_hat, s_hat, omega_f)
        b_cc, _, _ = omega_bracket(s_check, s_check, omega_f)
        b_hc, _, _ = omega_bracket(s_hat, s_check, omega_f)
    kernel = tuple(constant_kernel(omega_f))
    return CmePieces(
        mchart,
        theta_f,
        omega_f,
        s_hat,
        s_check,
        s_total,
        lifts,
        closed,
        b_hh,
        b_cc,
        b_hc,
        kernel,
        sign,
    )


# -- degree-zero action and gauge residual ----------------------------------------


def _eval_polys(polys, point: dict[str, Fraction]) -> list[Fraction]:
    return [p.evaluate(point) for p in polys]


def ppsm_action(
    x_fields: Mapping[str, Sequence[Fraction]],
    eta_fields: Mapping[str, Sequence[Fraction]],
    source: SimplicialSource,
    structure: PolyPoissonStructure,
) -> tuple[Fraction, ...]:
    """Degree-zero action: edge pairing plus the anchored face square.

    ``x_fields`` assigns target coordinates to vertices, ``eta_fields``
    frame coefficients to edges.  The face term pairs the front edge
    against the back edge of each ordered face, with the anchor
    evaluated at the face's first vertex; faces are weighted by the
    fundamental chain.
    """
    chart = structure.chart
    n = len(chart)
    k = structure.k
    r = structure.r

    def point_at(v: str) -> dict[str, Fraction]:
        vals = x_fields[v]
        if len(vals) != n:
            raise ValueError(f"field at {v} has wrong dimension")
        return {name: Fraction(c) for name, c in zip(chart.names, vals)}

    def eta_at(e: str) -> list[Fraction]:
        vals = eta_fields[e]
        if len(vals) != k:
            raise ValueError(f"field at {e} has wrong frame dimension")
        return [Fraction(c) for c in vals]

    total = [Fraction(0)] * r
    for e in source.edges:
        pt = point_at(e.src)
        eta = eta_at(e.name)
        delta = [
            Fraction(x_fields[e.dst][i]) - Fraction(x_fields[e.src][i])
            for i in range(n)
        ]
        for j in range(r):
            acc = Fraction(0)
            for a in range(k):
                if not eta[a]:
                    continue
                row = _eval_polys(structure.frame[a].coeffs[j], pt)
                acc += eta[a] * sum(c * d for c, d in zip(row, delta))
            total[j] += acc

    weights = {cell: w for cell, w in source.chain}
    for face in source.faces:
        w = weights.get(face.name, Fraction(0))
        if not w:
            continue
        v0, v1, v2 = face.vertices
        pt = point_at(v0)
        ea, sa = source.find_edge(v0, v1)
        eb, sb = source.find_edge(v1, v2)
        front = [sa * c for c in eta_at(ea.name)]
        back = [sb * c for c in eta_at(eb.name)]
        for j in range(r):
            acc = Fraction(0)
            for a in range(k):
                if not front[a]:
                    continue
                for b in range(k):
                    if not back[b]:
                        continue
                    acc += front[a] * back[b] * pairing(structure, a, b)[j].evaluate(pt)
            total[j] += w * acc / 2
    return tuple(total)


@dataclass(frozen=True)
class GaugeReport:
    xi: Derivation
    hamiltonian: tuple[GradedPoly, ...]
    omega: PolyForm
    residual: PolyForm

    @property
    def exact(self) -> bool:
        return self.residual.is_zero()


def gauge_residual(
    beta: Mapping[str, Sequence[Fraction]],
    structure: PolyPoissonStructure,
    interval: SimplicialSource,
    convention: Convention = DEFAULT_CONVENTION,
    jacobian_at: str = "source",
) -> GaugeReport:
    """Discrete Hamiltonian-action residual i_xi Omega - dH on an interval.

    The gauge parameter assigns frame coefficients to vertices and must
    vanish on the boundary.  With the shipped source anchor the moment
    map evaluates its kinetic term at edge targets and its anchor term
    at edge sources; the anchor-Jacobian discretization of the momentum
    transformation sits at ``jacobian_at``.
    """
    if interval.dim != 1:
        raise ComplexError("gauge residuals live on one-dimensional sources")
    if jacobian_at not in ("source", "target"):
        raise ValueError("jacobian_at must be 'source' or 'target'")
    chart = structure.chart
    n = len(chart)
    k = structure.k
    r = structure.r

    beta_of: dict[str, list[Fraction]] = {}
    for v in interval.vertices:
        vals = beta.get(v)
        if vals is None:
            beta_of[v] = [Fraction(0)] * k
            continue
        if len(vals) != k:
            raise ValueError(f"gauge parameter at {v} has wrong frame dimension")
        beta_of[v] = [Fraction(c) for c in vals]
    for v in interval.boundary:
        if any(beta_of[v]):
            raise ValueError(f"gauge parameter must vanish on boundary vertex {v}")

    gens = []
    for name in chart.names:
        for v in interval.vertices:
            gens.append(Generator(f"{name}_{v}", 0))
    for j in range(1, r + 1):
        for name in chart.names:
            for e in interval.edges:
                gens.append(Generator(f"eta{j}_{name}_{e.name}", 0))
    fchart = Chart(gens)
    shifted = ShiftedChart(fchart)

    def x_name(i: int, v: str) -> str:
        return f"{chart.names[i]}_{v}"

    def eta_name(j: int, i: int, e: str) -> str:
        return f"eta{j + 1}_{chart.names[i]}_{e}"

    def subst_at(p: GradedPoly, v: str) -> GradedPoly:
        images = {
            name: fchart.var(x_name(i, v)) for i, name in enumerate(chart.names)
        }
        return substitute(p, images, fchart)

    def beta_cov(v: str) -> list[list[GradedPoly]]:
        # induced covector tuple of the gauge parameter at a vertex
        out = []
        for j in range(r):
            row = []
            for i in range(n):
                acc = fchart.zero()
                for a in range(k):
                    c = beta_of[v][a]
                    if c:
                        acc = acc + subst_at(structure.frame[a].coeffs[j][i], v) * c
                row.append(acc)
            out.append(row)
        return out

    def anchor_beta(v: str) -> list[GradedPoly]:
        out = []
        for i, name in enumerate(chart.names):
            acc = fchart.zero()
            for a in range(k):
                c = beta_of[v][a]
                if c:
                    acc = acc + subst_at(structure.anchors[a].on(name), v) * c
            out.append(acc)
        return out

    if convention.anchor == "source":
        anchor_of = lambda e: e.src
        other_of = lambda e: e.dst
    else:
        anchor_of = lambda e: e.dst
        other_of = lambda e: e.src

    # gauge vector field
    comps: dict[str, GradedPoly] = {}
    for v in interval.vertices:
        rho = anchor_beta(v)
        for i in range(n):
            comps[x_name(i, v)] = -rho[i]
    for e in interval.edges:
        cov_t = beta_cov(e.dst)
        cov_s = beta_cov(e.src)
        jv = e.src if jacobian_at == "source" else e.dst
        for j in range(r):
            for m in range(n):
                val = cov_t[j][m] - cov_s[j][m]
                for a in range(k):
                    c = beta_of[jv][a]
                    if not c:
                        continue
                    for i, name in enumerate(chart.names):
                        drho = partial(structure.anchors[a].on(name), chart.names[m])
                        if drho.is_zero():
                            continue
                        val = val + subst_at(drho, jv) * c * fchart.var(
                            eta_name(j, i, e.name)
                        )
                comps[eta_name(j, m, e.name)] = val
    xi = Derivation(fchart, comps, 0)

    # transgressed degree-zero symplectic pairing
    omega_comps = []
    for j in range(r):
        acc = shifted.zero()
        for e in interval.edges:
            av = anchor_of(e)
            for i in range(n):
                acc = acc + shifted.monomial(
                    1, ["d" + x_name(i, av), "d" + eta_name(j, i, e.name)]
                )
        omega_comps.append(acc)
    omega = PolyForm(tuple(omega_comps))

    # moment map
    h = []
    for j in range(r):
        acc = fchart.zero()
        for e in interval.edges:
            ov, av = other_of(e), anchor_of(e)
            cov = beta_cov(ov)
            rho = anchor_beta(av)
            for i in range(n):
                delta = fchart.var(x_name(i, e.dst)) - fchart.var(x_name(i, e.src))
                acc = acc + cov[j][i] * delta
                acc = acc - fchart.var(eta_name(j, i, e.name)) * rho[i]
        h.append(acc)
    hamiltonian = tuple(h)

    contraction = interior(xi, omega)
    dh = PolyForm(tuple(de_rham(promote(f, shifted)) for f in hamiltonian))
    residual = contraction - dh
    return GaugeReport(xi, hamiltonian, omega, residual)
