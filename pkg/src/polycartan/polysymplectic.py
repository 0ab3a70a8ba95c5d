"""Degree-one graded poly-symplectic forms and their normal forms.

The charts in scope carry even coordinates q (degree 0) and odd
coordinates p (degree 1).  A degree-one poly-symplectic tuple is closed,
satisfies L_E omega = omega, and pairs tangent directions injectively.
Such forms are constant linear combinations of dq dp monomials; the
normal-form extraction, the exactness test (the assembled pairing map T
is square and invertible), and the constructive normalization to the
canonical model all reduce to exact rational linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .algebra import (
    Chart,
    ChartError,
    Derivation,
    Generator,
    GradedPoly,
    coordinate_field,
    promote,
    substitute,
)
from .cartan import (
    PolyForm,
    ShiftedChart,
    de_rham,
    euler,
    interior,
    one_form_coefficients,
)
from .linsolve import (
    invert_fraction,
    nullspace_fraction,
    rank_fraction,
    solve_constant_system,
)
from .parser import format_poly
from .report import CheckResult


class NormalFormError(ValueError):
    """The form is not a constant even-odd pairing."""


class NonConstantCoefficient(NormalFormError):
    pass


class NotExact(ValueError):
    """The pairing map T is not square invertible."""


class UnsupportedOmega(ValueError):
    """The Hamiltonian solver needs constant two-form coefficients."""


@dataclass(frozen=True)
class GradedPolySymplectic:
    chart: Chart
    omega: PolyForm
    degree: int = 1

    def __post_init__(self):
        if self.omega.chart.base != self.chart:
            raise ChartError("form does not live over the stated chart")

    @property
    def r(self) -> int:
        return self.omega.r

    @property
    def shifted(self) -> ShiftedChart:
        return self.omega.chart

    def even_names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.chart.generators if not g.parity)

    def odd_names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.chart.generators if g.parity)

    def validate(self) -> list[CheckResult]:
        """Closedness, weight-one homogeneity, constant nondegeneracy."""
        checks = []
        d = de_rham(self.omega)
        checks.append(
            CheckResult(
                "closed",
                d.is_zero(),
                None if d.is_zero() else repr(d)[1:-1],
            )
        )
        e = euler(self.chart)
        res = None
        from .cartan import lie_derivative

        lie = lie_derivative(e, self.omega)
        want = self.omega * self.degree
        homogeneous = lie == want
        if not homogeneous:
            res = repr(lie - want)[1:-1]
        checks.append(CheckResult("euler-homogeneous", homogeneous, res))
        kernel = constant_kernel(self.omega)
        checks.append(
            CheckResult(
                "nondegenerate",
                not kernel,
                None if not kernel else "; ".join(repr(k)[1:-1] for k in kernel),
            )
        )
        return checks


def constant_kernel(omega: PolyForm) -> list[Derivation]:
    """Constant-coefficient derivations annihilated by every component."""
    shifted = omega.chart
    base = shifted.base
    columns = []
    monomials: set = set()
    contractions = []
    for g in base.generators:
        forms = [interior(coordinate_field(base, g.name), c) for c in omega.components]
        contractions.append(forms)
        for j, f in enumerate(forms):
            for m in f.terms:
                monomials.add((j, m))
    rows_index = sorted(monomials)
    matrix = []
    for j, m in rows_index:
        matrix.append(
            [contractions[i][j].terms.get(m, Fraction(0)) for i in range(len(base))]
        )
    kernel = nullspace_fraction(matrix) if matrix else [
        [Fraction(1) if i == k else Fraction(0) for i in range(len(base))]
        for k in range(len(base))
    ]
    out = []
    for vec in kernel:
        comps = {
            g.name: base.const(v)
            for g, v in zip(base.generators, vec)
            if v
        }
        out.append(Derivation(base, comps, None, check=False))
    return out


def canonical_chart(m: int, r: int) -> Chart:
    gens = [Generator(f"q{l}", 0) for l in range(1, m + 1)]
    for l in range(1, m + 1):
        for j in range(1, r + 1):
            gens.append(Generator(f"p{l}_{j}", 1))
    return Chart(gens)


def canonical(m: int, r: int) -> GradedPolySymplectic:
    """The r-fold shifted cotangent model: omega_j = sum_l dq_l dp_l^j."""
    if m < 1 or r < 1:
        raise ValueError("need m >= 1 and r >= 1")
    chart = canonical_chart(m, r)
    shifted = ShiftedChart(chart)
    comps = []
    for j in range(1, r + 1):
        acc = shifted.zero()
        for l in range(1, m + 1):
            acc = acc + shifted.monomial(1, [f"dq{l}", f"dp{l}_{j}"])
        comps.append(acc)
    return GradedPolySymplectic(chart, PolyForm(tuple(comps)))


def liouville_primitive(gps: GradedPolySymplectic) -> PolyForm:
    """theta = i_E omega; d theta = omega whenever L_E omega = omega."""
    theta = interior(euler(gps.chart), gps.omega)
    if de_rham(theta) != gps.omega:
        raise NotExact("i_E omega is not a primitive; the form is not weight one")
    return theta


@dataclass(frozen=True)
class NormalFormData:
    """Constant coefficients c[i][a][l] of omega_i = sum c dq_l dp_a."""

    even_names: tuple[str, ...]
    odd_names: tuple[str, ...]
    matrices: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def reconstruct(self, shifted: ShiftedChart) -> PolyForm:
        comps = []
        for mat in self.matrices:
            acc = shifted.zero()
            for a, row in enumerate(mat):
                for l, c in enumerate(row):
                    if c:
                        acc = acc + shifted.monomial(
                            c, ["d" + self.even_names[l], "d" + self.odd_names[a]]
                        )
            comps.append(acc)
        return PolyForm(tuple(comps))


def normal_form(gps: GradedPolySymplectic) -> NormalFormData:
    """Extract the constant even-odd pairing coefficients.

    Terms with polynomial prefactors raise NonConstantCoefficient; terms
    pairing two even or two odd differentials raise NormalFormError.
    Both indicate a violated precondition (closed weight-one forms have
    neither).  The reconstruction from the result equals the input.
    """
    chart = gps.chart
    shifted = gps.shifted
    even = gps.even_names()
    odd = gps.odd_names()
    even_pos = {n: i for i, n in enumerate(even)}
    odd_pos = {n: i for i, n in enumerate(odd)}
    n_base = len(chart)
    matrices = []
    for comp in gps.omega.components:
        mat = [[Fraction(0)] * len(even) for _ in range(len(odd))]
        for mono, c in comp.terms.items():
            term = GradedPoly(shifted, {mono: c})
            if any(mono[:n_base]):
                raise NonConstantCoefficient(
                    f"non-constant coefficient in term {format_poly(term)}"
                )
            slots = [i for i in range(n_base, len(shifted)) for _ in range(mono[i])]
            if len(slots) != 2:
                raise NormalFormError(
                    f"term {format_poly(term)} is not a two-form monomial"
                )
            names = [shifted.generators[i].name[1:] for i in slots]
            evens = [n for n in names if n in even_pos]
            odds = [n for n in names if n in odd_pos]
            if len(evens) != 1 or len(odds) != 1:
                raise NormalFormError(
                    f"term {format_poly(term)} pairs {'even' if len(evens) == 2 else 'odd'}"
                    " differentials"
                )
            # dq (odd parity) and dp (even parity) commute: no reordering sign
            mat[odd_pos[odds[0]]][even_pos[evens[0]]] += c
        matrices.append(tuple(tuple(row) for row in mat))
    data = NormalFormData(even, odd, tuple(matrices))
    if data.reconstruct(shifted) != gps.omega:
        raise NormalFormError("reconstruction mismatch")
    return data


@dataclass(frozen=True)
class ExactnessReport:
    ok: bool
    count_ok: bool
    t_matrix: tuple[tuple[Fraction, ...], ...]
    t_rank: int

    def __bool__(self) -> bool:
        return self.ok


def is_exact(gps: GradedPolySymplectic) -> ExactnessReport:
    """Square-and-invertible test for the assembled pairing map.

    T sends the odd coordinate direction a to the tuple of contractions
    (i_{d/dp_a} omega_j)_j, written in the dq basis: rows are (j, l)
    pairs, columns are odd directions.
    """
    data = normal_form(gps)
    m = len(data.even_names)
    s = len(data.odd_names)
    r = len(data.matrices)
    rows = []
    for j in range(r):
        for l in range(m):
            rows.append(tuple(data.matrices[j][a][l] for a in range(s)))
    t = tuple(rows)
    rank = rank_fraction(t) if rows else 0
    count_ok = s == r * m
    return ExactnessReport(count_ok and rank == s, count_ok, t, rank)


@dataclass(frozen=True)
class CoordinateChange:
    """Invertible linear, degree-preserving generator substitution."""

    source: Chart
    target: Chart
    images: dict[str, GradedPoly]

    def __post_init__(self):
        if len(self.source) != len(self.target):
            raise ValueError("charts have different dimensions")
        matrix = []
        for g in self.source.generators:
            img = self.images.get(g.name)
            if img is None:
                raise ChartError(f"missing image for {g.name!r}")
            if img.chart != self.target:
                raise ChartError("image on the wrong chart")
            row = [Fraction(0)] * len(self.target)
            for mono, c in img.terms.items():
                if sum(mono) != 1:
                    raise ValueError("images must be linear in the generators")
                row[mono.index(1)] = c
            if not img.is_zero() and img.degree() != g.degree:
                raise ValueError("change does not preserve degrees")
            matrix.append(row)
        if invert_fraction(matrix) is None:
            raise ValueError("coordinate change is not invertible")

    def apply(self, f: GradedPoly) -> GradedPoly:
        return substitute(f, self.images, self.target)

    def shifted_images(self) -> dict[str, GradedPoly]:
        st = ShiftedChart(self.target)
        d = {}
        for name, img in self.images.items():
            lifted = promote(img, st)
            d[name] = lifted
            d["d" + name] = de_rham(lifted)
        return d

    def apply_form(self, form: PolyForm) -> PolyForm:
        st = ShiftedChart(self.target)
        images = self.shifted_images()
        return PolyForm(
            tuple(substitute(c, images, st) for c in form.components)
        )


def schwarz_normalize(gps: GradedPolySymplectic) -> CoordinateChange:
    """Linear odd-coordinate change carrying the form to the canonical model.

    The change is the inverse of the pairing map T acting on the odd
    coordinates; even coordinates pass through unchanged.  The round
    trip is verified exactly before returning.
    """
    report = is_exact(gps)
    if not report.ok:
        raise NotExact(
            f"pairing map rank {report.t_rank}"
            + ("" if report.count_ok else "; odd count differs from r*m")
        )
    data = normal_form(gps)
    m = len(data.even_names)
    r = len(data.matrices)
    t_inv = invert_fraction([list(row) for row in report.t_matrix])
    assert t_inv is not None
    target = canonical_chart(m, r)
    images: dict[str, GradedPoly] = {}
    for l, name in enumerate(data.even_names):
        images[name] = target.var(f"q{l + 1}")
    # row (j, l) of T corresponds to the canonical odd coordinate p{l+1}_{j+1}
    for a, name in enumerate(data.odd_names):
        acc = target.zero()
        for j in range(r):
            for l in range(m):
                c = t_inv[a][j * m + l]
                if c:
                    acc = acc + target.var(f"p{l + 1}_{j + 1}") * c
        images[name] = acc
    change = CoordinateChange(gps.chart, target, images)
    transformed = change.apply_form(gps.omega)
    if transformed != canonical(m, r).omega:
        raise NotExact("normalization failed to reach the canonical form")
    return change


# -- Hamiltonian inversion -----------------------------------------------------


@dataclass(frozen=True)
class HamiltonianObstruction:
    """Witness that i_Q omega = dF has no solution."""

    residuals: tuple[tuple[int, str, GradedPoly], ...]

    def __bool__(self) -> bool:
        return False


def _omega_pairs(omega: PolyForm):
    from .cartan import two_form_constant_matrix

    pairs = []
    for j, comp in enumerate(omega.components):
        try:
            mat = two_form_constant_matrix(comp)
        except ValueError as err:
            raise UnsupportedOmega(str(err)) from None
        pairs.append(mat)
    return pairs


def hamiltonian_solve(
    functions: Sequence[GradedPoly], omega: PolyForm
) -> tuple[Derivation | None, bool, list]:
    """Solve i_Q omega_j = dF_j for all j at once.

    Requires constant two-form coefficients and components of one common
    homogeneous degree (zero components are ignored).  Returns the field,
    a uniqueness flag, and the list of inconsistency residuals.
    """
    shifted = omega.chart
    base = shifted.base
    if len(functions) != omega.r:
        raise ValueError("function count differs from the form order")
    degrees = set()
    for f in functions:
        if f.chart != base:
            raise ChartError("Hamiltonian components live on the wrong chart")
        if not f.is_zero():
            if not f.is_homogeneous():
                raise ValueError("Hamiltonian components must be homogeneous")
            degrees.add(f.degree())
    if not degrees:
        return Derivation(base, {}, None, check=False), True, []
    if len(degrees) > 1:
        raise ValueError("Hamiltonian components have mixed degrees")
    big_d = degrees.pop()
    w_degrees = {c.degree() for c in omega.components if not c.is_zero()}
    if len(w_degrees) != 1 or None in w_degrees:
        raise UnsupportedOmega("form components must share one homogeneous degree")
    # i_Q omega = dF fixes deg(Q) = deg(F) + 2 - deg(omega)
    q_degree = big_d + 2 - w_degrees.pop()
    p_q = q_degree & 1
    p_iq = (q_degree + 1) & 1

    pairs = _omega_pairs(omega)
    names = base.names
    col = {n: i for i, n in enumerate(names)}
    nrows = omega.r * len(names)
    a = [[Fraction(0)] * len(names) for _ in range(nrows)]
    rhs = [shifted.zero()] * nrows

    def row_of(j: int, gname: str) -> int:
        return j * len(names) + col[gname]

    for j, mat in enumerate(pairs):
        for (da, db), w in mat.items():
            ga, gb = da[1:], db[1:]
            pa = base.gen(ga).parity
            pb_d = shifted.gen(db).parity
            pa_d = shifted.gen(da).parity
            # i_Q(dga dgb) = Q(ga) dgb + (-1)^{p_iq * pa_d} dga Q(gb);
            # rewrite both with the differential leftmost
            sign1 = -1 if ((pa + p_q) & 1) and pb_d else 1
            a[row_of(j, gb)][col[ga]] += sign1 * w
            sign2 = -1 if p_iq and pa_d else 1
            a[row_of(j, ga)][col[gb]] += sign2 * w
    for j, f in enumerate(functions):
        if f.is_zero():
            continue
        df = de_rham(promote(f, shifted))
        for gname, coeff in one_form_coefficients(df).items():
            rhs[row_of(j, gname)] = coeff

    out = solve_constant_system(a, rhs, shifted)
    if out.solution is None:
        residuals = []
        for rowidx, poly in out.residual_rows:
            j, gi = divmod(rowidx, len(names))
            residuals.append((j, names[gi], poly))
        return None, out.unique, residuals
    from .algebra import restrict

    comps = {}
    for name, val in zip(names, out.solution):
        if not val.is_zero():
            comps[name] = restrict(val, base)
    return Derivation(base, comps, q_degree), out.unique, []


def graded_hamiltonian_vf(
    functions: Sequence[GradedPoly], omega: PolyForm | GradedPolySymplectic
) -> Derivation | HamiltonianObstruction:
    if isinstance(omega, GradedPolySymplectic):
        omega = omega.omega
    field, _unique, residuals = hamiltonian_solve(functions, omega)
    if field is None:
        return HamiltonianObstruction(
            tuple((j, name, poly) for j, name, poly in residuals)
        )
    return field
