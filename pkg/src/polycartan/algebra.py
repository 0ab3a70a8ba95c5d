"""Exact arithmetic in Z-graded commutative polynomial algebras.

A chart is an ordered list of named generators with integer degrees.
Polynomials are stored in normal form: each monomial is an exponent
vector against the chart order, coefficients are exact rationals, and
the Koszul rule (transposing homogeneous factors a, b costs the sign
(-1)^{|a||b|}) is applied during normalization.  Odd generators square
to zero, so their exponents never exceed one.

All signs elsewhere in the package are consequences of two primitives
defined here: monomial multiplication and the graded left partial
derivative.  Derivations act through X(f) = sum_g X(g) * d_g(f), which
reproduces the graded Leibniz rule exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Scalar = int | Fraction


class ChartError(ValueError):
    """Unknown generator, duplicate names, or mixed-chart operands."""


class DegreeError(ValueError):
    """An image or component violates the required degree bookkeeping."""


@dataclass(frozen=True)
class Generator:
    """Named generator with an algebra degree.

    ``internal`` is a second grading used by shifted charts: the Euler
    field weighs dx by the internal degree of x while Koszul signs use
    the algebra degree.  For plain generators it defaults to ``degree``.
    """

    name: str
    degree: int
    internal: int | None = None

    @property
    def parity(self) -> int:
        return self.degree & 1

    @property
    def internal_degree(self) -> int:
        return self.degree if self.internal is None else self.internal


class Chart:
    """Ordered generator list; the order fixes the monomial normal form."""

    def __init__(self, generators: Iterable[Generator | tuple[str, int]]):
        gens = tuple(
            g if isinstance(g, Generator) else Generator(g[0], g[1])
            for g in generators
        )
        names = [g.name for g in gens]
        if len(names) != len(set(names)):
            raise ChartError("duplicate generator names in chart")
        self.generators = gens
        self._index = {g.name: i for i, g in enumerate(gens)}
        self._odd = tuple(i for i, g in enumerate(gens) if g.parity)
        self._degrees = tuple(g.degree for g in gens)
        self._internal = tuple(g.internal_degree for g in gens)

    # -- lookups ------------------------------------------------------

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ChartError(f"unknown generator {name!r}") from None

    def gen(self, name: str) -> Generator:
        return self.generators[self.index(name)]

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.generators)

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.generators == other.generators

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.generators))

    def __repr__(self) -> str:
        inner = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"Chart({inner})"

    # -- element constructors -----------------------------------------

    def zero(self) -> "GradedPoly":
        return GradedPoly(self, {})

    def const(self, c: Scalar) -> "GradedPoly":
        c = Fraction(c)
        if not c:
            return self.zero()
        return GradedPoly(self, {(0,) * len(self.generators): c})

    def one(self) -> "GradedPoly":
        return self.const(1)

    def var(self, name: str) -> "GradedPoly":
        i = self.index(name)
        mono = tuple(1 if j == i else 0 for j in range(len(self.generators)))
        return GradedPoly(self, {mono: Fraction(1)})

    def monomial(self, coeff: Scalar, factors: Sequence[str]) -> "GradedPoly":
        """Normal form of ``coeff * factors[0] * factors[1] * ...``.

        Transposing adjacent odd factors flips the sign; a repeated odd
        factor makes the whole monomial vanish.
        """
        coeff = Fraction(coeff)
        if not coeff:
            return self.zero()
        idxs = [self.index(name) for name in factors]
        expo = [0] * len(self.generators)
        sign = 1
        odd_seen: list[int] = []
        for i in idxs:
            if self._degrees[i] & 1:
                if expo[i]:
                    return self.zero()
                # move past odd factors already placed to the right of slot i
                crossings = sum(1 for j in odd_seen if j > i)
                if crossings & 1:
                    sign = -sign
                odd_seen.append(i)
            expo[i] += 1
        return GradedPoly(self, {tuple(expo): sign * coeff})


def normalize(chart: Chart, coeff: Scalar, factors: Sequence[str]) -> "GradedPoly":
    """Module-level alias of :meth:`Chart.monomial`."""
    return chart.monomial(coeff, factors)


def _mul_monomials(chart: Chart, ma: tuple, mb: tuple):
    """Sign and exponent vector of a normal-ordered monomial product.

    Returns ``None`` when an odd generator repeats.  The sign counts,
    for every odd generator contributed by ``mb``, the odd factors of
    ``ma`` that it must cross on its way to its canonical slot.
    """
    odd = chart._odd
    sign = 1
    if odd:
        suffix = 0  # number of odd ma-exponents with index greater than current
        for j in reversed(odd):
            if mb[j]:
                if ma[j]:
                    return None
                if suffix & 1:
                    sign = -sign
            if ma[j]:
                suffix += 1
    return sign, tuple(a + b for a, b in zip(ma, mb))


def _monomial_degree(chart: Chart, mono: tuple) -> int:
    return sum(e * d for e, d in zip(mono, chart._degrees) if e)


def _monomial_internal(chart: Chart, mono: tuple) -> int:
    return sum(e * d for e, d in zip(mono, chart._internal) if e)


class GradedPoly:
    """Normal-form element of the graded polynomial algebra of a chart.

    ``terms`` maps exponent tuples to nonzero rational coefficients.
    Instances are immutable by convention; all operations return fresh
    values.  Equality is literal equality of term maps.
    """

    __slots__ = ("chart", "terms")

    def __init__(self, chart: Chart, terms: dict):
        self.chart = chart
        self.terms = terms

    # -- basic queries --------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {_monomial_degree(self.chart, m) for m in self.terms}

    def degree(self) -> int | None:
        """Common algebra degree, or None when zero or inhomogeneous."""
        degs = self.degrees()
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def internal_degrees(self) -> set[int]:
        return {_monomial_internal(self.chart, m) for m in self.terms}

    def internal_degree(self) -> int | None:
        degs = self.internal_degrees()
        return degs.pop() if len(degs) == 1 else None

    def parity_parts(self) -> tuple["GradedPoly", "GradedPoly"]:
        even: dict = {}
        odd: dict = {}
        for m, c in self.terms.items():
            (odd if _monomial_degree(self.chart, m) & 1 else even)[m] = c
        return GradedPoly(self.chart, even), GradedPoly(self.chart, odd)

    def homogeneous_parts(self) -> dict[int, "GradedPoly"]:
        parts: dict[int, dict] = {}
        for m, c in self.terms.items():
            parts.setdefault(_monomial_degree(self.chart, m), {})[m] = c
        return {d: GradedPoly(self.chart, t) for d, t in parts.items()}

    def constant_term(self) -> Fraction:
        zero_mono = (0,) * len(self.chart)
        return self.terms.get(zero_mono, Fraction(0))

    def is_constant(self) -> bool:
        zero_mono = (0,) * len(self.chart)
        return all(m == zero_mono for m in self.terms)

    # -- ring operations -------------------------------------------------

    def _check_chart(self, other: "GradedPoly"):
        if self.chart != other.chart:
            raise ChartError("operands live on different charts")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.chart.const(other)
        self._check_chart(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return GradedPoly(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedPoly(self.chart, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.chart.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return self.chart.zero()
            return GradedPoly(self.chart, {m: c * other for m, c in self.terms.items()})
        if not isinstance(other, GradedPoly):
            return NotImplemented
        self._check_chart(other)
        out: dict = {}
        chart = self.chart
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                hit = _mul_monomials(chart, ma, mb)
                if hit is None:
                    continue
                sign, m = hit
                s = out.get(m, 0) + sign * ca * cb
                if s:
                    out[m] = s
                else:
                    del out[m]
        return GradedPoly(self.chart, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined")
        out = self.chart.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.chart.const(other)
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __hash__(self):
        return hash((self.chart, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        from .parser import format_poly

        return f"<{format_poly(self)}>"

    # -- evaluation -------------------------------------------------------

    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        """Numeric value at a rational point.

        Every generator occurring in the polynomial must be assigned;
        odd generators cannot carry numeric values.
        """
        chart = self.chart
        total = Fraction(0)
        for m, c in self.terms.items():
            acc = Fraction(c)
            for i, e in enumerate(m):
                if not e:
                    continue
                g = chart.generators[i]
                if g.parity:
                    raise ChartError(f"cannot evaluate odd generator {g.name!r}")
                if g.name not in values:
                    raise ChartError(f"no value for generator {g.name!r}")
                acc *= Fraction(values[g.name]) ** e
            total += acc
        return total


def partial(f: GradedPoly, name: str) -> GradedPoly:
    """Graded left partial derivative by a generator.

    One occurrence of the generator is moved to the leftmost position,
    accumulating Koszul signs, and removed; even generators contribute
    the classical exponent factor.
    """
    chart = f.chart
    i = chart.index(name)
    odd_target = bool(chart._degrees[i] & 1)
    out: dict = {}
    for mono, c in f.terms.items():
        e = mono[i]
        if not e:
            continue
        if odd_target:
            crossings = sum(mono[j] for j in chart._odd if j < i)
            cc = -c if crossings & 1 else c
        else:
            cc = c * e
        m2 = mono[:i] + (e - 1,) + mono[i + 1 :]
        s = out.get(m2, 0) + cc
        if s:
            out[m2] = s
        else:
            del out[m2]
    return GradedPoly(chart, out)


def partial_right(f: GradedPoly, name: str) -> GradedPoly:
    """Graded right partial derivative (occurrence moved rightmost)."""
    chart = f.chart
    i = chart.index(name)
    odd_target = bool(chart._degrees[i] & 1)
    out: dict = {}
    for mono, c in f.terms.items():
        e = mono[i]
        if not e:
            continue
        if odd_target:
            crossings = sum(mono[j] for j in chart._odd if j > i)
            cc = -c if crossings & 1 else c
        else:
            cc = c * e
        m2 = mono[:i] + (e - 1,) + mono[i + 1 :]
        s = out.get(m2, 0) + cc
        if s:
            out[m2] = s
        else:
            del out[m2]
    return GradedPoly(chart, out)


class Derivation:
    """Graded vector field on a chart, given by its generator images.

    Application uses X(f) = sum_g X(g) * d_g(f) with the left partial;
    this is the unique graded derivation extending the components, so no
    per-case signs are ever hand-coded.  ``degree`` may be None for an
    inhomogeneous derivation; commutators and cohomology checks require
    a definite degree.
    """

    __slots__ = ("chart", "degree", "components")

    def __init__(
        self,
        chart: Chart,
        components: Mapping[str, GradedPoly],
        degree: int | None = None,
        check: bool = True,
    ):
        comps = {}
        for name, val in components.items():
            chart.index(name)
            if val.is_zero():
                continue
            if val.chart != chart:
                raise ChartError("component lives on a different chart")
            comps[name] = val
        if check and degree is not None:
            for name, val in comps.items():
                want = chart.gen(name).degree + degree
                if not val.is_homogeneous() or val.degree() != want:
                    raise DegreeError(
                        f"component for {name!r} must be homogeneous of degree {want}"
                    )
        self.chart = chart
        self.degree = degree
        self.components = comps

    def on(self, name: str) -> GradedPoly:
        self.chart.index(name)
        return self.components.get(name, self.chart.zero())

    def __call__(self, f: GradedPoly) -> GradedPoly:
        if f.chart != self.chart:
            raise ChartError("argument lives on a different chart")
        out = self.chart.zero()
        for name, comp in self.components.items():
            out = out + comp * partial(f, name)
        return out

    def is_zero(self) -> bool:
        return not self.components

    @property
    def parity(self) -> int:
        if self.degree is None:
            raise DegreeError("parity of an inhomogeneous derivation")
        return self.degree & 1

    def __add__(self, other: "Derivation") -> "Derivation":
        if self.chart != other.chart:
            raise ChartError("derivations on different charts")
        comps = dict(self.components)
        for name, val in other.components.items():
            comps[name] = comps.get(name, self.chart.zero()) + val
        degree = self.degree if self.degree == other.degree else None
        return Derivation(self.chart, comps, degree, check=False)

    def __neg__(self) -> "Derivation":
        return Derivation(
            self.chart,
            {n: -v for n, v in self.components.items()},
            self.degree,
            check=False,
        )

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self + (-other)

    def __mul__(self, c: Scalar) -> "Derivation":
        return Derivation(
            self.chart,
            {n: v * c for n, v in self.components.items()},
            self.degree,
            check=False,
        )

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        if self.chart != other.chart:
            return False
        names = set(self.components) | set(other.components)
        return all(self.on(n) == other.on(n) for n in names)

    def __repr__(self) -> str:
        from .parser import format_derivation

        return f"<{format_derivation(self)}>"


def coordinate_field(chart: Chart, name: str) -> Derivation:
    """The coordinate derivation d/d(name)."""
    g = chart.gen(name)
    return Derivation(chart, {name: chart.one()}, -g.degree)


def commutator(x: Derivation, y: Derivation) -> Derivation:
    """Graded commutator [X, Y] = XY - (-1)^{|X||Y|} YX."""
    if x.chart != y.chart:
        raise ChartError("derivations on different charts")
    if x.degree is None or y.degree is None:
        raise DegreeError("commutator needs homogeneous derivations")
    sign = -1 if (x.degree & 1) and (y.degree & 1) else 1
    comps = {}
    for g in x.chart.generators:
        comps[g.name] = x(y.on(g.name)) - sign * y(x.on(g.name))
    return Derivation(x.chart, comps, x.degree + y.degree)


def substitute(
    f: GradedPoly,
    images: Mapping[str, GradedPoly],
    target: Chart,
) -> GradedPoly:
    """Degree-preserving algebra morphism applied to a normal form.

    Every generator of the source chart needs an image on the target
    chart, homogeneous of the same degree (zero images are allowed).
    """
    chart = f.chart
    for g in chart.generators:
        if g.name not in images:
            raise ChartError(f"missing image for generator {g.name!r}")
        img = images[g.name]
        if img.chart != target:
            raise ChartError(f"image of {g.name!r} lives on the wrong chart")
        if not img.is_zero() and (not img.is_homogeneous() or img.degree() != g.degree):
            raise DegreeError(
                f"image of {g.name!r} must be homogeneous of degree {g.degree}"
            )
    out = target.zero()
    names = chart.names
    for mono, c in f.terms.items():
        acc = target.const(c)
        for i, e in enumerate(mono):
            if not e:
                continue
            img = images[names[i]]
            for _ in range(e):
                acc = acc * img
            if acc.is_zero():
                break
        out = out + acc
    return out


def identity_images(chart: Chart) -> dict[str, GradedPoly]:
    return {g.name: chart.var(g.name) for g in chart.generators}


def promote(f: GradedPoly, target: Chart) -> GradedPoly:
    """Reinterpret a polynomial on a chart whose generators extend f's.

    The source generators must appear as a prefix of the target chart.
    """
    src = f.chart
    if target.generators[: len(src)] != src.generators:
        raise ChartError("target chart does not extend the source chart")
    pad = (0,) * (len(target) - len(src))
    return GradedPoly(target, {m + pad: c for m, c in f.terms.items()})


def restrict(f: GradedPoly, target: Chart) -> GradedPoly:
    """Inverse of :func:`promote`; fails if trailing generators occur."""
    src = f.chart
    if src.generators[: len(target)] != target.generators:
        raise ChartError("source chart does not extend the target chart")
    n = len(target)
    out = {}
    for m, c in f.terms.items():
        if any(m[n:]):
            raise ChartError("polynomial involves generators outside the target chart")
        out[m[:n]] = c
    return GradedPoly(target, out)
