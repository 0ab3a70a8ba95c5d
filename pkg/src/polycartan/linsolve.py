"""Exact linear algebra over the rationals and over fraction fields.

Expansion problems in the package (closure coefficients, admissibility,
Hamiltonian inversion) are linear solves whose entries are polynomials
on an all-even chart.  They are solved by Gaussian elimination over the
fraction field; solutions are :class:`RatFunc` values whose denominators
are reported, never silently cleared.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .algebra import Chart, ChartError, GradedPoly, partial


# -- rational-number matrices -------------------------------------------------


def rank_fraction(rows: Sequence[Sequence[Fraction]]) -> int:
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pv = m[rank][col]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col] / pv
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def nullspace_fraction(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Basis of the right kernel, reduced row echelon based."""
    if not rows:
        return []
    m = [[Fraction(x) for x in row] for row in rows]
    ncols = len(m[0])
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pv = m[rank][col]
        m[rank] = [a / pv for a in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(v)
    return basis


def solve_fraction(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> list[Fraction] | None:
    """One solution of A x = b over Q, or None when inconsistent.

    Free variables are set to zero.
    """
    m = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    if not m:
        return []
    ncols = len(rows[0])
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pv = m[rank][col]
        m[rank] = [a / pv for a in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, len(m)):
        if m[r][ncols]:
            return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = m[r][ncols]
    return x


# -- rational functions over a polynomial chart -------------------------------


def _divide_exact(a: GradedPoly, b: GradedPoly) -> GradedPoly | None:
    """Exact multivariate division a / b (None when not divisible).

    Uses the degree-then-lex monomial order on exponent vectors; valid
    because Q[x] is a domain and the order is multiplicative.
    """
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    chart = a.chart
    if a.is_zero():
        return chart.zero()

    def key(mono):
        return (sum(mono), mono)

    lb = max(b.terms, key=key)
    cb = b.terms[lb]
    rem = a
    quo = chart.zero()
    while not rem.is_zero():
        la = max(rem.terms, key=key)
        diff = tuple(x - y for x, y in zip(la, lb))
        if any(d < 0 for d in diff):
            return None
        piece = GradedPoly(chart, {diff: rem.terms[la] / cb})
        quo = quo + piece
        rem = rem - piece * b
    return quo


class RatFunc:
    """Quotient of polynomials on an all-even chart.

    Fractions are not reduced to lowest terms in general (multivariate
    gcds are out of scope); exact cancellation is attempted so that
    polynomial results are recognized.  Equality cross-multiplies, so it
    is exact regardless of representation.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: GradedPoly, den: GradedPoly | None = None):
        chart = num.chart
        if den is None:
            den = chart.one()
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = chart.one()
        else:
            exact = _divide_exact(num, den)
            if exact is not None:
                num, den = exact, chart.one()
            elif den.is_constant():
                num, den = num * (1 / den.constant_term()), chart.one()
            else:
                # normalize the leading denominator coefficient to one
                lead = max(den.terms, key=lambda m: (sum(m), m))
                c = den.terms[lead]
                num, den = num * (1 / c), den * (1 / c)
        self.num = num
        self.den = den

    @classmethod
    def coerce(cls, value, chart: Chart) -> "RatFunc":
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, GradedPoly):
            return cls(value)
        return cls(chart.const(Fraction(value)))

    @property
    def chart(self) -> Chart:
        return self.num.chart

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_polynomial(self) -> GradedPoly | None:
        if not self.is_polynomial():
            return None
        return self.num * (1 / self.den.constant_term())

    def __add__(self, other):
        other = RatFunc.coerce(other, self.chart)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RatFunc.coerce(other, self.chart))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = RatFunc.coerce(other, self.chart)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RatFunc.coerce(other, self.chart)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, GradedPoly)):
            other = RatFunc.coerce(other, self.chart)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        poly = self.as_polynomial()
        if poly is None:
            raise TypeError("unreduced rational functions are unhashable")
        return hash(poly)

    def diff(self, name: str) -> "RatFunc":
        """Quotient-rule derivative by a chart generator."""
        dn = partial(self.num, name)
        dd = partial(self.den, name)
        return RatFunc(dn * self.den - self.num * dd, self.den * self.den)

    def __repr__(self) -> str:
        from .parser import format_poly

        if self.is_polynomial():
            return f"<{format_poly(self.num)}>"
        return f"<({format_poly(self.num)})/({format_poly(self.den)})>"


def rat_zero(chart: Chart) -> RatFunc:
    return RatFunc(chart.zero())


# -- polynomial matrices ------------------------------------------------------


def _to_rat(rows, chart) -> list[list[RatFunc]]:
    return [[RatFunc.coerce(x, chart) for x in row] for row in rows]


def rank_poly(rows: Sequence[Sequence[GradedPoly]], chart: Chart) -> int:
    """Generic rank (over the fraction field of the chart)."""
    m = _to_rat(rows, chart)
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if not m[r][col].is_zero()), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pv = m[rank][col]
        for r in range(rank + 1, len(m)):
            if not m[r][col].is_zero():
                f = m[r][col] / pv
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def nullspace_poly(
    rows: Sequence[Sequence[GradedPoly]], chart: Chart
) -> list[list[RatFunc]]:
    m = _to_rat(rows, chart)
    if not m:
        return []
    ncols = len(m[0])
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if not m[r][col].is_zero()), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pv = m[rank][col]
        m[rank] = [a / pv for a in m[rank]]
        for r in range(len(m)):
            if r != rank and not m[r][col].is_zero():
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    zero = rat_zero(chart)
    one = RatFunc(chart.one())
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(v)
    return basis


class PolySolve:
    """Outcome of a fraction-field linear solve A x = b.

    ``solution`` is None when the system is inconsistent; ``residual``
    then holds b - A x* for the best partial solution x*, a nonzero
    witness of unsolvability.  ``unique`` reports whether the solution
    was pinned by the equations (no free columns).
    """

    def __init__(self, solution, residual, unique):
        self.solution: list[RatFunc] | None = solution
        self.residual: list[RatFunc] | None = residual
        self.unique: bool = unique


def solve_poly(
    rows: Sequence[Sequence[GradedPoly]],
    rhs: Sequence[GradedPoly],
    chart: Chart,
) -> PolySolve:
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    m = _to_rat(rows, chart)
    b = [RatFunc.coerce(x, chart) for x in rhs]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if not m[r][col].is_zero()), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        b[rank], b[pivot] = b[pivot], b[rank]
        pv = m[rank][col]
        m[rank] = [a / pv for a in m[rank]]
        b[rank] = b[rank] / pv
        for r in range(nrows):
            if r != rank and not m[r][col].is_zero():
                f = m[r][col]
                m[r] = [a - f * c for a, c in zip(m[r], m[rank])]
                b[r] = b[r] - f * b[rank]
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    zero = rat_zero(chart)
    x = [zero] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = b[r]
    consistent = all(b[r].is_zero() for r in range(rank, nrows))
    unique = len(pivots) == ncols
    if consistent:
        return PolySolve(x, None, unique)
    # residual of the partial solution against the original system
    residual = []
    for row, want in zip(rows, rhs):
        acc = RatFunc.coerce(want, chart)
        for a, xv in zip(row, x):
            acc = acc - RatFunc.coerce(a, chart) * xv
        residual.append(acc)
    return PolySolve(None, residual, unique)


def rank_at_point(
    rows: Sequence[Sequence[GradedPoly]], point: dict[str, Fraction]
) -> int:
    evaluated = [[entry.evaluate(point) for entry in row] for row in rows]
    return rank_fraction(evaluated)


# -- constant systems with polynomial right-hand sides ------------------------


class ConstantSolve:
    """A x = b with A rational and b polynomial; solved by elimination.

    ``solution`` entries are polynomials; inconsistent systems report the
    nonzero residual rows instead.
    """

    def __init__(self, solution, residual_rows, unique):
        self.solution: list[GradedPoly] | None = solution
        self.residual_rows: list[tuple[int, GradedPoly]] = residual_rows
        self.unique: bool = unique


def solve_constant_system(
    a: Sequence[Sequence[Fraction]],
    rhs: Sequence[GradedPoly],
    chart: Chart,
) -> ConstantSolve:
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    m = [[Fraction(x) for x in row] for row in a]
    b = list(rhs)
    order = list(range(nrows))
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        b[rank], b[pivot] = b[pivot], b[rank]
        order[rank], order[pivot] = order[pivot], order[rank]
        pv = m[rank][col]
        m[rank] = [x / pv for x in m[rank]]
        b[rank] = b[rank] * (1 / pv)
        for r in range(nrows):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
                b[r] = b[r] - b[rank] * f
        pivots.append(col)
        rank += 1
    residuals = [
        (order[r], b[r]) for r in range(rank, nrows) if not b[r].is_zero()
    ]
    if residuals:
        return ConstantSolve(None, residuals, len(pivots) == ncols)
    x = [chart.zero()] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = b[r]
    return ConstantSolve(x, [], len(pivots) == ncols)


def invert_fraction(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]] | None:
    """Inverse of a square rational matrix, or None when singular."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        pv = m[col][col]
        m[col] = [a / pv for a in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [row[n:] for row in m]
