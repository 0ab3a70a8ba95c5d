from fractions import Fraction

import pytest

from polycartan.algebra import Chart, Derivation, coordinate_field
from polycartan.poisson import PolyPoissonStructure, SectionTuple


def section(chart, rows):
    """rows: per slot, list of coefficients (int or poly) over dx in chart order."""
    out = []
    for row in rows:
        entries = []
        for c in row:
            if isinstance(c, int):
                entries.append(chart.const(c))
            else:
                entries.append(c)
        out.append(tuple(entries))
    return SectionTuple(chart, tuple(out))


def canonical_r2(samples=((0, 0, 0), (1, 2, 3))):
    """Order-2 structure on R^3 induced by (dx dp1, dx dp2)."""
    chart = Chart([("x", 0), ("p1", 0), ("p2", 0)])
    frame = (
        section(chart, [[0, 1, 0], [0, 0, 1]]),   # (dp1, dp2)
        section(chart, [[-1, 0, 0], [0, 0, 0]]),  # (-dx, 0)
        section(chart, [[0, 0, 0], [-1, 0, 0]]),  # (0, -dx)
    )
    anchors = (
        coordinate_field(chart, "x"),
        coordinate_field(chart, "p1"),
        coordinate_field(chart, "p2"),
    )
    return PolyPoissonStructure(
        chart,
        2,
        frame,
        anchors,
        tuple(tuple(Fraction(v) for v in pt) for pt in samples),
    )


def linear_r1(bracket_table, samples=((1, 1, 1),)):
    """r = 1 structure with frame (dx1, dx2, dx3) and a linear bracket table.

    ``bracket_table[(a, b)]`` holds the polynomial {x_a, x_b} for a < b.
    """
    chart = Chart([("x1", 0), ("x2", 0), ("x3", 0)])
    names = chart.names

    def entry(a, b):
        if a == b:
            return chart.zero()
        if (a, b) in bracket_table:
            return bracket_table[(a, b)]
        return -bracket_table[(b, a)]

    frame = tuple(
        section(chart, [[1 if i == a else 0 for i in range(3)]]) for a in range(3)
    )
    anchors = tuple(
        Derivation(
            chart, {names[b]: entry(a, b) for b in range(3) if b != a}, 0
        )
        for a in range(3)
    )
    return PolyPoissonStructure(
        chart,
        1,
        frame,
        anchors,
        tuple(tuple(Fraction(v) for v in pt) for pt in samples),
    )


def so3(samples=((1, 1, 1),)):
    chart = Chart([("x1", 0), ("x2", 0), ("x3", 0)])
    x1, x2, x3 = (chart.var(n) for n in chart.names)
    return linear_r1({(0, 1): x3, (1, 2): x1, (2, 0): x2}, samples)


def broken_jacobi_b():
    # {x1,x2} = x3, {x2,x3} = x1, {x3,x1} = x1: jacobiator is -dx3
    chart = Chart([("x1", 0), ("x2", 0), ("x3", 0)])
    x1, x3 = chart.var("x1"), chart.var("x3")
    return linear_r1({(0, 1): x3, (1, 2): x1, (2, 0): x1})


def broken_jacobi_c():
    # {x1,x2} = x3 + x1, {x2,x3} = x1, {x3,x1} = x2
    chart = Chart([("x1", 0), ("x2", 0), ("x3", 0)])
    x1, x2, x3 = (chart.var(n) for n in chart.names)
    return linear_r1({(0, 1): x3 + x1, (1, 2): x1, (2, 0): x2})


@pytest.fixture
def canonical_structure():
    return canonical_r2()


@pytest.fixture
def so3_structure():
    return so3()
