import random
import warnings
from fractions import Fraction

import pytest

from polycartan.algebra import Chart
from polycartan.cartan import ShiftedChart
from polycartan.parser import (
    OddPowerWarning,
    ParseError,
    format_poly,
    parse_expr,
)
from polycartan.suites import random_chart, random_poly


@pytest.fixture
def qp():
    return Chart([("q", 0), ("p", 1)])


def test_parse_spec_example(qp):
    # p has degree 1, so dp is even and commutes with q
    sc = ShiftedChart(qp)
    out = parse_expr("2*q*dp - dp*q", sc)
    assert out == sc.var("q") * sc.var("dp")


def test_parse_odd_square_warns():
    chart = Chart([("theta", 1)])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        out = parse_expr("theta^2", chart)
    assert out.is_zero()
    assert any(issubclass(w.category, OddPowerWarning) for w in caught)


def test_parse_binomial_square():
    chart = Chart([("x", 0)])
    out = parse_expr("(x+1)^2", chart)
    assert out == chart.var("x") ** 2 + 2 * chart.var("x") + 1


def test_parse_rationals_and_unary_minus(qp):
    out = parse_expr("-3/4*q + 1/2", qp)
    assert out == qp.var("q") * Fraction(-3, 4) + Fraction(1, 2)


def test_parse_errors_carry_position(qp):
    with pytest.raises(ParseError) as err:
        parse_expr("q + nope", qp)
    assert err.value.position == 4
    with pytest.raises(ParseError):
        parse_expr("q q", qp)  # juxtaposition is not multiplication
    with pytest.raises(ParseError):
        parse_expr("(q", qp)
    with pytest.raises(ParseError):
        parse_expr("q ^ p", qp)


def test_format_zero(qp):
    assert format_poly(qp.zero()) == "0"
    assert parse_expr("0", qp).is_zero()


def test_roundtrip_random():
    rng = random.Random(31)
    for _ in range(200):
        chart = random_chart(rng, max_gens=4)
        f = random_poly(rng, chart)
        assert parse_expr(format_poly(f), chart) == f


def test_roundtrip_on_shifted_chart():
    rng = random.Random(32)
    for _ in range(100):
        base = random_chart(rng, max_gens=3, degree_span=(0, 2))
        sc = ShiftedChart(base)
        f = random_poly(rng, sc, max_terms=4, max_degree=3)
        assert parse_expr(format_poly(f), sc) == f
