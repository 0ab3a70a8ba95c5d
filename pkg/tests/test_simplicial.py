from fractions import Fraction

import pytest

from polycartan.simplicial import (
    ComplexError,
    Edge,
    Face,
    SimplicialSource,
    circle,
    interval,
    point,
    triangle,
    two_triangle_disk,
)


def test_interval_shape():
    src = interval(2)
    assert src.dim == 1
    assert src.vertices == ("v0", "v1", "v2")
    assert src.boundary == {"v0", "v2"}
    assert not src.is_closed()
    assert src.chain_boundary() == {"v2": 1, "v0": -1}


def test_circle_is_closed():
    src = circle(3)
    assert src.is_closed()
    assert len(src.edges) == 3


def test_disk_interior_edge_cancels():
    src = two_triangle_disk()
    boundary = src.chain_boundary()
    assert "e2" not in boundary  # the diagonal
    assert set(boundary) == {"e0", "e1", "e3", "e4"}


def test_face_requires_edges():
    with pytest.raises(ComplexError):
        SimplicialSource(
            ("a", "b", "c"),
            (Edge("e0", "a", "b"), Edge("e1", "b", "c")),
            (Face("f0", ("a", "b", "c")),),
        )


def test_find_edge_orientation():
    src = triangle()
    e, s = src.find_edge("v1", "v0")
    assert e.name == "e0" and s == -1


def test_coboundaries():
    src = interval(2)
    assert src.coboundary_vertex("v1") == [("e0", 1), ("e1", -1)]
    disk = two_triangle_disk()
    assert dict(disk.coboundary_edge("e2")) == {"f0": -1, "f1": 1}


def test_coboundary_squared_vanishes():
    src = two_triangle_disk()
    for v in src.vertices:
        total = {}
        for e, s in src.coboundary_vertex(v):
            for f, t in src.coboundary_edge(e):
                total[f] = total.get(f, 0) + s * t
        assert all(val == 0 for val in total.values())


def test_chain_cells_must_be_top():
    with pytest.raises(ComplexError):
        SimplicialSource(
            ("a", "b"),
            (Edge("e0", "a", "b"),),
            chain=(("a", Fraction(1)),),
        )


def test_point_source():
    src = point()
    assert src.dim == 0 and src.chain == (("v0", Fraction(1)),)
