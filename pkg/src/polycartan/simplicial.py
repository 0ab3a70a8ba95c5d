"""Oriented simplicial complexes standing in for source supermanifolds.

A source is a complex of dimension at most two with oriented edges and
ordered triangular faces, plus a fundamental chain (a signed list of
top cells playing the role of the integration measure).  The functions
on the associated odd tangent bundle are modeled per cell by the
superfield construction in :mod:`polycartan.aksz`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    name: str
    src: str
    dst: str


@dataclass(frozen=True)
class Face:
    name: str
    vertices: tuple[str, str, str]


@dataclass(frozen=True)
class SimplicialSource:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...] = ()
    faces: tuple[Face, ...] = ()
    boundary: frozenset[str] = frozenset()
    chain: tuple[tuple[str, Fraction], ...] = ()

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ComplexError("duplicate vertex names")
        names = list(self.vertices) + [e.name for e in self.edges] + [
            f.name for f in self.faces
        ]
        if len(names) != len(set(names)):
            raise ComplexError("cell names must be pairwise distinct")
        for e in self.edges:
            if e.src not in vs or e.dst not in vs:
                raise ComplexError(f"edge {e.name} touches an unknown vertex")
        for f in self.faces:
            if len(set(f.vertices)) != 3:
                raise ComplexError(f"face {f.name} has repeated vertices")
            for a, b in ((f.vertices[0], f.vertices[1]),
                         (f.vertices[1], f.vertices[2]),
                         (f.vertices[0], f.vertices[2])):
                if self.find_edge(a, b) is None:
                    raise ComplexError(
                        f"face {f.name} side {a}-{b} is not an edge of the complex"
                    )
        if not vs.issuperset(self.boundary):
            raise ComplexError("boundary flags name unknown vertices")
        top = {c.name for c in (self.faces or self.edges or ())}
        if not self.faces and not self.edges:
            top = vs
        for cell, _ in self.chain:
            if cell not in top:
                raise ComplexError(f"chain cell {cell} is not top-dimensional")

    # -- lookup -----------------------------------------------------------

    @property
    def dim(self) -> int:
        if self.faces:
            return 2
        if self.edges:
            return 1
        return 0

    def cells(self) -> list[str]:
        return (
            list(self.vertices)
            + [e.name for e in self.edges]
            + [f.name for f in self.faces]
        )

    def dim_of(self, cell: str) -> int:
        if cell in self.vertices:
            return 0
        if any(e.name == cell for e in self.edges):
            return 1
        if any(f.name == cell for f in self.faces):
            return 2
        raise ComplexError(f"unknown cell {cell!r}")

    def edge(self, name: str) -> Edge:
        for e in self.edges:
            if e.name == name:
                return e
        raise ComplexError(f"unknown edge {name!r}")

    def face(self, name: str) -> Face:
        for f in self.faces:
            if f.name == name:
                return f
        raise ComplexError(f"unknown face {name!r}")

    def find_edge(self, a: str, b: str) -> tuple[Edge, int] | None:
        """Stored edge between a and b with its orientation sign."""
        for e in self.edges:
            if (e.src, e.dst) == (a, b):
                return e, 1
            if (e.src, e.dst) == (b, a):
                return e, -1
        return None

    # -- boundary / coboundary --------------------------------------------

    def face_sides(self, f: Face) -> list[tuple[Edge, int]]:
        """Boundary edges [v1v2], [v0v2], [v0v1] with incidence signs."""
        v0, v1, v2 = f.vertices
        out = []
        for (a, b), sgn in (((v1, v2), 1), ((v0, v2), -1), ((v0, v1), 1)):
            e, orient = self.find_edge(a, b)
            out.append((e, sgn * orient))
        return out

    def incidence_edge_vertex(self, e: Edge, v: str) -> int:
        return (1 if e.dst == v else 0) - (1 if e.src == v else 0)

    def coboundary_vertex(self, v: str) -> list[tuple[str, int]]:
        out = []
        for e in self.edges:
            s = self.incidence_edge_vertex(e, v)
            if s:
                out.append((e.name, s))
        return out

    def coboundary_edge(self, name: str) -> list[tuple[str, int]]:
        out = []
        for f in self.faces:
            s = 0
            for e, sgn in self.face_sides(f):
                if e.name == name:
                    s += sgn
            if s:
                out.append((f.name, s))
        return out

    def chain_boundary(self) -> dict[str, Fraction]:
        """Boundary of the fundamental chain (nonzero entries only)."""
        out: dict[str, Fraction] = {}

        def add(key, val):
            s = out.get(key, Fraction(0)) + val
            if s:
                out[key] = s
            else:
                out.pop(key, None)

        for cell, w in self.chain:
            if self.dim_of(cell) == 1:
                e = self.edge(cell)
                add(e.dst, w)
                add(e.src, -w)
            elif self.dim_of(cell) == 2:
                f = self.face(cell)
                for e, sgn in self.face_sides(f):
                    add(e.name, w * sgn)
        return out

    def is_closed(self) -> bool:
        return not self.chain_boundary()


# -- stock sources -------------------------------------------------------------


def point() -> SimplicialSource:
    return SimplicialSource(("v0",), chain=(("v0", Fraction(1)),))


def interval(n: int) -> SimplicialSource:
    """Path with n edges v0 -> v1 -> ... -> vn; boundary endpoints."""
    if n < 1:
        raise ValueError("need at least one edge")
    vertices = tuple(f"v{i}" for i in range(n + 1))
    edges = tuple(Edge(f"e{i}", f"v{i}", f"v{i + 1}") for i in range(n))
    return SimplicialSource(
        vertices,
        edges,
        boundary=frozenset({"v0", f"v{n}"}),
        chain=tuple((e.name, Fraction(1)) for e in edges),
    )


def circle(n: int) -> SimplicialSource:
    """Coherently oriented n-cycle."""
    if n < 3:
        raise ValueError("need at least three edges")
    vertices = tuple(f"v{i}" for i in range(n))
    edges = tuple(Edge(f"e{i}", f"v{i}", f"v{(i + 1) % n}") for i in range(n))
    return SimplicialSource(
        vertices,
        edges,
        chain=tuple((e.name, Fraction(1)) for e in edges),
    )


def triangle() -> SimplicialSource:
    vertices = ("v0", "v1", "v2")
    edges = (
        Edge("e0", "v0", "v1"),
        Edge("e1", "v1", "v2"),
        Edge("e2", "v0", "v2"),
    )
    faces = (Face("f0", ("v0", "v1", "v2")),)
    return SimplicialSource(
        vertices,
        edges,
        faces,
        boundary=frozenset(vertices),
        chain=(("f0", Fraction(1)),),
    )


def two_triangle_disk() -> SimplicialSource:
    """Square disk split along a diagonal, coherently oriented."""
    vertices = ("v0", "v1", "v2", "v3")
    edges = (
        Edge("e0", "v0", "v1"),
        Edge("e1", "v1", "v2"),
        Edge("e2", "v0", "v2"),
        Edge("e3", "v2", "v3"),
        Edge("e4", "v0", "v3"),
    )
    faces = (
        Face("f0", ("v0", "v1", "v2")),
        Face("f1", ("v0", "v2", "v3")),
    )
    return SimplicialSource(
        vertices,
        edges,
        faces,
        boundary=frozenset(vertices),
        chain=(("f0", Fraction(1)), ("f1", Fraction(1))),
    )
