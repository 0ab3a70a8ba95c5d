"""Line-oriented model files describing charts, structures, and sources.

The format is UTF-8 text with ``#`` comments.  A block opens with its
keyword on a line of its own and closes with ``end``; lines inside are
key-led.  Expressions use the grammar of :mod:`polycartan.parser` and
``|`` separates tuple components.

::

    chart
      gen x 0
      gen p1 0
      gen p2 0
    end

    samples           # optional rational sample points
      point 0 0 0
    end

    polypoisson       # frame sections (r slots) and anchors (n components)
      section dp1 | dp2
      anchor 1 | 0 | 0
    end

    polysymplectic    # r closed two-forms, for the induced structure
      form dx*dp1
    end

    graded            # graded poly-symplectic tuple on the shifted chart
      omega dq1*dp1_1 | dq1*dp1_2
    end

    source
      vertex v0 [boundary]
      edge e0 v0 v1
      face f0 v0 v1 v2
      chain e0 1
    end

    fields            # degree-zero action data
      x v0 = 1 | 0 | 2
      eta e0 = 1 | 0 | 0
    end

    gauge
      beta v1 = 1 | 0 | 0
    end
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Chart, Generator, Derivation, GradedPoly
from .cartan import PolyForm, ShiftedChart
from .parser import ParseError, parse_expr
from .poisson import PolyPoissonStructure, SectionTuple
from .polysymplectic import GradedPolySymplectic
from .simplicial import ComplexError, Edge, Face, SimplicialSource


class ModelError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


@dataclass
class Model:
    chart: Chart
    poisson: PolyPoissonStructure | None = None
    polysymplectic: PolyForm | None = None
    graded: GradedPolySymplectic | None = None
    source: SimplicialSource | None = None
    fields_x: dict[str, tuple[Fraction, ...]] | None = None
    fields_eta: dict[str, tuple[Fraction, ...]] | None = None
    beta: dict[str, tuple[Fraction, ...]] | None = None
    sample_points: tuple[tuple[Fraction, ...], ...] = ()

    def shifted(self) -> ShiftedChart:
        return ShiftedChart(self.chart)


def _blocks(text: str):
    """Yield (keyword, header_line, [(line_no, line), ...])."""
    current = None
    body: list[tuple[int, str]] = []
    header = 0
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if current is None:
            if " " in line or "\t" in line:
                raise ModelError(f"expected a block keyword, got {line!r}", no)
            current, header, body = line, no, []
        elif line == "end":
            yield current, header, body
            current = None
        else:
            body.append((no, line))
    if current is not None:
        raise ModelError(f"block {current!r} is never closed", header)


def _rational(token: str, no: int) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ModelError(f"expected a rational number, got {token!r}", no) from None


def _expr(text: str, chart: Chart, no: int) -> GradedPoly:
    try:
        return parse_expr(text, chart)
    except ParseError as err:
        raise ModelError(f"bad expression {text!r}: {err}", no) from None


def _split_tuple(text: str) -> list[str]:
    return [part.strip() for part in text.split("|")]


def _parse_chart(body) -> Chart:
    gens = []
    for no, line in body:
        parts = line.split()
        if len(parts) != 3 or parts[0] != "gen":
            raise ModelError("chart lines read: gen <name> <degree>", no)
        _, name, degree = parts
        try:
            deg = int(degree)
        except ValueError:
            raise ModelError(f"degree {degree!r} is not an integer", no) from None
        gens.append(Generator(name, deg))
    if not gens:
        raise ModelError("chart block declares no generators")
    try:
        return Chart(gens)
    except ValueError as err:
        raise ModelError(str(err), body[0][0]) from None


def _parse_polypoisson(body, chart, sample_points):
    sections: list[SectionTuple] = []
    anchors: list[Derivation] = []
    shifted = ShiftedChart(chart)
    r = None
    first_line = body[0][0] if body else None
    for no, line in body:
        key, _, rest = line.partition(" ")
        if key == "section":
            comps = [_expr(part, shifted, no) for part in _split_tuple(rest)]
            if r is None:
                r = len(comps)
            elif len(comps) != r:
                raise ModelError(f"section has {len(comps)} slots, expected {r}", no)
            try:
                sections.append(SectionTuple.from_form(PolyForm(tuple(comps))))
            except ValueError as err:
                raise ModelError(str(err), no) from None
        elif key == "anchor":
            comps = [_expr(part, chart, no) for part in _split_tuple(rest)]
            if len(comps) != len(chart):
                raise ModelError(
                    f"anchor has {len(comps)} components, chart has {len(chart)}", no
                )
            anchors.append(
                Derivation(chart, dict(zip(chart.names, comps)), 0)
            )
        else:
            raise ModelError(f"unknown polypoisson key {key!r}", no)
    if r is None:
        raise ModelError("polypoisson block has no sections", first_line)
    try:
        return PolyPoissonStructure(
            chart, r, tuple(sections), tuple(anchors), sample_points
        )
    except ValueError as err:
        raise ModelError(str(err), first_line) from None


def _parse_source(body):
    vertices: list[str] = []
    boundary: set[str] = set()
    edges: list[Edge] = []
    faces: list[Face] = []
    chain: list[tuple[str, Fraction]] = []
    first_line = body[0][0] if body else None
    for no, line in body:
        parts = line.split()
        key = parts[0]
        if key == "vertex" and len(parts) in (2, 3):
            vertices.append(parts[1])
            if len(parts) == 3:
                if parts[2] != "boundary":
                    raise ModelError(f"unknown vertex flag {parts[2]!r}", no)
                boundary.add(parts[1])
        elif key == "edge" and len(parts) == 4:
            edges.append(Edge(parts[1], parts[2], parts[3]))
        elif key == "face" and len(parts) == 5:
            faces.append(Face(parts[1], (parts[2], parts[3], parts[4])))
        elif key == "chain" and len(parts) == 3:
            chain.append((parts[1], _rational(parts[2], no)))
        else:
            raise ModelError(f"bad source line {line!r}", no)
    try:
        return SimplicialSource(
            tuple(vertices),
            tuple(edges),
            tuple(faces),
            frozenset(boundary),
            tuple(chain),
        )
    except ComplexError as err:
        raise ModelError(str(err), first_line) from None


def _parse_assignments(body, key_name, names, width_of):
    out: dict[str, dict[str, tuple[Fraction, ...]]] = {}
    for no, line in body:
        head, _, rest = line.partition("=")
        parts = head.split()
        if len(parts) != 2 or parts[0] not in names:
            raise ModelError(f"bad {key_name} line {line!r}", no)
        kind, target = parts
        values = tuple(_rational(tok, no) for tok in _split_tuple(rest))
        want = width_of(kind)
        if len(values) != want:
            raise ModelError(
                f"{kind} assignment for {target} has {len(values)} entries, "
                f"expected {want}",
                no,
            )
        out.setdefault(kind, {})[target] = values
    return out


def load_model(path: str) -> Model:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    return parse_model(text)


def parse_model(text: str) -> Model:
    chart: Chart | None = None
    sample_points: tuple[tuple[Fraction, ...], ...] = ()
    pending = []
    for keyword, header, body in _blocks(text):
        pending.append((keyword, header, body))

    for keyword, header, body in pending:
        if keyword == "chart":
            if chart is not None:
                raise ModelError("duplicate chart block", header)
            chart = _parse_chart(body)
    if chart is None:
        raise ModelError("model file has no chart block")

    for keyword, header, body in pending:
        if keyword == "samples":
            points = []
            for no, line in body:
                parts = line.split()
                if parts[0] != "point":
                    raise ModelError(f"bad samples line {line!r}", no)
                values = tuple(_rational(tok, no) for tok in parts[1:])
                if len(values) != len(chart):
                    raise ModelError(
                        f"sample point has {len(values)} coordinates, chart has "
                        f"{len(chart)}",
                        no,
                    )
                points.append(values)
            sample_points = tuple(points)

    model = Model(chart, sample_points=sample_points)
    shifted = ShiftedChart(chart)
    for keyword, header, body in pending:
        if keyword in ("chart", "samples"):
            continue
        if keyword == "polypoisson":
            model.poisson = _parse_polypoisson(body, chart, sample_points)
        elif keyword == "polysymplectic":
            forms = []
            for no, line in body:
                key, _, rest = line.partition(" ")
                if key != "form":
                    raise ModelError(f"unknown polysymplectic key {key!r}", no)
                forms.append(_expr(rest, shifted, no))
            if not forms:
                raise ModelError("polysymplectic block has no forms", header)
            model.polysymplectic = PolyForm(tuple(forms))
        elif keyword == "graded":
            omega = None
            for no, line in body:
                key, _, rest = line.partition(" ")
                if key != "omega":
                    raise ModelError(f"unknown graded key {key!r}", no)
                if omega is not None:
                    raise ModelError("duplicate omega line", no)
                omega = PolyForm(
                    tuple(_expr(part, shifted, no) for part in _split_tuple(rest))
                )
            if omega is None:
                raise ModelError("graded block has no omega line", header)
            model.graded = GradedPolySymplectic(chart, omega)
        elif keyword == "source":
            model.source = _parse_source(body)
        elif keyword == "fields":
            if model.poisson is None:
                raise ModelError("fields block needs a polypoisson block", header)
            data = _parse_assignments(
                body,
                "fields",
                ("x", "eta"),
                lambda kind: len(chart) if kind == "x" else model.poisson.k,
            )
            model.fields_x = data.get("x", {})
            model.fields_eta = data.get("eta", {})
        elif keyword == "gauge":
            if model.poisson is None:
                raise ModelError("gauge block needs a polypoisson block", header)
            data = _parse_assignments(
                body, "gauge", ("beta",), lambda kind: model.poisson.k
            )
            model.beta = data.get("beta", {})
        else:
            raise ModelError(f"unknown block {keyword!r}", header)
    return model
