"""Command-line driver: run check suites on model files, emit reports.

Exit codes: 0 when every mathematical verdict passes, 1 when at least
one fails (the witness is printed), 2 for usage, I/O, or model errors.
The json format is byte-stable for fixed inputs and seed: it carries no
timing, and check order follows declaration order.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings

from .aksz import (
    CONVENTIONS,
    algebroid_target,
    cme_pieces,
    gauge_residual,
    ppsm_action,
    transgress,
)
from .cartan import de_rham, euler, interior, is_cohomological
from .model import Model, ModelError, load_model
from .parser import ParseError, format_derivation, format_poly, format_tuple
from .poisson import (
    DegenerateKernel,
    FrameDependent,
    NoExpansion,
    NotClosed,
    RationalCoefficients,
    check_axioms,
    from_polysymplectic,
)
from .polysymplectic import (
    NotExact,
    canonical,
    is_exact,
    normal_form,
    NormalFormError,
    schwarz_normalize,
)
from .report import CheckResult
from .simplicial import ComplexError
from .suites import algebra_suite, cartan_suite

REPORT_SCHEMA = "polycartan-report/1"


def _require(model: Model, attr: str, what: str):
    value = getattr(model, attr)
    if value is None:
        raise ModelError(f"this command needs a {what} block in the model file")
    return value


def _structure_of(model: Model) -> "object":
    if model.poisson is not None:
        return model.poisson
    if model.polysymplectic is not None:
        return from_polysymplectic(model.polysymplectic, model.sample_points)
    raise ModelError("this command needs a polypoisson or polysymplectic block")


# -- commands -------------------------------------------------------------------


def cmd_check_poisson(model: Model, args) -> list[CheckResult]:
    try:
        structure = _structure_of(model)
    except NotClosed as err:
        return [CheckResult("forms-closed", False, str(err))]
    except DegenerateKernel as err:
        return [CheckResult("kernel-trivial", False, str(err))]
    try:
        report = check_axioms(structure)
    except FrameDependent as err:
        return [CheckResult("frame-independent", False, str(err))]
    return report.checks


def cmd_check_symplectic(model: Model, args) -> list[CheckResult]:
    gps = _require(model, "graded", "graded")
    checks = list(gps.validate())
    try:
        normal_form(gps)
        checks.append(CheckResult("constant-normal-form", True, None))
    except NormalFormError as err:
        checks.append(CheckResult("constant-normal-form", False, str(err)))
        return checks
    report = is_exact(gps)
    witness = None
    if not report.ok:
        rows = ["(" + ", ".join(str(x) for x in row) + ")" for row in report.t_matrix]
        witness = f"rank {report.t_rank}; T = [" + ", ".join(rows) + "]"
    checks.append(CheckResult("exact", report.ok, witness))
    return checks


def cmd_schwarz(model: Model, args) -> list[CheckResult]:
    gps = _require(model, "graded", "graded")
    try:
        change = schwarz_normalize(gps)
    except (NotExact, NormalFormError) as err:
        return [CheckResult("schwarz-normalization", False, str(err))]
    lines = [
        f"{name} -> {format_poly(img)}" for name, img in sorted(change.images.items())
    ]
    return [CheckResult("schwarz-normalization", True, "; ".join(lines))]


def cmd_algebroid_cme(model: Model, args) -> list[CheckResult]:
    structure = _structure_of(model)
    try:
        target = algebroid_target(structure)
    except FrameDependent as err:
        return [CheckResult("frame-independent", False, str(err))]
    except (NoExpansion, RationalCoefficients) as err:
        return [CheckResult("closure", False, str(err))]
    checks = [CheckResult("closure", True, None)]
    cert = target.cohomology()
    witness = None
    if not cert.ok:
        witness = "; ".join(
            f"[Q,Q]({n}) = {format_poly(v)}" for n, v in sorted(cert.square.items())
        ) or "degree is not one"
    checks.append(CheckResult("field-squares-to-zero", cert.ok, witness))
    residual = target.target_cme_residual()
    ok = all(v.is_zero() for v in residual)
    checks.append(
        CheckResult(
            "target-master-equation",
            ok,
            None if ok else format_tuple(residual),
        )
    )
    return checks


def cmd_transgress(model: Model, args) -> list[CheckResult]:
    from .aksz import MappingChart
    from .polysymplectic import constant_kernel

    gps = _require(model, "graded", "graded")
    source = _require(model, "source", "source")
    convention = CONVENTIONS[args.convention]
    mchart = MappingChart(source, gps.chart)
    theta = interior(euler(gps.chart), gps.omega)
    checks = []
    primitive_ok = de_rham(theta) == gps.omega
    checks.append(CheckResult("euler-primitive", primitive_ok, None))
    omega_f = transgress(gps.omega, mchart, convention)
    if primitive_ok:
        theta_f = transgress(theta, mchart, convention)
        checks.append(
            CheckResult("chain-map", omega_f == de_rham(theta_f), None)
        )
    closed = de_rham(omega_f)
    checks.append(
        CheckResult(
            "transgressed-closed",
            closed.is_zero(),
            None if closed.is_zero() else repr(closed)[1:-1],
        )
    )
    weights = {c.internal_degree() for c in omega_f.components if not c.is_zero()}
    want = {1 - source.dim}
    degree_ok = weights.issubset(want)
    checks.append(
        CheckResult(
            "degree-drop",
            degree_ok,
            None if degree_ok else f"weights {sorted(weights)}",
        )
    )
    kernel = constant_kernel(omega_f)
    names = [format_derivation(k) for k in kernel]
    checks.append(
        CheckResult(
            "kernel-report",
            True,
            f"dimension {len(kernel)}" + ("; " + "; ".join(names) if names else ""),
        )
    )
    return checks


def cmd_cme(model: Model, args) -> list[CheckResult]:
    source = _require(model, "source", "source")
    convention = CONVENTIONS[args.convention]
    if model.graded is not None:
        omega = model.graded.omega
        target_chart = model.graded.chart
        s_target = tuple(target_chart.zero() for _ in range(omega.r))
        q_target = None
    else:
        structure = _structure_of(model)
        target = algebroid_target(structure)
        omega = target.omega
        s_target = target.hamiltonian
        q_target = target.q_field
    try:
        pieces = cme_pieces(source, omega, s_target, q_target, convention=convention)
    except (NotExact, NoExpansion, RationalCoefficients, ValueError) as err:
        return [CheckResult("cme-setup", False, str(err))]
    checks = [CheckResult("chain-map", True, None)]
    if pieces.closed_source:
        for name, values in (
            ("kinetic-master-equation", pieces.bracket_hat_hat),
            ("target-master-equation", pieces.bracket_check_check),
        ):
            if values is None:
                checks.append(CheckResult(name, False, "bracket solve failed"))
            else:
                ok = all(v.is_zero() for v in values)
                checks.append(
                    CheckResult(name, ok, None if ok else format_tuple(values))
                )
        cross = pieces.bracket_hat_check
        checks.append(
            CheckResult(
                "cross-bracket-report",
                True,
                "unsolved" if cross is None else format_tuple(cross),
            )
        )
    else:
        checks.append(
            CheckResult(
                "open-source",
                True,
                "brackets skipped; kernel dimension "
                f"{len(pieces.kernel)}",
            )
        )
    return checks


def cmd_action(model: Model, args) -> list[CheckResult]:
    structure = _require(model, "poisson", "polypoisson")
    source = _require(model, "source", "source")
    if model.fields_x is None or model.fields_eta is None:
        raise ModelError("this command needs a fields block")
    value = ppsm_action(model.fields_x, model.fields_eta, source, structure)
    return [CheckResult("action-value", True, "(" + ", ".join(str(v) for v in value) + ")")]


def cmd_gauge(model: Model, args) -> list[CheckResult]:
    structure = _require(model, "poisson", "polypoisson")
    source = _require(model, "source", "source")
    if model.beta is None:
        raise ModelError("this command needs a gauge block")
    convention = CONVENTIONS[args.convention]
    report = gauge_residual(
        model.beta, structure, source, convention, args.jacobian_at
    )
    witness = None
    if not report.exact:
        witness = " | ".join(format_poly(c) for c in report.residual.components)
    return [
        CheckResult(
            "moment-map-residual",
            report.exact,
            witness,
        ),
        CheckResult(
            "moment-map-report",
            True,
            "H = " + format_tuple(report.hamiltonian),
        ),
    ]


def cmd_selftest(model, args) -> list[CheckResult]:
    seed = args.seed if args.seed is not None else 0
    cases = args.samples if args.samples is not None else 100
    checks = []
    for result in algebra_suite(seed, cases):
        checks.append(
            CheckResult(
                f"algebra-{result.name}",
                result.passed,
                None if result.passed else result.failures[0],
            )
        )
    for result in cartan_suite(seed + 1, max(cases // 2, 10)):
        checks.append(
            CheckResult(
                f"cartan-{result.name}",
                result.passed,
                None if result.passed else result.failures[0],
            )
        )
    return checks


COMMANDS = {
    "check-poisson": (cmd_check_poisson, True),
    "check-symplectic": (cmd_check_symplectic, True),
    "schwarz": (cmd_schwarz, True),
    "algebroid-cme": (cmd_algebroid_cme, True),
    "transgress": (cmd_transgress, True),
    "cme": (cmd_cme, True),
    "action": (cmd_action, True),
    "gauge": (cmd_gauge, True),
    "selftest": (cmd_selftest, False),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polycartan",
        description="exact checks for poly-Poisson and graded poly-symplectic data",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_fn, needs_input) in COMMANDS.items():
        p = sub.add_parser(name)
        if needs_input:
            p.add_argument("--input", required=True, help="model file path")
        p.add_argument(
            "--format", choices=("text", "json"), default="text", dest="fmt"
        )
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument(
            "--convention",
            choices=sorted(CONVENTIONS),
            default="source",
            help="superfield anchor rule",
        )
        if name == "gauge":
            p.add_argument(
                "--jacobian-at",
                choices=("source", "target"),
                default="source",
                dest="jacobian_at",
            )
    return parser


def render_text(payload: dict, elapsed: float) -> str:
    lines = [f"command: {payload['command']}"]
    if payload.get("input"):
        lines.append(f"input: {payload['input']}")
    for check in payload["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        line = f"{check['name']}: {status}"
        if check["witness"]:
            line += f"  witness: {check['witness']}"
        lines.append(line)
    total = len(payload["checks"])
    good = sum(1 for c in payload["checks"] if c["passed"])
    verdict = "PASS" if payload["passed"] else "FAIL"
    lines.append(f"result: {verdict} ({good}/{total} checks) in {elapsed:.3f}s")
    return "\n".join(lines)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fn, needs_input = COMMANDS[args.command]
    start = time.monotonic()
    model = None
    try:
        if needs_input:
            model = load_model(args.input)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            checks = fn(model, args)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
    except (ModelError, ParseError, ComplexError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    elapsed = time.monotonic() - start
    payload = {
        "schema": REPORT_SCHEMA,
        "command": args.command,
        "input": getattr(args, "input", None),
        "seed": args.seed,
        "convention": args.convention,
        "checks": [
            {"name": c.name, "passed": c.passed, "witness": c.witness}
            for c in checks
        ],
        "passed": all(c.passed for c in checks),
    }
    if args.fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(render_text(payload, elapsed))
    return 0 if payload["passed"] else 1


def main() -> None:
    sys.exit(run())
