"""``fjrw`` command line front end.

Exit codes: 0 success, 1 bad or degenerate input, 2 a verification failed.
JSON output uses sorted keys and ``"p/q"`` strings for every rational, so
identical inputs give byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import DomainError, VerificationError
from .fjrw import build_state_space
from .frobenius import poincare, poincare_to_json
from .milnor import as_frobenius, build_quotient
from .qpoly import (
    Polynomial,
    central_charge,
    classify,
    format_rational,
    milnor_number_formula,
    parse_potential,
    require_unit_coefficients,
    weights_of,
)
from .symmetry import symmetry_group

COMMANDS = ("analyze", "group", "milnor", "state-space", "ring", "mirror-check", "corpus")


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None = None
    format: str = "text"
    out: str | None = None
    max_exponent: int = 7


def _read_potential(source: str | None) -> Polynomial:
    if source is None:
        raise DomainError("a potential (or @file) is required")
    text = Path(source[1:]).read_text(encoding="utf-8").strip() if source.startswith("@") else source
    return parse_potential(text)


def _rationals(xs) -> list[str]:
    return [format_rational(Fraction(x)) for x in xs]


def _analyze(W: Polynomial) -> dict:
    cls = classify(W)
    q = weights_of(W)
    Q = build_quotient(W, q)
    return {
        "potential": str(W),
        "class": str(cls),
        "class_detail": cls.to_json(),
        "weights": _rationals(q),
        "central_charge": format_rational(central_charge(q)),
        "milnor_number": Q.milnor_number,
        "milnor_number_formula": format_rational(milnor_number_formula(q)),
    }


def _milnor(W: Polynomial) -> dict:
    q = weights_of(W)
    A = as_frobenius(build_quotient(W, q))
    body = A.to_json()
    return {
        "potential": str(W),
        "weights": _rationals(q),
        "central_charge": format_rational(central_charge(q)),
        "milnor_number": A.dim,
        "basis": body["basis"],
        "pairing": body["pairing_matrix"],
        "ring_table": body["ring_table"],
    }


def _state_space(W: Polynomial) -> dict:
    require_unit_coefficients(W)
    space = build_state_space(W, symmetry_group(W))
    ss = space.to_json()
    return {"potential": str(W), "weights": _rationals(space.weights),
            "state_space": ss, "pairing": ss["pairing_matrix"],
            "poincare": poincare_to_json(_degree_counts(space.degrees))}


def _degree_counts(degrees) -> dict:
    out: dict = {}
    for d in degrees:
        out[d] = out.get(d, 0) + 1
    return dict(sorted(out.items()))


def _ring(W: Polynomial) -> tuple[dict, int]:
    from .correlators import loop_ring_report
    from .mirror import loop_parameters

    loop_parameters(W)
    space = build_state_space(W, symmetry_group(W))
    A, rep = loop_ring_report(space)
    body = A.to_json()
    report = {"potential": str(W), "state_space": space.to_json(),
              "ring_table": body["ring_table"], "pairing": body["pairing_matrix"],
              "correlator_crosscheck": rep.to_json()}
    return report, 2 if rep.mismatches else 0


def _power_rule_trace(space, a1: int, a2: int) -> list[dict]:
    from .correlators import _h, correlator_trace

    out = []
    for i, m in ((1, a2), (2, a1)):
        for c in range(1, m - 1):
            gamma = -_h(a1, a2, i, c)
            out.append(correlator_trace(space, [space.index(_h(a1, a2, i, c - 1)),
                                                space.index(_h(a1, a2, i)),
                                                space.index(gamma)]))
    return out


def _mirror_check(W: Polynomial) -> tuple[dict, int]:
    from .mirror import loop_parameters, transpose, verify_mirror

    cls = classify(W)
    if cls.kind == "Loop" and W.nvars == 2:
        a1, a2 = loop_parameters(W)
        rep = verify_mirror(a1, a2)
        space = build_state_space(W, symmetry_group(W))
        trace = _power_rule_trace(space, a1, a2) + rep.relations.to_json()["four_point"]
        body = rep.to_json()
        body["theorem_checked"] = True
        return {"potential": str(W), "mirror": body, "trace": trace}, 0 if rep.passed else 2
    # informational only: compare graded dimensions
    dual = transpose(W)
    qb = weights_of(dual)
    B = as_frobenius(build_quotient(dual, qb), "y")
    space = build_state_space(W, symmetry_group(W))
    pa, pb = _degree_counts(space.degrees), poincare(B)
    body = {"source": str(W), "dual": dual.to_string("y"), "theorem_checked": False,
            "dims": {"A": space.dim, "B": B.dim},
            "poincare_A": poincare_to_json(pa), "poincare_B": poincare_to_json(pb),
            "poincare_equal": pa == pb}
    return {"potential": str(W), "mirror": body}, 0


def corpus_run(max_exponent: int) -> tuple[dict, int]:
    from .mirror import verify_mirror

    if max_exponent < 2:
        raise DomainError("--max-exponent must be at least 2")
    rows, passed, total = [], 0, 0
    for a1 in range(2, max_exponent + 1):
        for a2 in range(2, max_exponent + 1):
            rep = verify_mirror(a1, a2)
            ok = rep.passed
            passed += ok
            total += rep.crosscheck.checked
            rows.append({"a1": a1, "a2": a2, "passed": ok,
                         "scalar_c": format_rational(rep.iso.scalar_c)
                         if rep.iso.scalar_c is not None else None,
                         "crosschecked": rep.crosscheck.checked,
                         "mismatches": len(rep.crosscheck.mismatches)})
    pairs = len(rows)
    summary = {"pairs": pairs, "passed": passed, "failed": pairs - passed,
               "total_crosschecked_correlators": total}
    return {"summary": summary, "results": rows}, 0 if passed == pairs else 2


def execute(config: RunConfig) -> tuple[dict, int]:
    if config.command == "corpus":
        return corpus_run(config.max_exponent)
    W = _read_potential(config.input)
    if config.command == "analyze":
        return _analyze(W), 0
    if config.command == "group":
        require_unit_coefficients(W)
        return {"potential": str(W), "group": symmetry_group(W).to_json()}, 0
    if config.command == "milnor":
        return _milnor(W), 0
    if config.command == "state-space":
        return _state_space(W), 0
    if config.command == "ring":
        return _ring(W)
    if config.command == "mirror-check":
        return _mirror_check(W)
    raise DomainError(f"unknown command {config.command!r}")


def _text(report, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(report, dict):
        for k in sorted(report):
            v = report[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(report, list):
        for v in report:
            if isinstance(v, (dict, list)) and v:
                sub = _text(v, indent + 1)
                lines.append(f"{pad}- " + sub[0].lstrip())
                lines.extend(sub[1:])
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(report))
    return lines


def _scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list)):
        return "{}" if isinstance(v, dict) else "[]"
    return str(v)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return "\n".join(_text(report)) + "\n"


def run(config: RunConfig) -> tuple[int, dict, str]:
    try:
        report, code = execute(config)
    except DomainError as exc:
        report, code = {"error": {"type": type(exc).__name__, "message": str(exc)}}, 1
    except VerificationError as exc:
        report, code = {"error": {"type": type(exc).__name__, "message": str(exc)}}, 2
    return code, report, render(report, config.format)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fjrw", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("potential", nargs="?", help='potential text such as "x1^2*x2 + x2^3*x1", or @file')
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", help="write the report here instead of standard output")
    p.add_argument("--max-exponent", type=int, default=7, help="corpus only (default 7)")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(args.command, args.potential, args.format, args.out, args.max_exponent)
    code, report, text = run(config)
    if "error" in report:
        err = report["error"]
        print(f"error: {err['type']}: {err['message']}", file=sys.stderr)
    if config.out:
        Path(config.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
