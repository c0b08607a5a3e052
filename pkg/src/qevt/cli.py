"""Command-line interface with JSON matrix interchange.

Matrices travel as ``{"rows": r, "cols": c, "data": [[re, im], ...]}``
(row-major), polynomials as ``{"coefficients": [[re, im], ...]}``. All
reports are emitted deterministically: fixed key order, floats printed
with 17 significant digits, so identical inputs produce byte-identical
output. Exit codes: 0 success, 1 tolerance threshold exceeded, 2 input
error, 3 norm violation, 4 internal numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import analytic, encoding, evt, gqsp
from .errors import NormBoundError, NumericalError, QevtError, ValidationError
from .linalg import PolynomialSpec, horner_eval, operator_norm
from .regularize import regularize as regularize_encoding

_MOD = "cli"

EXIT_OK = 0
EXIT_THRESHOLD = 1
EXIT_INPUT = 2
EXIT_NORM = 3
EXIT_NUMERIC = 4


# ---------------------------------------------------------------------------
# deterministic JSON


def _format_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValidationError("cannot serialize non-finite float", module=_MOD)
    text = f"{x:.17g}"
    # keep the output valid JSON (json numbers cannot be bare '1e+05' issues etc.)
    return text


def emit_json(obj) -> str:
    """Serialize with stable key order and 17-significant-digit floats."""
    if isinstance(obj, dict):
        inner = ",".join(f"{json.dumps(str(k))}:{emit_json(v)}" for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(emit_json(v) for v in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    raise ValidationError(f"cannot serialize {type(obj).__name__}", module=_MOD)


def matrix_payload(m: np.ndarray) -> dict:
    rows, cols = m.shape
    data = [[float(v.real), float(v.imag)] for v in m.ravel()]
    return {"rows": int(rows), "cols": int(cols), "data": data}


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}", module=_MOD) from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}", module=_MOD) from None
    if not isinstance(payload, dict):
        raise ValidationError(f"{path}: top-level JSON object expected", module=_MOD)
    return payload


def _pairs_to_complex(pairs, what: str) -> np.ndarray:
    values = []
    for entry in pairs:
        if (
            not isinstance(entry, (list, tuple))
            or len(entry) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
        ):
            raise ValidationError(f"{what}: entries must be [real, imaginary] pairs", module=_MOD)
        values.append(complex(entry[0], entry[1]))
    arr = np.asarray(values, dtype=np.complex128)
    if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
        raise ValidationError(f"{what}: non-finite values", module=_MOD)
    return arr


def load_matrix(path: str) -> np.ndarray:
    payload = _load_json(path)
    for key in ("rows", "cols", "data"):
        if key not in payload:
            raise ValidationError(f"{path}: missing field '{key}'", module=_MOD)
    rows, cols = payload["rows"], payload["cols"]
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 1 or cols < 1:
        raise ValidationError(f"{path}: rows/cols must be positive integers", module=_MOD)
    flat = _pairs_to_complex(payload["data"], path)
    if flat.size != rows * cols:
        raise ValidationError(
            f"{path}: data length {flat.size} != rows*cols = {rows * cols}", module=_MOD
        )
    return flat.reshape(rows, cols)


def load_encoding(path: str) -> encoding.BlockEncoding:
    payload = _load_json(path)
    for key in ("ancillas", "system_dim"):
        if key not in payload:
            raise ValidationError(f"{path}: missing field '{key}'", module=_MOD)
    matrix = load_matrix(path)
    try:
        return encoding.BlockEncoding(
            unitary=matrix,
            ancilla_qubits=int(payload["ancillas"]),
            system_dim=int(payload["system_dim"]),
        )
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}", module=_MOD) from None


def load_polynomial(path: str) -> PolynomialSpec:
    payload = _load_json(path)
    if "coefficients" not in payload:
        raise ValidationError(f"{path}: missing field 'coefficients'", module=_MOD)
    return PolynomialSpec(_pairs_to_complex(payload["coefficients"], path))


def _write(path: str | None, text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# commands


def _cmd_dilate(args) -> int:
    a = load_matrix(args.input)
    be = encoding.dilate(a)
    payload = {"ancillas": be.ancilla_qubits, "system_dim": be.system_dim}
    payload.update(matrix_payload(np.asarray(be.unitary)))
    _write(args.output, emit_json(payload))
    return EXIT_OK


def _cmd_regularize(args) -> int:
    be = load_encoding(args.input)
    reg = regularize_encoding(be, args.order)
    payload = {
        "ancillas": reg.base.ancilla_qubits,
        "system_dim": reg.base.system_dim,
        "counter_qubits": reg.counter_qubits,
        "order": reg.order,
        "source_ancillas": reg.source_ancillas,
    }
    payload.update(matrix_payload(np.asarray(reg.base.unitary)))
    _write(args.output, emit_json(payload))
    return EXIT_OK


def _cmd_synthesize(args) -> int:
    poly = load_polynomial(args.coeffs)
    seq = gqsp.synthesize(poly)
    theta = 2 * np.pi * np.arange(args.grid) / args.grid
    pts = np.exp(1j * theta)
    residual = float(
        np.max(np.abs(gqsp.evaluate_scalar(seq, pts) - seq.scale * poly(pts)))
    )
    payload = {
        "degree": seq.degree,
        "scale": seq.scale,
        "grid_residual": residual,
        "rotations": [
            [[float(v.real), float(v.imag)] for v in rot.ravel()] for rot in seq.rotations
        ],
    }
    _write(args.report, emit_json(payload))
    return EXIT_OK if residual <= args.tolerance else EXIT_THRESHOLD


def _transform_report_payload(report: evt.TransformReport) -> dict:
    return {
        "achieved_error": report.achieved_error,
        "predicted_bound": report.predicted_bound,
        "total_ancillas": report.total_ancillas,
        "circuit_dim": report.circuit_dim,
        "encoding_scale": report.encoding_scale,
        "controlled_calls": report.controlled_calls,
        "result": matrix_payload(report.result_block),
    }


def _resolve_polynomial(args) -> PolynomialSpec:
    chosen = [k for k in ("coeffs", "inverse", "exp") if getattr(args, k, None)]
    if len(chosen) != 1:
        raise ValidationError(
            "choose exactly one of --coeffs FILE, --inverse C, --exp", module=_MOD
        )
    if args.coeffs:
        return load_polynomial(args.coeffs)
    if args.inverse:
        try:
            c = complex(args.inverse)
        except ValueError:
            raise ValidationError(f"cannot parse complex shift '{args.inverse}'", module=_MOD)
        return analytic.shifted_inverse_plan(c, args.eps).coefficients
    return analytic.exp_plan(args.eps).coefficients


def _cmd_transform(args) -> int:
    a = load_matrix(args.matrix)
    poly = _resolve_polynomial(args)
    report = evt.transform(a, poly)
    _write(args.report, emit_json(_transform_report_payload(report)))
    return EXIT_OK if report.achieved_error <= args.tolerance else EXIT_THRESHOLD


def _cmd_verify(args) -> int:
    unitary = load_matrix(args.unitary)
    target = load_matrix(args.matrix)
    if target.shape[0] != target.shape[1]:
        raise ValidationError("target matrix must be square", module=_MOD)
    be = encoding.BlockEncoding(
        unitary=unitary, ancilla_qubits=args.ancillas, system_dim=target.shape[0]
    )
    errors = encoding.regularity_profile(be, target, max(args.order, 1))
    order = 0
    for k, err in enumerate(errors, start=1):
        if err > k * args.tolerance + encoding.REGULARITY_FLOOR:
            break
        order = k
    lines = [emit_json({"k": k, "error": err}) for k, err in enumerate(errors, start=1)]
    lines.append(emit_json({"order": order, "requested": args.order, "tolerance": args.tolerance}))
    _write(args.report, "\n".join(lines))
    return EXIT_OK if order >= args.order else EXIT_THRESHOLD


def _random_contraction(rng: np.random.Generator, dim: int, norm: float) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return norm * g / operator_norm(g)


def _cmd_demo(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.which == "inverse":
        plan = analytic.shifted_inverse_plan(2.0, 1e-3)
        a = _random_contraction(rng, 4, 0.9)
        report = evt.transform(a, plan.coefficients)
        reference = np.linalg.inv(2.0 * np.eye(4) - a)
        payload = {
            "demo": "inverse",
            "order": plan.order,
            "certified_error": plan.certified_error,
            "function_error": float(operator_norm(report.result_block - reference)),
        }
    elif args.which == "exp":
        plan = analytic.exp_plan(1e-10)
        a = _random_contraction(rng, 4, 0.9)
        report = evt.transform(a, plan.coefficients)
        reference = analytic.exp_plan(1e-14).coefficients
        payload = {
            "demo": "exp",
            "order": plan.order,
            "certified_error": plan.certified_error,
            "function_error": float(
                operator_norm(report.result_block - horner_eval(reference, a))
            ),
        }
    else:
        block = analytic.jordan_block(0.5, 3)
        cube = PolynomialSpec([0.0, 0.0, 0.0, 1.0])
        report = evt.transform(block, cube)
        expected = analytic.jordan_poly(cube, 0.5, 3)
        payload = {
            "demo": "jordan",
            "eigenvalue": [0.5, 0.0],
            "block_size": 3,
            "toeplitz_error": float(operator_norm(report.result_block - expected)),
        }
    payload["report"] = _transform_report_payload(report)
    _write(args.report, emit_json(payload))
    return EXIT_OK if report.achieved_error <= args.tolerance else EXIT_THRESHOLD


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qevt",
        description="Block-encoded polynomial transformations of square matrices "
        "by exact dense simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, report_default=None):
        p.add_argument("--tolerance", type=float, default=1e-8, help="pass/fail threshold")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized fixtures")
        p.add_argument("--grid", type=int, default=4096, help="circle grid resolution")
        p.add_argument("--report", default=report_default, help="write output here instead of stdout")

    p = sub.add_parser("dilate", help="embed a contraction in a one-ancilla unitary")
    p.add_argument("input", help="matrix JSON file")
    p.add_argument("output", nargs="?", default=None, help="output file (default stdout)")
    p.set_defaults(func=_cmd_dilate)

    p = sub.add_parser("regularize", help="wrap an encoding with a counter register")
    p.add_argument("input", help="encoding JSON file (from dilate)")
    p.add_argument("output", nargs="?", default=None, help="output file (default stdout)")
    p.add_argument("--order", type=int, required=True, help="power-of-two regularity order")
    p.set_defaults(func=_cmd_regularize)

    p = sub.add_parser("synthesize", help="compute processing rotations for a polynomial")
    p.add_argument("--coeffs", required=True, help="polynomial JSON file")
    common(p)
    p.set_defaults(func=_cmd_synthesize)

    p = sub.add_parser("transform", help="block-encode P(A) and report the achieved error")
    p.add_argument("matrix", help="matrix JSON file")
    p.add_argument("--coeffs", default=None, help="polynomial JSON file")
    p.add_argument("--inverse", default=None, metavar="C", help="shifted inverse 1/(c - z)")
    p.add_argument("--exp", action="store_true", help="scaled exponential e^z / 3")
    p.add_argument("--eps", type=float, default=1e-8, help="truncation accuracy for builtins")
    common(p)
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("verify", help="measure the regularity order of an encoding")
    p.add_argument("unitary", help="unitary matrix JSON file")
    p.add_argument("matrix", help="encoded matrix JSON file")
    p.add_argument("--ancillas", type=int, required=True)
    p.add_argument("--order", type=int, required=True, help="required regularity order")
    common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("demo", help="run a worked example end to end")
    p.add_argument("which", choices=("inverse", "exp", "jordan"))
    common(p)
    p.set_defaults(func=_cmd_demo)

    return parser


def _fail(message: str, module: str, code: int) -> int:
    sys.stderr.write(emit_json({"error": message, "module": module, "exit": code}) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NormBoundError as exc:
        return _fail(str(exc), exc.module, EXIT_NORM)
    except ValidationError as exc:
        return _fail(str(exc), exc.module, EXIT_INPUT)
    except NumericalError as exc:
        return _fail(str(exc), exc.module, EXIT_NUMERIC)
    except QevtError as exc:  # safety net: anything else from the library
        return _fail(str(exc), exc.module, EXIT_NUMERIC)


if __name__ == "__main__":
    sys.exit(main())
