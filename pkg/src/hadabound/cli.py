"""Command line front end: parse inputs, dispatch, emit JSON reports.

Matrix files use a one-line header `n <rows> <cols> <real|complex>`
followed by one whitespace-separated row per line; complex entries are
written `re,im` with no spaces. Scenario files are JSON documents whose
complex entries are `[re, im]` pairs.

Reports are JSON objects with the fixed key order command, inputs,
results, timing_ms. All numbers are serialized with full round-trip
precision and no run-dependent content is included unless --timing is
given, so identical inputs and seed produce byte-identical reports.

Exit codes: 0 when the requested quantity was computed and its internal
verification passed, 1 when a hypothesis or verification failed (the
report's results.reason says which), 2 for input or usage errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import re
import sys
import time
from importlib import resources

import numpy as np

from .apps import CpScenario, DoaScenario, cp_bound, doa_bound
from .certify import (
    classical_bound,
    indefinite_certificate,
    projection_certificate,
    quantitative_bound,
    shift_construction,
)
from .errors import (
    BudgetExceededError,
    ConvergenceError,
    DimensionError,
    HermitianityError,
    MatrixFormatError,
    NotProjectionError,
    NotPsdError,
    ScenarioFormatError,
    ZeroMatrixError,
    ZeroPivotError,
)
from .matcore import HermitianMatrix, eigvals_hermitian, hadamard, tol_for
from .selftest import run_all
from .submatrix import (
    DEFAULT_BUDGET,
    effective_condition_number,
    kruskal_rank,
    min_submatrix_eigenvalue,
)

_INPUT_ERRORS = (
    MatrixFormatError,
    ScenarioFormatError,
    DimensionError,
    HermitianityError,
    NotPsdError,
    NotProjectionError,
    ZeroMatrixError,
    ZeroPivotError,
    BudgetExceededError,
    ConvergenceError,
    FileNotFoundError,
    ValueError,
)

_TOKEN = re.compile(r"\S+")


def parse_matrix_text(text: str, source: str = "<string>") -> np.ndarray:
    """Parse the matrix file format; errors carry line/column locations."""
    lines = text.splitlines()
    header_idx = None
    for idx, line in enumerate(lines):
        if line.strip():
            header_idx = idx
            break
    if header_idx is None:
        raise MatrixFormatError(f"{source}:1:1: empty file")
    header = lines[header_idx].split()
    if len(header) != 4 or header[0] != "n":
        raise MatrixFormatError(
            f"{source}:{header_idx + 1}:1: header must be 'n <rows> <cols> <real|complex>'"
        )
    try:
        rows, cols = int(header[1]), int(header[2])
    except ValueError:
        raise MatrixFormatError(
            f"{source}:{header_idx + 1}:3: row and column counts must be integers"
        ) from None
    kind = header[3]
    if kind not in ("real", "complex"):
        raise MatrixFormatError(
            f"{source}:{header_idx + 1}:{lines[header_idx].find(kind) + 1}: "
            f"entry kind must be 'real' or 'complex', got {kind!r}"
        )
    if rows < 1 or cols < 1:
        raise MatrixFormatError(
            f"{source}:{header_idx + 1}:3: row and column counts must be positive"
        )

    body = [
        (idx, line)
        for idx, line in enumerate(lines[header_idx + 1 :], start=header_idx + 2)
        if line.strip()
    ]
    if len(body) != rows:
        raise MatrixFormatError(
            f"{source}:{header_idx + 1}:1: expected {rows} data rows, found {len(body)}"
        )
    out = np.zeros((rows, cols), dtype=np.complex128)
    for r, (line_no, line) in enumerate(body):
        tokens = list(_TOKEN.finditer(line))
        if len(tokens) != cols:
            raise MatrixFormatError(
                f"{source}:{line_no}:1: expected {cols} entries, found {len(tokens)}"
            )
        for c, tok in enumerate(tokens):
            col_no = tok.start() + 1
            raw = tok.group()
            if "," in raw:
                if kind != "complex":
                    raise MatrixFormatError(
                        f"{source}:{line_no}:{col_no}: complex entry {raw!r} in a real matrix"
                    )
                parts = raw.split(",")
                if len(parts) != 2:
                    raise MatrixFormatError(
                        f"{source}:{line_no}:{col_no}: malformed complex entry {raw!r}"
                    )
                try:
                    out[r, c] = complex(float(parts[0]), float(parts[1]))
                except ValueError:
                    raise MatrixFormatError(
                        f"{source}:{line_no}:{col_no}: cannot parse complex entry {raw!r}"
                    ) from None
            else:
                try:
                    out[r, c] = float(raw)
                except ValueError:
                    raise MatrixFormatError(
                        f"{source}:{line_no}:{col_no}: cannot parse entry {raw!r}"
                    ) from None
    return out


def parse_matrix(path: str) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_matrix_text(fh.read(), source=path)


def format_matrix(arr) -> str:
    """Inverse of parse_matrix_text with full round-trip precision."""
    mat = np.asarray(arr, dtype=np.complex128)
    if mat.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {mat.shape}")
    kind = "complex" if np.any(mat.imag != 0.0) else "real"
    lines = [f"n {mat.shape[0]} {mat.shape[1]} {kind}"]
    for row in mat:
        if kind == "real":
            lines.append(" ".join(repr(float(z.real)) for z in row))
        else:
            lines.append(" ".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row))
    return "\n".join(lines) + "\n"


def write_matrix(arr, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_matrix(arr))


def _complex_array(obj, field: str) -> np.ndarray:
    """Numbers stay real; [re, im] pairs become complex entries."""

    def convert(cell):
        if isinstance(cell, (int, float)):
            return complex(cell, 0.0)
        if isinstance(cell, list) and len(cell) == 2 and all(
            isinstance(v, (int, float)) for v in cell
        ):
            return complex(cell[0], cell[1])
        raise ScenarioFormatError(
            f"field {field!r}: entries must be numbers or [re, im] pairs, got {cell!r}"
        )

    if not isinstance(obj, list) or not obj or not all(isinstance(row, list) for row in obj):
        raise ScenarioFormatError(f"field {field!r} must be a nonempty list of rows")
    try:
        return np.array([[convert(cell) for cell in row] for row in obj], dtype=np.complex128)
    except ValueError as exc:
        raise ScenarioFormatError(f"field {field!r}: ragged rows ({exc})") from None


def _require_fields(doc: dict, fields: tuple[str, ...], source: str) -> None:
    missing = [f for f in fields if f not in doc]
    if missing:
        raise ScenarioFormatError(f"{source}: missing fields {missing}")


def load_doa_scenario(path: str) -> DoaScenario:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ScenarioFormatError(f"{path}: scenario must be a JSON object")
    _require_fields(doc, ("N", "K", "P", "omega", "sigma_s"), path)
    try:
        sigma = HermitianMatrix(_complex_array(doc["sigma_s"], "sigma_s"))
        return DoaScenario(
            N=int(doc["N"]),
            K=int(doc["K"]),
            P=int(doc["P"]),
            omega=tuple(float(w) for w in doc["omega"]),
            sigma_s=sigma,
        )
    except (TypeError, ValueError, DimensionError, HermitianityError, NotPsdError) as exc:
        raise ScenarioFormatError(f"{path}: {exc}") from exc


def load_cp_scenario(path: str) -> CpScenario:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ScenarioFormatError(f"{path}: scenario must be a JSON object")
    _require_fields(doc, ("d", "A_load", "B_load", "g"), path)
    try:
        a = _complex_array(doc["A_load"], "A_load")
        b = _complex_array(doc["B_load"], "B_load")
        if np.any(a.imag != 0.0) or np.any(b.imag != 0.0):
            raise ScenarioFormatError(f"{path}: loadings must be real")
        g_field = doc["g"]
        if not isinstance(g_field, list) or not g_field:
            raise ScenarioFormatError(f"{path}: field 'g' must be a nonempty list of vectors")
        scores = tuple(np.asarray([float(v) for v in vec], dtype=np.float64) for vec in g_field)
        return CpScenario(d=int(doc["d"]), a_load=a.real, b_load=b.real, g=scores)
    except (TypeError, ValueError, DimensionError) as exc:
        raise ScenarioFormatError(f"{path}: {exc}") from exc


def fixture_path(name: str) -> str:
    """Absolute path of a packaged example input."""
    return str(resources.files("hadabound").joinpath("fixtures", name))


def emit_report(doc: dict, path: str | None) -> None:
    """Serialize with stable key order; same document, same bytes."""
    text = json.dumps(doc, indent=2, allow_nan=False) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _inputs_block(args) -> dict:
    return {
        "a": getattr(args, "a", None),
        "b": getattr(args, "b", None),
        "c": getattr(args, "c", None),
        "p": getattr(args, "p", None),
        "scenario": getattr(args, "scenario", None),
        "m": getattr(args, "m", None),
        "fraction": getattr(args, "fraction", None),
        "tol": args.tol,
        "budget": args.budget,
        "seed": getattr(args, "seed", None),
    }


def _hermitian_from_file(path: str) -> HermitianMatrix:
    return HermitianMatrix(parse_matrix(path))


def _report_fields(report) -> dict:
    return dataclasses.asdict(report)


def _cmd_bound(args) -> tuple[int, dict]:
    a = _hermitian_from_file(args.a)
    b = _hermitian_from_file(args.b)
    if a.n != b.n:
        raise DimensionError(f"operand sizes differ: {a.n} vs {b.n}")
    empty = {
        "status": None,
        "reason": None,
        "n": a.n,
        "r_b": None,
        "mu": None,
        "kappa_eff": None,
        "min_diag": float(np.min(b.diagonal())),
        "classical_bound": None,
        "quantitative_bound": None,
        "actual_lambda_min": None,
        "loewner_verified": None,
        "margin": None,
    }
    # A zero diagonal entry makes every floor vacuous; report that before
    # attempting a definiteness classification.
    diag = b.diagonal()
    if float(np.min(diag)) <= tol_for(float(np.max(np.abs(diag))), args.tol):
        empty["status"] = "failed"
        empty["reason"] = "min_diag is zero"
        return 1, empty
    report = quantitative_bound(a, b, args.tol, args.budget)
    results = {"status": None, "reason": None}
    results.update(_report_fields(report))
    if report.loewner_verified:
        results["status"] = "verified"
        return 0, results
    results["status"] = "failed"
    results["reason"] = "ordering verification failed"
    return 1, results


def _cmd_classical(args) -> tuple[int, dict]:
    a = _hermitian_from_file(args.a)
    b = _hermitian_from_file(args.b)
    value = classical_bound(a, b, args.tol)
    actual = float(eigvals_hermitian(hadamard(a, b))[-1])
    ok = value <= actual + tol_for(abs(actual), args.tol)
    return (0 if ok else 1), {
        "status": "verified" if ok else "failed",
        "reason": None if ok else "bound exceeds the smallest eigenvalue",
        "classical_bound": value,
        "actual_lambda_min": actual,
    }


def _cmd_kruskal(args) -> tuple[int, dict]:
    arr = parse_matrix(args.a)
    value = kruskal_rank(arr, args.tol, args.budget)
    return 0, {"status": "computed", "reason": None, "kruskal_rank": value}


def _cmd_mu(args) -> tuple[int, dict]:
    a = _hermitian_from_file(args.a)
    if args.m is None:
        raise ValueError("--m is required for this command")
    result = min_submatrix_eigenvalue(a, args.m, args.budget)
    return 0, {
        "status": "computed",
        "reason": None,
        "value": result.value,
        "argmin_subset": list(result.argmin_subset),
        "m": result.order,
    }


def _cmd_kappa(args) -> tuple[int, dict]:
    b = _hermitian_from_file(args.b)
    return 0, {
        "status": "computed",
        "reason": None,
        "kappa_eff": effective_condition_number(b, args.tol),
    }


def _cmd_projection(args) -> tuple[int, dict]:
    c = _hermitian_from_file(args.c)
    p = parse_matrix(args.p)
    cert = projection_certificate(c, p, args.tol, args.budget)
    results = {"status": None, "reason": None}
    results.update(_report_fields(cert))
    if cert.hypothesis_holds and cert.conclusion_holds:
        results["status"] = "verified"
        return 0, results
    results["status"] = "failed"
    results["reason"] = (
        "hypothesis not met" if not cert.hypothesis_holds else "conclusion failed"
    )
    return 1, results


def _cmd_certify_indefinite(args) -> tuple[int, dict]:
    b = _hermitian_from_file(args.b)
    shift = None
    if args.c is not None:
        c = _hermitian_from_file(args.c)
    elif args.a is not None:
        fraction = 1.0 if args.fraction is None else args.fraction
        a = _hermitian_from_file(args.a)
        c = shift_construction(a, b, fraction, args.tol, args.budget)
        rep = quantitative_bound(a, b, args.tol, args.budget)
        shift = fraction * rep.mu / rep.kappa_eff
    else:
        raise ValueError("provide --c, or --a with an optional --fraction")
    cert = indefinite_certificate(c, b, args.tol, args.budget)
    results = {"status": None, "reason": None, "shift": shift}
    results.update(_report_fields(cert))
    if cert.hypothesis_holds and cert.conclusion_holds:
        results["status"] = "verified"
        return 0, results
    results["status"] = "failed"
    results["reason"] = (
        "hypothesis not met" if not cert.hypothesis_holds else "conclusion failed"
    )
    return 1, results


def _cmd_doa_bound(args) -> tuple[int, dict]:
    scenario = load_doa_scenario(args.scenario)
    report = doa_bound(scenario, args.tol, args.budget)
    results = {"status": None, "reason": None}
    results.update(_report_fields(report))
    if report.bound_holds:
        results["status"] = "verified"
        return 0, results
    results["status"] = "failed"
    results["reason"] = "bound exceeds the smallest smoothed eigenvalue"
    return 1, results


def _cmd_cp_bound(args) -> tuple[int, dict]:
    scenario = load_cp_scenario(args.scenario)
    report = cp_bound(scenario, args.tol, args.budget)
    results = {"status": None, "reason": None}
    results.update(_report_fields(report))
    if report.core_floor_holds and report.m1_floor_holds:
        results["status"] = "verified"
        return 0, results
    results["status"] = "failed"
    results["reason"] = (
        "core floor failed" if not report.core_floor_holds else "moment floor failed"
    )
    return 1, results


def _cmd_selftest(args) -> tuple[int, dict]:
    results = run_all(seed=args.seed, scale=args.scale)
    suites = [
        {
            "name": r.name,
            "trials": r.trials,
            "failures": r.failures,
            "details": r.details,
        }
        for r in results
    ]
    all_passed = all(r.passed for r in results)
    return (0 if all_passed else 1), {
        "status": "verified" if all_passed else "failed",
        "reason": None if all_passed else "at least one suite failed",
        "suites": suites,
        "total_failures": int(sum(r.failures for r in results)),
        "all_passed": all_passed,
    }


_COMMANDS = {
    "bound": _cmd_bound,
    "classical": _cmd_classical,
    "kruskal": _cmd_kruskal,
    "mu": _cmd_mu,
    "kappa": _cmd_kappa,
    "projection": _cmd_projection,
    "certify-indefinite": _cmd_certify_indefinite,
    "doa-bound": _cmd_doa_bound,
    "cp-bound": _cmd_cp_bound,
    "selftest": _cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hadabound",
        description="Certified eigenvalue floors for entrywise matrix products.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tol", type=float, default=1e-9, help="relative tolerance")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="subset budget")
        p.add_argument("--json", dest="json_path", default=None, help="write the report here")
        p.add_argument("--timing", action="store_true", help="include wall time in the report")

    p = sub.add_parser("bound", help="certified floor for lambda_min of A o B")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    common(p)

    p = sub.add_parser("classical", help="floor lambda_min(A) * min diag(B)")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    common(p)

    p = sub.add_parser("kruskal", help="Kruskal rank of a matrix")
    p.add_argument("--a", required=True)
    common(p)

    p = sub.add_parser("mu", help="minimum submatrix eigenvalue at order m")
    p.add_argument("--a", required=True)
    p.add_argument("--m", type=int, required=True)
    common(p)

    p = sub.add_parser("kappa", help="effective condition number")
    p.add_argument("--b", required=True)
    common(p)

    p = sub.add_parser("projection", help="certificate for C o P with a projection P")
    p.add_argument("--c", required=True)
    p.add_argument("--p", required=True)
    common(p)

    p = sub.add_parser(
        "certify-indefinite", help="certificate for C o B with Hermitian C, PSD B"
    )
    p.add_argument("--c", default=None)
    p.add_argument("--a", default=None, help="build C by shifting A down by its floor")
    p.add_argument("--b", required=True)
    p.add_argument("--fraction", type=float, default=None)
    common(p)

    p = sub.add_parser("doa-bound", help="floor for a smoothed source covariance")
    p.add_argument("--scenario", required=True)
    common(p)

    p = sub.add_parser("cp-bound", help="floors for a factor-model moment matrix")
    p.add_argument("--scenario", required=True)
    common(p)

    p = sub.add_parser("selftest", help="run the seeded property suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=float, default=1.0, help="trial count multiplier")
    common(p)

    return parser


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    start = time.perf_counter()
    try:
        code, results = _COMMANDS[args.command](args)
    except _INPUT_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    doc = {
        "command": args.command,
        "inputs": _inputs_block(args),
        "results": results,
        "timing_ms": elapsed_ms if args.timing else None,
    }
    emit_report(doc, args.json_path)
    return code


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
