"""State files, analysis reports, and deterministic emission.

Input states are JSON objects {"d": int, "rho": [[[re, im], ...], ...]}
with rho row-major in the a*d + b index convention.  Output floats are
rendered with 17 significant digits, which round-trips binary64 exactly
and keeps repeated runs byte-identical.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass

import numpy as np

from .case_study import GridRow, log_negativity
from .ensembles import ScanStatistics
from .linalg import TOL, ValidationError
from .optimizer import (
    ChshResult,
    OptimizerConfig,
    bell_value,
    max_chsh,
)
from .seesaw import seesaw_max
from .states import (
    QubitQuditState,
    decompose,
    diagnose,
    purity,
    purity_violation_bound,
)


class StateFileError(ValidationError):
    """A state file failed to parse or validate; carries the failed stage."""

    def __init__(self, reason: str, message: str):
        super().__init__(f"{reason}: {message}")
        self.reason = reason


def parse_state(text: str | bytes) -> QubitQuditState:
    """Parse and validate a JSON state file."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError("parse", f"invalid JSON ({exc})") from exc

    if not isinstance(payload, dict) or "d" not in payload or "rho" not in payload:
        raise StateFileError("shape", 'expected an object with fields "d" and "rho"')
    d = payload["d"]
    if not isinstance(d, int) or d < 2:
        raise StateFileError("shape", f'"d" must be an integer >= 2, got {d!r}')

    dim = 2 * d
    raw = payload["rho"]
    if not isinstance(raw, list) or len(raw) != dim:
        raise StateFileError(
            "shape", f'"rho" must be a {dim}x{dim} array of [re, im] pairs'
        )
    rho = np.empty((dim, dim), dtype=complex)
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != dim:
            raise StateFileError("shape", f"row {i} must have {dim} entries")
        for j, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(v, (int, float)) for v in entry)
            ):
                raise StateFileError(
                    "shape", f"entry ({i}, {j}) must be a [re, im] pair"
                )
            rho[i, j] = complex(entry[0], entry[1])

    health = diagnose(rho)
    if health.hermiticity_defect > TOL.hermiticity_atol:
        raise StateFileError(
            "hermiticity",
            f"worst defect {health.hermiticity_defect:.3e} exceeds "
            f"{TOL.hermiticity_atol:.1e}",
        )
    if health.trace_defect > TOL.trace_atol:
        raise StateFileError(
            "trace",
            f"trace = {float(np.trace(rho).real):.6g} "
            f"(expected 1 within {TOL.trace_atol:.1e})",
        )
    if health.min_eigenvalue < -TOL.psd_atol:
        raise StateFileError(
            "psd",
            f"min eigenvalue {health.min_eigenvalue:.3e} < -{TOL.psd_atol:.1e}",
        )
    return QubitQuditState(d=d, rho=rho)


def format_state(state: QubitQuditState) -> str:
    """Serialize a state back to the JSON file format."""
    rho = [[[v.real, v.imag] for v in row] for row in state.rho]
    return _dumps({"d": state.d, "rho": rho}) + "\n"


@dataclass(frozen=True)
class AnalysisReport:
    d: int
    result: ChshResult
    purity: float
    purity_threshold: float
    purity_condition_satisfied: bool
    log_negativity: float
    bell_value_check: float
    seesaw_value: float | None
    timing: dict[str, float] | None


def analyze_state(
    state: QubitQuditState,
    config: OptimizerConfig = OptimizerConfig(),
    seesaw_check: bool = False,
    seed: int = 0,
) -> AnalysisReport:
    """Full analysis of one state: maximum, bounds, observables, checks."""
    t0 = time.perf_counter()
    betas = decompose(state)
    result = max_chsh(betas, config)
    t_optimize = time.perf_counter() - t0

    certificate = bell_value(
        state, result.A, result.Aprime, result.B, result.Bprime
    )
    threshold, satisfied = purity_violation_bound(state)

    seesaw_value = None
    t_seesaw = 0.0
    if seesaw_check:
        t1 = time.perf_counter()
        seesaw_value = seesaw_max(state, n_starts=16, seed=seed).value
        t_seesaw = time.perf_counter() - t1

    timing = {"optimize_s": t_optimize, "total_s": time.perf_counter() - t0}
    if seesaw_check:
        timing["seesaw_s"] = t_seesaw
    return AnalysisReport(
        d=state.d,
        result=result,
        purity=purity(state),
        purity_threshold=threshold,
        purity_condition_satisfied=satisfied,
        log_negativity=log_negativity(state),
        bell_value_check=certificate,
        seesaw_value=seesaw_value,
        timing=timing,
    )


# -- deterministic rendering -------------------------------------------------


def _fmt_float(x: float) -> str:
    if not np.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    return f"{float(x):.17g}"


def _dumps(obj, indent: int = 0) -> str:
    """JSON with floats at 17 significant digits; keys keep insertion order."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{pad}  {json.dumps(k)}: {_dumps(v, indent + 1)}'
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rendered = [_dumps(v, indent + 1) for v in obj]
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(rendered) + "]"
        items = [f"{pad}  {r}" for r in rendered]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _matrix_payload(M: np.ndarray) -> list:
    return [[[v.real, v.imag] for v in row] for row in M]


def report_payload(report: AnalysisReport, with_timing: bool = True) -> dict:
    r = report.result
    payload = {
        "d": report.d,
        "value": r.value,
        "violates": r.violates,
        "lower": r.lower,
        "upper": r.upper,
        "rotation": {
            "alpha": r.rotation.alpha,
            "beta": r.rotation.beta,
            "gamma": r.rotation.gamma,
        },
        "purity": report.purity,
        "purity_threshold": report.purity_threshold,
        "purity_condition_satisfied": report.purity_condition_satisfied,
        "log_negativity": report.log_negativity,
        "bell_value_check": report.bell_value_check,
        "seesaw_value": report.seesaw_value,
        "observables": {
            "A": {"axis": list(r.A.axis), "matrix": _matrix_payload(r.A.matrix)},
            "Aprime": {
                "axis": list(r.Aprime.axis),
                "matrix": _matrix_payload(r.Aprime.matrix),
            },
            "B": {"matrix": _matrix_payload(r.B.matrix)},
            "Bprime": {"matrix": _matrix_payload(r.Bprime.matrix)},
        },
    }
    if with_timing and report.timing is not None:
        payload["timing"] = dict(report.timing)
    return payload


def report_to_json(report: AnalysisReport, with_timing: bool = True) -> str:
    return _dumps(report_payload(report, with_timing)) + "\n"


_REPORT_CSV_FIELDS = (
    "d",
    "value",
    "violates",
    "lower",
    "upper",
    "alpha",
    "beta",
    "gamma",
    "purity",
    "purity_threshold",
    "purity_condition_satisfied",
    "log_negativity",
    "bell_value_check",
    "seesaw_value",
)


def report_to_csv(report: AnalysisReport) -> str:
    r = report.result
    row = {
        "d": str(report.d),
        "value": _fmt_float(r.value),
        "violates": _fmt_bool(r.violates),
        "lower": _fmt_float(r.lower),
        "upper": _fmt_float(r.upper),
        "alpha": _fmt_float(r.rotation.alpha),
        "beta": _fmt_float(r.rotation.beta),
        "gamma": _fmt_float(r.rotation.gamma),
        "purity": _fmt_float(report.purity),
        "purity_threshold": _fmt_float(report.purity_threshold),
        "purity_condition_satisfied": _fmt_bool(report.purity_condition_satisfied),
        "log_negativity": _fmt_float(report.log_negativity),
        "bell_value_check": _fmt_float(report.bell_value_check),
        "seesaw_value": (
            "" if report.seesaw_value is None else _fmt_float(report.seesaw_value)
        ),
    }
    header = ",".join(_REPORT_CSV_FIELDS)
    return header + "\n" + ",".join(row[f] for f in _REPORT_CSV_FIELDS) + "\n"


def _fmt_bool(b: bool) -> str:
    return "true" if b else "false"


def _fmt_sig12(x: float) -> str:
    return f"{float(x):.12g}"


def scan_to_csv(stats: ScanStatistics) -> str:
    """Summary line plus the 60-bin histogram."""
    lines = [
        "d,n_samples,p_violation,mean,stddev,"
        "lower_rel_error_mean,lower_rel_error_max",
        ",".join(
            [
                str(stats.d),
                str(stats.n_samples),
                _fmt_float(stats.p_violation),
                _fmt_float(stats.mean),
                _fmt_float(stats.stddev),
                _fmt_float(stats.lower_rel_error_mean),
                _fmt_float(stats.lower_rel_error_max),
            ]
        ),
        "",
        "bin_left,bin_right,count",
    ]
    for i, count in enumerate(stats.counts):
        lines.append(
            f"{_fmt_float(stats.bin_edges[i])},"
            f"{_fmt_float(stats.bin_edges[i + 1])},{int(count)}"
        )
    return "\n".join(lines) + "\n"


GRID_CSV_HEADER = "x,y,E,B,lower,upper,entangled,violates,excluded_by_upper"


def grid_to_csv(rows: list[GridRow]) -> str:
    """Case-study grid at 12 significant digits."""
    lines = [GRID_CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    _fmt_sig12(r.x),
                    _fmt_sig12(r.y),
                    _fmt_sig12(r.E),
                    _fmt_sig12(r.B),
                    _fmt_sig12(r.lower),
                    _fmt_sig12(r.upper),
                    _fmt_bool(r.entangled),
                    _fmt_bool(r.violates),
                    _fmt_bool(r.excluded_by_upper),
                ]
            )
        )
    return "\n".join(lines) + "\n"
