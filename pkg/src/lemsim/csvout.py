"""Deterministic CSV serialization of results.

Every emitter produces a '#'-prefixed metadata block (artifact version,
seed, config echo), a header row and data rows.  Reals are written in
scientific notation with 17 significant digits so parsing the text
reproduces the in-memory doubles exactly; identical inputs yield
byte-identical output.
"""

from __future__ import annotations

import sys
from typing import Iterable

from ._version import __version__
from .cluster import config_to_bits
from .dynamics import CoherenceTrace
from .errors import ValidationError
from .perturbation import PathSumResult
from .spectrum import EigenSystem, LandscapeReport, OverlapDecay
from .sweep import SweepRow
from .transition import RateReport


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.16e}"
    return str(value)


def _metadata(config_text: str, seed: int | None) -> list[str]:
    lines = [f"# lemsim {__version__}"]
    if seed is not None:
        lines.append(f"# seed = {seed}")
    if config_text:
        lines.append("# config-begin")
        for line in config_text.rstrip("\n").splitlines():
            lines.append(f"# {line}" if line else "#")
        lines.append("# config-end")
    return lines


def _table(header: Iterable[str], records: Iterable[Iterable]) -> list[str]:
    lines = [",".join(header)]
    for record in records:
        lines.append(",".join(format_value(v) for v in record))
    return lines


def emit_sweep_rows(rows: list[SweepRow], config_text: str = "", seed: int | None = None) -> str:
    header = SweepRow.columns()
    records = [
        [getattr(row, col) for col in header]
        for row in rows
    ]
    return "\n".join(_metadata(config_text, seed) + _table(header, records)) + "\n"


def emit_trace(trace: CoherenceTrace, config_text: str = "", seed: int | None = None) -> str:
    header = (
        "time",
        "coherence",
        "ensemble_coherence",
        "fitted_rate",
        "fit_quality",
        "rate_is_upper_limit",
        "ensemble_rate",
        "ensemble_fit_quality",
    )
    records = [
        (
            float(t),
            float(c),
            float(e),
            trace.fitted_rate,
            trace.fit_quality,
            trace.rate_is_upper_limit,
            trace.ensemble_rate,
            trace.ensemble_fit_quality,
        )
        for t, c, e in zip(trace.times, trace.coherence, trace.ensemble_coherence)
    ]
    return "\n".join(_metadata(config_text, seed) + _table(header, records)) + "\n"


def emit_rate_report(report: RateReport, config_text: str = "", seed: int | None = None) -> str:
    n = len(report.z_channel)
    header = (
        ["matrix_element", "rate_ratio", "rate_bound", "bound_satisfied", "bound_margin"]
        + [f"z_channel_{i}" for i in range(n)]
        + [f"x_channel_{i}" for i in range(n)]
    )
    record = (
        [report.matrix_element, report.rate_ratio, report.bound, report.bound_satisfied, report.bound_margin]
        + list(report.z_channel)
        + list(report.x_channel)
    )
    return "\n".join(_metadata(config_text, seed) + _table(header, [record])) + "\n"


def emit_landscape(
    report: LandscapeReport, n: int, config_text: str = "", seed: int | None = None
) -> str:
    header = ("configuration", "energy", "distance_to_global", "is_global")
    records = [(config_to_bits(report.global_config, n), report.global_energy, 0, True)]
    for m in report.local_minima:
        records.append((config_to_bits(m.config, n), m.energy, m.distance_to_global, False))
    return "\n".join(_metadata(config_text, seed) + _table(header, records)) + "\n"


def emit_eigensystem(eig: EigenSystem, config_text: str = "", seed: int | None = None) -> str:
    header = ("index", "eigenvalue")
    records = [(k, float(v)) for k, v in enumerate(eig.values)]
    return "\n".join(_metadata(config_text, seed) + _table(header, records)) + "\n"


def emit_overlap_decay(
    decays: list[OverlapDecay], n: int, config_text: str = "", seed: int | None = None
) -> str:
    header = ("anchor", "distance", "max_amplitude", "fitted_slope")
    records = []
    for decay in decays:
        for k, amp in zip(decay.distances, decay.max_amplitudes):
            records.append((config_to_bits(decay.anchor, n), k, amp, decay.slope))
    return "\n".join(_metadata(config_text, seed) + _table(header, records)) + "\n"


def emit_path_sums(
    results: list[PathSumResult],
    n: int,
    slope: float | None,
    config_text: str = "",
    seed: int | None = None,
) -> str:
    header = ("order", "source", "target", "amplitude", "path_count", "rate_ratio", "fitted_slope")
    records = [
        (
            r.order,
            config_to_bits(r.source, n),
            config_to_bits(r.target, n),
            r.amplitude,
            r.path_count,
            r.rate_ratio,
            slope,
        )
        for r in results
    ]
    return "\n".join(_metadata(config_text, seed) + _table(header, records)) + "\n"


def emit_csv(obj, config_text: str = "", seed: int | None = None, n: int | None = None) -> str:
    """Serialize a result object to CSV text (dispatch by type)."""
    if isinstance(obj, CoherenceTrace):
        return emit_trace(obj, config_text, seed)
    if isinstance(obj, RateReport):
        return emit_rate_report(obj, config_text, seed)
    if isinstance(obj, EigenSystem):
        return emit_eigensystem(obj, config_text, seed)
    if isinstance(obj, LandscapeReport):
        if n is None:
            raise ValidationError("landscape serialization needs the spin count n")
        return emit_landscape(obj, n, config_text, seed)
    if isinstance(obj, list):
        if not obj or isinstance(obj[0], SweepRow):
            return emit_sweep_rows(obj, config_text, seed)
    raise ValidationError(f"no CSV emitter for {type(obj).__name__}")


def write_output(text: str, destination: str | None) -> None:
    """Write CSV text to a path, or stdout when destination is None."""
    if destination is None:
        sys.stdout.write(text)
    else:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
