"""
Artifact Writers: CSV and JSON outputs of simulation runs

Every CSV starts with a ``# `` comment holding a compact JSON header
(artifact name, package version, the full run configuration), followed by
a header row and data rows. Floats carry 12 significant digits, and nothing
time-dependent enters a file, so identical configurations give identical
files.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from anyonwalk import __version__
from anyonwalk.engine.anyon_model import format_level, make_model
from anyonwalk.engine.exact_evolution import WalkTrace
from anyonwalk.engine.moment_table import (
    BAND_PAIRS,
    MomentMode,
    OracleProvider,
    TableProvider,
    all_family_moments,
    asymptotic_moment,
    averaged_moment,
    kappas,
)
from anyonwalk.engine.runner import SweepReport
from anyonwalk.exceptions import FileReadError
from anyonwalk.utils import atomic_write, safe_read_file

logger = logging.getLogger(__name__)

ARTIFACT_NAME = "anyonwalk"
FLOAT_FORMAT = ".12g"

VARIANCE_COLUMNS = ("t", "steps", "sigma2_scaled", "sigma2_raw")
DISTRIBUTION_COLUMNS = ("t", "s", "shat", "p")
SWEEP_COLUMNS = ("level", "t", "steps", "sigma2_scaled", "sigma2_raw")

PathLike = Union[str, Path]


# =============================================================================
# Formatting
# =============================================================================


def format_value(value: Any) -> str:
    """Integers verbatim, floats with 12 significant digits."""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), FLOAT_FORMAT)
    return str(value)


def header_line(config: Mapping[str, Any], run: Optional[Mapping[str, Any]] = None) -> str:
    """The ``# {json}`` first line of every CSV artifact."""
    header: Dict[str, Any] = {
        "artifact": ARTIFACT_NAME,
        "version": __version__,
        "config": dict(config),
    }
    if run:
        header["run"] = dict(run)
    return "# " + json.dumps(header, sort_keys=True, separators=(",", ":"), default=_json_default)


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def render_csv(
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    config: Mapping[str, Any],
    run: Optional[Mapping[str, Any]] = None,
) -> str:
    buffer = io.StringIO()
    buffer.write(header_line(config, run) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(value) for value in row])
    return buffer.getvalue()


def _run_metadata(trace: WalkTrace) -> Dict[str, Any]:
    metadata = trace.to_dict()
    metadata.pop("duration_s", None)
    return metadata


# =============================================================================
# Writers
# =============================================================================


def write_variance_csv(path: PathLike, trace: WalkTrace, config: Mapping[str, Any]) -> Path:
    """One row per iteration: t, steps, sigma2_scaled, sigma2_raw."""
    rows = ((s.t, s.steps, s.sigma2_scaled, s.sigma2_raw) for s in trace)
    text = render_csv(VARIANCE_COLUMNS, rows, config, _run_metadata(trace))
    return atomic_write(path, text)


def distribution_rows(trace: WalkTrace, t: int) -> List[Tuple[int, int, float, float]]:
    snapshot = trace.at(t)
    shat = (trace.sites - trace.s0) / 2.0
    return [
        (t, int(s), float(h), float(p))
        for s, h, p in zip(trace.sites, shat, snapshot.distribution)
    ]


def write_distribution_csv(
    path: PathLike, trace: WalkTrace, t: int, config: Mapping[str, Any]
) -> Path:
    """Site distribution at iteration ``t``: t, s, shat = (s - s0)/2, p."""
    text = render_csv(DISTRIBUTION_COLUMNS, distribution_rows(trace, t), config, {"t": t})
    return atomic_write(path, text)


def write_distributions(
    output_dir: PathLike,
    trace: WalkTrace,
    times: Sequence[int],
    config: Mapping[str, Any],
) -> List[Path]:
    """``dist_t<t>.csv`` for each requested iteration (the final one if none)."""
    wanted = list(times) or [trace.final.t]
    available = set(int(t) for t in trace.iterations)
    written = []
    for t in wanted:
        if t not in available:
            logger.warning("No snapshot at t=%d, distribution skipped", t)
            continue
        path = Path(output_dir) / f"dist_t{t}.csv"
        written.append(write_distribution_csv(path, trace, t, config))
    return written


def write_sweep_csv(
    output_dir: PathLike, report: SweepReport, config: Mapping[str, Any]
) -> List[Path]:
    """
    Combined ``sweep.csv`` plus one ``variance_k<level>.csv`` per successful level.
    """
    out = Path(output_dir)
    written = []
    combined: List[Tuple[Any, ...]] = []
    for result in report.results:
        if not result.success:
            continue
        series = result.series
        rows = list(
            zip(series["t"], series["steps"], series["sigma2_scaled"], series["sigma2_raw"])
        )
        level_rows = [(int(t), int(steps), scaled, raw) for t, steps, scaled, raw in rows]
        combined.extend((result.level, *row) for row in level_rows)
        level_config = {**config, "level": result.level}
        text = render_csv(VARIANCE_COLUMNS, level_rows, level_config, {"level": result.level})
        written.append(atomic_write(out / f"variance_k{result.level}.csv", text))

    summary = {
        "levels": [r.level for r in report.results],
        "failed": [r.level for r in report.failed],
    }
    text = render_csv(SWEEP_COLUMNS, combined, config, summary)
    written.insert(0, atomic_write(out / "sweep.csv", text))
    return written


def write_json(path: PathLike, document: Mapping[str, Any]) -> Path:
    """Pretty JSON document with the standard artifact fields added."""
    payload = {"artifact": ARTIFACT_NAME, "version": __version__, **document}
    text = json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n"
    return atomic_write(path, text)


# =============================================================================
# Reader
# =============================================================================


def read_csv_artifact(path: PathLike) -> Tuple[Dict[str, Any], Dict[str, np.ndarray]]:
    """
    Read a CSV artifact into (header, columns).

    Comment lines other than a JSON header are ignored, so plain CSV files
    with the same columns are accepted too.

    Raises:
        FileReadError: if the file is missing, empty or has non-numeric cells
    """
    text = safe_read_file(path)
    header: Dict[str, Any] = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            if not header:
                try:
                    header = json.loads(line.lstrip("#").strip())
                except json.JSONDecodeError:
                    header = {}
            continue
        if line.strip():
            body.append(line)
    if not body:
        raise FileReadError(str(path), reason="no CSV header row")

    reader = csv.reader(body)
    names = [name.strip() for name in next(reader)]
    values: Dict[str, List[float]] = {name: [] for name in names}
    for lineno, row in enumerate(reader, start=2):
        if len(row) != len(names):
            raise FileReadError(str(path), reason=f"row {lineno} has {len(row)} cells")
        for name, cell in zip(names, row):
            try:
                values[name].append(float(cell))
            except ValueError:
                if name == "level":
                    values[name].append(float("inf") if cell.strip() == "inf" else float("nan"))
                else:
                    raise FileReadError(
                        str(path), reason=f"non-numeric {name!r} in row {lineno}"
                    ) from None
    return header, {name: np.array(column) for name, column in values.items()}


def read_variance_csv(path: PathLike) -> Dict[str, np.ndarray]:
    """
    Columns of a variance CSV; ``steps`` and ``sigma2_raw`` are derived
    from ``t`` and ``sigma2_scaled`` when absent.
    """
    _, columns = read_csv_artifact(path)
    if "t" not in columns:
        raise FileReadError(str(path), reason="missing 't' column")
    if "steps" not in columns:
        columns["steps"] = 2.0 * columns["t"]
    if "sigma2_raw" not in columns and "sigma2_scaled" in columns:
        columns["sigma2_raw"] = 4.0 * columns["sigma2_scaled"]
    if "sigma2_scaled" not in columns and "sigma2_raw" in columns:
        columns["sigma2_scaled"] = columns["sigma2_raw"] / 4.0
    if "sigma2_raw" not in columns:
        raise FileReadError(str(path), reason="no variance column")
    return columns


# =============================================================================
# Moment dump
# =============================================================================


def _complex_pair(value: complex) -> List[float]:
    return [float(value.real), float(value.imag)]


def moments_document(
    level: Union[int, float], offsets: Sequence[int], n_sites: int = 64
) -> Dict[str, Any]:
    """
    All moment data of one level: both providers for every family and offset,
    averaged band-pair moments on an ``n_sites`` ring, and both κ pairs.
    """
    model = make_model(level)
    offsets = [int(offset) for offset in offsets]
    table = all_family_moments(TableProvider(model), offsets)
    oracle = all_family_moments(OracleProvider(model), offsets)
    return {
        "level": format_level(level),
        "A": _complex_pair(model.A),
        "d": model.d,
        "offsets": offsets,
        "families": {
            name: {
                "table": [_complex_pair(v) for v in table[name]],
                "oracle": [_complex_pair(v) for v in oracle[name]],
            }
            for name in table
        },
        "averaged": {
            "n_sites": n_sites,
            "finite": {p: _complex_pair(averaged_moment(p, n_sites, model)) for p in BAND_PAIRS},
            "asymptotic": {p: _complex_pair(asymptotic_moment(p, model)) for p in BAND_PAIRS},
        },
        "kappa": {
            "finite": kappas(model, MomentMode.FINITE, n_sites).to_dict(),
            "asymptotic": kappas(model, MomentMode.ASYMPTOTIC).to_dict(),
        },
    }
