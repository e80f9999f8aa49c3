"""
anyonwalk Generators - run artifacts

Writers and readers for the CSV and JSON files produced by the CLI:
variance series, site distributions, level sweeps and moment dumps.
"""

from .artifacts import (
    moments_document,
    read_csv_artifact,
    read_variance_csv,
    write_distributions,
    write_json,
    write_sweep_csv,
    write_variance_csv,
)

__all__ = [
    "moments_document",
    "read_csv_artifact",
    "read_variance_csv",
    "write_distributions",
    "write_json",
    "write_sweep_csv",
    "write_variance_csv",
]
