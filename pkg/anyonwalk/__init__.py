"""
anyonwalk: the V² anyonic quantum walk of SU(2)_k anyons

A walker hops on a ladder threaded by a chain of static anyons; every two
steps its coin and the fusion space are traced out, leaving a completely
positive map on the spatial density matrix whose inputs are Kauffman-bracket
expectations of braid words.

Components:
    - AnyonModel: level k, Kauffman variable A and quantum dimension d
    - markov_expectation: bracket state sum of a braid word's closure
    - TableProvider / OracleProvider: closed-form and state-sum braid moments
    - evolve: exact seven-band superoperator evolution
    - build_fourier_factor / evolve_circulant: Fourier-diagonal approximation
    - classical_rw / coherent_hadamard_qw / disorder_ensemble: reference walks
    - fit_quadratic / fit_slope: variance fits

Usage:
    from anyonwalk import make_model, TableProvider, evolve

    trace = evolve(TableProvider(make_model(3)), t=100)

CLI:
    anyonwalk simulate --mode exact --level 2 --steps 50
    anyonwalk sweep --levels 1,2,3,5,inf --steps 100
    anyonwalk verify-table
"""

try:
    from importlib.metadata import PackageNotFoundError, version

    try:
        __version__ = version("anyonwalk")
    except PackageNotFoundError:
        __version__ = "0.0.0"
except Exception:
    __version__ = "0.0.0"
__description__ = "Exact and circulant simulation of the V² anyonic quantum walk"

from typing import Any

_EXPORTS = {
    "anyon_model": ["AnyonModel", "INFINITY", "make_model", "parse_level", "format_level"],
    "braid_oracle": ["BraidWord", "markov_expectation", "state_sum_bracket"],
    "moment_table": [
        "MomentFamily",
        "MomentMode",
        "TableProvider",
        "OracleProvider",
        "AbelianPhaseProvider",
        "table_moment",
        "averaged_moment",
        "kappas",
    ],
    "exact_evolution": ["WalkTrace", "evolve", "apply_step", "exact_ising_distribution"],
    "circulant_evolution": [
        "build_fourier_factor",
        "evolve_circulant",
        "ising_closed_form",
        "explicit_circulant_channel",
    ],
    "reference_models": [
        "classical_rw",
        "coherent_hadamard_qw",
        "trivial_v2",
        "DisorderConfig",
        "abelian_disorder_evolve",
        "disorder_ensemble",
    ],
    "analysis": ["fit_quadratic", "fit_slope", "raw_variance", "scaled_variance"],
}


def __getattr__(name: str) -> Any:
    """Lazy loading of engine components, so ``import anyonwalk`` stays cheap."""
    import importlib

    for module, names in _EXPORTS.items():
        if name in names:
            return getattr(importlib.import_module(f"anyonwalk.engine.{module}"), name)
    if name == "RunConfig":
        from anyonwalk.config.models import RunConfig

        return RunConfig
    if name == "ConfigManager":
        from anyonwalk.config.manager import ConfigManager

        return ConfigManager
    if name in ("run_simulation", "sweep"):
        from anyonwalk import simulation

        return getattr(simulation, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = [name for names in _EXPORTS.values() for name in names] + [
    "RunConfig",
    "ConfigManager",
    "run_simulation",
    "sweep",
    "__version__",
]
