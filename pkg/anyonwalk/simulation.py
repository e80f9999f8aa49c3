"""
Run dispatch: turns a RunConfig into a WalkTrace with the engine it names.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from anyonwalk.config.models import ProviderKind, RunConfig, SimulationMode
from anyonwalk.engine.analysis import VarianceFit, fit_slope, trailing_window
from anyonwalk.engine.anyon_model import AnyonModel, format_level, make_model
from anyonwalk.engine.circulant_evolution import (
    build_fourier_factor,
    evolve_circulant,
    ising_closed_form,
)
from anyonwalk.engine.exact_evolution import WalkTrace, evolve
from anyonwalk.engine.moment_table import (
    OracleProvider,
    TableProvider,
    TranslationInvariantProvider,
)
from anyonwalk.engine.reference_models import (
    DisorderConfig,
    DisorderEnsemble,
    SiteDistribution,
    abelian_disorder_evolve,
    classical_rw,
    coherent_hadamard_qw,
    disorder_ensemble,
)
from anyonwalk.engine.runner import LevelResult, SweepReport, run_sweep
from anyonwalk.exceptions import AnyonWalkError

logger = logging.getLogger(__name__)


@dataclass
class SimulationResult:
    """A finished run and the numbers reported about it."""

    config: RunConfig
    trace: WalkTrace
    slope: Optional[VarianceFit] = None
    ensemble: Optional[DisorderEnsemble] = None
    extras: Dict[str, Any] = field(default_factory=dict)


def build_provider(kind: ProviderKind, model: AnyonModel) -> TranslationInvariantProvider:
    if kind is ProviderKind.ORACLE:
        return OracleProvider(model)
    return TableProvider(model)


def disorder_config(config: RunConfig) -> DisorderConfig:
    settings = config.disorder
    return DisorderConfig(
        phase=settings.phase,
        occupation=settings.occupation,
        fill_p=settings.fill_p,
        fixed_filling=settings.fixed_filling,
        seed=settings.seed,
    )


def _start(config: RunConfig) -> int:
    return config.s0 if config.s0 is not None else config.ring_size // 2


def _trace_from(
    config: RunConfig, mode: str, distribution_at: Callable[[int], SiteDistribution]
) -> WalkTrace:
    """Place line distributions (positions relative to the start) on the ring."""
    n, start = config.ring_size, _start(config)
    trace = WalkTrace(s0=start, n_sites=n, mode=mode, label=mode)
    for t in range(config.steps + 1):
        dist = distribution_at(t)
        p = np.zeros(n)
        np.add.at(p, (start + dist.positions) % n, dist.probabilities)
        trace.record(t, p)
    return trace


def run_simulation(config: RunConfig) -> SimulationResult:
    """
    Run the engine selected by ``config.mode``.

    Raises:
        AnyonWalkError: any engine failure (trace drift, singular normalization, ...)
    """
    began = time.perf_counter()
    model = make_model(config.level)
    t, n, start = config.steps, config.ring_size, _start(config)
    ensemble = None

    if config.mode is SimulationMode.EXACT:
        provider = build_provider(config.provider, model)
        trace = evolve(
            provider,
            t,
            s0=start,
            n_sites=n,
            check_positivity=config.check_positivity,
            label=model.label,
        )
    elif config.mode is SimulationMode.CIRCULANT:
        provider = build_provider(config.provider, model)
        factor = build_fourier_factor(
            model,
            n,
            mode=config.moment_mode,
            regularize=config.regularize,
            provider=provider if config.provider is ProviderKind.ORACLE else None,
        )
        trace = evolve_circulant(factor, t, s0=start)
        trace.metadata["fourier"] = factor.to_dict()
    elif config.mode is SimulationMode.CLOSED_FORM:
        sites = np.arange(n)
        trace = WalkTrace(s0=start, n_sites=n, mode="closed-form", label=model.label)
        for step in range(t + 1):
            trace.record(step, ising_closed_form(sites, step, start))
    elif config.mode is SimulationMode.RW:
        trace = _trace_from(config, "rw", lambda step: classical_rw(2 * step))
    elif config.mode is SimulationMode.QW:
        trace = _trace_from(config, "qw", lambda step: coherent_hadamard_qw(2 * step))
    else:
        settings = disorder_config(config)
        if config.disorder.seeds > 1:
            ensemble = disorder_ensemble(
                t,
                settings,
                seeds=config.disorder.seeds,
                s0=start,
                n_sites=n,
                workers=config.workers,
            )
            trace = ensemble.averaged_trace()
        else:
            trace = abelian_disorder_evolve(t, settings, s0=start, n_sites=n)

    trace.duration_s = time.perf_counter() - began
    result = SimulationResult(config=config, trace=trace, ensemble=ensemble)
    result.slope = trailing_slope(trace)
    logger.info(
        "%s run at level %s finished in %.2fs", config.mode.value, model.label, trace.duration_s
    )
    return result


def trailing_slope(trace: WalkTrace) -> Optional[VarianceFit]:
    """Linear fit of raw σ² against walk steps over the last half of the run."""
    steps, variance = trace.figure_series()
    if len(steps) < 6:
        return None
    return fit_slope(steps, variance, trailing_window(steps))


# =============================================================================
# Sweeps
# =============================================================================


def _level_worker(task: Dict[str, Any]) -> LevelResult:
    """Run one level of a sweep (module level so it pickles)."""
    start_time = time.perf_counter()
    label = str(task.get("level"))
    try:
        config = RunConfig.from_dict(task)
        label = config.level_label
        result = run_simulation(config)
        trace = result.trace
        steps, raw = trace.figure_series()
        t, scaled = trace.scaled_series()
        return LevelResult(
            level=label,
            success=True,
            duration_s=time.perf_counter() - start_time,
            final_sigma2_raw=trace.final.sigma2_raw,
            final_sigma2_scaled=trace.final.sigma2_scaled,
            slope=result.slope.K3 if result.slope else None,
            series={
                "t": t.tolist(),
                "steps": steps.tolist(),
                "sigma2_scaled": scaled.tolist(),
                "sigma2_raw": raw.tolist(),
            },
        )
    except (AnyonWalkError, ValueError) as e:
        # pydantic ValidationError is a ValueError
        return LevelResult(
            level=label,
            success=False,
            duration_s=time.perf_counter() - start_time,
            error=getattr(e, "message", str(e)),
            error_type=type(e).__name__,
        )


def sweep(
    config: RunConfig,
    levels: Sequence[Union[int, float]],
    progress: Optional[Callable[[int, int], None]] = None,
) -> SweepReport:
    """Run ``config`` once per level across worker processes."""
    base = config.to_dict()
    tasks: List[Dict[str, Any]] = []
    for level in levels:
        task = dict(base)
        task["level"] = format_level(level)
        task["workers"] = 1
        tasks.append(task)
    logger.info("Sweep over levels %s, mode %s", [t["level"] for t in tasks], config.mode.value)
    return run_sweep(
        _level_worker,
        tasks,
        mode=config.mode.value,
        steps=config.steps,
        workers=config.workers,
        progress=progress,
    )
