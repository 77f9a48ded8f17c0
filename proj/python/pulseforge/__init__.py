"""Pulsed-OFDM radar waveform design by evolutionary optimization."""

from ._core import (
    Error,
    PulseSpec,
    autocorrelation,
    config_reference,
    dimension,
    evaluate,
    illuminate,
    newman_phases,
    noncoded_phases,
    optimize_moo,
    optimize_pmepr,
    pmepr,
    pmepr_threshold,
    random_mask,
    random_phases,
    run_experiment,
    synthesize,
)

__all__ = [
    "Error",
    "PulseSpec",
    "autocorrelation",
    "config_reference",
    "dimension",
    "evaluate",
    "illuminate",
    "newman_phases",
    "noncoded_phases",
    "optimize_moo",
    "optimize_pmepr",
    "pmepr",
    "pmepr_threshold",
    "random_mask",
    "random_phases",
    "run_experiment",
    "synthesize",
]
