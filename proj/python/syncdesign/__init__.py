"""Synchronizing state-feedback design for identical linear agents.

Thin Python layer over the C++ core: graph spectra, the iterative
LMI-relaxation design loop and its baselines, mu-UGES verification, and
closed-loop network simulation.
"""

from syncdesign._core import (  # noqa: F401
    AlgorithmConfig,
    DecayFit,
    Gain,
    Laplacian,
    Plant,
    RateEstimate,
    SpectrumSlice,
    SynthesisResult,
    SynthStatus,
    Trajectory,
    UgesMethod,
    WeightedDigraph,
    check_mu_uges,
    default_horizon,
    design,
    dist_to_sync,
    estimate_rate,
    fit_decay,
    gain_from_json,
    gain_to_json,
    graph_from_json,
    graph_preset,
    graph_preset_names,
    graph_to_json,
    integrate,
    is_connected,
    is_controllable,
    laplacian,
    matrix_2norm,
    nonzero_spectrum,
    plant_preset,
    plant_preset_names,
    random_initial_state,
    solve_care,
    spectral_abscissa,
)

__all__ = [name for name in dir() if not name.startswith("_")]
