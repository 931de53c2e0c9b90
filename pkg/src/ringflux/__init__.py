"""Exact simulation of binary conservation-form particle automata on rings."""

__version__ = "0.1.0"

from .lattice import (  # noqa: E402
    Densities,
    RingState,
    RunSpectrum,
    count_pattern,
    densities,
    make_state,
    run_spectrum,
)
from .dynamics import (  # noqa: E402
    EX1,
    EX2,
    RULE1,
    CycleInfo,
    FluxRule,
    builtin_rule,
    find_cycle,
    flux,
    instantaneous_momentum,
    mean_momentum,
    parse_rule,
    step,
    trajectory,
)
from .analysis import (  # noqa: E402
    PhaseType,
    asymptotic_report,
    certify_conserved,
    classify,
    discriminant,
    predict_q_ex1,
    predict_q_ex2,
    predict_q_rule1,
)

__all__ = [
    "Densities", "RingState", "RunSpectrum", "count_pattern", "densities", "make_state", "run_spectrum",
    "EX1", "EX2", "RULE1", "CycleInfo", "FluxRule", "builtin_rule", "find_cycle", "flux",
    "instantaneous_momentum", "mean_momentum", "parse_rule", "step", "trajectory",
    "PhaseType", "asymptotic_report", "certify_conserved", "classify", "discriminant",
    "predict_q_ex1", "predict_q_ex2", "predict_q_rule1",
]
