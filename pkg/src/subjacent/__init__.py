"""Entanglement of mixed low-lying states in frustrated spin-1/2 chains.

Exact diagonalization of the periodic J1-J2 XXZ chain, nearest-neighbour
concurrence of ground/first-excited mixtures, transition location,
finite-size scaling fits and quenched-disorder averaging.
"""
__version__ = "0.1.0"

from .lattice import ChainModel, SzSector, apply_hamiltonian, enumerate_sector
from .eigensolver import (ConvergenceError, GroundStateDegeneracyWarning, SpectrumError,
                          dense_spectrum, gap_difference, lanczos, solve_low_spectrum)
from .entanglement import (MixingSpec, SubjacentState, TwoQubitState, concurrence,
                           nn_concurrence, pair_rdm, resolve_p, subjacent_state)
from .criticality import (ConcurrenceCurve, TransitionEstimate, TransitionError, alpha_grid,
                          boundary_values_vs_p, detect_jump, inflection_transition,
                          locate_transition, phase_diagram_grid, refine_by_gap_crossing,
                          scan_curve, transition_from_bracket)
from .scaling import (CUBIC, DELTA_SCALING, JUMP_SCALING, LINEAR, POWER_LAW_FREE,
                      POWER_LAW_OFFSET, RATIONAL_QUADRATIC, FitError, FitResult,
                      extrapolate_rational, fit, fit_delta_scaling, fit_exponent_beta, get_model)
from .disorder import (DisorderAverage, DisorderSpec, averaged_concurrence, disorder_curve,
                       sample_realization)
from .cache import EigenCache
from . import tables

__all__ = [
    "ChainModel", "SzSector", "apply_hamiltonian", "enumerate_sector",
    "ConvergenceError", "GroundStateDegeneracyWarning", "SpectrumError", "dense_spectrum",
    "gap_difference", "lanczos", "solve_low_spectrum",
    "MixingSpec", "SubjacentState", "TwoQubitState", "concurrence", "nn_concurrence",
    "pair_rdm", "resolve_p", "subjacent_state",
    "ConcurrenceCurve", "TransitionEstimate", "TransitionError", "alpha_grid",
    "boundary_values_vs_p", "detect_jump", "inflection_transition", "locate_transition",
    "phase_diagram_grid", "refine_by_gap_crossing", "scan_curve", "transition_from_bracket",
    "CUBIC", "DELTA_SCALING", "JUMP_SCALING", "LINEAR", "POWER_LAW_FREE", "POWER_LAW_OFFSET",
    "RATIONAL_QUADRATIC", "FitError", "FitResult", "extrapolate_rational", "fit",
    "fit_delta_scaling", "fit_exponent_beta", "get_model",
    "DisorderAverage", "DisorderSpec", "averaged_concurrence", "disorder_curve",
    "sample_realization", "EigenCache", "tables",
]
