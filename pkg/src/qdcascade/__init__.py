"""Biexciton-exciton cascade simulations for a quantum dot in a two-mode cavity."""

from .constants import HBAR
from .hilbert import (
    BasisState,
    DotLevel,
    Mode,
    StateSpace,
    Truncation,
    build_space,
    dot_space,
)
from .model import (
    CavityParams,
    DecayParams,
    DotParams,
    PulseParams,
    Scenario,
    envelope,
    hamiltonian_at,
    lindblad_ops,
)
from .dynamics import TimeGrid, Trajectory, evolve, evolve_pure_4level
from .correlations import CorrelationEngine, CorrelationGrid, TwoPhotonMatrix
from .entanglement import ConcurrenceResult, concurrence
from .optimizer import (
    OptimizationResult,
    SearchSpec,
    biexciton_map,
    optimize_second_pulse,
    optimize_tpe_area,
)

__version__ = "0.1.0"
