"""Diffraction in time: discontinuous Schrodinger wavepackets evolved three ways.

``exact`` holds the closed-form error-function solutions and the propagator
quadrature oracle, ``replication`` the truncated replication series,
``pde`` the split-step solver, and ``caustics`` the envelope analysis.
"""

__version__ = "0.1.0"

from .domain import (
    InitialCondition, Profile, PulseSpec, SpaceGrid, SpaceTimeIntensity, WaveField,
    assemble, intensity, l2_distance, sample_pattern,
)
from .errors import (
    AccuracyError, ConfigurationError, DitwaveError, DomainError, ExpansionOverflow,
    NumericalFailure, ResolutionError, ValidationError,
)
from .specfun import erf_complex, erfc_complex, faddeeva, moshinsky
from .exact import PropagatorParams, exact_square_packet, harmonic_from_free, propagator_quadrature
from .replication import (
    AffineTerm, ReplicationExpansion, SL2Coeffs, evaluate, free_terms, multi_pulse_terms,
    sl2_terms, squeeze_terms, step_series_partial,
)
from .caustics import CausticFamily, RidgeSet, caustic_parabola, caustic_sl2, fit_parabola, ridge_extract
from .pde import SolverConfig, gpe_effective_initial, periodic_grid, prepare_initial, split_step_evolve
