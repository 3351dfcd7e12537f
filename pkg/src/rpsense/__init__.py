"""Spin dynamics of a radical pair coupled to a spin-1 quantum sensor.

Library layout:

* ``rpsense.spincore``  - operators, states, Hamiltonians, partial trace
* ``rpsense.dynamics``  - evolution, singlet probability, Ramsey contrast,
  recombination-weighted yields, field scans
* ``rpsense.ensemble``  - Gaussian coupling averages, random-phase damping
* ``rpsense.control``   - pulse sequences, stroboscopic driving, echo
  state discrimination, field nulling
* ``rpsense.planner``   - dipole-field and measurement-time budgets
* ``rpsense.kernels``   - phase-sum kernel (compiled or NumPy fallback)
* ``rpsense.cli``       - the ``rpsense`` command
"""

from rpsense.kernels import BACKEND
from rpsense.spincore import (
    DensityMatrix,
    Operator,
    RadicalPairParams,
    build_hamiltonian,
    kron,
    partial_trace,
    singlet_projector,
    spin_operators,
)
from rpsense.dynamics import (
    ClosedFormFrequencies,
    TimeGrid,
    TimeSeries,
    field_scan,
    propagator,
    sensor_contrast_closed_form,
    sensor_contrast_numeric,
    singlet_probability_series,
    timmel_singlet_analytic,
    yield_with_recombination,
)
from rpsense.ensemble import EnsembleSpec, averaged_contrast_series, gauss_average
from rpsense.control import (
    Pulse,
    PulseSequence,
    RPStateLabel,
    apply_sequence,
    controlled_yield_scan,
    stroboscopic_evolution,
    teer_contrast,
    toggle_field_nulling_scan,
)
from rpsense.planner import ExperimentParams, dipole_field, repetitions_for_snr

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ClosedFormFrequencies",
    "DensityMatrix",
    "EnsembleSpec",
    "ExperimentParams",
    "Operator",
    "Pulse",
    "PulseSequence",
    "RPStateLabel",
    "RadicalPairParams",
    "TimeGrid",
    "TimeSeries",
    "apply_sequence",
    "averaged_contrast_series",
    "build_hamiltonian",
    "controlled_yield_scan",
    "dipole_field",
    "field_scan",
    "gauss_average",
    "kron",
    "partial_trace",
    "propagator",
    "repetitions_for_snr",
    "sensor_contrast_closed_form",
    "sensor_contrast_numeric",
    "singlet_probability_series",
    "singlet_projector",
    "spin_operators",
    "stroboscopic_evolution",
    "teer_contrast",
    "timmel_singlet_analytic",
    "toggle_field_nulling_scan",
    "yield_with_recombination",
]
