"""Ensemble averaging over the sensor-coupling distribution and random phases.

A dropcast of many radical pairs couples to the sensor with a spread of
strengths g.  In the quasi-static limit that spread is Gaussian,
weight ~ exp(-eta (g - g0)^2), and averaged observables follow by
Gauss-Hermite quadrature (the weight is normalized to unit mass so the
eta -> infinity limit recovers the single-pair value).  A second,
independent dephasing channel is a random phase added to every cosine of
the one-proton singlet formula, sampled deterministically from a seeded
generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial.hermite import hermgauss

from rpsense.dynamics import TimeGrid, TimeSeries, sensor_contrast_numeric, timmel_singlet_analytic
from rpsense.spincore import RadicalPairParams

#: numpy.polynomial.hermite.hermgauss overflows beyond ~200 nodes
_MAX_NODES = 199

_PHI_MODELS = ("none", "uniform", "gaussian")


@dataclass(frozen=True)
class EnsembleSpec:
    """Gaussian coupling distribution plus random-phase model.

    Args:
        g0: center of the coupling distribution.
        eta: inverse-variance weight in exp(-eta (g-g0)^2); variance is
            1/(2 eta).
        n_nodes: odd Gauss-Hermite node count; 1 is the delta (single
            pair) limit.
        phi_model: "none", "uniform" (phase uniform on [0, 2pi)) or
            "gaussian" (zero-mean with width ``phi_width``).
        phi_width: standard deviation for the gaussian phase model.
        n_samples: number of phase draws to average.
        seed: seed for the deterministic phase generator.
    """

    g0: float
    eta: float
    n_nodes: int = 101
    phi_model: str = "none"
    phi_width: float = 0.0
    n_samples: int = 1
    seed: int = 0

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if self.n_nodes < 1 or self.n_nodes % 2 == 0:
            raise ValueError(f"n_nodes must be odd and >= 1, got {self.n_nodes}")
        if self.n_nodes > _MAX_NODES:
            raise ValueError(f"n_nodes above {_MAX_NODES} is numerically unstable")
        if self.phi_model not in _PHI_MODELS:
            raise ValueError(f"phi_model must be one of {_PHI_MODELS}, got {self.phi_model!r}")
        if self.phi_model == "gaussian" and self.phi_width < 0:
            raise ValueError(f"phi_width must be >= 0, got {self.phi_width}")
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")

    def nodes_and_weights(self) -> tuple[np.ndarray, np.ndarray]:
        """Coupling values and unit-mass weights for the Gaussian average."""
        if self.n_nodes == 1:
            return np.array([self.g0]), np.array([1.0])
        x, w = hermgauss(self.n_nodes)
        return self.g0 + x / np.sqrt(self.eta), w / np.sqrt(np.pi)


def gauss_average(f: Callable[[float], float], spec: EnsembleSpec) -> float:
    """Average f(g) over the normalized coupling distribution.

    Exact for polynomials up to degree 2*n_nodes - 1; the node sum runs in
    fixed order, so results are reproducible bit for bit.
    """
    gs, ws = spec.nodes_and_weights()
    total = 0.0
    for gi, wi in zip(gs, ws):
        total += wi * float(f(float(gi)))
    return total


def averaged_contrast_series(
    p: RadicalPairParams, grid: TimeGrid, spec: EnsembleSpec, branch: int = +1
) -> TimeSeries:
    """Pointwise Gaussian average of the normalized contrast over g.

    A single-node spec returns the bare series at g = g0.  Every member
    starts at 1, so the average does too; growing the variance 1/(2 eta)
    dephases the oscillations.
    """
    gs, ws = spec.nodes_and_weights()
    acc = np.zeros(grid.n_points)
    for gi, wi in zip(gs, ws):
        series = sensor_contrast_numeric(p.replace(g=float(gi)), grid, branch)
        acc += wi * series.normalized
    return TimeSeries(grid.times, acc)


def random_phase_triplet_series(
    h: float, omega: float, grid: TimeGrid, spec: EnsembleSpec
) -> TimeSeries:
    """Triplet fraction 1 - P_S(t) averaged over random per-pair phases.

    Phases are drawn once from a generator seeded with ``spec.seed``;
    identical specs give identical output.  With uniform phases every
    cosine averages toward zero, so the mean tends to the constant terms
    of the singlet formula as n_samples grows.
    """
    if spec.phi_model == "none":
        raise ValueError("random_phase_triplet_series requires phi_model != 'none'")
    rng = np.random.default_rng(spec.seed)
    if spec.phi_model == "uniform":
        phis = rng.uniform(0.0, 2 * np.pi, spec.n_samples)
    else:
        phis = rng.normal(0.0, spec.phi_width, spec.n_samples)
    acc = np.zeros(grid.n_points)
    for phi in phis:
        acc += 1.0 - timmel_singlet_analytic(h, omega, grid.times, phi=float(phi))
    return TimeSeries(grid.times, acc / spec.n_samples)
