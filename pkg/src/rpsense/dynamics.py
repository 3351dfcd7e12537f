"""Exact time evolution, singlet probability, sensor contrast and yields.

Everything here is built on one device: after a Hermitian
eigendecomposition, every observable is a finite sum of complex phases

    f(t) = sum_jk Re( a_jk * exp(i (lam_j - lam_k) t) ),

evaluated through the phase-sum kernel (rpsense.kernels).  Recombination
weighting replaces the time series by the normalized Laplace average

    <f>_k = k * integral_0^inf f(t) exp(-k t) dt,    k = kappa_tilde,

computed either by adaptive composite quadrature (the canonical route,
``yield_with_recombination``) or term by term where the cosine expansion
is known exactly.

Two independent routes exist for the Ramsey contrast:

* ``sensor_contrast_numeric`` - the trace over the two branch evolutions,
  ground truth for this package.
* ``sensor_contrast_closed_form`` - a closed-form expression in the two
  precession frequencies Omega_1,2.  As shipped it disagrees with the
  numeric trace: it corresponds to doubled (Pauli-convention) electron
  operators, i.e. closed_form(t) = numeric(2t).  The disagreement is
  quantified, never silently corrected; see ``closed_form_discrepancy``
  and docs/discrepancy_report.md.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from rpsense import spincore
from rpsense.kernels import phase_series
from rpsense.spincore import (
    DensityMatrix,
    Operator,
    RadicalPairParams,
    build_hamiltonian,
    rp_initial_state,
    sensor_basis_index,
    singlet_projector,
)

EIGH_RESIDUAL_TOL = 1e-11

#: default upper integration limit, in units of 1/kappa_tilde; the truncated
#: tail is bounded by exp(-26) * max|f| ~ 5e-12 * max|f|.
_LAPLACE_HORIZON = 26.0


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling grid, in units of 1/h_a."""

    t_start: float
    t_end: float
    n_points: int

    def __post_init__(self):
        if self.t_start < 0:
            raise ValueError(f"t_start must be >= 0, got {self.t_start}")
        if not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")
        if self.n_points < 2:
            raise ValueError(f"n_points must be >= 2, got {self.n_points}")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_points)


@dataclass(frozen=True)
class TimeSeries:
    """Sampled real-valued observable."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)
        if t.ndim != 1 or t.shape != v.shape:
            raise ValueError("times and values must be 1-D arrays of equal length")
        if t.size >= 2 and not np.all(np.diff(t) > 0):
            raise ValueError("times must be strictly increasing")


@dataclass(frozen=True)
class ContrastSeries:
    """Ramsey contrast samples, raw (value 4 at t=0) and normalized (1 at t=0)."""

    times: np.ndarray
    raw: np.ndarray
    normalized: np.ndarray


@dataclass(frozen=True)
class ClosedFormFrequencies:
    """Branch precession frequencies of the closed-form contrast.

    omega1 = sqrt(h_a^2 + omega^2), omega2 = sqrt(h_a^2 + (omega + g)^2)
    for the + branch (omega - g for the - branch); always recomputed from
    the parameters.
    """

    omega1: float
    omega2: float

    @classmethod
    def from_params(cls, p: RadicalPairParams, branch: int = +1) -> "ClosedFormFrequencies":
        if branch not in (+1, -1):
            raise ValueError("branch must be +1 or -1")
        return cls(np.hypot(p.h_a, p.omega), np.hypot(p.h_a, p.omega + branch * p.g))


def _eigh_checked(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian eigensolve with symmetrization and a residual guard.

    Tolerances are relative to the operator scale (absolute at unit
    scale), so physical-unit Hamiltonians (entries ~1e8 rad/s) pass the
    same relative accuracy bar as h_a = 1 ones.
    """
    h = np.asarray(matrix, dtype=complex)
    scale = max(1.0, float(np.abs(h).max()))
    if np.abs(h - h.conj().T).max() > spincore.HERMITIAN_TOL * scale:
        raise ValueError("generator is not Hermitian to 1e-12 (relative)")
    h = (h + h.conj().T) / 2
    lam, vec = np.linalg.eigh(h)
    if np.abs(h @ vec - vec * lam).max() > EIGH_RESIDUAL_TOL * scale:
        raise RuntimeError("eigendecomposition residual exceeds 1e-11 (relative)")
    return lam, vec


def propagator(h, t: float):
    """Unitary U = exp(+iHt) for a Hermitian generator.

    Returns an Operator when given one, else a plain ndarray.
    """
    mat = h.matrix if isinstance(h, Operator) else np.asarray(h, dtype=complex)
    lam, vec = _eigh_checked(mat)
    u = (vec * np.exp(1j * lam * t)) @ vec.conj().T
    if isinstance(h, Operator):
        return Operator(u, h.dims)
    return u


def observable_spectrum(h, rho0, obs) -> tuple[np.ndarray, np.ndarray]:
    """Cosine expansion of Tr[obs U(t) rho0 U(t)^dag] under U = exp(+iHt).

    Returns (amps, freqs) with Tr = sum_jk Re(amps * exp(i freqs t)).
    """
    lam, vec = _eigh_checked(h.matrix if isinstance(h, Operator) else h)
    rho = vec.conj().T @ (rho0.matrix if isinstance(rho0, DensityMatrix) else rho0) @ vec
    ob = vec.conj().T @ (obs.matrix if isinstance(obs, Operator) else obs) @ vec
    amps = (ob.T * rho).ravel()
    freqs = np.subtract.outer(lam, lam).ravel()
    return amps, freqs


def ramsey_spectrum(h0, h1, rho0) -> tuple[np.ndarray, np.ndarray]:
    """Cosine expansion of Tr[exp(+iH0 t) rho0 exp(-iH1 t)]."""
    l0, v0 = _eigh_checked(h0.matrix if isinstance(h0, Operator) else h0)
    l1, v1 = _eigh_checked(h1.matrix if isinstance(h1, Operator) else h1)
    rho = rho0.matrix if isinstance(rho0, DensityMatrix) else np.asarray(rho0, dtype=complex)
    amps = ((v0.conj().T @ rho @ v1) * (v1.conj().T @ v0).T).ravel()
    freqs = np.subtract.outer(l0, l1).ravel()
    return amps, freqs


def spectrum_laplace(amps: np.ndarray, freqs: np.ndarray, kappa_tilde: float) -> float:
    """Exact normalized Laplace average of a phase sum."""
    if not kappa_tilde > 0:
        raise ValueError(f"kappa_tilde must be positive, got {kappa_tilde}")
    return (amps * (kappa_tilde / (kappa_tilde - 1j * freqs))).sum().real


def _branch_params(p: RadicalPairParams, branch: int) -> RadicalPairParams:
    if branch not in (+1, -1):
        raise ValueError("branch must be +1 or -1")
    return p.replace(omega=p.omega + branch * p.g)


def singlet_probability_series(
    p: RadicalPairParams,
    grid: TimeGrid,
    with_sensor: bool = False,
    sensor_state=None,
) -> TimeSeries:
    """Singlet probability P_S(t) of the radical pair.

    Starts from the singlet with the nucleus at the configured
    polarization.  Without the sensor the evolution runs on the 8-level
    pair + nucleus space.  With it, the sensor is included explicitly;
    ``sensor_state`` is an m value in {+1, 0, -1}, a 3-vector, or None for
    the Ramsey superposition (|0> + |+1>)/sqrt(2).
    """
    rho_rp = rp_initial_state(p).matrix
    if not with_sensor:
        h = build_hamiltonian(p)
        obs = singlet_projector(spincore.RP_DIMS)
        amps, freqs = observable_spectrum(h, rho_rp, obs)
    else:
        if sensor_state is None:
            ket = np.zeros(3, dtype=complex)
            ket[sensor_basis_index(0)] = 1 / np.sqrt(2)
            ket[sensor_basis_index(+1)] = 1 / np.sqrt(2)
        elif isinstance(sensor_state, (int, np.integer)):
            ket = np.zeros(3, dtype=complex)
            ket[sensor_basis_index(int(sensor_state))] = 1.0
        else:
            ket = np.asarray(sensor_state, dtype=complex)
            if ket.shape != (3,):
                raise ValueError("sensor_state vector must have 3 components")
            ket = ket / np.linalg.norm(ket)
        rho = np.kron(np.outer(ket, ket.conj()), rho_rp)
        h = build_hamiltonian(p, include_sensor=True)
        obs = singlet_projector(spincore.FULL_DIMS)
        amps, freqs = observable_spectrum(h, rho, obs)
    values = phase_series(amps, freqs, grid.times)
    return TimeSeries(grid.times, values)


def timmel_singlet_analytic(h: float, omega: float, t, phi: float = 0.0):
    """Analytic singlet probability of the one-proton pair (no sensor).

    Seven-term cosine expression in Omega = sqrt(h^2 + omega^2); ``phi``
    adds a common phase offset to every cosine, modelling a random
    per-pair phase.  Accepts scalar or array ``t``.
    """
    if not h > 0:
        raise ValueError(f"hyperfine coupling must be positive, got {h}")
    t = np.asarray(t, dtype=float)
    big = np.hypot(h, omega)
    f = lambda x: np.cos(x * t + phi)
    w, o = omega, big
    out = (
        3 / 8
        + (w**2 / o**2) / 8
        + (h**2 / o**2) / 8 * f(o)
        + (1 - w / o) / 8 * (f((h + w + o) / 2) + f((h - w - o) / 2))
        + (1 + w / o) / 8 * (f((h - w + o) / 2) + f((h + w - o) / 2))
    )
    return out if out.ndim else float(out)


def _contrast_spectrum(p: RadicalPairParams, branch: int = +1):
    """(amps, freqs) of the raw Ramsey contrast; raw(0) = 4."""
    h0 = build_hamiltonian(p)
    h1 = build_hamiltonian(_branch_params(p, branch))
    rho0 = rp_initial_state(p).matrix
    amps, freqs = ramsey_spectrum(h0, h1, rho0)
    return 4 * amps, freqs


def sensor_contrast_numeric(
    p: RadicalPairParams, grid: TimeGrid, branch: int = +1
) -> ContrastSeries:
    """Ramsey contrast from the two branch evolutions (ground truth).

    raw(t) = 4 Re Tr[exp(+iH0 t) rho0 exp(-iH1 t)] with H1 equal to H0
    under omega -> omega + branch*g, rho0 the singlet with the configured
    nuclear state.  The scale is fixed by raw(0) = 4; ``normalized`` is
    raw divided by its t = 0 value.
    """
    amps, freqs = _contrast_spectrum(p, branch)
    raw = phase_series(amps, freqs, grid.times)
    raw0 = amps.sum().real
    return ContrastSeries(grid.times, raw, raw / raw0)


def sensor_contrast_closed_form(p: RadicalPairParams, t, branch: int = +1):
    """Closed-form contrast in Omega_1, Omega_2 (see module docstring).

    Known to equal the numeric trace only under doubled electron
    operators; kept verbatim for comparison and reporting.
    """
    fr = ClosedFormFrequencies.from_params(p, branch)
    o1, o2 = fr.omega1, fr.omega2
    g, w = branch * p.g, p.omega
    t = np.asarray(t, dtype=float)
    out = (
        np.sin(t * o1)
        * (
            2 * (o1**2 + g * w) * np.cos(g * t) * np.sin(t * o2)
            - 2 * w * o2 * np.sin(g * t) * np.cos(t * o2)
        )
        + o1
        * np.cos(t * o1)
        * (
            2 * (g + w) * np.sin(g * t) * np.sin(t * o2)
            + 2 * o2 * np.cos(g * t) * np.cos(t * o2)
        )
        + 2 * o1 * o2
    ) / (o1 * o2)
    return out if out.ndim else float(out)


def _closed_form_cosine_terms(p: RadicalPairParams, branch: int = +1):
    """Exact cosine expansion of the closed-form contrast.

    Product-to-sum expansion gives four cosines at |Omega_1 -+ Omega_2| -+ g
    plus the constant 2; returns (constant, coeffs, freqs) with
    closed_form(t) = constant + sum coeffs * cos(freqs * t) / (2 O1 O2).
    """
    fr = ClosedFormFrequencies.from_params(p, branch)
    o1, o2 = fr.omega1, fr.omega2
    g, w = branch * p.g, p.omega
    dif, tot = o1 - o2, o1 + o2
    a = o1**2 + g * w
    freqs = np.array([dif - g, dif + g, tot - g, tot + g])
    coeffs = np.array(
        [
            a - w * o2 - (g + w) * o1 + o1 * o2,
            a + w * o2 + (g + w) * o1 + o1 * o2,
            -a - w * o2 + (g + w) * o1 + o1 * o2,
            -a + w * o2 - (g + w) * o1 + o1 * o2,
        ]
    ) / (2 * o1 * o2)
    return 2.0, coeffs, freqs


def yield_with_recombination(f, kappa_tilde: float, tol: float = 1e-9) -> float:
    """Normalized Laplace average k * int_0^inf f(t) exp(-kt) dt.

    ``f`` is either a callable accepting a time array or a TimeSeries.
    Callables are integrated on [0, 26/k] by adaptive composite
    Gauss-Legendre quadrature (panel doubling until the result moves by
    less than ``tol``); the truncated tail is bounded by
    exp(-26)*max|f| ~ 5e-12*max|f|.  TimeSeries input is treated as
    piecewise linear and integrated exactly against the exponential
    weight (exact for constants), with constant continuation before the
    first and after the last sample; resolution is the caller's concern.
    """
    if not kappa_tilde > 0:
        raise ValueError(f"kappa_tilde must be positive, got {kappa_tilde}")
    if isinstance(f, TimeSeries):
        k = kappa_tilde
        t, v = f.times, f.values
        d = np.diff(t)
        slope = np.diff(v) / d
        e0 = np.exp(-k * t[:-1])
        e1 = np.exp(-k * t[1:])
        integral = np.sum(v[:-1] * (e0 - e1) / k + slope * ((e0 - e1) / k**2 - d * e1 / k))
        head = v[0] * (1 - np.exp(-k * t[0])) / k if t[0] > 0 else 0.0
        tail = v[-1] * np.exp(-k * t[-1]) / k
        return float(k * (integral + head + tail))

    t_max = _LAPLACE_HORIZON / kappa_tilde
    nodes, weights = leggauss(16)
    n_panels = 64
    previous = None
    while n_panels <= 2**16:
        edges = np.linspace(0.0, t_max, n_panels + 1)
        half = np.diff(edges) / 2
        mids = (edges[:-1] + edges[1:]) / 2
        pts = (mids[:, None] + half[:, None] * nodes[None, :]).ravel()
        wts = (half[:, None] * weights[None, :]).ravel()
        fv = np.asarray(f(pts), dtype=float)
        integral = kappa_tilde * float(np.dot(wts, fv * np.exp(-kappa_tilde * pts)))
        if previous is not None and abs(integral - previous) <= tol:
            return integral
        previous = integral
        n_panels *= 2
    raise RuntimeError(f"quadrature did not converge to {tol} within 2^16 panels")


def contrast_yield_numeric(p: RadicalPairParams, branch: int = +1, tol: float = 1e-9) -> float:
    """Recombination-weighted raw contrast via the canonical quadrature route."""
    amps, freqs = _contrast_spectrum(p, branch)
    return yield_with_recombination(lambda t: phase_series(amps, freqs, t),
                                    p.kappa_tilde, tol=tol)


def contrast_yield_analytic(p: RadicalPairParams, branch: int = +1) -> float:
    """Exact recombination-weighted average of the closed-form contrast.

    Term-by-term Laplace transform of the four-cosine expansion; serves as
    the analytic cross-check of the quadrature route on the closed-form
    series.
    """
    kt = p.kappa_tilde
    if not kt > 0:
        raise ValueError(f"kappa_tilde must be positive, got {kt}")
    const, coeffs, freqs = _closed_form_cosine_terms(p, branch)
    return float(const + np.sum(coeffs * kt**2 / (kt**2 + freqs**2)))


def contrast_yield_closed_form(p: RadicalPairParams, branch: int = +1) -> float:
    """Recombination-weighted contrast, closed form as commonly quoted.

    The quoted expression is corrupted as printed; the minimal reading
    used here (a) lets both first-group fractions share the factored
    denominator ((g - O2)^2 + k^2)((g + O2)^2 + k^2), whose expansion the
    printed denominator garbles, and (b) drops a dangling brace group
    that no placement makes dimensionally consistent.  Even so the result
    does NOT agree with the numeric route; it is retained for comparison
    and reporting (docs/discrepancy_report.md), never used in scans.

    Raises ValueError naming the vanishing denominator factor if one
    occurs (impossible for kappa_tilde > 0, kept as a guard).
    """
    kt = p.kappa_tilde
    if not kt > 0:
        raise ValueError(f"kappa_tilde must be positive, got {kt}")
    fr = ClosedFormFrequencies.from_params(p, branch)
    o1, o2 = fr.omega1, fr.omega2
    g, w, h = branch * p.g, p.omega, p.h_a
    d2 = ((g - o2) ** 2 + kt**2) * ((g + o2) ** 2 + kt**2)
    if d2 == 0:
        raise ValueError("vanishing denominator ((g -+ Omega_2)^2 + kappa_tilde^2)")
    line1 = (
        kt * o1 * (4 * g * kt * o2 * (g + w) / d2
                   + 2 * kt * o2 * (g**2 + kt**2 + o2**2) / d2)
    )
    lor = lambda nu: kt / (nu**2 + kt**2)
    t3 = lor(-g + o1 - o2) + lor(g + o1 - o2) - lor(-g + o1 + o2) - lor(g + o1 + o2)
    t4 = lor(-g + o1 - o2) - lor(g + o1 - o2) + lor(-g + o1 + o2) - lor(g + o1 + o2)
    line2 = (t3 * (h**2 + w * (g + w))) / 8
    line3 = -(w * o2 * t4) / 8
    return float(2 + (line1 + line2 + line3) / (o1 * o2))


@dataclass(frozen=True)
class ClosedFormDiscrepancy:
    """Result of comparing a closed form against its numeric ground truth."""

    max_deviation: float
    worst_point: dict
    matched: bool


def closed_form_discrepancy(
    p: RadicalPairParams,
    omegas: Sequence[float],
    grid: TimeGrid,
    tol: float = 1e-8,
    branch: int = +1,
) -> ClosedFormDiscrepancy:
    """Scan |closed-form contrast - numeric trace| over omega and t."""
    worst = (-1.0, {})
    for w in omegas:
        q = p.replace(omega=float(w))
        num = sensor_contrast_numeric(q, grid, branch).raw
        cf = sensor_contrast_closed_form(q, grid.times, branch)
        dev = np.abs(cf - num)
        i = int(np.argmax(dev))
        if dev[i] > worst[0]:
            worst = (float(dev[i]), {"omega": float(w), "t": float(grid.times[i])})
    return ClosedFormDiscrepancy(worst[0], worst[1], worst[0] <= tol)


@dataclass(frozen=True)
class FieldScanResult:
    """Recombination-weighted singlet fraction and contrast across a field range."""

    omegas: np.ndarray
    singlet_fraction: np.ndarray
    contrast_yield: np.ndarray


def singlet_yield(p: RadicalPairParams, kappa_tilde: float | None = None,
                  tol: float = 1e-9) -> float:
    """Recombination-weighted singlet probability at the given parameters."""
    kt = p.kappa_tilde if kappa_tilde is None else kappa_tilde
    h = build_hamiltonian(p)
    obs = singlet_projector(spincore.RP_DIMS)
    amps, freqs = observable_spectrum(h, rp_initial_state(p).matrix, obs)
    return yield_with_recombination(lambda t: phase_series(amps, freqs, t), kt, tol=tol)


def field_scan(
    p: RadicalPairParams,
    omegas: Sequence[float],
    kappa_tilde: float | None = None,
    branch: int = +1,
    tol: float = 1e-9,
) -> FieldScanResult:
    """Sweep the external field: averaged singlet fraction and contrast yield.

    Per omega the singlet fraction is the equal average of the two sensor
    branches, (Phi at omega + branch*g plus Phi at omega) / 2, and the
    contrast yield is the normalized recombination-weighted Ramsey
    contrast.
    """
    omegas = np.asarray(omegas, dtype=float)
    kt = p.kappa_tilde if kappa_tilde is None else kappa_tilde
    phi = np.empty_like(omegas)
    cy = np.empty_like(omegas)
    for i, w in enumerate(omegas):
        q = p.replace(omega=float(w))
        phi_0 = singlet_yield(q, kt, tol)
        phi_b = singlet_yield(_branch_params(q, branch), kt, tol)
        phi[i] = (phi_b + phi_0) / 2
        amps, freqs = _contrast_spectrum(q, branch)
        raw = yield_with_recombination(lambda t: phase_series(amps, freqs, t), kt, tol=tol)
        cy[i] = raw / 4.0
    return FieldScanResult(omegas, phi, cy)
