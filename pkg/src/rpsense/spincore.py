"""Dense spin-operator algebra for the sensor + radical-pair system.

The model is one spin-1 sensor coupled to a radical pair (two spin-1/2
electrons A and B) with a single spin-1/2 nucleus hyperfine-coupled to
electron A:

    H = h_a (I . S_A) + omega (S_Az + S_Bz) + g Sz_sensor (S_Az + S_Bz)

Conventions used throughout the package:

* Electron and nuclear operators are spin-1/2 matrices (halved Paulis,
  eigenvalues +-1/2).  ``omega`` is the angular frequency multiplying
  (S_Az + S_Bz); for a triplet pair this equals twice the single-electron
  Larmor frequency, i.e. omega = 2*gamma_e*B in physical units.
* The sensor is spin-1 with Sz = diag(+1, 0, -1); basis order is
  m = +1, 0, -1.  Two-level protocols use the computational subspace
  {|0>, |+1>} by default ({|0>, |-1>} optionally).
* Time evolution uses U = exp(+iHt).

Subsystem ordering is sensor (when present), electron A, electron B,
nucleus; ``RP_DIMS`` and ``FULL_DIMS`` record the two layouts.  All
matrices are dense complex; the largest space is 3*2*2*2 = 24, so no
sparse machinery is used.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from math import prod

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-10

#: subsystem dimensions without / with the sensor
RP_DIMS = (2, 2, 2)
FULL_DIMS = (3, 2, 2, 2)

#: slot indices of the two electrons in each layout
RP_ELECTRON_SLOTS = (0, 1)
FULL_ELECTRON_SLOTS = (1, 2)


def _as_matrix(obj) -> np.ndarray:
    return obj.matrix if isinstance(obj, Operator) else np.asarray(obj, dtype=complex)


@dataclass(frozen=True)
class Operator:
    """Dense complex operator with subsystem metadata.

    Args:
        matrix: square complex matrix.
        dims: ordered subsystem dimensions whose product equals the matrix
            dimension.
        hermitian: if True, validate max|A - A^dag| <= 1e-12 at construction.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]
    hermitian: bool = False

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        if any(d < 1 for d in self.dims):
            raise ValueError("dims entries must be positive")
        if prod(self.dims) != m.shape[0]:
            raise ValueError(
                f"product of dims {self.dims} does not match matrix dimension {m.shape[0]}"
            )
        if self.hermitian and not self.is_hermitian():
            raise ValueError("operator flagged Hermitian is not Hermitian to 1e-12")
        m.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "Operator":
        return Operator(self.matrix.conj().T, self.dims)

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        """Hermiticity to ``tol`` relative to the entry scale (absolute at scale 1)."""
        scale = max(1.0, float(np.abs(self.matrix).max()))
        return np.abs(self.matrix - self.matrix.conj().T).max() <= tol * scale


@dataclass(frozen=True)
class DensityMatrix:
    """Quantum state: Hermitian, unit trace, positive semidefinite.

    Validation tolerances: Hermiticity 1e-12, trace 1 +- 1e-12,
    eigenvalues >= -1e-10.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        if prod(self.dims) != m.shape[0]:
            raise ValueError(
                f"product of dims {self.dims} does not match matrix dimension {m.shape[0]}"
            )
        if np.abs(m - m.conj().T).max() > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian to 1e-12")
        tr = m.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {tr} differs from 1 beyond 1e-12")
        if np.linalg.eigvalsh((m + m.conj().T) / 2).min() < EIGENVALUE_FLOOR:
            raise ValueError("density matrix has an eigenvalue below -1e-10")
        m.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class RadicalPairParams:
    """Physical constants of one sensor + radical-pair instance.

    All frequencies are angular and share one unit system; ``h_a`` sets the
    natural scale (CLI default h_a = 1).  ``kappa`` is the singlet
    recombination rate and ``gamma`` the sensor relaxation rate; the decay
    scale used by yield integrals is always the derived ``kappa_tilde =
    kappa + gamma`` and is never stored.  ``nuclear_polarization`` p
    prepares the nucleus in diag((1+p)/2, (1-p)/2); p = 0 is the thermal
    state I/2.
    """

    h_a: float
    omega: float = 0.0
    g: float = 0.0
    kappa: float = 0.0
    gamma: float = 0.0
    h_b: float = 0.0
    nuclear_polarization: float = 0.0

    def __post_init__(self):
        if not self.h_a > 0:
            raise ValueError(f"h_a must be positive, got {self.h_a}")
        if self.kappa < 0:
            raise ValueError(f"kappa must be >= 0, got {self.kappa}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if abs(self.nuclear_polarization) > 1:
            raise ValueError(
                f"nuclear_polarization must lie in [-1, 1], got {self.nuclear_polarization}"
            )

    @property
    def kappa_tilde(self) -> float:
        """Total reset rate kappa + gamma (always derived)."""
        return self.kappa + self.gamma

    def replace(self, **changes) -> "RadicalPairParams":
        return dataclasses.replace(self, **changes)


def kron(a: Operator, b: Operator) -> Operator:
    """Tensor product; concatenates subsystem dimensions."""
    return Operator(np.kron(_as_matrix(a), _as_matrix(b)),
                    tuple(a.dims) + tuple(b.dims))


def spin_operators(two_s_plus_1: int) -> tuple[Operator, Operator, Operator]:
    """Standard angular-momentum matrices (Sx, Sy, Sz) for dimension 2 or 3.

    Dimension 2 gives spin-1/2 (Sz = diag(1/2, -1/2)); dimension 3 gives
    spin-1 (Sz = diag(1, 0, -1)).  Basis is ordered by decreasing m.
    """
    if two_s_plus_1 not in (2, 3):
        raise ValueError(f"unsupported spin dimension {two_s_plus_1}; only 2 and 3")
    s = (two_s_plus_1 - 1) / 2
    m = np.arange(s, -s - 1, -1)
    sz = np.diag(m).astype(complex)
    sp = np.zeros((two_s_plus_1, two_s_plus_1), dtype=complex)
    for i in range(two_s_plus_1 - 1):
        sp[i, i + 1] = np.sqrt(s * (s + 1) - m[i + 1] * (m[i + 1] + 1))
    sx = (sp + sp.conj().T) / 2
    sy = (sp - sp.conj().T) / 2j
    dims = (two_s_plus_1,)
    return (Operator(sx, dims, hermitian=True),
            Operator(sy, dims, hermitian=True),
            Operator(sz, dims, hermitian=True))


_SX2, _SY2, _SZ2 = (op.matrix for op in spin_operators(2))
_SX3, _SY3, _SZ3 = (op.matrix for op in spin_operators(3))


def embed(op, slot: int, dims) -> np.ndarray:
    """Single-site operator embedded in the tensor space with identities."""
    dims = tuple(dims)
    if not 0 <= slot < len(dims):
        raise ValueError(f"slot {slot} outside layout {dims}")
    mat = _as_matrix(op)
    if mat.shape[0] != dims[slot]:
        raise ValueError(f"operator dimension {mat.shape[0]} does not fit slot {slot} of {dims}")
    out = np.eye(1, dtype=complex)
    for i, d in enumerate(dims):
        out = np.kron(out, mat if i == slot else np.eye(d, dtype=complex))
    return out


def singlet_projector(dims, electron_slots=None) -> Operator:
    """Projector onto the two-electron singlet, identity elsewhere.

    Uses the spin-1/2 identity P_S = 1/4 - S_A . S_B, which embeds the
    rank-1 projector |S><S| on the electron pair into the full space.
    """
    dims = tuple(dims)
    if electron_slots is None:
        electron_slots = FULL_ELECTRON_SLOTS if len(dims) == 4 else RP_ELECTRON_SLOTS
    a, b = electron_slots
    if a == b or not all(0 <= s < len(dims) for s in (a, b)):
        raise ValueError(f"layout {dims} is missing two distinct electron slots {electron_slots}")
    if dims[a] != 2 or dims[b] != 2:
        raise ValueError(f"electron slots {electron_slots} of layout {dims} are not spin-1/2")
    dot = sum(embed(s, a, dims) @ embed(s, b, dims) for s in (_SX2, _SY2, _SZ2))
    p = 0.25 * np.eye(prod(dims), dtype=complex) - dot
    return Operator(p, dims, hermitian=True)


_PAIR_KETS = {
    "S": np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2),
    "T0": np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2),
    "T+": np.array([1, 0, 0, 0], dtype=complex),
    "T-": np.array([0, 0, 0, 1], dtype=complex),
}


def electron_pair_state(label: str) -> np.ndarray:
    """Two-electron basis ket for label in {S, T0, T+, T-} (basis uu, ud, du, dd)."""
    try:
        return _PAIR_KETS[label].copy()
    except KeyError:
        raise ValueError(f"unknown electron-pair state {label!r}; use S, T0, T+ or T-") from None


def nuclear_density(polarization: float) -> np.ndarray:
    """Nuclear spin state diag((1+p)/2, (1-p)/2); p = 0 is thermal."""
    if abs(polarization) > 1:
        raise ValueError(f"nuclear polarization must lie in [-1, 1], got {polarization}")
    return np.diag([(1 + polarization) / 2, (1 - polarization) / 2]).astype(complex)


def rp_initial_state(p: RadicalPairParams) -> DensityMatrix:
    """Radical pair in the singlet, nucleus at the configured polarization."""
    ket = electron_pair_state("S")
    rho = np.kron(np.outer(ket, ket.conj()), nuclear_density(p.nuclear_polarization))
    return DensityMatrix(rho, RP_DIMS)


def _rp_hamiltonian_matrix(h_a: float, omega: float) -> np.ndarray:
    """h_a (I . S_A) + omega (S_Az + S_Bz) on electron A x electron B x nucleus."""
    dims = RP_DIMS
    hyper = sum(embed(s, 0, dims) @ embed(s, 2, dims) for s in (_SX2, _SY2, _SZ2))
    zeeman = embed(_SZ2, 0, dims) + embed(_SZ2, 1, dims)
    return h_a * hyper + omega * zeeman


def build_hamiltonian(p: RadicalPairParams, include_sensor: bool = False) -> Operator:
    """Hamiltonian of the radical pair, optionally including the sensor.

    Without the sensor: H0 on electron A x electron B x nucleus.  With it:
    H = 1 (x) H0 + g Sz (x) (S_Az + S_Bz) on sensor x A x B x nucleus,
    block diagonal in the sensor basis with the m-th block equal to H0
    with omega -> omega + m*g.

    A second hyperfine coupling (h_b != 0) is a data-model hook with no
    supported dynamics; it is rejected here.
    """
    if p.h_b != 0.0:
        raise ValueError("h_b != 0 is not supported; only one hyperfine-coupled nucleus")
    h0 = _rp_hamiltonian_matrix(p.h_a, p.omega)
    if not include_sensor:
        return Operator(h0, RP_DIMS, hermitian=True)
    zeeman = embed(_SZ2, 1, FULL_DIMS) + embed(_SZ2, 2, FULL_DIMS)
    full = np.kron(np.eye(3, dtype=complex), h0) + p.g * embed(_SZ3, 0, FULL_DIMS) @ zeeman
    return Operator(full, FULL_DIMS, hermitian=True)


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state on the kept subsystems (trace preserved).

    Args:
        rho: state with subsystem metadata.
        keep: iterable of subsystem indices to retain, in layout order.
    """
    dims = rho.dims
    keep = sorted(set(int(k) for k in keep))
    if not keep or any(k < 0 or k >= len(dims) for k in keep):
        raise ValueError(f"invalid subsystem index set {keep} for layout {dims}")
    n = len(dims)
    tensor = rho.matrix.reshape(dims + dims)
    drop = [i for i in range(n) if i not in keep]
    for count, i in enumerate(drop):
        axis = i - count  # axes shift as traced axes disappear
        tensor = np.trace(tensor, axis1=axis, axis2=axis + tensor.ndim // 2)
    kept_dims = tuple(dims[k] for k in keep)
    d = prod(kept_dims)
    return DensityMatrix(tensor.reshape(d, d), kept_dims)


def sensor_basis_index(m: int) -> int:
    """Index of sensor level m in the basis ordered +1, 0, -1."""
    try:
        return {1: 0, 0: 1, -1: 2}[m]
    except KeyError:
        raise ValueError(f"sensor level must be +1, 0 or -1, got {m}") from None
