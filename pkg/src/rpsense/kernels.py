"""Backend selection for the phase-sum kernel.

The compiled extension (rpsense._phase_kernel, Cython) is preferred; if it
was not built, a chunked NumPy implementation is used.  Both compute the
same quantity,

    out[i] = sum_j Re( amps[j] * exp(1j * freqs[j] * times[i]) ),

and agree to machine precision.  ``BACKEND`` records which one is active;
``benchmarks/bench_kernels.py`` compares them.
"""

from __future__ import annotations

import numpy as np

try:
    from rpsense._phase_kernel import phase_series as _phase_series_cy
except ImportError:  # extension not built; pure-Python install
    _phase_series_cy = None

# Chunk size bounds the temporary (chunk x n_terms) complex matrix in the
# NumPy path to ~32 MB.
_CHUNK_ENTRIES = 2_097_152


def _canonical(amps, freqs, times):
    amps = np.ascontiguousarray(amps, dtype=np.complex128)
    freqs = np.ascontiguousarray(freqs, dtype=np.float64)
    times = np.ascontiguousarray(times, dtype=np.float64)
    if amps.shape != freqs.shape or amps.ndim != 1:
        raise ValueError("amps and freqs must be equal-length 1-D arrays")
    return amps, freqs, times


def phase_series_numpy(amps, freqs, times) -> np.ndarray:
    """NumPy fallback for the phase-sum kernel (chunked over times)."""
    amps, freqs, times = _canonical(amps, freqs, times)
    out = np.empty(times.shape[0], dtype=np.float64)
    if amps.size == 0:
        out[:] = 0.0
        return out
    step = max(1, _CHUNK_ENTRIES // amps.size)
    for s in range(0, times.shape[0], step):
        block = np.exp(1j * np.outer(times[s:s + step], freqs))
        out[s:s + step] = (block @ amps).real
    return out


def phase_series_cython(amps, freqs, times) -> np.ndarray:
    """Compiled kernel; raises RuntimeError if the extension is missing."""
    if _phase_series_cy is None:
        raise RuntimeError("compiled phase kernel is not available")
    amps, freqs, times = _canonical(amps, freqs, times)
    return _phase_series_cy(amps, freqs, times)


if _phase_series_cy is not None:
    BACKEND = "cython"

    def phase_series(amps, freqs, times) -> np.ndarray:
        """Active phase-sum kernel (compiled backend)."""
        amps, freqs, times = _canonical(amps, freqs, times)
        return _phase_series_cy(amps, freqs, times)

else:
    BACKEND = "numpy"
    phase_series = phase_series_numpy
