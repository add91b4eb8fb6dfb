"""Tender-count histogram kernels.

Each shareholder draw is a pure function of ``(seed, trial, shareholder)``:
a SplitMix64-style finalizer keys the trial, then the shareholder index, and
the 64-bit output is compared against a fixed-point threshold for sigma. A
trial reduces to ``k``, the number of tendering shareholders, so a block of
trials reduces to a histogram over ``k``. Integer histograms add exactly,
which makes any partition of the trial range give identical results.

The numba kernel is used when numba imports and ``TOEHOLD_DISABLE_NUMBA`` is
unset; the numpy kernel computes the same bits with vectorized uint64 ops.
"""

from __future__ import annotations

import os

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
STREAM = 0xD1B54A32D192ED03
SEED_SALT = 0x5851F42D4C957F2D
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB

_U_GOLDEN = np.uint64(GOLDEN)
_U_STREAM = np.uint64(STREAM)
_U_MIX1 = np.uint64(MIX1)
_U_MIX2 = np.uint64(MIX2)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)

# trials per numpy block, scaled down by shareholder count inside the kernel
_NUMPY_BLOCK_CELLS = 1 << 20


def mix64(z: int) -> int:
    """Reference finalizer on Python ints."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def seed_key(seed: int) -> int:
    return mix64(seed ^ SEED_SALT)


def draw(seed: int, trial: int, shareholder: int) -> int:
    """The 64-bit uniform for one shareholder in one trial (reference path)."""
    tk = mix64(seed_key(seed) ^ ((trial * GOLDEN) & MASK64))
    return mix64(tk + (shareholder + 1) * STREAM)


def _mix_np(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _S30)) * _U_MIX1
    z = (z ^ (z >> _S27)) * _U_MIX2
    return z ^ (z >> _S31)


def histogram_numpy(key: int, threshold: int, m: int, start: int, stop: int) -> np.ndarray:
    hist = np.zeros(m + 1, dtype=np.int64)
    block = max(1, _NUMPY_BLOCK_CELLS // max(m, 1))
    offsets = np.arange(1, m + 1, dtype=np.uint64) * _U_STREAM
    ukey = np.uint64(key)
    uthr = np.uint64(threshold)
    for lo in range(start, stop, block):
        t = np.arange(lo, min(lo + block, stop), dtype=np.uint64)
        tk = _mix_np(ukey ^ (t * _U_GOLDEN))
        u = _mix_np(tk[:, None] + offsets[None, :])
        k = np.count_nonzero(u < uthr, axis=1)
        hist += np.bincount(k, minlength=m + 1)
    return hist


def _build_numba():
    from numba import njit

    @njit(inline="always")
    def mix(z):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
        return z ^ (z >> np.uint64(31))

    @njit(nogil=True, cache=True)
    def histogram(key, threshold, m, start, stop):
        hist = np.zeros(m + 1, dtype=np.int64)
        ukey = np.uint64(key)
        uthr = np.uint64(threshold)
        for t in range(start, stop):
            tk = mix(ukey ^ (np.uint64(t) * np.uint64(GOLDEN)))
            k = 0
            for j in range(m):
                u = mix(tk + np.uint64(j + 1) * np.uint64(STREAM))
                if u < uthr:
                    k += 1
            hist[k] += 1
        return hist

    return histogram


def _numba_wanted() -> bool:
    return os.environ.get("TOEHOLD_DISABLE_NUMBA", "").strip().lower() not in {"1", "true", "yes", "on"}


_numba_histogram = None
if _numba_wanted():
    try:
        _numba_histogram = _build_numba()
    except ImportError:
        _numba_histogram = None

HAVE_NUMBA = _numba_histogram is not None
DEFAULT_BACKEND = "numba" if HAVE_NUMBA else "numpy"


def histogram(key: int, threshold: int, m: int, start: int, stop: int, backend: str | None = None) -> np.ndarray:
    """Counts of trials in ``[start, stop)`` by number of tendering shareholders."""
    backend = backend or DEFAULT_BACKEND
    if backend == "numba":
        if _numba_histogram is None:
            raise RuntimeError("numba backend requested but unavailable or disabled")
        # unsigned values above 2**63 do not fit numba's int64 argument typing
        return _numba_histogram(np.uint64(key), np.uint64(threshold), m, start, stop)
    if backend == "numpy":
        return histogram_numpy(key, threshold, m, start, stop)
    raise ValueError(f"unknown backend {backend!r}")
