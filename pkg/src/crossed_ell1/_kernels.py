"""Hot numeric loops, with a numba path and a pure-numpy fallback.

Only complex128 data goes through here; exact (object-dtype) arithmetic
stays in the generic Python code paths.  The backend is chosen once at
import time: numba when it is importable and ``CROSSED_ELL1_NO_JIT`` is
unset, numpy otherwise.  Both implementations are always importable as
``*_numpy`` / ``*_numba`` so they can be compared directly.
"""

from __future__ import annotations

import logging

import numpy as np

from ._config import jit_disabled, thread_cap

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------- numpy path


def twisted_convolve_numpy(A: np.ndarray, B: np.ndarray, shift_idx: np.ndarray) -> np.ndarray:
    """Dense twisted convolution on a finite permutation system.

    ``A`` is (ka, N), ``B`` is (kb, N); row ``k`` of ``A`` is the coefficient
    at exponent ``a_lo + k``.  ``shift_idx[k]`` is the index array of
    ``sigma^-(a_lo + k)`` so that ``B[l][shift_idx[k]]`` is ``alpha^(a_lo+k)``
    of row ``l``.  Returns the (ka + kb - 1, N) coefficient block.
    """
    ka, n = A.shape
    kb = B.shape[0]
    out = np.zeros((ka + kb - 1, n), dtype=np.complex128)
    for k in range(ka):
        out[k:k + kb] += A[k][None, :] * B[:, shift_idx[k]]
    return out


def band_apply_numpy(F: np.ndarray, v: np.ndarray, f_lo: int, m_lo: int, v_lo: int) -> np.ndarray:
    """Apply ``sum_n diag(f_n) S^n`` to a finitely supported sequence.

    ``F[i, j]`` is ``f_{f_lo+i}`` evaluated at orbit index ``m_lo + j``;
    ``v[t]`` is the entry at index ``v_lo + t``.  Output entry ``m_lo + j``
    is ``sum_i F[i, j] * v[m_lo + j - f_lo - i - v_lo]`` (out-of-range
    entries of ``v`` count as zero).
    """
    kf, nm = F.shape
    nv = v.shape[0]
    out = np.zeros(nm, dtype=np.complex128)
    m = np.arange(nm)
    for i in range(kf):
        t = m + (m_lo - f_lo - i - v_lo)
        ok = (t >= 0) & (t < nv)
        out[ok] += F[i, ok] * v[t[ok]]
    return out


def fourier_eval_numpy(c: np.ndarray, n_lo: int, theta: np.ndarray, chunk: int = 512) -> np.ndarray:
    """Evaluate ``sum_k c[k] exp(2 pi i (n_lo + k) theta)`` at each angle."""
    n = n_lo + np.arange(c.shape[0])
    out = np.empty(theta.shape[0], dtype=np.complex128)
    for s in range(0, theta.shape[0], chunk):
        th = theta[s:s + chunk]
        out[s:s + chunk] = np.exp(2j * np.pi * np.outer(th, n)) @ c
    return out


# ---------------------------------------------------------------- numba path

try:  # pragma: no cover - exercised only when numba is present
    import numba

    logging.getLogger("numba").setLevel(logging.WARNING)

    @numba.njit(cache=True)
    def twisted_convolve_numba(A, B, shift_idx):
        ka, n = A.shape
        kb = B.shape[0]
        out = np.zeros((ka + kb - 1, n), dtype=np.complex128)
        for k in range(ka):
            idx = shift_idx[k]
            for l in range(kb):
                row = out[k + l]
                for x in range(n):
                    row[x] += A[k, x] * B[l, idx[x]]
        return out

    @numba.njit(cache=True)
    def band_apply_numba(F, v, f_lo, m_lo, v_lo):
        kf, nm = F.shape
        nv = v.shape[0]
        out = np.zeros(nm, dtype=np.complex128)
        for j in range(nm):
            acc = 0j
            base = j + m_lo - f_lo - v_lo
            for i in range(kf):
                t = base - i
                if 0 <= t < nv:
                    acc += F[i, j] * v[t]
            out[j] = acc
        return out

    @numba.njit(cache=True)
    def fourier_eval_numba(c, n_lo, theta):
        out = np.empty(theta.shape[0], dtype=np.complex128)
        two_pi = 2.0 * np.pi
        for s in range(theta.shape[0]):
            th = theta[s]
            step = np.exp(1j * two_pi * th)
            z = np.exp(1j * two_pi * th * n_lo)
            acc = 0j
            # Re-anchor the running power every 64 terms to bound drift.
            for k in range(c.shape[0]):
                if k % 64 == 0:
                    z = np.exp(1j * two_pi * th * (n_lo + k))
                acc += c[k] * z
                z *= step
            out[s] = acc
        return out

    HAVE_NUMBA = True
    _cap = thread_cap()
    if _cap is not None:
        numba.set_num_threads(min(_cap, numba.config.NUMBA_NUM_THREADS))
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False
    twisted_convolve_numba = twisted_convolve_numpy
    band_apply_numba = band_apply_numpy
    fourier_eval_numba = fourier_eval_numpy


USING_NUMBA = HAVE_NUMBA and not jit_disabled()

if USING_NUMBA:
    twisted_convolve = twisted_convolve_numba
    band_apply = band_apply_numba
    fourier_eval = fourier_eval_numba
else:
    twisted_convolve = twisted_convolve_numpy
    band_apply = band_apply_numpy
    fourier_eval = fourier_eval_numpy


def backend_name() -> str:
    return "numba" if USING_NUMBA else "numpy"
