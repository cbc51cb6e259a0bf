import os
import subprocess
import sys

import numpy as np
import pytest

from crossed_ell1 import _kernels as K


@pytest.mark.parametrize("seed", range(5))
def test_variants_agree(seed):
    rng = np.random.default_rng(seed)
    n, ka, kb = 13, 4, 6
    A = rng.standard_normal((ka, n)) + 1j * rng.standard_normal((ka, n))
    B = rng.standard_normal((kb, n)) + 1j * rng.standard_normal((kb, n))
    shift = np.stack([rng.permutation(n) for _ in range(ka)]).astype(np.int64)
    assert np.allclose(K.twisted_convolve_numpy(A, B, shift), K.twisted_convolve_numba(A, B, shift), atol=1e-12)
    F = rng.standard_normal((5, 30)) + 0j
    v = rng.standard_normal(20) + 0j
    assert np.allclose(K.band_apply_numpy(F, v, -2, -7, -5), K.band_apply_numba(F, v, -2, -7, -5), atol=1e-12)
    c = rng.standard_normal(41) + 1j * rng.standard_normal(41)
    th = rng.random(100)
    assert np.allclose(K.fourier_eval_numpy(c, -20, th), K.fourier_eval_numba(c, -20, th), atol=1e-10)


def test_twisted_convolve_oracle():
    rng = np.random.default_rng(7)
    n = 6
    A = rng.standard_normal((3, n)) + 0j
    B = rng.standard_normal((2, n)) + 0j
    shift = np.stack([rng.permutation(n) for _ in range(3)])
    out = K.twisted_convolve(A, B, shift)
    want = np.zeros((4, n), complex)
    for k in range(3):
        for l in range(2):
            for y in range(n):
                want[k + l, y] += A[k, y] * B[l, shift[k][y]]
    assert np.allclose(out, want)


def test_fourier_eval_oracle():
    c = np.array([1, 2j, -1])
    th = np.array([0.0, 0.25, 0.6])
    want = [sum(c[k] * np.exp(2j * np.pi * (k - 1) * t) for k in range(3)) for t in th]
    assert np.allclose(K.fourier_eval(c, -1, th), want)


def test_env_flag_selects_numpy():
    code = "from crossed_ell1 import _kernels as K; print(K.backend_name())"
    env = {**os.environ, "CROSSED_ELL1_NO_JIT": "1"}
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "numpy"
    env = {k: v for k, v in os.environ.items() if k != "CROSSED_ELL1_NO_JIT"}
    env["CROSSED_ELL1_THREADS"] = "1"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == ("numba" if K.HAVE_NUMBA else "numpy")
