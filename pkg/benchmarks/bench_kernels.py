"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--scale 1]

Each row reports the best-of-``repeat`` wall time for both variants on the
same inputs and the max abs difference between their outputs.  The numba
compile happens in a warm-up call that is not timed.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from crossed_ell1 import _kernels as K


def best_time(fn, args, repeat):
    fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(rng, scale):
    n, k = 200 * scale, 40 * scale
    A = rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n))
    B = rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n))
    perm = rng.permutation(n)
    shift = np.stack([np.roll(perm, s) for s in range(k)]).astype(np.int64)
    yield "twisted_convolve", f"{k}x{k} coeffs, N={n}", K.twisted_convolve_numpy, K.twisted_convolve_numba, (A, B, shift)

    kf, nm, nv = 60 * scale, 4000 * scale, 3000 * scale
    F = rng.standard_normal((kf, nm)) + 0j
    v = rng.standard_normal(nv) + 0j
    yield "band_apply", f"{kf} diagonals, {nm} outputs", K.band_apply_numpy, K.band_apply_numba, (F, v, -30, -2000, -1500)

    nc, nt = 2001, 4096 * scale
    c = rng.standard_normal(nc) + 1j * rng.standard_normal(nc)
    theta = rng.random(nt)
    yield "fourier_eval", f"{nc} coeffs at {nt} angles", K.fourier_eval_numpy, K.fourier_eval_numba, (c, -1000, theta)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--scale", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not K.HAVE_NUMBA:
        print("numba is not importable; both columns time the numpy path")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':18} {'size':30} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8} {'max diff':>10}")
    for name, size, f_np, f_nb, data in cases(rng, args.scale):
        t_np, out_np = best_time(f_np, data, args.repeat)
        t_nb, out_nb = best_time(f_nb, data, args.repeat)
        diff = float(np.max(np.abs(out_np - out_nb)))
        print(f"{name:18} {size:30} {t_np * 1e3:10.2f} {t_nb * 1e3:10.2f} {t_np / t_nb:8.1f} {diff:10.2e}")


if __name__ == "__main__":
    main()
