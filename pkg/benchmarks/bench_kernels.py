"""Time the compiled kernels against their plain python bodies.

    python benchmarks/bench_kernels.py [--N 8] [--sweeps 20] [--repeat 3]

The python side calls ``.py_func`` of the same kernels, so both run on
identical inputs; the compiled call is warmed up once before timing.
"""

import argparse
import timeit
from itertools import permutations

import numpy as np

from rtensor import _accel
from rtensor.graph_core import inverse, load_catalog
from rtensor.tensor_lab import sample_iid


def metropolis_inputs(N, sweeps, seed=0):
    rng = np.random.default_rng(seed)
    P = N * N
    A = sample_iid("complex-gaussian", N, 3, rng).data.reshape(N, P).copy()
    M = A @ A.conj().T
    return (A, M, rng.standard_normal((sweeps, N * P, 2)), rng.random((sweeps, N * P)),
            0.5 / N, 0.05, float(P), float(np.trace(M).real), float(np.sum(np.abs(M) ** 2)),
            np.empty(sweeps), np.empty(sweeps))


def face_inputs():
    B = load_catalog()["cube"]
    sigmas = np.array(list(permutations(range(B.k))), dtype=np.int64)
    inv = np.array([inverse(r) for r in B.wiring], dtype=np.int64)
    return sigmas, inv


def bench(name, fn, make_args, repeat):
    fn(*make_args())  # compile
    fast = min(timeit.repeat(lambda: fn(*make_args()), number=1, repeat=repeat))
    slow = min(timeit.repeat(lambda: fn.py_func(*make_args()), number=1, repeat=repeat))
    print(f"{name:22s} compiled {fast * 1e3:9.2f} ms   python {slow * 1e3:9.2f} ms   "
          f"speedup {slow / fast:7.1f}x")


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--N", type=int, default=8)
    p.add_argument("--sweeps", type=int, default=20)
    p.add_argument("--repeat", type=int, default=3)
    a = p.parse_args()
    print(f"backend: {_accel.BACKEND}")
    bench(f"metropolis N={a.N} x{a.sweeps}", _accel.metropolis_sweeps,
          lambda: metropolis_inputs(a.N, a.sweeps), a.repeat)
    bench("face_sums cube", _accel.face_sums, face_inputs, a.repeat)
    perms = np.array(list(permutations(range(7))), dtype=np.int64)
    bench("cycle_counts S_7", _accel.cycle_counts, lambda: (perms,), a.repeat)


if __name__ == "__main__":
    main()
