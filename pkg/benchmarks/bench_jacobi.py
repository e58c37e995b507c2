"""Compare the compiled and pure-Python Jacobi kernels.

Times raw kernel calls on batches of random Hermitian matrices, then an
end-to-end witness scan over the Werner family (the heaviest realistic
consumer of the eigensolver).  Run as:

    python benchmarks/bench_jacobi.py
"""

import time

import numpy as np

from steermap import _jacobi_py, linalg, mapping, witnesses
from steermap.mapping import INV_SQRT3
from steermap.states import werner

try:
    from steermap import _jacobi_cy
except ImportError:
    _jacobi_cy = None


def batch(dim, count, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        out.append(np.ascontiguousarray((g + g.conj().T) / 2))
    return out


def time_kernel(mod, mats):
    start = time.perf_counter()
    for m in mats:
        mod.jacobi_eigh(m.copy(order="C"), 100, 1e-14)
    return time.perf_counter() - start


def witness_scan(n_points):
    for p in np.linspace(0.0, 1.0, n_points):
        tau = werner(float(p))
        sigma = mapping.map_n(tau, mapping.alice_biased_partner(tau, 0.0), INV_SQRT3)
        witnesses.negativity(sigma)
        witnesses.f3_steering(tau)


def main():
    reps = 2000
    print(f"kernel call timings ({reps} random Hermitian matrices per dim)")
    print(f"{'dim':>4} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for dim in (2, 4, 6, 8):
        mats = batch(dim, reps, seed=dim)
        t_py = time_kernel(_jacobi_py, mats)
        if _jacobi_cy is None:
            print(f"{dim:>4} {t_py / reps * 1e6:>10.1f}us {'missing':>12} {'-':>9}")
            continue
        t_cy = time_kernel(_jacobi_cy, mats)
        print(
            f"{dim:>4} {t_py / reps * 1e6:>10.1f}us {t_cy / reps * 1e6:>10.1f}us "
            f"{t_py / t_cy:>8.1f}x"
        )

    n_points = 2000
    print(f"\nwitness scan over {n_points} Werner states (whole pipeline)")
    saved = linalg._jacobi_impl
    try:
        linalg._jacobi_impl = _jacobi_py
        start = time.perf_counter()
        witness_scan(n_points)
        t_py = time.perf_counter() - start
        print(f"  python kernel:   {t_py:.2f} s")
        if _jacobi_cy is not None:
            linalg._jacobi_impl = _jacobi_cy
            start = time.perf_counter()
            witness_scan(n_points)
            t_cy = time.perf_counter() - start
            print(f"  compiled kernel: {t_cy:.2f} s  ({t_py / t_cy:.2f}x end to end)")
    finally:
        linalg._jacobi_impl = saved


if __name__ == "__main__":
    main()
