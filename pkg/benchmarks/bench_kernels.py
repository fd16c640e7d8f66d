"""Time the compiled kernels against their numpy fallbacks.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Both paths live in ``periodic_eigen._kernels`` regardless of the
PERIODIC_EIGEN_DISABLE_NUMBA flag, so one process can time them side by
side. The first compiled call (JIT warm-up) is excluded.
"""
import argparse
import timeit

import numpy as np

from periodic_eigen import _kernels as K
from periodic_eigen.graph import Edge, PeriodicGraph


def lattice_graph(n_vertices=32, d=2, seed=0):
    rng = np.random.default_rng(seed)
    names = [f"v{i}" for i in range(n_vertices)]
    edges = {}
    for i in range(n_vertices):
        for k in range(d):
            z = tuple(int(k == j) for j in range(d))
            for t, h, off in ((names[i], names[(i + 1) % n_vertices], z),
                              (names[i], names[(i + 3) % n_vertices], (0,) * d)):
                if t == h and not any(off):
                    continue
                edges[(t, h, off)] = float(rng.uniform(0.1, 3.0))
                edges[(h, t, tuple(-x for x in off))] = float(rng.uniform(0.1, 3.0))
    return PeriodicGraph.build(d, names, [Edge(t, h, z, w) for (t, h, z), w in edges.items()])


def cases(g):
    t, h, off, w = g.arrays
    n = g.n_vertices
    alpha = np.full(g.dimension, 0.3)
    diag = g.max_degree - g.degrees
    q, _ = K.assemble_q_numpy(n, t, h, off, w, alpha, diag)
    one = np.ones(n)
    shape = np.array((40,) * g.dimension)
    vals = np.random.default_rng(1).uniform(0.5, 2.0, size=(int(np.prod(shape)), n))
    return {
        "assemble_q": (lambda f: f(n, t, h, off, w, alpha, diag),
                       K.assemble_q_numpy, getattr(K, "assemble_q_compiled", None)),
        "assemble_dq": (lambda f: f(n, t, h, off, w, alpha),
                        K.assemble_dq_numpy, getattr(K, "assemble_dq_compiled", None)),
        "power_iteration": (lambda f: f(q, one.copy(), one.copy(), 1.0, 1e-12, 100000),
                            K.power_iteration_numpy, getattr(K, "power_iteration_compiled", None)),
        "apply_window": (lambda f: f(vals, shape, t, h, off, w, g.degrees),
                         K.apply_window_numpy, getattr(K, "apply_window_compiled", None)),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    g = lattice_graph()
    print(f"graph: |V|={g.n_vertices}, d={g.dimension}, edges={len(g.edges)}; "
          f"active backend: {K.backend()}")
    print(f"{'kernel':<16} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>9}")
    for name, (call, py, jit) in cases(g).items():
        t_np = min(timeit.repeat(lambda: call(py), number=1, repeat=args.repeat)) * 1e3
        if jit is None:
            print(f"{name:<16} {t_np:12.3f} {'n/a':>12} {'':>9}")
            continue
        call(jit)
        t_nb = min(timeit.repeat(lambda: call(jit), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<16} {t_np:12.3f} {t_nb:12.3f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
