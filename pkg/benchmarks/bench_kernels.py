"""Time the hot kernels under both implementations.

The package ships each kernel twice: a plain-numpy version and a numba
version selected at import time (MARTONKIT_NO_NUMBA=1 forces the former).
This script runs the same workloads through both and prints a table of
median wall times, speedups, and the largest value disagreement, which
doubles as a parity check.

Run from the repo root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --repeats 9
"""

import argparse
import timeit

import numpy as np

from martonkit import _kernels
from martonkit.channel import load_channel
from martonkit.mappings import admissible_mappings


def _coupling_workload(nu, nv, nx, n_starts, seed):
    """Inputs for ascend_batch shaped like a real inner maximization."""
    ch = load_channel("claim1") if nx == 2 else None
    rng = np.random.default_rng(seed)
    if ch is None:
        qy = rng.dirichlet(np.ones(3), size=nx)
        qz = rng.dirichlet(np.ones(3), size=nx)
    else:
        qy, qz = ch.q_y, ch.q_z
    tables = admissible_mappings(nu, nv, nx)
    cell_u = np.repeat(np.arange(nu, dtype=np.int64), nv)
    cell_v = np.tile(np.arange(nv, dtype=np.int64), nu)
    cell_x = np.array([t.cells.ravel() for t in tables], dtype=np.int64)
    p_x = rng.dirichlet(np.ones(nx))
    targets = np.tile(p_x, (len(tables), 1))
    s0 = np.empty((len(tables), n_starts, nu * nv))
    for m in range(len(tables)):
        for k in range(n_starts):
            raw = rng.exponential(size=nu * nv)
            for b in range(nx):
                cols = cell_x[m] == b
                if cols.any():
                    raw[cols] *= p_x[b] / raw[cols].sum()
            s0[m, k] = raw
    iters = 300 if nu * nv * len(tables) <= 200 else 120
    args = (s0, cell_u, cell_v, cell_x, cell_x, targets,
            np.ascontiguousarray(qy, dtype=np.float64),
            np.ascontiguousarray(qz, dtype=np.float64),
            nu, nv, 1.0, iters, 1e-11, 40)
    return args


def _bench(fn, args, repeats, number):
    times = timeit.repeat(lambda: fn(*args), repeat=repeats, number=number)
    return min(times) / number


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if "numba" not in _kernels.IMPLEMENTATIONS:
        print("numba path unavailable (MARTONKIT_NO_NUMBA set, or numba "
              "missing); nothing to compare.")
        return

    np_impl = _kernels.IMPLEMENTATIONS["numpy"]
    nb_impl = _kernels.IMPLEMENTATIONS["numba"]
    _kernels.warmup()

    rng = np.random.default_rng(0)
    p_ent = rng.dirichlet(np.ones(4096))
    p_caps = rng.dirichlet(np.ones(2 * 2 * 6 * 2)).reshape(2, 2, 6, 2)
    qy = rng.dirichlet(np.ones(2), size=2)
    qz = rng.dirichlet(np.ones(2), size=2)

    cases = [
        ("entropy_bits (n=4096)", "entropy_bits", (p_ent,), 200),
        ("marton_caps (2,2,6,2)", "marton_caps", (p_caps, qy, qz), 200),
        ("ascend_batch 2x2x2, 16 starts", "ascend_batch",
         _coupling_workload(2, 2, 2, 16, seed=1), 1),
        ("ascend_batch 3x3x2, 6 starts", "ascend_batch",
         _coupling_workload(3, 3, 2, 6, seed=2), 1),
    ]

    header = f"{'workload':<34}{'numpy':>12}{'numba':>12}{'speedup':>9}{'max diff':>12}"
    print(header)
    print("-" * len(header))
    for label, key, call_args, number in cases:
        out_np = np_impl[key](*call_args)
        out_nb = nb_impl[key](*call_args)
        if key == "ascend_batch":
            # Individual starts may wander to different local optima once
            # rounding perturbs a trajectory; the solver only consumes the
            # best value per mapping, so that is what parity means here.
            diff = float(np.abs(out_np[0].max(axis=1)
                                - out_nb[0].max(axis=1)).max())
        else:
            diff = float(np.abs(np.asarray(out_np) - np.asarray(out_nb)).max())
        t_np = _bench(np_impl[key], call_args, args.repeats, number)
        t_nb = _bench(nb_impl[key], call_args, args.repeats, number)
        print(f"{label:<34}{t_np * 1e3:>10.2f}ms{t_nb * 1e3:>10.2f}ms"
              f"{t_np / t_nb:>8.1f}x{diff:>12.2e}")


if __name__ == "__main__":
    main()
