"""Time the numba and numpy flavours of every kernel on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--rank 3]

Both flavours are called directly, so the ``OMLOGIC_NUMBA`` flag does not
matter here.  Results of the two flavours are compared before timing.
"""

import argparse
import time

import numpy as np

from omlogic import kernels
from omlogic import lattice as LT
from omlogic.implication import poly_table
from omlogic.universe import build_fragment, csr


def best_of(fn, args, repeat):
    fn(*args)  # warm-up (triggers compilation for the jit flavour)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t)
    return min(times)


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def cases(rank):
    big = LT.product(LT.mo(3), LT.boolean(2))  # 32 elements
    L = LT.mo(2)
    frag = build_fragment(L, rank, 2)
    ptr, child, val = csr(frag.nodes)
    t3 = poly_table(L, 3)
    yield "transitive_closure", (big.leq,)
    yield "tables", (big.leq,)
    yield "commute_matrix", (big.meet_table, big.join_table, big.ortho)
    yield "om_violation", (big.leq, big.meet_table, big.join_table, big.ortho)
    yield "i2_violation", (poly_table(big, 3), big.meet_table, big.comm)
    yield f"atom_tables[mo:2 rank {rank}, {len(frag)} nodes]", (
        ptr, child, val, L.meet_table, L.join_table, t3, L.bottom, L.top,
    )


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--rank", type=int, default=3)
    args = ap.parse_args(argv)

    print(f"{'kernel':44s} {'numba [s]':>11s} {'numpy [s]':>11s} {'ratio':>8s}")
    for name, inputs in cases(args.rank):
        base = name.split("[")[0]
        jit = getattr(kernels, base + "_jit")
        ref = getattr(kernels, base + "_numpy")
        if not same(jit(*inputs), ref(*inputs)):
            raise SystemExit(f"{name}: flavours disagree")
        tj = best_of(jit, inputs, args.repeat)
        tn = best_of(ref, inputs, args.repeat)
        print(f"{name:44s} {tj:11.5f} {tn:11.5f} {tn / tj:8.1f}")


if __name__ == "__main__":
    main()
