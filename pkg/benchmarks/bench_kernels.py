"""Timing the numba kernels against the numpy fallbacks.

Run:  python3 benchmarks/bench_kernels.py
"""

import itertools
import time

import numpy as np

import linorder.kernels as K


def timed(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return out, best


def main() -> None:
    if not K.NUMBA_ACTIVE:
        raise SystemExit("numba path inactive; unset LINORDER_NO_NUMBA")

    rows = []
    n = 1 << 20

    # warm the jit before timing
    K._inside_revbin_nb(8, 1, 4, 3, 8)
    K._inside_lenlex_nb(8, 1, 2, 1, 1)

    r_nb, t_nb = timed(K._inside_revbin_nb, n, 1, 4, 3, 8)
    r_np, t_np = timed(K._inside_revbin_np, n, 1, 4, 3, 8)
    assert np.array_equal(r_nb, r_np)
    rows.append(("inside_revbin 2^20", t_nb, t_np))

    l_nb, t_nb = timed(K._inside_lenlex_nb, n, 1, 2, 1, 1)
    l_np, t_np = timed(K._inside_lenlex_np, n, 1, 2, 1, 1)
    assert np.array_equal(l_nb, l_np)
    rows.append(("inside_lenlex 2^20", t_nb, t_np))

    K._window_extremes_nb(l_nb[:8], 1, 8)
    e_nb, t_nb = timed(K._window_extremes_nb, l_nb, 1 << 10, n)
    e_np, t_np = timed(K._window_extremes_np, l_nb, 1 << 10, n)
    assert tuple(int(x) for x in e_nb) == tuple(e_np)
    rows.append(("window_extremes 2^20", t_nb, t_np))

    edges = list(itertools.combinations(range(6), 2))
    eidx = {e: i for i, e in enumerate(edges)}
    triples = np.array(
        [[eidx[(i, j)], eidx[(i, k)], eidx[(j, k)]]
         for i, j, k in itertools.combinations(range(6), 3)],
        dtype=np.int64)
    K._k6_mono_census_nb(triples)
    c_nb, t_nb = timed(K._k6_mono_census_nb, triples)
    c_np, t_np = timed(K._k6_mono_census_np, triples)
    assert int(c_nb) == int(c_np) == 32768
    rows.append(("k6_mono_census", t_nb, t_np))

    m = 4000
    rng = np.random.default_rng(3)
    pa = rng.permutation(m).astype(np.int64)
    pb = pa * 5 + 11
    K._pairwise_agree_nb(pa[:8], pb[:8])
    a_nb, t_nb = timed(K._pairwise_agree_nb, pa, pb)
    a_np, t_np = timed(K._pairwise_agree_np, pa, pb)
    assert bool(a_nb) == bool(a_np) is True
    rows.append((f"pairwise_agree n={m}", t_nb, t_np))

    print(f"{'kernel':<24}{'numba':>10}{'numpy':>10}{'speedup':>9}")
    for name, nb, npp in rows:
        print(f"{name:<24}{nb:>9.4f}s{npp:>9.4f}s{npp / nb:>8.1f}x")


if __name__ == "__main__":
    main()
