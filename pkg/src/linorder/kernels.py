"""Array kernels for the counting-heavy paths.

Each kernel ships twice: a numba @njit loop and a pure-numpy fallback.
Setting LINORDER_NO_NUMBA=1 in the environment (before import) selects
the fallback; so does an unavailable numba.  Both paths produce
identical integers, tested against each other and against the exact
rational implementations.

Kernels:
  inside_revbin / inside_lenlex   membership of the first n enumerated
                                  dyadics in an interval, one byte each
  window_extremes                 running-density min/max over a prefix
                                  window by exact cross-multiplication
  k6_mono_census                  colorings of the 15 edges of the
                                  6-vertex complete graph that contain
                                  a monochromatic triangle
  pairwise_agree                  whether two position arrays induce
                                  the same order on 0..n-1
"""

from __future__ import annotations

import os

import numpy as np

_WANT_NUMBA = not os.environ.get("LINORDER_NO_NUMBA")
if _WANT_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        _WANT_NUMBA = False

NUMBA_ACTIVE = _WANT_NUMBA


def _inside_revbin_np(n: int, an: int, ad: int, bn: int, bd: int) -> np.ndarray:
    # value of m+1 reversed: group by bit length, mirror via vectorized shifts
    m = np.arange(1, n + 1, dtype=np.int64)
    lengths = np.zeros(n, dtype=np.int64)
    v = m.copy()
    while True:
        mask = v > 0
        if not mask.any():
            break
        lengths[mask] += 1
        v >>= 1
    num = np.zeros(n, dtype=np.int64)
    maxlen = int(lengths.max()) if n else 0
    for i in range(maxlen):
        bit = (m >> i) & 1
        num |= bit << np.maximum(lengths - 1 - i, 0)
    den = np.int64(1) << lengths
    return ((an * den < num * ad) & (num * bd < bn * den)).astype(np.uint8)


def _inside_lenlex_np(n: int, an: int, ad: int, bn: int, bd: int) -> np.ndarray:
    k = np.arange(n, dtype=np.int64)
    # level ell holds 2^(ell-1) items, so k sits at level floor(log2(k+1))+1
    ell = np.floor(np.log2(k + 1)).astype(np.int64) + 1
    # guard against float rounding at level boundaries
    ell -= ((np.int64(1) << (ell - 1)) - 1 > k).astype(np.int64)
    ell += ((np.int64(1) << ell) - 1 <= k).astype(np.int64)
    start = (np.int64(1) << (ell - 1)) - 1
    num = 2 * (k - start) + 1
    den = np.int64(1) << ell
    return ((an * den < num * ad) & (num * bd < bn * den)).astype(np.uint8)


def _window_extremes_np(inside: np.ndarray, lo: int, hi: int):
    c = np.cumsum(inside[:hi], dtype=np.int64)
    m = np.arange(1, hi + 1, dtype=np.int64)
    rho = c[lo - 1:] / m[lo - 1:]
    i_min = int(np.argmin(rho)) + lo - 1
    i_max = int(np.argmax(rho)) + lo - 1
    return int(c[i_min]), i_min + 1, int(c[i_max]), i_max + 1


def _k6_mono_census_np(triples: np.ndarray) -> int:
    masks = np.arange(1 << 15, dtype=np.int64)
    has = np.zeros(1 << 15, dtype=bool)
    for t in range(triples.shape[0]):
        b0 = (masks >> triples[t, 0]) & 1
        b1 = (masks >> triples[t, 1]) & 1
        b2 = (masks >> triples[t, 2]) & 1
        has |= (b0 == b1) & (b1 == b2)
    return int(has.sum())


def _pairwise_agree_np(pa: np.ndarray, pb: np.ndarray) -> bool:
    n = pa.shape[0]
    step = max(1, (1 << 22) // max(n, 1))
    for s in range(0, n, step):
        blk = slice(s, min(s + step, n))
        da = pa[blk, None] < pa[None, :]
        db = pb[blk, None] < pb[None, :]
        if (da != db).any():
            return False
    return True


if NUMBA_ACTIVE:

    @njit(cache=True)
    def _inside_revbin_nb(n, an, ad, bn, bd):  # pragma: no cover
        out = np.zeros(n, dtype=np.uint8)
        for i in range(n):
            m = i + 1
            num = 0
            bits = 0
            while m:
                num = (num << 1) | (m & 1)
                m >>= 1
                bits += 1
            den = 1 << bits
            if an * den < num * ad and num * bd < bn * den:
                out[i] = 1
        return out

    @njit(cache=True)
    def _inside_lenlex_nb(n, an, ad, bn, bd):  # pragma: no cover
        out = np.zeros(n, dtype=np.uint8)
        for i in range(n):
            k = i
            ell = 1
            size = 1
            while k >= size:
                k -= size
                ell += 1
                size = 1 << (ell - 1)
            num = 2 * k + 1
            den = 1 << ell
            if an * den < num * ad and num * bd < bn * den:
                out[i] = 1
        return out

    @njit(cache=True)
    def _window_extremes_nb(inside, lo, hi):  # pragma: no cover
        c = 0
        min_c = min_m = max_c = max_m = -1
        for m in range(1, hi + 1):
            c += inside[m - 1]
            if m < lo:
                continue
            if min_m < 0 or c * min_m < min_c * m:
                min_c, min_m = c, m
            if max_m < 0 or c * max_m > max_c * m:
                max_c, max_m = c, m
        return min_c, min_m, max_c, max_m

    @njit(cache=True)
    def _k6_mono_census_nb(triples):  # pragma: no cover
        count = 0
        for mask in range(1 << 15):
            found = False
            for t in range(triples.shape[0]):
                b0 = (mask >> triples[t, 0]) & 1
                b1 = (mask >> triples[t, 1]) & 1
                b2 = (mask >> triples[t, 2]) & 1
                if b0 == b1 and b1 == b2:
                    found = True
                    break
            if found:
                count += 1
        return count

    @njit(cache=True)
    def _pairwise_agree_nb(pa, pb):  # pragma: no cover
        n = pa.shape[0]
        for i in range(n):
            for j in range(i + 1, n):
                if (pa[i] < pa[j]) != (pb[i] < pb[j]):
                    return False
        return True


def inside_revbin(n: int, an: int, ad: int, bn: int, bd: int) -> np.ndarray:
    """Bytes marking which of the first n reverse-binary dyadics lie in
    (an/ad, bn/bd)."""
    if NUMBA_ACTIVE:
        return _inside_revbin_nb(n, an, ad, bn, bd)
    return _inside_revbin_np(n, an, ad, bn, bd)


def inside_lenlex(n: int, an: int, ad: int, bn: int, bd: int) -> np.ndarray:
    if NUMBA_ACTIVE:
        return _inside_lenlex_nb(n, an, ad, bn, bd)
    return _inside_lenlex_np(n, an, ad, bn, bd)


def window_extremes(inside: np.ndarray, lo: int, hi: int):
    """(min_count, min_at, max_count, max_at) of the running density
    over prefix lengths lo..hi."""
    if NUMBA_ACTIVE:
        return tuple(int(x) for x in _window_extremes_nb(inside, lo, hi))
    return _window_extremes_np(inside, lo, hi)


def k6_mono_census(triples: np.ndarray) -> int:
    """How many of the 2^15 edge 2-colorings contain a monochromatic
    triangle; triples maps each vertex triple to its three edge slots."""
    t = np.ascontiguousarray(triples, dtype=np.int64)
    if NUMBA_ACTIVE:
        return int(_k6_mono_census_nb(t))
    return _k6_mono_census_np(t)


def pairwise_agree(pa: np.ndarray, pb: np.ndarray) -> bool:
    """True when the two position arrays order 0..n-1 identically."""
    a = np.ascontiguousarray(pa, dtype=np.int64)
    b = np.ascontiguousarray(pb, dtype=np.int64)
    if a.shape != b.shape:
        return False
    if NUMBA_ACTIVE:
        return bool(_pairwise_agree_nb(a, b))
    return _pairwise_agree_np(a, b)


__all__ = ["NUMBA_ACTIVE", "inside_lenlex", "inside_revbin",
           "k6_mono_census", "pairwise_agree", "window_extremes"]
