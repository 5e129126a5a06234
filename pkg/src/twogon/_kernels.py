"""Numba kernels for the hot loops.

Three things live here: the coefficient recursion of the 2-gon maps (table,
single-value, and streamed-product forms), and the seeded Monte Carlo
counter.  The recursion is

    g_m = (2 a g_{m-1} + (m - 2) g_{m-2}) / m,   g_0 = 0, g_1 = 1,

whose terms are all non-negative for a in (0, 1], so there is no
cancellation to worry about; the kernels exist purely for speed (radial
sums walk ~4e7 coefficients per radius at the deep end of the schedule).
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint64


@njit("float64[:](float64, int64)", cache=True, nogil=True)
def recursion_table(alpha, n):
    out = np.zeros(n + 1)
    if n >= 1:
        out[1] = 1.0
    for m in range(2, n + 1):
        out[m] = (2.0 * alpha * out[m - 1] + (m - 2) * out[m - 2]) / m
    return out


@njit("float64(float64, int64)", cache=True, nogil=True)
def coeff_at(alpha, n):
    # single g_n with two running values, O(n) time O(1) space
    if n == 0:
        return 0.0
    gprev = 0.0
    gcur = 1.0
    for m in range(2, n + 1):
        gnext = (2.0 * alpha * gcur + (m - 2) * gprev) / m
        gprev = gcur
        gcur = gnext
    return gcur


@njit("void(float64[:], float64[:], float64[:], int64, float64[:])", cache=True, nogil=True)
def product_chunk(alphas, gprev, gcur, n0, out):
    # out[i] = prod_j g_{n0+i}(alphas[j]) for n0 >= 2, advancing the per-alpha
    # state in place.  Entry contract: gprev[j] = g_{n0-2}, gcur[j] = g_{n0-1};
    # on exit the state is positioned for a follow-up call at n0 + len(out).
    m = alphas.shape[0]
    for i in range(out.shape[0]):
        n = n0 + i
        p = 1.0
        for j in range(m):
            gnext = (2.0 * alphas[j] * gcur[j] + (n - 2) * gprev[j]) / n
            gprev[j] = gcur[j]
            gcur[j] = gnext
            p *= gnext
        out[i] = p


@njit("UniTuple(int64, 3)(int64, int64, uint64)", cache=True, nogil=True)
def mc_count_chunk(n, count, state):
    # splitmix64 stream (Steele-Lea-Flood mixing constants, hard-coded so the
    # stream is identical on every platform); one chunk of `count` samples of
    # n uniforms each.  Returns (stage_count, final_count, mismatches):
    # stage = all partial sums a_1+..+a_k >= k-1, final = a_1+..+a_n >= n-1.
    stage = 0
    final = 0
    mism = 0
    s = state
    for _ in range(count):
        ssum = 0.0
        ok_stage = True
        for k in range(1, n + 1):
            s = (s + uint64(0x9E3779B97F4A7C15)) & uint64(0xFFFFFFFFFFFFFFFF)
            z = s
            z = (z ^ (z >> uint64(30))) * uint64(0xBF58476D1CE4E5B9)
            z &= uint64(0xFFFFFFFFFFFFFFFF)
            z = (z ^ (z >> uint64(27))) * uint64(0x94D049BB133111EB)
            z &= uint64(0xFFFFFFFFFFFFFFFF)
            z = z ^ (z >> uint64(31))
            u = (z >> uint64(11)) * (1.0 / 9007199254740992.0)
            ssum += u
            if k >= 2 and ssum < k - 1:
                ok_stage = False
        ok_final = ssum >= n - 1
        if ok_stage:
            stage += 1
        if ok_final:
            final += 1
        if ok_stage != ok_final:
            mism += 1
    return stage, final, mism


@njit("float64[:](uint64, int64)", cache=True, nogil=True)
def uniform_chunk(state, count):
    # same splitmix64 stream as mc_count_chunk, exposed for cross-checking
    # against the pure-Python reference in twogon.rng
    out = np.empty(count)
    s = state
    for i in range(count):
        s = (s + uint64(0x9E3779B97F4A7C15)) & uint64(0xFFFFFFFFFFFFFFFF)
        z = s
        z = (z ^ (z >> uint64(30))) * uint64(0xBF58476D1CE4E5B9)
        z &= uint64(0xFFFFFFFFFFFFFFFF)
        z = (z ^ (z >> uint64(27))) * uint64(0x94D049BB133111EB)
        z &= uint64(0xFFFFFFFFFFFFFFFF)
        z = z ^ (z >> uint64(31))
        out[i] = (z >> uint64(11)) * (1.0 / 9007199254740992.0)
    return out
