"""Deterministic 64-bit mixing generator (splitmix64) and chunk sub-seeding.

The Monte Carlo work is split into fixed-size chunks; chunk c of a run with
seed s draws from a splitmix64 stream whose initial state is

    chunk_seed(s, c) = mix64((s mod 2^64) XOR mix64(c)).

Counts are integers summed over chunks, so the result is independent of how
chunks are distributed over workers.  This module is the pure-Python
reference; the numba kernel in twogon._kernels replicates the identical
arithmetic and is cross-tested for bit equality.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

CHUNK_SAMPLES = 65536

DEFAULT_SEED = 42


def mix64(x: int) -> int:
    """splitmix64 finalizer (Steele-Lea-Flood constants)."""
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def chunk_seed(seed: int, chunk_index: int) -> int:
    if chunk_index < 0:
        raise ValueError("chunk index must be nonnegative")
    return mix64((seed & MASK64) ^ mix64(chunk_index))


def uniforms(state: int, count: int) -> list[float]:
    """Reference stream of `count` doubles in [0, 1) from the given state."""
    out = []
    s = state & MASK64
    for _ in range(count):
        s = (s + 0x9E3779B97F4A7C15) & MASK64
        z = ((s ^ (s >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        z = z ^ (z >> 31)
        out.append((z >> 11) * (1.0 / 9007199254740992.0))
    return out
