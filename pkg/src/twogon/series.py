"""Truncated power series on the disk and radial boundary asymptotics.

Covers construction of the (possibly rotated) 2-gon series, coefficientwise
(Hadamard) products, pointwise evaluation, and estimation of the limits
(1-r)^gamma f(r) or f(r)/(-log(1-r)) as r -> 1 along the radius.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from . import _kernels
from .coeffs import coeff_table_recursive
from .errors import DomainError, PrecisionError


@dataclass(frozen=True)
class AlphaParam:
    """A 2-gon parameter alpha = modulus * e^(i phase), modulus in (0, 1]."""

    modulus: float
    phase: float = 0.0

    def __post_init__(self):
        m = float(self.modulus)
        p = float(self.phase)
        if not math.isfinite(m) or not 0.0 < m <= 1.0:
            raise ValueError(f"modulus must lie in (0, 1], got {m!r}")
        if not math.isfinite(p):
            raise ValueError(f"phase must be finite, got {p!r}")
        # normalize to (-pi, pi]
        p = math.remainder(p, 2.0 * math.pi)
        if p == -math.pi:
            p = math.pi
        object.__setattr__(self, "modulus", m)
        object.__setattr__(self, "phase", p)

    @classmethod
    def from_complex(cls, z: complex) -> "AlphaParam":
        return cls(abs(z), cmath.phase(z))

    @property
    def value(self) -> complex:
        return self.modulus * cmath.exp(1j * self.phase)


def as_alpha(x) -> AlphaParam:
    """Coerce a float, complex, or AlphaParam to AlphaParam."""
    if isinstance(x, AlphaParam):
        return x
    if isinstance(x, complex):
        return AlphaParam.from_complex(x)
    return AlphaParam(float(x))


@dataclass(frozen=True)
class TruncatedSeries:
    """Complex coefficients c_0..c_N of an analytic function on the disk."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        object.__setattr__(self, "coeffs", c)
        if c.ndim != 1 or c.shape[0] < 2:
            raise ValueError("a truncated series needs order >= 1")
        if not np.all(np.isfinite(c)):
            raise ValueError("series coefficients must be finite")

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1


def two_gon_series(alpha, n: int) -> TruncatedSeries:
    """Series of the rotated 2-gon map: coefficient k is g_k(|alpha|) e^(i(k-1) phase).

    With phase 0 this reproduces the real coefficient table exactly.
    """
    a = as_alpha(alpha)
    table = coeff_table_recursive(a.modulus, n)
    if a.phase == 0.0:
        return TruncatedSeries(table.values.astype(np.complex128))
    k = np.arange(n + 1)
    return TruncatedSeries(table.values * np.exp(1j * a.phase * (k - 1)))


def hadamard(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Coefficientwise product; the order is the smaller of the two."""
    n = min(f.order, g.order)
    return TruncatedSeries(f.coeffs[: n + 1] * g.coeffs[: n + 1])


def evaluate(f: TruncatedSeries, z: complex) -> complex:
    """Partial sum sum_{n<=N} c_n z^n by Horner's rule, |z| < 1 required.

    The truncation tail is the caller's responsibility; it is bounded by
    max|c_n| * |z|^(N+1) / (1 - |z|).
    """
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError(f"evaluation requires |z| < 1, got |z| = {abs(z)}")
    acc = 0.0 + 0.0j
    for c in f.coeffs[::-1]:
        acc = acc * z + c
    return acc


def two_gon_value(alpha: float, z: complex) -> complex:
    """Closed-form value of the 2-gon map (strip map at alpha = 0):

        (( (1+z)/(1-z) )^alpha - 1) / (2 alpha),  resp.  log((1+z)/(1-z)) / 2.
    """
    alpha = float(alpha)
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError(f"evaluation requires |z| < 1, got |z| = {abs(z)}")
    w = (1.0 + z) / (1.0 - z)
    if alpha == 0.0:
        return cmath.log(w) / 2.0
    return (w**alpha - 1.0) / (2.0 * alpha)


# ---------------------------------------------------------------------------
# radial asymptotics


@dataclass(frozen=True)
class PowerMode:
    """Scale by (1-r)^gamma; the fit abscissa is (1-r)^fit_exponent.

    fit_exponent defaults to min(gamma, 1/2), matching the leading
    correction order of the scaled sums for the 2-gon products.
    """

    gamma: float
    fit_exponent: float | None = None

    def resolved_fit_exponent(self) -> float:
        if self.fit_exponent is not None:
            return self.fit_exponent
        return min(self.gamma, 0.5)


@dataclass(frozen=True)
class LogMode:
    """Scale by 1/(-log(1-r)); the limit is the slope of S(r) vs -log(1-r)."""


Mode = PowerMode | LogMode


@dataclass(frozen=True)
class AsymptoticEstimate:
    """Scaled partial sums along the radial schedule plus the fitted limit."""

    grid: tuple[tuple[float, float], ...]
    extrapolated_limit: float
    mode: Mode

    def __post_init__(self):
        radii = [r for r, _ in self.grid]
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("grid radii must increase strictly")
        if not math.isfinite(self.extrapolated_limit):
            raise ValueError("extrapolated limit must be finite")

    def mode_json(self):
        if isinstance(self.mode, PowerMode):
            return {"kind": "power", "gamma": self.mode.gamma}
        return {"kind": "log"}

    def summary_json(self) -> str:
        return json.dumps({"mode": self.mode_json(), "limit": self.extrapolated_limit})

    def to_csv(self) -> str:
        lines = ["r,scaled_value"]
        lines += [f"{r:.17g},{v:.17g}" for r, v in self.grid]
        return "\n".join(lines) + "\n"


def default_schedule(j_min: int = 4, j_max: int = 20) -> tuple[tuple[float, int], ...]:
    """Radii r_j = 1 - 2^-j with truncations N_j = 40 * 2^j.

    The geometric tail factor at N_j is e^-40, which dominates every
    polynomially-growing coefficient sequence produced here.
    """
    return tuple((1.0 - 2.0**-j, 40 * 2**j) for j in range(j_min, j_max + 1))


CoefficientSource = Callable[[int], Iterator[np.ndarray]]


def product_coeff_stream(alphas: Sequence[float], chunk_size: int = 65536) -> CoefficientSource:
    """Source of the Hadamard-product coefficients prod_j g_n(alpha_j).

    The returned callable takes n_max and yields consecutive float64 chunks
    whose concatenation is the coefficients for n = 0..n_max.  Every call
    restarts from n = 0 with fresh recursion state, so independent workers
    can each hold their own iterator.
    """
    mods = np.asarray([float(a) for a in alphas], dtype=np.float64)
    if mods.size == 0:
        raise ValueError("need at least one parameter")
    if np.any(~np.isfinite(mods)) or np.any(mods <= 0.0) or np.any(mods > 1.0):
        raise DomainError(f"parameters must lie in (0, 1], got {list(mods)}")

    def source(n_max: int) -> Iterator[np.ndarray]:
        gprev = np.zeros(mods.shape[0])
        gcur = np.ones(mods.shape[0])
        n = 0
        while n <= n_max:
            count = min(chunk_size, n_max - n + 1)
            out = np.empty(count)
            lo = 0
            if n == 0:
                out[0] = 0.0
                lo = 1
                if count > 1:
                    out[1] = 1.0  # g_1 = 1 for every factor
                    lo = 2
            if lo < count:
                _kernels.product_chunk(mods, gprev, gcur, n + lo, out[lo:])
            yield out
            n += count

    return source


def series_coeff_stream(series: TruncatedSeries) -> CoefficientSource:
    """Source view of an explicit real series (handy for small cases)."""
    values = np.real_if_close(series.coeffs)
    if np.iscomplexobj(values):
        raise ValueError("radial asymptotics expect a real coefficient stream")

    def source(n_max: int) -> Iterator[np.ndarray]:
        if n_max > series.order:
            raise ValueError(f"series order {series.order} < requested {n_max}")
        yield values[: n_max + 1].astype(np.float64)

    return source


def _partial_sum(source: CoefficientSource, r: float, n_max: int) -> float:
    log_r = math.log(r)
    total = 0.0
    n = 0
    for chunk in source(n_max):
        powers = np.exp((n + np.arange(chunk.shape[0])) * log_r)
        total += float(np.dot(chunk, powers))
        n += chunk.shape[0]
        if n > n_max:
            break
    return total


def radial_asymptotic(
    source: CoefficientSource,
    mode: Mode,
    schedule: Sequence[tuple[float, int]] | None = None,
    fit_points: int = 6,
) -> AsymptoticEstimate:
    """Scaled radial sums along the schedule plus a fitted r -> 1 limit.

    Power mode: the grid holds (1-r)^gamma S(r); the limit is the intercept
    of a least-squares line in (1-r)^fit_exponent over the last fit_points
    grid points.  Log mode: the grid holds S(r)/(-log(1-r)); the limit is
    the slope of S(r) against -log(1-r), which sheds the O(1) additive
    correction that a finite-r ratio cannot.
    """
    if schedule is None:
        schedule = default_schedule()
    if len(schedule) < 2:
        raise ValueError("need at least two radii")
    rows = []
    sums = []
    for r, n_max in schedule:
        if not 0.0 < r < 1.0:
            raise DomainError(f"schedule radii must lie in (0, 1), got {r!r}")
        s = _partial_sum(source, r, n_max)
        if not math.isfinite(s):
            raise PrecisionError(f"partial sum at r = {r} is not finite")
        sums.append(s)
        if isinstance(mode, PowerMode):
            rows.append((r, (1.0 - r) ** mode.gamma * s))
        else:
            rows.append((r, s / (-math.log(1.0 - r))))

    k = min(fit_points, len(rows))
    if isinstance(mode, PowerMode):
        x = np.array([(1.0 - r) ** mode.resolved_fit_exponent() for r, _ in rows[-k:]])
        y = np.array([v for _, v in rows[-k:]])
        slope, intercept = np.polyfit(x, y, 1)
        limit = float(intercept)
    else:
        x = np.array([-math.log(1.0 - r) for r, _ in rows[-k:]])
        y = np.array(sums[-k:])
        slope, intercept = np.polyfit(x, y, 1)
        limit = float(slope)
    return AsymptoticEstimate(grid=tuple(rows), extrapolated_limit=limit, mode=mode)
