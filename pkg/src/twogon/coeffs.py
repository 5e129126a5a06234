"""Taylor coefficients g_n(alpha) of the 2-gon disk mappings.

f_alpha maps the unit disk onto an unbounded convex 2-gon; its coefficient
sequence satisfies the recursion

    g_{n+2} = (2 alpha g_{n+1} + n g_n) / (n + 2),   g_0 = 0, g_1 = 1,

which is the primary generator here (all terms non-negative, so no
cancellation, O(N) time).  An independent direct formula

    g_n = (1/2a) sum_{k=1..n} 2^k binom(a, k) binom(n-1, n-k)

exists as a cross-checking oracle.  Its terms alternate in sign and grow
huge (max |term| ~ 8e19 at n = 50, alpha = 0.5, where double precision
returns ~5e3 instead of ~0.11), so coeff_direct evaluates the sum in exact
rational arithmetic and rounds once at the end, capped at n <= 60 to bound
the cost.

The normalized sequence n^{1-alpha} g_n(alpha) converges to

    L(alpha) = 2^(alpha-1) / Gamma(alpha + 1),

available as coeff_limit_L.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import DomainError, PrecisionError
from .specfun import log_gamma

N_DIRECT_MAX = 60

_METHODS = ("recursive", "direct", "alpha-zero-limit")


@dataclass(frozen=True)
class CoefficientTable:
    """Coefficients g_0..g_N for one parameter value, with provenance tag."""

    alpha: float
    values: np.ndarray
    method: str

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or vals.shape[0] < 2:
            raise ValueError("a coefficient table needs at least g_0 and g_1")
        if not np.all(np.isfinite(vals)):
            raise ValueError("coefficient tables must be finite")
        if self.method not in _METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")

    @property
    def order(self) -> int:
        return self.values.shape[0] - 1

    def json_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "method": self.method,
            "values": [float(v) for v in self.values],
        }

    def to_json(self) -> str:
        return json.dumps(self.json_dict())

    @classmethod
    def from_json(cls, text: str) -> "CoefficientTable":
        obj = json.loads(text)
        return cls(alpha=float(obj["alpha"]), values=np.array(obj["values"]), method=obj["method"])

    def to_csv(self) -> str:
        # 17 significant digits: enough for an exact decimal round-trip
        lines = ["n,g_n"]
        lines += [f"{n},{v:.17g}" for n, v in enumerate(self.values)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str, alpha: float, method: str) -> "CoefficientTable":
        rows = [line for line in text.strip().splitlines()[1:] if line]
        values = np.empty(len(rows))
        for row in rows:
            n_str, v_str = row.split(",")
            values[int(n_str)] = float(v_str)
        return cls(alpha=alpha, values=values, method=method)


def coeff_table_recursive(alpha: float, n: int) -> CoefficientTable:
    """Table of g_0..g_n via the recursion, for alpha in (0, 1]."""
    alpha = float(alpha)
    if n != int(n) or n < 1:
        raise ValueError(f"order must be an integer >= 1, got {n!r}")
    if alpha == 0.0:
        raise DomainError(
            "alpha = 0 is the strip-map limit; use coeff_alpha_zero for its table"
        )
    if not math.isfinite(alpha) or not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha!r}")
    values = _kernels.recursion_table(alpha, int(n))
    return CoefficientTable(alpha=alpha, values=values, method="recursive")


def coeff_at(alpha: float, n: int) -> float:
    """Single g_n(alpha) with two running values (no table storage)."""
    alpha = float(alpha)
    if not math.isfinite(alpha) or not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha!r}")
    if n != int(n) or n < 0:
        raise ValueError(f"index must be a nonnegative integer, got {n!r}")
    return _kernels.coeff_at(alpha, int(n))


def coeff_direct(alpha: float, n: int) -> float:
    """Independent evaluation of g_n(alpha) by the alternating binomial sum.

    Exact rational arithmetic internally (alpha enters as its exact binary
    value), so the result is the correctly rounded value of the formula.
    Raises PrecisionError above N_DIRECT_MAX; trust the recursion there.
    """
    alpha = float(alpha)
    if not math.isfinite(alpha) or not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    if n != int(n) or n < 1:
        raise ValueError(f"index must be an integer >= 1, got {n!r}")
    n = int(n)
    if n > N_DIRECT_MAX:
        raise PrecisionError(
            f"direct sum capped at n = {N_DIRECT_MAX}; use the recursion beyond"
        )
    a = Fraction(alpha)
    total = Fraction(0)
    b = Fraction(1)  # running binom(a, k)
    for k in range(1, n + 1):
        b = b * (a - (k - 1)) / k
        total += (1 << k) * b * math.comb(n - 1, k - 1)
    return float(total / (2 * a))


def coeff_alpha_zero(n: int) -> CoefficientTable:
    """Table for the alpha -> 0 limit map (the horizontal strip): 1/n for odd n."""
    if n != int(n) or n < 1:
        raise ValueError(f"order must be an integer >= 1, got {n!r}")
    n = int(n)
    values = np.zeros(n + 1)
    values[1::2] = 1.0 / np.arange(1, n + 1, 2)
    return CoefficientTable(alpha=0.0, values=values, method="alpha-zero-limit")


def normalized_G(table: CoefficientTable, n: int) -> float:
    """n^(1-alpha) g_n(alpha) from a table."""
    if n != int(n) or not 1 <= n <= table.order:
        raise ValueError(f"index must lie in [1, {table.order}], got {n!r}")
    n = int(n)
    return n ** (1.0 - table.alpha) * float(table.values[n])


def normalized_g_at(alpha: float, n: int) -> float:
    """n^(1-alpha) g_n(alpha) without building a table (O(1) space)."""
    if n != int(n) or n < 1:
        raise ValueError(f"index must be an integer >= 1, got {n!r}")
    return int(n) ** (1.0 - float(alpha)) * coeff_at(alpha, int(n))


def coeff_limit_L(alpha: float) -> float:
    """Limit 2^(alpha-1) / Gamma(alpha+1) of the normalized coefficients.

    Defined on (0, 1] only: the limit tends to 1/2 as alpha -> 0+ but the
    value at 0 itself is not attained.
    """
    alpha = float(alpha)
    if not math.isfinite(alpha) or not 0.0 < alpha <= 1.0:
        raise DomainError(f"the coefficient limit is defined on (0, 1], got {alpha!r}")
    return math.exp((alpha - 1.0) * math.log(2.0) - log_gamma(alpha + 1.0))


def g3_closed_form(alpha: float) -> float:
    """Closed form g_3(alpha) = 1 - (2/3)(1 - alpha^2)."""
    return 1.0 - (2.0 / 3.0) * (1.0 - alpha * alpha)
