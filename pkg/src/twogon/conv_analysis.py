"""Growth classification of finite and infinite 2-gon convolutions.

The boundary growth of f_{a_1} * ... * f_{a_n} (finite or as a limit) is
governed by the deficit sum B = sum (1 - a_n): B > 1 bounded, B = 1
logarithmic with constant (1/2) prod 1/Gamma(a_n + 1), B < 1 power law
(1-r)^-(1-B) with constant Gamma(1-B)/2^B * prod 1/Gamma(a_n + 1).

Also here: the infinite-convolution coefficient limits lambda^(k-1)
prod g_k(|a_n|) with certified tail truncation, sequence normalization
(moduli positive, all rotation pushed into a single unimodular lambda),
the vanishing-coefficient diagnostic, supermultiplicativity of g_3, the
angle-at-infinity fold for unbounded convex mappings, and the exact and
Monte Carlo forms of the 1/n! unboundedness probability.
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _kernels, rng
from .coeffs import g3_closed_form
from .errors import DomainError, PrecisionError
from .series import AlphaParam, as_alpha
from .specfun import EULER_GAMMA, log_gamma

# Boundary tolerance for the B = 1 (equivalently alpha + beta = 1) decision.
# The trichotomy is discontinuous and callers pass exact decimals, so inputs
# within EPS_BOUNDARY of the boundary resolve to the Logarithmic branch.
EPS_BOUNDARY = 1e-12

# Tail certificates for the infinite products (see module tests):
#   -log Gamma(1 + a) <= (1 - EulerGamma) (1 - a)      on (0, 1]
#   -log g_k(a)       <= 2 log(2) (k - 1) (1 - a)      on [1/2, 1)
# The second follows from g_k(a) >= a^(k-1) and -log a <= 2 log(2) (1 - a)
# on [1/2, 1); it is only invoked once the remaining deficit sum is <= 1/2,
# which forces every remaining parameter above 1/2.
_LOG_GAMMA_DEFICIT_SLOPE = 1.0 - EULER_GAMMA
_TAIL_SAFE_DEFICIT = 0.5

_MAX_TAIL_TERMS = 200_000


def _coeff_deficit_slope(k: int) -> float:
    return 2.0 * math.log(2.0) * (k - 1)


# ---------------------------------------------------------------------------
# growth classes


@dataclass(frozen=True)
class GrowthClass:
    """One of Identity, Bounded, Logarithmic(constant), PowerLaw(exponent, constant)."""

    kind: str
    exponent: float | None = None
    constant: float | None = None

    _KINDS = ("Identity", "Bounded", "Logarithmic", "PowerLaw")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown growth kind {self.kind!r}")
        if self.exponent is not None and not 0.0 < self.exponent <= 1.0:
            raise ValueError(f"exponent must lie in (0, 1], got {self.exponent!r}")
        if self.constant is not None and not self.constant > 0.0:
            raise ValueError(f"constant must be positive, got {self.constant!r}")

    def json_dict(self) -> dict:
        return {"kind": self.kind, "exponent": self.exponent, "constant": self.constant}


# ---------------------------------------------------------------------------
# parameter sequences


@dataclass(frozen=True)
class TailRule:
    """Rule-generated tail of a parameter sequence, with declared certificates.

    param_at(i) is the i-th tail element (i >= 1, local indexing after the
    explicit head).  deficit_tail(i) bounds sum_{m > i} (1 - |alpha_m|) over
    the remaining tail; math.inf marks a certified-divergent deficit sum.
    phase_tail(i) bounds sum_{m > i} |arg alpha_m|; None means the rule does
    not certify phase summability.
    """

    param_at: Callable[[int], AlphaParam]
    deficit_tail: Callable[[int], float] | None = None
    phase_tail: Callable[[int], float] | None = None
    deficit_divergent: bool = False
    label: str = "rule"


@dataclass(frozen=True)
class SequenceSpec:
    """Finite list or head-plus-rule description of a parameter sequence."""

    head: tuple[AlphaParam, ...] = ()
    tail: TailRule | None = None

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(as_alpha(a) for a in self.head))
        if not self.head and self.tail is None:
            raise ValueError("a sequence needs a head or a tail rule")

    @classmethod
    def from_moduli(cls, moduli: Iterable[float]) -> "SequenceSpec":
        return cls(head=tuple(AlphaParam(float(m)) for m in moduli))

    @classmethod
    def from_params(cls, params: Iterable) -> "SequenceSpec":
        return cls(head=tuple(as_alpha(p) for p in params))

    @property
    def is_finite(self) -> bool:
        return self.tail is None

    def param(self, n: int) -> AlphaParam:
        """1-based global indexing across head then tail."""
        if n < 1:
            raise ValueError("indices are 1-based")
        if n <= len(self.head):
            return self.head[n - 1]
        if self.tail is None:
            raise IndexError(f"finite sequence of length {len(self.head)}")
        return self.tail.param_at(n - len(self.head))

    def deficit_tail_bound(self, n: int) -> float:
        """Certified bound on sum over (1 - modulus) beyond global index n."""
        if self.tail is None:
            return 0.0
        if self.tail.deficit_divergent:
            return math.inf
        if self.tail.deficit_tail is None:
            raise ValueError("tail rule declares no deficit bound")
        return self.tail.deficit_tail(max(0, n - len(self.head)))

    def phase_tail_bound(self, n: int) -> float:
        if self.tail is None:
            return 0.0
        if self.tail.phase_tail is None:
            raise PrecisionError("tail rule does not certify phase summability")
        return self.tail.phase_tail(max(0, n - len(self.head)))

    def is_normalized(self) -> bool:
        """At most the first element carries a nonzero phase; tail phases certified zero."""
        if any(p.phase != 0.0 for p in self.head[1:]):
            return False
        if self.tail is not None:
            try:
                if self.phase_tail_bound(len(self.head)) != 0.0:
                    return False
            except PrecisionError:
                return False
        return True

    def b_enclosure(self) -> tuple[float, float]:
        """Certified enclosure of B = sum (1 - modulus)."""
        partial = 0.0
        for p in self.head:
            partial += 1.0 - p.modulus
        if self.tail is None:
            return partial, partial
        if self.tail.deficit_divergent:
            return math.inf, math.inf
        n = len(self.head)
        bound = self.deficit_tail_bound(n)
        while bound > 1e-13 and n - len(self.head) < _MAX_TAIL_TERMS:
            n += 1
            partial += 1.0 - self.param(n).modulus
            bound = self.deficit_tail_bound(n)
        if bound > 1e-13:
            raise PrecisionError("tail bound did not shrink enough to pin down B")
        return partial, partial + bound

    @property
    def B(self) -> float:
        lo, hi = self.b_enclosure()
        if math.isinf(lo):
            return math.inf
        return lo + (hi - lo) / 2.0


def const_sequence(x: float) -> SequenceSpec:
    """alpha_n = x for every n."""
    p = AlphaParam(float(x))
    divergent = p.modulus < 1.0
    return SequenceSpec(
        head=(),
        tail=TailRule(
            param_at=lambda i: p,
            deficit_tail=(lambda i: 0.0) if not divergent else None,
            phase_tail=lambda i: 0.0,
            deficit_divergent=divergent,
            label=f"const:{x:g}",
        ),
    )


def fj_sequence(j: int) -> SequenceSpec:
    """alpha_n = (1 - 1/(j+1))^(2^-n), the family approximating the extremal map.

    Deficits obey 1 - (1-q)^x <= -x log(1-q), so the tail beyond index i is
    bounded by 2^-i log(1 + 1/j).
    """
    if j != int(j) or j < 1:
        raise ValueError(f"family index must be an integer >= 1, got {j!r}")
    j = int(j)
    base = 1.0 - 1.0 / (j + 1)
    rate = math.log1p(1.0 / j)

    def param_at(i: int) -> AlphaParam:
        return AlphaParam(base ** (2.0**-i))

    return SequenceSpec(
        head=(),
        tail=TailRule(
            param_at=param_at,
            deficit_tail=lambda i: 2.0**-i * rate,
            phase_tail=lambda i: 0.0,
            label=f"fj:{j}",
        ),
    )


def geom_sequence(base: float, ratio: float) -> SequenceSpec:
    """Deficits in geometric progression: alpha_n = 1 - base * ratio^(n-1)."""
    base = float(base)
    ratio = float(ratio)
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"ratio must lie in (0, 1), got {ratio!r}")
    if not 0.0 < base < 1.0:
        raise ValueError(f"base must lie in (0, 1), got {base!r}")

    def param_at(i: int) -> AlphaParam:
        return AlphaParam(1.0 - base * ratio ** (i - 1))

    return SequenceSpec(
        head=(),
        tail=TailRule(
            param_at=param_at,
            deficit_tail=lambda i: base * ratio**i / (1.0 - ratio),
            phase_tail=lambda i: 0.0,
            label=f"geom:{base:g},{ratio:g}",
        ),
    )


# ---------------------------------------------------------------------------
# classification


def _log_gamma_product(seq: SequenceSpec) -> float:
    """sum of -log Gamma(modulus + 1) over the sequence, tail-certified."""
    total = 0.0
    n = 0
    for p in seq.head:
        n += 1
        total += -log_gamma(p.modulus + 1.0)
    if seq.tail is None:
        return total
    bound = _LOG_GAMMA_DEFICIT_SLOPE * seq.deficit_tail_bound(n)
    while bound > 1e-14 and n - len(seq.head) < _MAX_TAIL_TERMS:
        n += 1
        total += -log_gamma(seq.param(n).modulus + 1.0)
        bound = _LOG_GAMMA_DEFICIT_SLOPE * seq.deficit_tail_bound(n)
    if bound > 1e-14:
        raise PrecisionError("Gamma product tail did not converge")
    return total


def _classify_from_b(b_lo: float, b_hi: float, seq: SequenceSpec) -> GrowthClass:
    if math.isinf(b_lo):
        return GrowthClass("Bounded")
    unc = (b_hi - b_lo) / 2.0
    b = b_lo + unc
    if b > 1.0 + EPS_BOUNDARY + unc:
        return GrowthClass("Bounded")
    if abs(b - 1.0) <= EPS_BOUNDARY - unc:
        log_prod = _log_gamma_product(seq)
        return GrowthClass("Logarithmic", constant=0.5 * math.exp(log_prod))
    if b < 1.0 - EPS_BOUNDARY - unc:
        log_prod = _log_gamma_product(seq)
        constant = math.exp(log_gamma(1.0 - b) - b * math.log(2.0) + log_prod)
        return GrowthClass("PowerLaw", exponent=1.0 - b, constant=constant)
    raise PrecisionError(
        f"B enclosure [{b_lo}, {b_hi}] straddles the boundary decision at 1"
    )


def classify_sequence(seq: SequenceSpec) -> GrowthClass:
    """Growth of the (possibly infinite) convolution from its deficit sum B.

    Inputs with |B - 1| <= 1e-12 resolve to the Logarithmic branch; see
    EPS_BOUNDARY.
    """
    for p in seq.head:
        if p.phase != 0.0:
            raise DomainError("growth classification expects positive real parameters")
    b_lo, b_hi = seq.b_enclosure()
    return _classify_from_b(b_lo, b_hi, seq)


def classify_pair(alpha: float, beta: float) -> GrowthClass:
    """Growth trichotomy of a single convolution f_alpha * f_beta.

    Bounded when alpha + beta < 1, Logarithmic with constant
    1/(2 Gamma(alpha+1) Gamma(beta+1)) at alpha + beta = 1 (within
    EPS_BOUNDARY), else PowerLaw with exponent alpha + beta - 1 and
    constant 2^(alpha+beta-2) Gamma(alpha+beta-1) / (Gamma(alpha+1) Gamma(beta+1)).
    """
    for v in (alpha, beta):
        v = float(v)
        if not math.isfinite(v) or not 0.0 < v <= 1.0:
            raise DomainError(f"parameters must lie in (0, 1], got {v!r}")
    return classify_sequence(SequenceSpec.from_moduli([alpha, beta]))


# ---------------------------------------------------------------------------
# infinite convolutions


def _log_coeff(modulus: float, k: int) -> float:
    g = _kernels.coeff_at(modulus, k)
    return math.log(g) if g > 0.0 else -math.inf


def _modulus_product_at(
    seq: SequenceSpec, k: int, tol: float, max_factors: int
) -> tuple[float, int, str]:
    """prod_n g_k(modulus_n), tail-extended until certified within tol.

    Returns (value, factors_used, reason); reason is 'finite', 'converged'
    (tail effect certified below tol) or 'vanished' (running product below
    tol with only shrinking factors left, so the limit is reported as 0).
    """
    log_p = 0.0
    n = 0
    for p in seq.head:
        n += 1
        log_p += _log_coeff(p.modulus, k)
    if seq.tail is None:
        return math.exp(log_p), n, "finite"
    if seq.tail.deficit_tail is None and not seq.tail.deficit_divergent:
        raise ValueError("infinite sequence without a declared tail bound")
    slope = _coeff_deficit_slope(k)
    while n - len(seq.head) < max_factors:
        bound = seq.deficit_tail_bound(n)
        if bound <= _TAIL_SAFE_DEFICIT:
            value = math.exp(log_p)
            if value * (1.0 - math.exp(-slope * bound)) < tol:
                return value, n, "converged"
        if math.exp(log_p) < tol:
            # every remaining factor is in (0, 1], so the limit is below the
            # running product and the coefficient is 0 within tol
            return math.exp(log_p), n, "vanished"
        n += 1
        log_p += _log_coeff(seq.param(n).modulus, k)
    raise PrecisionError(
        f"product at k = {k} not certified within tol after {max_factors} factors"
    )


def _lambda_of(seq: SequenceSpec) -> complex:
    """Unimodular lambda = prod e^(i arg alpha_n); requires certified phases."""
    total = 0.0
    for p in seq.head:
        total += p.phase
    if seq.tail is not None:
        # built-in rules generate positive parameters; a zero phase_tail bound
        # certifies the tail contributes nothing
        if seq.phase_tail_bound(len(seq.head)) != 0.0:
            raise PrecisionError("nonzero tail phases are not supported")
    return cmath.exp(1j * total)


def infinite_conv_coeff(
    seq: SequenceSpec, k: int, tol: float = 1e-13, max_factors: int = _MAX_TAIL_TERMS
) -> complex:
    """k-th Taylor coefficient lambda^(k-1) prod_n g_k(|alpha_n|) of the limit map.

    Partial products extend until the declared tail bound certifies the
    remaining factors change the value by less than tol; a running product
    below tol with a certified-decreasing tail is reported as 0.
    """
    if k != int(k) or k < 1:
        raise ValueError(f"coefficient index must be an integer >= 1, got {k!r}")
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    k = int(k)
    if (
        seq.tail is not None
        and seq.tail.deficit_tail is None
        and not seq.tail.deficit_divergent
    ):
        raise ValueError("infinite sequence without a declared tail bound")
    lam = _lambda_of(seq)
    if k == 1:
        return 1.0 + 0.0j  # g_1 = 1 identically and lambda^0 = 1
    value, _, reason = _modulus_product_at(seq, k, tol, max_factors)
    if reason == "vanished":
        return 0.0 + 0.0j
    return lam ** (k - 1) * value


def normalize_sequence(seq: SequenceSpec) -> tuple[SequenceSpec, complex, bool]:
    """Push all rotation into the first element: beta_1 = lambda |alpha_1|.

    Returns (normalized sequence, lambda, degenerate).  degenerate = True
    means the modulus product tends to 0, so the limit map is the identity
    z regardless of phases.
    """
    degenerate = seq.tail is not None and seq.tail.deficit_divergent
    moduli_head = tuple(AlphaParam(p.modulus) for p in seq.head)
    if degenerate:
        return SequenceSpec(head=moduli_head, tail=seq.tail), 1.0 + 0.0j, True
    lam = _lambda_of(seq)  # raises PrecisionError if tail phases uncertified
    if moduli_head:
        first = AlphaParam(moduli_head[0].modulus, cmath.phase(lam))
        head = (first,) + moduli_head[1:]
    else:
        head = ()
    return SequenceSpec(head=head, tail=seq.tail), lam, False


@dataclass(frozen=True)
class VanishingReport:
    """Numerical witness for the vanishing-coefficient dichotomy."""

    k0: int
    tol: float
    vanishes_at_k0: bool
    identity_witnessed: bool
    # per coefficient index: (factors used, partial product reached)
    partial_products: dict[int, tuple[int, float]] = field(default_factory=dict)
    message: str = ""


def vanishing_coeff_diagnostic(
    seq: SequenceSpec, k0: int, tol: float = 1e-6, k_max: int = 10
) -> VanishingReport:
    """If the k0-th coefficient vanishes, witness that all of them do.

    A vanishing coefficient at any k0 >= 2 forces the limit map to be the
    identity; the report extends the partial products for every k up to
    k_max and records how many factors each needed to drop below tol.
    """
    if k0 != int(k0) or k0 < 2:
        raise ValueError(f"k0 must be an integer >= 2, got {k0!r}")
    if not seq.is_normalized():
        raise ValueError("diagnostic expects a normalized sequence")
    value, used, _ = _modulus_product_at(seq, int(k0), tol, _MAX_TAIL_TERMS)
    partials = {int(k0): (used, value)}
    if value >= tol:
        return VanishingReport(
            k0=int(k0),
            tol=tol,
            vanishes_at_k0=False,
            identity_witnessed=False,
            partial_products=partials,
            message="no vanishing coefficient",
        )
    all_below = True
    for k in range(2, int(k_max) + 1):
        if k == k0:
            continue
        v, u, _ = _modulus_product_at(seq, k, tol, _MAX_TAIL_TERMS)
        partials[k] = (u, v)
        all_below = all_below and v < tol
    message = (
        "identity witnessed: all coefficients fall below tol"
        if all_below
        else "coefficient k0 vanishes but the sweep is inconclusive"
    )
    return VanishingReport(
        k0=int(k0),
        tol=tol,
        vanishes_at_k0=True,
        identity_witnessed=all_below,
        partial_products=dict(sorted(partials.items())),
        message=message,
    )


# ---------------------------------------------------------------------------
# supermultiplicativity and angles


def g3_supermultiplicativity(alpha: float, beta: float) -> float:
    """Margin g_3(alpha beta) - g_3(alpha) g_3(beta); strictly positive on (0,1)^2."""
    for v in (alpha, beta):
        v = float(v)
        if not math.isfinite(v) or not 0.0 < v < 1.0:
            raise DomainError(f"parameters must lie in (0, 1), got {v!r}")
    return g3_closed_form(alpha * beta) - g3_closed_form(alpha) * g3_closed_form(beta)


def angle_fold(alphas: Sequence[float]) -> GrowthClass:
    """Left fold of the angle-at-infinity composition a o b = a + b - 1.

    The inputs are angles at infinity in units of pi.  If any intermediate
    fold drops below 0 (beyond -EPS_BOUNDARY) some stage is bounded and so
    is the whole convolution.  Otherwise the record carries the nominal
    final angle sum(a_i) - (n-1): equality with the true angle holds when
    the domains admit sectors of minimal amplitude, which is not decidable
    from the angle data alone, so a strictly positive nominal angle is
    reported as PowerLaw(exponent=angle) and a zero one as Logarithmic,
    both with constant None.
    """
    values = [float(a) for a in alphas]
    if not values:
        raise ValueError("need at least one angle")
    for v in values:
        if not math.isfinite(v) or not 0.0 < v <= 1.0:
            raise DomainError(f"angles (in units of pi) must lie in (0, 1], got {v!r}")
    acc = values[0]
    for v in values[1:]:
        acc = acc + v - 1.0
        if acc < -EPS_BOUNDARY:
            return GrowthClass("Bounded")
    if acc <= EPS_BOUNDARY:
        return GrowthClass("Logarithmic")
    return GrowthClass("PowerLaw", exponent=min(acc, 1.0))


# ---------------------------------------------------------------------------
# the 1/n! probability


def uniform_sum_cdf_exact(n: int, t: Fraction) -> Fraction:
    """P(U_1 + ... + U_n <= t) for iid uniforms, by inclusion-exclusion.

    Exact rational arithmetic throughout; the alternating sum over the
    corner simplices of the cube is the independent route that makes the
    volume checks non-circular.
    """
    if n != int(n) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    t = Fraction(t)
    if t <= 0:
        return Fraction(0)
    if t >= n:
        return Fraction(1)
    total = Fraction(0)
    for k in range(math.floor(t) + 1):
        total += (-1) ** k * math.comb(n, k) * (t - k) ** n
    return total / math.factorial(n)


def unbounded_volume_exact(n: int) -> Fraction:
    """Volume of {a in [0,1]^n : sum a_i >= n-1}, exact rational.

    Computed as 1 minus the inclusion-exclusion CDF at n-1 (an n-term
    alternating sum), not by quoting 1/n! directly.  Guarded to n <= 20.
    """
    if n != int(n) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if n > 20:
        raise DomainError("exact volume guarded to n <= 20")
    n = int(n)
    return 1 - uniform_sum_cdf_exact(n, Fraction(n - 1))


@dataclass(frozen=True)
class ProbabilityEstimate:
    """Exact and Monte Carlo estimates of the unboundedness probability."""

    n: int
    exact: Fraction
    mc_estimate: float
    mc_stderr: float
    samples: int
    seed: int
    stage_count: int
    final_count: int

    def __post_init__(self):
        if not 0.0 <= self.mc_estimate <= 1.0:
            raise ValueError("estimate must lie in [0, 1]")

    def json_dict(self) -> dict:
        return {
            "n": self.n,
            "exact": f"{self.exact.numerator}/{self.exact.denominator}",
            "estimate": self.mc_estimate,
            "stderr": self.mc_stderr,
            "samples": self.samples,
            "seed": self.seed,
        }


def _worker_count(workers: int | None) -> int:
    requested = max(1, int(workers)) if workers is not None else 1
    env = os.environ.get("TWOGON_THREADS")
    if env:
        try:
            requested = min(requested, max(1, int(env)))
        except ValueError:
            pass
    return requested


def unbounded_probability_mc(
    n: int,
    samples: int,
    seed: int = rng.DEFAULT_SEED,
    workers: int | None = None,
) -> ProbabilityEstimate:
    """Monte Carlo estimate of P(all stages of the convolution stay unbounded).

    Draws uniform vectors in [0,1]^n from the deterministic splitmix64
    stream, counting both the stage conditions (every partial sum
    a_1+..+a_k >= k-1) and the single final condition sum >= n-1; the two
    counts agree sample-by-sample (a violated stage forces the final sum
    below n-1 because each coordinate is at most 1), which is verified per
    sample inside the kernel.  Work is split into fixed chunks sub-seeded
    from (seed, chunk index), so the result is independent of the worker
    count; the TWOGON_THREADS environment variable caps the worker count.
    """
    if n != int(n) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    if samples != int(samples) or samples < 10_000:
        raise ValueError(f"need at least 10^4 samples, got {samples!r}")
    n = int(n)
    samples = int(samples)
    seed = int(seed)

    chunks = []
    done = 0
    index = 0
    while done < samples:
        take = min(rng.CHUNK_SAMPLES, samples - done)
        chunks.append((index, take))
        done += take
        index += 1

    def run_chunk(item):
        idx, count = item
        state = np.uint64(rng.chunk_seed(seed, idx))
        return _kernels.mc_count_chunk(n, count, state)

    nworkers = _worker_count(workers)
    if nworkers > 1:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            results = list(pool.map(run_chunk, chunks))
    else:
        results = [run_chunk(c) for c in chunks]

    stage = sum(r[0] for r in results)
    final = sum(r[1] for r in results)
    mism = sum(r[2] for r in results)
    if mism:
        raise AssertionError(
            f"stage and final counters disagreed on {mism} samples (generator bug)"
        )
    est = final / samples
    stderr = math.sqrt(est * (1.0 - est) / samples)
    return ProbabilityEstimate(
        n=n,
        exact=Fraction(1, math.factorial(n)),
        mc_estimate=est,
        mc_stderr=stderr,
        samples=samples,
        seed=seed,
        stage_count=stage,
        final_count=final,
    )
