"""Privacy accounting and exact integer noise primitives.

Accounting is done in zero-concentrated DP (zCDP): a mechanism run is charged
some rho, composition is additive in rho, and a (epsilon, delta) statement is
obtained through the conversion

    epsilon = rho + 2 * sqrt(rho * ln(1/delta))

All logarithms are natural. Noise is integer valued and sampled exactly with
rational arithmetic: a geometric sampler built from Bernoulli(exp(-x)) coin
flips, a discrete Laplace built from the geometric, and a discrete Gaussian
built by rejection from the discrete Laplace. No floating-point distribution
shortcut is involved, so the samplers carry none of the float-grid artifacts
that break DP guarantees.

Randomness comes from stdlib ``random.Random`` instances. ``substream`` derives
independent, reproducible generators from a root seed and a tuple of tokens
(SHA-256 keyed), which is what makes parallel releases bit-reproducible no
matter how work is scheduled.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

__all__ = [
    "PrivacyBudget",
    "SensitivityModel",
    "rho_from_eps_delta",
    "eps_from_rho",
    "per_level_sigma2",
    "stability_threshold",
    "sample_discrete_gaussian",
    "sample_discrete_laplace",
    "substream",
    "derive_seed",
]

# Float parameters are snapped to rationals before exact sampling. At this
# limit the relative snap error is ~1e-18, orders below every tolerance used
# anywhere in the accounting.
RATIONAL_LIMIT = 10**9

Numeric = Union[int, float, Fraction]


# ---------------------------------------------------------------------------
# budget conversions


def eps_from_rho(rho: float, delta: float) -> float:
    """(epsilon, delta) statement implied by a rho-zCDP guarantee."""
    if rho < 0:
        raise ValueError("rho must be >= 0")
    _check_delta(delta)
    if rho == 0:
        return 0.0
    return rho + 2.0 * math.sqrt(rho * math.log(1.0 / delta))

def rho_from_eps_delta(eps: float, delta: float) -> float:
    """Largest rho whose zCDP guarantee implies (eps, delta)-DP.

    Closed-form inverse of ``eps_from_rho``; written as
    (eps / (sqrt(L+eps) + sqrt(L)))**2 with L = ln(1/delta), which avoids the
    cancellation in (sqrt(L+eps) - sqrt(L))**2 for small eps.
    """
    if eps < 0:
        raise ValueError("eps must be >= 0")
    _check_delta(delta)
    if eps == 0:
        return 0.0
    big_l = math.log(1.0 / delta)
    return (eps / (math.sqrt(big_l + eps) + math.sqrt(big_l))) ** 2


def _check_delta(delta: float) -> None:
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")


@dataclass(frozen=True)
class PrivacyBudget:
    """A privacy budget, stored as rho with the (epsilon, delta) view attached.

    Exactly one side is authoritative at construction (``from_rho`` or
    ``from_eps_delta``); the other is derived through the conversion above.
    delta may be omitted when the budget is given as rho, in which case no
    epsilon statement exists and ``epsilon`` is None.
    """

    rho: float
    epsilon: Optional[float] = None
    delta: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.rho > 0:
            raise ValueError("rho must be > 0")

    @classmethod
    def from_rho(cls, rho: float, delta: Optional[float] = None) -> "PrivacyBudget":
        if delta is None:
            return cls(rho=float(rho))
        return cls(rho=float(rho), epsilon=eps_from_rho(rho, delta), delta=float(delta))

    @classmethod
    def from_eps_delta(cls, eps: float, delta: float) -> "PrivacyBudget":
        if not eps > 0:
            raise ValueError("eps must be > 0")
        return cls(rho=rho_from_eps_delta(eps, delta), epsilon=float(eps), delta=float(delta))


# ---------------------------------------------------------------------------
# sensitivity


@dataclass(frozen=True)
class SensitivityModel:
    """How much one user can move the counts.

    privacy: "bounded" (one user substitutes their trips) or "unbounded"
        (one user's trips are added or removed).
    m: per-user trip cap, >= 1.
    distinct: whether a user contributes at most one trip per O/D pair.
    """

    privacy: str = "bounded"
    m: int = 1
    distinct: bool = True

    def __post_init__(self) -> None:
        if self.privacy not in ("bounded", "unbounded"):
            raise ValueError(f"privacy must be 'bounded' or 'unbounded', got {self.privacy!r}")
        if not (isinstance(self.m, int) and self.m >= 1):
            raise ValueError("m must be an integer >= 1")

    @property
    def gs2_squared(self) -> int:
        """Squared L2 sensitivity of the per-pair count vector (exact integer).

        distinct trips spread one user over m unit cells; non-distinct lets all
        m land on one cell. Substitution (bounded) doubles the squared norm.
        """
        base = self.m if self.distinct else self.m * self.m
        return 2 * base if self.privacy == "bounded" else base

    @property
    def gs1(self) -> int:
        """L1 sensitivity of the per-pair count vector."""
        return 2 * self.m if self.privacy == "bounded" else self.m


def per_level_sigma2(budget: PrivacyBudget, sens: SensitivityModel, depth: int) -> float:
    """Per-level discrete Gaussian variance for a depth-``depth`` top-down release.

    sigma2 = GS2^2 * depth / (2 * rho): each level then costs rho/depth and the
    full composition consumes exactly ``budget.rho``. For the default bounded
    m=1 distinct model (GS2^2 = 2) this equals depth/rho.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    return sens.gs2_squared * depth / (2.0 * budget.rho)


def stability_threshold(eps: float, delta: float) -> float:
    """Pruning threshold for the stability histogram: 1 + 2*ln(2/delta)/eps."""
    if not eps > 0:
        raise ValueError("eps must be > 0")
    _check_delta(delta)
    return 1.0 + 2.0 * math.log(2.0 / delta) / eps


# ---------------------------------------------------------------------------
# exact samplers
#
# The building block is Bernoulli(exp(-num/den)) realized with integer
# randomness only (von Neumann's series trick), so every distribution below is
# sampled exactly for rational parameters.


def _as_fraction(value: Numeric) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(value).limit_denominator(RATIONAL_LIMIT)


def _bernoulli_exp_le1(num: int, den: int, rng: random.Random) -> int:
    # Bernoulli(exp(-num/den)) for 0 <= num <= den.
    k = 1
    while rng.randrange(k * den) < num:
        k += 1
    return k & 1


def _bernoulli_exp(num: int, den: int, rng: random.Random) -> int:
    # Bernoulli(exp(-num/den)) for any num/den >= 0, by peeling exp(-1) factors.
    while num > den:
        if not _bernoulli_exp_le1(1, 1, rng):
            return 0
        num -= den
    return _bernoulli_exp_le1(num, den, rng)


def _geometric_exp(num: int, den: int, rng: random.Random) -> int:
    # P[k] proportional to exp(-k * num/den) on k = 0, 1, 2, ...; num, den >= 1.
    # Sample at unit rate over a den-fine grid, then contract by num.
    while True:
        offset = rng.randrange(den)
        if _bernoulli_exp_le1(offset, den, rng):
            break
    units = 0
    while _bernoulli_exp_le1(1, 1, rng):
        units += 1
    return (units * den + offset) // num


def sample_discrete_laplace(scale: Numeric, rng: random.Random) -> int:
    """Exact integer Laplace draw, mass proportional to exp(-|x| / scale)."""
    frac = _as_fraction(scale)
    if frac <= 0:
        raise ValueError("scale must be > 0")
    while True:
        negative = rng.getrandbits(1)
        magnitude = _geometric_exp(frac.denominator, frac.numerator, rng)
        if negative and magnitude == 0:
            continue  # zero owns a single atom; resample instead of double counting
        return -magnitude if negative else magnitude


def _floor_sqrt(num: int, den: int) -> int:
    # floor(sqrt(num/den)) in exact integer arithmetic.
    root = math.isqrt(num // den)
    while (root + 1) * (root + 1) * den <= num:
        root += 1
    while root * root * den > num:
        root -= 1
    return root


def sample_discrete_gaussian(sigma2: Numeric, rng: random.Random) -> int:
    """Exact integer Gaussian draw, mass proportional to exp(-x^2 / (2*sigma2)).

    Rejection from a discrete Laplace envelope at scale t = floor(sigma) + 1,
    accepting y with probability exp(-(|y| - sigma2/t)^2 / (2*sigma2)). Every
    comparison is exact rational arithmetic.
    """
    frac = _as_fraction(sigma2)
    if frac <= 0:
        raise ValueError("sigma2 must be > 0")
    num, den = frac.numerator, frac.denominator
    t = _floor_sqrt(num, den) + 1
    accept_den = 2 * num * den * t * t
    while True:
        y = sample_discrete_laplace(t, rng)
        accept_num = (abs(y) * den * t - num) ** 2
        if _bernoulli_exp(accept_num, accept_den, rng):
            return y


# ---------------------------------------------------------------------------
# reproducible substreams


def _digest(seed: int, tokens: tuple) -> bytes:
    material = repr((int(seed),) + tokens).encode("utf-8")
    return hashlib.sha256(material).digest()


def substream(seed: int, *tokens: object) -> random.Random:
    """Deterministic RNG keyed by (seed, tokens) via SHA-256.

    Streams for distinct token tuples are independent for all practical
    purposes, and the derivation does not depend on process, platform, or
    scheduling order, so per-node noise is reproducible under parallelism.
    """
    return random.Random(int.from_bytes(_digest(seed, tuple(tokens)), "big"))


def derive_seed(seed: int, *tokens: object) -> int:
    """A fresh integer seed keyed by (seed, tokens); same derivation contract
    as ``substream`` but usable where an int is wanted (per-repeat seeds)."""
    return int.from_bytes(_digest(seed, tuple(tokens))[:8], "big")
