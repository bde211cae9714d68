"""Chebyshev-optimal integer redistribution under a non-negative sum constraint.

Given an integer vector x (typically noisy counts, possibly negative) and a
target total c >= 0, find an integer vector y >= 0 with sum(y) = c minimizing
the Chebyshev distance max_i |x_i - y_i|.

The solver works on the offset z = y - x: start every coordinate at the
smallest uniform offset that covers the target, then walk the coordinates
round-robin in a chosen order, clipping each down toward max(-x_i, -t) while a
surplus remains, and relax the clip radius t by one notch per full round. The
visiting order picks which optimal solution is returned: ascending order
reduces the smallest entries first (fewest spurious positives), descending
reduces the largest first (fewest spurious zeros), random emulates an
arbitrary optimum.

All arithmetic is exact (Python integers), so there is no overflow path.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

__all__ = [
    "OptResult",
    "ORDERS",
    "lower_bound",
    "intopt_simple",
    "intopt_fast",
    "brute_force_oracle",
]

ORDERS = ("ascending", "descending", "random")


@dataclass(frozen=True)
class OptResult:
    """A feasible solution and its Chebyshev distance from the input."""

    values: Tuple[int, ...]
    distance: int


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _check_problem(x: Sequence[int], c: int) -> List[int]:
    if len(x) == 0:
        raise ValueError("x must be non-empty")
    xs = [int(v) for v in x]
    if int(c) != c or c < 0:
        raise ValueError(f"target sum must be a non-negative integer, got {c!r}")
    return xs


def lower_bound(x: Sequence[int], c: int) -> int:
    """Floor on the achievable Chebyshev distance.

    Any feasible y moves the total by c - sum(x), so some coordinate moves by
    at least ceil(|c - sum(x)| / d); and any negative coordinate must climb to
    at least zero. Clipped below at 0. Tight when x is non-negative and mass
    is added; negative coordinates can force extra removal elsewhere.
    """
    xs = _check_problem(x, c)
    gap = _ceil_div(abs(c - sum(xs)), len(xs))
    return max(gap, -min(xs), 0)


def _initial_offset(xs: List[int], c: int) -> List[int]:
    # smallest uniform shift covering the target, lifted to feasibility
    base = _ceil_div(c - sum(xs), len(xs))
    return [base if base > -v else -v for v in xs]


def _order_indices(xs: List[int], order: str, rng: Optional[random.Random]) -> List[int]:
    if order == "ascending":
        return sorted(range(len(xs)), key=lambda i: (xs[i], i))
    if order == "descending":
        return sorted(range(len(xs)), key=lambda i: (-xs[i], i))
    if order == "random":
        if rng is None:
            raise ValueError("order='random' needs an rng")
        idx = list(range(len(xs)))
        rng.shuffle(idx)
        return idx
    raise ValueError(f"order must be one of {ORDERS}, got {order!r}")


def _finish(xs: List[int], z: List[int]) -> OptResult:
    values = tuple(v + dz for v, dz in zip(xs, z))
    distance = max(abs(dz) for dz in z)
    return OptResult(values, distance)


def intopt_simple(
    x: Sequence[int],
    c: int,
    order: str = "ascending",
    rng: Optional[random.Random] = None,
) -> OptResult:
    """Reference solver: one clip per visit, radius grows by 1 per round."""
    xs = _check_problem(x, c)
    d = len(xs)
    if d == 1:
        return OptResult((c,), abs(c - xs[0]))
    target = c - sum(xs)
    z = _initial_offset(xs, c)
    t = max(abs(v) for v in z)
    idx = _order_indices(xs, order, rng)
    zsum = sum(z)
    j = 0
    while zsum > target:
        i = idx[j]
        floor_i = max(-xs[i], -t)
        lowered = z[i] - (zsum - target)
        nz = floor_i if lowered < floor_i else lowered
        zsum += nz - z[i]
        z[i] = nz
        j += 1
        if j == d:
            j = 0
            t += 1
    return _finish(xs, z)


def intopt_fast(
    x: Sequence[int],
    c: int,
    order: str = "ascending",
    rng: Optional[random.Random] = None,
) -> OptResult:
    """Same output as ``intopt_simple``, with two shortcuts.

    Coordinates already clipped to -x_i are dropped from the rotation at each
    wrap (they can only no-op), and the radius jumps by the whole-round average
    surplus instead of by 1, so a round either finishes the job or retires at
    least one coordinate. Worst case O(d^2) instead of O(d * max|x|).
    """
    xs = _check_problem(x, c)
    d = len(xs)
    if d == 1:
        return OptResult((c,), abs(c - xs[0]))
    target = c - sum(xs)
    z = _initial_offset(xs, c)
    t = max(abs(v) for v in z)
    active = [i for i in _order_indices(xs, order, rng) if z[i] > -xs[i]]
    zsum = sum(z)
    j = 0
    while zsum > target:
        if not active:
            raise AssertionError("no reducible coordinate left; target sum must be >= 0")
        i = active[j]
        floor_i = max(-xs[i], -t)
        lowered = z[i] - (zsum - target)
        nz = floor_i if lowered < floor_i else lowered
        zsum += nz - z[i]
        z[i] = nz
        j += 1
        if j == len(active):
            j = 0
            active = [i2 for i2 in active if z[i2] > -xs[i2]]
            if not active:
                break  # only reachable with zsum == target; recheck ends the loop
            step = (zsum - target) // len(active)
            t += step if step > 1 else 1
    return _finish(xs, z)


def brute_force_oracle(x: Sequence[int], c: int) -> int:
    """Exhaustive optimum of the Chebyshev distance, for tiny instances.

    Enumerates every y >= 0 with sum(y) = c (stars and bars); intended as an
    independent test oracle, hence the hard d <= 4, c <= 12 envelope.
    """
    xs = _check_problem(x, c)
    d = len(xs)
    if d > 4:
        raise ValueError("oracle envelope is d <= 4")
    if c > 12:
        raise ValueError("oracle envelope is c <= 12")
    best = None
    for bars in combinations(range(c + d - 1), d - 1):
        prev = -1
        y = []
        for b in bars:
            y.append(b - prev - 1)
            prev = b
        y.append(c + d - 2 - prev)
        dist = max(abs(a - b) for a, b in zip(xs, y))
        if best is None or dist < best:
            best = dist
    assert best is not None
    return best
