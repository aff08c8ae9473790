"""Deterministic jump skeleton of the cheapest surviving path.

For a one-dimensional target ``[a, b]`` the cheapest way for the running
average to stay inside is a staircase: sit on a flat plateau until the
constraint ``average >= a`` is about to fail, then take one big jump that
restores ``average = b`` exactly.  Starting from height ``b * c1`` at time
``c1``:

* a plateau at height ``h`` survives while ``a * k <= h``, so it ends at
  ``t = floor(h / a)``;
* the next jump happens at ``T = t + 1`` and lands at height ``b * T``.

Jump times and sizes both grow geometrically with ratio ``b / a``, and the
number of jumps up to horizon ``n`` grows like ``log n / log(b / a)``.
Integer inputs are propagated through exact integer arithmetic so envelope
checks remain exact out to very large horizons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError

__all__ = [
    "OptimalPathSkeleton",
    "build_skeleton",
    "height_at",
    "skeleton_as_measure",
    "cost_heuristic",
]

_HORIZON_CAP = 2**62


@dataclass(frozen=True)
class OptimalPathSkeleton:
    """Jump times ``T_i``, post-jump heights ``b * T_i``, and the horizon."""

    a: float
    b: float
    c1: int
    horizon: int
    jump_times: tuple[int, ...]
    heights: tuple[float, ...]

    @property
    def k_n(self) -> int:
        """Number of jumps within the horizon."""
        return len(self.jump_times)

    @property
    def initial_height(self) -> float:
        return self.b * self.c1


def _floor_div(h, a):
    # Exact for int/int; math.floor otherwise.
    if isinstance(h, int) and isinstance(a, int):
        return h // a
    return math.floor(h / a)


def build_skeleton(a: float, b: float, c1: int, n: int) -> OptimalPathSkeleton:
    """Construct the staircase skeleton on the horizon ``[c1, n]``."""
    if not (0 < a < b):
        raise ConfigError("need 0 < a < b")
    if not (isinstance(c1, int) and c1 >= 1):
        raise ConfigError("c1 must be an integer >= 1")
    if not (isinstance(n, int) and n >= c1):
        raise ConfigError("horizon n must be an integer >= c1")
    if n > _HORIZON_CAP / b:
        raise ConfigError("horizon too large for exact height arithmetic")

    # Keep everything in exact integers when both endpoints are integers.
    exact = isinstance(a, int) and isinstance(b, int)
    av = a if exact else float(a)
    bv = b if exact else float(b)

    times: list[int] = []
    heights: list = []
    height = bv * c1
    while True:
        plateau_end = _floor_div(height, av)
        t_next = plateau_end + 1
        if t_next > n:
            break
        height = bv * t_next
        times.append(int(t_next))
        heights.append(height)
    return OptimalPathSkeleton(
        a=a, b=b, c1=c1, horizon=n,
        jump_times=tuple(times), heights=tuple(heights),
    )


def height_at(skel: OptimalPathSkeleton, k: int):
    """Skeleton height at integer time ``k`` in ``[c1, horizon]``."""
    if not (skel.c1 <= k <= skel.horizon):
        raise ConfigError("k outside the skeleton domain")
    idx = -1
    for i, t in enumerate(skel.jump_times):
        if t <= k:
            idx = i
        else:
            break
    return skel.initial_height if idx < 0 else skel.heights[idx]


def skeleton_as_measure(skel: OptimalPathSkeleton) -> tuple[tuple[int, float], ...]:
    """Jump point measure: atoms ``(T_i, J_i)`` with ``J_i`` the height gain."""
    atoms = []
    prev = skel.initial_height
    for t, h in zip(skel.jump_times, skel.heights):
        atoms.append((t, h - prev))
        prev = h
    return tuple(atoms)


def cost_heuristic(skel: OptimalPathSkeleton, alpha: float) -> float:
    """Leading-order log-cost of realising the skeleton.

    The jump at scale ``(b/a)**i`` costs ``(b/a)**(i*(1-alpha))`` in
    probability, so the total log-cost is
    ``sum_i (1 - alpha) * i * log(b/a) = (1-alpha) * log(b/a) * k(k+1)/2``.
    """
    if not (alpha > 1.0):
        raise ConfigError("alpha must exceed 1")
    k = skel.k_n
    return (1.0 - alpha) * math.log(skel.b / skel.a) * k * (k + 1) / 2.0
