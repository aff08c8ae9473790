"""Numerical audits of the constructive estimates behind the persistence law.

The lower-bound construction rides a narrow hypercuboid aligned with the
optimal ray and advances along geometric time levels ``m_i``.  Each audit
here checks one ingredient at finite, concrete parameters:

* the aligned inner cuboid and its axis ratio approaching the radial
  optimum as the cone narrows,
* the corridor/anchor/jump-window family of boxes at level ``i`` and the
  interval-arithmetic inclusions they must satisfy between consecutive
  levels,
* the gap between consecutive scaled copies of the target that forces one
  jump per level,
* the fluctuation bound for the walk between jumps, the truncated-moment
  maximal inequality behind it, the tail index of directed projections,
  and the normalized large-deviation ratio for one-step sums,
* the one-dimensional shadow bound, pathwise and at formula level.

Every check returns a small structured result plus a uniform
:class:`CheckReport` row (statistic, threshold, pass flag, margin) for the
CSV emitters.  Failures are findings, not crashes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product

import numpy as np

from .engine import make_schedule
from .errors import ConfigError, EstimationError, HypothesisError
from .geometry import (
    ConvexBody,
    persistence_exponent,
    projection_interval,
    r_star,
    radial_bounds,
    scaled_gap_ratio,
)
from .rng import derive_rng
from .sampler import (
    RVModel,
    directed_tail_constant,
    hill_tail_index,
    radial_survival,
    sample,
    truncated_second_moment,
)

__all__ = [
    "Hypercuboid",
    "InnerCuboid",
    "SegmentParams",
    "SegmentSets",
    "CheckReport",
    "build_inner_cuboid",
    "build_segment_sets",
    "first_valid_index",
    "scaling_intersection",
    "check_lemma_inclusions",
    "check_distance_claim",
    "check_fluctuation",
    "check_kolmogorov",
    "check_directed_rv",
    "check_hlms_ratio",
    "projection_bound_audit",
]


# ---------------------------------------------------------------------------
# aligned hypercuboids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Hypercuboid:
    """Axis-interval body in a rotated orthonormal frame.

    ``frame`` rows are the axes; membership is ``d`` interval tests on the
    frame coordinates.  ``lower[j] > upper[j]`` marks an inverted (empty)
    axis, which the level constructions produce at small ``i``.
    """

    frame: tuple[tuple[float, ...], ...]
    lower: tuple[float, ...]
    upper: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def inverted_axes(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.dim) if self.lower[j] > self.upper[j])

    @property
    def is_proper(self) -> bool:
        return not self.inverted_axes

    def frame_array(self) -> np.ndarray:
        return np.asarray(self.frame, dtype=float)

    def contains(self, points, tol: float = 0.0):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        coords = pts @ self.frame_array().T
        lo = np.asarray(self.lower)
        hi = np.asarray(self.upper)
        ok = np.all((coords >= lo - tol) & (coords <= hi + tol), axis=1)
        return bool(ok[0]) if np.ndim(points) == 1 else ok

    def vertices(self) -> np.ndarray:
        if self.dim > 12:
            raise ConfigError("vertex enumeration limited to dimension 12")
        frame = self.frame_array()
        corners = []
        for pick in iter_product(*zip(self.lower, self.upper)):
            corners.append(np.asarray(pick) @ frame)
        return np.asarray(corners)

    def scale(self, s: float) -> "Hypercuboid":
        if s <= 0.0:
            raise ConfigError("scale factor must be positive")
        return Hypercuboid(
            frame=self.frame,
            lower=tuple(s * v for v in self.lower),
            upper=tuple(s * v for v in self.upper),
        )

    def containment_margin(self, other: "Hypercuboid") -> float:
        """Smallest axis slack of ``self`` inside ``other`` (same frame).

        Positive means strict containment; the violating axis sets the
        value when negative.
        """
        if self.frame != other.frame:
            raise ConfigError("containment margin requires a shared frame")
        slack = math.inf
        for lo_a, hi_a, lo_b, hi_b in zip(self.lower, self.upper, other.lower, other.upper):
            slack = min(slack, lo_a - lo_b, hi_b - hi_a)
        return slack


def _gram_schmidt_frame(axis: np.ndarray) -> np.ndarray:
    d = axis.size
    vecs = [axis / np.linalg.norm(axis)]
    for k in range(d):
        cand = np.zeros(d)
        cand[k] = 1.0
        for v in vecs:
            cand = cand - (cand @ v) * v
        norm = float(np.linalg.norm(cand))
        if norm > 1e-10:
            vecs.append(cand / norm)
        if len(vecs) == d:
            break
    return np.asarray(vecs[:d])


@dataclass(frozen=True)
class InnerCuboid:
    """Largest aligned cuboid inside the admissible cone and the target."""

    cuboid: Hypercuboid
    r_eps: float
    epsilon: float
    axis_lower: float
    axis_upper: float
    cross_half_width: float


def _axis_extent(body: ConvexBody, frame: np.ndarray, w: float, seed_t: float, tol: float) -> tuple[float, float] | None:
    """Interval of ``t`` with every cross vertex of half-width ``w`` inside the body."""
    d = frame.shape[0]
    e1 = frame[0]
    if d == 1:
        offsets = np.zeros((1, 1))
    else:
        signs = np.asarray(list(iter_product((-1.0, 1.0), repeat=d - 1)))
        offsets = signs @ (w * frame[1:])

    def worst(t: float) -> float:
        pts = t * e1 + offsets
        return float(np.max(body.h_value(pts)))

    t_hi = body.bounding_radius() + 1.0
    if worst(seed_t) > 0.0:
        # Quasi-convex in t; golden search recovers a feasible t if any.
        from .geometry import _golden_min

        seed_t, val = _golden_min(worst, 0.0, t_hi, tol)
        if val > 0.0:
            return None
    from .geometry import _bisect_root

    lo = _bisect_root(worst, 0.0, seed_t, tol)
    hi = t_hi - _bisect_root(lambda s: worst(t_hi - s), 0.0, t_hi - seed_t, tol)
    return lo, hi


def build_inner_cuboid(
    body: ConvexBody,
    epsilon: float,
    tol: float = 1e-9,
    phi_star=None,
) -> InnerCuboid:
    """Largest hypercuboid aligned with the optimal ray inside the cone cap.

    The cap collects unit directions within chord distance ``epsilon`` of
    the optimal ray; the cuboid's inner corners must stay inside it, which
    couples the cross half-width ``w`` to the axis entry point ``l1``
    through ``w * sqrt(d-1) <= tan(theta) * l1``.  The construction binds
    that constraint (or the body itself, whichever caps ``w`` first) and
    then takes the maximal axis extent, so the axis ratio rises to the
    radial optimum as ``epsilon`` shrinks.

    ``phi_star`` overrides the computed optimal direction; bodies whose
    radial program has a flat optimum (boxes) need the intended axis.
    """
    if not (0.0 < epsilon < 2.0):
        raise ConfigError("epsilon must lie in (0, 2)")
    if phi_star is None:
        _, witness = r_star(body, tol=min(tol, 1e-9))
        phi = np.asarray(witness, dtype=float)
    else:
        phi = np.asarray(phi_star, dtype=float)
    norm = float(np.linalg.norm(phi))
    if norm == 0.0:
        raise ConfigError("optimal direction must be nonzero")
    phi = phi / norm
    d = body.dim
    theta = math.acos(max(-1.0, 1.0 - epsilon * epsilon / 2.0))
    tau = math.tan(theta)

    # The whole cap must consist of admissible directions.
    if d == 1:
        boundary = []
    elif d == 2:
        rot = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
        boundary = [rot @ phi, rot.T @ phi]
    else:
        frame_tmp = _gram_schmidt_frame(phi)
        boundary = [
            math.cos(theta) * phi
            + math.sin(theta) * (math.cos(a) * frame_tmp[1] + math.sin(a) * frame_tmp[2])
            for a in np.linspace(0.0, 2.0 * math.pi, 16, endpoint=False)
        ]
    for direction in boundary:
        if not radial_bounds(body, direction).present:
            raise HypothesisError(
                "cone cap leaves the admissible directions; shrink epsilon"
            )

    frame = _gram_schmidt_frame(phi)
    base = radial_bounds(body, phi, tol=tol)
    if not base.present:
        raise HypothesisError("optimal direction misses the body")
    seed_t = 0.5 * (base.lower + base.upper)

    if d == 1:
        lo, hi = base.lower, base.upper
        cuboid = Hypercuboid(frame=((1.0,),), lower=(lo,), upper=(hi,))
        return InnerCuboid(
            cuboid=cuboid,
            r_eps=hi / lo,
            epsilon=epsilon,
            axis_lower=lo,
            axis_upper=hi,
            cross_half_width=0.0,
        )

    sqrt_cross = math.sqrt(d - 1.0)

    def cone_slack(w: float) -> float | None:
        extent = _axis_extent(body, frame, w, seed_t, tol)
        if extent is None:
            return None
        return tau * extent[0] / sqrt_cross - w

    w_lo, w_hi = 0.0, body.bounding_radius()
    # Feasible sweep: shrink w_hi until the extent exists, then bisect on
    # the cone slack, which decreases in w.
    while w_hi - w_lo > tol:
        mid = 0.5 * (w_lo + w_hi)
        slack = cone_slack(mid)
        if slack is None or slack < 0.0:
            w_hi = mid
        else:
            w_lo = mid
    w = w_lo
    extent = _axis_extent(body, frame, w, seed_t, tol)
    if extent is None:
        raise EstimationError("inner cuboid search collapsed; tolerance too coarse")
    lo, hi = extent
    lower = (lo,) + (-w,) * (d - 1)
    upper = (hi,) + (w,) * (d - 1)
    cuboid = Hypercuboid(
        frame=tuple(tuple(float(v) for v in row) for row in frame),
        lower=tuple(float(v) for v in lower),
        upper=tuple(float(v) for v in upper),
    )
    verts = cuboid.vertices()
    worst = float(np.max(body.h_value(verts)))
    if worst > 1e2 * tol:
        raise EstimationError("inner cuboid vertex escaped the body; tolerance too coarse")
    return InnerCuboid(
        cuboid=cuboid,
        r_eps=hi / lo,
        epsilon=epsilon,
        axis_lower=lo,
        axis_upper=hi,
        cross_half_width=w,
    )


# ---------------------------------------------------------------------------
# level parameters and the box family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SegmentParams:
    """Constants steering the level construction.

    ``g = (1 - rho/2) (1 - rho) r_eps`` splits each level into a
    fluctuation-only part and a jump part; validity needs
    ``(1 - rho)^2 r_eps > 1`` (so levels grow), ``g`` strictly between 1
    and ``(1 - rho) r_eps``, and a fluctuation window exponent
    ``1/alpha0 + delta`` below 1 (so the window is lower order than the
    level itself).
    """

    epsilon: float
    rho: float
    delta: float
    alpha0: float
    c1: int
    r_eps: float
    g: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 < self.rho < 1.0):
            raise ConfigError("rho must lie in (0, 1)")
        if (1.0 - self.rho) ** 2 * self.r_eps <= 1.0:
            raise ConfigError("(1 - rho)^2 * r_eps must exceed 1; shrink rho")
        if not (isinstance(self.c1, int) and self.c1 >= 1):
            raise ConfigError("c1 must be a positive integer")
        if not (0.0 < self.delta < 1.0):
            raise ConfigError("delta must lie in (0, 1)")
        if self.alpha0 <= 1.0:
            raise ConfigError("alpha0 must exceed 1")
        if 1.0 / self.alpha0 + self.delta >= 1.0:
            raise ConfigError("1/alpha0 + delta must stay below 1")
        if self.g == 0.0:
            object.__setattr__(
                self, "g", (1.0 - self.rho / 2.0) * (1.0 - self.rho) * self.r_eps
            )
        if not (1.0 < self.g < (1.0 - self.rho) * self.r_eps):
            raise ConfigError("g must lie strictly between 1 and (1 - rho) * r_eps")

    @property
    def growth(self) -> float:
        return (1.0 - self.rho) * self.r_eps

    def m_level(self, i: int) -> int:
        """Level time ``floor(c1 * ((1 - rho) r_eps)^(i-1))``, exact."""
        if i < 1:
            raise ConfigError("level index starts at 1")
        q = Fraction(1.0 - self.rho) * Fraction(self.r_eps)
        return int(math.floor(Fraction(self.c1) * q ** (i - 1)))

    def window(self, i: int) -> int:
        """Fluctuation window ``floor(m_i ** (1/alpha0 + delta))``."""
        return int(math.floor(self.m_level(i) ** (1.0 / self.alpha0 + self.delta)))

    def window_width(self, i: int) -> float:
        return self.m_level(i) ** (1.0 / self.alpha0 + self.delta)


def segment_params_for(
    inner: InnerCuboid,
    alpha: float,
    rho: float,
    delta: float,
    c1: int = 1,
) -> SegmentParams:
    """Standard parameter bundle for a built inner cuboid."""
    return SegmentParams(
        epsilon=inner.epsilon,
        rho=rho,
        delta=delta,
        alpha0=min(alpha, 2.0),
        c1=c1,
        r_eps=inner.r_eps,
    )


@dataclass(frozen=True)
class SegmentSets:
    """The six boxes steering the walk across one level.

    ``anchor`` is where the walk must land at time ``m_i``;
    ``hold_corridor`` confines it during the fluctuation-only part,
    ``jump_corridor`` during the jump part; ``relative_corridor`` and
    ``relative_anchor`` restate the jump part relative to the walk's
    position when it opens; ``jump_window`` is the box the single big
    step must hit, and ``scaled_jump_window`` its scale-free version
    (``m_i * scaled_jump_window`` must sit inside ``jump_window``).
    """

    i: int
    m_i: int
    m_next: int
    width: float
    anchor: Hypercuboid
    hold_corridor: Hypercuboid
    jump_corridor: Hypercuboid
    relative_corridor: Hypercuboid
    jump_window: Hypercuboid
    relative_anchor: Hypercuboid
    scaled_jump_window: Hypercuboid

    @property
    def inverted(self) -> tuple[str, ...]:
        out = []
        for name in (
            "anchor",
            "hold_corridor",
            "jump_corridor",
            "relative_corridor",
            "jump_window",
            "relative_anchor",
            "scaled_jump_window",
        ):
            if not getattr(self, name).is_proper:
                out.append(name)
        return tuple(out)

    @property
    def is_proper(self) -> bool:
        return not self.inverted


def build_segment_sets(i: int, params: SegmentParams, inner: InnerCuboid) -> SegmentSets:
    """Materialize the level-``i`` box family in the cuboid's frame.

    Every endpoint is affine in the level times and the fluctuation
    window ``w = m_i ** (1/alpha0 + delta)``; at small ``i`` the window
    term dominates and inverts some intervals, which is reported via
    ``inverted`` rather than raised.
    """
    if i < 2:
        raise ConfigError("the box family needs i >= 2 (it references level i-1)")
    cub = inner.cuboid
    d = cub.dim
    l1, u1 = cub.lower[0], cub.upper[0]
    rho, r_eps, g = params.rho, params.r_eps, params.g
    q = params.growth

    m_i = params.m_level(i)
    m_next = params.m_level(i + 1)
    w = params.window_width(i)
    w_next = params.window_width(i + 1)
    g_i = math.floor(g * m_i)
    g_prev = math.floor(g * params.m_level(i - 1))
    d_cross = g_i - g_prev
    m_gap = m_next - m_i

    def cuboid_from(axis1: tuple[float, float], cross) -> Hypercuboid:
        lower = [axis1[0]]
        upper = [axis1[1]]
        for j in range(1, d):
            lo_j, hi_j = cross(cub.lower[j], cub.upper[j])
            lower.append(lo_j)
            upper.append(hi_j)
        return Hypercuboid(frame=cub.frame, lower=tuple(lower), upper=tuple(upper))

    anchor = cuboid_from(
        (l1 * q * m_i + 10.0 * w, (1.0 - rho / 2.0) * u1 * m_i),
        lambda lo, hi: ((2.0 / 3.0) * lo * g_prev, (2.0 / 3.0) * hi * g_prev),
    )
    hold_corridor = cuboid_from(
        (l1 * q * m_i + 9.0 * w, (1.0 - rho / 2.0) * u1 * m_i + w),
        lambda lo, hi: ((2.0 / 3.0) * lo * g_prev - w, (2.0 / 3.0) * hi * g_prev + w),
    )
    jump_corridor = cuboid_from(
        (l1 * q * m_i + 8.0 * w, (1.0 - rho / 2.0) * u1 * m_next - w),
        lambda lo, hi: ((2.0 / 3.0) * lo * g_prev - 2.0 * w, (2.0 / 3.0) * hi * g_i - w),
    )
    relative_corridor = cuboid_from(
        (-w, (1.0 - rho / 2.0) * u1 * m_gap - 2.0 * w),
        lambda lo, hi: (-w, (2.0 / 3.0) * hi * d_cross - 2.0 * w),
    )
    jump_window = cuboid_from(
        (l1 * q * m_gap + 10.0 * w_next - 8.0 * w, (1.0 - rho / 2.0) * u1 * m_gap - 3.0 * w),
        lambda lo, hi: ((2.0 / 3.0) * lo * d_cross - 2.0 * w, (2.0 / 3.0) * hi * d_cross - 3.0 * w),
    )
    # The lower slack carries the next level's window: hold corridor plus
    # relative anchor must compose to exactly the level-(i+1) anchor, whose
    # axis-1 lower slack is 10 * w_next.
    relative_anchor = cuboid_from(
        (l1 * q * m_gap + 10.0 * w_next - 9.0 * w, (1.0 - rho / 2.0) * u1 * m_gap - w),
        lambda lo, hi: ((2.0 / 3.0) * lo * d_cross + w, (2.0 / 3.0) * hi * d_cross - w),
    )
    # Scale-free jump target: per unit of m_i, the jump window converges to
    # axis-1 extent [l1 q (q-1), (1 - rho/2) u1 (q-1)] with cross extents
    # (2/3) * (lo, hi) * g (1 - 1/q).  The endpoints below sit strictly
    # inside that limit, which is what makes m_i * scaled_jump_window a
    # subset of jump_window for large i (the sandwich needs
    # 1 - rho < 1 - 5 rho/6 < 1 - 2 rho/3 < 1 - rho/2 on axis 1 and a
    # cross coefficient strictly below 2/3).
    cross_shrink = g * (1.0 - 1.0 / q)
    scaled_jump_window = cuboid_from(
        (
            l1 * (1.0 - 5.0 * rho / 6.0) * r_eps * (q - 1.0),
            u1 * (1.0 - 2.0 * rho / 3.0) * (q - 1.0),
        ),
        lambda lo, hi: (0.5 * lo * cross_shrink, 0.5 * hi * cross_shrink),
    )
    return SegmentSets(
        i=i,
        m_i=m_i,
        m_next=m_next,
        width=w,
        anchor=anchor,
        hold_corridor=hold_corridor,
        jump_corridor=jump_corridor,
        relative_corridor=relative_corridor,
        jump_window=jump_window,
        relative_anchor=relative_anchor,
        scaled_jump_window=scaled_jump_window,
    )


def first_valid_index(params: SegmentParams, inner: InnerCuboid, i_max: int = 400) -> int:
    """Smallest level whose whole box family is proper from there on.

    Scans ``i`` upward and confirms properness persists to ``i_max``;
    a later inversion restarts the scan (and is worth reporting, since
    validity is expected to be monotone).
    """
    candidate = None
    for i in range(2, i_max + 1):
        if build_segment_sets(i, params, inner).is_proper:
            if candidate is None:
                candidate = i
        else:
            candidate = None
    if candidate is None:
        raise EstimationError(f"no valid level index found up to {i_max}")
    return candidate


# ---------------------------------------------------------------------------
# uniform report row
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckReport:
    """One row of the bench CSV: what was checked and how it came out."""

    name: str
    parameters: str
    statistic: float
    threshold: float
    passed: bool
    margin: float
    detail_columns: tuple[str, ...] = ()
    detail_rows: tuple[tuple, ...] = ()


def _params_str(**kv) -> str:
    return json.dumps(kv, sort_keys=True, default=str)


# ---------------------------------------------------------------------------
# inclusion checks between consecutive levels
# ---------------------------------------------------------------------------


def scaling_intersection(cuboid: Hypercuboid, j_lo: int, j_hi: int) -> Hypercuboid:
    """Exact ``intersection of j * cuboid over j in [j_lo, j_hi]``.

    Each axis endpoint scales linearly in ``j``, so the intersection over
    the integer range equals the intersection of the two extreme scalings;
    per axis that is the larger of the two lower endpoints paired with the
    smaller of the two uppers.
    """
    if not (0 < j_lo <= j_hi):
        raise ConfigError("scaling range must satisfy 0 < j_lo <= j_hi")
    lower = []
    upper = []
    for lo, hi in zip(cuboid.lower, cuboid.upper):
        lower.append(max(j_lo * lo, j_hi * lo))
        upper.append(min(j_lo * hi, j_hi * hi))
    return Hypercuboid(frame=cuboid.frame, lower=tuple(lower), upper=tuple(upper))


def validate_scaling_reduction(
    cuboid: Hypercuboid,
    j_lo: int,
    j_hi: int,
    seed: int = 0,
    samples: int = 64,
) -> bool:
    """Spot-check the two-extremes identity against random interior scalings."""
    reduced = scaling_intersection(cuboid, j_lo, j_hi)
    rng = derive_rng(seed, "scaling-reduction")
    js = rng.integers(j_lo, j_hi + 1, size=samples)
    for j in js:
        scaled = cuboid.scale(int(j))
        for lo_r, hi_r, lo_s, hi_s in zip(reduced.lower, reduced.upper, scaled.lower, scaled.upper):
            if lo_r < lo_s - 1e-9 or hi_r > hi_s + 1e-9:
                return False
    return True


@dataclass(frozen=True)
class InclusionReport:
    """Per-level outcome of the corridor-in-scaled-cuboid inclusions.

    ``threshold`` is the first passing level, or None when the whole
    scanned range sits below the constructive threshold; that case is a
    finding (all rows flagged), not an error.
    """

    threshold: int | None
    monotone: bool
    rows: tuple[tuple[int, int, bool, float, bool, float, bool, float], ...]

    @property
    def all_pass_from_threshold(self) -> bool:
        if self.threshold is None:
            return False
        return all(r[2] and r[4] and r[6] for r in self.rows if r[0] >= self.threshold)

    def as_report(self) -> CheckReport:
        lo = self.threshold if self.threshold is not None else -1
        margins = [min(r[3], r[5], r[7]) for r in self.rows if r[0] >= lo]
        worst = min(margins) if margins else -math.inf
        return CheckReport(
            name="level_inclusions",
            parameters=_params_str(threshold=self.threshold, levels=len(self.rows)),
            statistic=worst,
            threshold=0.0,
            passed=self.all_pass_from_threshold and self.monotone,
            margin=worst,
            detail_columns=(
                "i",
                "m_i",
                "hold_ok",
                "hold_margin",
                "jump_ok",
                "jump_margin",
                "anchor_ok",
                "anchor_margin",
            ),
            detail_rows=self.rows,
        )


def check_lemma_inclusions(
    i_range,
    params: SegmentParams,
    inner: InnerCuboid,
) -> InclusionReport:
    """Interval-arithmetic audit of the between-level inclusions.

    For each level ``i``: the hold corridor must sit inside every scaling
    ``j * inner`` for ``j`` in the fluctuation part, the jump corridor
    inside every scaling in the jump part, and the anchor inside
    ``m_i * inner``.  Margins are normalized by ``m_i``, so hold and
    anchor margins approach constants while jump margins decay like
    ``m_i ** (1/alpha0 + delta - 1)`` (their binding faces carry window
    slack only).  An improper set fails its level outright.
    """
    cub = inner.cuboid
    rows = []
    seen_pass = False
    monotone = True
    for i in sorted(set(int(v) for v in i_range)):
        sets = build_segment_sets(i, params, inner)
        m_i, m_next = sets.m_i, sets.m_next
        g_i = math.floor(params.g * m_i)

        # Below the threshold the integer hold/jump ranges can be emptied
        # by flooring; an empty range means that level has no corridor at
        # all, which is a failing row, not an error.
        def _range_margin(corridor, j_lo, j_hi):
            if j_lo > j_hi:
                return -math.inf
            return corridor.containment_margin(scaling_intersection(cub, j_lo, j_hi)) / m_i

        hold_margin = _range_margin(sets.hold_corridor, m_i + 1, g_i)
        jump_margin = _range_margin(sets.jump_corridor, g_i + 1, m_next - 1)
        anchor_margin = sets.anchor.containment_margin(cub.scale(m_i)) / m_i
        hold_ok = sets.is_proper and hold_margin >= 0.0
        jump_ok = sets.is_proper and jump_margin >= 0.0
        anchor_ok = sets.is_proper and anchor_margin >= 0.0
        ok = hold_ok and jump_ok and anchor_ok
        if ok:
            seen_pass = True
        elif seen_pass:
            monotone = False
        rows.append(
            (
                i,
                m_i,
                hold_ok,
                float(hold_margin),
                jump_ok,
                float(jump_margin),
                anchor_ok,
                float(anchor_margin),
            )
        )
    threshold = next((r[0] for r in rows if r[2] and r[4] and r[6]), None)
    return InclusionReport(threshold=threshold, monotone=monotone, rows=tuple(rows))


def box_sum(a: Hypercuboid, b: Hypercuboid) -> Hypercuboid:
    """Minkowski sum of two cuboids sharing a frame."""
    if a.frame != b.frame:
        raise ConfigError("box sum requires a shared frame")
    return Hypercuboid(
        frame=a.frame,
        lower=tuple(x + y for x, y in zip(a.lower, b.lower)),
        upper=tuple(x + y for x, y in zip(a.upper, b.upper)),
    )


def box_intersection(a: Hypercuboid, b: Hypercuboid) -> Hypercuboid:
    """Axis-wise intersection of two cuboids sharing a frame."""
    if a.frame != b.frame:
        raise ConfigError("box intersection requires a shared frame")
    return Hypercuboid(
        frame=a.frame,
        lower=tuple(max(x, y) for x, y in zip(a.lower, b.lower)),
        upper=tuple(min(x, y) for x, y in zip(a.upper, b.upper)),
    )


def segment_composition(i: int, params: SegmentParams, inner: InnerCuboid) -> dict:
    """Margins of the slack-telescoping identities across one level.

    The family is engineered so that corridor plus relative displacement
    reconstructs the next constraint exactly: hold corridor + relative
    corridor fills the jump corridor; hold corridor + (relative corridor
    intersect relative anchor) lands inside both the jump corridor and the
    next anchor; the scaled jump window times ``m_i`` sits inside the jump
    window.  Margins are normalized by ``m_i`` (the first two identities
    are exact up to rounding, the third gains room linearly in ``m_i``).
    """
    sets = build_segment_sets(i, params, inner)
    next_sets = build_segment_sets(i + 1, params, inner)
    m_i = sets.m_i
    corridor_sum = box_sum(sets.hold_corridor, sets.relative_corridor)
    landing_rel = box_intersection(sets.relative_corridor, sets.relative_anchor)
    landing_sum = box_sum(sets.hold_corridor, landing_rel)
    return {
        "corridor": corridor_sum.containment_margin(sets.jump_corridor) / m_i,
        "landing_anchor": landing_sum.containment_margin(next_sets.anchor) / m_i,
        "landing_corridor": landing_sum.containment_margin(sets.jump_corridor) / m_i,
        "scaled_window": sets.scaled_jump_window.scale(m_i).containment_margin(
            sets.jump_window
        )
        / m_i,
    }


# ---------------------------------------------------------------------------
# the gap between consecutive scaled targets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DistanceReport:
    """Scaled gaps between consecutive levels of a jump ladder.

    ``positive_from`` is the first level index beyond which every tested
    gap is strictly positive (None when the tail keeps touching zero, as
    happens when the growth ratio sits at or below the radial optimum);
    ``empirical_constant`` is the infimum from there on.
    """

    ratios: tuple[tuple[int, int, float], ...]
    positive_from: int | None
    empirical_constant: float
    tail_spread: float

    def as_report(self) -> CheckReport:
        return CheckReport(
            name="consecutive_gap",
            parameters=_params_str(levels=len(self.ratios), positive_from=self.positive_from),
            statistic=self.empirical_constant,
            threshold=0.0,
            passed=self.positive_from is not None and self.empirical_constant > 0.0,
            margin=self.empirical_constant,
            detail_columns=("i", "u_i", "gap_over_u"),
            detail_rows=self.ratios,
        )


def check_distance_claim(
    body: ConvexBody,
    eta: float,
    c1: int,
    i_range,
    r_ref: float | None = None,
    tol: float = 1e-9,
) -> DistanceReport:
    """Gap between consecutive scaled targets, normalized by the level.

    ``dist(u_i A, u_{i+1} A) / u_i`` equals ``dist(A, q_i A)`` with
    ``q_i = u_{i+1} / u_i`` by homogeneity, so each row is one scale-free
    distance computation.  The infimum over the tested range estimates the
    jump-forcing constant; positivity is the claim.  The tail spread over
    the last ten levels measures convergence of the ratios.
    """
    indices = sorted(set(int(v) for v in i_range))
    if indices[0] < 1:
        raise ConfigError("level indices start at 1")
    if r_ref is None:
        r_ref, _ = r_star(body)
    growth = (1.0 + eta) * r_ref
    horizon = int(math.ceil(c1 * growth ** (indices[-1] + 1))) + 1
    schedule = make_schedule("u", r_ref=r_ref, n=horizon, c1=c1, eta=eta)
    levels = schedule.levels
    if len(levels) <= indices[-1]:
        raise EstimationError("schedule too short for the requested range")
    rows = []
    positive_from = None
    for i in indices:
        u_i, u_next = levels[i - 1], levels[i]
        q = u_next / u_i
        val = float(scaled_gap_ratio(body, q, tol=tol))
        # Early levels can quantize to a growth ratio at the radial
        # optimum, where the gap is legitimately zero; the claim is about
        # the tail of the ladder.
        if val <= 0.0:
            positive_from = None
        elif positive_from is None:
            positive_from = i
        rows.append((i, u_i, val))
    values = [r[2] for r in rows]
    tail = values[-10:]
    spread = (max(tail) - min(tail)) / max(abs(tail[-1]), 1e-30) if len(tail) >= 2 else 0.0
    constant = (
        min(v for (i, _, v) in rows if i >= positive_from) if positive_from is not None else 0.0
    )
    return DistanceReport(
        ratios=tuple(rows),
        positive_from=positive_from,
        empirical_constant=constant,
        tail_spread=float(spread),
    )


# ---------------------------------------------------------------------------
# fluctuation of the walk between jumps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FluctuationReport:
    """Empirical probability that all frame projections stay in the window."""

    probability: float
    std_error: float
    steps: int
    bound: float
    delta: float

    @property
    def passes(self) -> bool:
        return self.probability > 1.0 - self.delta - 3.0 * self.std_error

    def as_report(self) -> CheckReport:
        return CheckReport(
            name="fluctuation_window",
            parameters=_params_str(steps=self.steps, bound=round(self.bound, 3)),
            statistic=self.probability,
            threshold=1.0 - self.delta,
            passed=self.passes,
            margin=self.probability - (1.0 - self.delta - 3.0 * self.std_error),
        )


def check_fluctuation(
    model: RVModel,
    params: SegmentParams,
    i: int,
    reps: int,
    seed: int,
    frame=None,
    window_exponent: float | None = None,
) -> FluctuationReport:
    """Monte Carlo estimate of the stay-in-window probability.

    Over the fluctuation part of level ``i`` (``floor(g m_i) - m_i``
    steps), every frame projection of the fresh walk must stay within
    ``m_i ** (1/alpha0 + delta)`` in absolute value.  Passing
    ``window_exponent`` overrides the exponent (the tightness check sets
    it to ``1/alpha0``).
    """
    if reps < 100:
        raise ConfigError("need at least 100 replications")
    m_i = params.m_level(i)
    steps = math.floor(params.g * m_i) - m_i
    if steps < 1:
        raise ConfigError("window has no steps; raise i")
    exponent = 1.0 / params.alpha0 + params.delta if window_exponent is None else window_exponent
    bound = m_i**exponent
    fr = np.eye(model.dimension) if frame is None else np.asarray(frame, dtype=float)
    rng = derive_rng(seed, "fluctuation", i)
    hits = 0
    block = max(1, min(reps, int(2e6 // max(steps, 1)) or 1))
    done = 0
    while done < reps:
        b = min(block, reps - done)
        steps_arr = sample(model, rng, b * steps).reshape(b, steps, model.dimension)
        walk = np.cumsum(steps_arr, axis=1)
        proj = np.abs(walk @ fr.T)
        hits += int(np.sum(np.all(proj.max(axis=1) <= bound, axis=1)))
        done += b
    p = hits / reps
    se = math.sqrt(max(p * (1.0 - p), 1e-12) / reps)
    return FluctuationReport(
        probability=p, std_error=se, steps=steps, bound=float(bound), delta=params.delta
    )


# ---------------------------------------------------------------------------
# truncated-moment maximal inequality
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KolmogorovReport:
    """Empirical maximal probability against the truncated-moment shape."""

    lhs: float
    lhs_se: float
    shape: float
    implied_constant: float
    shape_slope: float
    slope_target: float

    def as_report(self) -> CheckReport:
        return CheckReport(
            name="maximal_inequality",
            parameters=_params_str(slope_target=self.slope_target),
            statistic=self.implied_constant,
            threshold=10.0,
            passed=self.implied_constant <= 10.0
            and abs(self.shape_slope - self.slope_target) <= 0.1,
            margin=0.1 - abs(self.shape_slope - self.slope_target),
        )


def kolmogorov_shape(model: RVModel, m: int, x: float) -> float:
    """Bound shape ``m x^-2 E[Y^2 1(|Y| < x)]`` from the analytic moment."""
    return m * x**-2.0 * truncated_second_moment(model, x)


def check_kolmogorov(
    model: RVModel,
    m: int,
    x: float,
    reps: int,
    seed: int,
    slope_grid=(1e4, 1e5, 1e6, 1e7, 1e8),
    slope_of: str = "shape",
) -> KolmogorovReport:
    """One-sided maximal probability of the walk against the moment bound.

    The empirical ``P(max partial sum >= x)`` over ``m`` steps is compared
    with ``m x^-2 E[Y^2 1(|Y| < x)]``; the implied constant is their
    ratio.  The regular-variation check fits the log-log slope of the
    bound shape (index ``-alpha``) or, with ``slope_of='moment'``, of the
    truncated moment itself (index ``2 - alpha``, slowly varying at the
    boundary where that difference vanishes).
    """
    if model.dimension != 1:
        raise ConfigError("the maximal inequality audit is one-dimensional")
    rng = derive_rng(seed, "maximal", m)
    hits = 0
    block = max(1, int(2e6 // m))
    done = 0
    while done < reps:
        b = min(block, reps - done)
        steps_arr = sample(model, rng, b * m).reshape(b, m)
        running = np.cumsum(steps_arr, axis=1)
        hits += int(np.sum(running.max(axis=1) >= x))
        done += b
    p = hits / reps
    se = math.sqrt(max(p * (1.0 - p), 1e-12) / reps)
    shape = kolmogorov_shape(model, m, x)

    grid = np.asarray(slope_grid, dtype=float)
    if slope_of == "shape":
        vals = np.array([kolmogorov_shape(model, m, g) for g in grid])
        target = -model.alpha
    elif slope_of == "moment":
        vals = np.array([truncated_second_moment(model, g) for g in grid])
        target = 2.0 - model.alpha
    else:
        raise ConfigError("slope_of must be 'shape' or 'moment'")
    design = np.column_stack([np.log(grid), np.ones_like(grid)])
    coef, _, _, _ = np.linalg.lstsq(design, np.log(vals), rcond=None)
    return KolmogorovReport(
        lhs=p,
        lhs_se=se,
        shape=float(shape),
        implied_constant=float(p / shape) if shape > 0 else math.inf,
        shape_slope=float(coef[0]),
        slope_target=float(target),
    )


# ---------------------------------------------------------------------------
# directed projections stay heavy-tailed
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DirectedReport:
    """Tail audit of one directional projection of the step law."""

    direction: tuple[float, ...]
    hill_alpha: float
    hill_k: int
    alpha: float
    tail_constant: float
    tail_constant_se: float
    analytic_constant: float
    flatness: float

    def as_report(self) -> CheckReport:
        err = abs(self.hill_alpha - self.alpha)
        return CheckReport(
            name="directed_tail",
            parameters=_params_str(direction=[round(v, 4) for v in self.direction]),
            statistic=self.hill_alpha,
            threshold=self.alpha,
            passed=err <= 0.15 and self.tail_constant > 0.0,
            margin=0.15 - err,
        )


def check_directed_rv(
    model: RVModel,
    u,
    reps: int,
    seed: int,
    hill_k: int | None = None,
) -> DirectedReport:
    """Tail index and tail constant of ``<u, X>`` along one direction.

    The positive part of the projection should inherit the radial tail
    index (Hill estimate) and a strictly positive tail constant; the
    constant is normalized so its analytic value is the angular moment
    ``E[(<u, Theta>)_+^alpha]``.  Flatness measures stability of the
    normalized tail ratio across the three probe levels.
    """
    uv = np.asarray(u, dtype=float)
    uv = uv / np.linalg.norm(uv)
    rng = derive_rng(seed, "directed")
    draws = sample(model, rng, reps)
    proj = draws @ uv if model.dimension > 1 else draws.ravel()
    pos = proj[proj > 0]
    if pos.size < 100:
        raise EstimationError("too few positive projections for a tail estimate")
    k = hill_k if hill_k is not None else max(200, int(math.sqrt(pos.size)))
    hill = hill_tail_index(pos, k=min(k, pos.size - 1))

    # Probe the tail at three empirical quantile levels where counts stay
    # in the hundreds; normalize by the analytic radial tail.
    constants = []
    for frac in (1e-3, 3e-4, 1e-4):
        cnt = max(int(reps * frac), 50)
        t = float(np.partition(pos, -cnt)[-cnt])
        p_hat = float(np.mean(proj > t))
        denom = radial_survival(model, t)
        constants.append(p_hat / denom)
    const = constants[-1]
    cnt_last = max(int(reps * 1e-4), 50)
    const_se = const / math.sqrt(cnt_last)
    flat = (max(constants) - min(constants)) / max(const, 1e-300)
    return DirectedReport(
        direction=tuple(float(v) for v in uv),
        hill_alpha=hill.alpha,
        hill_k=hill.k,
        alpha=model.alpha,
        tail_constant=const,
        tail_constant_se=const_se,
        analytic_constant=directed_tail_constant(model, uv),
        flatness=float(flat),
    )


# ---------------------------------------------------------------------------
# one-step large-deviation ratio
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HlmsRatioReport:
    """Normalized probability of a far set for the scaled one-step sum."""

    rows: tuple[tuple[int, float, float, float], ...]
    expected: float
    scaled_rows: tuple[tuple[int, float, float, float], ...]
    scaled_expected: float

    @property
    def stable(self) -> bool:
        for (n1, _, r1, s1), (n2, _, r2, s2) in zip(self.rows, self.rows[1:]):
            if abs(r1 - r2) > 3.0 * math.hypot(s1, s2):
                return False
        return True

    def as_report(self) -> CheckReport:
        last = self.rows[-1]
        err = abs(last[2] - self.expected)
        return CheckReport(
            name="one_step_ratio",
            parameters=_params_str(n_max=last[0]),
            statistic=last[2],
            threshold=self.expected,
            passed=self.stable and err <= 3.0 * last[3],
            margin=3.0 * last[3] - err,
            detail_columns=("n", "p_hat", "ratio", "ratio_se"),
            detail_rows=self.rows + self.scaled_rows,
        )


def check_hlms_ratio(
    model: RVModel,
    n_grid,
    reps: int,
    seed: int,
    threshold: float = 1.0,
    scale: float = 2.0,
) -> HlmsRatioReport:
    """Ratio ``P(|S_n / n| > t) / (n P(|X| > n))`` across a horizon grid.

    For the pure-tail radial model the limit is the tail measure of the
    far set: ``t^-alpha`` for the norm-ball complement at level ``t``,
    and scaling the set by ``s`` multiplies the limit by ``s^-alpha``.
    """
    grid = sorted(int(n) for n in n_grid)
    if grid[0] < 1:
        raise ConfigError("horizons must be positive")
    rows = []
    scaled_rows = []
    for which, t in (("base", threshold), ("scaled", scale * threshold)):
        for n in grid:
            rng = derive_rng(seed, "one-step", which, n)
            hits = 0
            block = max(1, int(4e6 // n))
            done = 0
            while done < reps:
                b = min(block, reps - done)
                steps_arr = sample(model, rng, b * n).reshape(b, n, model.dimension)
                sums = steps_arr.sum(axis=1)
                norms = np.linalg.norm(sums, axis=1) if model.dimension > 1 else np.abs(sums).ravel()
                hits += int(np.sum(norms > t * n))
                done += b
            p = hits / reps
            se = math.sqrt(max(p * (1.0 - p), 1e-12) / reps)
            denom = n * radial_survival(model, n)
            row = (n, p, p / denom, se / denom)
            (rows if which == "base" else scaled_rows).append(row)
    return HlmsRatioReport(
        rows=tuple(rows),
        expected=threshold**-model.alpha,
        scaled_rows=tuple(scaled_rows),
        scaled_expected=(scale * threshold) ** -model.alpha,
    )


# ---------------------------------------------------------------------------
# shadow bound audit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectionAudit:
    """Pathwise and formula-level audit of the one-dimensional shadow bound."""

    direction: tuple[float, ...]
    full_survivors: int
    shadow_survivors: int
    reps: int
    r_star: float
    exponent: float
    shadow_ratio: float
    shadow_exponent: float
    survivor_curve: tuple[tuple[int, int, int], ...] = ()

    @property
    def pathwise_ok(self) -> bool:
        """Dominance must hold at every recorded horizon, not just the last."""
        if self.full_survivors > self.shadow_survivors:
            return False
        return all(full <= shadow for (_, full, shadow) in self.survivor_curve)

    @property
    def exponent_gap(self) -> float:
        """Nonnegative when the bound is valid; zero exactly when sharp."""
        return self.exponent - self.shadow_exponent

    def as_report(self) -> CheckReport:
        return CheckReport(
            name="shadow_bound",
            parameters=_params_str(direction=[round(v, 4) for v in self.direction]),
            statistic=self.exponent_gap,
            threshold=0.0,
            passed=self.pathwise_ok and self.exponent_gap >= -1e-9,
            margin=float(self.shadow_survivors - self.full_survivors),
        )


def projection_bound_audit(
    body: ConvexBody,
    alpha: float,
    model: RVModel,
    n: int,
    reps: int,
    seed: int,
    direction=None,
) -> ProjectionAudit:
    """Check that shadowing the walk can only help it survive.

    The distinguished direction is the unit vector toward the body's
    point nearest the origin; its shadow interval has ratio equal to the
    radial optimum exactly when the one-dimensional bound is sharp for
    the body (norm balls, boxes whose main diagonal lines up with the
    ray from the origin), and a strictly larger ratio otherwise.  The
    Monte Carlo part advances one shared walk population and counts
    survivors of the full constraint and of its shadow; containment of
    the events makes the comparison pathwise, not merely statistical.
    """
    if model.dimension != body.dim:
        raise ConfigError("model and body dimensions differ")
    if direction is None:
        z = body.project(np.zeros(body.dim))
        norm = float(np.linalg.norm(z))
        if norm == 0.0:
            raise ConfigError("body touches the origin; no shadow direction")
        c = z / norm
    else:
        c = np.asarray(direction, dtype=float)
        c = c / np.linalg.norm(c)
    a, b = projection_interval(body, c)
    if a <= 0.0:
        raise HypothesisError("shadow interval must stay positive")

    rng = derive_rng(seed, "shadow")
    pos = np.zeros((reps, body.dim))
    alive_full = np.ones(reps, dtype=bool)
    alive_shadow = np.ones(reps, dtype=bool)
    keep = np.ones(reps, dtype=bool)
    # Survivor counts at log-spaced horizons make the dominance check
    # informative even when nothing survives to the final time.
    marks = sorted({1, 2, 3} | {int(round(n ** (j / 8))) for j in range(1, 9)})
    marks = [k for k in marks if 1 <= k <= n]
    curve = []
    for k in range(1, n + 1):
        m = int(keep.sum())
        if m == 0:
            if k in marks:
                curve.append((k, 0, 0))
            continue
        pos[keep] += np.asarray(sample(model, rng, m), dtype=float).reshape(m, body.dim)
        avg = pos[keep] / k
        inside_full = body.h_value(avg) <= 0.0
        shadow_avg = avg @ c
        inside_shadow = (shadow_avg >= a) & (shadow_avg <= b)
        idx = np.flatnonzero(keep)
        alive_full[idx] &= inside_full
        alive_shadow[idx] &= inside_shadow
        keep = alive_full | alive_shadow
        if k in marks:
            curve.append((k, int(alive_full.sum()), int(alive_shadow.sum())))

    r0, _ = r_star(body)
    return ProjectionAudit(
        direction=tuple(float(v) for v in c),
        full_survivors=int(alive_full.sum()),
        shadow_survivors=int(alive_shadow.sum()),
        reps=reps,
        r_star=float(r0),
        exponent=persistence_exponent(r0, alpha),
        shadow_ratio=float(b / a),
        shadow_exponent=persistence_exponent(b / a, alpha),
        survivor_curve=tuple(curve),
    )
