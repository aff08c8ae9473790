"""Persistence probability estimation for heavy-tailed random walks.

The quantity of interest is

    ``P_n = P( S_k / k  in  A  for all k = 1..n )``

for a centered walk ``S_k`` with steps from :mod:`persistlab.sampler` and a
target body ``A`` from :mod:`persistlab.geometry`.  ``P_n`` decays roughly
like ``exp(-phi * (log n)^2)``, far too fast for direct Monte Carlo beyond
small horizons, so the workhorse is fixed-effort multilevel splitting along
a geometric level schedule: survivors at each level are resampled uniformly
with replacement back to full effort, and the estimate is the product of
the per-level passage fractions.

Both direct Monte Carlo and splitting advance whole populations of walkers
step-synchronously through one shared routine, drawing from streams derived
per block or per macro-replication.  That makes results independent of the
worker count, and makes single-level splitting coincide with direct Monte
Carlo draw for draw.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConfigError, EstimationError
from .geometry import ConvexBody, projection_interval
from .rng import derive_rng
from .sampler import RVModel, sample

__all__ = [
    "WalkState",
    "LevelSchedule",
    "SplittingResult",
    "DirectMCResult",
    "ExponentFit",
    "WindowedResult",
    "simulate_survival",
    "direct_mc",
    "make_schedule",
    "splitting_estimate",
    "exponent_fit",
    "level_passage_slope",
    "windowed_persistence",
]

_DIRECT_BLOCK = 10_000


@dataclass(frozen=True)
class WalkState:
    """Snapshot of one walk: time, position, and whether it is still inside."""

    k: int
    position: np.ndarray
    alive: bool


def simulate_survival(
    model: RVModel,
    body: ConvexBody,
    n: int,
    rng: np.random.Generator,
) -> tuple[bool, int | None, WalkState]:
    """Run a single walk; returns (survived, exit_time, final state).

    The membership constraint ``S_k / k in A`` is checked at every integer
    time from 1 to ``n``; ``exit_time`` is the first failing ``k``.
    """
    if n < 1:
        raise ConfigError("horizon must be at least 1")
    pos = np.zeros(model.dimension)
    for k in range(1, n + 1):
        pos = pos + sample(model, rng)
        if float(body.h_value(pos / k)) > 0.0:
            return False, k, WalkState(k=k, position=pos, alive=False)
    return True, None, WalkState(k=n, position=pos, alive=True)


def _advance_population(
    positions: np.ndarray,
    k_start: int,
    k_end: int,
    model: RVModel,
    body: ConvexBody,
    rng: np.random.Generator,
    record_at: frozenset[int] | None = None,
    constrained: bool = True,
) -> tuple[np.ndarray, dict[int, int]]:
    """Advance alive walkers from time ``k_start`` to ``k_end``.

    Dead walkers are dropped immediately, so the stream consumption at each
    step equals the alive count; any two estimators sharing this routine and
    a stream draw identical numbers.
    """
    records: dict[int, int] = {}
    pos = positions
    for k in range(k_start + 1, k_end + 1):
        if pos.shape[0] == 0:
            break
        pos = pos + sample(model, rng, pos.shape[0])
        if constrained:
            inside = body.h_value(pos / k) <= 0.0
            if not np.all(inside):
                pos = pos[inside]
        if record_at is not None and k in record_at:
            records[k] = pos.shape[0]
    if record_at is not None:
        for k in record_at:
            if k > k_start and k not in records:
                records[k] = 0 if constrained else pos.shape[0]
    return pos, records


# ---------------------------------------------------------------------------
# direct Monte Carlo
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DirectMCResult:
    """Survival curve from plain Monte Carlo over a horizon grid."""

    n_grid: tuple[int, ...]
    counts: tuple[int, ...]
    reps: int
    seed: int

    @property
    def estimates(self) -> tuple[float, ...]:
        return tuple(c / self.reps for c in self.counts)

    @property
    def std_errors(self) -> tuple[float, ...]:
        out = []
        for c in self.counts:
            p = c / self.reps
            out.append(math.sqrt(p * (1.0 - p) / self.reps))
        return tuple(out)


def _direct_block(args) -> dict[int, int]:
    model, body, n_grid, block, seed, block_index = args
    rng = derive_rng(seed, "walkers", block_index)
    positions = np.zeros((block, model.dimension))
    _, records = _advance_population(
        positions, 0, max(n_grid), model, body, rng, record_at=frozenset(n_grid)
    )
    return records


def direct_mc(
    model: RVModel,
    body: ConvexBody,
    n_grid,
    reps: int,
    seed: int,
    workers: int = 1,
) -> DirectMCResult:
    """Monte Carlo survival estimates at every horizon in ``n_grid``.

    One walker population is advanced to ``max(n_grid)`` with counts
    recorded along the way, so the curve is monotone by construction.
    Replications are split into fixed-size blocks with independently
    derived streams; the block layout does not depend on ``workers``.
    """
    grid = tuple(int(n) for n in n_grid)
    if not grid or any(n < 1 for n in grid):
        raise ConfigError("n_grid must contain positive horizons")
    if reps < 1:
        raise ConfigError("reps must be positive")
    blocks = []
    remaining = reps
    idx = 0
    while remaining > 0:
        b = min(_DIRECT_BLOCK, remaining)
        blocks.append((model, body, grid, b, seed, idx))
        remaining -= b
        idx += 1
    if workers > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_direct_block, blocks))
    else:
        results = [_direct_block(a) for a in blocks]
    counts = {n: 0 for n in grid}
    for rec in results:
        for n in grid:
            counts[n] += rec[n]
    return DirectMCResult(n_grid=grid, counts=tuple(counts[n] for n in grid), reps=reps, seed=seed)


# ---------------------------------------------------------------------------
# level schedules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LevelSchedule:
    """Geometric time levels used by splitting and the proof bench.

    ``u``-kind: ``u_1 = c1``, ``u_{i+1} = floor((1 + eta) * r_ref * u_i)``,
    truncated to levels ``<= n``; the count is the ladder length lambda_n.

    ``m``-kind: ``m_1 = c1``, ``m_i = floor(c1 * ((1 - rho) * r_ref)**(i-1))``,
    extended until the first level ``>= n``; the count is kappa_n.
    """

    kind: str
    r_ref: float
    c1: int
    horizon: int
    levels: tuple[int, ...]
    eta: float | None = None
    rho: float | None = None

    @property
    def level_count(self) -> int:
        return len(self.levels)

    @property
    def growth_factor(self) -> float:
        if self.kind == "u":
            return (1.0 + (self.eta or 0.0)) * self.r_ref
        return (1.0 - (self.rho or 0.0)) * self.r_ref


def make_schedule(
    kind: str,
    r_ref: float,
    n: int,
    c1: int,
    eta: float | None = None,
    rho: float | None = None,
) -> LevelSchedule:
    """Build a validated level schedule of the requested kind.

    The ``u``-kind start level must satisfy
    ``c1 > 2 + 1 / ((1 + eta) * r_ref - 1)``; the ``m``-kind contraction
    must satisfy ``(1 - rho)**2 * r_ref > 1``.  Levels are evaluated in
    exact rational arithmetic before flooring, so boundary cases do not
    depend on the order of floating-point operations.
    """
    if not (isinstance(c1, int) and c1 >= 1):
        raise ConfigError("c1 must be a positive integer")
    if not (isinstance(n, int) and n >= c1):
        raise ConfigError("horizon must be an integer >= c1")
    if r_ref <= 1.0:
        raise ConfigError("r_ref must exceed 1")
    if kind == "u":
        if eta is None or eta < 0.0:
            raise ConfigError("u-kind schedules need eta >= 0")
        growth = Fraction(1.0 + eta) * Fraction(r_ref)
        if growth <= 1:
            raise ConfigError("(1 + eta) * r_ref must exceed 1")
        lower = 2.0 + 1.0 / float(growth - 1)
        if not (c1 > lower):
            raise ConfigError(
                f"c1 must exceed 2 + 1/((1 + eta) * r_ref - 1) = {lower:.6g}; got {c1}"
            )
        levels = [c1]
        u = Fraction(c1)
        while True:
            u = Fraction(math.floor(u * growth))
            if u > n:
                break
            levels.append(int(u))
        return LevelSchedule(kind="u", r_ref=r_ref, c1=c1, horizon=n, levels=tuple(levels), eta=eta)
    if kind == "m":
        if rho is None or not (0.0 < rho < 1.0):
            raise ConfigError("m-kind schedules need rho in (0, 1)")
        if (1.0 - rho) ** 2 * r_ref <= 1.0:
            raise ConfigError("(1 - rho)^2 * r_ref must exceed 1 (rho < 1 - r_ref^-1/2)")
        q = Fraction(1.0 - rho) * Fraction(r_ref)
        levels = []
        i = 1
        power = Fraction(1)
        while True:
            m_i = int(math.floor(Fraction(c1) * power))
            if levels and m_i <= levels[-1]:
                raise ConfigError("m-kind schedule is not strictly increasing; raise c1 or r_ref")
            levels.append(m_i)
            if m_i >= n:
                break
            power *= q
            i += 1
            if i > 10_000:
                raise ConfigError("schedule failed to reach the horizon")
        return LevelSchedule(kind="m", r_ref=r_ref, c1=c1, horizon=n, levels=tuple(levels), rho=rho)
    raise ConfigError("kind must be 'u' or 'm'")


# ---------------------------------------------------------------------------
# fixed-effort splitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplittingResult:
    """Fixed-effort splitting estimate of ``P_n``.

    ``per_level_fraction`` holds passage fractions pooled over macro
    replications, aligned with ``levels`` (the final entry is the horizon).
    ``estimate`` is their product; the log-scale standard error comes from
    the spread of per-replication log estimates.
    """

    n: int
    levels: tuple[int, ...]
    per_level_fraction: tuple[float, ...]
    effort: int
    macro_reps: int
    seed: int
    rep_log_estimates: tuple[float, ...]
    extinct_reps: int

    @property
    def estimate(self) -> float:
        out = 1.0
        for f in self.per_level_fraction:
            out *= f
        return out

    @property
    def log_estimate(self) -> float:
        est = self.estimate
        return math.log(est) if est > 0.0 else -math.inf

    @property
    def extinct(self) -> bool:
        return self.estimate == 0.0

    @property
    def std_error_log(self) -> float:
        finite = [v for v in self.rep_log_estimates if math.isfinite(v)]
        if len(finite) < 2:
            return math.inf
        return float(np.std(finite, ddof=1)) / math.sqrt(len(finite))


def _splitting_rep(args) -> tuple[list[int], float]:
    model, body, stage_bounds, effort, seed, rep_index = args
    rng = derive_rng(seed, "walkers", rep_index)
    positions = np.zeros((effort, model.dimension))
    k_prev = 0
    survivors: list[int] = []
    log_est = 0.0
    for stage, k_next in enumerate(stage_bounds):
        positions, _ = _advance_population(positions, k_prev, k_next, model, body, rng)
        alive = positions.shape[0]
        survivors.append(alive)
        if alive == 0:
            survivors.extend([0] * (len(stage_bounds) - stage - 1))
            return survivors, -math.inf
        log_est += math.log(alive / effort)
        k_prev = k_next
        if stage < len(stage_bounds) - 1:
            pick = rng.integers(0, alive, size=effort)
            positions = positions[pick]
    return survivors, log_est


def splitting_estimate(
    model: RVModel,
    body: ConvexBody,
    n: int,
    schedule: LevelSchedule,
    effort: int,
    seed: int,
    macro_reps: int = 10,
    workers: int = 1,
) -> SplittingResult:
    """Multilevel splitting estimate of ``P_n`` along ``schedule``.

    Levels beyond ``n`` are dropped and a final stage at ``n`` is always
    appended, so a schedule whose only level is ``n`` reduces to direct
    Monte Carlo with ``reps = effort``.
    """
    if effort < 2:
        raise ConfigError("effort must be at least 2")
    if macro_reps < 1:
        raise ConfigError("macro_reps must be positive")
    if n < 1:
        raise ConfigError("horizon must be positive")
    stage_bounds = [u for u in schedule.levels if u < n] + [n]
    args = [(model, body, stage_bounds, effort, seed, m) for m in range(macro_reps)]
    if workers > 1 and macro_reps > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_splitting_rep, args))
    else:
        results = [_splitting_rep(a) for a in args]
    totals = np.zeros(len(stage_bounds), dtype=np.int64)
    rep_logs = []
    for survivors, log_est in results:
        totals += np.asarray(survivors, dtype=np.int64)
        rep_logs.append(log_est)
    fractions = tuple(float(t) / (effort * macro_reps) for t in totals)
    extinct_reps = sum(1 for v in rep_logs if not math.isfinite(v))
    return SplittingResult(
        n=n,
        levels=tuple(stage_bounds),
        per_level_fraction=fractions,
        effort=effort,
        macro_reps=macro_reps,
        seed=seed,
        rep_log_estimates=tuple(rep_logs),
        extinct_reps=extinct_reps,
    )


# ---------------------------------------------------------------------------
# exponent regression
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentFit:
    """OLS fit of ``log P_n`` on ``(log n)^2`` with a ``log n`` nuisance term."""

    slope: float
    slope_se: float
    linear_coef: float
    intercept: float
    r2: float
    n_points: int

    @property
    def exponent_estimate(self) -> float:
        return -self.slope


def exponent_fit(n_values, log_p_values) -> ExponentFit:
    """Regress ``log P_n`` on ``[(log n)^2, log n, 1]``.

    The quadratic coefficient is the object of interest (its negative
    estimates the decay exponent); the linear term absorbs the first-order
    correction so the quadratic one is not biased by it.
    """
    n_arr = np.asarray(list(n_values), dtype=float)
    y = np.asarray(list(log_p_values), dtype=float)
    if n_arr.shape != y.shape or n_arr.ndim != 1:
        raise ConfigError("n_values and log_p_values must be 1-d of equal length")
    if n_arr.size < 4:
        raise ConfigError("need at least 4 points to fit 3 coefficients")
    if np.any(~np.isfinite(y)):
        raise EstimationError("log estimates contain non-finite values; cannot fit")
    ln = np.log(n_arr)
    design = np.column_stack([ln**2, ln, np.ones_like(ln)])
    if np.linalg.matrix_rank(design) < 3:
        raise EstimationError("degenerate regression design; need at least 3 distinct horizons")
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    dof = n_arr.size - 3
    sigma2 = float(resid @ resid) / dof if dof > 0 else math.nan
    cov = sigma2 * np.linalg.inv(design.T @ design)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(resid @ resid) / ss_tot if ss_tot > 0 else 1.0
    return ExponentFit(
        slope=float(coef[0]),
        slope_se=float(math.sqrt(max(cov[0, 0], 0.0))),
        linear_coef=float(coef[1]),
        intercept=float(coef[2]),
        r2=r2,
        n_points=int(n_arr.size),
    )


def level_passage_slope(result: SplittingResult, min_level: int) -> tuple[float, int]:
    """Log-log slope of pooled passage fractions against level times.

    Restricted to levels at or above ``min_level`` (the early levels are
    dominated by transients).  Returns the slope and the point count.
    """
    pts = [
        (lvl, frac)
        for lvl, frac in zip(result.levels, result.per_level_fraction)
        if lvl >= min_level and 0.0 < frac < 1.0
    ]
    if len(pts) < 3:
        raise EstimationError("not enough levels above min_level for a slope")
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    design = np.column_stack([x, np.ones_like(x)])
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    return float(coef[0]), len(pts)


# ---------------------------------------------------------------------------
# windowed persistence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WindowedResult:
    """Estimate of staying inside the target over the window ``[ceil(eps n), n]``."""

    epsilon: float
    n: int
    window_start: int
    levels: tuple[int, ...]
    per_level_fraction: tuple[float, ...]
    effort: int
    macro_reps: int
    seed: int
    rep_log_estimates: tuple[float, ...]
    reference_exponent: float

    @property
    def estimate(self) -> float:
        out = 1.0
        for f in self.per_level_fraction:
            out *= f
        return out

    @property
    def log_estimate(self) -> float:
        est = self.estimate
        return math.log(est) if est > 0.0 else -math.inf

    @property
    def std_error_log(self) -> float:
        finite = [v for v in self.rep_log_estimates if math.isfinite(v)]
        if len(finite) < 2:
            return math.inf
        return float(np.std(finite, ddof=1)) / math.sqrt(len(finite))

    @property
    def ratio_to_reference(self) -> float:
        """``(-log estimate / log n)`` divided by the reference exponent."""
        if self.reference_exponent == 0.0 or not math.isfinite(self.log_estimate):
            return math.nan
        return (-self.log_estimate / math.log(self.n)) / self.reference_exponent


def _windowed_rep(args) -> tuple[list[int], float]:
    model, body, k0, stage_bounds, effort, seed, rep_index = args
    rng = derive_rng(seed, "walkers", rep_index)
    positions = np.zeros((effort, model.dimension))
    # Free flight: no membership constraint before the window opens.
    positions, _ = _advance_population(
        positions, 0, k0 - 1, model, body, rng, constrained=False
    )
    k_prev = k0 - 1
    survivors: list[int] = []
    log_est = 0.0
    for stage, k_next in enumerate(stage_bounds):
        positions, _ = _advance_population(positions, k_prev, k_next, model, body, rng)
        alive = positions.shape[0]
        survivors.append(alive)
        if alive == 0:
            survivors.extend([0] * (len(stage_bounds) - stage - 1))
            return survivors, -math.inf
        log_est += math.log(alive / effort)
        k_prev = k_next
        if stage < len(stage_bounds) - 1:
            pick = rng.integers(0, alive, size=effort)
            positions = positions[pick]
    return survivors, log_est


def windowed_persistence(
    model: RVModel,
    body: ConvexBody,
    epsilon: float,
    n: int,
    effort: int,
    seed: int,
    macro_reps: int = 10,
    stage_growth: float | None = None,
    workers: int = 1,
) -> WindowedResult:
    """Estimate ``P(S_k / k in [a, b] for all ceil(eps n) <= k <= n)``.

    Walkers fly unconditioned to the window start and are then pushed
    through the window with multilevel splitting (plain Monte Carlo cannot
    reach the tiny probabilities the window produces).  The reference
    exponent is ``ceil(-log eps / log(b/a)) * (alpha - 1)``; the estimate
    is rejected when ``-log eps / log(b/a)`` sits within 0.05 of an
    integer, where the limit statement changes form.

    ``stage_growth`` spaces the splitting checkpoints multiplicatively
    inside the window; the default ``(b/a)**(1/3)`` keeps per-stage
    passage fractions moderate.  Spacing at or above ``b/a`` forces a
    fresh jump per stage and the resampled population then concentrates
    just above the death boundary, biasing the product downward.
    """
    if body.dim != 1 or model.dimension != 1:
        raise ConfigError("windowed persistence is defined for one-dimensional targets")
    if not (0.0 < epsilon <= 1.0):
        raise ConfigError("epsilon must lie in (0, 1]")
    a, b = projection_interval(body, [1.0])
    if epsilon == 1.0:
        # Degenerate single-time window {n}; the integrality guard does not apply.
        iota = 0.0
    else:
        if a <= 0.0:
            raise ConfigError("window theory needs a target interval with positive lower end")
        iota = -math.log(epsilon) / math.log(b / a)
        if abs(iota - round(iota)) < 0.05:
            raise ConfigError(
                "-log(epsilon)/log(b/a) is within 0.05 of an integer; "
                "the window exponent is discontinuous there"
            )
    k0 = math.ceil(epsilon * n)
    reference = math.ceil(iota) * (model.alpha - 1.0)

    if stage_growth is None:
        stage_growth = (b / a) ** (1.0 / 3.0)
    if stage_growth <= 1.0:
        raise ConfigError("stage_growth must exceed 1")

    # Geometric stage bounds inside the window.
    bounds: list[int] = []
    growth = Fraction(stage_growth)
    u = Fraction(k0)
    cur = k0
    while cur < n:
        bounds.append(cur)
        u = Fraction(math.floor(u * growth))
        nxt = int(u)
        if nxt <= cur:
            nxt = cur + 1
            u = Fraction(nxt)
        cur = nxt
    bounds.append(n)

    args = [(model, body, k0, bounds, effort, seed, m) for m in range(macro_reps)]
    if workers > 1 and macro_reps > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_windowed_rep, args))
    else:
        results = [_windowed_rep(a_) for a_ in args]
    totals = np.zeros(len(bounds), dtype=np.int64)
    rep_logs = []
    for survivors, log_est in results:
        totals += np.asarray(survivors, dtype=np.int64)
        rep_logs.append(log_est)
    fractions = tuple(float(t) / (effort * macro_reps) for t in totals)
    return WindowedResult(
        epsilon=epsilon,
        n=n,
        window_start=k0,
        levels=tuple(bounds),
        per_level_fraction=fractions,
        effort=effort,
        macro_reps=macro_reps,
        seed=seed,
        rep_log_estimates=tuple(rep_logs),
        reference_exponent=reference,
    )
