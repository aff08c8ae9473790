"""Heavy-tailed step distributions with exact centering.

The walk models used throughout the package draw a raw step ``W`` and
return ``X = W - shift`` with ``shift = E[W]`` so that ``E[X] = 0`` holds
exactly.  Three modes are supported:

``multivariate``
    ``W = R * Theta`` with probability ``1 - bulk_fraction``, where ``R``
    is Pareto(alpha, x_m) and ``Theta`` follows the angular spec, plus a
    uniform-on-the-ball bulk component with weight ``bulk_fraction``.
    The radial tail is an exact power law past ``x_m``:
    ``P(|W| > t) = (1 - bulk_fraction) * (t / x_m)**-alpha`` for t >= x_m.

``one-dimensional``
    Two-sided sign mixture.  Right tail Pareto(alpha, x_m) with weight
    ``(1 - bulk_fraction) * (1 - p_minus)``, left tail Pareto(alpha_minus,
    x_m) with weight ``(1 - bulk_fraction) * p_minus``, uniform bulk on
    ``[-x_m, x_m]`` otherwise.  ``alpha_minus >= alpha`` keeps the right
    tail dominant or balanced.

``nonstandard-product``
    Independent one-dimensional components with their own tail indices.

All sampling is vectorised and consumes a ``numpy.random.Generator``; use
:func:`persistlab.rng.derive_rng` to build reproducible streams.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from .errors import ConfigError
from .rng import derive_rng

__all__ = [
    "UniformSphere",
    "VonMisesFisher",
    "PiecewiseDensity",
    "TailBalance",
    "RVModel",
    "SampleBatch",
    "HillEstimate",
    "one_dim_model",
    "multivariate_model",
    "product_model",
    "calibrate_centering",
    "sample_step",
    "sample_step_1d",
    "sample_nonstandard",
    "sample",
    "sample_batch",
    "radial_survival",
    "one_dim_survival",
    "one_dim_mean_raw",
    "one_dim_variance",
    "truncated_second_moment",
    "directed_tail_constant",
    "hill_tail_index",
]


# ---------------------------------------------------------------------------
# angular specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UniformSphere:
    """Uniform direction on the unit sphere."""

    kind: str = field(default="uniform-sphere", init=False)

    @property
    def strictly_positive(self) -> bool:
        return True

    def sample(self, dim: int, size: int, rng: np.random.Generator) -> np.ndarray:
        z = rng.standard_normal((size, dim))
        norms = np.linalg.norm(z, axis=1, keepdims=True)
        # A zero row has probability zero; guard anyway.
        norms[norms == 0.0] = 1.0
        return z / norms

    def mean_direction(self, dim: int) -> np.ndarray:
        return np.zeros(dim)


@dataclass(frozen=True)
class VonMisesFisher:
    """von Mises-Fisher law with mean direction ``mu`` and concentration ``kappa``."""

    mu: tuple[float, ...]
    kappa: float
    kind: str = field(default="von-mises-fisher", init=False)

    def __post_init__(self) -> None:
        if self.kappa <= 0:
            raise ConfigError("angular_spec.kappa must be positive")
        norm = math.sqrt(sum(m * m for m in self.mu))
        if not math.isfinite(norm) or norm == 0.0:
            raise ConfigError("angular_spec.mu must be a nonzero vector")
        if abs(norm - 1.0) > 1e-9:
            object.__setattr__(self, "mu", tuple(m / norm for m in self.mu))

    @property
    def strictly_positive(self) -> bool:
        # The vMF density is bounded away from zero on the sphere.
        return True

    def sample(self, dim: int, size: int, rng: np.random.Generator) -> np.ndarray:
        if dim != len(self.mu):
            raise ConfigError("angular_spec.mu dimension does not match model dimension")
        from scipy.stats import vonmises_fisher

        law = vonmises_fisher(np.asarray(self.mu), self.kappa)
        out = law.rvs(size, random_state=rng)
        return np.atleast_2d(out)

    def mean_direction(self, dim: int) -> np.ndarray:
        # E[Theta] = (I_{d/2}(kappa) / I_{d/2-1}(kappa)) * mu, computed with
        # exponentially scaled Bessel functions so large kappa stays finite.
        nu = dim / 2.0
        ratio = special.ive(nu, self.kappa) / special.ive(nu - 1.0, self.kappa)
        return ratio * np.asarray(self.mu)


@dataclass(frozen=True)
class PiecewiseDensity:
    """Piecewise-constant angular density on the circle (dimension 2 only).

    ``breaks`` are increasing angles in ``[0, 2*pi]`` starting at 0 and
    ending at ``2*pi``; ``weights[i]`` is the unnormalised density on
    ``[breaks[i], breaks[i+1])``.
    """

    breaks: tuple[float, ...]
    weights: tuple[float, ...]
    kind: str = field(default="piecewise-density", init=False)

    def __post_init__(self) -> None:
        b = self.breaks
        if len(b) < 2 or len(self.weights) != len(b) - 1:
            raise ConfigError("angular_spec piecewise breaks/weights lengths are inconsistent")
        if abs(b[0]) > 1e-12 or abs(b[-1] - 2.0 * math.pi) > 1e-9:
            raise ConfigError("angular_spec piecewise breaks must start at 0 and end at 2*pi")
        if any(b[i + 1] <= b[i] for i in range(len(b) - 1)):
            raise ConfigError("angular_spec piecewise breaks must be strictly increasing")
        if any(w < 0 for w in self.weights):
            raise ConfigError("angular_spec piecewise weights must be non-negative")
        if all(w == 0 for w in self.weights):
            raise ConfigError("angular_spec piecewise weights must not all vanish")

    @property
    def strictly_positive(self) -> bool:
        return all(w > 0 for w in self.weights)

    def _norm_const(self) -> float:
        b = np.asarray(self.breaks)
        w = np.asarray(self.weights)
        return float(np.sum(w * np.diff(b)))

    def density(self, theta: np.ndarray) -> np.ndarray:
        b = np.asarray(self.breaks)
        w = np.asarray(self.weights) / self._norm_const()
        idx = np.clip(np.searchsorted(b, theta, side="right") - 1, 0, len(w) - 1)
        return w[idx]

    def sample(self, dim: int, size: int, rng: np.random.Generator) -> np.ndarray:
        if dim != 2:
            raise ConfigError("piecewise-density angular spec is only defined in dimension 2")
        # Rejection against the uniform proposal with the max density bound.
        bound = float(np.max(self.density(np.asarray(self.breaks[:-1]))))
        angles = np.empty(size)
        filled = 0
        while filled < size:
            m = max(64, int(1.5 * (size - filled) * bound * 2.0 * math.pi))
            theta = rng.random(m) * 2.0 * math.pi
            accept = rng.random(m) * bound < self.density(theta)
            got = theta[accept]
            take = min(size - filled, got.size)
            angles[filled : filled + take] = got[:take]
            filled += take
        return np.column_stack([np.cos(angles), np.sin(angles)])

    def mean_direction(self, dim: int) -> np.ndarray:
        # Quadrature fallback path: no closed form is assumed here.
        cx, _ = integrate.quad(lambda t: math.cos(t) * float(self.density(np.array([t]))[0]), 0.0, 2.0 * math.pi, limit=200)
        cy, _ = integrate.quad(lambda t: math.sin(t) * float(self.density(np.array([t]))[0]), 0.0, 2.0 * math.pi, limit=200)
        return np.array([cx, cy])


AngularSpec = UniformSphere | VonMisesFisher | PiecewiseDensity


@dataclass(frozen=True)
class TailBalance:
    """Two-sided tail layout for one-dimensional models.

    ``p_minus`` is the probability weight of the negative Pareto branch
    inside the non-bulk part; ``alpha_minus`` its tail index.
    """

    p_minus: float = 0.5
    alpha_minus: float | None = None


# ---------------------------------------------------------------------------
# model
# ---------------------------------------------------------------------------


_MODES = ("multivariate", "one-dimensional", "nonstandard-product")


@dataclass(frozen=True)
class RVModel:
    """Regularly varying step law with exact mean-zero centering.

    Parameters
    ----------
    dimension : int
        Ambient dimension ``d >= 1``.
    alpha : float
        Tail index, must exceed 1 so the mean exists.  For the product
        mode this is the minimum of the component indices.
    x_m : float
        Radial scale: the Pareto branch lives on ``[x_m, inf)``.
    bulk_fraction : float
        Weight of the bounded bulk component, in ``[0, 1)``.
    angular : AngularSpec
        Direction law (multivariate mode only).
    tail_balance : TailBalance
        Sign mixture layout (one-dimensional mode only).
    mode : str
        One of ``multivariate``, ``one-dimensional``, ``nonstandard-product``.
    components : tuple[RVModel, ...]
        Per-coordinate one-dimensional models (product mode only).
    centering : tuple[float, ...] or None
        Mean shift subtracted from raw draws.  Computed automatically when
        omitted so that ``E[X] = 0`` exactly.
    """

    dimension: int
    alpha: float
    x_m: float = 1.0
    bulk_fraction: float = 0.0
    angular: AngularSpec = UniformSphere()
    tail_balance: TailBalance = TailBalance()
    mode: str = "multivariate"
    components: tuple["RVModel", ...] = ()
    centering: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.mode not in _MODES:
            raise ConfigError(f"mode must be one of {_MODES}, got {self.mode!r}")
        if self.mode == "nonstandard-product":
            if not self.components:
                raise ConfigError("nonstandard-product mode requires component models")
            if any(c.mode != "one-dimensional" for c in self.components):
                raise ConfigError("component models must be one-dimensional")
            if self.dimension != len(self.components):
                raise ConfigError("dimension must equal the number of components")
        else:
            if not (isinstance(self.dimension, int) and self.dimension >= 1):
                raise ConfigError("dimension must be a positive integer")
            if not (self.alpha > 1.0):
                raise ConfigError("alpha must exceed 1 (finite-mean requirement)")
            if not (self.x_m > 0.0):
                raise ConfigError("x_m (radial_scale) must be positive")
            if not (0.0 <= self.bulk_fraction < 1.0):
                raise ConfigError("bulk_fraction must lie in [0, 1); 1 would make the law bounded")
        if self.mode == "multivariate":
            if self.dimension < 2:
                raise ConfigError("multivariate mode requires dimension >= 2")
            if not self.angular.strictly_positive:
                raise ConfigError("angular density must be strictly positive in multivariate mode")
        if self.mode == "one-dimensional":
            if self.dimension != 1:
                raise ConfigError("one-dimensional mode requires dimension == 1")
            tb = self.tail_balance
            if not (0.0 <= tb.p_minus <= 1.0):
                raise ConfigError("tail_balance.p_minus must lie in [0, 1]")
            am = tb.alpha_minus if tb.alpha_minus is not None else self.alpha
            if am < self.alpha:
                raise ConfigError("tail_balance.alpha_minus must be >= alpha")
        if self.centering is None:
            object.__setattr__(self, "centering", tuple(float(v) for v in _raw_mean(self)))
        elif len(self.centering) != self.dimension:
            raise ConfigError("centering vector length must equal dimension")

    @property
    def alpha_minus(self) -> float:
        am = self.tail_balance.alpha_minus
        return self.alpha if am is None else am

    def digest(self) -> str:
        """Stable content hash of the model parameters."""
        return hashlib.sha256(json.dumps(_describe(self), sort_keys=True).encode()).hexdigest()


def _describe(model: RVModel) -> dict:
    d: dict = {
        "mode": model.mode,
        "dimension": model.dimension,
        "alpha": model.alpha,
        "x_m": model.x_m,
        "bulk_fraction": model.bulk_fraction,
        "centering": list(model.centering or ()),
    }
    if model.mode == "multivariate":
        ang: dict = {"kind": model.angular.kind}
        if isinstance(model.angular, VonMisesFisher):
            ang.update(mu=list(model.angular.mu), kappa=model.angular.kappa)
        if isinstance(model.angular, PiecewiseDensity):
            ang.update(breaks=list(model.angular.breaks), weights=list(model.angular.weights))
        d["angular"] = ang
    if model.mode == "one-dimensional":
        d["tail_balance"] = {"p_minus": model.tail_balance.p_minus, "alpha_minus": model.alpha_minus}
    if model.mode == "nonstandard-product":
        d["components"] = [_describe(c) for c in model.components]
    return d


def one_dim_model(
    alpha: float,
    x_m: float = 1.0,
    bulk_fraction: float = 0.0,
    p_minus: float = 0.5,
    alpha_minus: float | None = None,
) -> RVModel:
    """Convenience constructor for the one-dimensional two-sided law."""
    return RVModel(
        dimension=1,
        alpha=alpha,
        x_m=x_m,
        bulk_fraction=bulk_fraction,
        tail_balance=TailBalance(p_minus=p_minus, alpha_minus=alpha_minus),
        mode="one-dimensional",
    )


def multivariate_model(
    dimension: int,
    alpha: float,
    x_m: float = 1.0,
    bulk_fraction: float = 0.0,
    angular: AngularSpec | None = None,
) -> RVModel:
    """Convenience constructor for the multivariate polar law."""
    return RVModel(
        dimension=dimension,
        alpha=alpha,
        x_m=x_m,
        bulk_fraction=bulk_fraction,
        angular=angular if angular is not None else UniformSphere(),
        mode="multivariate",
    )


def product_model(components: tuple[RVModel, ...] | list[RVModel]) -> RVModel:
    """Independent product of one-dimensional models."""
    comps = tuple(components)
    return RVModel(
        dimension=len(comps),
        alpha=min(c.alpha for c in comps) if comps else 2.0,
        mode="nonstandard-product",
        components=comps,
    )


# ---------------------------------------------------------------------------
# centering
# ---------------------------------------------------------------------------


def _pareto_mean(alpha: float, x_m: float) -> float:
    return alpha * x_m / (alpha - 1.0)


def one_dim_mean_raw(model: RVModel) -> float:
    """E[W] of the raw (uncentered) one-dimensional mixture, closed form."""
    tb = model.tail_balance
    am = model.alpha_minus
    tail_mean = (1.0 - tb.p_minus) * _pareto_mean(model.alpha, model.x_m) - tb.p_minus * _pareto_mean(am, model.x_m)
    return (1.0 - model.bulk_fraction) * tail_mean


def _raw_mean(model: RVModel) -> np.ndarray:
    """E[W] for any mode.

    Closed form wherever one exists (Pareto radial mean, uniform or vMF
    angular mean); the piecewise density falls back to quadrature.
    """
    if model.mode == "one-dimensional":
        return np.array([one_dim_mean_raw(model)])
    if model.mode == "nonstandard-product":
        return np.array([one_dim_mean_raw(c) for c in model.components])
    mean_theta = model.angular.mean_direction(model.dimension)
    # The bulk ball is centred at the origin, so only the polar part counts.
    return (1.0 - model.bulk_fraction) * _pareto_mean(model.alpha, model.x_m) * mean_theta


def calibrate_centering(model: RVModel) -> np.ndarray:
    """Mean-shift vector stored with the model (recomputed on demand)."""
    if model.centering is not None:
        return np.asarray(model.centering, dtype=float)
    return _raw_mean(model)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def _pareto(rng: np.random.Generator, alpha: float, x_m: float, size: int) -> np.ndarray:
    # Inverse CDF on (0, 1]; 1 - random() avoids an exact zero argument.
    u = 1.0 - rng.random(size)
    return x_m * u ** (-1.0 / alpha)


def _uniform_ball(rng: np.random.Generator, dim: int, radius: float, size: int) -> np.ndarray:
    z = rng.standard_normal((size, dim))
    norms = np.linalg.norm(z, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    r = radius * rng.random(size) ** (1.0 / dim)
    return z / norms * r[:, None]


def _sample_multivariate_raw(model: RVModel, rng: np.random.Generator, size: int) -> np.ndarray:
    d = model.dimension
    out = np.empty((size, d))
    is_bulk = rng.random(size) < model.bulk_fraction
    n_tail = int(np.count_nonzero(~is_bulk))
    if n_tail:
        radii = _pareto(rng, model.alpha, model.x_m, n_tail)
        dirs = model.angular.sample(d, n_tail, rng)
        out[~is_bulk] = radii[:, None] * dirs
    n_bulk = size - n_tail
    if n_bulk:
        out[is_bulk] = _uniform_ball(rng, d, model.x_m, n_bulk)
    return out


def _sample_one_dim_raw(model: RVModel, rng: np.random.Generator, size: int) -> np.ndarray:
    out = np.empty(size)
    is_bulk = rng.random(size) < model.bulk_fraction
    tail_idx = np.flatnonzero(~is_bulk)
    if tail_idx.size:
        neg = rng.random(tail_idx.size) < model.tail_balance.p_minus
        n_neg = int(np.count_nonzero(neg))
        n_pos = tail_idx.size - n_neg
        if n_pos:
            out[tail_idx[~neg]] = _pareto(rng, model.alpha, model.x_m, n_pos)
        if n_neg:
            out[tail_idx[neg]] = -_pareto(rng, model.alpha_minus, model.x_m, n_neg)
    n_bulk = size - tail_idx.size
    if n_bulk:
        out[is_bulk] = rng.uniform(-model.x_m, model.x_m, n_bulk)
    return out


def sample_step(model: RVModel, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Centered multivariate step(s): shape ``(d,)`` or ``(size, d)``."""
    if model.mode != "multivariate":
        raise ConfigError("sample_step requires a multivariate model")
    n = 1 if size is None else int(size)
    raw = _sample_multivariate_raw(model, rng, n)
    raw -= np.asarray(model.centering)
    return raw[0] if size is None else raw


def sample_step_1d(model: RVModel, rng: np.random.Generator, size: int | None = None) -> float | np.ndarray:
    """Centered one-dimensional step(s)."""
    if model.mode != "one-dimensional":
        raise ConfigError("sample_step_1d requires a one-dimensional model")
    n = 1 if size is None else int(size)
    raw = _sample_one_dim_raw(model, rng, n)
    raw -= model.centering[0]
    return float(raw[0]) if size is None else raw


def sample_nonstandard(models, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Centered steps with independent per-coordinate one-dimensional laws."""
    comps = list(models)
    if not comps:
        raise ConfigError("sample_nonstandard requires at least one component model")
    n = 1 if size is None else int(size)
    cols = []
    for comp in comps:
        if comp.mode != "one-dimensional":
            raise ConfigError("sample_nonstandard components must be one-dimensional models")
        cols.append(_sample_one_dim_raw(comp, rng, n) - comp.centering[0])
    out = np.column_stack(cols)
    return out[0] if size is None else out


def sample(model: RVModel, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Mode-dispatching sampler returning arrays of shape ``(size, d)``."""
    n = 1 if size is None else int(size)
    if model.mode == "multivariate":
        out = sample_step(model, rng, n)
    elif model.mode == "one-dimensional":
        out = np.asarray(sample_step_1d(model, rng, n))[:, None]
    else:
        out = sample_nonstandard(model.components, rng, n)
    out = np.atleast_2d(out)
    return out[0] if size is None else out


@dataclass(frozen=True)
class SampleBatch:
    """A reproducible batch of steps together with its provenance."""

    steps: np.ndarray
    seed: int
    model_digest: str

    def __len__(self) -> int:
        return self.steps.shape[0]


def sample_batch(model: RVModel, count: int, master_seed: int, stream: int | str = "batch") -> SampleBatch:
    """Draw ``count`` centered steps on a derived stream.

    The batch records the seed and the model digest so downstream reports
    can assert that two runs used the same law and entropy.
    """
    if count <= 0:
        raise ConfigError("count must be positive")
    rng = derive_rng(master_seed, "sampler", stream)
    steps = sample(model, rng, count)
    return SampleBatch(steps=steps, seed=master_seed, model_digest=model.digest())


# ---------------------------------------------------------------------------
# closed-form law helpers (used as test oracles and by the bench module)
# ---------------------------------------------------------------------------


def radial_survival(model: RVModel, t: float) -> float:
    """P(|W| > t) of the raw multivariate law, exact for t >= x_m."""
    if t < model.x_m:
        raise ConfigError("radial survival is only exact for t >= x_m")
    return (1.0 - model.bulk_fraction) * (t / model.x_m) ** (-model.alpha)


def one_dim_survival(model: RVModel, x: float) -> float:
    """P(W > x) of the raw one-dimensional mixture, exact for x >= x_m."""
    if x < model.x_m:
        raise ConfigError("survival formula is only exact for x >= x_m")
    tb = model.tail_balance
    return (1.0 - model.bulk_fraction) * (1.0 - tb.p_minus) * (x / model.x_m) ** (-model.alpha)


def one_dim_variance(model: RVModel) -> float:
    """Var(X) of the centered one-dimensional mixture, closed form (alpha > 2)."""
    a, am, xm = model.alpha, model.alpha_minus, model.x_m
    if a <= 2.0 or am <= 2.0:
        raise ConfigError("variance requires both tail indices above 2")
    tb = model.tail_balance
    q = model.bulk_fraction
    second = (1.0 - q) * (
        (1.0 - tb.p_minus) * a * xm**2 / (a - 2.0) + tb.p_minus * am * xm**2 / (am - 2.0)
    ) + q * xm**2 / 3.0
    return second - one_dim_mean_raw(model) ** 2


def truncated_second_moment(model: RVModel, x: float) -> float:
    """E[W^2 * 1(|W| < x)] for the one-dimensional mixture, closed form."""
    if model.mode != "one-dimensional":
        raise ConfigError("truncated second moment is defined for one-dimensional models")
    if x <= model.x_m:
        # Only the bulk contributes below the Pareto threshold.
        return model.bulk_fraction * min(x, model.x_m) ** 2 / 3.0

    def pareto_part(alpha: float) -> float:
        xm = model.x_m
        if alpha == 2.0:
            return 2.0 * xm**2 * math.log(x / xm)
        return alpha / (2.0 - alpha) * (x ** (2.0 - alpha) * xm**alpha - xm**2)

    tb = model.tail_balance
    tail = (1.0 - tb.p_minus) * pareto_part(model.alpha) + tb.p_minus * pareto_part(model.alpha_minus)
    return (1.0 - model.bulk_fraction) * tail + model.bulk_fraction * model.x_m**2 / 3.0


@lru_cache(maxsize=64)
def _angular_moment(spec: AngularSpec, dim: int, u: tuple[float, ...], alpha: float) -> float:
    """E[(<u, Theta>)_+^alpha] under the angular law."""
    uv = np.asarray(u)
    if isinstance(spec, UniformSphere) and dim == 2:
        val, _ = integrate.quad(lambda t: max(math.cos(t), 0.0) ** alpha / (2.0 * math.pi), 0.0, 2.0 * math.pi)
        return val
    if isinstance(spec, PiecewiseDensity):
        val, _ = integrate.quad(
            lambda t: max(uv[0] * math.cos(t) + uv[1] * math.sin(t), 0.0) ** alpha
            * float(spec.density(np.array([t]))[0]),
            0.0,
            2.0 * math.pi,
            limit=400,
        )
        return val
    # Fixed-seed Monte Carlo fallback for the remaining angular laws.
    rng = derive_rng(20260819, "angular-moment")
    theta = spec.sample(dim, 200_000, rng)
    proj = theta @ uv
    return float(np.mean(np.clip(proj, 0.0, None) ** alpha))


def directed_tail_constant(model: RVModel, u) -> float:
    """Limit of ``m * P(<u, X> > t * a_m) * t**alpha`` for the polar law.

    With the radial normalisation ``a_m = x_m * ((1 - bulk) * m)**(1/alpha)``
    this equals ``E[(<u, Theta>)_+^alpha]``, the limit measure of the
    half-space ``{y : <u, y> > 1}`` under the convention that the ball
    complement ``{|y| > 1}`` has measure one.
    """
    if model.mode != "multivariate":
        raise ConfigError("directed tail constants are defined for multivariate models")
    uv = np.asarray(u, dtype=float)
    uv = uv / np.linalg.norm(uv)
    if isinstance(uv, np.ndarray) and isinstance(model.angular, UniformSphere) and model.dimension == 2:
        # E[(cos psi)_+^alpha] is direction-free on the circle.
        return _angular_moment(model.angular, 2, (1.0, 0.0), model.alpha)
    return _angular_moment(model.angular, model.dimension, tuple(uv), model.alpha)


# ---------------------------------------------------------------------------
# tail index estimation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HillEstimate:
    """Hill estimator output; ``unreliable`` flags a too-small order count."""

    alpha: float
    k: int
    n: int
    unreliable: bool


def hill_tail_index(samples, k: int) -> HillEstimate:
    """Hill estimator of the tail index from the top ``k`` order statistics.

    Parameters
    ----------
    samples : array_like
        Positive observations (callers project or truncate beforehand).
    k : int
        Number of upper order statistics; must satisfy ``0 < k < len(samples)``.
    """
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1:
        raise ConfigError("hill_tail_index expects a one-dimensional sample")
    n = x.size
    if not (0 < k < n):
        raise ConfigError("k must satisfy 0 < k < n")
    if np.any(x <= 0.0):
        raise ConfigError("samples must be strictly positive")
    top = np.sort(x)[-(k + 1):]
    logs = np.log(top)
    spacing_mean = float(np.mean(logs[1:] - logs[0]))
    if spacing_mean <= 0.0:
        raise ConfigError("degenerate sample: zero log-spacings in the tail")
    return HillEstimate(alpha=1.0 / spacing_mean, k=k, n=n, unreliable=k < 30)
