"""Convex target sets and the radial-ratio program behind the decay exponent.

A target set ``A`` is a bounded convex body with ``0`` outside its closure
and non-empty interior, described through a convex gauge ``H`` with
``A = {x : H(x) <= 0}``.  Two concrete bodies are provided:

* :class:`Polytope` with ``H(x) = max_i <a_i, x> + b_i`` (boxes included),
* :class:`Ball` with ``H(x) = |x - c| - radius`` kept in native form so
  support and radial formulas are exact.

The central quantity is the optimal radial expansion ratio

    ``r_star = sup {r >= 1 : some y has H(y) <= 0 and H(r y) <= 0}``,

equivalently the largest ratio ``U_phi / L_phi`` of exit over entry radius
over all directions hitting ``A``.  The decay exponent of the persistence
probability is ``(alpha - 1) / (2 log r_star)``.

``r_star`` is computed by outer bisection on ``r``; the inner feasibility
problem (is there ``y`` with ``max(H(y), H(r y)) <= delta``?) is convex and
monotone in ``r``, solved exactly by linear programming for polytopes and
in closed form for balls.  A Polyak subgradient solver is available as a
method option and for any body that only exposes ``h_value``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import ConfigError

__all__ = [
    "ConvexBody",
    "Polytope",
    "Ball",
    "box",
    "interval",
    "RadialSlice",
    "ExponentReport",
    "h_value",
    "radial_bounds",
    "r_star",
    "persistence_exponent",
    "nonstandard_exponent",
    "projection_interval",
    "projection_exponent_bound",
    "exponent_report",
    "set_distance",
    "scaled_gap_ratio",
]

_FEAS_SLACK = 1e-10


# ---------------------------------------------------------------------------
# bodies
# ---------------------------------------------------------------------------


class ConvexBody:
    """Interface shared by concrete bodies.

    Subclasses provide ``h_value`` (vectorised convex gauge), ``support``,
    ``project`` (Euclidean projection onto the body), ``scale``, ``relax``
    and ``feasible_pair`` (the inner problem of the radial program).
    Construction must verify: bounded, ``0`` outside the closure, interior
    non-empty.
    """

    dim: int

    def h_value(self, x: np.ndarray) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError

    def contains(self, x: np.ndarray, tol: float = 0.0) -> np.ndarray:
        return self.h_value(x) <= tol

    def support(self, c: np.ndarray) -> float:  # pragma: no cover - interface
        raise NotImplementedError

    def bounding_radius(self) -> float:
        """An upper bound for ``sup {|x| : x in A}``."""
        raise NotImplementedError

    def deepest_point(self) -> tuple[np.ndarray, float]:
        """A minimiser of ``H`` and its value (negative for valid bodies)."""
        raise NotImplementedError


def _check_invariants(body: ConvexBody) -> None:
    h0 = float(body.h_value(np.zeros(body.dim)))
    if h0 <= 0.0:
        raise ConfigError("the origin must lie strictly outside the body")
    _, hmin = body.deepest_point()
    if hmin >= 0.0:
        raise ConfigError("the body must have non-empty interior")


class Polytope(ConvexBody):
    """Intersection of half-spaces ``<a_i, x> + b_i <= 0``."""

    def __init__(self, normals, offsets):
        self.normals = np.atleast_2d(np.asarray(normals, dtype=float))
        self.offsets = np.asarray(offsets, dtype=float).ravel()
        if self.normals.shape[0] != self.offsets.shape[0]:
            raise ConfigError("normals and offsets must have matching lengths")
        self.dim = self.normals.shape[1]
        self._assert_bounded()
        _check_invariants(self)
        self._vertices: np.ndarray | None = None

    def _assert_bounded(self) -> None:
        for j in range(self.dim):
            for sign in (1.0, -1.0):
                c = np.zeros(self.dim)
                c[j] = -sign
                res = linprog(c, A_ub=self.normals, b_ub=-self.offsets, bounds=[(None, None)] * self.dim, method="highs")
                if res.status == 3:
                    raise ConfigError("polytope is unbounded along a coordinate direction")
                if res.status != 0:
                    raise ConfigError("polytope is empty or ill-posed")

    def h_value(self, x: np.ndarray) -> np.ndarray:
        arr = np.asarray(x, dtype=float)
        if arr.shape[-1] != self.dim:
            raise ConfigError("point dimension does not match the body")
        vals = arr @ self.normals.T + self.offsets
        return np.max(vals, axis=-1)

    def support(self, c: np.ndarray) -> float:
        cv = np.asarray(c, dtype=float)
        verts = self.vertices()
        return float(np.max(verts @ cv))

    def vertices(self) -> np.ndarray:
        """Vertex enumeration, practical for dimension <= 3."""
        if self._vertices is not None:
            return self._vertices
        if self.dim > 3:
            raise ConfigError("vertex enumeration is limited to dimension <= 3")
        pts = []
        m = self.normals.shape[0]
        for idx in itertools.combinations(range(m), self.dim):
            a = self.normals[list(idx)]
            b = -self.offsets[list(idx)]
            try:
                v = np.linalg.solve(a, b)
            except np.linalg.LinAlgError:
                continue
            if float(self.h_value(v)) <= 1e-9 * (1.0 + np.linalg.norm(v)):
                pts.append(v)
        if not pts:
            raise ConfigError("degenerate polytope: no vertices found")
        verts = np.unique(np.round(np.asarray(pts), 12), axis=0)
        self._vertices = verts
        return verts

    def bounding_radius(self) -> float:
        return float(np.max(np.linalg.norm(self.vertices(), axis=1)))

    def deepest_point(self) -> tuple[np.ndarray, float]:
        # min t subject to <a_i, x> + b_i <= t
        d, m = self.dim, self.normals.shape[0]
        c = np.zeros(d + 1)
        c[-1] = 1.0
        a_ub = np.hstack([self.normals, -np.ones((m, 1))])
        res = linprog(c, A_ub=a_ub, b_ub=-self.offsets, bounds=[(None, None)] * (d + 1), method="highs")
        if res.status != 0:
            raise ConfigError("failed to locate an interior point")
        return res.x[:-1], float(res.x[-1])

    def project(self, x: np.ndarray, tol: float = 1e-10, max_cycles: int = 20000) -> np.ndarray:
        """Euclidean projection by Dykstra's cyclic scheme over half-spaces."""
        x = np.asarray(x, dtype=float)
        if float(self.h_value(x)) <= 0.0:
            return x.copy()
        m = self.normals.shape[0]
        norms2 = np.einsum("ij,ij->i", self.normals, self.normals)
        y = x.copy()
        corr = np.zeros((m, self.dim))
        scale = 1.0 + np.linalg.norm(x)
        for _ in range(max_cycles):
            start = y.copy()
            for i in range(m):
                z = y + corr[i]
                viol = float(z @ self.normals[i] + self.offsets[i])
                if viol > 0.0:
                    ynew = z - (viol / norms2[i]) * self.normals[i]
                else:
                    ynew = z
                corr[i] = z - ynew
                y = ynew
            if np.linalg.norm(y - start) < tol * scale:
                break
        return y

    def scale(self, s: float) -> "Polytope":
        if s <= 0.0:
            raise ConfigError("scaling factor must be positive")
        return Polytope(self.normals, self.offsets * s)

    def relax(self, delta: float) -> "Polytope":
        return Polytope(self.normals, self.offsets - delta)

    def feasible_pair(self, r: float, delta: float) -> tuple[bool, np.ndarray | None]:
        """Exact inner feasibility: min_y max(H(y), H(r y)) via an LP."""
        d, m = self.dim, self.normals.shape[0]
        c = np.zeros(d + 1)
        c[-1] = 1.0
        rows = np.vstack([
            np.hstack([self.normals, -np.ones((m, 1))]),
            np.hstack([r * self.normals, -np.ones((m, 1))]),
        ])
        b_ub = np.concatenate([-self.offsets, -self.offsets])
        res = linprog(c, A_ub=rows, b_ub=b_ub, bounds=[(None, None)] * (d + 1), method="highs")
        if res.status != 0:
            return False, None
        ok = float(res.x[-1]) <= delta + _FEAS_SLACK
        return ok, (res.x[:-1] if ok else None)


def box(lower, upper) -> Polytope:
    """Axis-aligned box ``prod [lower_j, upper_j]`` as a polytope."""
    lo = np.atleast_1d(np.asarray(lower, dtype=float))
    hi = np.atleast_1d(np.asarray(upper, dtype=float))
    if lo.shape != hi.shape:
        raise ConfigError("box bounds must have equal length")
    if np.any(lo >= hi):
        raise ConfigError("box lower bounds must be strictly below upper bounds")
    d = lo.size
    eye = np.eye(d)
    normals = np.vstack([eye, -eye])
    offsets = np.concatenate([-hi, lo])
    return Polytope(normals, offsets)


def interval(a: float, b: float) -> Polytope:
    """One-dimensional target ``[a, b]``."""
    return box([a], [b])


class Ball(ConvexBody):
    """Euclidean ball kept in native center/radius form."""

    def __init__(self, center, radius: float):
        self.center = np.atleast_1d(np.asarray(center, dtype=float))
        self.radius = float(radius)
        self.dim = self.center.size
        if self.radius <= 0.0:
            raise ConfigError("ball radius must be positive")
        _check_invariants(self)

    def h_value(self, x: np.ndarray) -> np.ndarray:
        arr = np.asarray(x, dtype=float)
        if arr.shape[-1] != self.dim:
            raise ConfigError("point dimension does not match the body")
        return np.linalg.norm(arr - self.center, axis=-1) - self.radius

    def support(self, c: np.ndarray) -> float:
        cv = np.asarray(c, dtype=float)
        return float(cv @ self.center + self.radius * np.linalg.norm(cv))

    def bounding_radius(self) -> float:
        return float(np.linalg.norm(self.center) + self.radius)

    def deepest_point(self) -> tuple[np.ndarray, float]:
        return self.center.copy(), -self.radius

    def project(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        gap = x - self.center
        norm = float(np.linalg.norm(gap))
        if norm <= self.radius:
            return x.copy()
        return self.center + gap * (self.radius / norm)

    def scale(self, s: float) -> "Ball":
        if s <= 0.0:
            raise ConfigError("scaling factor must be positive")
        return Ball(self.center * s, self.radius * s)

    def relax(self, delta: float) -> "Ball":
        if self.radius + delta <= 0.0:
            raise ConfigError("relaxation would empty the ball")
        return Ball(self.center, self.radius + delta)

    def feasible_pair(self, r: float, delta: float) -> tuple[bool, np.ndarray | None]:
        # y must lie in B(c, rho + delta) and in B(c / r, (rho + delta) / r).
        rho = self.radius + delta
        c1, c2 = self.center, self.center / r
        gap = float(np.linalg.norm(c1 - c2))
        if gap > rho + rho / r + _FEAS_SLACK:
            return False, None
        if gap == 0.0:
            return True, c1.copy()
        t_lo = max(0.0, 1.0 - (rho / r) / gap)
        t_hi = min(1.0, rho / gap)
        t = 0.5 * (t_lo + t_hi)
        return True, c1 + t * (c2 - c1)


# ---------------------------------------------------------------------------
# gauge and radial slices
# ---------------------------------------------------------------------------


def h_value(body: ConvexBody, x) -> float | np.ndarray:
    """Convex gauge of ``body`` at ``x`` (negative inside, positive outside)."""
    val = body.h_value(np.asarray(x, dtype=float))
    return float(val) if np.ndim(val) == 0 else val


@dataclass(frozen=True)
class RadialSlice:
    """Entry/exit radii of a ray ``r * phi`` through the body."""

    phi: tuple[float, ...]
    lower: float
    upper: float
    present: bool

    @property
    def ratio(self) -> float:
        if not self.present:
            raise ConfigError("ray misses the body; no radial ratio")
        return self.upper / self.lower


def _golden_min(fun, lo: float, hi: float, tol: float) -> tuple[float, float]:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
    x = 0.5 * (a + b)
    return x, fun(x)


def _bisect_root(fun, lo: float, hi: float, tol: float) -> float:
    # fun(lo) and fun(hi) must have opposite signs, fun convex along the ray.
    flo = fun(lo)
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        fm = fun(mid)
        if (fm <= 0.0) == (flo <= 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def radial_bounds(body: ConvexBody, phi, tol: float = 1e-10) -> RadialSlice:
    """Entry and exit radii along direction ``phi`` by convex bisection."""
    phi_v = np.asarray(phi, dtype=float)
    norm = float(np.linalg.norm(phi_v))
    if norm == 0.0:
        raise ConfigError("direction must be nonzero")
    phi_v = phi_v / norm
    r_hi = body.bounding_radius() + 1.0

    def g(r: float) -> float:
        return float(body.h_value(r * phi_v))

    r0, gmin = _golden_min(g, 0.0, r_hi, tol * 0.25)
    key = tuple(float(v) for v in phi_v)
    if gmin > 0.0:
        return RadialSlice(phi=key, lower=math.nan, upper=math.nan, present=False)
    lower = _bisect_root(g, 0.0, r0, tol)
    upper = r_hi - _bisect_root(lambda r: g(r_hi - r), 0.0, r_hi - r0, tol)
    return RadialSlice(phi=key, lower=lower, upper=upper, present=True)


# ---------------------------------------------------------------------------
# the radial-ratio program
# ---------------------------------------------------------------------------


def _feasible_polyak(body: ConvexBody, r: float, delta: float, max_iter: int = 5000) -> tuple[bool, np.ndarray | None]:
    """Generic inner feasibility via Polyak-step subgradient descent.

    Minimises ``g(y) = max(H(y), H(r y)) - delta`` toward target 0 starting
    from the deepest point.  Feasible when the target is reached within the
    iteration budget; used for bodies without an exact inner solver and as
    a cross-check on the exact paths.
    """
    y, _ = body.deepest_point()
    y = y.astype(float)
    eps = 1e-12

    def value_and_subgrad(yv: np.ndarray) -> tuple[float, np.ndarray]:
        h1 = float(body.h_value(yv))
        h2 = float(body.h_value(r * yv))
        if h1 >= h2:
            grad = _numeric_subgrad(body, yv)
            return h1 - delta, grad
        grad = r * _numeric_subgrad(body, r * yv)
        return h2 - delta, grad

    best = math.inf
    for _ in range(max_iter):
        val, grad = value_and_subgrad(y)
        best = min(best, val)
        if val <= _FEAS_SLACK:
            return True, y
        gn = float(grad @ grad)
        if gn < eps:
            break
        y = y - (val / gn) * grad
    return False, None


def _numeric_subgrad(body: ConvexBody, x: np.ndarray, h: float = 1e-7) -> np.ndarray:
    if isinstance(body, Polytope):
        vals = x @ body.normals.T + body.offsets
        return body.normals[int(np.argmax(vals))]
    if isinstance(body, Ball):
        gap = x - body.center
        n = float(np.linalg.norm(gap))
        return gap / n if n > 0 else np.zeros(body.dim)
    grad = np.zeros_like(x)
    f0 = float(body.h_value(x))
    for j in range(x.size):
        step = np.zeros_like(x)
        step[j] = h
        grad[j] = (float(body.h_value(x + step)) - f0) / h
    return grad


def r_star(
    body: ConvexBody,
    delta: float = 0.0,
    tol: float = 1e-8,
    method: str = "auto",
) -> tuple[float, np.ndarray]:
    """Optimal radial expansion ratio ``r_delta`` with a witness point.

    Parameters
    ----------
    body : ConvexBody
        Validated target set.
    delta : float
        Relaxation level; ``delta = 0`` gives ``r_star`` itself.  Must stay
        below ``H(0)`` so the relaxed set still avoids the origin.
    tol : float
        Bisection tolerance on ``r``.
    method : str
        ``auto`` uses the exact inner solver of the body; ``subgradient``
        forces the Polyak fallback.

    Returns
    -------
    (r, y) : float and ndarray
        The supremal ratio and a witness with ``H(y) <= delta`` and
        ``H(r y) <= delta`` (up to the bisection tolerance).
    """
    if delta < 0.0:
        raise ConfigError("delta must be non-negative")
    h0 = float(body.h_value(np.zeros(body.dim)))
    if delta >= h0:
        raise ConfigError("delta must stay below H(0) so the relaxed set avoids the origin")

    if body.dim == 1 and method == "auto":
        seg = _segment_1d(body, delta)
        if seg is not None:
            lo1, hi1 = seg
            sign = 1.0
            if hi1 < 0.0:
                sign, lo1, hi1 = -1.0, -hi1, -lo1
            # Origin avoidance makes lo1 > 0; the ratio is exact, no bisection.
            return hi1 / lo1, np.array([sign * lo1])

    if method == "subgradient" or not hasattr(body, "feasible_pair"):
        def feas(r: float) -> tuple[bool, np.ndarray | None]:
            return _feasible_polyak(body, r, delta)
    elif method == "auto":
        def feas(r: float) -> tuple[bool, np.ndarray | None]:
            return body.feasible_pair(r, delta)
    else:
        raise ConfigError("method must be 'auto' or 'subgradient'")

    relaxed = body.relax(delta) if delta > 0.0 else body
    r_out = relaxed.bounding_radius()
    origin_gap = float(np.linalg.norm(_project_generic(relaxed, np.zeros(body.dim))))
    hi = r_out / max(origin_gap, 1e-12) + 1.0
    lo = 1.0
    ok, witness = feas(lo)
    if not ok:
        raise ConfigError("body infeasible at ratio 1; invariants violated")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        ok, y = feas(mid)
        if ok:
            lo, witness = mid, y
        else:
            hi = mid
    return lo, np.asarray(witness, dtype=float)


def _segment_1d(body: ConvexBody, delta: float) -> tuple[float, float] | None:
    """Exact endpoints of a relaxed one-dimensional body, when algebraic."""
    if isinstance(body, Polytope):
        lo, hi = -math.inf, math.inf
        for a, off in zip(body.normals[:, 0], body.offsets):
            if a > 0.0:
                hi = min(hi, (delta - off) / a)
            elif a < 0.0:
                lo = max(lo, (delta - off) / a)
        return (lo, hi) if math.isfinite(lo) and math.isfinite(hi) else None
    if isinstance(body, Ball):
        c = float(body.center[0])
        rho = body.radius + delta
        return c - rho, c + rho
    return None


def _project_generic(body: ConvexBody, x: np.ndarray) -> np.ndarray:
    if hasattr(body, "project"):
        return body.project(x)
    raise ConfigError("body does not support projection")


def persistence_exponent(r: float, alpha: float) -> float:
    """Decay exponent ``(alpha - 1) / (2 log r)`` of the persistence law."""
    if not (alpha > 1.0):
        raise ConfigError("alpha must exceed 1")
    if r <= 1.0:
        raise ConfigError("the radial ratio must exceed 1 for a finite exponent")
    return (alpha - 1.0) / (2.0 * math.log(r))


def nonstandard_exponent(intervals) -> float:
    """Exponent for independent components in a product of intervals.

    ``intervals`` is a sequence of ``(a_j, b_j, alpha_j)`` triples; the
    exponent is ``0.5 * sum_j (alpha_j - 1) / (log b_j - log a_j)``.
    """
    total = 0.0
    for a, b, alpha in intervals:
        if not (0.0 < a < b):
            raise ConfigError("each interval must satisfy 0 < a < b")
        if not (alpha > 1.0):
            raise ConfigError("each component tail index must exceed 1")
        total += (alpha - 1.0) / (math.log(b) - math.log(a))
    return 0.5 * total


# ---------------------------------------------------------------------------
# projections of the body onto directions
# ---------------------------------------------------------------------------


def projection_interval(body: ConvexBody, c) -> tuple[float, float]:
    """Shadow ``[min <c,x>, max <c,x>]`` of the body along unit direction ``c``."""
    cv = np.asarray(c, dtype=float)
    norm = float(np.linalg.norm(cv))
    if norm == 0.0:
        raise ConfigError("direction must be nonzero")
    cv = cv / norm
    return -body.support(-cv), body.support(cv)


def _direction_grid(dim: int, density: int) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        theta = np.linspace(0.0, 2.0 * math.pi, density, endpoint=False)
        return np.column_stack([np.cos(theta), np.sin(theta)])
    if dim == 3:
        # Fibonacci sphere covering.
        i = np.arange(density, dtype=float) + 0.5
        phi = math.pi * (3.0 - math.sqrt(5.0)) * i
        z = 1.0 - 2.0 * i / density
        rad = np.sqrt(np.clip(1.0 - z * z, 0.0, 1.0))
        return np.column_stack([rad * np.cos(phi), rad * np.sin(phi), z])
    raise ConfigError("direction grids are provided for dimension <= 3")


def _log_ratio(body: ConvexBody, c: np.ndarray) -> float:
    a, b = projection_interval(body, c)
    if a <= 1e-12:
        return math.inf
    return math.log(b) - math.log(a)


def projection_exponent_bound(
    body: ConvexBody,
    alpha: float,
    grid_density: int = 1440,
    directions=None,
    refine: bool = True,
) -> tuple[float, np.ndarray]:
    """Best one-dimensional shadow exponent over a direction grid.

    For each unit ``c`` whose shadow stays positive, the projected walk is
    a valid one-dimensional persistence problem with exponent
    ``(alpha - 1) / (2 (log b(c) - log a(c)))``; the supremum over ``c``
    lower-bounds the true exponent.  Returns the bound and the maximising
    direction.  Pass ``directions`` to restrict the search (the proof bench
    uses this to audit the radially optimal directions).
    """
    if not (alpha > 1.0):
        raise ConfigError("alpha must exceed 1")
    dirs = np.asarray(directions, dtype=float) if directions is not None else _direction_grid(body.dim, grid_density)
    if dirs.ndim == 1:
        dirs = dirs[None, :]
    best = math.inf
    best_c = None
    for c in dirs:
        val = _log_ratio(body, c)
        if val < best:
            best, best_c = val, c
    if best_c is None or not math.isfinite(best):
        raise ConfigError("no direction has a positive shadow; bound undefined")
    if refine and body.dim == 2 and directions is None:
        theta0 = math.atan2(best_c[1], best_c[0])
        width = 2.0 * math.pi / dirs.shape[0]

        def f(t: float) -> float:
            return _log_ratio(body, np.array([math.cos(t), math.sin(t)]))

        t_best, v_best = _golden_min(f, theta0 - width, theta0 + width, 1e-12)
        if v_best < best:
            best = v_best
            best_c = np.array([math.cos(t_best), math.sin(t_best)])
    return (alpha - 1.0) / (2.0 * best), np.asarray(best_c)


# ---------------------------------------------------------------------------
# distances between scaled copies
# ---------------------------------------------------------------------------


def set_distance(body_a: ConvexBody, body_b: ConvexBody, tol: float = 1e-9, max_iter: int = 100000) -> float:
    """Euclidean distance between two convex bodies by alternating projections."""
    x, _ = body_a.deepest_point()
    x = x.astype(float)
    prev = None
    for _ in range(max_iter):
        y = body_b.project(x)
        x_new = body_a.project(y)
        move = float(np.linalg.norm(x_new - x))
        x = x_new
        d = float(np.linalg.norm(x - y))
        if prev is not None and abs(d - prev) < tol and move < tol * (1.0 + np.linalg.norm(x)):
            return d
        prev = d
    return prev if prev is not None else 0.0


def scaled_gap_ratio(body: ConvexBody, q: float, tol: float = 1e-9) -> float:
    """``dist(u A, u q A) / u`` for any ``u > 0``, computed scale-free.

    By homogeneity this equals ``dist(A, q A)``, so consecutive levels of a
    geometric schedule can be audited without forming huge scaled bodies.
    """
    if q <= 0.0:
        raise ConfigError("scale ratio must be positive")
    return set_distance(body, body.scale(q), tol=tol)


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentReport:
    """Everything the exponent pipeline knows about one body/alpha pair."""

    alpha: float
    r_star: float
    phi_star: tuple[float, ...]
    exponent: float
    delta_curve: tuple[tuple[float, float], ...]
    projection_bound: float
    projection_direction: tuple[float, ...]


def exponent_report(
    body: ConvexBody,
    alpha: float,
    deltas=(1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6),
    tol: float = 1e-9,
    grid_density: int = 1440,
) -> ExponentReport:
    """Solve the radial program, its relaxation curve, and the shadow bound."""
    r0, witness = r_star(body, 0.0, tol=tol)
    norm = float(np.linalg.norm(witness))
    phi = witness / norm if norm > 0 else witness
    curve = []
    h0 = float(body.h_value(np.zeros(body.dim)))
    for d in sorted(deltas, reverse=True):
        if d >= h0:
            raise ConfigError("delta grid must stay below H(0)")
        rd, _ = r_star(body, d, tol=tol)
        curve.append((float(d), float(rd)))
    bound, c_best = projection_exponent_bound(body, alpha, grid_density=grid_density)
    return ExponentReport(
        alpha=float(alpha),
        r_star=float(r0),
        phi_star=tuple(float(v) for v in phi),
        exponent=persistence_exponent(r0, alpha),
        delta_curve=tuple(curve),
        projection_bound=float(bound),
        projection_direction=tuple(float(v) for v in c_best),
    )
