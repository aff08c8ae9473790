"""Matplotlib renderings of the CSV artifacts the CLI emits.

Every function draws one figure and writes it as a PNG next to the
delimited data, so a report directory is self-contained.  The Agg
backend is forced before pyplot is imported and the PNG metadata is
stripped, which keeps the bytes reproducible run to run; the manifest
hashes rely on that.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg", force=True)

import matplotlib.pyplot as plt
import numpy as np

from .bench import CheckReport
from .engine import ExponentFit
from .geometry import ExponentReport
from .skeleton import OptimalPathSkeleton, height_at

__all__ = [
    "delta_curve_png",
    "estimates_png",
    "levels_png",
    "skeleton_png",
    "checks_png",
    "samples_png",
]

_DPI = 110


def _save(fig, path: str) -> None:
    fig.savefig(path, dpi=_DPI, metadata={"Software": None})
    plt.close(fig)


def delta_curve_png(report: ExponentReport, path: str) -> None:
    """Relaxed ratio r_delta against delta, with the exact limit marked."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if report.delta_curve:
        deltas = [d for d, _ in report.delta_curve]
        ratios = [r for _, r in report.delta_curve]
        ax.semilogx(deltas, ratios, "o-", color="#1f6fb2", label="relaxed ratio")
    ax.axhline(report.r_star, color="#b23a1f", linestyle="--", label="exact ratio")
    ax.set_xlabel("relaxation delta")
    ax.set_ylabel("radial expansion ratio")
    ax.set_title(f"exponent {report.exponent:.6g} at alpha {report.alpha:g}")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def estimates_png(
    n_values,
    log_p,
    se,
    fit: ExponentFit | None,
    theory_phi: float | None,
    path: str,
) -> None:
    """log survival probability against (log n)^2 with the fitted trend.

    The theory line reuses the fitted linear and constant terms so the
    comparison isolates the quadratic coefficient.
    """
    n_arr = np.asarray(list(n_values), dtype=float)
    y = np.asarray(list(log_p), dtype=float)
    x = np.log(n_arr) ** 2
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.errorbar(x, y, yerr=np.asarray(list(se), dtype=float), fmt="o", color="#1f6fb2", label="splitting estimate")
    if fit is not None:
        ln = np.linspace(math.log(n_arr.min()), math.log(n_arr.max()), 200)
        ax.plot(ln**2, fit.slope * ln**2 + fit.linear_coef * ln + fit.intercept, "-", color="#2a8a4a", label=f"fit slope {fit.slope:.4f}")
        if theory_phi is not None and math.isfinite(theory_phi):
            ax.plot(ln**2, -theory_phi * ln**2 + fit.linear_coef * ln + fit.intercept, "--", color="#b23a1f", label=f"theory slope {-theory_phi:.4f}")
    ax.set_xlabel("(log n)^2")
    ax.set_ylabel("log estimate")
    ax.set_title("persistence decay")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def levels_png(levels, fractions, path: str) -> None:
    """Pooled per-level passage fractions along the splitting ladder."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogx(list(levels), list(fractions), "o-", color="#1f6fb2")
    ax.set_ylim(0.0, 1.05)
    ax.set_xlabel("level time")
    ax.set_ylabel("passage fraction")
    ax.set_title("conditional passage per level")
    fig.tight_layout()
    _save(fig, path)


def skeleton_png(skel: OptimalPathSkeleton, path: str, points: int = 400) -> None:
    """Staircase envelope on log-log axes with the admissible corridor."""
    ks = sorted(
        {skel.c1, skel.horizon}
        | {int(round(v)) for v in np.geomspace(skel.c1, skel.horizon, points)}
        | {t for t in skel.jump_times}
        | {t - 1 for t in skel.jump_times if t - 1 >= skel.c1}
    )
    hs = [height_at(skel, k) for k in ks]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(ks, hs, drawstyle="steps-post", color="#1f6fb2", label="skeleton height")
    k_arr = np.asarray(ks, dtype=float)
    ax.loglog(k_arr, skel.a * k_arr, ":", color="#777777", label="lower corridor")
    ax.loglog(k_arr, skel.b * k_arr, ":", color="#b23a1f", label="upper corridor")
    ax.set_xlabel("time k")
    ax.set_ylabel("height")
    ax.set_title(f"{skel.k_n} jumps up to n = {skel.horizon}")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def checks_png(reports: list[CheckReport], path: str) -> None:
    """One bar per check, signed margin, colored by verdict."""
    fig, ax = plt.subplots(figsize=(6.5, 1.2 + 0.55 * max(len(reports), 1)))
    names = [r.name for r in reports]
    margins = [r.margin if math.isfinite(r.margin) else 0.0 for r in reports]
    colors = ["#2a8a4a" if r.passed else "#b23a1f" for r in reports]
    ypos = np.arange(len(reports))
    ax.barh(ypos, margins, color=colors)
    ax.axvline(0.0, color="#333333", linewidth=0.8)
    ax.set_yticks(ypos, names)
    ax.invert_yaxis()
    ax.set_xlabel("margin")
    ax.set_title("audit margins")
    fig.tight_layout()
    _save(fig, path)


def samples_png(steps: np.ndarray, alpha: float, path: str) -> None:
    """Empirical radial tail of the centered steps on log-log axes."""
    arr = np.asarray(steps, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    norms = np.sort(np.linalg.norm(arr, axis=1))
    n = norms.shape[0]
    surv = 1.0 - (np.arange(n) + 0.5) / n
    keep = norms > 0
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(norms[keep], surv[keep], ".", markersize=2.5, color="#1f6fb2", label="empirical tail")
    # Reference slope anchored at the 90th percentile.
    t0 = float(np.quantile(norms, 0.9))
    s0 = 0.1
    ts = np.geomspace(t0, norms[-1], 50)
    ax.loglog(ts, s0 * (ts / t0) ** (-alpha), "--", color="#b23a1f", label=f"slope -{alpha:g}")
    ax.set_xlabel("radius")
    ax.set_ylabel("survival")
    ax.set_title(f"{n} steps")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)
