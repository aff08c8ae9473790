"""Command line front end.

One binary, five subcommands mirroring the library layers:

``exponent``
    Solve the radial program for a body, report the decay exponent, the
    relaxation curve and the best one-dimensional shadow bound.
``estimate``
    Run splitting (or direct Monte Carlo) over a horizon grid and fit
    the decay exponent from the curve.
``path``
    Build the staircase skeleton and export it with its jump atoms.
``bench``
    Run the constructive audits and write one verdict row per check.
``sample``
    Draw a reproducible batch of centered steps.

Every run writes its artifacts into one output directory, renders a PNG
next to each CSV, and finishes with ``manifest.json`` listing a content
hash per file; the manifest is written even when the run fails.  Exit
codes: 0 success, 2 configuration error, 3 violated hypothesis, 4
estimation breakdown.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import importlib.metadata
import json
import math
import os
import sys
import time

import numpy as np

from . import bench as bench_mod
from .config import (
    ExperimentConfig,
    angular_is_atomic,
    build_body,
    build_model,
    load_document,
    model_alpha,
    parse_document,
)
from .engine import (
    direct_mc,
    exponent_fit,
    make_schedule,
    splitting_estimate,
)
from .errors import ConfigError, EstimationError, HypothesisError
from .figures import (
    checks_png,
    delta_curve_png,
    estimates_png,
    levels_png,
    samples_png,
    skeleton_png,
)
from .geometry import (
    exponent_report,
    nonstandard_exponent,
    persistence_exponent,
    r_star,
)
from .rng import derive_seed_sequence
from .sampler import sample_batch
from .skeleton import build_skeleton, cost_heuristic, height_at, skeleton_as_measure

__all__ = ["main"]

try:
    _VERSION = importlib.metadata.version("persistlab")
except importlib.metadata.PackageNotFoundError:
    _VERSION = "0.0.0+local"

_EXIT_CODES = {ConfigError: 2, HypothesisError: 3, EstimationError: 4}
_STATUS = {ConfigError: "config-error", HypothesisError: "hypothesis-error", EstimationError: "estimation-error"}


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def _child_seed(master_seed: int, *path) -> int:
    return int(derive_seed_sequence(master_seed, *path).generate_state(1)[0])


class OutputDir:
    """Collects artifacts under one root and refuses paths that escape it."""

    def __init__(self, root: str):
        self.root = os.path.abspath(root)
        os.makedirs(self.root, exist_ok=True)
        self.written: list[str] = []

    def path(self, name: str) -> str:
        full = os.path.abspath(os.path.join(self.root, name))
        if full != self.root and not full.startswith(self.root + os.sep):
            raise ConfigError(f"output file escapes the output directory: {name}")
        parent = os.path.dirname(full)
        if parent:
            os.makedirs(parent, exist_ok=True)
        return full

    def write_csv(self, name: str, header, rows) -> None:
        full = self.path(name)
        with open(full, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(list(header))
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
        self.written.append(name)

    def write_figure(self, name: str, draw) -> None:
        draw(self.path(name))
        self.written.append(name)

    def output_records(self) -> list[dict]:
        records = []
        for name in self.written:
            full = self.path(name)
            with open(full, "rb") as fh:
                data = fh.read()
            records.append(
                {"path": name, "sha256": hashlib.sha256(data).hexdigest(), "bytes": len(data)}
            )
        return records


# ---------------------------------------------------------------------------
# exponent
# ---------------------------------------------------------------------------


def _require(cfg: ExperimentConfig, what: str):
    value = getattr(cfg, what)
    if value is None:
        raise ConfigError(f"this command needs a {what} block in the config")
    return value


def _body_for(cfg: ExperimentConfig, hypothesis: bool = False):
    """Build the target set; optionally reframe invariant failures.

    The exponent command treats 'origin outside' and 'non-empty interior'
    as standing hypotheses rather than configuration mistakes.
    """
    spec = _require(cfg, "body")
    if not hypothesis:
        return build_body(spec)
    try:
        return build_body(spec)
    except ConfigError as exc:
        msg = str(exc)
        if "origin" in msg or "interior" in msg:
            raise HypothesisError(f"hypothesis violated: {msg}")
        raise


def cmd_exponent(cfg: ExperimentConfig, out: OutputDir) -> None:
    model_spec = _require(cfg, "model")
    alpha = model_alpha(model_spec)
    if not (alpha > 1.0):
        raise HypothesisError(
            f"hypothesis violated: the tail index must exceed 1 so steps have a finite mean; got alpha = {alpha:g}"
        )
    if angular_is_atomic(model_spec):
        print(
            "warning: the angular law has atoms, so the smooth-direction hypothesis "
            "behind the radial exponent formula is unmet. Axis-aligned atomic laws "
            "factor into independent coordinates; use mode nonstandard-product, whose "
            "product-form exponent is exact.",
            file=sys.stderr,
        )
    body = _body_for(cfg, hypothesis=True)
    block = cfg.block("exponent")
    kwargs = {}
    if block.get("deltas") is not None:
        kwargs["deltas"] = tuple(float(v) for v in block["deltas"])
    if block.get("tol") is not None:
        kwargs["tol"] = float(block["tol"])
    if block.get("grid_density") is not None:
        kwargs["grid_density"] = int(block["grid_density"])
    report = exponent_report(body, alpha, **kwargs)

    product_mode = bool(model_spec.get("components"))
    if product_mode:
        body_spec = cfg.body or {}
        if body_spec.get("type") != "box":
            raise HypothesisError(
                "hypothesis violated: the product-form exponent needs an axis-aligned box target"
            )
        triples = [
            (float(lo), float(hi), float(c["alpha"]))
            for lo, hi, c in zip(body_spec["lo"], body_spec["hi"], model_spec["components"])
        ]
        exponent = nonstandard_exponent(triples)
        formula = "product"
    else:
        exponent = report.exponent
        formula = "radial"

    out.write_csv(
        "exponent.csv",
        ["alpha", "r_star", "exponent", "formula", "projection_bound", "projection_gap", "phi_star", "projection_direction"],
        [
            [
                alpha,
                report.r_star,
                exponent,
                formula,
                report.projection_bound,
                exponent - report.projection_bound,
                json.dumps(list(report.phi_star)),
                json.dumps(list(report.projection_direction)),
            ]
        ],
    )
    out.write_csv("delta_curve.csv", ["delta", "r_delta"], [[d, r] for d, r in report.delta_curve])
    out.write_figure("exponent.png", lambda p: delta_curve_png(report, p))


# ---------------------------------------------------------------------------
# estimate
# ---------------------------------------------------------------------------


def _theory_phi(cfg: ExperimentConfig, r0: float, alpha: float) -> float:
    if cfg.model and cfg.model.get("components"):
        body_spec = cfg.body or {}
        if body_spec.get("type") == "box":
            triples = [
                (float(lo), float(hi), float(c["alpha"]))
                for lo, hi, c in zip(body_spec["lo"], body_spec["hi"], cfg.model["components"])
            ]
            return nonstandard_exponent(triples)
        return math.nan
    return persistence_exponent(r0, alpha)


def cmd_estimate(cfg: ExperimentConfig, out: OutputDir) -> None:
    model = build_model(_require(cfg, "model"))
    body = _body_for(cfg)
    block = cfg.block("estimate")
    n_grid = block.get("n_grid")
    if not n_grid:
        raise ConfigError("estimate.n_grid must be a non-empty list of horizons")
    n_grid = sorted(int(n) for n in n_grid)
    method = block.get("method", "splitting")
    r0, _ = r_star(body)

    if method == "splitting":
        effort = int(block.get("effort", 2000))
        macro = int(block.get("macro_reps", 10))
        sched_block = block.get("schedule") or {}
        kind = sched_block.get("kind", "u")
        r_ref = float(sched_block.get("r_ref", r0))
        growth = (1.0 + float(sched_block.get("eta", 0.0))) * r_ref if kind == "u" else None
        default_c1 = int(math.floor(2.0 + 1.0 / (growth - 1.0))) + 1 if kind == "u" and growth > 1.0 else 1
        c1 = int(sched_block.get("c1", default_c1))
        results = []
        for n in n_grid:
            schedule = make_schedule(
                kind,
                r_ref,
                n,
                c1,
                eta=float(sched_block.get("eta", 0.0)) if kind == "u" else None,
                rho=float(sched_block["rho"]) if kind == "m" else None,
            )
            results.append(
                splitting_estimate(
                    model,
                    body,
                    n,
                    schedule,
                    effort,
                    _child_seed(cfg.master_seed, "estimate", n),
                    macro_reps=macro,
                    workers=cfg.workers,
                )
            )
        ladder = results[-1]
        survivors = [round(f * ladder.effort * ladder.macro_reps) for f in ladder.per_level_fraction]
        out.write_csv(
            "levels.csv",
            ["i", "u_i", "fraction", "survivors"],
            [
                [i + 1, lvl, frac, surv]
                for i, (lvl, frac, surv) in enumerate(
                    zip(ladder.levels, ladder.per_level_fraction, survivors)
                )
            ],
        )
        logs = [res.log_estimate for res in results]
        ses = [res.std_error_log for res in results]
        level_points = list(zip(ladder.levels, ladder.per_level_fraction))
    elif method == "direct":
        reps = int(block.get("reps", 100000))
        result = direct_mc(model, body, n_grid, reps, cfg.master_seed, workers=cfg.workers)
        # Conditional passage between consecutive horizons; counts are
        # monotone because one population is advanced through the grid.
        rows = []
        prev = reps
        for i, (n, count) in enumerate(zip(result.n_grid, result.counts)):
            frac = count / prev if prev > 0 else 0.0
            rows.append([i + 1, n, frac, count])
            prev = count
        out.write_csv("levels.csv", ["i", "u_i", "fraction", "survivors"], rows)
        logs = [math.log(p) if p > 0.0 else -math.inf for p in result.estimates]
        ses = [
            (se / p if p > 0.0 else math.inf)
            for p, se in zip(result.estimates, result.std_errors)
        ]
        level_points = [(n, c / reps) for n, c in zip(result.n_grid, result.counts)]
    else:
        raise ConfigError("estimate.method must be 'splitting' or 'direct'")

    out.write_csv("estimates.csv", ["n", "log_p", "se"], [[n, lp, se] for n, lp, se in zip(n_grid, logs, ses)])
    theory = _theory_phi(cfg, r0, model.alpha)
    fit = exponent_fit(n_grid, logs) if len(n_grid) >= 4 else None
    out.write_csv(
        "fit.csv",
        ["slope", "se", "r2", "theory_phi"],
        [[fit.slope, fit.slope_se, fit.r2, theory] if fit else [math.nan, math.nan, math.nan, theory]],
    )
    out.write_figure("estimates.png", lambda p: estimates_png(n_grid, logs, ses, fit, theory, p))
    out.write_figure(
        "levels.png",
        lambda p: levels_png([pt[0] for pt in level_points], [pt[1] for pt in level_points], p),
    )


# ---------------------------------------------------------------------------
# path
# ---------------------------------------------------------------------------


def cmd_path(cfg: ExperimentConfig, out: OutputDir) -> None:
    block = cfg.block("path")
    a, b = block.get("a"), block.get("b")
    if (a is None or b is None) and cfg.body and cfg.body.get("type") == "box":
        lo, hi = cfg.body.get("lo"), cfg.body.get("hi")
        if isinstance(lo, list) and len(lo) == 1:
            a = lo[0] if a is None else a
            b = hi[0] if b is None else b
    if a is None or b is None:
        raise ConfigError("path needs corridor bounds a and b (or a one-dimensional box body)")
    if "c1" not in block or "n" not in block:
        raise ConfigError("path needs the start level c1 and the horizon n")
    skel = build_skeleton(a, b, int(block["c1"]), int(block["n"]))
    points = int(block.get("points", 200))

    ks = sorted(
        {skel.c1, skel.horizon}
        | {int(round(v)) for v in np.geomspace(skel.c1, skel.horizon, points)}
        | set(skel.jump_times)
        | {t - 1 for t in skel.jump_times if t - 1 >= skel.c1}
    )
    out.write_csv("skeleton.csv", ["k", "height"], [[k, float(height_at(skel, k))] for k in ks])
    out.write_csv(
        "atoms.csv",
        ["i", "t_i", "jump"],
        [[i + 1, t, float(j)] for i, (t, j) in enumerate(skeleton_as_measure(skel))],
    )
    out.write_csv(
        "summary.csv",
        ["a", "b", "c1", "n", "jump_count", "cost_alpha_1_5"],
        [[skel.a, skel.b, skel.c1, skel.horizon, skel.k_n, cost_heuristic(skel, 1.5)]],
    )
    out.write_figure("skeleton.png", lambda p: skeleton_png(skel, p))


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def _segment_setup(cfg: ExperimentConfig, block: dict):
    body = _body_for(cfg)
    epsilon = float(block.get("epsilon", 0.1))
    inner = bench_mod.build_inner_cuboid(body, epsilon)
    alpha0 = block.get("alpha0")
    if alpha0 is None:
        if cfg.model is None:
            raise ConfigError("this check needs alpha0, either explicitly or via a model block")
        alpha0 = min(model_alpha(cfg.model), 2.0)
    params = bench_mod.SegmentParams(
        epsilon=epsilon,
        rho=float(block.get("rho", 0.05)),
        delta=float(block.get("delta", 0.1)),
        alpha0=float(alpha0),
        c1=int(block.get("c1", 1)),
        r_eps=inner.r_eps,
    )
    return inner, params


def _run_inclusions(cfg: ExperimentConfig, block: dict):
    inner, params = _segment_setup(cfg, block)
    i_start = block.get("i_start")
    if i_start is None:
        i_start = bench_mod.first_valid_index(params, inner)
    i_count = int(block.get("i_count", 30))
    report = bench_mod.check_lemma_inclusions(range(int(i_start), int(i_start) + i_count), params, inner)
    return report.as_report()


def _run_distance(cfg: ExperimentConfig, block: dict):
    body = _body_for(cfg)
    r_ref = block.get("r_ref")
    r_ref = float(r_ref) if r_ref is not None else None
    eta = float(block.get("eta", 0.0))
    if block.get("c1") is not None:
        c1 = int(block["c1"])
    else:
        ratio = r_ref if r_ref is not None else r_star(body)[0]
        growth = (1.0 + eta) * ratio
        if growth <= 1.0:
            raise ConfigError("(1 + eta) * r_ref must exceed 1")
        c1 = int(math.floor(2.0 + 1.0 / (growth - 1.0))) + 1
    i_start = int(block.get("i_start", 1))
    i_count = int(block.get("i_count", 40))
    report = bench_mod.check_distance_claim(body, eta, c1, range(i_start, i_start + i_count), r_ref=r_ref)
    return report.as_report()


def _model_for(cfg: ExperimentConfig, block: dict):
    """Step law for a Monte Carlo check: per-check override, else shared."""
    spec = block.get("model") or cfg.model
    if spec is None:
        raise ConfigError("this check needs a model, either in the check block or at the top level")
    return build_model(spec)


def _run_fluctuation(cfg: ExperimentConfig, block: dict, seed: int):
    model = _model_for(cfg, block)
    inner, params = _segment_setup(cfg, block)
    frame = inner.cuboid.frame_array() if model.dimension == inner.cuboid.dim else None
    report = bench_mod.check_fluctuation(
        model,
        params,
        int(block.get("i", 12)),
        int(block.get("reps", 2000)),
        seed,
        frame=frame,
        window_exponent=(
            float(block["window_exponent"]) if block.get("window_exponent") is not None else None
        ),
    )
    return report.as_report()


def _run_kolmogorov(cfg: ExperimentConfig, block: dict, seed: int):
    model = _model_for(cfg, block)
    m = int(block.get("m", 10000))
    x = float(block.get("x", m**0.75))
    report = bench_mod.check_kolmogorov(
        model,
        m,
        x,
        int(block.get("reps", 4000)),
        seed,
        slope_of=str(block.get("slope_of", "shape")),
    )
    return report.as_report()


def _run_directed(cfg: ExperimentConfig, block: dict, seed: int):
    model = _model_for(cfg, block)
    u = block.get("u")
    if u is None:
        u = [1.0] + [0.0] * (model.dimension - 1)
    report = bench_mod.check_directed_rv(
        model,
        u,
        int(block.get("reps", 200000)),
        seed,
        hill_k=int(block["hill_k"]) if block.get("hill_k") is not None else None,
    )
    return report.as_report()


def _run_hlms(cfg: ExperimentConfig, block: dict, seed: int):
    model = _model_for(cfg, block)
    n_grid = [int(v) for v in block.get("n_grid", (100, 200, 400))]
    report = bench_mod.check_hlms_ratio(
        model,
        n_grid,
        int(block.get("reps", 60000)),
        seed,
        threshold=float(block.get("threshold", 1.0)),
        scale=float(block.get("scale", 2.0)),
    )
    return report.as_report()


def _run_projection(cfg: ExperimentConfig, block: dict, seed: int):
    model = _model_for(cfg, block)
    body = _body_for(cfg)
    direction = block.get("direction")
    report = bench_mod.projection_bound_audit(
        body,
        model.alpha,
        model,
        int(block.get("n", 100)),
        int(block.get("reps", 30000)),
        seed,
        direction=direction,
    )
    return report.as_report()


def cmd_bench(cfg: ExperimentConfig, out: OutputDir) -> None:
    block = cfg.block("bench")
    checks = block.get("checks")
    if not checks:
        raise ConfigError("bench needs a checks list; known checks: directed, distance, fluctuation, hlms, inclusions, kolmogorov, projection")
    reports = []
    for name in checks:
        sub = block.get(name) or {}
        seed = cfg.master_seed
        if name == "inclusions":
            reports.append(_run_inclusions(cfg, sub))
        elif name == "distance":
            reports.append(_run_distance(cfg, sub))
        elif name == "fluctuation":
            reports.append(_run_fluctuation(cfg, sub, seed))
        elif name == "kolmogorov":
            reports.append(_run_kolmogorov(cfg, sub, seed))
        elif name == "directed":
            reports.append(_run_directed(cfg, sub, seed))
        elif name == "hlms":
            reports.append(_run_hlms(cfg, sub, seed))
        elif name == "projection":
            reports.append(_run_projection(cfg, sub, seed))
        else:
            raise ConfigError(f"unknown check name {name!r}")
    out.write_csv(
        "checks.csv",
        ["check", "parameters", "statistic", "threshold", "passed", "margin"],
        [[r.name, r.parameters, r.statistic, r.threshold, r.passed, r.margin] for r in reports],
    )
    for r in reports:
        if r.detail_rows:
            out.write_csv(f"details_{r.name}.csv", r.detail_columns, r.detail_rows)
    out.write_figure("bench.png", lambda p: checks_png(reports, p))


# ---------------------------------------------------------------------------
# sample
# ---------------------------------------------------------------------------


def cmd_sample(cfg: ExperimentConfig, out: OutputDir) -> None:
    model = build_model(_require(cfg, "model"))
    count = int(cfg.block("sample").get("count", 1000))
    batch = sample_batch(model, count, cfg.master_seed, stream="cli")
    steps = np.atleast_2d(np.asarray(batch.steps, dtype=float))
    header = [f"x_{j + 1}" for j in range(steps.shape[1])]
    out.write_csv("samples.csv", header, [[float(v) for v in row] for row in steps])
    out.write_figure("samples.png", lambda p: samples_png(steps, model.alpha, p))


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------


_COMMANDS = {
    "exponent": cmd_exponent,
    "estimate": cmd_estimate,
    "path": cmd_path,
    "bench": cmd_bench,
    "sample": cmd_sample,
}


def _run_single(command: str, cfg: ExperimentConfig) -> tuple[int, dict]:
    """Execute one entry; always leaves a manifest in its output directory."""
    out = OutputDir(cfg.output_dir)
    started = time.perf_counter()
    code = 0
    status = "ok"
    error = None
    try:
        _COMMANDS[command](cfg, out)
    except (ConfigError, HypothesisError, EstimationError) as exc:
        code = _EXIT_CODES[type(exc)]
        status = _STATUS[type(exc)]
        error = str(exc)
        print(f"error: {error}", file=sys.stderr)
    payload = {
        "command": command,
        "name": cfg.name,
        "config_digest": cfg.digest(),
        "code_version": _VERSION,
        "master_seed": cfg.master_seed,
        "wall_time_seconds": round(time.perf_counter() - started, 6),
        "status": status,
        "error": error,
        "outputs": out.output_records(),
    }
    with open(out.path("manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return code, payload


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="persistlab",
        description="Persistence probabilities of heavy-tailed sample averages: exponents, estimates, paths, audits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "exponent": "solve the radial program and report the decay exponent",
        "estimate": "estimate survival probabilities over a horizon grid",
        "path": "build the staircase skeleton and its jump atoms",
        "bench": "run constructive audits and report margins",
        "sample": "draw a reproducible batch of centered steps",
    }
    for name, text in helps.items():
        cmd = sub.add_parser(name, help=text)
        cmd.add_argument("--config", required=True, help="YAML experiment config")
        cmd.add_argument("--seed", type=int, default=None, help="override the master seed")
        cmd.add_argument("--workers", type=int, default=None, help="worker processes for the heavy loops")
        cmd.add_argument("--out", default=None, help="override the output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = load_document(args.config)
        configs = parse_document(doc)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if "campaign" in doc:
        root = args.out if args.out is not None else str(doc.get("output_dir", "persistlab_out"))
        configs = [
            c.with_overrides(seed=args.seed, workers=args.workers, output_dir=os.path.join(root, c.name))
            for c in configs
        ]
        code = 0
        entries = []
        started = time.perf_counter()
        for cfg in configs:
            entry_code, payload = _run_single(args.command, cfg)
            payload["output_dir"] = cfg.name
            entries.append(payload)
            if code == 0:
                code = entry_code
        shared = OutputDir(root)
        with open(shared.path("manifest.json"), "w", encoding="utf-8") as fh:
            json.dump(
                {
                    "command": args.command,
                    "code_version": _VERSION,
                    "wall_time_seconds": round(time.perf_counter() - started, 6),
                    "entries": entries,
                },
                fh,
                indent=2,
                sort_keys=True,
            )
            fh.write("\n")
        return code

    cfg = configs[0].with_overrides(seed=args.seed, workers=args.workers, output_dir=args.out)
    code, _ = _run_single(args.command, cfg)
    return code


if __name__ == "__main__":
    sys.exit(main())
