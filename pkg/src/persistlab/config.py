"""Experiment configuration: schema validation and object builders.

Configs are YAML mappings.  Validation is strict: every mapping level
has a fixed key set and unknown keys are rejected up front, so a typo
fails before any computation starts.  A top-level ``campaign`` key holds
a list of experiment entries that share one output root and manifest.

The model block follows the step-law schema (keys ``dimension``,
``alpha``, ``radial_scale``, ``bulk_fraction``, ``angular``,
``tail_balance``, ``mode``, ``master_seed``); the body block is one of
``{type: box, lo, hi}``, ``{type: ball, center, radius}`` or
``{type: polytope, halfspaces}`` with rows ``[a_1 .. a_d, b]`` encoding
``<a, x> <= b``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import yaml

from .errors import ConfigError
from .geometry import Ball, ConvexBody, Polytope, box
from .sampler import (
    PiecewiseDensity,
    RVModel,
    TailBalance,
    UniformSphere,
    VonMisesFisher,
    multivariate_model,
    one_dim_model,
    product_model,
)

__all__ = [
    "ExperimentConfig",
    "load_document",
    "parse_document",
    "build_model",
    "build_body",
    "angular_is_atomic",
    "model_alpha",
]

_TOP_KEYS = {
    "name",
    "master_seed",
    "output_dir",
    "workers",
    "model",
    "body",
    "exponent",
    "estimate",
    "path",
    "bench",
    "sample",
}
_CAMPAIGN_KEYS = {"campaign", "master_seed", "output_dir", "workers"}
_MODEL_KEYS = {
    "mode",
    "dimension",
    "alpha",
    "radial_scale",
    "bulk_fraction",
    "angular",
    "tail_balance",
    "components",
    "master_seed",
}
_COMPONENT_KEYS = {"alpha", "radial_scale", "bulk_fraction", "tail_balance"}
_TAIL_KEYS = {"p_minus", "alpha_minus"}
_ANGULAR_KEYS = {
    "uniform": {"type"},
    "vmf": {"type", "mu", "kappa"},
    "piecewise": {"type", "breaks", "weights"},
    "atomic": {"type", "directions", "weights"},
}
_BODY_KEYS = {
    "box": {"type", "lo", "hi"},
    "ball": {"type", "center", "radius"},
    "polytope": {"type", "halfspaces"},
}
_BLOCK_KEYS = {
    "exponent": {"deltas", "tol", "grid_density"},
    "estimate": {"method", "n_grid", "effort", "macro_reps", "reps", "schedule", "min_level"},
    "path": {"a", "b", "c1", "n", "points"},
    "bench": {
        "checks",
        "inclusions",
        "distance",
        "fluctuation",
        "kolmogorov",
        "directed",
        "hlms",
        "projection",
    },
    "sample": {"count"},
}
_SCHEDULE_KEYS = {"kind", "c1", "eta", "rho", "r_ref"}
_CHECK_KEYS = {
    "inclusions": {"epsilon", "rho", "delta", "alpha0", "c1", "i_start", "i_count"},
    "distance": {"eta", "c1", "i_start", "i_count", "r_ref"},
    "fluctuation": {"epsilon", "rho", "delta", "alpha0", "c1", "i", "reps", "window_exponent", "model"},
    "kolmogorov": {"m", "x", "reps", "slope_of", "model"},
    "directed": {"u", "reps", "hill_k", "model"},
    "hlms": {"n_grid", "reps", "threshold", "scale", "model"},
    "projection": {"n", "reps", "direction", "model"},
}


def _mapping(obj, allowed: set, where: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a mapping")
    unknown = sorted(str(k) for k in obj if k not in allowed)
    if unknown:
        raise ConfigError(f"unknown {where} keys: {', '.join(unknown)}")
    return obj


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer")
    return value


def _num(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number")
    return float(value)


def _num_list(value, where: str) -> list[float]:
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(f"{where} must be a non-empty list of numbers")
    return [_num(v, f"{where} entry") for v in value]


def _int_list(value, where: str) -> list[int]:
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(f"{where} must be a non-empty list of integers")
    return [_int(v, f"{where} entry") for v in value]


# ---------------------------------------------------------------------------
# model block
# ---------------------------------------------------------------------------


def _validate_angular(spec, where: str) -> dict:
    if spec is None or spec == "uniform":
        return {"type": "uniform"}
    if not isinstance(spec, dict):
        raise ConfigError(f"{where} must be 'uniform' or a mapping with a type key")
    kind = spec.get("type")
    if kind not in _ANGULAR_KEYS:
        raise ConfigError(f"{where}.type must be one of {sorted(_ANGULAR_KEYS)}, got {kind!r}")
    _mapping(spec, _ANGULAR_KEYS[kind], where)
    if kind == "vmf":
        _num_list(spec.get("mu"), f"{where}.mu")
        _num(spec.get("kappa"), f"{where}.kappa")
    if kind == "piecewise":
        _num_list(spec.get("breaks"), f"{where}.breaks")
        _num_list(spec.get("weights"), f"{where}.weights")
    if kind == "atomic":
        dirs = spec.get("directions")
        if not isinstance(dirs, (list, tuple)) or not dirs:
            raise ConfigError(f"{where}.directions must be a non-empty list of vectors")
        for row in dirs:
            _num_list(row, f"{where}.directions row")
        if "weights" in spec:
            _num_list(spec["weights"], f"{where}.weights")
    return dict(spec)


def _validate_tail(spec, where: str) -> dict:
    if spec is None:
        return {}
    tb = _mapping(spec, _TAIL_KEYS, where)
    if "p_minus" in tb:
        _num(tb["p_minus"], f"{where}.p_minus")
    if "alpha_minus" in tb and tb["alpha_minus"] is not None:
        _num(tb["alpha_minus"], f"{where}.alpha_minus")
    return dict(tb)


def _infer_mode(spec: dict) -> str:
    if "mode" in spec:
        mode = spec["mode"]
        if mode not in ("multivariate", "one-dimensional", "nonstandard-product"):
            raise ConfigError(
                "model.mode must be 'multivariate', 'one-dimensional' or 'nonstandard-product'"
            )
        return mode
    if spec.get("components"):
        return "nonstandard-product"
    if spec.get("dimension", 0) == 1:
        return "one-dimensional"
    return "multivariate"


def validate_model(spec, where: str = "model") -> dict:
    m = _mapping(spec, _MODEL_KEYS, where)
    mode = _infer_mode(m)
    if mode == "nonstandard-product":
        comps = m.get("components")
        if not isinstance(comps, (list, tuple)) or not comps:
            raise ConfigError(f"{where}.components must be a non-empty list")
        for j, comp in enumerate(comps):
            c = _mapping(comp, _COMPONENT_KEYS, f"{where}.components[{j}]")
            _num(c.get("alpha"), f"{where}.components[{j}].alpha")
            _validate_tail(c.get("tail_balance"), f"{where}.components[{j}].tail_balance")
    else:
        _num(m.get("alpha"), f"{where}.alpha")
        _int(m.get("dimension", 1), f"{where}.dimension")
        if "angular" in m:
            _validate_angular(m["angular"], f"{where}.angular")
        _validate_tail(m.get("tail_balance"), f"{where}.tail_balance")
    if "master_seed" in m:
        _int(m["master_seed"], f"{where}.master_seed")
    return dict(m)


def angular_is_atomic(model_spec: dict | None) -> bool:
    """True when the angular law carries point masses."""
    if not model_spec:
        return False
    ang = model_spec.get("angular")
    return isinstance(ang, dict) and ang.get("type") == "atomic"


def model_alpha(model_spec: dict) -> float:
    """Tail index declared by the spec, before any object is built."""
    if _infer_mode(model_spec) == "nonstandard-product":
        return min(_num(c.get("alpha"), "component alpha") for c in model_spec["components"])
    return _num(model_spec.get("alpha"), "model.alpha")


def _build_angular(spec: dict):
    kind = spec["type"]
    if kind == "uniform":
        return UniformSphere()
    if kind == "vmf":
        return VonMisesFisher(mu=tuple(float(v) for v in spec["mu"]), kappa=float(spec["kappa"]))
    if kind == "piecewise":
        return PiecewiseDensity(
            breaks=tuple(float(v) for v in spec["breaks"]),
            weights=tuple(float(v) for v in spec["weights"]),
        )
    raise ConfigError(
        "atomic angular laws have no smooth-density sampler; axis-aligned atoms "
        "factor into independent coordinates, use mode nonstandard-product instead"
    )


def _build_component(spec: dict) -> RVModel:
    tb = spec.get("tail_balance") or {}
    return one_dim_model(
        alpha=float(spec["alpha"]),
        x_m=float(spec.get("radial_scale", 1.0)),
        bulk_fraction=float(spec.get("bulk_fraction", 0.0)),
        p_minus=float(tb.get("p_minus", 0.5)),
        alpha_minus=None if tb.get("alpha_minus") is None else float(tb["alpha_minus"]),
    )


def build_model(model_spec: dict) -> RVModel:
    """Construct the step-law model from a validated model block."""
    spec = validate_model(model_spec)
    mode = _infer_mode(spec)
    if mode == "nonstandard-product":
        return product_model([_build_component(c) for c in spec["components"]])
    if mode == "one-dimensional":
        return _build_component(spec)
    angular = _build_angular(_validate_angular(spec.get("angular"), "model.angular"))
    return multivariate_model(
        dimension=int(spec.get("dimension", 2)),
        alpha=float(spec["alpha"]),
        x_m=float(spec.get("radial_scale", 1.0)),
        bulk_fraction=float(spec.get("bulk_fraction", 0.0)),
        angular=angular,
    )


# ---------------------------------------------------------------------------
# body block
# ---------------------------------------------------------------------------


def build_body(body_spec: dict) -> ConvexBody:
    """Construct the target set from a validated body block."""
    if not isinstance(body_spec, dict):
        raise ConfigError("body must be a mapping")
    kind = body_spec.get("type")
    if kind not in _BODY_KEYS:
        raise ConfigError(f"body.type must be one of {sorted(_BODY_KEYS)}, got {kind!r}")
    spec = _mapping(body_spec, _BODY_KEYS[kind], "body")
    if kind == "box":
        return box(_num_list(spec.get("lo"), "body.lo"), _num_list(spec.get("hi"), "body.hi"))
    if kind == "ball":
        return Ball(_num_list(spec.get("center"), "body.center"), _num(spec.get("radius"), "body.radius"))
    rows = spec.get("halfspaces")
    if not isinstance(rows, (list, tuple)) or not rows:
        raise ConfigError("body.halfspaces must be a non-empty list of rows [a_1 .. a_d, b]")
    normals, offsets = [], []
    for row in rows:
        vals = _num_list(row, "body.halfspaces row")
        if len(vals) < 2:
            raise ConfigError("each halfspace row needs at least one normal entry and an offset")
        normals.append(vals[:-1])
        # Rows encode <a, x> <= b; the polytope stores <a, x> + offset <= 0.
        offsets.append(-vals[-1])
    return Polytope(normals, offsets)


# ---------------------------------------------------------------------------
# experiment documents
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    """One validated experiment: shared blocks plus per-command blocks."""

    name: str
    master_seed: int
    output_dir: str
    workers: int
    model: dict | None
    body: dict | None
    blocks: dict = field(default_factory=dict)

    def block(self, command: str) -> dict:
        return self.blocks.get(command) or {}

    def canonical(self) -> dict:
        doc: dict = {
            "name": self.name,
            "master_seed": self.master_seed,
            "workers": self.workers,
            "model": self.model,
            "body": self.body,
        }
        doc.update(self.blocks)
        return doc

    def digest(self) -> str:
        return hashlib.sha256(
            json.dumps(self.canonical(), sort_keys=True, default=str).encode()
        ).hexdigest()

    def with_overrides(
        self,
        seed: int | None = None,
        workers: int | None = None,
        output_dir: str | None = None,
    ) -> "ExperimentConfig":
        return ExperimentConfig(
            name=self.name,
            master_seed=self.master_seed if seed is None else seed,
            output_dir=self.output_dir if output_dir is None else output_dir,
            workers=self.workers if workers is None else workers,
            model=self.model,
            body=self.body,
            blocks=self.blocks,
        )


def load_document(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file is not valid YAML: {exc}")
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a mapping")
    return doc


def _validate_bench(block: dict) -> dict:
    checks = block.get("checks")
    if checks is not None:
        if not isinstance(checks, (list, tuple)) or not checks:
            raise ConfigError("bench.checks must be a non-empty list of check names")
        for name in checks:
            if name not in _CHECK_KEYS:
                raise ConfigError(
                    f"unknown check name {name!r}; known checks: {', '.join(sorted(_CHECK_KEYS))}"
                )
    for name, keys in _CHECK_KEYS.items():
        if name in block and block[name] is not None:
            sub = _mapping(block[name], keys, f"bench.{name}")
            # Monte Carlo checks may run against their own step law.
            if sub.get("model") is not None:
                validate_model(sub["model"], f"bench.{name}.model")
    return dict(block)


def _parse_entry(doc: dict, defaults: dict, name: str) -> ExperimentConfig:
    entry = _mapping(doc, _TOP_KEYS, "config")
    model = validate_model(entry["model"]) if entry.get("model") is not None else None
    body = None
    if entry.get("body") is not None:
        # Key-schema check only; geometric validity is a run-time concern.
        kind = entry["body"].get("type") if isinstance(entry["body"], dict) else None
        if kind not in _BODY_KEYS:
            raise ConfigError(f"body.type must be one of {sorted(_BODY_KEYS)}, got {kind!r}")
        body = dict(_mapping(entry["body"], _BODY_KEYS[kind], "body"))
    blocks: dict = {}
    for command, keys in _BLOCK_KEYS.items():
        if entry.get(command) is None:
            continue
        block = _mapping(entry[command], keys, command)
        if command == "estimate" and block.get("schedule") is not None:
            _mapping(block["schedule"], _SCHEDULE_KEYS, "estimate.schedule")
        if command == "bench":
            block = _validate_bench(block)
        blocks[command] = dict(block)
    seed = entry.get("master_seed")
    if seed is None and model is not None:
        seed = model.get("master_seed")
    if seed is None:
        seed = defaults.get("master_seed", 0)
    return ExperimentConfig(
        name=str(entry.get("name", name)),
        master_seed=_int(seed, "master_seed"),
        output_dir=str(entry.get("output_dir", defaults.get("output_dir", "persistlab_out"))),
        workers=_int(entry.get("workers", defaults.get("workers", 1)), "workers"),
        model=model,
        body=body,
        blocks=blocks,
    )


def parse_document(doc: dict) -> list[ExperimentConfig]:
    """Validate a loaded document into one or more experiment configs.

    A ``campaign`` document yields one config per entry; entries inherit
    the shared seed and worker count and are pinned to subdirectories of
    the shared output root, so no entry can write outside it.
    """
    if "campaign" in doc:
        top = _mapping(doc, _CAMPAIGN_KEYS, "config")
        entries = top["campaign"]
        if not isinstance(entries, (list, tuple)) or not entries:
            raise ConfigError("campaign must be a non-empty list of experiment entries")
        defaults = {
            "master_seed": top.get("master_seed", 0),
            "workers": top.get("workers", 1),
        }
        root = str(top.get("output_dir", "persistlab_out"))
        configs = []
        for j, raw in enumerate(entries):
            if isinstance(raw, dict) and "output_dir" in raw:
                raise ConfigError("campaign entries inherit the shared output_dir; remove the key")
            if isinstance(raw, dict) and "campaign" in raw:
                raise ConfigError("campaign entries cannot nest campaigns")
            cfg = _parse_entry(raw, defaults, name=f"run-{j + 1:02d}")
            # The name becomes a subdirectory of the shared root; path
            # separators or parent references would break that containment.
            if "/" in cfg.name or "\\" in cfg.name or ".." in cfg.name:
                raise ConfigError(
                    f"campaign entry name {cfg.name!r} must not contain path separators or '..'"
                )
            configs.append(cfg.with_overrides(output_dir=f"{root}/{cfg.name}"))
        names = [c.name for c in configs]
        if len(set(names)) != len(names):
            raise ConfigError("campaign entry names must be unique")
        return configs
    return [_parse_entry(doc, {}, name="run")]
