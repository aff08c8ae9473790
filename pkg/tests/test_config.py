"""Document schema validation, campaign expansion, and builder dispatch."""

import json

import numpy as np
import pytest

from persistlab.config import (
    angular_is_atomic,
    build_body,
    build_model,
    load_document,
    model_alpha,
    parse_document,
    validate_model,
)
from persistlab.errors import ConfigError
from persistlab.geometry import Ball, Polytope

MODEL_1D = {"mode": "one-dimensional", "alpha": 1.5}
BODY_BOX = {"type": "box", "lo": [1.0], "hi": [2.0]}


def single_doc(**extra):
    doc = {
        "name": "probe",
        "master_seed": 7,
        "output_dir": "out",
        "workers": 2,
        "model": dict(MODEL_1D),
        "body": dict(BODY_BOX),
        "estimate": {"n_grid": [10, 30], "method": "direct", "reps": 100},
    }
    doc.update(extra)
    return doc


def campaign_doc(*entries):
    return {
        "campaign": list(entries),
        "master_seed": 5,
        "workers": 3,
        "output_dir": "root_dir",
    }


def entry(**extra):
    e = {"model": dict(MODEL_1D), "body": dict(BODY_BOX), "exponent": {}}
    e.update(extra)
    return e


class TestSingleDocument:
    def test_fields_carried_through(self):
        cfgs = parse_document(single_doc())
        assert len(cfgs) == 1
        cfg = cfgs[0]
        assert (cfg.name, cfg.master_seed, cfg.output_dir, cfg.workers) == (
            "probe", 7, "out", 2,
        )
        assert cfg.block("estimate") == {"n_grid": [10, 30], "method": "direct", "reps": 100}
        assert cfg.block("path") == {}

    def test_digest_is_stable_and_sensitive(self):
        doc = single_doc()
        d1 = parse_document(doc)[0].digest()
        d2 = parse_document(json.loads(json.dumps(doc)))[0].digest()
        assert d1 == d2
        assert len(d1) == 64
        assert parse_document(single_doc(master_seed=8))[0].digest() != d1

    def test_unknown_keys_rejected_at_each_level(self):
        with pytest.raises(ConfigError, match="unknown config keys: surprise"):
            parse_document(single_doc(surprise=1))
        with pytest.raises(ConfigError, match="unknown model keys: extra"):
            parse_document(single_doc(model={"alpha": 1.5, "extra": 1}))
        with pytest.raises(ConfigError, match="unknown body keys: x"):
            parse_document(single_doc(body={**BODY_BOX, "x": 1}))
        with pytest.raises(ConfigError, match="unknown estimate keys: zeta"):
            parse_document(single_doc(estimate={"zeta": 1}))
        with pytest.raises(ConfigError, match="unknown model.tail_balance keys: bad"):
            validate_model({"alpha": 1.5, "tail_balance": {"bad": 1}})

    def test_unknown_check_name(self):
        with pytest.raises(
            ConfigError,
            match="unknown check name 'nope'; known checks: directed, distance, "
            "fluctuation, hlms, inclusions, kolmogorov, projection",
        ):
            parse_document({"model": dict(MODEL_1D), "bench": {"checks": ["nope"]}})


class TestCampaign:
    def test_entries_inherit_and_nest_under_root(self):
        cfgs = parse_document(campaign_doc(entry(name="a"), entry()))
        assert [(c.name, c.master_seed, c.workers, c.output_dir) for c in cfgs] == [
            ("a", 5, 3, "root_dir/a"),
            ("run-02", 5, 3, "root_dir/run-02"),
        ]

    def test_names_must_be_unique(self):
        with pytest.raises(ConfigError, match="campaign entry names must be unique"):
            parse_document(campaign_doc(entry(name="a"), entry(name="a")))

    def test_names_cannot_escape_root(self):
        for bad in ("../esc", "a/b", "a\\b"):
            with pytest.raises(ConfigError, match="must not contain path separators"):
                parse_document(campaign_doc(entry(name=bad)))

    def test_entries_cannot_override_output_dir(self):
        with pytest.raises(ConfigError, match="entries inherit the shared output_dir"):
            parse_document(campaign_doc(entry(output_dir="x")))

    def test_no_nested_campaigns(self):
        with pytest.raises(ConfigError, match="cannot nest campaigns"):
            parse_document(campaign_doc({"campaign": []}))

    def test_campaign_must_be_non_empty(self):
        with pytest.raises(ConfigError, match="non-empty list of experiment entries"):
            parse_document(campaign_doc())


class TestModelBuilder:
    def test_mode_inference(self):
        assert build_model({"alpha": 1.5, "dimension": 1}).mode == "one-dimensional"
        default = build_model({"alpha": 1.5})
        assert default.mode == "multivariate"
        assert default.dimension == 2
        assert build_model({"components": [{"alpha": 2.0}]}).mode == "nonstandard-product"
        assert build_model(dict(MODEL_1D)).mode == "one-dimensional"

    def test_mode_validation(self):
        with pytest.raises(ConfigError, match="model.mode must be"):
            validate_model({"mode": "bogus", "alpha": 2.0})
        with pytest.raises(ConfigError, match="components must be a non-empty list"):
            validate_model({"mode": "nonstandard-product"})
        with pytest.raises(ConfigError, match="model.angular.type must be one of"):
            validate_model({"alpha": 1.5, "dimension": 2, "angular": {"type": "nope"}})

    def test_declared_alpha(self):
        assert model_alpha(dict(MODEL_1D)) == 1.5
        # The product law inherits the heaviest component tail.
        prod = {
            "mode": "nonstandard-product",
            "components": [{"alpha": 2.0}, {"alpha": 3.0}],
        }
        assert model_alpha(prod) == 2.0

    def test_atomic_detection(self):
        atomic = {
            "mode": "multivariate",
            "dimension": 2,
            "alpha": 1.5,
            "angular": {"type": "atomic", "directions": [[1.0, 0.0]], "weights": [1.0]},
        }
        assert angular_is_atomic(atomic)
        assert not angular_is_atomic(dict(MODEL_1D))
        assert not angular_is_atomic(None)

    def test_atomic_has_no_sampler(self):
        atomic = {
            "mode": "multivariate",
            "dimension": 2,
            "alpha": 1.5,
            "angular": {"type": "atomic", "directions": [[1.0, 0.0]], "weights": [1.0]},
        }
        with pytest.raises(ConfigError, match="atomic angular laws have no smooth-density sampler"):
            build_model(atomic)


class TestBodyBuilder:
    def test_box_and_ball(self):
        b = build_body({"type": "ball", "center": [3.0, 0.0], "radius": 1.0})
        assert isinstance(b, Ball)
        assert b.h_value(np.array([3.0, 0.0])) == pytest.approx(-1.0)

    def test_polytope_sign_convention(self):
        # Rows are [a_1, ..., a_d, b] for the halfspace a.x <= b, so the
        # membership function is negative strictly inside.
        poly = build_body({
            "type": "polytope",
            "halfspaces": [
                [1.0, 0.0, 4.0],
                [-1.0, 0.0, -2.0],
                [0.0, 1.0, 1.0],
                [0.0, -1.0, 1.0],
            ],
        })
        assert isinstance(poly, Polytope)
        assert poly.h_value(np.array([3.0, 0.0])) == pytest.approx(-1.0)
        assert poly.h_value(np.array([5.0, 0.0])) == pytest.approx(1.0)
        assert poly.offsets.tolist() == [-4.0, 2.0, -1.0, -1.0]

    def test_box_ordering(self):
        with pytest.raises(ConfigError, match="strictly below upper bounds"):
            build_body({"type": "box", "lo": [2.0], "hi": [1.0]})

    def test_unknown_type(self):
        with pytest.raises(ConfigError, match="body.type must be one of"):
            build_body({"type": "wedge"})


class TestLoadDocument:
    def test_roundtrip(self, tmp_path):
        p = tmp_path / "c.yaml"
        p.write_text("name: x\nmodel:\n  alpha: 1.5\nexponent: {}\n")
        doc = load_document(str(p))
        assert doc["name"] == "x"
        cfg = parse_document(doc)[0]
        assert cfg.name == "x"

    def test_root_must_be_mapping(self, tmp_path):
        p = tmp_path / "bad.yaml"
        p.write_text("- just\n- a list\n")
        with pytest.raises(ConfigError, match="config root must be a mapping"):
            load_document(str(p))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="config file not found"):
            load_document(str(tmp_path / "missing.yaml"))
