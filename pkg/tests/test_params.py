import json

import pytest

from attune.confidence import Orientation
from attune.params import ModelParams, ParamsError, load_params


def test_defaults_are_published_constants():
    p = ModelParams()
    assert (p.attention.k, p.attention.x0, p.attention.orientation) == (2.5, 17.0, Orientation.DECREASING)
    assert (p.intent_confidence.k, p.intent_confidence.x0) == (13.0, 0.5)
    assert p.intent_confidence.orientation is Orientation.INCREASING
    assert (p.performance.k, p.performance.x0) == (11.0, 0.5)
    assert p.fusion.weights_above.as_tuple() == (0.5, 0.15, 0.35)
    assert p.fusion.weights_at_or_below.as_tuple() == (0.3, 0.15, 0.55)
    assert p.fusion.attention_threshold_deg == 17.0
    assert p.incidents.to_dict() == {"goal": 0.033, "collision": -0.2}


def test_round_trip():
    p = ModelParams()
    assert ModelParams.from_dict(p.to_dict()) == p
    assert ModelParams.from_dict(json.loads(p.to_json())) == p


def test_partial_override_merges():
    p = ModelParams().merged({"attention": {"x0": 20.0}, "intent": {"beta": 4.0}})
    assert p.attention.x0 == 20.0 and p.attention.k == 2.5
    assert p.intent.beta == 4.0 and p.intent.eps_mix == 0.01


def test_new_incident_kind_allowed():
    p = ModelParams().merged({"incidents": {"near_miss": -0.05}})
    assert p.incidents["near_miss"] == -0.05
    assert p.incidents["collision"] == -0.2


@pytest.mark.parametrize("overrides, message", [
    ({"attenton": {"k": 1}}, "attenton"),
    ({"attention": {"slope": 1}}, "attention.slope"),
    ({"attention": {"k": -1}}, "positive"),
    ({"fusion": {"weights_above": [0.5, 0.5, 0.5]}}, "sum to 1"),
    ({"intent": {"eps_mix": 2.0}}, "eps_mix"),
    ({"motion_error": {"window_s": 0}}, "window_s"),
])
def test_invalid_overrides_rejected(overrides, message):
    with pytest.raises(ParamsError, match=message):
        ModelParams().merged(overrides)


def test_load_params_file(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"performance": {"k": 9.0}}))
    assert load_params(path).performance.k == 9.0
    path.write_text("{broken")
    with pytest.raises(ParamsError):
        load_params(path)
