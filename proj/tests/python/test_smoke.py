import json
import pathlib

import pytest

import selfconf

SCENARIOS = pathlib.Path(__file__).resolve().parents[2] / "scenarios"


def small_schedule():
    return {
        "experiment": "schedule-links",
        "seeds": [1, 2],
        "topology": {"kind": "random-uniform", "nodes": 10},
        "weights": {"beta": 100},
        "neighborhood": {"contention_range": 2, "interference_range": 4},
        "schedule": {"max_sweeps": 50},
    }


def test_run_schedule_links():
    result = selfconf.run(small_schedule())
    records = selfconf.metrics(result)
    assert [r["seed"] for r in records] == [1, 2]
    for r in records:
        assert r["one_hop_capacity"] <= r["dipoles"]
    again = selfconf.metrics(selfconf.run(small_schedule()))
    for a, b in zip(records, again):
        a.pop("wall_seconds")
        b.pop("wall_seconds")
        assert a == b


def test_unknown_key_is_named():
    bad = small_schedule()
    bad["channel"] = {"alpah": 4}
    with pytest.raises(selfconf.ValidationError, match="channel.alpah"):
        selfconf.run(bad)


def test_oracle_cap():
    sc = small_schedule()
    sc["oracle"] = {"enabled": True, "cap": 4}
    with pytest.raises(selfconf.OracleCapError):
        selfconf.run(sc)


def test_bounds_from_file(tmp_path):
    sc = selfconf.load_scenario(str(SCENARIOS / "bounds.json"))
    result = selfconf.evaluate_bounds(sc)
    columns, rows = result.tables["bounds"]
    assert columns[:4] == ["alpha", "n_nodes", "r_c", "r_f"]
    assert rows
    result.write(str(tmp_path))
    assert (tmp_path / "bounds.csv").read_text().startswith("alpha,")
    assert json.loads((tmp_path / "scenario.json").read_text())["experiment"] == "bound-validate"


def test_epsilon_delta():
    r = selfconf.epsilon_delta(alpha=4, contention_range=10, interference_range=40, n_nodes=1000)
    assert r["complexity"] == pytest.approx(16.0)
    assert r["epsilon_delta"] > 0
    with pytest.raises(selfconf.InfeasibleError):
        selfconf.epsilon_delta(alpha=6, contention_range=10, interference_range=40, n_nodes=1000)
