import json

import pytest

from attune.cli import EXIT_CONFIG, EXIT_DATA, EXIT_OK, EXIT_PARTIAL, PROFILES_ENV, main
from attune.simulator import default_task
from attune.telemetry import Goal, TaskConfig, TrialMeta, save_task, write_trial

from helpers import rec, write_cohort


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def small_trial(tmp_path):
    task = default_task()
    records = [rec(k / 10, 2.0 + 0.05 * k, 2.0, 0.0, 0.5, ha=5.0 + k % 3) for k in range(30)]
    return write_trial(TrialMeta("opx", "short"), task, records, tmp_path / "short.trial")


# -- simulate -----------------------------------------------------------------------

def test_simulate_byte_identical(capsys, tmp_path):
    for name in ("a", "b"):
        code, _, _ = run(capsys, "simulate", "--archetype", "AboveAverage", "--seed", 1,
                         "--out", tmp_path / f"{name}.trial")
        assert code == EXIT_OK
    assert (tmp_path / "a.trial").read_bytes() == (tmp_path / "b.trial").read_bytes()


def test_simulate_unknown_archetype(capsys, tmp_path):
    code, _, err = run(capsys, "simulate", "--archetype", "Expert", "--seed", 1, "--out", tmp_path / "x.trial")
    assert code == EXIT_CONFIG
    for name in ("AboveAverage", "Average", "BelowAverage"):
        assert name in err
    assert not (tmp_path / "x.trial").exists()


def test_simulate_goal_inside_obstacle(capsys, tmp_path):
    base = default_task()
    obstacle = base.obstacles[0]
    bad = TaskConfig(arena=base.arena, goals=base.goals + (Goal("sunk", obstacle.x, obstacle.y),),
                     obstacles=base.obstacles)
    path = tmp_path / "task.json"
    save_task(bad, path)
    code, _, err = run(capsys, "simulate", "--task", path, "--archetype", "Average", "--seed", 3,
                       "--out", tmp_path / "x.trial")
    assert code == EXIT_CONFIG
    assert "sunk" in err


def test_simulate_custom_archetypes(capsys, tmp_path):
    path = tmp_path / "arch.json"
    path.write_text(json.dumps({"Careful": {"nominal_speed": 0.5}}))
    code, _, err = run(capsys, "simulate", "--archetypes", path, "--archetype", "Careful",
                       "--seed", 2, "--out", tmp_path / "c.trial")
    assert code == EXIT_CONFIG
    assert "missing fields" in err
    path.write_text(json.dumps({"Careful": {"base": "AboveAverage", "nominal_speed": 0.5}}))
    code, _, err = run(capsys, "simulate", "--archetypes", path, "--archetype", "Careful",
                       "--seed", 2, "--out", tmp_path / "c.trial")
    assert code == EXIT_OK, err


# -- estimate -----------------------------------------------------------------------

def test_estimate_all_idle(capsys, tmp_path):
    task = default_task()
    records = [rec(k / 10, 2.0, 2.0, teleop=False) for k in range(20)]
    trial = write_trial(TrialMeta("idle", "t"), task, records, tmp_path / "idle.trial")
    code, _, err = run(capsys, "estimate", "--trial", trial, "--out", tmp_path / "trace.csv")
    assert code == EXIT_OK
    lines = (tmp_path / "trace.csv").read_text().splitlines()
    assert lines == ["t,conf_h,conf_e,conf_i,i,p,instant_trust,short_term_trust"]
    assert "mean_trust=absent" in err.splitlines()[-1]


def test_estimate_fixture_in_range(capsys, tmp_path, fixture_dir):
    code, _, err = run(capsys, "estimate", "--trial", fixture_dir / "op01.trial",
                       "--out", tmp_path / "t.csv", "--svg", tmp_path / "t.svg")
    assert code == EXIT_OK
    rows = (tmp_path / "t.csv").read_text().splitlines()[1:]
    assert rows
    for line in rows:
        values = [float(v) for v in line.split(",")]
        assert all(0.0 <= v <= 1.0 for v in values[1:])
    assert (tmp_path / "t.svg").read_text().startswith("<svg")
    last = err.splitlines()[-1]
    assert last.startswith("operator=op01 mean_trust=0.")
    assert "stcf=" in last and last.endswith("collisions, 4 goals")


def test_estimate_paced_matches_unpaced(capsys, tmp_path, small_trial):
    run(capsys, "estimate", "--trial", small_trial, "--out", tmp_path / "u.csv")
    code, _, _ = run(capsys, "estimate", "--trial", small_trial, "--out", tmp_path / "p.csv", "--paced", 50.0)
    assert code == EXIT_OK
    assert (tmp_path / "u.csv").read_bytes() == (tmp_path / "p.csv").read_bytes()


def test_estimate_malformed_trial(capsys, tmp_path, small_trial):
    lines = small_trial.read_text().splitlines(keepends=True)
    lines[6] = "0.5,1,2,3\n"
    bad = tmp_path / "bad.trial"
    bad.write_text("".join(lines))
    code, _, err = run(capsys, "estimate", "--trial", bad, "--out", tmp_path / "t.csv")
    assert code == EXIT_DATA
    assert "line 7" in err


def test_estimate_params_printed(capsys, tmp_path, small_trial):
    params = tmp_path / "p.json"
    params.write_text(json.dumps({"fusion": {"attention_threshold_deg": 20.0}}))
    code, _, err = run(capsys, "estimate", "--trial", small_trial, "--out", tmp_path / "t.csv",
                       "--params", params)
    assert code == EXIT_OK
    effective = json.loads(err[:err.rindex("}") + 1])
    assert effective["fusion"]["attention_threshold_deg"] == 20.0
    assert effective["attention"]["k"] == 2.5


def test_estimate_bad_params(capsys, tmp_path, small_trial):
    params = tmp_path / "p.json"
    params.write_text(json.dumps({"fusion": {"weights_above": {"w1": 0.9, "w2": 0.9, "w3": 0.9}}}))
    code, _, _ = run(capsys, "estimate", "--trial", small_trial, "--out", tmp_path / "t.csv",
                     "--params", params)
    assert code == EXIT_CONFIG
    assert not (tmp_path / "t.csv").exists()


def test_estimate_nonpositive_rate(capsys, tmp_path, small_trial):
    code, _, _ = run(capsys, "estimate", "--trial", small_trial, "--out", tmp_path / "t.csv", "--paced", 0)
    assert code == EXIT_CONFIG


# -- rank ---------------------------------------------------------------------------

def test_rank_fixtures(capsys, tmp_path, fixture_dir):
    code, out, _ = run(capsys, "rank", "--trials", fixture_dir, "--out", tmp_path / "out")
    assert code == EXIT_OK
    assert out.startswith("operators=6 tau_b=")
    tau = float(out.split("tau_b=")[1])
    assert tau >= 0.6
    assert len((tmp_path / "out" / "ranking.csv").read_text().splitlines()) == 7
    assert len(list((tmp_path / "out" / "profiles").glob("*.json"))) == 6


def test_rank_corrupt_trial(capsys, tmp_path):
    trials = tmp_path / "trials"
    write_cohort(trials)
    (trials / "broken.trial").write_text("{}\n1,2\n")
    code, _, err = run(capsys, "rank", "--trials", trials, "--out", tmp_path / "out")
    assert code == EXIT_PARTIAL
    assert "broken.trial" in err


def test_rank_empty_dir(capsys, tmp_path):
    code, _, err = run(capsys, "rank", "--trials", tmp_path, "--out", tmp_path / "out")
    assert code == EXIT_DATA
    assert "no trials" in err


def test_rank_rerun_fresh_profiles(capsys, tmp_path, fixture_dir):
    for name in ("a", "b"):
        run(capsys, "rank", "--trials", fixture_dir, "--out", tmp_path / name,
            "--profiles", tmp_path / f"prof_{name}")
    assert (tmp_path / "a" / "ranking.csv").read_bytes() == (tmp_path / "b" / "ranking.csv").read_bytes()


def test_rank_profiles_env(capsys, tmp_path, fixture_dir, monkeypatch):
    monkeypatch.setenv(PROFILES_ENV, str(tmp_path / "envprof"))
    run(capsys, "rank", "--trials", fixture_dir, "--out", tmp_path / "out")
    assert len(list((tmp_path / "envprof").glob("*.json"))) == 6
    assert not (tmp_path / "out" / "profiles").exists()


def test_rank_profiles_accumulate(capsys, tmp_path, fixture_dir):
    for _ in range(2):
        run(capsys, "rank", "--trials", fixture_dir, "--out", tmp_path / "out")
    profile = json.loads((tmp_path / "out" / "profiles" / "op01.json").read_text())
    assert len(profile["history"]) == 2


# -- eval ---------------------------------------------------------------------------

def write_order(path, ops, column="rank"):
    path.write_text("operator_id," + column + "\n" + "".join(f"{op},{k}\n" for k, op in enumerate(ops, 1)))
    return path


@pytest.mark.parametrize("second, expected", [
    ("ABCD", "1.0"), ("DCBA", "-1.0"), ("ACBD", "0.6667"),
])
def test_eval(capsys, tmp_path, second, expected):
    a = write_order(tmp_path / "a.csv", "ABCD")
    b = write_order(tmp_path / "b.csv", second)
    code, out, _ = run(capsys, "eval", "--ranking", a, "--capability", b)
    assert code == EXIT_OK
    assert out.strip() == expected


def test_eval_on_ranking_csv(capsys, tmp_path, fixture_dir):
    run(capsys, "rank", "--trials", fixture_dir, "--out", tmp_path / "out")
    _, rank_out, _ = run(capsys, "rank", "--trials", fixture_dir, "--out", tmp_path / "out2")
    ranking = tmp_path / "out" / "ranking.csv"
    code, out, _ = run(capsys, "eval", "--ranking", ranking, "--capability", ranking)
    assert code == EXIT_OK
    assert float(out) == round(float(rank_out.split("tau_b=")[1]), 4)


def test_eval_mismatched(capsys, tmp_path):
    a = write_order(tmp_path / "a.csv", "ABC")
    b = write_order(tmp_path / "b.csv", "ABD")
    code, _, err = run(capsys, "eval", "--ranking", a, "--capability", b)
    assert code == EXIT_DATA
    assert "D" in err
