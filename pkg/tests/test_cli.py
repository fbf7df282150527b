import json

import pytest
from click.testing import CliRunner

from kminmax.cli import ExperimentConfig, main, run_suite


@pytest.fixture
def runner():
    return CliRunner()


def test_table_is_byte_identical(runner, tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / ("t%d.csv" % k)
        r = runner.invoke(main, ["table", "--range", "32", "--out", str(path)])
        assert r.exit_code == 0, r.output
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    lines = outs[0].decode().splitlines()
    assert lines[0].split(",")[:4] == ["x", "K", "Kmin", "Kmax"]
    assert len(lines) == 33
    meta = json.loads((tmp_path / "t0.csv.meta.json").read_text())
    assert meta["config_hash"] == ExperimentConfig(range=32).hash


def test_table_json_with_oracle(runner):
    r = runner.invoke(main, ["table", "--range", "8", "--format", "json",
                             "--oracle", '{"kind": "finite", "elements": [3]}'])
    assert r.exit_code == 0, r.output
    doc = json.loads(r.stdout)
    assert [row["x"] for row in doc["rows"]] == list(range(8))
    assert all(row["K_A"] <= row["K"] for row in doc["rows"])
    assert doc["metadata"]["config"]["oracle"]["kind"] == "finite"


def test_config_hash_tracks_every_field():
    base = ExperimentConfig()
    assert base.hash == ExperimentConfig().hash
    assert base.hash != ExperimentConfig(seed=1).hash
    assert base.hash != ExperimentConfig(scale=(4, 1 << 20, 1 << 21)).hash
    with pytest.raises(ValueError):
        ExperimentConfig(range=0)


def test_certify_verify_roundtrip(runner, tmp_path):
    out = tmp_path / "b.json"
    r = runner.invoke(main, ["certify", "barzdins", "--lengths", "4-5",
                             "--cap", "4096", "--out", str(out)])
    assert r.exit_code == 0, r.output
    assert "4:ok, 5:ok" in r.stderr
    r = runner.invoke(main, ["verify", str(out)])
    assert r.exit_code == 0, r.output
    assert r.stdout.count("PASS") == 2


def test_certify_reports_exhaustion(runner):
    r = runner.invoke(main, ["certify", "barzdins", "--set", "squares",
                             "--lengths", "9", "--cap", "4096"])
    assert r.exit_code == 0
    assert "9:StageExhausted" in r.stderr
    doc = json.loads(r.stdout)
    assert doc["entries"][0]["outcome"] == "StageExhausted"


def test_verify_flags_tampering(runner, tmp_path):
    out = tmp_path / "b.json"
    runner.invoke(main, ["certify", "barzdins", "--lengths", "4",
                         "--cap", "4096", "--out", str(out)])
    doc = json.loads(out.read_text())
    doc["entries"][0]["certificate"]["witness"] += 2
    out.write_text(json.dumps(doc))
    r = runner.invoke(main, ["verify", str(out)])
    assert r.exit_code == 1
    assert "FAIL" in r.stdout and "upper_bound_reproduces_witness" in r.stdout


def test_verify_refuses_other_worlds(runner, tmp_path):
    out = tmp_path / "b.json"
    runner.invoke(main, ["certify", "barzdins", "--lengths", "4",
                         "--cap", "4096", "--out", str(out)])
    assert runner.invoke(main, ["verify", str(out), "--lmax", "12"]
                         ).exit_code == 3
    doc = json.loads(out.read_text())
    doc["entries"][0]["certificate"]["world"]["T_max"] = 128
    out.write_text(json.dumps(doc))
    assert runner.invoke(main, ["verify", str(out)]).exit_code == 3


@pytest.mark.parametrize("args", [
    ["table", "--oracle", "{not json"],
    ["table", "--scale", "1,2"],
    ["certify", "kmin", "--lengths", "a-b"],
])
def test_bad_input_exit_code(runner, args):
    assert runner.invoke(main, args).exit_code == 3


def test_bad_certificate_file(runner, tmp_path):
    junk = tmp_path / "junk.json"
    junk.write_text('{"lemma": "barzdins"}')
    assert runner.invoke(main, ["verify", str(junk)]).exit_code == 3
    assert runner.invoke(main, ["verify", str(tmp_path / "missing.json")]
                         ).exit_code == 3


def test_resource_limit_exit_code(runner):
    assert runner.invoke(main, ["table", "--range", "100000"]).exit_code == 2


def test_suite_passes(runner):
    r = runner.invoke(main, ["suite", "--range", "128"])
    assert r.exit_code == 0, r.output
    report = json.loads(r.stdout)
    assert report["passed"] and len(report["checks"]) == 8
    assert r.stderr.count("PASS") == 8


def test_suite_is_seed_deterministic():
    a = run_suite(ExperimentConfig(range=64, seed=5))
    b = run_suite(ExperimentConfig(range=64, seed=5))
    assert a == b
