import json

import pytest

from pqdec.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_version_exits_zero(capsys):
    assert main(["--version"]) == 0


def test_usage_error_exit_code(capsys):
    assert main(["decode"]) == 2  # missing --instance
    assert main(["not-a-command"]) == 2


def test_field_subcommand(capsys):
    code, out = run(capsys, "field", "--p", "3", "--m", "2")
    assert code == 0
    assert json.loads(out) == {"m": 2, "p": 3, "poly": [1, 0]}


def test_field_rejects_reducible(capsys):
    assert main(["field", "--p", "2", "--m", "2", "--poly", "1,0"]) == 2


def test_gen_is_byte_identical(tmp_path):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    argv = ["gen", "--p", "2", "--m", "2", "--n", "3", "--k", "1",
            "--w", "0", "--with-distance", "--seed", "29"]
    assert main(argv + ["--out", a]) == 0
    assert main(argv + ["--out", b]) == 0
    assert open(a, "rb").read() == open(b, "rb").read()


@pytest.fixture()
def good_instance(tmp_path):
    # seed 29 draws a q=4, n=3, k=1 code with d = 4 (sigma = 1 window holds)
    path = str(tmp_path / "inst.json")
    assert main(["gen", "--p", "2", "--m", "2", "--n", "3", "--k", "1",
                 "--w", "0", "--with-distance", "--seed", "29", "--out", path]) == 0
    obj = json.load(open(path))
    assert obj["d"] == 4
    return path, obj


def test_decode_dense_and_structured(capsys, good_instance):
    path, obj = good_instance
    code, out = run(capsys, "decode", "--instance", path, "--backend", "dense",
                    "--sigma-r", "0", "--seed", "7")
    assert code == 0
    result = json.loads(out)
    assert result["s_hat"] == obj["s_true"]
    assert result["verified"] is True
    assert result["backend"] == "dense"
    assert "wall_ms" not in result

    code, out = run(capsys, "decode", "--instance", path, "--backend", "structured",
                    "--sigma-r", "0", "--seed", "7")
    assert code == 0
    structured = json.loads(out)
    assert structured["s_hat"] == result["s_hat"]
    assert structured["rounds"] == result["rounds"]


def test_decode_search_and_timings(capsys, good_instance):
    path, obj = good_instance
    code, out = run(capsys, "decode", "--instance", path, "--search",
                    "--seed", "3", "--timings")
    assert code == 0
    result = json.loads(out)
    assert result["s_hat"] == obj["s_true"]
    assert result["sigma_r"] == 0
    assert "wall_ms" in result


def test_decode_reproducible_output(tmp_path, good_instance):
    path, _ = good_instance
    a, b = str(tmp_path / "ra.json"), str(tmp_path / "rb.json")
    argv = ["decode", "--instance", path, "--sigma-r", "0", "--seed", "5"]
    assert main(argv + ["--out", a]) == 0
    assert main(argv + ["--out", b]) == 0
    assert open(a, "rb").read() == open(b, "rb").read()


def test_decode_honest_failure_exit_one(capsys, tmp_path, good_instance):
    path, obj = good_instance
    # replace the target with something far from the code, keep w = 0
    obj2 = dict(obj)
    obj2["t"] = [1, 1, 2]
    obj2.pop("s_true")
    bad = str(tmp_path / "bad.json")
    json.dump(obj2, open(bad, "w"))
    code, out = run(capsys, "decode", "--instance", bad, "--search", "--seed", "1")
    assert code == 1
    assert "error" in json.loads(out)


def test_oracle_subcommand(capsys, good_instance):
    path, obj = good_instance
    code, out = run(capsys, "oracle", "--instance", path)
    assert code == 0
    result = json.loads(out)
    assert result["s_star"] == obj["s_true"]
    assert result["distance"] == 0
    assert result["matches_plant"] is True


def test_baseline_subcommand(capsys, good_instance):
    path, obj = good_instance
    code, out = run(capsys, "baseline", "--instance", path, "--r", "0")
    assert code == 0
    result = json.loads(out)
    assert result["status"] in {"recovered", "singular"}
    if result["status"] == "recovered":
        assert result["s_hat"] == obj["s_true"]


def test_stats_subcommand(capsys):
    code, out = run(capsys, "stats", "--p", "2", "--T", "10", "--trials", "400",
                    "--seed", "0")
    assert code == 0
    result = json.loads(out)
    assert 0.15 < result["frequency"] < 0.45
    assert abs(result["product_formula"] - 0.288788) < 1e-4


def test_hardness_subcommand(capsys, tmp_path):
    sc = {"universe": 2, "sets": [[0], [1]], "K": 2, "c": 2}
    path = str(tmp_path / "sc.json")
    json.dump(sc, open(path, "w"))
    code, out = run(capsys, "hardness", "--sc", path, "--p", "2", "--m", "1",
                    "--exact-cover", "0,1")
    assert code == 0
    result = json.loads(out)
    assert result["passed"] is True
    assert result["opt"] <= result["bound"]


def test_separation_subcommand(capsys):
    code, out = run(capsys, "separation", "--p", "2", "--m", "6", "--n", "6",
                    "--k", "2", "--trials", "10", "--seed", "2")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("p,m,n,k,promise")
    assert len(lines) == 4


def test_seed_env_fallback(capsys, monkeypatch, good_instance):
    path, _ = good_instance
    monkeypatch.setenv("PQDEC_SEED", "7")
    code, out = run(capsys, "decode", "--instance", path, "--sigma-r", "0")
    assert code == 0
    assert json.loads(out)["seed"] == 7


def test_flag_overrides_env(capsys, monkeypatch, good_instance):
    path, _ = good_instance
    monkeypatch.setenv("PQDEC_SEED", "7")
    code, out = run(capsys, "decode", "--instance", path, "--sigma-r", "0",
                    "--seed", "11")
    assert code == 0
    assert json.loads(out)["seed"] == 11


def test_stats_out_file(tmp_path):
    out = str(tmp_path / "stats.json")
    assert main(["stats", "--p", "3", "--T", "5", "--trials", "200",
                 "--seed", "1", "--out", out]) == 0
    obj = json.load(open(out))
    assert obj["p"] == 3 and obj["trials"] == 200
