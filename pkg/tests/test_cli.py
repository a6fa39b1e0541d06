import csv
import json

import pytest

from plrot import io
from plrot.cli import main
from plrot.flows import example42


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, argv in {
        "ex42.map": ["gen", "4.2", "--k", "2", "--s", "2"],
        "rot13.map": ["gen", "4.1", "--amount", "1/3"],
        "ex43.track": ["gen", "4.3", "--r1", "1", "--r2", "1", "--r3", "2"],
    }.items():
        paths[name] = str(tmp_path / name)
        assert main(argv + ["-o", paths[name]]) == 0
    bad = tmp_path / "bad.map"
    bad.write_text(json.dumps({"base": 2, "pieces": [{"domain_left": "0", "exponent": 1, "image_left": "0"}]}))
    paths["bad.map"] = str(bad)
    return paths


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def test_rotnum_example42(files, capsys):
    code, out = run(["rotnum", "--format", "json", files["ex42.map"]], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["least_period"] == 17 and doc["bound"] == 2048


def test_rotnum_text_has_decimal(files, capsys):
    code, out = run(["rotnum", files["ex42.map"]], capsys)
    assert "4/17" in out and "0.235294" in out


def test_rotnum_float(files, capsys):
    code, out = run(["rotnum", "--float", "--iters", "1000", "--format", "json", files["rot13.map"]], capsys)
    assert abs(json.loads(out)["rotation_number_float"] - 1 / 3) <= 1e-3


def test_check_oracle(files, capsys):
    code, out = run(["rotnum", "--check-oracle", files["ex42.map"], files["rot13.map"]], capsys)
    assert code == 0
    assert out.count("oracle: agrees") == 2


def test_check_oracle_mismatch_exit(files, capsys, monkeypatch):
    from fractions import Fraction

    import plrot.cli as cli
    from plrot.plmap import OracleResult

    monkeypatch.setattr(cli, "rotation_number_oracle", lambda t, q: OracleResult(Fraction(1, 17), 17, Fraction(0)))
    code, out = run(["rotnum", "--check-oracle", files["ex42.map"]], capsys)
    assert code == 3 and "MISMATCH" in out


def test_flow(files, capsys):
    code, out = run(["flow", "--format", "json", files["ex43.track"]], capsys)
    assert json.loads(out)["circles"] == [4]


def test_track_dot(files, capsys):
    code, out = run(["track", "--stage", "tau", "--dot", files["ex42.map"]], capsys)
    assert out.startswith("digraph tau {")
    from plrot.traintrack import run_pipeline

    assert out.count("->") == len(run_pipeline(example42(2, 2)).tau.edges)
    code, out = run(["track", "--stage", "final", "--format", "json", files["ex42.map"]], capsys)
    doc = json.loads(out)
    assert doc["switches"] == [] and doc["edges"][0]["weight"] == 17


def test_track_stages_text(files, capsys):
    code, out = run(["track", "--stage", "tau0", files["ex42.map"]], capsys)
    assert "6 switches" in out


def test_validate_and_exit_codes(files, capsys):
    code, out = run(["validate", files["ex42.map"], files["bad.map"]], capsys)
    assert code == 1
    assert "NotBijective" in out
    assert main(["rotnum", files["bad.map"]]) == 1
    assert main(["height", str(files["ex42.map"]) + ".missing"]) == 1
    assert main(["gen", "4.2", "--k", "1", "--s", "0"]) == 1


def test_height_markov_oracle(files, capsys):
    code, out = run(["height", files["ex42.map"]], capsys)
    assert out.strip().endswith(": 8")
    code, out = run(["markov", "--format", "json", files["ex42.map"]], capsys)
    assert json.loads(out)["m"] == 8
    code, out = run(["oracle", "--format", "json", files["ex42.map"]], capsys)
    assert json.loads(out)["least_period"] == 17
    assert main(["oracle", "--q-max", "5", files["ex42.map"]]) == 3


def test_bound_check(files, capsys):
    code, out = run(["bound-check", files["ex42.map"], files["rot13.map"]], capsys)
    rows = list(csv.DictReader(out.splitlines()))
    assert code == 0
    assert [r["bound_ok"] for r in rows] == ["yes", "yes"]


def test_gen_roundtrip_bytes(files):
    for name in ("ex42.map", "rot13.map"):
        text = open(files[name]).read()
        assert io.dumps(io.map_to_doc(io.load_map(files[name]))) == text
    text = open(files["ex43.track"]).read()
    assert io.dumps(io.track_to_doc(io.load_track(files["ex43.track"]))) == text


def test_gen_random_corpus(tmp_path, capsys):
    assert main(["gen", "random", "--count", "6", "--seed", "3", "--out-dir", str(tmp_path)]) == 0
    maps = sorted(tmp_path.glob("*.map"))
    assert len(maps) == 6
    code, out = run(["rotnum", "--check-oracle", "--jobs", "2"] + [str(p) for p in maps], capsys)
    assert code == 0


def test_report_writes_csv_and_figures(tmp_path, capsys):
    code, out = run(["report", "--out-dir", str(tmp_path), "--count", "5"], capsys)
    assert code == 0
    for name in ("corpus.csv", "flow_growth.csv", "period_vs_height.png", "flow_growth.png"):
        assert (tmp_path / name).stat().st_size > 0
    rows = list(csv.DictReader(open(tmp_path / "corpus.csv")))
    ex = next(r for r in rows if r["name"] == "ex42_k2_s2")
    assert ex["least_period"] == "17"
    flows = list(csv.DictReader(open(tmp_path / "flow_growth.csv")))
    assert all(int(r["weight"]) == int(r["r1"]) * int(r["r3"]) * 2 ** int(r["r2"]) for r in flows)
