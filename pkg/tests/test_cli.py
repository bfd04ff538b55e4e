"""Exercise the command-line interface through main() and the module entry."""

import json
import subprocess
import sys

import pytest

from cakecut.cli import EXIT_AUDIT, EXIT_INVALID, EXIT_OK, main


def run(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def gen_instance(tmp_path, capsys, n=3, family="random", seed=5):
    path = tmp_path / "inst.json"
    code, _, _ = run(["gen", "--n", str(n), "--family", family,
                      "--seed", str(seed), "-o", str(path)], capsys)
    assert code == EXIT_OK
    return path


def test_gen_writes_parseable_instance(tmp_path, capsys):
    path = gen_instance(tmp_path, capsys)
    obj = json.loads(path.read_text())
    assert len(obj["agents"]) == 3
    assert set(obj["valuations"]) >= {a["valuation"] for a in obj["agents"]}


def test_gen_accepts_long_family_spelling(tmp_path, capsys):
    path = tmp_path / "blocks.json"
    code, _, _ = run(["gen", "--n", "3", "--family", "disjoint-blocks",
                      "-o", str(path)], capsys)
    assert code == EXIT_OK and path.exists()


def test_solve_then_audit_round_trip(tmp_path, capsys):
    inst = gen_instance(tmp_path, capsys)
    alloc = tmp_path / "alloc.json"
    code, out, _ = run(["solve", str(inst), "--delta", "1/10", "-o", str(alloc)], capsys)
    assert code == EXIT_OK
    assert "max_envy=" in out

    obj = json.loads(alloc.read_text())
    assert obj["delta"] == "1/10"
    assert obj["audit"]["passed"] is True
    assert len(obj["pieces"]) == 3

    code, out, _ = run(["audit", str(inst), str(alloc)], capsys)
    assert code == EXIT_OK
    assert "ok   additive_envy_bound" in out


def test_audit_flags_a_tampered_allocation(tmp_path, capsys):
    inst = gen_instance(tmp_path, capsys, n=2, seed=11)
    alloc = tmp_path / "alloc.json"
    run(["solve", str(inst), "--delta", "1/10", "-o", str(alloc)], capsys)
    obj = json.loads(alloc.read_text())
    # hand everything to agent 1
    obj["pieces"] = [{"agent": 1, "lo": "0", "hi": "1"},
                     {"agent": 2, "lo": None, "hi": None}]
    alloc.write_text(json.dumps(obj))

    code, out, err = run(["audit", str(inst), str(alloc)], capsys)
    assert code == EXIT_AUDIT
    assert "FAIL" in out
    diagnostic = json.loads(err)
    assert diagnostic["error"] == "audit"
    assert "additive_envy_bound" in diagnostic["failed"]


def test_validation_failures_exit_2_with_json_diagnostics(tmp_path, capsys):
    inst = gen_instance(tmp_path, capsys, n=2, seed=3)

    code, _, err = run(["solve", str(inst), "--delta", "0.1"], capsys)
    assert code == EXIT_INVALID
    assert json.loads(err)["error"] == "validation"

    code, _, err = run(["solve", str(tmp_path / "nope.json"), "--delta", "1/10"], capsys)
    assert code == EXIT_INVALID

    code, _, err = run(["solve", str(inst), "--delta", "2"], capsys)
    assert code == EXIT_INVALID


def test_bounded_rejects_too_many_distinct_valuations(tmp_path, capsys):
    inst = gen_instance(tmp_path, capsys, n=4, family="random", seed=2)
    code, _, err = run(["bounded", str(inst), "--epsilon", "1/4"], capsys)
    assert code == EXIT_INVALID
    assert "distinct" in json.loads(err)["message"]


def test_bounded_solves_grouped_instances(tmp_path, capsys):
    inst = tmp_path / "grouped.json"
    run(["gen", "--n", "12", "--family", "grouped", "--distinct", "2",
         "--seed", "4", "-o", str(inst)], capsys)
    alloc = tmp_path / "alloc.json"
    code, _, _ = run(["bounded", str(inst), "--epsilon", "1/4", "-o", str(alloc)], capsys)
    assert code == EXIT_OK
    obj = json.loads(alloc.read_text())
    assert obj["epsilon"] == "1/4"
    assert obj["audit"]["passed"] is True


def test_solve_mult_records_both_parameters(tmp_path, capsys):
    inst = gen_instance(tmp_path, capsys, n=2, seed=8)
    alloc = tmp_path / "alloc.json"
    code, _, _ = run(["solve-mult", str(inst), "--c", "1/10", "-o", str(alloc)], capsys)
    assert code == EXIT_OK
    obj = json.loads(alloc.read_text())
    assert obj["c"] == "1/10" and obj["delta"] == "1/80"
    names = [c["name"] for c in obj["audit"]["checks"]]
    assert "mult_ratio_bound" in names


def test_seeded_solves_are_byte_identical(tmp_path, capsys):
    inst = gen_instance(tmp_path, capsys, n=4, seed=21)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["solve", str(inst), "--delta", "1/10", "-o", str(a)], capsys)
    run(["solve", str(inst), "--delta", "1/10", "-o", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_outputs_default_into_outdir_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CAKECUT_OUTDIR", str(tmp_path))
    code, out, _ = run(["gen", "--n", "2", "--seed", "1"], capsys)
    assert code == EXIT_OK
    assert (tmp_path / "instance-random-n2-seed1.json").exists()
    assert str(tmp_path) in out


def test_bench_report_aggregates_runs(tmp_path, capsys):
    report = tmp_path / "bench.json"
    code, out, _ = run(["bench", "--count", "6", "--n", "2..3", "--delta", "1/10",
                        "--seed", "2", "--oracle-resolution", "24",
                        "-o", str(report)], capsys)
    assert code == EXIT_OK
    assert "0 violations" in out
    obj = json.loads(report.read_text())
    assert obj["count"] == 6 and obj["violations"] == 0
    assert [r["n"] for r in obj["runs"]] == [2, 3, 2, 3, 2, 3]
    assert all("oracle_min_envy" in r for r in obj["runs"])
    assert obj["total_eval_queries"] > 0


def test_bench_rejects_bad_range(capsys):
    code, _, err = run(["bench", "--count", "1", "--n", "8..2"], capsys)
    assert code == EXIT_INVALID
    assert "range" in json.loads(err)["message"]


def test_module_entry_point(tmp_path):
    inst = tmp_path / "inst.json"
    proc = subprocess.run(
        [sys.executable, "-m", "cakecut", "gen", "--n", "2", "--seed", "0",
         "-o", str(inst)],
        capture_output=True, text=True)
    assert proc.returncode == EXIT_OK, proc.stderr
    assert inst.exists()
