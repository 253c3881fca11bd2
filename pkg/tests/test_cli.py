import json

import pytest

from conftest import FIXTURES
from kegamma.cli import main

FAMILY = str(FIXTURES / "family.owl")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_query_worked_example(capsys):
    code, out, _ = run(capsys, "query", FAMILY, "⟨z, x_Eva⟩ ∈ X³_Mother", "--no-timings")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "answers: 1"
    assert json.loads(lines[1]) == {"bindings": {"i": {"z": "Ann"}}, "branches": ["1.2"],
                                    "preimages": {"z": ["Ann"]}}
    assert lines[2:4] == ["branch 1.1: 0 solution(s)", "branch 1.2: 1 solution(s)"]
    assert "open_branches: 2" in lines and "closed_branches: 0" in lines


def test_check_consistent_and_inconsistent(capsys):
    code, out, _ = run(capsys, "check", FAMILY)
    assert code == 0 and "verdict: consistent" in out and "wall_time_ms:" in out
    code, out, _ = run(capsys, "check", str(FIXTURES / "clash.owl"))
    assert code == 1 and "verdict: inconsistent" in out


@pytest.mark.parametrize("name", ["rhs_existential.owl", "builtin_rule.owl"])
def test_rejections(capsys, name):
    code, out, err = run(capsys, "check", str(FIXTURES / name))
    assert code == 2 and out == "" and err.startswith("rejected: line ")


def test_missing_file_and_bad_query(capsys, tmp_path):
    code, _, err = run(capsys, "check", str(tmp_path / "nope.owl"))
    assert code == 2 and "rejected" in err
    code, _, err = run(capsys, "query", FAMILY, "⟨z, Eva ∈ Mother")
    assert code == 2


def test_budget_exceeded(capsys):
    code, out, err = run(capsys, "check", FAMILY, "--budget", "1")
    assert code == 3 and "verdict: budgetExceeded" in out and "budget exceeded" in err


def test_translate_round_trips_through_internal_coding(capsys, tmp_path):
    code, out, _ = run(capsys, "translate", FAMILY)
    assert code == 0 and out.count("\n") == 4 and out.startswith("$OA V0{Eva} $CO V0{Ann}")
    path = tmp_path / "family.4l"
    path.write_text(out, encoding="utf-8")
    code, out2, _ = run(capsys, "translate", str(path))
    assert out2 == out
    code, out3, _ = run(capsys, "query", str(path), "⟨z, x_Eva⟩ ∈ X³_Mother", "--no-timings")
    assert code == 0 and out3.splitlines()[0] == "answers: 1"


def test_reports_are_byte_identical(capsys):
    args = ("query", FAMILY, "⟨z, x_Eva⟩ ∈ X³_Relative", "--no-timings")
    assert run(capsys, *args) == run(capsys, *args)
    args = ("bench", "--k-max", "3", "--random", "3", "--no-timings")
    assert run(capsys, *args) == run(capsys, *args)


def test_modes_agree(capsys):
    a = run(capsys, "query", FAMILY, "⟨z, x_Eva⟩ ∈ X³_Mother", "--no-timings")[1]
    b = run(capsys, "query", FAMILY, "⟨z, x_Eva⟩ ∈ X³_Mother", "--no-timings",
            "--mode", "classicke")[1]
    strip = lambda s: [l for l in s.splitlines() if not l.startswith(("mode:", "peak_"))]
    assert strip(a) == strip(b)


def test_dot_and_trace_files(capsys, tmp_path):
    dot, trace = tmp_path / "t.dot", tmp_path / "t.log"
    code, _, _ = run(capsys, "check", FAMILY, "--dot", str(dot), "--trace", str(trace))
    assert code == 0
    assert dot.read_text().startswith("digraph tableau {")
    lines = trace.read_text().splitlines()
    assert [l.split("\t")[0] for l in lines] == ["PB", "E"]
    assert lines[0].split("\t")[1:4] == ["branch=1", "clause=0", "tau=(Ann,Eva)"]


def test_workers_flag(capsys):
    a = run(capsys, "check", FAMILY, "--no-timings")
    b = run(capsys, "check", FAMILY, "--no-timings", "--workers", "2")
    assert a == b


def test_bench_table(capsys):
    code, out, _ = run(capsys, "bench", "--k-max", "4", "--random", "0")
    rows = out.splitlines()
    assert code == 0 and rows[0].startswith("instance,mode,models,time_ms")
    assert rows[-1].startswith("# speedup classicke/kegamma = ")
    models = [int(r.split(",")[2]) for r in rows[1:-1]]
    assert models == [2, 2, 4, 4, 8, 8, 16, 16]


def test_oracle_check(capsys):
    code, out, _ = run(capsys, "oracle-check", FAMILY)
    assert code == 0 and out.startswith("oracle: consistent")
    code, out, _ = run(capsys, "oracle-check", str(FIXTURES / "clash.owl"))
    assert code == 1 and out == "oracle: inconsistent\n"
