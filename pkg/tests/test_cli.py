"""End-to-end command-line flows: run, trends, replay, exit codes."""
from __future__ import annotations

import json

import pytest

from helpers import passing_trend_rows
from hrcsim.cli import main
from hrcsim.metrics import export_results

PLAN = {"techniques": ["voice", "proactive"], "task_types": ["coupled"],
        "placements": ["scattered"], "seeds": [0, 1]}


def _write_plan(tmp_path):
    p = tmp_path / "plan.json"
    p.write_text(json.dumps(PLAN))
    return p


def test_run_executes_plan_and_reports(tmp_path, capsys):
    rc = main(["run", "--plan", str(_write_plan(tmp_path)),
               "--out", str(tmp_path / "out")])
    out = capsys.readouterr()
    assert rc == 0
    assert "4 trial results ->" in out.out
    assert out.out.count(": ok") == 4
    assert (tmp_path / "out" / "results.csv").exists()
    assert sorted(p.name for p in (tmp_path / "out" / "logs").iterdir()) == [
        "proactive_coupled_scattered_focused_builder_0.jsonl",
        "proactive_coupled_scattered_focused_builder_1.jsonl",
        "voice_coupled_scattered_focused_builder_0.jsonl",
        "voice_coupled_scattered_focused_builder_1.jsonl",
    ]


def test_run_resumes_without_recomputing(tmp_path, capsys):
    plan = _write_plan(tmp_path)
    out_dir = tmp_path / "out"
    main(["run", "--plan", str(plan), "--out", str(out_dir)])
    before = (out_dir / "results.csv").read_bytes()
    capsys.readouterr()
    rc = main(["run", "--plan", str(plan), "--out", str(out_dir)])
    out = capsys.readouterr()
    assert rc == 0
    assert ": ok" not in out.out           # nothing was simulated again
    assert (out_dir / "results.csv").read_bytes() == before


def test_trends_not_evaluable_on_a_sparse_table(tmp_path, capsys):
    out_dir = tmp_path / "out"
    main(["run", "--plan", str(_write_plan(tmp_path)), "--out", str(out_dir),
          "--quiet"])
    capsys.readouterr()
    rc = main(["trends", "--results", str(out_dir / "results.csv")])
    out = capsys.readouterr()
    assert rc == 1
    assert "not evaluable" in out.out


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_trends_pass_on_a_conforming_table(tmp_path, capsys, fmt):
    path = tmp_path / f"results.{fmt}"
    path.write_text(export_results(passing_trend_rows(), fmt))
    rc = main(["trends", "--results", str(path)])
    out = capsys.readouterr()
    assert rc == 0
    assert "13 passed, 0 failed, 0 not evaluable" in out.out


def test_replay_prints_fluency_summary(tmp_path, capsys):
    out_dir = tmp_path / "out"
    main(["run", "--plan", str(_write_plan(tmp_path)), "--out", str(out_dir),
          "--quiet"])
    capsys.readouterr()
    log = out_dir / "logs" / "voice_coupled_scattered_focused_builder_0.jsonl"
    rc = main(["replay", "--log", str(log)])
    out = capsys.readouterr()
    assert rc == 0
    assert "technique=voice task=coupled placement=scattered seed=0" in out.out
    assert "replay ok:" in out.out
    assert "completed=True" in out.out


def test_replay_rejects_a_corrupted_log(tmp_path, capsys):
    out_dir = tmp_path / "out"
    main(["run", "--plan", str(_write_plan(tmp_path)), "--out", str(out_dir),
          "--quiet"])
    capsys.readouterr()
    log = out_dir / "logs" / "voice_coupled_scattered_focused_builder_0.jsonl"
    headless = tmp_path / "broken.jsonl"
    headless.write_text("".join(log.read_text().splitlines(True)[1:]))
    rc = main(["replay", "--log", str(headless)])
    out = capsys.readouterr()
    assert rc == 1
    assert "replay failed:" in out.err


def test_unknown_subcommand_exits_with_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["fly"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        main([])
