import csv
import json
import subprocess
import sys

import pytest

from pspan.cli import EXIT_DATA, EXIT_FAIL, EXIT_IO, EXIT_OK, EXIT_USAGE, main


@pytest.fixture
def reservoir(tmp_path):
    path = tmp_path / "r.jsonl"
    assert main(["generate", "--amount", "40", "--max-events", "6", "--max-conds", "5", "--random-events",
                 "--random-conds", "--event-labels", "3", "--cond-labels", "5", "--seed", "4",
                 "-o", str(path)]) == EXIT_OK
    return path


def test_generate_is_deterministic_and_writes_metadata(tmp_path, reservoir):
    again = tmp_path / "again.jsonl"
    main(["generate", "--amount", "40", "--max-events", "6", "--max-conds", "5", "--random-events",
          "--random-conds", "--event-labels", "3", "--cond-labels", "5", "--seed", "4", "-o", str(again)])
    assert reservoir.read_text() == again.read_text()
    assert len(reservoir.read_text().splitlines()) == 40
    meta = json.loads((tmp_path / "r.jsonl.meta.json").read_text())
    assert meta["seed"] == 4 and meta["config"]["amount"] == 40


def test_seed_environment_variable_overrides_flag(tmp_path, monkeypatch):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    main(["generate", "--amount", "5", "--seed", "1", "-o", str(a)])
    monkeypatch.setenv("PSPAN_SEED", "1")
    main(["generate", "--amount", "5", "--seed", "99", "-o", str(b)])
    assert a.read_text() == b.read_text()
    monkeypatch.setenv("PSPAN_SEED", "x")
    assert main(["generate", "--amount", "5", "-o", str(b)]) == EXIT_USAGE


def test_plant_mine_validate_pipeline(tmp_path, reservoir, capsys):
    planted, ledger = tmp_path / "p.jsonl", tmp_path / "ledger.json"
    results, report = tmp_path / "res.json", tmp_path / "report.json"
    assert main(["plant", "-i", str(reservoir), "-o", str(planted), "--ledger", str(ledger), "--n", "2",
                 "--g", "4", "--max-conds", "2", "--min-events", "2", "--minsup", "20", "--seed", "4"]) == EXIT_OK
    assert main(["mine", "-i", str(planted), "-o", str(results), "--minsup", "20"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "FD[0]" in out and "elapsed" in out and "peak memory" in out
    assert main(["validate", "-r", str(results), "--ledger", str(ledger), "-o", str(report)]) == EXIT_OK
    assert json.loads(report.read_text())["passed"] is True
    # drop every pattern: the planting nets are no longer found
    data = json.loads(results.read_text())
    data["patterns"] = []
    results.write_text(json.dumps(data))
    assert main(["validate", "-r", str(results), "--ledger", str(ledger)]) == EXIT_FAIL
    assert "missing" in capsys.readouterr().out


def test_oracle_comparison(tmp_path, reservoir):
    results, oracle = tmp_path / "res.json", tmp_path / "oracle.json"
    assert main(["mine", "-i", str(reservoir), "-o", str(results), "--minsup", "4", "--max-events", "3"]) == EXIT_OK
    assert main(["oracle", "-i", str(reservoir), "-o", str(oracle), "--minsup", "4", "--max-events", "3"]) == EXIT_OK
    assert main(["validate", "-r", str(results), "-i", str(reservoir), "--max-events", "3"]) == EXIT_OK
    data = json.loads(results.read_text())
    data["patterns"][0]["support"] += 1
    results.write_text(json.dumps(data))
    assert main(["validate", "-r", str(results), "-i", str(reservoir), "--max-events", "3"]) == EXIT_FAIL


def test_stats_csv(tmp_path, reservoir):
    out = tmp_path / "stats.csv"
    assert main(["stats", "-i", str(reservoir), str(reservoir), "-o", str(out)]) == EXIT_OK
    rows = list(csv.reader(out.read_text().splitlines()))
    assert rows[0] == ["reservoir", "nets", "arn", "aen", "ratio"]
    assert len(rows) == 3 and rows[1][1] == "40"


def test_exit_codes(tmp_path, reservoir):
    res = tmp_path / "res.json"
    assert main(["mine", "-i", str(reservoir), "-o", str(res), "--minsup", "0"]) == EXIT_USAGE
    assert main(["generate", "--amount", "0", "-o", str(res)]) == EXIT_USAGE
    assert main(["generate", "--amount", "2", "--max-conds", "40", "-o", str(res)]) == EXIT_USAGE
    assert main(["mine", "-i", str(tmp_path / "missing.jsonl"), "-o", str(res), "--minsup", "1"]) == EXIT_IO
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "x", "events": []}\nnot json\n')
    assert main(["mine", "-i", str(bad), "-o", str(res), "--minsup", "1"]) == EXIT_DATA
    assert main(["validate", "-r", str(res)]) in (EXIT_IO, EXIT_DATA)
    with pytest.raises(SystemExit) as exc:
        main(["mine"])
    assert exc.value.code == EXIT_USAGE


def test_console_entry_point(tmp_path):
    out = tmp_path / "r.jsonl"
    proc = subprocess.run([sys.executable, "-m", "pspan.cli", "generate", "--amount", "3", "-o", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "wrote 3 nets" in proc.stdout
    version = subprocess.run([sys.executable, "-m", "pspan.cli", "--version"], capture_output=True, text=True)
    assert version.stdout.startswith("pspan ")
