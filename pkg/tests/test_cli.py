"""End-to-end checks of the command-line interface."""

import json
import os

import pytest

from xorforest.cli import main
from xorforest.layered_connectivity import LayerStack


def write_workload(path, n, lines):
    with open(path, "w") as fh:
        fh.write(f"{n} {len(lines)}\n")
        for line in lines:
            fh.write(line + "\n")


def test_run_answers_queries(tmp_path, capsys):
    path = tmp_path / "w.txt"
    write_workload(path, 4, ["I 0 1", "Q 0 1", "Q 2 3"])
    rc = main(["run", "--workload", str(path)])
    assert rc == 0
    assert capsys.readouterr().out == "1\n0\n"


def test_run_reflects_deletion(tmp_path, capsys):
    path = tmp_path / "w.txt"
    write_workload(path, 4, ["I 0 1", "D 0 1", "Q 0 1"])
    rc = main(["run", "--workload", str(path)])
    assert rc == 0
    assert capsys.readouterr().out == "0\n"


def test_run_rejects_invalid_file_with_line_number(tmp_path, capsys):
    path = tmp_path / "w.txt"
    write_workload(path, 4, ["I 0 1", "I 0 1", "Q 0 1"])
    rc = main(["run", "--workload", str(path)])
    assert rc == 1
    err = capsys.readouterr().err
    assert "duplicate insert" in err
    assert "3" in err  # header is line 1, the bad insert is line 3


def test_run_missing_file(tmp_path, capsys):
    rc = main(["run", "--workload", str(tmp_path / "nope.txt")])
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_run_writes_stats_document(tmp_path, capsys):
    path = tmp_path / "w.txt"
    out = tmp_path / "stats.json"
    write_workload(path, 4, ["I 0 1", "Q 0 1"])
    rc = main(["run", "--workload", str(path), "--out", str(out),
               "--omit-timings"])
    assert rc == 0
    capsys.readouterr()
    doc = json.loads(out.read_text())
    assert doc["format_version"] == 1
    assert doc["mode"] == "layered"
    assert doc["n"] == 4
    assert doc["ops"] == {"I": 1, "D": 0, "Q": 1}
    assert doc["timings"] is None


def test_gen_writes_loadable_workload(tmp_path, capsys):
    out = tmp_path / "w.txt"
    rc = main(["gen", "--n", "16", "--ops", "200", "--seed", "7",
               "--out", str(out)])
    assert rc == 0
    capsys.readouterr()
    rc = main(["run", "--workload", str(out), "--mode", "oracle"])
    assert rc == 0


def test_gen_deterministic_and_stdout_matches_file(tmp_path, capsys):
    out = tmp_path / "w.txt"
    main(["gen", "--n", "16", "--ops", "100", "--seed", "3", "--out", str(out)])
    capsys.readouterr()
    rc = main(["gen", "--n", "16", "--ops", "100", "--seed", "3"])
    assert rc == 0
    assert capsys.readouterr().out == out.read_text()


def test_insert_only_run_matches_oracle_exactly(tmp_path, capsys):
    # With no deletions the top forest tracks connectivity exactly, so
    # layered and oracle replays must print identical answer streams.
    out = tmp_path / "w.txt"
    main(["gen", "--n", "32", "--ops", "400", "--seed", "11",
          "--mix", "60:0:40", "--out", str(out)])
    capsys.readouterr()
    main(["run", "--workload", str(out), "--mode", "layered"])
    layered = capsys.readouterr().out
    main(["run", "--workload", str(out), "--mode", "oracle"])
    oracle = capsys.readouterr().out
    assert layered == oracle
    assert layered.count("\n") > 0


def test_fuzz_reports_clean_stats(capsys):
    rc = main(["fuzz", "--n", "16", "--ops", "300", "--seed", "5",
               "--omit-timings"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["mode"] == "differential"
    assert doc["impossible_mismatches"] == 0
    assert doc["ops"]["I"] + doc["ops"]["D"] + doc["ops"]["Q"] == 300
    assert doc["cutset_ops"]["insert"]["count"] == doc["ops"]["I"]


def test_fuzz_zero_ops(capsys):
    rc = main(["fuzz", "--n", "8", "--ops", "0", "--omit-timings"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["ops"] == {"I": 0, "D": 0, "Q": 0}
    assert doc["query_mismatches"] == 0


def test_fuzz_byte_identical_given_seed(capsys):
    args = ["fuzz", "--n", "16", "--ops", "200", "--seed", "9",
            "--omit-timings"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first


def test_fuzz_boosted_mode(capsys):
    rc = main(["fuzz", "--n", "16", "--ops", "150", "--seed", "2",
               "--mode", "boosted", "--copies", "2", "--omit-timings"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["mode"] == "boosted"
    assert doc["impossible_mismatches"] == 0


def test_measure_table(capsys):
    rc = main(["measure", "--n", "32", "--cut-sizes", "0,1",
               "--trials", "50", "--seed", "1"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "cut_size\ttrials\thits\trate\tlcb99"
    row0 = lines[1].split("\t")
    row1 = lines[2].split("\t")
    assert row0[0] == "0" and float(row0[3]) == 0.0
    assert row1[0] == "1" and float(row1[3]) == 1.0


def test_bench_table_and_jobs_equivalence(capsys):
    args = ["bench", "--n-grid", "8,16", "--modes", "layered", "--ops", "120",
            "--seed", "4", "--omit-timings"]
    rc = main(args + ["--jobs", "1"])
    assert rc == 0
    serial = capsys.readouterr().out
    rc = main(args + ["--jobs", "2"])
    assert rc == 0
    assert capsys.readouterr().out == serial
    lines = serial.strip().split("\n")
    assert lines[0].split("\t")[:2] == ["n", "mode"]
    assert len(lines) == 3
    assert lines[1].split("\t")[0] == "8"
    assert lines[2].split("\t")[0] == "16"


def test_bench_both_modes_rows(capsys):
    rc = main(["bench", "--n-grid", "8", "--modes", "layered,boosted",
               "--ops", "80", "--omit-timings"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert [row.split("\t")[1] for row in lines[1:]] == ["layered", "boosted"]


def test_figures_are_rendered(tmp_path, capsys):
    figdir = tmp_path / "figs"
    rc = main(["fuzz", "--n", "16", "--ops", "200", "--check-cadence", "50",
               "--figures", str(figdir), "--out", str(tmp_path / "s.json")])
    assert rc == 0
    capsys.readouterr()
    pngs = sorted(os.listdir(figdir))
    assert any(name.startswith("fuzz_") and name.endswith(".png")
               for name in pngs)
    for name in pngs:
        assert (figdir / name).stat().st_size > 0


def test_measure_figure(tmp_path, capsys):
    figdir = tmp_path / "figs"
    rc = main(["measure", "--n", "16", "--cut-sizes", "1,2", "--trials", "30",
               "--figures", str(figdir)])
    assert rc == 0
    capsys.readouterr()
    assert any(name.endswith(".png") for name in os.listdir(figdir))


def test_soundness_violation_exits_two(tmp_path, capsys, monkeypatch):
    path = tmp_path / "w.txt"
    write_workload(path, 4, ["I 0 1", "Q 2 3"])
    monkeypatch.setattr(LayerStack, "query", lambda self, u, v: True)
    rc = main(["run", "--workload", str(path), "--mode", "differential"])
    assert rc == 2
    assert "soundness" in capsys.readouterr().err


def test_usage_error_exits_one(capsys):
    assert main(["fuzz", "--mix", "banana"]) == 1
    capsys.readouterr()
    assert main(["nonsense"]) == 1
    capsys.readouterr()


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert "run" in capsys.readouterr().out


def test_invalid_combination_exits_one(capsys):
    # copies is meaningful only in boosted mode
    rc = main(["fuzz", "--n", "8", "--ops", "10", "--copies", "3"])
    assert rc == 1
    assert "copies" in capsys.readouterr().err


def test_fail_on_mismatch_gate(tmp_path, capsys, monkeypatch):
    # Force a one-sided miss: structure always answers False, oracle
    # knows 0-1 are connected. The gate must trip with exit code 1.
    path = tmp_path / "w.txt"
    write_workload(path, 4, ["I 0 1", "Q 0 1"])
    monkeypatch.setattr(LayerStack, "query", lambda self, u, v: False)
    rc = main(["run", "--workload", str(path), "--mode", "differential",
               "--fail-on-mismatch"])
    assert rc == 1
    assert "mismatch" in capsys.readouterr().err
