"""Harness sweeps, CSV/JSONL output, CLI subcommands and exit codes."""

from __future__ import annotations

import json

import pytest

from colorcomm.cli import main
from colorcomm.graphs import gen_random_instance
from colorcomm.harness import (
    ExperimentConfig,
    aggregate,
    reports_to_jsonl,
    rows_to_csv,
    run_one,
    sweep,
)


def test_run_one_vertex_report_fields():
    part = gen_random_instance(32, 4, "near-regular", "random", seed=1)
    report = run_one("vertex", part, 1, descriptor=("near-regular", "random"))
    assert report.verified and report.violations == 0
    assert report.total_bits > 0
    assert set(report.phase_bits) >= {"trial", "d1lc-sample", "d1lc-ship"}
    d = report.to_json_dict()
    assert d["problem"] == "vertex" and d["n"] == 32


def test_run_one_edge_small_delta_report():
    part = gen_random_instance(16, 2, "gadget-union", "all-alice", seed=0)
    report = run_one("edge", part, 0, descriptor=("gadget-union", "all-alice"))
    assert report.verified
    assert set(report.phase_bits) >= {"defer", "flags", "cover", "masks", "ship"}
    assert report.phase_bits["defer"] == 0


def test_sweep_and_aggregate_csv():
    config = ExperimentConfig(problem="edge", n_values=[24, 48], delta_values=[3],
                              seeds=4)
    reports = sweep(config)
    assert len(reports) == 8
    rows = aggregate(reports)
    assert len(rows) == 2
    assert all(r.failures == 0 for r in rows)
    csv_text = rows_to_csv(rows)
    header = csv_text.splitlines()[0]
    assert header == "problem,n,delta,meanBitsPerN,maxRounds,meanRounds,failures"
    assert len(csv_text.splitlines()) == 3


def test_empty_sweep_csv_has_header_only():
    assert rows_to_csv([]).strip() == "problem,n,delta,meanBitsPerN,maxRounds,meanRounds,failures"


def test_sweep_reports_are_deterministic():
    config = ExperimentConfig(problem="vertex", n_values=[20], delta_values=[3], seeds=3)
    first = reports_to_jsonl(sweep(config))
    second = reports_to_jsonl(sweep(config))
    # wall_time differs between runs; compare everything else
    strip = lambda text: [
        {k: v for k, v in json.loads(line).items() if k != "wall_time"}
        for line in text.splitlines()]
    assert strip(first) == strip(second)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(problem="nonsense").validate()
    with pytest.raises(ValueError):
        ExperimentConfig(problem="vertex", n_values=[4], delta_values=[9]).validate()
    with pytest.raises(ValueError):
        ExperimentConfig.from_json_dict({"problem": "vertex", "bogus": 1})


def test_cli_gen_and_verify_roundtrip(tmp_path, capsys):
    graph_path = tmp_path / "g.txt"
    rc = main(["gen", "--n", "12", "--delta", "3", "--seed", "4",
               "--out", str(graph_path)])
    assert rc == 0
    assert graph_path.exists()

    # Produce a coloring with the protocol and verify it via the CLI.
    from colorcomm.graphs import read_graph_file
    from colorcomm.runtime import PublicCoins
    from colorcomm.vertexcolor import vertex_coloring_protocol

    part = read_graph_file(str(graph_path))
    coloring, _, _ = vertex_coloring_protocol(part, PublicCoins(1))
    coloring_path = tmp_path / "c.txt"
    lines = ["vertex"] + [f"{v} {c}" for v, c in enumerate(coloring.colors)]
    coloring_path.write_text("\n".join(lines))
    assert main(["verify", str(graph_path), str(coloring_path)]) == 0

    # Tamper with one color: must exit 1 and print the violation.
    bad = list(coloring.colors)
    bad[part.graph.edges[0][0]] = bad[part.graph.edges[0][1]]
    coloring_path.write_text("\n".join(["vertex"] + [f"{v} {c}" for v, c in enumerate(bad)]))
    capsys.readouterr()
    assert main(["verify", str(graph_path), str(coloring_path)]) == 1
    assert "edge-conflict" in capsys.readouterr().out


def test_cli_verify_edge_coloring(tmp_path, capsys):
    graph_path = tmp_path / "g.txt"
    main(["gen", "--n", "16", "--delta", "4", "--seed", "2", "--out", str(graph_path)])
    from colorcomm.edgecolor import edge_coloring_protocol
    from colorcomm.graphs import read_graph_file

    part = read_graph_file(str(graph_path))
    coloring, _ = edge_coloring_protocol(part)
    rows = ["edge"] + [f"{u} {v} {c} {coloring.reporter[(u, v)]}"
                       for (u, v), c in sorted(coloring.colors.items())]
    coloring_path = tmp_path / "c.txt"
    coloring_path.write_text("\n".join(rows))
    assert main(["verify", str(graph_path), str(coloring_path)]) == 0


def test_cli_run_jsonl(tmp_path):
    out = tmp_path / "runs.jsonl"
    rc = main(["run", "--problem", "edge", "--n", "16", "--delta", "2",
               "--seeds", "3", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 3
    first = json.loads(lines[0])
    assert first["verified"] is True


def test_cli_bench_csv(tmp_path):
    out = tmp_path / "bench.csv"
    rc = main(["bench", "--problem", "edge", "--n", "16", "32", "--delta", "2",
               "--seeds", "2", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 3


def test_cli_malformed_files_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("not a graph")
    good = tmp_path / "g.txt"
    main(["gen", "--n", "8", "--delta", "2", "--seed", "0", "--out", str(good)])
    assert main(["verify", str(bad), str(good)]) == 2
    missing = tmp_path / "nope.txt"
    assert main(["verify", str(missing), str(missing)]) == 2


def test_cli_zec(tmp_path, capsys):
    from colorcomm.zecgame import ZecStrategy

    table = [[float(p) for p in row] for row in ZecStrategy.uniform().table]
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"alice": table, "bob": table}))
    assert main(["zec", str(path)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["winProbability"] == pytest.approx(206 / 567)
    assert out["witness"]["case"] == 2
    assert out["witness"]["failureBound"] == "1/11025"
