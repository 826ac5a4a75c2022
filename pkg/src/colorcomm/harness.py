"""Experiment harness: seeded runs, independent verification, sweeps, reports.

Every run re-verifies the protocol output with the graph-side checkers; a
report never trusts the protocol's own bookkeeping.  Reports serialize to
JSON-lines, sweeps aggregate to CSV rows.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field
from multiprocessing import Pool

from . import edgecolor, vertexcolor
from .graphs import (
    EdgePartition,
    gen_random_instance,
    verify_edge_coloring,
    verify_vertex_coloring,
)
from .runtime import PublicCoins, Transcript
from .vertexcolor import DEFAULT_PARAMS, ProtocolParams

PROBLEMS = ("vertex", "edge")

EDGE_PHASES = ("defer", "flags", "cover", "masks", "ship")
VERTEX_PHASES = ("trial", "d1lc-sample", "d1lc-ship")


@dataclass
class ExperimentConfig:
    problem: str
    n_values: list[int] = field(default_factory=lambda: [256])
    delta_values: list[int] = field(default_factory=lambda: [8])
    model: str = "near-regular"
    partition: str = "random"
    seeds: int = 50
    list_multiplier: int = DEFAULT_PARAMS.list_multiplier
    ship_threshold: int = DEFAULT_PARAMS.ship_threshold
    solver_restarts: int = DEFAULT_PARAMS.solver_restarts
    round_cap: int = DEFAULT_PARAMS.round_cap

    def params(self) -> ProtocolParams:
        return ProtocolParams(self.list_multiplier, self.ship_threshold,
                              self.solver_restarts, self.round_cap)

    def validate(self) -> None:
        if self.problem not in PROBLEMS:
            raise ValueError(f"unknown problem {self.problem!r}")
        if self.seeds < 1:
            raise ValueError("need at least one seed")
        for n in self.n_values:
            for delta in self.delta_values:
                if delta > n - 1:
                    raise ValueError(f"delta {delta} infeasible at n={n}")

    @staticmethod
    def from_json_dict(data: dict) -> "ExperimentConfig":
        known = {f for f in ExperimentConfig.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return ExperimentConfig(**data)


@dataclass
class RunReport:
    problem: str
    n: int
    delta: int
    model: str
    partition: str
    seed: int
    total_bits: int
    total_rounds: int
    phase_bits: dict[str, int]
    verified: bool
    violations: int
    wall_time: float

    def to_json_dict(self) -> dict:
        return asdict(self)


def _phase_breakdown(transcript: Transcript, declared: tuple[str, ...]) -> dict[str, int]:
    got = transcript.phase_bits()
    out = {phase: got.get(phase, 0) for phase in declared}
    for phase, bits in got.items():
        if phase not in out:
            out[phase] = bits
    return out


def run_one(problem: str, partition: EdgePartition, seed: int,
            params: ProtocolParams = DEFAULT_PARAMS,
            descriptor: tuple[str, str] = ("?", "?")) -> RunReport:
    """Execute one protocol run and re-verify its output independently."""
    g = partition.graph
    delta = g.max_degree
    start = time.perf_counter()
    if problem == "vertex":
        coloring, transcript, _ = vertexcolor.vertex_coloring_protocol(
            partition, PublicCoins(seed), params)
        violations = verify_vertex_coloring(g, coloring, delta + 1)
        phases = _phase_breakdown(transcript, VERTEX_PHASES)
    elif problem == "edge":
        coloring, transcript = edgecolor.edge_coloring_protocol(partition)
        palette = max(1, 2 * delta - 1)
        violations = verify_edge_coloring(partition, coloring, palette)
        phases = _phase_breakdown(transcript, EDGE_PHASES)
    else:
        raise ValueError(f"unknown problem {problem!r}")
    elapsed = time.perf_counter() - start
    return RunReport(problem, g.n, delta, descriptor[0], descriptor[1], seed,
                     transcript.total_bits, transcript.total_rounds, phases,
                     not violations, len(violations), elapsed)


def _run_point(args) -> RunReport:
    problem, n, delta, model, partition_kind, seed, params = args
    instance = gen_random_instance(n, delta, model, partition_kind, seed)
    return run_one(problem, instance, seed, params, (model, partition_kind))


def sweep(config: ExperimentConfig, jobs: int = 1) -> list[RunReport]:
    """All (n, delta, seed) combinations of the config, canonically ordered."""
    config.validate()
    params = config.params()
    tasks = [(config.problem, n, delta, config.model, config.partition, seed, params)
             for n in config.n_values
             for delta in config.delta_values
             for seed in range(config.seeds)]
    if jobs > 1:
        with Pool(jobs) as pool:
            reports = pool.map(_run_point, tasks, chunksize=8)
    else:
        reports = [_run_point(t) for t in tasks]
    reports.sort(key=lambda r: (r.n, r.delta, r.seed))
    return reports


@dataclass
class SweepRow:
    problem: str
    n: int
    delta: int
    mean_bits_per_n: float
    max_rounds: int
    mean_rounds: float
    failures: int


def aggregate(reports: list[RunReport]) -> list[SweepRow]:
    groups: dict[tuple[int, int], list[RunReport]] = {}
    for r in reports:
        groups.setdefault((r.n, r.delta), []).append(r)
    rows = []
    for (n, delta), rs in sorted(groups.items()):
        rows.append(SweepRow(
            problem=rs[0].problem, n=n, delta=delta,
            mean_bits_per_n=sum(r.total_bits for r in rs) / len(rs) / n,
            max_rounds=max(r.total_rounds for r in rs),
            mean_rounds=sum(r.total_rounds for r in rs) / len(rs),
            failures=sum(0 if r.verified else 1 for r in rs)))
    return rows


CSV_COLUMNS = ("problem", "n", "delta", "meanBitsPerN", "maxRounds", "meanRounds", "failures")


def rows_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([r.problem, r.n, r.delta, f"{r.mean_bits_per_n:.4f}",
                         r.max_rounds, f"{r.mean_rounds:.2f}", r.failures])
    return buf.getvalue()


def reports_to_jsonl(reports: list[RunReport]) -> str:
    return "\n".join(json.dumps(r.to_json_dict()) for r in reports) + ("\n" if reports else "")
