"""Seeded experiment suites and their CSV reports.

Every random choice in an experiment is drawn from a seed derived from one
master seed with :func:`derive_seed`, so re-running an experiment with the
same master seed reproduces every CSV cell except the ``elapsed_s`` column.
"""

from __future__ import annotations

import csv
import io
import zlib
from dataclasses import dataclass, field, replace
from statistics import fmean

import numpy as np

from .baselines import ACOConfig, aco_optimize, brute_force, dspa_route
from .errors import InputError
from .ga import GAConfig, optimize
from .topology import TopologyProfile, generate_flows, generate_topology

COLUMNS = (
    "row_type",
    "experiment",
    "profile",
    "algorithm",
    "ants",
    "flow_count",
    "seed",
    "runs",
    "before_max_load",
    "after_max_load",
    "effectiveness_pct",
    "elapsed_s",
    "stop_reason",
)
TIMING_COLUMNS = ("elapsed_s",)


def derive_seed(master: int, *keys) -> int:
    """64-bit seed for the sub-task named by ``keys``.

    ``SeedSequence([master, *encoded keys]).generate_state(2)`` packed as two
    32-bit words; string keys are encoded with CRC-32.
    """
    words = [master]
    for key in keys:
        words.append(zlib.crc32(key.encode()) if isinstance(key, str) else int(key))
    lo, hi = np.random.SeedSequence(words).generate_state(2, dtype=np.uint32).tolist()
    return (hi << 32) | lo


def effectiveness(before: float, after: float) -> int | None:
    """Percentage reduction of the max link load, ``None`` when before is 0."""
    if before == 0:
        return None
    return round(100 * (1 - after / before))


@dataclass
class RunRecord:
    experiment: str
    profile: str
    algorithm: str
    flow_count: int
    seed: int
    after_max_load: int
    elapsed_s: float
    before_max_load: int | None = None
    stop_reason: str = ""
    ants: int | None = None

    def __post_init__(self):
        # Stored at the printed resolution so aggregates recompute exactly.
        self.elapsed_s = round(self.elapsed_s, 6)


@dataclass
class ExperimentReport:
    experiment_id: str
    records: list[RunRecord] = field(default_factory=list)

    def groups(self):
        out: dict[tuple, list[RunRecord]] = {}
        for r in self.records:
            out.setdefault((r.profile, r.algorithm, r.ants, r.flow_count), []).append(r)
        return out

    def aggregates(self) -> list[dict]:
        rows = []
        groups = sorted(self.groups().items(), key=lambda kv: (kv[0][0], kv[0][3], kv[0][1], kv[0][2] or 0))
        for (profile, algorithm, ants, flow_count), recs in groups:
            after = fmean(r.after_max_load for r in recs)
            befores = [r.before_max_load for r in recs if r.before_max_load is not None]
            before = fmean(befores) if len(befores) == len(recs) else None
            eff = effectiveness(before, after) if before is not None else None
            rows.append(
                {
                    "profile": profile,
                    "algorithm": algorithm,
                    "ants": ants,
                    "flow_count": flow_count,
                    "runs": len(recs),
                    "before_max_load": before,
                    "after_max_load": after,
                    "effectiveness_pct": eff,
                    "elapsed_s": round(fmean(r.elapsed_s for r in recs), 6),
                }
            )
        return rows

    def mean(self, column: str, **where) -> float:
        recs = [r for r in self.records if all(getattr(r, k) == v for k, v in where.items())]
        if not recs:
            raise KeyError(where)
        return fmean(getattr(r, column) for r in recs)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        ordered = sorted(
            self.records,
            key=lambda r: (r.profile, r.flow_count, r.seed, r.algorithm, r.ants or 0),
        )
        for r in ordered:
            writer.writerow(
                [
                    "run",
                    self.experiment_id,
                    r.profile,
                    r.algorithm,
                    _cell(r.ants),
                    r.flow_count,
                    r.seed,
                    1,
                    _cell(r.before_max_load),
                    r.after_max_load,
                    _na(effectiveness(r.before_max_load, r.after_max_load))
                    if r.before_max_load is not None
                    else "",
                    f"{r.elapsed_s:.6f}",
                    r.stop_reason,
                ]
            )
        for a in self.aggregates():
            writer.writerow(
                [
                    "mean",
                    self.experiment_id,
                    a["profile"],
                    a["algorithm"],
                    _cell(a["ants"]),
                    a["flow_count"],
                    "",
                    a["runs"],
                    _cell(a["before_max_load"]),
                    repr(a["after_max_load"]),
                    _na(a["effectiveness_pct"]) if a["before_max_load"] is not None else "",
                    f"{a['elapsed_s']:.6f}",
                    "",
                ]
            )
        return buf.getvalue()


def _cell(value):
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else value


def _na(value):
    return "NA" if value is None else value


def _check_runs(runs):
    if runs < 1:
        raise InputError("an experiment needs at least one run")


def _ga_config(base: GAConfig, profile: TopologyProfile | None, seed: int, weight_max: int | None) -> GAConfig:
    v = weight_max or (profile.weight_max if profile else base.weight_max)
    return replace(base, weight_max=v, rng_seed=seed)


def run_effectiveness(
    profile: TopologyProfile,
    flow_counts,
    runs: int,
    master_seed: int = 0,
    ga: GAConfig = GAConfig(),
    weight_max: int | None = None,
) -> ExperimentReport:
    """Max load before (one random weight draw) and after the GA, per flow count.

    One topology per profile; flows are redrawn for every run.
    """
    _check_runs(runs)
    profile.check()
    graph = generate_topology(profile, derive_seed(master_seed, "topology", profile.name))
    report = ExperimentReport("effectiveness")
    for fc in flow_counts:
        for run in range(runs):
            seed = derive_seed(master_seed, "run", profile.name, fc, run)
            flows = generate_flows(graph, fc, derive_seed(seed, "flows"))
            config = _ga_config(ga, profile, derive_seed(seed, "ga"), weight_max)
            before = dspa_route(graph, flows, config.weight_max, derive_seed(seed, "before"))
            after = optimize(graph, flows, config)
            report.records.append(
                RunRecord("effectiveness", profile.name, "SDNGALB", fc, seed, after.best_fitness,
                          after.elapsed, before.max_load, after.stop_reason)
            )
    return report


def run_timing(
    profiles, runs: int, master_seed: int = 0, ga: GAConfig = GAConfig(), weight_max: int | None = None
) -> ExperimentReport:
    """GA solve time per profile.

    Topology and flows are both redrawn for every run, so a profile's mean
    is not tied to one particular graph.
    """
    _check_runs(runs)
    report = ExperimentReport("timing")
    for profile in profiles:
        profile.check()
        for run in range(runs):
            seed = derive_seed(master_seed, "run", profile.name, profile.flow_count, run)
            graph = generate_topology(profile, derive_seed(seed, "topology"))
            flows = generate_flows(graph, profile.flow_count, derive_seed(seed, "flows"))
            config = _ga_config(ga, profile, derive_seed(seed, "ga"), weight_max)
            before = dspa_route(graph, flows, config.weight_max, derive_seed(seed, "before"))
            after = optimize(graph, flows, config)
            report.records.append(
                RunRecord("timing", profile.name, "SDNGALB", profile.flow_count, seed,
                          after.best_fitness, after.elapsed, before.max_load, after.stop_reason)
            )
    return report


def run_compare(
    profile: TopologyProfile,
    flow_count: int,
    runs: int,
    master_seed: int = 0,
    ga: GAConfig = GAConfig(),
    ants=(5,),
    aco_iterations: int = 50,
    weight_max: int | None = None,
) -> ExperimentReport:
    """GA, ant colony and random-weight routing on the same instances.

    Each run draws its own topology and flows.
    """
    _check_runs(runs)
    profile.check()
    if not ants:
        raise InputError("at least one ant count is required")
    report = ExperimentReport("compare")
    for run in range(runs):
        seed = derive_seed(master_seed, "run", profile.name, flow_count, run)
        graph = generate_topology(profile, derive_seed(seed, "topology"))
        flows = generate_flows(graph, flow_count, derive_seed(seed, "flows"))
        config = _ga_config(ga, profile, derive_seed(seed, "ga"), weight_max)
        res = optimize(graph, flows, config)
        report.records.append(
            RunRecord("compare", profile.name, "SDNGALB", flow_count, seed, res.best_fitness,
                      res.elapsed, stop_reason=res.stop_reason)
        )
        for count in ants:
            aco = aco_optimize(
                graph, flows,
                ACOConfig(ant_count=count, iterations=aco_iterations, rng_seed=derive_seed(seed, "aco", count)),
            )
            report.records.append(
                RunRecord("compare", profile.name, "ACOLB", flow_count, seed, aco.max_load,
                          aco.elapsed, ants=count)
            )
        dspa = dspa_route(graph, flows, config.weight_max, derive_seed(seed, "dspa"))
        report.records.append(
            RunRecord("compare", profile.name, "DSPA", flow_count, seed, dspa.max_load, dspa.elapsed)
        )
    return report


def run_bruteforce_check(
    profile: TopologyProfile, runs: int, master_seed: int = 0, ga: GAConfig = GAConfig()
) -> ExperimentReport:
    """GA against the exhaustive optimum on small instances.

    ``before_max_load`` holds the exhaustive optimum, ``after_max_load`` the GA result.
    """
    _check_runs(runs)
    profile.check()
    report = ExperimentReport("bruteforce")
    for run in range(runs):
        seed = derive_seed(master_seed, "run", profile.name, profile.flow_count, run)
        graph = generate_topology(profile, derive_seed(seed, "topology"))
        flows = generate_flows(graph, profile.flow_count, derive_seed(seed, "flows"))
        config = _ga_config(ga, profile, derive_seed(seed, "ga"), None)
        exact = brute_force(graph, flows, config.weight_max)
        res = optimize(graph, flows, config)
        report.records.append(
            RunRecord("bruteforce", profile.name, "BF", profile.flow_count, seed, exact.max_load, exact.elapsed)
        )
        report.records.append(
            RunRecord("bruteforce", profile.name, "SDNGALB", profile.flow_count, seed, res.best_fitness,
                      res.elapsed, exact.max_load, res.stop_reason)
        )
    return report


def strip_timing(csv_text: str) -> str:
    """CSV text with wall-clock columns removed, for determinism checks."""
    rows = list(csv.reader(io.StringIO(csv_text)))
    if not rows:
        return ""
    drop = {rows[0].index(c) for c in TIMING_COLUMNS if c in rows[0]}
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow([c for k, c in enumerate(row) if k not in drop])
    return buf.getvalue()
