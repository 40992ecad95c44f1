"""Experiment driver: scenario files, seeded batches, result tables, paradox
flags, and steering sweeps.

A scenario file is the line-oriented topology format plus a handful of
harness directives:

    name <scenario name>
    bedge <from> <to>        link present only in network variant B
    row <rate> [<rate> ...]  one demand-rate vector per table row
    warmup <waves>           waves excluded from measurement (default 100)
    waves <total>            total waves per run (default 300)
    seeds <n>                seed count for stochastic policies (default 20)
    algos <name> [...]       algorithm roster (default ispa fk mb)
    steering <f> [...]       steering values for the mb policy (default 0.5)
    sweeprow <rate> [...]    row the steering sweep focuses on (default: all)

Variant A uses the `edge` lines alone; variant B adds the `bedge` lines.
Each `row` carries one packets-per-wave rate per `demand` line, in order.
"""

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

from .agents import POLICY_NAMES, run
from .engine import WaveSchedule
from .netmodel import Topology, parse_scenario, strip_comment


class HarnessError(ValueError):
    """Raised for malformed scenarios, rosters, or table lookups."""


CORE_DIRECTIVES = ("node", "edge", "demand", "schedule")
DETERMINISTIC = ("ispa", "fk")


@dataclass
class Scenario:
    """One experiment family: a topology pair, load rows, and run settings."""

    name: str
    core_lines: list
    bedges: list
    demands: list                 # (source, dest, base rate)
    rows: list                    # tuples of per-demand rates
    L: object                     # int or "auto"
    W: int
    warmup: int = 100
    waves: int = 300
    seeds: int = 20
    algos: tuple = ("ispa", "fk", "mb")
    steering: tuple = (0.5,)
    sweeprow: tuple = None

    @property
    def variants(self):
        return ("a", "b") if self.bedges else ("a",)

    def topology_text(self, variant="a", row=None) -> str:
        """Assemble the plain topology description for one variant and row."""
        if variant not in self.variants:
            raise HarnessError(f"scenario {self.name} has no variant {variant!r}")
        rates = self.rows[0] if row is None and self.rows else row
        lines = list(self.core_lines)
        if variant == "b":
            lines.extend(f"edge {u} {v}" for u, v in self.bedges)
        for (s, d, base), rate in zip(self.demands, rates or [n for _, _, n in self.demands]):
            lines.append(f"demand {s} {d} {rate}")
        return "\n".join(lines) + "\n"

    def topology(self, variant="a", row=None) -> Topology:
        return parse_scenario(self.topology_text(variant, row))[0]

    def schedule(self, waves=None) -> WaveSchedule:
        """The run timing, resolving an auto wave length against variant B."""
        L = self.L
        if L == "auto":
            L = self.topology(self.variants[-1]).longest_path_length()
        return WaveSchedule(L=L, W=self.W, measure_start=self.warmup,
                            total_waves=waves or self.waves)


def parse_scenario_file(text: str, fallback_name="scenario") -> Scenario:
    """Split a scenario file into harness directives and core topology lines."""
    name = fallback_name
    core, bedges, demands, rows = [], [], [], []
    L, W = None, None
    settings = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = strip_comment(raw)
        if not line:
            continue
        kind, *args = line.split()
        try:
            if kind == "name":
                name = " ".join(args)
            elif kind == "bedge":
                if len(args) != 2:
                    raise HarnessError("bedge line needs exactly two node ids")
                bedges.append((args[0], args[1]))
            elif kind == "demand":
                if len(args) != 3:
                    raise HarnessError("demand line needs source, dest, rate")
                demands.append((args[0], args[1], int(args[2])))
            elif kind == "row":
                rows.append(tuple(int(a) for a in args))
            elif kind == "schedule":
                kv = dict(a.split("=", 1) for a in args if "=" in a)
                if set(kv) != {"L", "W"} or len(kv) != len(args):
                    raise HarnessError("schedule line must be `schedule L=<int|auto> W=<int>`")
                L = kv["L"] if kv["L"] == "auto" else int(kv["L"])
                W = int(kv["W"])
            elif kind in ("warmup", "waves", "seeds"):
                settings[kind] = int(args[0])
            elif kind == "algos":
                bad = [a for a in args if a not in POLICY_NAMES]
                if bad:
                    raise HarnessError(f"unknown algorithms {bad}; expected {POLICY_NAMES}")
                settings["algos"] = tuple(args)
            elif kind == "steering":
                settings["steering"] = tuple(float(a) for a in args)
            elif kind == "sweeprow":
                settings["sweeprow"] = tuple(int(a) for a in args)
            elif kind in CORE_DIRECTIVES:
                core.append(line)
            else:
                raise HarnessError(f"unknown directive {kind!r}")
        except (ValueError, HarnessError) as exc:
            raise HarnessError(f"{name}, line {lineno}: {exc}") from None
    if W is None:
        raise HarnessError(f"{name}: missing schedule line")
    if not rows:
        rows = [tuple(n for _, _, n in demands)]
    for row in rows:
        if len(row) != len(demands):
            raise HarnessError(
                f"{name}: row {row} carries {len(row)} rates for {len(demands)} demands")
    scenario = Scenario(name=name, core_lines=core, bedges=bedges, demands=demands,
                        rows=rows, L=L, W=W, **settings)
    for variant in scenario.variants:
        for row in scenario.rows:
            scenario.topology(variant, row)
    scenario.schedule()
    return scenario


def bundled_scenarios():
    """Names of the scenario files shipped inside the package."""
    folder = resources.files("coinroute").joinpath("scenarios")
    return sorted(p.name[:-4] for p in folder.iterdir() if p.name.endswith(".txt"))


def load_scenario(ref: str) -> Scenario:
    """Load a scenario from a filesystem path or a bundled name."""
    if os.path.exists(ref):
        with open(ref) as fh:
            return parse_scenario_file(fh.read(), os.path.basename(ref).rsplit(".", 1)[0])
    candidate = resources.files("coinroute").joinpath(f"scenarios/{ref}.txt")
    if candidate.is_file():
        return parse_scenario_file(candidate.read_text(), ref)
    raise HarnessError(
        f"no scenario file {ref!r}; bundled scenarios: {', '.join(bundled_scenarios())}")


@dataclass(frozen=True)
class TableRow:
    """One aggregated cell: a load row on one network under one algorithm."""

    load: tuple
    variant: str
    algorithm: str
    mean: float
    std: float
    seeds: int


@dataclass
class ResultTable:
    """Aggregated per-packet costs, plus the raw per-seed samples behind them."""

    rows: list = field(default_factory=list)
    samples: dict = field(default_factory=dict)

    def sort(self):
        self.rows.sort(key=lambda r: (r.load, r.variant, r.algorithm))
        return self

    def cell(self, load, variant, algorithm) -> TableRow:
        load = tuple(load)
        for r in self.rows:
            if r.load == load and r.variant == variant and r.algorithm == algorithm:
                return r
        raise HarnessError(f"no cell ({load}, {variant!r}, {algorithm!r})")

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["load", "variant", "algorithm", "mean", "std", "seeds"])
        for r in self.rows:
            writer.writerow([";".join(str(n) for n in r.load), r.variant, r.algorithm,
                             f"{r.mean:.6f}", f"{r.std:.6f}", r.seeds])
        return out.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ResultTable":
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header != ["load", "variant", "algorithm", "mean", "std", "seeds"]:
            raise HarnessError(f"unexpected table header {header}")
        rows = [TableRow(load=tuple(int(n) for n in load.split(";")), variant=variant,
                         algorithm=algo, mean=float(mean), std=float(std), seeds=int(seeds))
                for load, variant, algo, mean, std, seeds in reader]
        return cls(rows=rows)

    def to_markdown(self) -> str:
        lines = ["| load | variant | algorithm | mean | std | seeds |",
                 "| --- | --- | --- | --- | --- | --- |"]
        for r in self.rows:
            load = ";".join(str(n) for n in r.load)
            lines.append(f"| {load} | {r.variant} | {r.algorithm} "
                         f"| {r.mean:.2f} | {r.std:.2f} | {r.seeds} |")
        return "\n".join(lines) + "\n"


def emit(table: ResultTable, format="csv", path=None) -> str:
    """Render a table as csv or markdown, optionally writing it to a file."""
    if format == "csv":
        text = table.to_csv()
    elif format == "markdown":
        text = table.to_markdown()
    else:
        raise HarnessError(f"unknown emit format {format!r}")
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def _algorithm_labels(algos, steering):
    labels = []
    for algo in algos:
        if algo == "mb":
            labels.extend((f"mb@{s:g}", algo, s) for s in steering)
        else:
            labels.append((algo, algo, 0.0))
    return labels


def _run_cell(args):
    """Worker-pool task: one simulation run, returning its cell key and cost."""
    text, L, W, warmup, waves, algo, steering, seed, key = args
    topo = parse_scenario(text)[0]
    sched = WaveSchedule(L=L, W=W, measure_start=warmup, total_waves=waves)
    result = run(topo, sched, policy=algo, seed=seed, steering=steering)
    return key, seed, result.per_packet_cost


def _sample_std(values):
    if len(values) < 2:
        return 0.0
    mean = sum(values) / len(values)
    return (sum((v - mean) ** 2 for v in values) / (len(values) - 1)) ** 0.5


def run_scenario(scenario: Scenario, rows=None, variants=None, algos=None,
                 seeds=None, steering=None, waves=None, workers=None) -> ResultTable:
    """Run every (row, variant, algorithm, seed) cell and aggregate the costs.

    Deterministic policies are priced with a single run and report a seed
    count of 1; the mb policy runs once per seed. Tasks dispatch to a process
    pool when workers exceeds 1, and the table is sorted before return either
    way, so worker scheduling never shows in the output.
    """
    rows = [tuple(r) for r in (rows or scenario.rows)]
    variants = tuple(variants or scenario.variants)
    algos = tuple(algos or scenario.algos)
    steering = tuple(scenario.steering if steering is None else steering)
    seeds = scenario.seeds if seeds is None else seeds
    unknown = [a for a in algos if a not in POLICY_NAMES]
    if unknown:
        raise HarnessError(f"unknown algorithms {unknown}; expected {POLICY_NAMES}")
    if not algos:
        raise HarnessError("empty algorithm roster")
    for s in steering:
        if not 0.0 <= s <= 1.0:
            raise HarnessError(f"steering {s} outside [0, 1]")
    sched = scenario.schedule(waves)
    tasks = []
    for row in rows:
        for variant in variants:
            text = scenario.topology_text(variant, row)
            for label, algo, s in _algorithm_labels(algos, steering):
                runs = 1 if algo in DETERMINISTIC else seeds
                for seed in range(runs):
                    tasks.append((text, sched.L, sched.W, sched.measure_start,
                                  sched.total_waves, algo, s, seed,
                                  (row, variant, label)))
    if workers is None:
        workers = os.cpu_count() or 1
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_cell, tasks, chunksize=4))
    else:
        outcomes = [_run_cell(t) for t in tasks]
    by_cell = {}
    for key, seed, cost in outcomes:
        by_cell.setdefault(key, {})[seed] = cost
    table = ResultTable()
    for (row, variant, label), per_seed in by_cell.items():
        values = [per_seed[s] for s in sorted(per_seed)]
        table.samples[(row, variant, label)] = tuple(values)
        table.rows.append(TableRow(load=row, variant=variant, algorithm=label,
                                   mean=sum(values) / len(values),
                                   std=_sample_std(values), seeds=len(values)))
    return table.sort()


PARADOX, BENEFIT, NEUTRAL = "PARADOX", "BENEFIT", "NEUTRAL"


@dataclass
class BraessReport:
    """Per (load, algorithm) classification of what the added links did."""

    tolerance: float
    flags: dict           # (load, algorithm) -> PARADOX | BENEFIT | NEUTRAL
    deltas: dict          # (load, algorithm) -> mean cost of B minus A

    def flag(self, load, algorithm):
        key = (tuple(load), algorithm)
        if key not in self.flags:
            raise HarnessError(f"no classification for {key}")
        return self.flags[key]

    def to_text(self) -> str:
        lines = []
        for (load, algo), flag in sorted(self.flags.items()):
            delta = self.deltas[(load, algo)]
            loadtxt = ";".join(str(n) for n in load)
            lines.append(f"load {loadtxt:>8}  {algo:<10} {flag:<8} (B - A = {delta:+.3f})")
        return "\n".join(lines) + "\n"


def braess_report(table: ResultTable, tolerance=0.5) -> BraessReport:
    """Classify each (load, algorithm) by how variant B compares to variant A."""
    cells = {}
    for r in table.rows:
        cells.setdefault((r.load, r.algorithm), {})[r.variant] = r.mean
    flags, deltas = {}, {}
    for key, sides in sorted(cells.items()):
        if set(sides) != {"a", "b"}:
            raise HarnessError(f"cell {key} lacks one network variant: has {sorted(sides)}")
        delta = sides["b"] - sides["a"]
        deltas[key] = delta
        if delta > tolerance:
            flags[key] = PARADOX
        elif delta < -tolerance:
            flags[key] = BENEFIT
        else:
            flags[key] = NEUTRAL
    return BraessReport(tolerance=tolerance, flags=flags, deltas=deltas)


@dataclass
class SweepResult:
    """Steering-sweep outcome: one table per steering value plus references."""

    rows: list
    variant: str
    tables: dict          # steering value -> ResultTable (mb only)
    reference: ResultTable  # ispa and fk on the same rows and variant

    def curve(self, load):
        """Mean mb cost per steering value at one load row."""
        load = tuple(load)
        return {s: t.cell(load, self.variant, f"mb@{s:g}").mean
                for s, t in self.tables.items()}


def steering_sweep(scenario: Scenario, steering=None, rows=None, seeds=None,
                   waves=None, workers=None) -> SweepResult:
    """Price the mb policy across steering values against ispa and fk.

    Runs on variant B when the scenario has added links, else variant A.
    Rows default to the scenario's sweeprow when one is declared. The 1.0
    endpoint must reproduce the fk reference exactly, seed by seed; callers
    can check via the returned samples.
    """
    steering = tuple(scenario.steering if steering is None else steering)
    for s in steering:
        if not 0.0 <= s <= 1.0:
            raise HarnessError(f"steering {s} outside [0, 1]")
    if rows is None:
        rows = [scenario.sweeprow] if scenario.sweeprow else scenario.rows
    variant = scenario.variants[-1]
    tables = {}
    for s in steering:
        tables[s] = run_scenario(scenario, rows=rows, variants=[variant],
                                 algos=["mb"], steering=[s], seeds=seeds,
                                 waves=waves, workers=workers)
    reference = run_scenario(scenario, rows=rows, variants=[variant],
                             algos=["ispa", "fk"], seeds=seeds, waves=waves,
                             workers=workers)
    return SweepResult(rows=[tuple(r) for r in rows], variant=variant,
                       tables=tables, reference=reference)
