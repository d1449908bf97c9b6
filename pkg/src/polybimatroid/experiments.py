"""Random instance generation and batch runs over subsampled readings.

Each (n, t, replication) cell draws from its own PCG64 stream derived from
the base seed, so a replication's instance does not depend on how many
replications or cells run alongside it.
"""

from __future__ import annotations

import csv
import io
import math
import statistics
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .bisets import Biset, GroundSet
from .dcg import DcgConfig, SolveStats, dcg_solve
from .entropy import DiscreteReadings, EntropyOracle, discretize, ingest
from .errors import InfeasibleError
from .master import MasterInstance
from .verify import brute_force_min

K_TEMP = 3
K_HUMID = 2
VERIFY_MAX_N = 10
FIXTURES = {"table1": "table1.csv", "synthetic": "synthetic54.csv"}
CSV_COLUMNS = ("n", "t", "rep", "value", "time_s", "cuts", "nodes", "iters")


@dataclass(frozen=True)
class InstanceParams:
    b1: int
    b2: int
    b1p: int
    b2p: int
    w: int


def derive_params(n: int) -> InstanceParams:
    if n < 3:
        raise ValueError(f"parameter formulas degenerate for n={n}; need n >= 3")
    b1 = 2 * n // 5
    b2 = n // 2
    return InstanceParams(b1, b2, 4 * b1 // 5, 3 * b2 // 5, 3 * (b1 + b2) // 5)


@dataclass
class ExperimentConfig:
    n: int
    t: int
    replications: int = 10
    rng_seed: int = 0
    epsilon: float = 1e-6
    data_path: str | Path = "synthetic"

    def __post_init__(self) -> None:
        if self.n < 1 or self.t < 1 or self.replications < 1:
            raise ValueError("n, t and replications must be at least 1")


def fixture_path(name: str | Path) -> Path:
    """Resolve a bundled fixture alias (``table1``, ``synthetic``) or pass a path through."""
    if str(name) in FIXTURES:
        return Path(str(resources.files("polybimatroid") / "data" / FIXTURES[str(name)]))
    return Path(name)


@lru_cache(maxsize=8)
def _load_discrete(path: str) -> DiscreteReadings:
    return discretize(ingest(path), K_TEMP, K_HUMID)


def load_discrete(path: str | Path) -> DiscreteReadings:
    """Ingest and discretize over the whole file (bins span the global range)."""
    return _load_discrete(str(fixture_path(path)))


def stream(seed: int, n: int, t: int, rep: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(n, t, rep))))


def generate_instance(
    cfg: ExperimentConfig, rng: np.random.Generator, readings: DiscreteReadings | None = None
) -> tuple[EntropyOracle, MasterInstance]:
    readings = readings if readings is not None else load_discrete(cfg.data_path)
    if readings.n < cfg.n or readings.t < cfg.t:
        raise ValueError(
            f"data has {readings.n} locations x {readings.t} timesteps; need {cfg.n} x {cfg.t}"
        )
    params = derive_params(cfg.n)
    if params.b1 + params.b2 > cfg.n:
        raise ValueError(f"outer plan of {params.b1}+{params.b2} sensors does not fit {cfg.n} locations")
    rows = np.sort(rng.choice(readings.n, size=cfg.n, replace=False))
    cols = np.sort(rng.choice(readings.t, size=cfg.t, replace=False))
    oracle = EntropyOracle(readings.subset(rows, cols))
    perm = rng.permutation(cfg.n)
    s1 = frozenset(int(i) for i in perm[: params.b1])
    s2 = frozenset(int(i) for i in perm[params.b1 : params.b1 + params.b2])
    inst = MasterInstance(GroundSet(cfg.n), s1, s2, params.b1p, params.b2p, params.w)
    return oracle, inst


def format_biset(b: Biset, labels) -> str:
    fmt = lambda s: "{" + ",".join(str(labels[i]) for i in sorted(s)) + "}"
    return f"({fmt(b.s1)},{fmt(b.s2)})"


@dataclass
class RunResult:
    n: int
    t: int
    rep: int
    value: float = math.nan
    incumbent: str = ""
    stats: SolveStats | None = None
    error: str | None = None
    brute_force: float | None = None

    @property
    def mismatch(self) -> bool:
        if self.brute_force is None or self.error:
            return False
        return abs(self.value - self.brute_force) > 1e-6 * max(1.0, abs(self.brute_force))

    def row(self) -> dict:
        s = self.stats
        return {
            "n": self.n,
            "t": self.t,
            "rep": self.rep,
            "value": self.value,
            "time_s": s.wall_time if s else math.nan,
            "cuts": s.cut_count if s else 0,
            "nodes": s.node_count if s else 0,
            "iters": s.iterations if s else 0,
        }


@dataclass
class Report:
    results: list[RunResult] = field(default_factory=list)

    @property
    def failures(self) -> list[RunResult]:
        return [r for r in self.results if r.error]

    @property
    def mismatches(self) -> list[RunResult]:
        return [r for r in self.results if r.mismatch]

    def aggregates(self) -> list[dict]:
        cells: dict[tuple[int, int], list[RunResult]] = {}
        for r in self.results:
            if not r.error:
                cells.setdefault((r.n, r.t), []).append(r)
        out = []
        for (n, t), rs in cells.items():
            rows = [r.row() for r in rs]
            out.append(
                {
                    "n": n,
                    "t": t,
                    "count": len(rows),
                    "time_s": statistics.fmean(r["time_s"] for r in rows),
                    "cuts": statistics.fmean(r["cuts"] for r in rows),
                    "nodes": statistics.fmean(r["nodes"] for r in rows),
                }
            )
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in self.results:
            row = r.row()
            row["value"] = f"{row['value']:.9f}"
            row["time_s"] = f"{row['time_s']:.6f}"
            w.writerow(row)
        return buf.getvalue()

    def to_text(self, details: bool = True) -> str:
        lines = [f"{'n':>4} {'t':>5} {'time (s)':>10} {'# cuts':>8} {'# nodes':>9}"]
        for a in self.aggregates():
            lines.append(f"{a['n']:>4} {a['t']:>5} {a['time_s']:>10.3f} {a['cuts']:>8.1f} {a['nodes']:>9.1f}")
        if details:
            lines.append("")
            lines.append(f"{'n':>4} {'t':>5} {'rep':>4} {'value':>12} {'cuts':>6} {'nodes':>7} {'iters':>6}  incumbent")
            for r in self.results:
                if r.error:
                    lines.append(f"{r.n:>4} {r.t:>5} {r.rep:>4}  FAILED: {r.error}")
                    continue
                row = r.row()
                flag = "  MISMATCH" if r.mismatch else ""
                lines.append(
                    f"{r.n:>4} {r.t:>5} {r.rep:>4} {r.value:>12.6f} {row['cuts']:>6} {row['nodes']:>7} "
                    f"{row['iters']:>6}  {r.incumbent}{flag}"
                )
        return "\n".join(lines) + "\n"


def solve_instance(
    oracle: EntropyOracle, inst: MasterInstance, epsilon: float, verify: bool = False, **ids
) -> RunResult:
    res = RunResult(ids.get("n", oracle.n), ids.get("t", oracle.readings.t), ids.get("rep", 0))
    try:
        b, value, stats = dcg_solve(oracle, inst, DcgConfig(epsilon=epsilon))
    except InfeasibleError as exc:
        res.error = f"infeasible: {exc}"
        return res
    res.value, res.stats = value, stats
    res.incumbent = format_biset(b, oracle.readings.locations)
    if verify and oracle.n <= VERIFY_MAX_N:
        res.brute_force = brute_force_min(oracle, inst.feasible)[1]
    return res


def run_experiments(cfg: ExperimentConfig, verify: bool = False) -> Report:
    readings = load_discrete(cfg.data_path)
    report = Report()
    for rep in range(cfg.replications):
        try:
            oracle, inst = generate_instance(cfg, stream(cfg.rng_seed, cfg.n, cfg.t, rep), readings)
            result = solve_instance(oracle, inst, cfg.epsilon, verify, n=cfg.n, t=cfg.t, rep=rep)
        except Exception as exc:  # reported per instance; the batch continues
            result = RunResult(cfg.n, cfg.t, rep, error=f"{type(exc).__name__}: {exc}")
        report.results.append(result)
    return report
