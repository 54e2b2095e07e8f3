"""Random biconnected test graphs and the stretch/runtime experiment sweeps."""

from __future__ import annotations

import csv
import io
import math
import random
import time
from collections import defaultdict
from dataclasses import dataclass, field
from statistics import fmean

from .escapes import compute_escapes
from .graph import WeightedGraph, bucket_by_nca, build_spt
from .oracle import optimal_recovery, stretch

PRNG_NAME = "python-random-mt19937"
DEFAULT_NODES = tuple(range(100, 1001, 100))
DEFAULT_TRIALS = 5


@dataclass(frozen=True)
class GenConfig:
    n: int
    avg_degree: float
    weight_range: tuple = (100, 1000)
    seed: int = 0

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("need at least 3 nodes")
        if not 2 <= self.avg_degree <= self.n - 1:
            raise ValueError(f"average degree must lie in [2, {self.n - 1}]")
        lo, hi = self.weight_range
        if not 0 <= lo <= hi:
            raise ValueError(f"bad weight range {self.weight_range}")

    @property
    def edge_count(self) -> int:
        return math.ceil(self.n * self.avg_degree / 2)


def generate(cfg: GenConfig) -> WeightedGraph:
    """Random Hamiltonian cycle plus uniformly chosen extra edges.

    The destination stored in the graph header is drawn from the same stream.
    """
    n, m = cfg.n, cfg.edge_count
    if m > n * (n - 1) // 2:
        raise ValueError(f"{m} edges do not fit in a simple graph on {n} nodes")
    rng = random.Random(cfg.seed)
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = []
    seen = set()
    for i in range(n):
        a, b = perm[i], perm[(i + 1) % n]
        key = (min(a, b), max(a, b))
        seen.add(key)
        pairs.append(key)
    extra = m - n
    if extra > (n * (n - 1) // 2 - n) // 2:
        rest = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in seen]
        pairs.extend(rng.sample(rest, extra))
    else:
        while len(pairs) < m:
            u, v = rng.randrange(n), rng.randrange(n)
            if u == v:
                continue
            key = (min(u, v), max(u, v))
            if key not in seen:
                seen.add(key)
                pairs.append(key)
    lo, hi = cfg.weight_range
    edges = [(u, v, rng.randint(lo, hi)) for u, v in pairs]
    return WeightedGraph(n, edges, dest=rng.randrange(n))


def trial_seed(seed: int, n: int, degree: float, trial: int) -> int:
    return random.Random(f"{seed}/{n}/{degree}/{trial}").getrandbits(64)


@dataclass
class TrialResult:
    n: int
    degree: float
    trial: int
    seed: int
    pairs: int
    mean_stretch: float
    max_stretch: float
    snfr_seconds: float = 0.0
    oracle_seconds: float = 0.0


@dataclass
class ExperimentResult:
    trials: list = field(default_factory=list)

    def aggregate(self) -> list:
        """``(n, degree, trials, mean of mean stretch, max stretch, mean snfr s, mean oracle s)``."""
        groups = defaultdict(list)
        for tr in self.trials:
            groups[(tr.n, tr.degree)].append(tr)
        out = []
        for (n, deg), rows in sorted(groups.items()):
            out.append((n, deg, len(rows),
                        fmean(r.mean_stretch for r in rows),
                        max(r.max_stretch for r in rows),
                        fmean(r.snfr_seconds for r in rows),
                        fmean(r.oracle_seconds for r in rows)))
        return out

    def to_csv(self) -> str:
        """Stretch results only; byte-identical for identical seeds."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "degree", "trial", "seed", "pairs", "mean_stretch", "max_stretch"])
        for r in self.trials:
            w.writerow([r.n, r.degree, r.trial, r.seed, r.pairs,
                        repr(r.mean_stretch), repr(r.max_stretch)])
        return buf.getvalue()

    def timing_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "degree", "trial", "snfr_seconds", "oracle_seconds"])
        for r in self.trials:
            w.writerow([r.n, r.degree, r.trial, f"{r.snfr_seconds:.6f}", f"{r.oracle_seconds:.6f}"])
        return buf.getvalue()

    def summary_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "degree", "trials", "mean_stretch", "max_stretch",
                    "snfr_seconds", "oracle_seconds"])
        for n, deg, k, ms, mx, ts, to in self.aggregate():
            w.writerow([n, deg, k, f"{ms:.6f}", f"{mx:.6f}", f"{ts:.6f}", f"{to:.6f}"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> ExperimentResult:
        res = cls()
        for row in csv.DictReader(io.StringIO(text)):
            deg = float(row["degree"])
            res.trials.append(TrialResult(
                int(row["n"]), int(deg) if deg.is_integer() else deg, int(row["trial"]),
                int(row["seed"]), int(row["pairs"]),
                float(row["mean_stretch"]), float(row["max_stretch"])))
        return res


def run_trial(n: int, degree: float, trial: int, seed: int,
              weight_range=(100, 1000)) -> TrialResult:
    ts = trial_seed(seed, n, degree, trial)
    g = generate(GenConfig(n, degree, weight_range, ts))
    t0 = time.perf_counter()
    t = build_spt(g, g.dest)
    plan = compute_escapes(g, t, bucket_by_nca(g, t))
    t1 = time.perf_counter()
    opt = optimal_recovery(g, t)
    t2 = time.perf_counter()
    rep = stretch(plan, opt)
    return TrialResult(n, degree, trial, ts, len(rep.rows), rep.mean, rep.max, t1 - t0, t2 - t1)


def sweep(configs, trials: int = DEFAULT_TRIALS, seed: int = 0,
          weight_range=(100, 1000), progress=None) -> ExperimentResult:
    res = ExperimentResult()
    for n, deg in configs:
        for k in range(trials):
            res.trials.append(run_trial(n, deg, k, seed, weight_range))
            if progress:
                progress(res.trials[-1])
    return res


def sweep_nodes(n_list=DEFAULT_NODES, deg: float = 15, trials: int = DEFAULT_TRIALS,
                seed: int = 0, **kw) -> ExperimentResult:
    if not n_list:
        raise ValueError("empty node-count list")
    return sweep([(n, deg) for n in n_list], trials, seed, **kw)


def sweep_degree(deg_list, n: int = 300, trials: int = DEFAULT_TRIALS,
                 seed: int = 0, **kw) -> ExperimentResult:
    if not deg_list:
        raise ValueError("empty degree list")
    return sweep([(n, d) for d in deg_list], trials, seed, **kw)


def gnuplot_script(summary_csv: str, axis: str) -> str:
    """Plot script for a summary CSV; ``axis`` is ``"n"`` or ``"degree"``."""
    col = 1 if axis == "n" else 2
    label = "number of nodes" if axis == "n" else "average degree"
    return "\n".join([
        "set datafile separator ','",
        "set key top left",
        "set terminal pngcairo size 900,600",
        f"set xlabel '{label}'",
        f"set output 'stretch_vs_{axis}.png'",
        "set ylabel 'mean stretch'",
        f"plot '{summary_csv}' every ::1 using {col}:4 with linespoints title 'escape-edge recovery'",
        f"set output 'runtime_vs_{axis}.png'",
        "set ylabel 'seconds'",
        "set logscale y",
        f"plot '{summary_csv}' every ::1 using {col}:6 with linespoints title 'escape edges', \\",
        f"     '{summary_csv}' every ::1 using {col}:7 with linespoints title 'recomputation'",
        "",
    ])
