"""Wall-clock comparison of CD and LLA path fits as p grows."""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field

import numpy as np

from .cd_linear import FitConfig
from .convexity import diagnose_path, min_eigenvalue
from .design import Family, standardize
from .path import fit_path
from .simgen import FourSpike, SimSpec, generate, replicate_seeds

SOLVERS = ("cd", "lla")
AGREEMENT_TOL = 1e-4
GAMMA_MARGIN = 1.01
FALLBACK_GAMMA = 3.0


@dataclass(frozen=True)
class BenchConfig:
    n: int
    p: int
    rho: float = 0.0
    family: Family = Family.GAUSSIAN


@dataclass
class BenchTable:
    rows: list = field(default_factory=list)
    slopes: dict = field(default_factory=dict)

    def median(self, solver, **match) -> float:
        for row in self.rows:
            if row["solver"] == solver and all(row[k] == v for k, v in match.items()):
                return row["median_seconds"]
        raise KeyError((solver, match))

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["n", "p", "rho", "family", "solver", "gamma", "reps", "accepted",
                "excluded", "median_seconds", "max_path_diff", "slope"]
        writer = csv.DictWriter(buf, cols, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            key = (row["solver"], row["family"], row["rho"], row["n"])
            writer.writerow({**{c: row.get(c) for c in cols}, "slope": self.slopes.get(key)})
        return buf.getvalue()


def bench_gamma(design) -> float:
    """1.01 / c_star of the full Gram matrix, or 3 when that matrix is singular."""
    X = design.penalized
    c = min_eigenvalue(X.T @ X / design.n)
    return GAMMA_MARGIN / c if c > 1e-8 else FALLBACK_GAMMA


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return time.perf_counter() - t0, out


def loglog_slope(ps, times) -> float:
    ps, times = np.asarray(ps, float), np.asarray(times, float)
    return float(np.polyfit(np.log(ps), np.log(times), 1)[0])


def time_paths(configs, solvers=SOLVERS, reps: int = 3, seed: int = 0,
               penalty: str = "mcp", nlambda: int = 100,
               config: FitConfig = FitConfig()) -> BenchTable:
    """Median path-fitting time per configuration and solver.

    Each replicate draws a fresh pure-noise dataset. Timings count only
    when every grid point converged and, if both solvers ran, their paths
    agree within 1e-4 (over the locally convex part of the CD path when
    p >= n). Failing replicates are excluded and counted.
    """
    solvers = tuple(solvers)
    bad = [s for s in solvers if s not in SOLVERS]
    if bad or not solvers:
        raise ValueError(f"unknown solver(s) {bad}; choose from {SOLVERS}")
    if reps < 3:
        raise ValueError("reps must be >= 3")
    table = BenchTable()
    for cfg in configs:
        cfg = cfg if isinstance(cfg, BenchConfig) else BenchConfig(*cfg)
        family = Family(cfg.family)
        use = [s for s in solvers if not (s == "lla" and family is Family.BINOMIAL)]
        times = {s: [] for s in use}
        excluded = {s: 0 for s in use}
        worst = 0.0
        gammas = []
        # warm the compiled kernels outside the timed region
        data, _ = generate(SimSpec(cfg.n, cfg.p, FourSpike(0.0), cfg.rho, family, seed))
        for s in use:
            fit_path(data, penalty, None if penalty == "lasso" else 3.0, nlambda=3, solver=s)
        for rep_seed in replicate_seeds(seed, reps):
            data, _ = generate(SimSpec(cfg.n, cfg.p, FourSpike(0.0), cfg.rho, family, rep_seed))
            design = standardize(data)
            gamma = None if penalty == "lasso" else bench_gamma(design)
            gammas.append(gamma)
            paths = {}
            for s in use:
                elapsed, path = _timed(lambda: fit_path(design, penalty, gamma, config=config,
                                                        nlambda=nlambda, solver=s))
                if path.converged.all():
                    paths[s] = (elapsed, path)
                else:
                    excluded[s] += 1
            if len(use) == 2 and len(paths) == 2:
                a, b = paths["cd"][1], paths["lla"][1]
                rows = slice(None)
                if cfg.p >= cfg.n:
                    star = diagnose_path(a, design).lambda_star
                    rows = a.lambdas > star if star is not None else slice(None)
                gap = np.abs(a.std_betas[rows] - b.std_betas[rows])
                diff = float(gap.max()) if gap.size else 0.0
                worst = max(worst, diff)
                if diff > AGREEMENT_TOL:
                    for s in use:
                        excluded[s] += 1
                    continue
            for s, (elapsed, _) in paths.items():
                times[s].append(elapsed)
        for s in use:
            table.rows.append({
                "n": cfg.n, "p": cfg.p, "rho": cfg.rho, "family": family.value,
                "solver": s, "gamma": gammas[0] if gammas else None, "reps": reps,
                "accepted": len(times[s]), "excluded": excluded[s],
                "median_seconds": float(np.median(times[s])) if times[s] else float("nan"),
                "max_path_diff": worst if len(use) == 2 else None,
            })
    groups = {}
    for row in table.rows:
        key = (row["solver"], row["family"], row["rho"], row["n"])
        groups.setdefault(key, []).append(row)
    for key, rows in groups.items():
        ok = [r for r in rows if np.isfinite(r["median_seconds"])]
        if len(ok) >= 2:
            table.slopes[key] = loglog_slope([r["p"] for r in ok],
                                             [r["median_seconds"] for r in ok])
    return table
