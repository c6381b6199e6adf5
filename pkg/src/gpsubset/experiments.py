"""Parameter sweeps that measure subset sizes and color counts against the
shape of the known bounds (all constants taken as 1).

A sweep is a mapping::

    {"measure": "select",            # or "color"
     "k": 2,
     "families": [{"family": "grid2d", "q": [3, 4, 5]}, ...],
     "strategies": ["greedy", "exact"],
     "seeds": [0, 1],
     "bound": "sqrt_n_over_log_ell"}            # optional

List-valued family parameters are expanded as a cartesian product. Rows are
emitted in sweep order: family entry, parameter combination, strategy, seed.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import time
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .coloring import default_lll_colors, lll_coloring, peel_coloring, signature_coloring
from .generators import FamilySpec
from .geometry import collinearity_profile
from .selection import STRATEGIES, exact_max_subset, select_best, _run_strategy, default_budget
from .hypergraph import build_collinearity_hypergraph

SCHEMA_VERSION = "1"
CSV_FIELDS = (
    "schema",
    "family",
    "params",
    "n",
    "ell",
    "k",
    "measure",
    "strategy",
    "seed",
    "subset_size",
    "num_colors",
    "proven_optimal",
    "bound",
    "bound_value",
    "ratio",
    "wall_time_ms",
    "error",
)
TIMING_FIELDS = ("wall_time_ms",)
COLOR_STRATEGIES = ("peel-exact", "peel-best", "peel-greedy", "lll", "signature")


def bound_value(name: str, n: int, ell: int, k: int = 2) -> float | None:
    """The named bound shape at (n, ell, k), or None where it is undefined."""
    if n <= 0:
        return None
    if name == "sqrt_n_over_log_ell":
        return math.sqrt(n / math.log(ell)) if ell >= 3 else None
    if name == "sqrt_n_log_ell_n":
        return math.sqrt(n * math.log(n) / math.log(ell)) if ell >= 3 and n >= 2 else None
    if name == "k_collinear":
        return n ** ((k - 1) / k) / ell ** ((k - 2) / k) if ell >= 1 else None
    if name == "greedy":
        return math.sqrt(2 * n / (ell - 2)) if ell >= 3 else None
    if name == "sqrt_n":
        return math.sqrt(n)
    if name == "sqrt_n_log_n_3_2":
        return math.sqrt(n) * math.log(n) ** 1.5 if n >= 2 else None
    raise ValueError(f"unknown bound {name!r}")


def default_bound(measure: str, k: int) -> str:
    if measure == "color":
        return "sqrt_n_log_n_3_2"
    return "sqrt_n_over_log_ell" if k == 2 else "k_collinear"


@dataclass(frozen=True)
class ExperimentRow:
    family: str
    params: str
    n: int
    ell: int
    k: int
    measure: str
    strategy: str
    seed: int
    subset_size: int | None = None
    num_colors: int | None = None
    proven_optimal: bool | None = None
    bound: str = ""
    bound_value: float | None = None
    wall_time_ms: float = 0.0
    error: str = ""

    @property
    def value(self) -> int | None:
        return self.subset_size if self.measure == "select" else self.num_colors

    @property
    def ratio(self) -> float | None:
        if self.value is None or not self.bound_value:
            return None
        return self.value / self.bound_value

    def as_csv_dict(self) -> dict[str, str]:
        def fmt(x):
            if x is None:
                return ""
            if isinstance(x, bool):
                return "true" if x else "false"
            if isinstance(x, float):
                return f"{x:.12g}"
            return str(x)

        return {
            "schema": SCHEMA_VERSION,
            "family": self.family,
            "params": self.params,
            "n": fmt(self.n),
            "ell": fmt(self.ell),
            "k": fmt(self.k),
            "measure": self.measure,
            "strategy": self.strategy,
            "seed": fmt(self.seed),
            "subset_size": fmt(self.subset_size),
            "num_colors": fmt(self.num_colors),
            "proven_optimal": fmt(self.proven_optimal),
            "bound": self.bound,
            "bound_value": fmt(self.bound_value),
            "ratio": fmt(self.ratio),
            "wall_time_ms": f"{self.wall_time_ms:.3f}",
            "error": self.error,
        }


def _expand_families(entries: Iterable[Mapping]) -> Iterator[tuple[str, dict]]:
    for entry in entries:
        entry = dict(entry)
        family = entry.pop("family")
        keys = sorted(entry)
        values = [v if isinstance(v, (list, tuple)) else [v] for v in (entry[k] for k in keys)]
        for combo in itertools.product(*values):
            yield family, dict(zip(keys, combo))


def _measure(points, measure: str, strategy: str, k: int, seed: int, opts: Mapping):
    """Returns (subset_size, num_colors, proven_optimal)."""
    node_limit = int(opts.get("node_limit", 200_000))
    trials = int(opts.get("trials", 50))
    budget = opts.get("budget")
    if measure == "select":
        if strategy == "best":
            res = select_best(points, k, seed=seed, trials=trials, budget=budget, node_limit=node_limit)
        elif strategy == "exact":
            res = exact_max_subset(points, k, node_limit, seed)
        elif strategy in STRATEGIES:
            H = build_collinearity_hypergraph(points, k + 1)
            b = default_budget(len(points)) if budget is None else int(budget)
            res = _run_strategy(points, k, strategy, seed, H, trials, b, node_limit)
        else:
            raise ValueError(f"unknown selection strategy {strategy!r}")
        return res.size, None, res.proven_optimal
    if measure == "color":
        if strategy.startswith("peel-"):
            c = peel_coloring(points, strategy[5:], seed, k, node_limit=node_limit, budget=budget)
            return None, c.num_colors, None
        if strategy == "lll":
            ell = collinearity_profile(points).ell_max
            out = lll_coloring(points, default_lll_colors(len(points), ell), int(opts.get("max_resamples", 10**6)), seed, k)
            if not out.success:
                raise RuntimeError(f"resampling failed, residual {out.residual}")
            return None, out.coloring.num_colors, None
        if strategy == "signature":
            ell = max(max(p) for p in points)
            return None, signature_coloring(points, ell, points.dim).num_colors, None
        raise ValueError(f"unknown coloring strategy {strategy!r}")
    raise ValueError(f"unknown measure {measure!r}")


def iter_experiment(sweep: Mapping) -> Iterator[ExperimentRow]:
    measure = sweep.get("measure", "select")
    k = int(sweep.get("k", 2))
    bound = sweep.get("bound") or default_bound(measure, k)
    strategies = list(sweep.get("strategies", ["best"]))
    seeds = [int(s) for s in sweep.get("seeds", [0])]
    for family, params in _expand_families(sweep.get("families", [])):
        label = ";".join(f"{key}={val}" for key, val in sorted(params.items()))
        for strategy in strategies:
            for seed in seeds:
                t0 = time.perf_counter()
                n = ell = 0
                try:
                    points = FamilySpec(family, params, seed).build()
                    n = len(points)
                    ell = collinearity_profile(points).ell_max
                    size, colors, proven = _measure(points, measure, strategy, k, seed, sweep)
                    yield ExperimentRow(
                        family, label, n, ell, k, measure, strategy, seed,
                        subset_size=size, num_colors=colors, proven_optimal=proven,
                        bound=bound, bound_value=bound_value(bound, n, ell, k),
                        wall_time_ms=(time.perf_counter() - t0) * 1000,
                    )
                except Exception as exc:  # recorded as an error row; the sweep continues
                    yield ExperimentRow(
                        family, label, n, ell, k, measure, strategy, seed,
                        bound=bound, wall_time_ms=(time.perf_counter() - t0) * 1000,
                        error=f"{type(exc).__name__}: {exc}",
                    )


def run_experiment(sweep: Mapping, out=None) -> str:
    """Run a sweep and write CSV to ``out`` (a text stream); returns the CSV text."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in iter_experiment(sweep):
        if out is not None:
            out.write(buf.getvalue())
            buf.seek(0)
            buf.truncate()
        writer.writerow(row.as_csv_dict())
    if out is not None:
        out.write(buf.getvalue())
        out.flush()
        return ""
    return buf.getvalue()


def strip_timing(csv_text: str) -> str:
    """CSV text with the timing columns blanked, for reproducibility checks."""
    rows = list(csv.DictReader(io.StringIO(csv_text)))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        for f in TIMING_FIELDS:
            r[f] = ""
        writer.writerow(r)
    return buf.getvalue()


PRESETS: dict[str, dict] = {
    "no-three-in-line": {
        "measure": "select",
        "k": 2,
        "families": [{"family": "grid2d", "q": list(range(3, 11))}],
        "strategies": ["exact"],
        "seeds": [0],
        "bound": "sqrt_n",
    },
    "sqrt-n-grid": {
        "measure": "select",
        "k": 2,
        "families": [{"family": "grid2d", "q": list(range(5, 31))}],
        "strategies": ["best"],
        "seeds": [0],
        "bound": "sqrt_n",
    },
    "general-position": {
        "measure": "select",
        "k": 2,
        "families": [
            {"family": "grid2d", "q": [4, 6, 8, 10, 12]},
            {"family": "random_bounded", "n": [40, 80], "ell": [3, 5], "box": [12]},
        ],
        "strategies": ["greedy", "spencer", "spencer+ls"],
        "seeds": [0, 1],
    },
    "coloring": {
        "measure": "color",
        "k": 2,
        "families": [{"family": "grid2d", "q": [4, 6, 8, 10]}],
        "strategies": ["peel-best", "lll"],
        "seeds": [0],
    },
    "smoke": {
        "measure": "select",
        "k": 2,
        "families": [
            {"family": "grid2d", "q": [3, 4, 5, 6]},
            {"family": "random_bounded", "n": [25], "ell": [4], "box": [8]},
            {"family": "line", "n": [6]},
        ],
        "strategies": ["greedy", "spencer+ls", "exact"],
        "seeds": [0, 1],
    },
}
