"""Colorings whose classes each have at most ``k`` collinear points."""

from __future__ import annotations

import heapq
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .geometry import Point, PointSet, collinear_lines
from .hypergraph import build_collinearity_hypergraph
from .rng import derive_seed, substream
from .selection import STRATEGIES, exact_max_subset, select_best, _run_strategy, default_budget


class ColoringError(ValueError):
    pass


@dataclass(frozen=True)
class Coloring:
    assignment: dict[Point, int]
    num_colors: int
    k: int = 2
    labels: dict[int, tuple] = field(default_factory=dict)

    def classes(self) -> dict[int, list[Point]]:
        out: dict[int, list[Point]] = {}
        for p, c in sorted(self.assignment.items()):
            out.setdefault(c, []).append(p)
        return dict(sorted(out.items()))

    def class_sizes(self) -> list[int]:
        return [len(v) for v in self.classes().values()]


@dataclass(frozen=True)
class Violation:
    color: int
    points: tuple[Point, ...]


@dataclass(frozen=True)
class ColoringVerdict:
    violations: tuple[Violation, ...]

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def verify_coloring(points, coloring: Coloring, k: int | None = None) -> ColoringVerdict:
    """Check every color class for ``k + 1`` collinear points.

    One violation is reported per (color, line), listing the first ``k + 1``
    class members on that line.
    """
    points = points if isinstance(points, PointSet) else PointSet(points)
    k = coloring.k if k is None else k
    missing = [p for p in points if p not in coloring.assignment]
    if missing:
        raise ColoringError(f"coloring leaves {len(missing)} points uncolored, e.g. {missing[0]}")
    extra = [p for p in coloring.assignment if p not in points]
    if extra:
        raise ColoringError(f"coloring assigns points outside the set, e.g. {extra[0]}")
    violations = []
    for color, members in coloring.classes().items():
        if len(members) <= k:
            continue
        for _, line in collinear_lines(PointSet(members, dim=points.dim), min_size=k + 1).items():
            violations.append(Violation(color, tuple(line[: k + 1])))
    return ColoringVerdict(tuple(violations))


def peel_coloring(
    points,
    selector: str = "exact",
    seed: int = 0,
    k: int = 2,
    node_limit: int = 200_000,
    budget: int | None = None,
) -> Coloring:
    """Repeatedly extract a large subset with at most ``k`` collinear and
    give it the next color. ``selector`` is ``"best"`` (select_best) or one
    of the selection strategies."""
    if selector not in STRATEGIES and selector != "best":
        raise ColoringError(f"unknown selector {selector!r}")
    points = points if isinstance(points, PointSet) else PointSet(points)
    remaining = points
    assignment: dict[Point, int] = {}
    color = 0
    while len(remaining):
        sub_seed = derive_seed(seed, "peel", color)
        if selector == "best":
            res = select_best(remaining, k, seed=sub_seed, budget=budget)
        elif selector == "exact":
            res = exact_max_subset(remaining, k, node_limit, sub_seed)
        else:
            H = build_collinearity_hypergraph(remaining, k + 1)
            b = default_budget(len(remaining)) if budget is None else budget
            res = _run_strategy(remaining, k, selector, sub_seed, H, 50, b, node_limit)
        chosen = list(res.subset) or [remaining[0]]
        for p in chosen:
            assignment[p] = color
        remaining = remaining.without(chosen)
        color += 1
    return Coloring(assignment, color, k)


def default_lll_colors(n: int, ell: int) -> int:
    """ceil(2 * sqrt(ell * n)), computed exactly."""
    x = 4 * ell * n
    if x == 0:
        return 1
    r = math.isqrt(x)
    return r if r * r == x else r + 1


@dataclass(frozen=True)
class LLLOutcome:
    success: bool
    coloring: Coloring | None
    resamples: int
    residual: int  # monochromatic (k+1)-collinear subsets left on failure


def lll_coloring(
    points,
    num_colors: int,
    max_resamples: int = 10**6,
    seed: int = 0,
    k: int = 2,
) -> LLLOutcome:
    """Moser-Tardos resampling.

    Start from a uniform random coloring. While some line carries ``k + 1``
    points of one color, take the first such line in LineKey order, its
    lexicographically first monochromatic ``(k + 1)``-subset, and recolor
    those points uniformly at random.
    """
    if num_colors < 1:
        raise ColoringError("num_colors must be at least 1")
    points = points if isinstance(points, PointSet) else PointSet(points)
    n = len(points)
    H = build_collinearity_hypergraph(points, k + 1)
    members, plines = H.line_members, H.point_lines
    rng = substream(seed, "lll")
    colors = rng.integers(num_colors, size=n).tolist()
    counts = [Counter(colors[v] for v in mem) for mem in members]

    def is_bad(L: int) -> bool:
        return max(counts[L].values()) > k

    heap = [L for L in range(len(members)) if is_bad(L)]
    queued = set(heap)
    heapq.heapify(heap)
    resamples = 0
    while heap:
        L = heapq.heappop(heap)
        queued.discard(L)
        if not is_bad(L):
            continue
        if resamples >= max_resamples:
            residual = sum(math.comb(c, k + 1) for cnt in counts for c in cnt.values())
            return LLLOutcome(False, None, resamples, residual)
        firsts = []
        for c, cnt in counts[L].items():
            if cnt > k:
                firsts.append(tuple([v for v in members[L] if colors[v] == c][: k + 1]))
        event = min(firsts)
        fresh = rng.integers(num_colors, size=len(event)).tolist()
        for v, c in zip(event, fresh):
            old = colors[v]
            colors[v] = c
            for M in plines[v]:
                counts[M][old] -= 1
                counts[M][c] += 1
        for v in event:
            for M in plines[v]:
                if M not in queued and is_bad(M):
                    heapq.heappush(heap, M)
                    queued.add(M)
        resamples += 1
    assignment = {p: colors[i] for i, p in enumerate(points)}
    # compact ids to 0..C-1 in first-use order of the sorted points
    remap: dict[int, int] = {}
    for p in points:
        remap.setdefault(assignment[p], len(remap))
    coloring = Coloring({p: remap[c] for p, c in assignment.items()}, len(remap), k)
    if not verify_coloring(points, coloring).valid:
        raise ColoringError("internal error: resampling ended with an invalid coloring")
    return LLLOutcome(True, coloring, resamples, 0)


def signature(p: Sequence[int], ell: int) -> tuple[int, ...]:
    """How many coordinates of ``p`` equal 1, 2, ..., ell."""
    counts = [0] * ell
    for x in p:
        if not 1 <= x <= ell:
            raise ColoringError(f"coordinate {x} of {tuple(p)} outside 1..{ell}")
        counts[x - 1] += 1
    return tuple(counts)


def signature_coloring(points, ell: int, d: int) -> Coloring:
    points = points if isinstance(points, PointSet) else PointSet(points)
    if len(points) and points.dim != d:
        raise ColoringError(f"points have dimension {points.dim}, expected {d}")
    sigs = {p: signature(p, ell) for p in points}
    ids = {s: i for i, s in enumerate(sorted(set(sigs.values()), reverse=True))}
    return Coloring(
        {p: ids[s] for p, s in sigs.items()},
        len(ids),
        2,
        labels={i: s for s, i in ids.items()},
    )
