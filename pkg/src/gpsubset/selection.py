"""Finding large subsets with at most ``k`` points on any line.

A subset has at most ``k`` collinear exactly when it is independent in the
collinearity hypergraph H_{k+1}. All algorithms here work on the lines of
that hypergraph through :class:`_LineState`, which tracks how many chosen
points sit on each line and which points can still be added.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .geometry import PointSet, collinearity_profile, canonical_line
from .hypergraph import CollinearHypergraph, build_collinearity_hypergraph
from .rng import substream

STRATEGIES = ("greedy", "greedy+ls", "spencer", "spencer+ls", "exact")
DEFAULT_STRATEGIES = ("greedy", "spencer", "spencer+ls")


class SelectionError(ValueError):
    pass


@dataclass(frozen=True)
class GreedyCertificate:
    """Termination record of a greedy run.

    Every rejected point completes a line through ``k`` chosen points, and a
    line holds at most ``ell`` points, so ``n <= s + C(s, k) * (ell - k)``.
    """

    n: int
    s: int
    rejected: int
    ell: int
    k: int

    @property
    def holds(self) -> bool:
        return self.n <= self.s + math.comb(self.s, self.k) * max(self.ell - self.k, 0)


@dataclass(frozen=True)
class SpencerTrace:
    p: float
    trials: int
    best_size: int
    mean_size: Fraction
    bound: float
    sizes: tuple[int, ...] = field(repr=False, default=())


@dataclass(frozen=True)
class SelectionResult:
    subset: PointSet
    k: int
    strategy: str
    seed: int
    certificate: GreedyCertificate | SpencerTrace | None = None
    proven_optimal: bool | None = None

    def __post_init__(self):
        if len(self.subset) > self.k:
            ell = collinearity_profile(self.subset).ell_max
            if ell > self.k:
                raise SelectionError(f"subset has {ell} collinear points, more than k={self.k}")

    @property
    def size(self) -> int:
        return len(self.subset)


class _LineState:
    def __init__(self, H: CollinearHypergraph):
        self.k = H.r - 1
        self.members = H.line_members
        self.plines = H.point_lines
        n = H.n
        self.count = [0] * len(self.members)
        self.blocked = [0] * n
        self.selected = [False] * n
        self.free = set(range(n))

    def can_add(self, v: int) -> bool:
        return not self.selected[v] and self.blocked[v] == 0

    def add(self, v: int) -> None:
        k, count, blocked, free = self.k, self.count, self.blocked, self.free
        self.selected[v] = True
        free.discard(v)
        for L in self.plines[v]:
            count[L] += 1
            if count[L] == k:
                for u in self.members[L]:
                    blocked[u] += 1
                    free.discard(u)

    def remove(self, v: int) -> None:
        k, count, blocked, free, selected = self.k, self.count, self.blocked, self.free, self.selected
        selected[v] = False
        for L in self.plines[v]:
            if count[L] == k:
                for u in self.members[L]:
                    blocked[u] -= 1
                    if blocked[u] == 0 and not selected[u]:
                        free.add(u)
            count[L] -= 1
        if blocked[v] == 0:
            free.add(v)

    def chosen(self) -> list[int]:
        return [v for v, s in enumerate(self.selected) if s]


def _as_pointset(points) -> PointSet:
    return points if isinstance(points, PointSet) else PointSet(points)


def _result(points: PointSet, idx, k, strategy, seed, **kw) -> SelectionResult:
    sub = PointSet((points[i] for i in idx), dim=points.dim)
    return SelectionResult(subset=sub, k=k, strategy=strategy, seed=seed, **kw)


def greedy_select(points, k: int = 2, seed: int = 0, H: CollinearHypergraph | None = None) -> SelectionResult:
    """Insert points in a seed-shuffled order, skipping any that would put
    ``k + 1`` chosen points on a line. The result is maximal by inclusion."""
    points = _as_pointset(points)
    if k < 2:
        raise SelectionError("k must be at least 2")
    H = H or build_collinearity_hypergraph(points, k + 1)
    state = _LineState(H)
    for v in substream(seed, "greedy").permutation(len(points)).tolist():
        if state.can_add(v):
            state.add(v)
    chosen = state.chosen()
    cert = GreedyCertificate(
        n=len(points),
        s=len(chosen),
        rejected=len(points) - len(chosen),
        ell=collinearity_profile(points).ell_max,
        k=k,
    )
    return _result(points, chosen, k, "greedy", seed, certificate=cert)


def spencer_bound(n: int, m: int, r: int) -> float:
    """Spencer's lower bound on the independence number of an r-uniform
    hypergraph with n vertices and m edges (n/2 when m < n/r)."""
    if n == 0:
        return 0.0
    if m < n / r:
        return n / 2
    return (r - 1) / r ** (r / (r - 1)) * n / (m / n) ** (1 / (r - 1))


def spencer_probability(n: int, m: int, r: int) -> float:
    if m == 0 or m < n / r:
        return 1.0
    return min(1.0, (n / (r * m)) ** (1 / (r - 1)))


def spencer_trial(H: CollinearHypergraph, keep: list[bool]) -> list[int]:
    """Delete vertices from surviving edges until none remains.

    Each step removes the vertex of largest degree in the surviving
    hypergraph (ties: lexicographically smallest point). Every step destroys
    at least one edge, so at most one vertex per surviving edge goes.
    """
    r = H.r
    members, plines = H.line_members, H.point_lines
    count = [sum(1 for v in mem if keep[v]) for mem in members]
    bad = {L for L, c in enumerate(count) if c >= r}
    while bad:
        best_v, best_deg = -1, -1
        for v in sorted({v for L in bad for v in members[L] if keep[v]}):
            deg = sum(math.comb(count[L] - 1, r - 1) for L in plines[v] if count[L] >= r)
            if deg > best_deg:
                best_v, best_deg = v, deg
        keep[best_v] = False
        for L in plines[best_v]:
            count[L] -= 1
            if count[L] < r:
                bad.discard(L)
    return [v for v, kv in enumerate(keep) if kv]


def spencer_select(H: CollinearHypergraph, trials: int = 100, seed: int = 0) -> SelectionResult:
    """Sample each vertex with probability p, then delete one vertex per
    surviving edge; keep the best of ``trials`` independent runs."""
    if trials < 1:
        raise SelectionError("trials must be at least 1")
    n, m, r = H.n, H.m, H.r
    p = spencer_probability(n, m, r)
    best: list[int] = []
    sizes = []
    for t in range(trials):
        if p >= 1.0:
            keep = [True] * n
        else:
            keep = (substream(seed, "spencer", t).random(n) < p).tolist()
        indep = spencer_trial(H, keep)
        sizes.append(len(indep))
        if len(indep) > len(best):
            best = indep
    trace = SpencerTrace(
        p=p,
        trials=trials,
        best_size=len(best),
        mean_size=Fraction(sum(sizes), trials),
        bound=spencer_bound(n, m, r),
        sizes=tuple(sizes),
    )
    return _result(H.points, best, r - 1, "spencer", seed, certificate=trace)


def local_search_improve(
    points,
    result: SelectionResult,
    budget: int = 1000,
    seed: int = 0,
    H: CollinearHypergraph | None = None,
) -> SelectionResult:
    """Swap search: drop one chosen point and add up to two others.

    Moves that add one point (sideways) or two (improving) are kept; a move
    adding nothing is undone. Any point that becomes addable is added at
    once. ``budget`` counts swap attempts.
    """
    points = _as_pointset(points)
    if budget <= 0:
        return result
    k = result.k
    if H is None or H.r != k + 1:
        H = build_collinearity_hypergraph(points, k + 1)
    rng = substream(seed, "local-search")
    state = _LineState(H)
    for p in result.subset:
        v = points.index(p)
        if not state.can_add(v):
            raise SelectionError("starting subset is not valid for this point set")
        state.add(v)

    def fill():
        while state.free:
            cands = sorted(state.free)
            state.add(cands[int(rng.integers(len(cands)))])

    fill()
    best = state.chosen()
    for _ in range(budget):
        chosen = state.chosen()
        if not chosen:
            break
        x = chosen[int(rng.integers(len(chosen)))]
        state.remove(x)
        added = 0
        while added < 2:
            cands = sorted(state.free - {x})
            if not cands:
                break
            state.add(cands[int(rng.integers(len(cands)))])
            added += 1
        if added == 0:
            state.add(x)
            continue
        fill()
        if sum(state.selected) > len(best):
            best = state.chosen()
    if len(best) <= result.size:
        return result
    strategy = result.strategy if result.strategy.endswith("+ls") else result.strategy + "+ls"
    return _result(points, best, k, strategy, result.seed, certificate=result.certificate)


# ---------------------------------------------------------------------------
# exact search


def _parallel_class(points: PointSet, direction) -> list[list[int]]:
    """Partition of the points into lines with the given direction."""
    groups: dict = {}
    for i, p in enumerate(points):
        q = tuple(a + b for a, b in zip(p, direction))
        groups.setdefault(canonical_line(p, q), []).append(i)
    return list(groups.values())


def _best_partition(points: PointSet, H: CollinearHypergraph, k: int) -> tuple[tuple[int, ...], list[list[int]]]:
    """The direction whose parallel lines give the smallest capacity bound
    sum(min(k, |line|)), and that partition."""
    best = None
    for d in sorted({key.direction for key, _ in H.lines}):
        part = _parallel_class(points, d)
        cap = sum(min(k, len(g)) for g in part)
        if best is None or cap < best[0]:
            best = (cap, d, part)
    _, d, part = best
    # long lines first, then middle-out across the class: central lines
    # constrain the most, which finds tight incumbents early
    part.sort()
    mid = (len(part) - 1) / 2
    order = sorted(range(len(part)), key=lambda i: (-len(part[i]), abs(i - mid), i))
    return d, [part[i] for i in order]


def _grid_mirror(points: PointSet, direction) -> list[int] | None:
    """For a full axis-aligned 2-d grid and an axis direction, the index map of
    the reflection that fixes every line of that direction; else None."""
    if points.dim != 2 or direction not in ((0, 1), (1, 0)):
        return None
    xs = sorted({p[0] for p in points})
    ys = sorted({p[1] for p in points})
    if len(xs) * len(ys) != len(points):
        return None
    if xs != list(range(xs[0], xs[0] + len(xs))) or ys != list(range(ys[0], ys[0] + len(ys))):
        return None
    if direction == (0, 1):
        lo, hi = ys[0], ys[-1]
        return [points.index((x, lo + hi - y)) for x, y in points]
    lo, hi = xs[0], xs[-1]
    return [points.index((lo + hi - x, y)) for x, y in points]


class _NodeLimit(Exception):
    pass


def exact_max_subset(
    points,
    k: int = 2,
    node_limit: int = 5_000_000,
    seed: int = 0,
    H: CollinearHypergraph | None = None,
) -> SelectionResult:
    """Branch and bound for a maximum subset with at most ``k`` collinear.

    Points are partitioned into parallel lines (the direction giving the
    tightest capacity bound). The search fixes the chosen points of one line
    at a time; the bound is the current size plus ``min(k, addable points)``
    over the undecided lines. On full axis-aligned grids, choices on the
    first line are restricted to one of each mirror pair.

    If ``node_limit`` is hit the incumbent is returned with
    ``proven_optimal=False``.
    """
    points = _as_pointset(points)
    if k < 2:
        raise SelectionError("k must be at least 2")
    H = H or build_collinearity_hypergraph(points, k + 1)
    if H.m == 0:
        return _result(points, range(len(points)), k, "exact", seed, proven_optimal=True)

    direction, part = _best_partition(points, H, k)
    mirror = _grid_mirror(points, direction)
    state = _LineState(H)
    start = greedy_select(points, k, seed, H=H)
    start = local_search_improve(points, start, default_budget(len(points)), seed, H=H)
    best_idx = [points.index(p) for p in start.subset]
    nodes = 0

    def bound(li: int) -> int:
        total = 0
        for g in part[li:]:
            free = 0
            for v in g:
                if state.can_add(v):
                    free += 1
                    if free == k:
                        break
            total += free
        return total

    def dfs(li: int, size: int) -> None:
        nonlocal nodes, best_idx
        if size > len(best_idx):
            best_idx = state.chosen()
        if li == len(part) or size + bound(li) <= len(best_idx):
            return
        line = [v for v in part[li] if state.can_add(v)]
        for t in range(min(k, len(line)), -1, -1):
            for combo in itertools.combinations(line, t):
                nodes += 1
                if nodes > node_limit:
                    raise _NodeLimit
                if li == 0 and mirror is not None and combo > tuple(sorted(mirror[v] for v in combo)):
                    continue
                added = []
                for v in combo:
                    if not state.can_add(v):
                        break
                    state.add(v)
                    added.append(v)
                else:
                    dfs(li + 1, size + t)
                for v in reversed(added):
                    state.remove(v)

    proven = True
    try:
        dfs(0, 0)
    except _NodeLimit:
        proven = False
    return _result(points, sorted(best_idx), k, "exact", seed, proven_optimal=proven)


# ---------------------------------------------------------------------------


def _run_strategy(points, k, strategy, seed, H, trials, budget, node_limit) -> SelectionResult:
    if strategy == "greedy":
        return greedy_select(points, k, seed, H=H)
    if strategy == "greedy+ls":
        return local_search_improve(points, greedy_select(points, k, seed, H=H), budget, seed, H=H)
    if strategy == "spencer":
        return spencer_select(H, trials, seed)
    if strategy == "spencer+ls":
        return local_search_improve(points, spencer_select(H, trials, seed), budget, seed, H=H)
    if strategy == "exact":
        return exact_max_subset(points, k, node_limit, seed, H=H)
    raise SelectionError(f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")


def default_budget(n: int) -> int:
    return 20 * n


def select_best(
    points,
    k: int = 2,
    strategies: Sequence[str] = DEFAULT_STRATEGIES,
    seed: int = 0,
    trials: int = 50,
    budget: int | None = None,
    node_limit: int = 200_000,
) -> SelectionResult:
    """Run each strategy and return the largest result; earlier strategies win ties."""
    if not strategies:
        raise SelectionError("no strategies requested")
    points = _as_pointset(points)
    H = build_collinearity_hypergraph(points, k + 1)
    if budget is None:
        budget = default_budget(len(points))
    best = None
    for name in strategies:
        res = _run_strategy(points, k, name, seed, H, trials, budget, node_limit)
        if best is None or res.size > best.size:
            best = res
    return best


@dataclass(frozen=True)
class GowersWitness:
    kind: str  # "collinear" | "general_position" | "unresolved"
    q: int
    points: tuple[tuple[int, ...], ...]

    @property
    def resolved(self) -> bool:
        return self.kind != "unresolved"


def gowers_witness(points, q: int, seed: int = 0, node_limit: int = 200_000) -> GowersWitness:
    """Either q collinear points or q points with no three collinear."""
    if q < 3:
        raise SelectionError("q must be at least 3")
    points = _as_pointset(points)
    H = build_collinearity_hypergraph(points, 3)
    longest = max((mem for _, mem in H.lines), key=len, default=())
    if len(longest) >= q:
        return GowersWitness("collinear", q, tuple(longest[:q]))
    res = select_best(points, 2, seed=seed)
    if res.size < q:
        res = exact_max_subset(points, 2, node_limit, seed, H=H)
    if res.size >= q:
        chosen = tuple(res.subset[:q])
        if collinearity_profile(chosen).ell_max > 2:
            raise SelectionError("internal error: witness is not in general position")
        return GowersWitness("general_position", q, chosen)
    return GowersWitness("unresolved", q, ())
