"""The collinearity hypergraph H_r(P), stored implicitly through its lines.

An edge is a collinear r-subset of P. Edges are never materialised except by
:func:`enumerate_edges`, which refuses to exceed a caller-supplied cap: a
line with ``i`` points already carries ``C(i, r)`` edges.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .geometry import LineKey, Point, PointSet, collinear_lines


class HypergraphError(ValueError):
    pass


class CapacityError(HypergraphError):
    def __init__(self, m: int, cap: int):
        self.m = m
        self.cap = cap
        super().__init__(f"hypergraph has {m} edges, more than cap={cap}")


@dataclass(frozen=True, eq=False)
class CollinearHypergraph:
    r: int
    points: PointSet
    lines: tuple[tuple[LineKey, tuple[Point, ...]], ...]
    m: int
    # index views: line -> member indices, point index -> line indices
    line_members: tuple[tuple[int, ...], ...] = field(repr=False)
    point_lines: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def incidence(self) -> dict[Point, tuple[int, ...]]:
        return {p: self.point_lines[i] for i, p in enumerate(self.points)}

    def degrees(self) -> list[int]:
        r = self.r
        sizes = [len(mem) for mem in self.line_members]
        return [sum(math.comb(sizes[L] - 1, r - 1) for L in ls) for ls in self.point_lines]

    def is_independent(self, subset) -> bool:
        """True when ``subset`` (points of this hypergraph) contains no edge."""
        chosen = {self.points.index(p) for p in subset}
        return all(sum(1 for v in mem if v in chosen) < self.r for mem in self.line_members)

    def check_consistency(self) -> None:
        for L, mem in enumerate(self.line_members):
            if len(mem) < self.r:
                raise HypergraphError(f"line {L} has fewer than r={self.r} points")
            for v in mem:
                if L not in self.point_lines[v]:
                    raise HypergraphError(f"point {self.points[v]} missing line {L}")
        for v, ls in enumerate(self.point_lines):
            for L in ls:
                if v not in self.line_members[L]:
                    raise HypergraphError(f"line {L} missing point {self.points[v]}")
        if self.m != sum(math.comb(len(mem), self.r) for mem in self.line_members):
            raise HypergraphError("edge count disagrees with line sizes")


def build_collinearity_hypergraph(points: PointSet | Sequence[Sequence[int]], r: int = 3) -> CollinearHypergraph:
    if r < 3:
        raise HypergraphError(f"uniformity r must be at least 3, got {r}")
    if not isinstance(points, PointSet):
        points = PointSet(points)
    lines = tuple(collinear_lines(points, min_size=r).items())
    line_members = tuple(tuple(points.index(p) for p in mem) for _, mem in lines)
    inc: list[list[int]] = [[] for _ in range(len(points))]
    for L, mem in enumerate(line_members):
        for v in mem:
            inc[v].append(L)
    m = sum(math.comb(len(mem), r) for mem in line_members)
    return CollinearHypergraph(
        r=r,
        points=points,
        lines=lines,
        m=m,
        line_members=line_members,
        point_lines=tuple(tuple(ls) for ls in inc),
    )


def vertex_degree(H: CollinearHypergraph, v: Sequence[int]) -> int:
    i = H.points.index(v)
    return sum(math.comb(len(H.line_members[L]) - 1, H.r - 1) for L in H.point_lines[i])


def enumerate_edges(H: CollinearHypergraph, cap: int) -> list[tuple[Point, ...]]:
    """Every edge once, each a sorted r-tuple; the list is sorted lexicographically."""
    if H.m > cap:
        raise CapacityError(H.m, cap)
    edges = [c for _, mem in H.lines for c in itertools.combinations(mem, H.r)]
    edges.sort()
    return edges


def truncation_threshold(H: CollinearHypergraph, factor: int = 2) -> Fraction:
    """``factor * r * m / n``: ``factor`` times the average degree."""
    if H.n == 0:
        return Fraction(0)
    return Fraction(factor * H.r * H.m, H.n)


def degree_truncate(H: CollinearHypergraph, threshold: int | Fraction) -> PointSet:
    threshold = Fraction(threshold)
    degs = H.degrees()
    return PointSet((p for p, dg in zip(H.points, degs) if dg <= threshold), dim=H.points.dim)


def pair_overlap_counts(H: CollinearHypergraph, j: int) -> int:
    """p_j(H): unordered pairs of edges sharing exactly ``j`` vertices.

    Two shared vertices pin both edges to one line, so per line of size ``i``
    the count is C(i,r) * C(r,j) * C(i-r, r-j) / 2. Only 2 <= j <= r-1.
    """
    r = H.r
    if not 2 <= j <= r - 1:
        raise HypergraphError(f"j must lie in [2, {r - 1}], got {j}")
    total = 0
    for mem in H.line_members:
        i = len(mem)
        total += math.comb(i, r) * math.comb(r, j) * math.comb(i - r, r - j)
    return total // 2


def degree_histogram(H: CollinearHypergraph) -> dict[int, int]:
    return dict(sorted(Counter(H.degrees()).items()))


@dataclass(frozen=True)
class PrecondCertificate:
    """Diagnostic record of the max-degree and p_j conditions for a given t, gamma.

    ``params`` stores any further analysis constants the caller wants kept
    alongside (epsilon, c, d, ...); nothing checks them.
    """

    r: int
    n: int
    t: float
    gamma: float
    delta_max: int
    pj: dict[int, int]
    passed: dict[str, bool]
    params: dict[str, float] = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return all(self.passed.values())


def precondition_check(H: CollinearHypergraph, t: float, gamma: float, **params: float) -> PrecondCertificate:
    if t <= 0 or gamma <= 0:
        raise HypergraphError("t and gamma must be positive")
    r, n = H.r, H.n
    delta_max = max(H.degrees(), default=0)
    passed = {"max_degree": delta_max <= t ** (r - 1)}
    pj = {}
    for j in range(2, r):
        pj[j] = pair_overlap_counts(H, j)
        passed[f"p{j}"] = pj[j] <= n * t ** (2 * r - j - 1 - gamma)
    return PrecondCertificate(
        r=r, n=n, t=t, gamma=gamma, delta_max=delta_max, pj=pj, passed=passed, params=dict(params)
    )


def general_position_t(n: int, ell: int, c: float = 1.0, d: float = 1.0) -> float:
    """t = sqrt((d+1) c n ln ell), the parameter used for the k = 2 bound."""
    return math.sqrt((d + 1) * c * n * math.log(ell))


def k_collinear_t(n: int, ell: int, k: int, c: float = 1.0) -> float:
    """t = (4 (k+1) c n ell^(k-2))^(1/k), used for subsets with at most k collinear."""
    return (4 * (k + 1) * c * n * ell ** (k - 2)) ** (1 / k)
