"""Exact integer points, canonical lines and collinearity profiles.

Everything here is integer arithmetic. The only floats are the ``ln(ell)``
terms inside :class:`BoundReport`, which are diagnostics and never feed back
into a count.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

Point = tuple[int, ...]

# numpy path is used while pair differences fit comfortably in int64
_NUMPY_COORD_LIMIT = 2**61
_PAIRS_PER_CHUNK = 1 << 21


class GeometryError(ValueError):
    pass


class DegenerateInputError(GeometryError):
    pass


class DuplicatePointError(GeometryError):
    def __init__(self, point: Point, where: str = ""):
        self.point = point
        msg = f"duplicate point {point}"
        super().__init__(f"{msg} {where}".rstrip())


class BoundUndefinedError(GeometryError):
    pass


class PointSet(Sequence[Point]):
    """Immutable set of distinct integer points of one dimension.

    Points are stored in lexicographic order; ``index`` is O(1).
    Duplicates are rejected, never merged.
    """

    __slots__ = ("_points", "_index", "dim")

    def __init__(self, points: Iterable[Sequence[int]], dim: int | None = None):
        pts = [tuple(int(c) for c in p) for p in points]
        if dim is None:
            dim = len(pts[0]) if pts else 2
        index: dict[Point, int] = {}
        for p in pts:
            if len(p) != dim:
                raise GeometryError(f"point {p} has dimension {len(p)}, expected {dim}")
            if p in index:
                raise DuplicatePointError(p)
            index[p] = 0
        if dim < 1:
            raise GeometryError("dimension must be positive")
        pts.sort()
        self._points: tuple[Point, ...] = tuple(pts)
        self._index = {p: i for i, p in enumerate(self._points)}
        self.dim = dim

    def __len__(self) -> int:
        return len(self._points)

    def __getitem__(self, i):
        return self._points[i]

    def __iter__(self) -> Iterator[Point]:
        return iter(self._points)

    def __contains__(self, p) -> bool:
        return tuple(p) in self._index

    def __eq__(self, other) -> bool:
        if isinstance(other, PointSet):
            return self.dim == other.dim and self._points == other._points
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.dim, self._points))

    def __repr__(self) -> str:
        return f"PointSet(n={len(self)}, dim={self.dim})"

    def index(self, p) -> int:
        try:
            return self._index[tuple(p)]
        except KeyError:
            raise KeyError(f"point {tuple(p)} not in set") from None

    def subset(self, points: Iterable[Sequence[int]]) -> "PointSet":
        out = PointSet(points, dim=self.dim)
        for p in out:
            if p not in self._index:
                raise KeyError(f"point {p} not in set")
        return out

    def without(self, points: Iterable[Sequence[int]]) -> "PointSet":
        drop = {tuple(p) for p in points}
        return PointSet((p for p in self._points if p not in drop), dim=self.dim)

    def as_array(self) -> np.ndarray:
        return np.array(self._points, dtype=np.int64).reshape(len(self), self.dim)


@dataclass(frozen=True, order=True)
class LineKey:
    """Hashable canonical form of a lattice line.

    ``direction`` is primitive with its first nonzero entry positive. If that
    entry sits at coordinate ``c``, ``anchor`` is the unique lattice point of
    the line with ``0 <= anchor[c] < direction[c]``.
    """

    anchor: Point
    direction: Point

    def contains(self, p: Sequence[int]) -> bool:
        diff = [a - b for a, b in zip(p, self.anchor)]
        c = _first_nonzero(self.direction)
        if diff[c] % self.direction[c]:
            return False
        t = diff[c] // self.direction[c]
        return all(x == t * d for x, d in zip(diff, self.direction))


def _first_nonzero(v: Sequence[int]) -> int:
    for i, x in enumerate(v):
        if x:
            return i
    raise DegenerateInputError("zero direction vector")


def primitive_direction(p: Sequence[int], q: Sequence[int]) -> Point:
    diff = [b - a for a, b in zip(p, q)]
    g = math.gcd(*diff)
    if g == 0:
        raise DegenerateInputError(f"identical points {tuple(p)} do not span a line")
    d = [x // g for x in diff]
    if d[_first_nonzero(d)] < 0:
        d = [-x for x in d]
    return tuple(d)


def canonical_line(p: Sequence[int], q: Sequence[int]) -> LineKey:
    if len(p) != len(q):
        raise GeometryError("points of different dimension")
    d = primitive_direction(p, q)
    c = _first_nonzero(d)
    t = p[c] // d[c]
    anchor = tuple(int(a - t * b) for a, b in zip(p, d))
    return LineKey(anchor, d)


def is_collinear(points: Sequence[Sequence[int]]) -> bool:
    """True when all points lie on one line (fewer than 3 points always do)."""
    if len(points) < 3:
        return True
    p = points[0]
    q = next((x for x in points[1:] if tuple(x) != tuple(p)), None)
    if q is None:
        return True
    key = canonical_line(p, q)
    return all(key.contains(x) for x in points)


# ---------------------------------------------------------------------------
# pair grouping
#
# Points are kept in lexicographic order, so for i < j the difference
# P[j] - P[i] is already lexicographically positive. Grouping the pairs
# (i, j > i) by primitive direction yields one group per line through P[i]
# towards larger points. A line with s points produces groups of sizes
# s-1, s-2, ..., 1 (one from each member but the last), so
#     #groups of size c == #lines with at least c + 1 points.


def _fits_int64(points: PointSet) -> bool:
    return all(abs(c) < _NUMPY_COORD_LIMIT for p in points for c in p)


def _mixed_radix(P: np.ndarray):
    """Radices packing (i, direction) into one int64, or None if it would overflow."""
    n, d = P.shape
    spans = (P.max(axis=0) - P.min(axis=0)).tolist()
    radices = [2 * s + 1 for s in spans]
    total = n
    for r in radices:
        total *= r
    if total >= 2**62:
        return None
    return spans, radices


def _pair_chunks(P: np.ndarray):
    n, d = P.shape
    lo = 0
    while lo < n - 1:
        hi, total = lo, 0
        while hi < n - 1 and (total == 0 or total + (n - 1 - hi) <= _PAIRS_PER_CHUNK):
            total += n - 1 - hi
            hi += 1
        rows = np.arange(lo, hi, dtype=np.int64)
        counts = n - 1 - rows
        ii = np.repeat(rows, counts)
        first = np.repeat(np.cumsum(counts) - counts, counts)
        jj = np.arange(total, dtype=np.int64) - first + ii + 1
        diff = P[jj] - P[ii]
        g = np.gcd.reduce(diff, axis=1)
        yield ii, jj, diff // g[:, None]
        lo = hi


def _group_codes(ii: np.ndarray, dirs: np.ndarray, radix) -> np.ndarray:
    spans, radices = radix
    code = ii.copy()
    for c, (s, r) in enumerate(zip(spans, radices)):
        code *= r
        code += dirs[:, c] + s
    return code


def _pair_group_chunks(P: np.ndarray):
    """Yield (ii, dirs, jj, starts, sizes) for chunks of anchor rows.

    Within a chunk the pair arrays are sorted by (i, direction); group ``g``
    occupies ``[starts[g], starts[g] + sizes[g])``.
    """
    d = P.shape[1]
    radix = _mixed_radix(P)
    for ii, jj, dirs in _pair_chunks(P):
        total = len(ii)
        if radix is not None:
            code = _group_codes(ii, dirs, radix)
            order = np.argsort(code, kind="stable")
            code = code[order]
            change = np.empty(total, dtype=bool)
            change[0] = True
            change[1:] = code[1:] != code[:-1]
        else:
            order = np.lexsort([dirs[:, c] for c in range(d - 1, -1, -1)] + [ii])
        ii, jj, dirs = ii[order], jj[order], dirs[order]
        if radix is None:
            change = np.empty(total, dtype=bool)
            change[0] = True
            change[1:] = (ii[1:] != ii[:-1]) | np.any(dirs[1:] != dirs[:-1], axis=1)
        starts = np.flatnonzero(change)
        sizes = np.diff(np.append(starts, total))
        yield ii, dirs, jj, starts, sizes


def _group_sizes(P: np.ndarray):
    """Group sizes only, chunk by chunk (cheaper: no member bookkeeping)."""
    radix = _mixed_radix(P)
    if radix is None:
        for *_, sizes in _pair_group_chunks(P):
            yield sizes
        return
    for ii, _, dirs in _pair_chunks(P):
        code = np.sort(_group_codes(ii, dirs, radix))
        change = np.empty(len(code), dtype=bool)
        change[0] = True
        change[1:] = code[1:] != code[:-1]
        starts = np.flatnonzero(change)
        yield np.diff(np.append(starts, len(code)))


def _pair_group_chunks_py(points: PointSet):
    n = len(points)
    for i in range(n - 1):
        p = points[i]
        groups: dict[Point, list[int]] = defaultdict(list)
        for j in range(i + 1, n):
            groups[primitive_direction(p, points[j])].append(j)
        yield i, groups


def _group_size_histogram(points: PointSet) -> Counter:
    hist: Counter = Counter()
    if len(points) < 2:
        return hist
    if _fits_int64(points):
        for sizes in _group_sizes(points.as_array()):
            vals, cnt = np.unique(sizes, return_counts=True)
            for v, c in zip(vals.tolist(), cnt.tolist()):
                hist[v] += c
    else:
        for _, groups in _pair_group_chunks_py(points):
            for members in groups.values():
                hist[len(members)] += 1
    return hist


def collinear_lines(points: PointSet, min_size: int = 3) -> dict[LineKey, tuple[Point, ...]]:
    """All lines carrying at least ``min_size`` points, with sorted members.

    The result is ordered by :class:`LineKey`.
    """
    if min_size < 2:
        raise GeometryError("min_size must be at least 2")
    found: dict[LineKey, tuple[Point, ...]] = {}
    if len(points) < min_size:
        return found
    need = min_size - 1
    if _fits_int64(points):
        P = points.as_array()
        for ii, dirs, jj, starts, sizes in _pair_group_chunks(P):
            for g in np.flatnonzero(sizes >= need).tolist():
                s0 = starts[g]
                i = int(ii[s0])
                p = points[i]
                key = canonical_line(p, tuple(a + b for a, b in zip(p, dirs[s0].tolist())))
                if key not in found:
                    found[key] = (p,) + tuple(points[j] for j in jj[s0:s0 + sizes[g]].tolist())
    else:
        for i, groups in _pair_group_chunks_py(points):
            p = points[i]
            for d, members in groups.items():
                if len(members) >= need:
                    key = canonical_line(p, tuple(a + b for a, b in zip(p, d)))
                    if key not in found:
                        found[key] = (p,) + tuple(points[j] for j in members)
    return dict(sorted(found.items()))


def collinear_lines_bruteforce(points: PointSet, min_size: int = 3) -> dict[LineKey, tuple[Point, ...]]:
    """Reference implementation: hash every pair by its canonical line."""
    members: dict[LineKey, set[Point]] = defaultdict(set)
    pts = list(points)
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            key = canonical_line(pts[a], pts[b])
            members[key].update((pts[a], pts[b]))
    return {k: tuple(sorted(v)) for k, v in sorted(members.items()) if len(v) >= min_size}


@dataclass(frozen=True)
class LineStats:
    n: int
    s: dict[int, int]
    ell_max: int
    max_codegree: int

    def tail(self, i: int) -> int:
        """Number of lines with at least ``i`` points."""
        return sum(c for size, c in self.s.items() if size >= i)


def _stats_from_s(n: int, s: dict[int, int]) -> LineStats:
    s = {i: c for i, c in sorted(s.items()) if c}
    ell = max(s) if s else n
    return LineStats(n=n, s=s, ell_max=ell, max_codegree=max(ell - 2, 0))


def collinearity_profile(points: PointSet | Iterable[Sequence[int]]) -> LineStats:
    if not isinstance(points, PointSet):
        points = PointSet(points)
    n = len(points)
    hist = _group_size_histogram(points)
    # hist[c] = number of lines with >= c+1 points
    s = {c + 1: hist[c] - hist.get(c + 1, 0) for c in hist}
    return _stats_from_s(n, s)


def profile_from_counts(n: int, s: dict[int, int]) -> LineStats:
    """Build LineStats from an explicit profile (used for synthetic inputs)."""
    return _stats_from_s(n, dict(s))


def max_collinear(points: PointSet | Iterable[Sequence[int]]) -> int:
    return collinearity_profile(points).ell_max


def count_collinear_ktuples(stats: LineStats, k: int) -> int:
    if k < 3:
        raise GeometryError("k must be at least 3")
    return sum(math.comb(i, k) * c for i, c in stats.s.items())


@dataclass(frozen=True)
class BoundReport:
    n: int
    ell: int
    triples: int
    triple_ratio: float
    st_tail_ratios: dict[int, Fraction]
    st_constant: Fraction
    _stats: LineStats = field(repr=False, compare=False)

    def ktuple_ratio(self, k: int) -> Fraction:
        """Collinear k-tuples over ell^(k-3) n^2 + ell^(k-1) n."""
        n, ell = self.n, self.ell
        denom = ell ** (k - 3) * n * n + ell ** (k - 1) * n
        return Fraction(count_collinear_ktuples(self._stats, k), denom)


def bound_report(stats: LineStats, ell: int | None = None) -> BoundReport:
    """Measured counts divided by the bound shapes (constants set to 1).

    ``ell`` is the assumed collinearity bound; it defaults to the measured
    ``ell_max`` and may not be smaller than it.
    """
    n = stats.n
    if ell is None:
        ell = stats.ell_max
    elif ell < stats.ell_max:
        raise BoundUndefinedError(f"ell={ell} is below the measured maximum {stats.ell_max}")
    if ell < 3:
        raise BoundUndefinedError(f"bounds need ell >= 3 (got {ell})")
    triples = count_collinear_ktuples(stats, 3)
    triple_ratio = triples / (n * n * math.log(ell) + ell * ell * n)
    tails = {}
    for i in range(2, ell + 1):
        # n^2/i^3 + n/i == (n^2 + n i^2) / i^3
        tails[i] = Fraction(stats.tail(i) * i**3, n * n + n * i * i)
    return BoundReport(
        n=n,
        ell=ell,
        triples=triples,
        triple_ratio=triple_ratio,
        st_tail_ratios=tails,
        st_constant=max(tails.values()),
        _stats=stats,
    )
