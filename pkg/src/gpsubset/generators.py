"""Point families: grids, the GP_k grid, [ell]^d lattices, projections, random sets.

Planar grids use coordinates 0..q-1. Lattices [ell]^d use 1..ell, the domain
of the signature coloring; ``lattice_hd(q, 2)`` is ``grid_2d(q)`` shifted by
(1, 1).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .geometry import PointSet, collinearity_profile, primitive_direction
from .rng import substream

LATTICE_BUDGET = 1_000_000
FAMILIES = ("grid2d", "gpk_grid", "lattice_hd", "random_bounded", "line", "projected_lattice")


class GeneratorError(ValueError):
    pass


def grid_2d(q: int) -> PointSet:
    if q < 2:
        raise GeneratorError(f"grid side must be at least 2, got {q}")
    return PointSet(itertools.product(range(q), repeat=2), dim=2)


def gpk_side(q: int, k: int) -> int:
    return (q - 1) // k


def gpk_grid(q: int, k: int) -> PointSet:
    """The m x m grid with m = floor((q-1)/k): fewer than q collinear, and any
    subset with at most k collinear has at most k*m <= q-1 points (k per row)."""
    if k < 2:
        raise GeneratorError("k must be at least 2")
    if q <= k:
        raise GeneratorError(f"need q > k, got q={q}, k={k}")
    m = gpk_side(q, k)
    if m < 1:
        raise GeneratorError(f"m = floor((q-1)/k) = {m} gives an empty grid")
    return PointSet(itertools.product(range(m), repeat=2), dim=2)


def lattice_hd(ell: int, d: int, budget: int = LATTICE_BUDGET) -> PointSet:
    if ell < 2 or d < 1:
        raise GeneratorError("need ell >= 2 and d >= 1")
    if ell**d > budget:
        raise GeneratorError(f"[{ell}]^{d} has {ell**d} points, over the budget of {budget}")
    return PointSet(itertools.product(range(1, ell + 1), repeat=d), dim=d)


def collinear_points(n: int, direction=(1, 0)) -> PointSet:
    return PointSet(((i * direction[0], i * direction[1]) for i in range(n)), dim=2)


def _profile_signature(points: PointSet) -> dict[int, int]:
    return collinearity_profile(points).s


def generic_projection(points, seed: int = 0, max_attempts: int = 64) -> PointSet:
    """Map points of Z^d into Z^2 by a random integer matrix, keeping only a
    map that is injective and leaves the collinearity profile unchanged.

    Attempt ``a`` draws entries uniformly from [-B, B] with B = 4 * 2^a
    (capped at 2^20); planar input is returned unchanged.
    """
    points = points if isinstance(points, PointSet) else PointSet(points)
    if points.dim == 2:
        return points
    if points.dim < 2:
        raise GeneratorError("projection needs dimension >= 2")
    target = _profile_signature(points)
    arr = points.as_array()
    last = None
    for a in range(max_attempts):
        bound = min(4 << a, 1 << 20)
        rng = substream(seed, "projection", a)
        M = rng.integers(-bound, bound + 1, size=(points.dim, 2))
        img = arr @ M
        if len({tuple(r) for r in img.tolist()}) != len(points):
            last = "points collide"
            continue
        image = PointSet(img.tolist(), dim=2)
        got = _profile_signature(image)
        if got == target:
            return image
        last = f"profile {got} != {target}"
    raise GeneratorError(f"no collinearity-preserving projection in {max_attempts} attempts ({last})")


def random_bounded_collinear(
    n: int,
    ell: int,
    box: int | tuple[int, int],
    seed: int = 0,
    max_attempts: int | None = None,
) -> PointSet:
    """n distinct points of [0, w) x [0, h) with at most ``ell`` on a line.

    Candidates are drawn uniformly; one is rejected if it is already present
    or would be the (ell+1)-th point on a line.
    """
    w, h = (box, box) if isinstance(box, int) else box
    if n < 0 or ell < 2:
        raise GeneratorError("need n >= 0 and ell >= 2")
    if w * h < n:
        raise GeneratorError(f"box {w}x{h} holds only {w * h} lattice points, fewer than n={n}")
    if max_attempts is None:
        max_attempts = 1000 * max(n, 1)
    rng = substream(seed, "random-bounded")
    chosen: list[tuple[int, int]] = []
    taken = set()
    attempts = 0
    while len(chosen) < n:
        if attempts >= max_attempts:
            raise GeneratorError(f"placed only {len(chosen)} of {n} points in {max_attempts} attempts")
        attempts += 1
        x, y = int(rng.integers(w)), int(rng.integers(h))
        p = (x, y)
        if p in taken:
            continue
        dirs = Counter(primitive_direction(p, c) for c in chosen)
        if dirs and max(dirs.values()) >= ell:
            continue
        chosen.append(p)
        taken.add(p)
    return PointSet(chosen, dim=2)


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise GeneratorError(f"unknown family {self.family!r}")

    def build(self) -> PointSet:
        return build_family(self)

    def label(self) -> str:
        inner = ";".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.family}({inner})"


def build_family(spec: FamilySpec) -> PointSet:
    p = spec.params
    if spec.family == "grid2d":
        return grid_2d(int(p["q"]))
    if spec.family == "gpk_grid":
        return gpk_grid(int(p["q"]), int(p["k"]))
    if spec.family == "lattice_hd":
        return lattice_hd(int(p["ell"]), int(p["d"]))
    if spec.family == "projected_lattice":
        return generic_projection(lattice_hd(int(p["ell"]), int(p["d"])), seed=spec.seed)
    if spec.family == "line":
        return collinear_points(int(p["n"]))
    box = p.get("box", 100)
    return random_bounded_collinear(int(p["n"]), int(p["ell"]), int(box), seed=spec.seed)


def points_to_array(points: PointSet) -> np.ndarray:
    return points.as_array()
