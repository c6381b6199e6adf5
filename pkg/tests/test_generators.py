import math

import pytest
from hypothesis import given, settings, strategies as st

from gpsubset.generators import (
    FamilySpec,
    GeneratorError,
    generic_projection,
    gpk_grid,
    grid_2d,
    lattice_hd,
    random_bounded_collinear,
)
from gpsubset.geometry import PointSet, collinearity_profile
from gpsubset.selection import exact_max_subset

import oracles


def test_grid_2d():
    g3 = grid_2d(3)
    assert len(g3) == 9 and collinearity_profile(g3).ell_max == 3
    g2 = grid_2d(2)
    assert len(g2) == 4 and collinearity_profile(g2).ell_max == 2
    st4 = collinearity_profile(grid_2d(4))
    assert st4.ell_max == 4
    assert sum(math.comb(i, 2) * c for i, c in st4.s.items()) == math.comb(16, 2)
    with pytest.raises(GeneratorError):
        grid_2d(1)


@pytest.mark.parametrize("q", range(2, 12))
def test_grid_ell_is_q(q):
    assert collinearity_profile(grid_2d(q)).ell_max == q


def test_gpk_grid():
    assert gpk_grid(10, 3) == grid_2d(3)
    assert gpk_grid(7, 3) == grid_2d(2)
    assert exact_max_subset(gpk_grid(10, 3), 3).size <= 9
    with pytest.raises(GeneratorError):
        gpk_grid(3, 3)


@given(st.integers(4, 60), st.integers(3, 10))
def test_gpk_capacity(q, k):
    if q <= k or (q - 1) // k < 1:
        return
    m = (q - 1) // k
    assert k * m <= q - 1
    assert m < q


def test_lattice_hd():
    cube = lattice_hd(2, 3)
    assert len(cube) == 8 and collinearity_profile(cube).ell_max == 2
    L32 = lattice_hd(3, 2)
    assert PointSet((x - 1, y - 1) for x, y in L32) == grid_2d(3)
    L33 = lattice_hd(3, 3)
    assert len(L33) == 27 and collinearity_profile(L33).ell_max == 3
    assert oracles.max_collinear(list(L33)) == 3
    with pytest.raises(GeneratorError):
        lattice_hd(10, 7)


def test_projection_identity_on_plane():
    g = grid_2d(4)
    assert generic_projection(g) is g


@pytest.mark.parametrize("ell,d", [(2, 3), (3, 3), (2, 4)])
def test_projection_preserves_profile(ell, d):
    src = lattice_hd(ell, d)
    img = generic_projection(src, seed=5)
    assert img.dim == 2 and len(img) == len(src)
    assert collinearity_profile(img).s == collinearity_profile(src).s


def test_projection_gives_up():
    with pytest.raises(GeneratorError):
        generic_projection(lattice_hd(3, 3), max_attempts=0)


def test_random_bounded_examples():
    P = random_bounded_collinear(10, 3, 100, seed=0)
    assert len(P) == 10 and collinearity_profile(P).ell_max <= 3
    with pytest.raises(GeneratorError):
        random_bounded_collinear(5, 4, 2)


RB50_FIRST, RB50_LAST = (2435, 350838), (987753, 43686)


def test_random_bounded_regression_fixture():
    P = random_bounded_collinear(50, 7, 10**6, seed=0)
    assert len(P) == 50 and collinearity_profile(P).ell_max <= 7
    assert P == random_bounded_collinear(50, 7, 10**6, seed=0)
    assert P[0] == RB50_FIRST and P[-1] == RB50_LAST


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 30), st.integers(2, 5), st.integers(6, 12), st.integers(0, 10**6))
def test_random_bounded_respects_ell(n, ell, box, seed):
    try:
        P = random_bounded_collinear(n, ell, box, seed=seed)
    except GeneratorError:
        return
    assert collinearity_profile(P).ell_max <= ell
    assert P == random_bounded_collinear(n, ell, box, seed=seed)


def test_family_spec():
    assert FamilySpec("grid2d", {"q": 3}).build() == grid_2d(3)
    assert FamilySpec("gpk_grid", {"q": 10, "k": 3}).label() == "gpk_grid(k=3;q=10)"
    with pytest.raises(GeneratorError):
        FamilySpec("horton", {})
