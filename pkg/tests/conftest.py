import random

import pytest

from gpsubset import PointSet, grid_2d, lattice_hd, random_bounded_collinear
from gpsubset.generators import collinear_points

_ACCEPTANCE: list[tuple[str, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(cid, title): exit criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for name, args in getattr(report, "acceptance", ()):
        _ACCEPTANCE.append((args[0], args[1], report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marks = [(m.name, m.args) for m in item.iter_markers("acceptance")]
    rep.acceptance = marks


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid, title, outcome in sorted(_ACCEPTANCE, key=lambda t: int(t[0].lstrip("AC"))):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {cid:>4}  {title}")


def random_small_set(rng, n, box=5, dim=2):
    pts = set()
    while len(pts) < n:
        pts.add(tuple(rng.randrange(box) for _ in range(dim)))
    return PointSet(pts, dim=dim)


@pytest.fixture(scope="session")
def corpus():
    """Small mixed instances shared by property tests."""
    rng = random.Random(7)
    sets = {
        "grid3": grid_2d(3),
        "grid4": grid_2d(4),
        "grid5": grid_2d(5),
        "line5": collinear_points(5),
        "line6": collinear_points(6),
        "gp4": PointSet([(0, 0), (1, 0), (0, 1), (2, 3)]),
        "cube": lattice_hd(2, 3),
        "lattice33": lattice_hd(3, 3),
        "rb25": random_bounded_collinear(25, 4, 8, seed=1),
        "rb30": random_bounded_collinear(30, 3, 14, seed=2),
    }
    for i in range(6):
        sets[f"rand{i}"] = random_small_set(rng, rng.randrange(6, 13))
    return sets
