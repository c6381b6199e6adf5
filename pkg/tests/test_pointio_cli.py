import csv
import io
import json

import pytest

from gpsubset.cli import main
from gpsubset.coloring import Coloring, peel_coloring
from gpsubset.generators import grid_2d, lattice_hd
from gpsubset.geometry import DuplicatePointError, PointSet
from gpsubset.pointio import (
    ParseError,
    format_coloring,
    format_points,
    parse_coloring,
    parse_points,
    save_points,
)


def test_points_roundtrip():
    for P in (grid_2d(4), lattice_hd(2, 3), PointSet([(-3, 10**20), (5, -7)])):
        Q, meta = parse_points(format_points(P, {"family": "x"}))
        assert Q == P and meta["family"] == "x" and int(meta["dim"]) == P.dim


def test_parse_errors_carry_line_number():
    with pytest.raises(ParseError) as e:
        parse_points("# dim=2\n0 0\n1 a\n")
    assert e.value.lineno == 3 and "line 3" in str(e.value)
    with pytest.raises(ParseError):
        parse_points("0 0\n1 2 3\n")
    with pytest.raises(DuplicatePointError) as e:
        parse_points("0 0\n1 1\n0 0\n")
    assert "(0, 0)" in str(e.value) and "line 3" in str(e.value)


def test_trailing_comments():
    P, _ = parse_points("0 0  # origin\n\n1 2\n")
    assert P == PointSet([(0, 0), (1, 2)])


def test_coloring_roundtrip():
    g = grid_2d(4)
    col = peel_coloring(g, "greedy", seed=3)
    back = parse_coloring(format_coloring(col))
    assert back.assignment == col.assignment and back.num_colors == col.num_colors
    with pytest.raises(ParseError):
        parse_coloring("0 0 => 1\n")


@pytest.fixture
def grid_file(tmp_path):
    path = tmp_path / "g.txt"
    save_points(path, grid_2d(4))
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


def test_cli_generate_and_analyze(tmp_path, capsys):
    out = tmp_path / "g.txt"
    code, _ = run(capsys, "generate", "grid2d", "--q", 5, "--out", out)
    assert code == 0
    P, meta = parse_points(out.read_text())
    assert P == grid_2d(5) and meta["family"] == "grid2d" and "k" not in meta
    code, cap = run(capsys, "analyze", out)
    row = next(csv.DictReader(io.StringIO(cap.out)))
    assert code == 0 and row["n"] == "25" and row["ell_max"] == "5"
    code, cap = run(capsys, "analyze", out, "--format", "json", "--hypergraph", 3)
    rows = json.loads(cap.out)
    assert rows[1]["r"] == 3


def test_cli_select_oracle_verify(grid_file, tmp_path, capsys):
    sub = tmp_path / "s.txt"
    code, _ = run(capsys, "oracle", grid_file, "--out", sub)
    assert code == 0
    S, meta = parse_points(sub.read_text())
    assert len(S) == 8 and meta["proven_optimal"] == "true"
    code, cap = run(capsys, "verify", grid_file, "--subset", sub)
    assert code == 0 and "valid" in cap.out
    code, _ = run(capsys, "verify", grid_file, "--subset", grid_file, "--k", 2)
    assert code == 1
    code, _ = run(capsys, "select", grid_file, "--strategy", "greedy,spencer+ls", "--out", sub)
    assert code == 0
    code, _ = run(capsys, "verify", grid_file)
    assert code == 1


def test_cli_color_and_verify(grid_file, tmp_path, capsys):
    colf = tmp_path / "c.txt"
    for method in ("peel", "lll"):
        code, _ = run(capsys, "color", grid_file, "--method", method, "--out", colf)
        assert code == 0
        code, cap = run(capsys, "verify", grid_file, "--coloring", colf)
        assert code == 0 and cap.out.strip().endswith("valid")
    bad = Coloring({p: 0 for p in grid_2d(4)}, 1)
    colf.write_text(format_coloring(bad))
    code, cap = run(capsys, "verify", grid_file, "--coloring", colf)
    assert code == 1 and "violation" in cap.out


def test_cli_exit_code_2(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 0\nx y\n")
    code, cap = run(capsys, "analyze", bad)
    assert code == 2 and "line 2" in cap.err
    code, _ = run(capsys, "analyze", tmp_path / "missing.txt")
    assert code == 2
    with pytest.raises(SystemExit) as e:
        main(["select"])
    assert e.value.code == 2


def test_cli_experiment(tmp_path, capsys):
    cfg = tmp_path / "sweep.yaml"
    cfg.write_text("measure: select\nk: 2\nfamilies:\n  - family: grid2d\n    q: [3, 4]\nstrategies: [exact]\nseeds: [0]\n")
    out = tmp_path / "r.csv"
    code, _ = run(capsys, "experiment", "--config", cfg, "--out", out)
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert [r["subset_size"] for r in rows] == ["6", "8"]
