import csv

import pytest

from conftest import G1_TEXT
from snfr.cli import main
from snfr.graph import is_biconnected, load_graph


@pytest.fixture
def g1_file(tmp_path):
    p = tmp_path / "g1.txt"
    p.write_text(G1_TEXT)
    return p


def test_gen(tmp_path):
    out = tmp_path / "g.txt"
    main(["gen", "--nodes", "40", "--degree", "5", "--seed", "3", "--out", str(out)])
    g = load_graph(out.read_bytes())
    assert g.n == 40 and g.m == 100 and is_biconnected(g)
    again = tmp_path / "g2.txt"
    main(["gen", "-n", "40", "-d", "5", "--seed", "3", "-o", str(again)])
    assert again.read_bytes() == out.read_bytes()


def test_solve_oracle_stretch(tmp_path, g1_file, capsys):
    plan, opt, st = tmp_path / "plan.txt", tmp_path / "opt.csv", tmp_path / "st.csv"
    main(["solve", str(g1_file), "--check", "-o", str(plan)])
    assert "2 2 3 11" in plan.read_text()
    main(["oracle", str(g1_file), "-o", str(opt)])
    main(["stretch", str(g1_file), str(plan), str(opt), "-o", str(st)])
    rows = list(csv.DictReader(st.open()))
    assert [(r["child"], r["stretch"]) for r in rows] == [("2", "1.0"), ("3", "1.0")]
    assert "mean=1.000000" in capsys.readouterr().err


def test_simulate(tmp_path, g1_file, capsys):
    plan, sched, log = tmp_path / "plan.txt", tmp_path / "sched.txt", tmp_path / "log.csv"
    main(["solve", str(g1_file), "-o", str(plan)])
    sched.write_text("1 0 100\n")
    main(["simulate", str(g1_file), str(plan), str(sched), "--inject", "2@0", "-o", str(log)])
    assert log.read_text().splitlines()[1:] == ["0,0,2,3,0,,", "0,1,3,0,0,,"]
    assert "persistent-failure-cost,1" in capsys.readouterr().err


def test_simulate_all_nodes(tmp_path, g1_file):
    plan, log = tmp_path / "plan.txt", tmp_path / "log.csv"
    main(["solve", str(g1_file), "-o", str(plan)])
    main(["simulate", str(g1_file), str(plan), "-o", str(log)])
    assert len(log.read_text().splitlines()) == 1 + 1 + 2 + 2


def test_bench(tmp_path):
    out = tmp_path / "nodes.csv"
    main(["bench", "nodes", "30", "40", "--degree", "4", "--trials", "2", "--seed", "1",
          "-o", str(out)])
    assert len(out.read_text().splitlines()) == 5
    assert (tmp_path / "nodes_summary.csv").exists()
    assert (tmp_path / "nodes.gp").exists()
    assert "prng=" in (tmp_path / "nodes_meta.txt").read_text()


def test_all_dest(tmp_path, g1_file):
    out = tmp_path / "all.txt"
    main(["all-dest", str(g1_file), "-o", str(out)])
    text = out.read_text()
    assert text.count("# escape plan for destination") == 4


def test_bad_graph_file(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("2 1 0\n0 0 3\n")
    with pytest.raises(ValueError, match="self-loop"):
        main(["solve", str(p)])
