import sys
from pathlib import Path

import pytest

from snfr.genbench import GenConfig, generate
from snfr.graph import WeightedGraph

sys.path.insert(0, str(Path(__file__).parent))

# G1: s=0, x=1, a=2, b=3
S, X, A, B = 0, 1, 2, 3
G1_EDGES = [(S, X, 1), (X, A, 1), (X, B, 1), (A, B, 1), (B, S, 10)]
G1_TEXT = "4 5 0\n0 1 1\n1 2 1\n1 3 1\n2 3 1\n0 3 10\n"


@pytest.fixture
def g1():
    return WeightedGraph(4, G1_EDGES, dest=S)


def random_graph(n, degree, seed, weights=(100, 1000)):
    return generate(GenConfig(n, degree, weights, seed))


def cycle_graph(n, cost=1):
    return WeightedGraph(n, [(i, (i + 1) % n, cost) for i in range(n)])


_acceptance = pytest.StashKey[list]()


class Criterion:
    def __init__(self, lines, nodeid):
        self.lines = lines
        self.nodeid = nodeid
        self.recorded = False

    def check(self, label, ok, detail="", report_only=False):
        self.recorded = True
        status = "PASS" if ok else ("REPORT" if report_only else "FAIL")
        self.lines.append(f"[{status}] {label}: {detail}")
        print(self.lines[-1])
        assert ok or report_only, f"{label}: {detail}"


@pytest.fixture
def criterion(request):
    lines = request.config.stash.setdefault(_acceptance, [])
    c = Criterion(lines, request.node.nodeid)
    yield c
    if not c.recorded:
        lines.append(f"[FAIL] {request.node.name}: did not complete")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_acceptance, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
