import itertools

import pytest
from hypothesis import strategies as st

from qgr import zoo
from qgr.quiver import Arrow, Path, Quiver

# Quivers shared across modules. Keys are fixture names used in test ids.
FIXTURE_QUIVERS = {name: fn() for name, fn in zoo.NAMED.items()}


def brute_force_paths(q: Quiver, n: int) -> dict[str, list[Path]]:
    """Every composable arrow sequence of length n, grouped by end vertex.

    Deliberately naive: enumerates all |Q_1|^n sequences.
    """
    out = {v: [] for v in q.vertices}
    if n == 0:
        for v in q.vertices:
            out[v].append(Path.trivial(v))
        return out
    for seq in itertools.product(q.arrows, repeat=n):
        if all(seq[k].target == seq[k + 1].source for k in range(n - 1)):
            out[seq[-1].target].append(Path(seq[0].source, seq))
    return out


@st.composite
def quivers(draw, max_vertices=4, max_arrows=6, min_vertices=0):
    n = draw(st.integers(min_vertices, max_vertices))
    vs = tuple(str(k) for k in range(1, n + 1))
    if n == 0:
        return Quiver(())
    pairs = draw(st.lists(st.tuples(st.sampled_from(vs), st.sampled_from(vs)),
                          max_size=max_arrows))
    return Quiver(vs, tuple(Arrow(f"a{k}", s, t) for k, (s, t) in enumerate(pairs)))


@pytest.fixture(params=sorted(FIXTURE_QUIVERS), ids=str)
def fixture_quiver(request):
    return FIXTURE_QUIVERS[request.param]


# One summary line per acceptance criterion, printed after the run.
_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid.split("::")[-1]] = report.outcome.upper()
    elif "test_acceptance.py" in report.nodeid and report.failed:
        _acceptance[report.nodeid.split("::")[-1]] = "ERROR"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        status = "PASS" if _acceptance[name] == "PASSED" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
