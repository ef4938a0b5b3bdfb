from __future__ import annotations

import random

from hypothesis import strategies as st

from trichain.graph import from_edges, random_regular


def relabelled(g, seed):
    r = random.Random(seed)
    perm = list(range(1, g.n + 1))
    r.shuffle(perm)
    return from_edges(g.n, [(perm[u - 1], perm[v - 1]) for u, v in g.edges()], g.d)


@st.composite
def regular_graphs(draw, sizes=((6, 3), (8, 3), (10, 3), (12, 3), (7, 4), (9, 4), (10, 4), (12, 5), (14, 4))):
    n, d = draw(st.sampled_from(sizes))
    seed = draw(st.integers(0, 2**31 - 1))
    return random_regular(n, d, seed)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list[str] = []


def record(name: str, ok: bool, detail: str = "") -> bool:
    ACCEPTANCE.append(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
