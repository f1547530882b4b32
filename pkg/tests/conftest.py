import numpy as np
import pytest
from hypothesis import strategies as st

from qwalk import graphs


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


@st.composite
def circulants(draw, max_n=16, min_n=1):
    n = draw(st.integers(min_n, max_n))
    gens = draw(st.lists(st.integers(1, max(1, n - 1)), max_size=4)) if n > 1 else []
    return graphs.make_circulant(n, gens)


@st.composite
def small_graphs(draw, max_order=64):
    """Random compositions of circulants and paths up to ``max_order`` vertices."""
    kind = draw(st.sampled_from(["circ", "path", "join", "cart", "explicit"]))
    if kind == "circ":
        return draw(circulants(max_n=32))
    if kind == "path":
        return graphs.make_path(draw(st.integers(1, 32)))
    if kind == "explicit":
        n = draw(st.integers(1, 12))
        bits = draw(st.lists(st.booleans(), min_size=n * n, max_size=n * n))
        a = np.array(bits, dtype=int).reshape(n, n)
        a = np.triu(a, 1)
        return graphs.explicit(a + a.T)
    left = draw(st.one_of(circulants(max_n=8), st.integers(1, 6).map(graphs.make_path)))
    right = draw(circulants(max_n=8))
    g = graphs.join(left, right) if kind == "join" else graphs.cartesian(left, right)
    if g.order > max_order:
        return right
    return g


# Filled by test_acceptance.py; one (number, passed, summary) entry per criterion.
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num}: {line}")
