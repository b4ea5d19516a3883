import itertools

import pytest
from hypothesis import settings

from nlkit.cantor import Arity, BrickSet, ClopenSet

settings.register_profile("ci", deadline=None, max_examples=60)
settings.load_profile("ci")


def cells_of(s, depth):
    """Brute force: the depth-``depth`` words lying in ``s`` (prefix semantics only)."""
    if isinstance(s, BrickSet):
        out = set()
        for ws in itertools.product(*[["".join(w) for w in itertools.product("01", repeat=depth)]] * s.dims):
            if any(all(x.startswith(p) for x, p in zip(ws, b.words)) for b in s.bricks):
                out.add(ws)
        return frozenset(out)
    a = s.arity
    out = set()
    for root in range(a.r):
        for w in itertools.product(a.digits, repeat=depth):
            word = "".join(w)
            if any(c.root == root and word.startswith(c.word) for c in s.cylinders):
                out.add((root, word))
    return frozenset(out)


def cell_set(arity, depth, mask):
    cells = [(root, "".join(w)) for root in range(arity.r) for w in itertools.product(arity.digits, repeat=depth)]
    return ClopenSet(arity, [c for k, c in enumerate(cells) if mask >> k & 1])


@pytest.fixture
def binary():
    return Arity(2, 1)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
