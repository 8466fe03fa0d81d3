import pytest
from hypothesis import strategies as st

from covtop.covering import make_covering
from covtop.sets import make_universe

LABELS = "abcdefgh"

_acceptance_lines: list[str] = []


def record_acceptance(line: str) -> None:
    _acceptance_lines.append(line)


@pytest.fixture
def acceptance_log():
    return record_acceptance


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_acceptance_lines, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)


@st.composite
def coverings(draw, min_n=1, max_n=6):
    """A random covering: random nonempty blocks, patched so every point is covered."""
    n = draw(st.integers(min_n, max_n))
    u = make_universe(LABELS[:n])
    full = (1 << n) - 1
    blocks = draw(st.lists(st.integers(1, full), min_size=0, max_size=6))
    covered = 0
    for b in blocks:
        covered |= b
    missing = full & ~covered
    if missing:
        # Cover the leftovers either with one block or one per point.
        if draw(st.booleans()):
            blocks.append(missing)
        else:
            blocks.extend(1 << i for i in range(n) if missing >> i & 1)
    return make_covering(u, sorted(set(blocks)))


@st.composite
def covering_and_subset(draw, max_n=6):
    c = draw(coverings(max_n=max_n))
    return c, draw(st.integers(0, c.universe.full))
