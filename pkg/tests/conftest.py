import numpy as np
import pytest
from hypothesis import strategies as st

from afpsrc.seqio import ALPHABET, ProteinRecord


def idx(s: str) -> tuple[int, ...]:
    return tuple(ALPHABET.index(ch) for ch in s)


def residues(min_size=1, max_size=300):
    return st.lists(st.integers(0, len(ALPHABET) - 1), min_size=min_size, max_size=max_size)


def record(rid: str, s: str) -> ProteinRecord:
    return ProteinRecord.from_string(rid, s)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
