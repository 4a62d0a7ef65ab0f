import itertools
from functools import reduce

import numpy as np
import pytest

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

ACCEPTANCE_LINES: list[str] = []


def pauli_matrix(label: str) -> np.ndarray:
    return reduce(np.kron, (PAULI_MATRICES[c] for c in label))


def pauli_labels(n: int) -> list[str]:
    return ["".join(c) for c in itertools.product("IXYZ", repeat=n)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
