import os
import sys
from pathlib import Path

import numpy as np
import pytest

# Ensure `htheorem/` is on sys.path so imports like `import core.linalg` work.
APP_DIR = Path(__file__).resolve().parents[1]
if str(APP_DIR) not in sys.path:
    sys.path.insert(0, str(APP_DIR))

# Keep test output free of ANSI styling.
os.environ.setdefault("NO_COLOR", "1")

from core.linalg import ComplexMatrix  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_matrix(rng, rows, cols):
    return ComplexMatrix(rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols)))


def random_hermitian(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return ComplexMatrix(a + a.conj().T)


def ket_bra(i, j, d=2):
    return ComplexMatrix.ket_bra(i, j, d)


def two_qubit(sys_row, sys_col, res_row, res_col):
    """|sys_row><sys_col| (x) |res_row><res_col| built entry by entry."""
    arr = np.zeros((4, 4), dtype=complex)
    arr[sys_row * 2 + res_row, sys_col * 2 + res_col] = 1.0
    return ComplexMatrix(arr)


@pytest.fixture
def demon_cycle_matrix():
    """The composed measurement+feedback operator, written term by term."""
    return two_qubit(0, 0, 0, 0) + two_qubit(0, 1, 1, 0) + two_qubit(1, 0, 1, 1) + two_qubit(1, 1, 0, 1)
