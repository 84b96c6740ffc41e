# htheorem/core/linalg.py
"""
Dense complex matrix kernel.

ComplexMatrix is an immutable wrapper around a complex128 numpy array; all
operator symbols of the toolkit (unitaries, Kraus operators, states,
reservoir blocks) are carried by it. Composite spaces always use the
system-major index convention k = i_S * d_R + i_R, which is what
numpy.kron(system, reservoir) produces.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np

from core.config import settings
from core.errors import ConvergenceError, ShapeError, ValidationError, Violation

logger = logging.getLogger(__name__)

# Jacobi stops once the off-diagonal Frobenius norm is this small relative
# to the whole matrix.
_OFF_DIAGONAL_RTOL = 1e-14

Scalar = Union[int, float, complex]


class ComplexMatrix:
    """Immutable dense complex matrix (rows x cols, row-major)."""

    __slots__ = ("_data",)

    def __init__(self, data: Union[np.ndarray, Sequence[Sequence[Scalar]]]):
        arr = np.array(data, dtype=np.complex128, copy=True)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ShapeError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
        bad = int(np.count_nonzero(~np.isfinite(arr)))
        if bad:
            raise ValidationError("matrix", [Violation("finite entries", float(bad), 0.0)])
        arr.setflags(write=False)
        self._data = arr

    # ----- constructors -------------------------------------------------

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[Scalar]) -> "ComplexMatrix":
        flat = np.asarray(list(entries), dtype=np.complex128)
        if rows < 1 or cols < 1 or flat.size != rows * cols:
            raise ShapeError(f"{flat.size} entries cannot fill a {rows}x{cols} matrix")
        return cls(flat.reshape(rows, cols))

    @classmethod
    def identity(cls, dim: int) -> "ComplexMatrix":
        return cls(np.eye(dim, dtype=np.complex128))

    @classmethod
    def zeros(cls, rows: int, cols: Optional[int] = None) -> "ComplexMatrix":
        return cls(np.zeros((rows, rows if cols is None else cols), dtype=np.complex128))

    @classmethod
    def diag(cls, values: Iterable[Scalar]) -> "ComplexMatrix":
        return cls(np.diag(np.asarray(list(values), dtype=np.complex128)))

    @classmethod
    def ket_bra(cls, row: int, col: int, dim: int) -> "ComplexMatrix":
        """|row><col| on a dim-dimensional space."""
        if not (0 <= row < dim and 0 <= col < dim):
            raise ShapeError(f"basis indices ({row}, {col}) outside dimension {dim}")
        arr = np.zeros((dim, dim), dtype=np.complex128)
        arr[row, col] = 1.0
        return cls(arr)

    # ----- accessors ----------------------------------------------------

    @property
    def data(self) -> np.ndarray:
        """Read-only view of the underlying array."""
        return self._data

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def entries(self) -> tuple[complex, ...]:
        return tuple(complex(z) for z in self._data.ravel())

    def __getitem__(self, key: tuple[int, int]) -> complex:
        return complex(self._data[key])

    def trace(self) -> complex:
        if not self.is_square:
            raise ShapeError(f"trace of non-square {self.rows}x{self.cols} matrix")
        return complex(np.trace(self._data))

    # ----- arithmetic sugar ----------------------------------------------

    def __matmul__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        return matmul(self, other)

    def __add__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        _require_same_shape(self, other, "add")
        return ComplexMatrix(self._data + other._data)

    def __sub__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        _require_same_shape(self, other, "subtract")
        return ComplexMatrix(self._data - other._data)

    def __mul__(self, scalar: Scalar) -> "ComplexMatrix":
        return ComplexMatrix(self._data * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "ComplexMatrix":
        return ComplexMatrix(-self._data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ComplexMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"ComplexMatrix({self.rows}x{self.cols}, {np.array2string(self._data, precision=6)})"


class Subsystem(str, Enum):
    SYSTEM = "system"
    RESERVOIR = "reservoir"


@dataclass(frozen=True)
class DimensionSplit:
    """Factorization of a composite space into system (x) reservoir."""

    dim_system: int
    dim_reservoir: int

    def __post_init__(self) -> None:
        if self.dim_system < 1 or self.dim_reservoir < 1:
            raise ShapeError(
                f"subsystem dimensions must be positive, got ({self.dim_system}, {self.dim_reservoir})"
            )

    @property
    def composite(self) -> int:
        return self.dim_system * self.dim_reservoir

    def index(self, i_system: int, i_reservoir: int) -> int:
        return i_system * self.dim_reservoir + i_reservoir

    def swapped(self) -> "DimensionSplit":
        return DimensionSplit(self.dim_reservoir, self.dim_system)

    def require_fits(self, m: ComplexMatrix) -> None:
        if m.shape != (self.composite, self.composite):
            raise ShapeError(
                f"{m.rows}x{m.cols} matrix does not match split "
                f"{self.dim_system}x{self.dim_reservoir} (composite {self.composite})"
            )


class Eigensystem(NamedTuple):
    values: tuple[float, ...]
    vectors: Optional[ComplexMatrix]


def _require_same_shape(a: ComplexMatrix, b: ComplexMatrix, what: str) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"cannot {what} {a.rows}x{a.cols} and {b.rows}x{b.cols} matrices")


def _require_square(m: ComplexMatrix, what: str) -> None:
    if not m.is_square:
        raise ShapeError(f"{what} needs a square matrix, got {m.rows}x{m.cols}")


# ----- products -----------------------------------------------------------


def matmul(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    return ComplexMatrix(a.data @ b.data)


def dagger(a: ComplexMatrix) -> ComplexMatrix:
    return ComplexMatrix(a.data.conj().T)


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """a acts on the system factor, b on the reservoir factor."""
    return ComplexMatrix(np.kron(a.data, b.data))


def commutator(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """[a, b] = ab - ba."""
    _require_same_shape(a, b, "commute")
    _require_square(a, "commutator")
    return ComplexMatrix(a.data @ b.data - b.data @ a.data)


def conjugate_by(u: ComplexMatrix, m: ComplexMatrix) -> ComplexMatrix:
    """u m u†."""
    return ComplexMatrix(u.data @ m.data @ u.data.conj().T)


# ----- composite-space operations -----------------------------------------


def partial_trace(m: ComplexMatrix, split: DimensionSplit, which: Subsystem) -> ComplexMatrix:
    """Trace out the subsystem named by `which`; the other one is kept."""
    _require_square(m, "partial trace")
    if m.rows != split.composite:
        raise ShapeError(
            f"dimension {m.rows} is not divisible as {split.dim_system}x{split.dim_reservoir}"
        )
    d_s, d_r = split.dim_system, split.dim_reservoir
    tensor = m.data.reshape(d_s, d_r, d_s, d_r)
    if Subsystem(which) is Subsystem.RESERVOIR:
        return ComplexMatrix(np.einsum("ajbj->ab", tensor))
    return ComplexMatrix(np.einsum("iaib->ab", tensor))


def swap_factors(m: ComplexMatrix, split: DimensionSplit) -> ComplexMatrix:
    """
    Re-express an operator on S (x) R as the same operator on R (x) S.
    The result is indexed system-major under split.swapped().
    """
    split.require_fits(m)
    d_s, d_r = split.dim_system, split.dim_reservoir
    tensor = m.data.reshape(d_s, d_r, d_s, d_r).transpose(1, 0, 3, 2)
    return ComplexMatrix(tensor.reshape(split.composite, split.composite))


# ----- norms and predicates -----------------------------------------------


def frobenius_norm(a: ComplexMatrix) -> float:
    return float(np.linalg.norm(a.data))


def frobenius_distance(a: ComplexMatrix, b: ComplexMatrix) -> float:
    _require_same_shape(a, b, "compare")
    return float(np.linalg.norm(a.data - b.data))


def hermiticity_defect(h: ComplexMatrix) -> float:
    """max |h - h†| over entries."""
    _require_square(h, "hermiticity check")
    return float(np.max(np.abs(h.data - h.data.conj().T)))


def unitarity_defect(u: ComplexMatrix) -> float:
    """Frobenius distance of u†u from the identity."""
    _require_square(u, "unitarity check")
    gram = u.data.conj().T @ u.data
    return float(np.linalg.norm(gram - np.eye(u.rows)))


def is_unitary(u: ComplexMatrix, tol: Optional[float] = None) -> bool:
    tol = settings.EQUALITY_TOL if tol is None else tol
    return unitarity_defect(u) <= tol


# ----- Hermitian eigensolver ----------------------------------------------


def _rotation(a: np.ndarray, p: int, q: int) -> Optional[np.ndarray]:
    """2x2 unitary block that annihilates a[p, q] of the Hermitian matrix a."""
    apq = a[p, q]
    r = abs(apq)
    if r == 0.0:
        return None
    phase_conj = (apq / r).conjugate()
    theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
    if abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    # phase gauge diag(1, e^{-i arg a_pq}) followed by the real rotation
    return np.array([[c, s], [-s * phase_conj, c * phase_conj]], dtype=np.complex128)


def _cyclic_jacobi(a: np.ndarray, want_vectors: bool, max_sweeps: int) -> tuple[np.ndarray, np.ndarray]:
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = float(np.linalg.norm(a))
    if n == 1 or scale == 0.0:
        return a.diagonal().real.copy(), v

    threshold = _OFF_DIAGONAL_RTOL * scale
    for sweep in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(a.diagonal())))
        if off <= threshold:
            logger.debug(f"Jacobi converged: n={n}, sweeps={sweep}, off={off:.2e}")
            return a.diagonal().real.copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                w = _rotation(a, p, q)
                if w is None:
                    continue
                idx = [p, q]
                a[:, idx] = a[:, idx] @ w
                a[idx, :] = w.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if want_vectors:
                    v[:, idx] = v[:, idx] @ w

    raise ConvergenceError(f"Jacobi did not converge on a {n}x{n} matrix within {max_sweeps} sweeps")


def hermitian_eigenvalues(
    h: ComplexMatrix,
    with_vectors: bool = False,
    tol: Optional[float] = None,
) -> Eigensystem:
    """
    Ascending eigenvalues of a Hermitian matrix by cyclic complex Jacobi
    rotations. With with_vectors, the columns of `vectors` are the
    matching orthonormal eigenvectors (h = V diag(values) V†).
    """
    _require_square(h, "eigensolver")
    tol = settings.VALIDATION_TOL if tol is None else tol
    defect = hermiticity_defect(h)
    if defect > tol:
        raise ValidationError("eigensolver input", [Violation("hermiticity", defect, tol)])

    work = 0.5 * (h.data + h.data.conj().T)
    values, vectors = _cyclic_jacobi(work, with_vectors, settings.JACOBI_MAX_SWEEPS)

    order = np.argsort(values, kind="stable")
    ordered = tuple(float(x) for x in values[order])
    if not with_vectors:
        return Eigensystem(ordered, None)
    return Eigensystem(ordered, ComplexMatrix(vectors[:, order]))
