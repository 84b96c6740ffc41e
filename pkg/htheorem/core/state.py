# htheorem/core/state.py
"""
Validated density matrices and entropy functionals.

Raw matrices never reach channel or scenario code without passing through
validate_density; everything downstream can assume a Hermitian, positive
semidefinite, unit-trace state.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from core.config import settings
from core.errors import DensityError, ShapeError, ValidationError, Violation
from core.linalg import ComplexMatrix, hermitian_eigenvalues, hermiticity_defect, kron

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)


@dataclass(frozen=True)
class EntropyValue:
    """Von Neumann entropy in nats (k_B = 1)."""

    nats: float

    @property
    def bits(self) -> float:
        """The same entropy in units of k_B ln 2."""
        return self.nats / LN2

    def __float__(self) -> float:
        return self.nats

    def __sub__(self, other: "EntropyValue") -> float:
        return self.nats - other.nats


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A state that passed validate_density; construct via that function."""

    matrix: ComplexMatrix
    validation_tol: float
    eigenvalues: tuple[float, ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return self.matrix.rows

    @property
    def data(self) -> np.ndarray:
        return self.matrix.data

    def tensor(self, other: "DensityMatrix") -> "DensityMatrix":
        """self (x) other, system-major."""
        return validate_density(kron(self.matrix, other.matrix), max(self.validation_tol, other.validation_tol))

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim}, eigenvalues={tuple(round(x, 12) for x in self.eigenvalues)})"


def validate_density(m: ComplexMatrix, tol: Optional[float] = None) -> DensityMatrix:
    """
    Check Hermiticity, positivity and unit trace; all failures are
    collected into a single DensityError.
    """
    tol = settings.VALIDATION_TOL if tol is None else tol
    if not m.is_square:
        raise ShapeError(f"density matrix must be square, got {m.rows}x{m.cols}")

    violations = []
    herm = hermiticity_defect(m)
    if herm > tol:
        violations.append(Violation("hermiticity", herm, tol))

    trace = m.trace()
    trace_error = abs(trace - 1.0)
    if trace_error > tol:
        violations.append(Violation("trace", trace_error, tol))

    eigenvalues: tuple[float, ...] = ()
    if herm <= tol:
        eigenvalues = hermitian_eigenvalues(m, tol=tol).values
        lowest = eigenvalues[0]
    else:
        # positivity of the Hermitian part
        hermitian_part = ComplexMatrix(0.5 * (m.data + m.data.conj().T))
        lowest = hermitian_eigenvalues(hermitian_part, tol=tol).values[0]
    if lowest < -tol:
        violations.append(Violation("positivity", lowest, -tol))

    if violations:
        raise DensityError("density matrix", violations)
    return DensityMatrix(matrix=m, validation_tol=tol, eigenvalues=eigenvalues)


def _clamped_spectrum(rho: DensityMatrix) -> np.ndarray:
    spectrum = np.asarray(rho.eigenvalues, dtype=float)
    # round-off negatives on rank-deficient states
    return np.where(spectrum < 0.0, 0.0, spectrum)


def von_neumann_entropy(rho: DensityMatrix) -> EntropyValue:
    """-sum(l ln l) over the spectrum with 0 ln 0 = 0."""
    spectrum = _clamped_spectrum(rho)
    positive = spectrum[spectrum > 0.0]
    nats = float(-np.sum(positive * np.log(positive)))
    return EntropyValue(max(nats, 0.0))


def purity(rho: DensityMatrix) -> float:
    """tr(rho^2)."""
    return float(np.real(np.trace(rho.data @ rho.data)))


def pure_state_density(
    amplitudes: Sequence[Union[complex, float]],
    normalize: bool = False,
    tol: Optional[float] = None,
) -> DensityMatrix:
    """|psi><psi| for the given amplitude vector."""
    tol = settings.VALIDATION_TOL if tol is None else tol
    psi = np.asarray(amplitudes, dtype=np.complex128).ravel()
    norm = float(np.linalg.norm(psi))
    if psi.size == 0 or norm == 0.0:
        raise ValidationError("state vector", [Violation("nonzero norm", norm, 0.0)])
    if normalize:
        psi = psi / norm
    elif abs(norm - 1.0) > tol:
        raise ValidationError("state vector", [Violation("unit norm", abs(norm - 1.0), tol)])
    return validate_density(ComplexMatrix(np.outer(psi, psi.conj())), tol)


def maximally_mixed(d: int) -> DensityMatrix:
    if d < 1:
        raise ShapeError(f"dimension must be positive, got {d}")
    return validate_density(ComplexMatrix(np.eye(d, dtype=np.complex128) / d))


def basis_state(index: int, d: int) -> DensityMatrix:
    """|index><index| on a d-level system."""
    return validate_density(ComplexMatrix.ket_bra(index, index, d))


def diagonal_state(populations: Sequence[float]) -> DensityMatrix:
    return validate_density(ComplexMatrix.diag(populations))
