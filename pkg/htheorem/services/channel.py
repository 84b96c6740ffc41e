# htheorem/services/channel.py
"""
Quantum channels obtained from unitary dilations.

A bipartite unitary U on system (x) reservoir together with an initial
reservoir state pi defines the reduced dynamics

    Phi(rho) = Tr_R[ U (rho (x) pi) U† ].

Two independent routes decide whether Phi is unital:

* direct: evaluate Phi(1) - 1 through the dilation;
* commutator: write U = sum_ji |j><i| (x) B_ji and use, per entry,
  Phi(1)_jj' - delta_jj' = sum_i < [B†_j'i, B_ji] >_pi,
  an identity that relies on U being unitary.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Mapping, Optional, Sequence

import numpy as np

from core.config import settings
from core.errors import ShapeError, UnitarityError, ValidationError, Violation
from core.linalg import (
    ComplexMatrix,
    DimensionSplit,
    Subsystem,
    conjugate_by,
    frobenius_norm,
    hermitian_eigenvalues,
    kron,
    partial_trace,
    swap_factors,
    unitarity_defect,
)
from core.state import DensityMatrix, validate_density, von_neumann_entropy

logger = logging.getLogger(__name__)


# ===== TYPES =====


@dataclass(frozen=True, eq=False)
class BipartiteUnitary:
    """Unitary on system (x) reservoir with its dimension split."""

    matrix: ComplexMatrix
    split: DimensionSplit
    unitarity_tol: float = field(default_factory=lambda: settings.UNITARITY_TOL)

    def __post_init__(self) -> None:
        self.split.require_fits(self.matrix)
        defect = unitarity_defect(self.matrix)
        if defect > self.unitarity_tol:
            raise UnitarityError(defect, self.unitarity_tol, subject="bipartite unitary")

    @property
    def dim(self) -> int:
        return self.split.composite

    def swap_roles(self) -> "BipartiteUnitary":
        """The same evolution with the reservoir treated as the system."""
        return BipartiteUnitary(swap_factors(self.matrix, self.split), self.split.swapped(), self.unitarity_tol)

    def restrict_system(self, indices: Sequence[int]) -> "BipartiteUnitary":
        """
        Keep only the listed system basis states (one energy sector).
        The sector must be invariant, i.e. the restriction stays unitary.
        """
        keep = list(dict.fromkeys(indices))
        if not keep or any(not 0 <= i < self.split.dim_system for i in keep):
            raise ShapeError(f"invalid system sector {list(indices)} for d_S={self.split.dim_system}")
        d_r = self.split.dim_reservoir
        rows = [i * d_r + r for i in keep for r in range(d_r)]
        sub = self.matrix.data[np.ix_(rows, rows)]
        return BipartiteUnitary(ComplexMatrix(sub), DimensionSplit(len(keep), d_r), self.unitarity_tol)

    def evolve(self, joint: DensityMatrix) -> DensityMatrix:
        """U R U† for a joint state R."""
        if joint.dim != self.dim:
            raise ShapeError(f"joint state of dimension {joint.dim} does not fit unitary of dimension {self.dim}")
        return validate_density(conjugate_by(self.matrix, joint.matrix), joint.validation_tol)

    def then(self, later: "BipartiteUnitary") -> "BipartiteUnitary":
        """later ∘ self, i.e. the matrix product later·self."""
        if later.split != self.split:
            raise ShapeError(f"cannot compose unitaries over {self.split} and {later.split}")
        return BipartiteUnitary(later.matrix @ self.matrix, self.split, max(self.unitarity_tol, later.unitarity_tol))


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """
    Reservoir-space blocks B_ji of a composite operator,
    U = sum_ji |j><i| (x) B_ji. Each block already contains its
    scattering amplitude (B_ji = s_ji F_ji).
    """

    split: DimensionSplit
    blocks: Mapping[tuple[int, int], ComplexMatrix]

    def __post_init__(self) -> None:
        d_s, d_r = self.split.dim_system, self.split.dim_reservoir
        expected = {(j, i) for j in range(d_s) for i in range(d_s)}
        if set(self.blocks) != expected:
            raise ShapeError(f"block decomposition needs exactly {d_s * d_s} blocks indexed (j, i)")
        for key, block in self.blocks.items():
            if block.shape != (d_r, d_r):
                raise ShapeError(f"block {key} is {block.rows}x{block.cols}, expected {d_r}x{d_r}")
        object.__setattr__(self, "blocks", MappingProxyType(dict(self.blocks)))

    @classmethod
    def of_matrix(cls, matrix: ComplexMatrix, split: DimensionSplit) -> "BlockDecomposition":
        """Split any composite operator into blocks, unitary or not."""
        split.require_fits(matrix)
        d_s, d_r = split.dim_system, split.dim_reservoir
        tensor = matrix.data.reshape(d_s, d_r, d_s, d_r)
        blocks = {(j, i): ComplexMatrix(tensor[j, :, i, :]) for j in range(d_s) for i in range(d_s)}
        return cls(split, blocks)

    @classmethod
    def from_scattering(
        cls,
        split: DimensionSplit,
        amplitudes: ComplexMatrix,
        operators: Mapping[tuple[int, int], ComplexMatrix],
    ) -> "BlockDecomposition":
        """Blocks s_ji * F_ji from a scattering matrix and an F family."""
        d_s = split.dim_system
        if amplitudes.shape != (d_s, d_s):
            raise ShapeError(f"scattering matrix must be {d_s}x{d_s}, got {amplitudes.rows}x{amplitudes.cols}")
        return cls(split, {key: amplitudes[key] * op for key, op in operators.items()})

    def operator(self, j: int, i: int) -> ComplexMatrix:
        return self.blocks[(j, i)]

    def stacked(self) -> np.ndarray:
        """Array indexed [j, i, r, r']."""
        d_s, d_r = self.split.dim_system, self.split.dim_reservoir
        out = np.empty((d_s, d_s, d_r, d_r), dtype=np.complex128)
        for (j, i), block in self.blocks.items():
            out[j, i] = block.data
        return out

    def assemble(self) -> ComplexMatrix:
        d_s, d_r = self.split.dim_system, self.split.dim_reservoir
        tensor = self.stacked().transpose(0, 2, 1, 3)
        return ComplexMatrix(tensor.reshape(d_s * d_r, d_s * d_r))


class UnitalityMethod(str, Enum):
    DIRECT = "direct"
    COMMUTATOR = "commutator"


@dataclass(frozen=True, eq=False)
class UnitalityReport:
    """Phi(1) - 1 together with its norm and the unital verdict."""

    defect: ComplexMatrix
    defect_norm: float
    is_unital: bool
    method: UnitalityMethod
    tolerance: float
    per_pair_contributions: Optional[Mapping[tuple[int, int], complex]] = None
    commutator_terms: Optional[Mapping[tuple[int, int, int], complex]] = None

    @property
    def identity_image(self) -> ComplexMatrix:
        """Phi(1)."""
        return self.defect + ComplexMatrix.identity(self.defect.rows)


def _report(defect: np.ndarray, method: UnitalityMethod, tol: Optional[float], **extra) -> UnitalityReport:
    tol = settings.UNITALITY_TOL if tol is None else tol
    matrix = ComplexMatrix(defect)
    norm = frobenius_norm(matrix)
    return UnitalityReport(
        defect=matrix,
        defect_norm=norm,
        is_unital=norm <= tol,
        method=method,
        tolerance=tol,
        **extra,
    )


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """CPTP map rho -> sum K rho K†; complete positivity holds by construction."""

    dim: int
    operators: tuple[ComplexMatrix, ...]
    tp_tol: float = field(default_factory=lambda: settings.EQUALITY_TOL)

    def __post_init__(self) -> None:
        object.__setattr__(self, "operators", tuple(self.operators))
        if not self.operators:
            raise ShapeError("a Kraus channel needs at least one operator")
        for k in self.operators:
            if k.shape != (self.dim, self.dim):
                raise ShapeError(f"Kraus operator is {k.rows}x{k.cols}, expected {self.dim}x{self.dim}")
        tp = frobenius_norm(self.completeness() - ComplexMatrix.identity(self.dim))
        if tp > self.tp_tol:
            raise ValidationError("Kraus channel", [Violation("trace preservation", tp, self.tp_tol)])

    @classmethod
    def identity(cls, dim: int) -> "KrausChannel":
        return cls(dim, (ComplexMatrix.identity(dim),))

    def _stack(self) -> np.ndarray:
        return np.stack([k.data for k in self.operators])

    def completeness(self) -> ComplexMatrix:
        """sum K†K (equals 1 for a trace-preserving map)."""
        ks = self._stack()
        return ComplexMatrix(np.einsum("kba,kbc->ac", ks.conj(), ks))

    def identity_image(self) -> ComplexMatrix:
        """Phi(1) = sum K K†."""
        ks = self._stack()
        return ComplexMatrix(np.einsum("kab,kcb->ac", ks, ks.conj()))

    def unital_defect(self, tol: Optional[float] = None) -> UnitalityReport:
        image = self.identity_image().data
        return _report(image - np.eye(self.dim), UnitalityMethod.DIRECT, tol)


# ===== OPERATIONS =====


def block_decompose(u: BipartiteUnitary) -> BlockDecomposition:
    return BlockDecomposition.of_matrix(u.matrix, u.split)


def _require_env(u: BipartiteUnitary, env: DensityMatrix) -> None:
    if env.dim != u.split.dim_reservoir:
        raise ShapeError(f"reservoir state has dimension {env.dim}, unitary expects {u.split.dim_reservoir}")


def kraus_from_dilation(u: BipartiteUnitary, env: DensityMatrix) -> KrausChannel:
    """
    Kraus form of Phi: with env = sum_k p_k |e_k><e_k|,
    <j|K_(m,k)|i> = sqrt(p_k) <j, m| U |i, e_k> for every reservoir output m.
    """
    _require_env(u, env)
    d_s, d_r = u.split.dim_system, u.split.dim_reservoir
    eig = hermitian_eigenvalues(env.matrix, with_vectors=True)
    tensor = u.matrix.data.reshape(d_s, d_r, d_s, d_r)

    operators = []
    dropped = 0
    for k, weight in enumerate(eig.values):
        if weight < settings.ENV_EIGEN_CUTOFF:
            continue
        e_k = eig.vectors.data[:, k]
        # image[j, m, i] = <j, m| U |i, e_k>
        image = np.sqrt(weight) * np.einsum("jmir,r->jmi", tensor, e_k)
        for m in range(d_r):
            op = image[:, m, :]
            if np.linalg.norm(op) < settings.KRAUS_PRUNE_TOL:
                dropped += 1
                continue
            operators.append(ComplexMatrix(op))

    logger.debug(f"Dilation {d_s}x{d_r}: {len(operators)} Kraus operators, {dropped} pruned")
    # U's own unitarity slack shows up in sum K†K
    return KrausChannel(d_s, tuple(operators), tp_tol=max(settings.EQUALITY_TOL, 2.0 * u.unitarity_tol))


def dilate(u: BipartiteUnitary, rho: DensityMatrix, env: DensityMatrix) -> DensityMatrix:
    """Joint state U (rho (x) env) U†."""
    _require_env(u, env)
    if rho.dim != u.split.dim_system:
        raise ShapeError(f"system state has dimension {rho.dim}, unitary expects {u.split.dim_system}")
    return u.evolve(rho.tensor(env))


def apply_channel(phi: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    if rho.dim != phi.dim:
        raise ShapeError(f"state of dimension {rho.dim} does not fit channel of dimension {phi.dim}")
    ks = phi._stack()
    out = np.einsum("kab,bc,kdc->ad", ks, rho.data, ks.conj())
    return validate_density(ComplexMatrix(out), max(rho.validation_tol, phi.tp_tol))


def unital_defect_direct(
    u: BipartiteUnitary,
    env: DensityMatrix,
    tol: Optional[float] = None,
) -> UnitalityReport:
    """Phi(1) - 1 with Phi(1) = Tr_R[U (1 (x) env) U†]."""
    _require_env(u, env)
    lifted = kron(ComplexMatrix.identity(u.split.dim_system), env.matrix)
    image = partial_trace(conjugate_by(u.matrix, lifted), u.split, Subsystem.RESERVOIR)
    return _report(image.data - np.eye(u.split.dim_system), UnitalityMethod.DIRECT, tol)


def unital_defect_commutator(
    blocks: BlockDecomposition,
    env: DensityMatrix,
    tol: Optional[float] = None,
) -> UnitalityReport:
    """defect_jj' = sum_i tr(env [B†_j'i, B_ji])."""
    if env.dim != blocks.split.dim_reservoir:
        raise ShapeError(
            f"reservoir state has dimension {env.dim}, blocks are {blocks.split.dim_reservoir}x{blocks.split.dim_reservoir}"
        )
    b = blocks.stacked()
    pi = env.data
    # terms[j, k, i] = tr(pi B†_ki B_ji) - tr(pi B_ji B†_ki), k standing for j'
    forward = np.einsum("ab,kicb,jica->jki", pi, b.conj(), b)
    backward = np.einsum("ab,jibc,kiac->jki", pi, b, b.conj())
    terms = forward - backward
    defect = terms.sum(axis=2)

    d_s = blocks.split.dim_system
    pairs = {(j, k): complex(defect[j, k]) for j in range(d_s) for k in range(d_s)}
    per_term = {(j, k, i): complex(terms[j, k, i]) for j in range(d_s) for k in range(d_s) for i in range(d_s)}
    return _report(
        defect,
        UnitalityMethod.COMMUTATOR,
        tol,
        per_pair_contributions=MappingProxyType(pairs),
        commutator_terms=MappingProxyType(per_term),
    )


def entropy_delta(phi: KrausChannel, rho: DensityMatrix) -> float:
    """S(Phi(rho)) - S(rho) in nats."""
    return von_neumann_entropy(apply_channel(phi, rho)) - von_neumann_entropy(rho)
