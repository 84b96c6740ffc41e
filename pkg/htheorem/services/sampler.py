# htheorem/services/sampler.py
"""
Reproducible random unitaries and states, and the H-theorem sweep built
on them.

Every draw comes from a Philox (counter-based) generator keyed by
(seed, trial_index, stream), so a trial's numbers depend only on its key
and not on which thread ran it or in which order.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Union

import numpy as np

from core.config import settings
from core.errors import ConfigError, ShapeError
from core.linalg import ComplexMatrix, DimensionSplit, frobenius_distance
from core.state import DensityMatrix, maximally_mixed, validate_density
from services.channel import (
    BipartiteUnitary,
    block_decompose,
    entropy_delta,
    kraus_from_dilation,
    unital_defect_commutator,
    unital_defect_direct,
)

logger = logging.getLogger(__name__)

# streams inside one trial
_UNITARY_STREAM = 0
_ENV_STREAM = 1
_STATE_STREAM_BASE = 2

# fixed sweep classification thresholds
SWEEP_UNITAL_TOL = 1e-9
SWEEP_AGREEMENT_TOL = 1e-9
SWEEP_ENTROPY_TOL = 1e-9


@dataclass(frozen=True)
class SamplerSeed:
    seed: int
    trial_index: int = 0
    stream: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.trial_index < 0 or self.stream < 0:
            raise ConfigError("trial_index and stream must be non-negative")

    def with_stream(self, stream: int) -> "SamplerSeed":
        return replace(self, stream=stream)

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence([self.seed, self.trial_index, self.stream])
        return np.random.Generator(np.random.Philox(sequence))


SeedLike = Union[SamplerSeed, np.random.Generator]


def _rng(seed: SeedLike) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else seed.generator()


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Independent standard complex Gaussians, E|z|^2 = 1."""
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def haar_unitary(d: int, seed: SeedLike) -> ComplexMatrix:
    """Haar-distributed d x d unitary: QR of a Ginibre matrix, R's diagonal made positive."""
    if d < 1:
        raise ShapeError(f"dimension must be positive, got {d}")
    z = _ginibre(_rng(seed), d, d)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    phases = diag / np.abs(diag)
    return ComplexMatrix(q * phases)


def random_density(d: int, rank: int, seed: SeedLike) -> DensityMatrix:
    """G G† / tr(G G†) with G a d x rank Ginibre matrix."""
    if d < 1:
        raise ShapeError(f"dimension must be positive, got {d}")
    if not 1 <= rank <= d:
        raise ConfigError(f"rank must lie in [1, {d}], got {rank}")
    g = _ginibre(_rng(seed), d, rank)
    w = g @ g.conj().T
    return validate_density(ComplexMatrix(w / np.trace(w).real))


# ===== H-THEOREM SWEEP =====


class EnvMode(str, Enum):
    PURE = "pure"
    MIXED = "mixed"
    MAXIMALLY_MIXED = "maxmixed"


@dataclass(frozen=True)
class SweepViolation:
    trial_index: int
    description: str


@dataclass(frozen=True)
class SweepResult:
    trials: int
    unital_count: int
    nonunital_count: int
    max_method_disagreement: float
    min_entropy_delta_unital: Optional[float]
    max_abs_entropy_delta_unital: Optional[float]
    violations: tuple[SweepViolation, ...] = field(default_factory=tuple)
    parameters: dict[str, Union[int, str]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class _TrialOutcome:
    trial_index: int
    unital: bool
    disagreement: float
    defect_norm: float
    entropy_deltas: tuple[float, ...]


def _draw_env(mode: EnvMode, d_env: int, seed: SamplerSeed) -> DensityMatrix:
    if mode is EnvMode.MAXIMALLY_MIXED:
        return maximally_mixed(d_env)
    rank = 1 if mode is EnvMode.PURE else d_env
    return random_density(d_env, rank, seed)


def _run_trial(
    trial_index: int,
    split: DimensionSplit,
    mode: EnvMode,
    seed: int,
    states_per_channel: int,
) -> _TrialOutcome:
    key = SamplerSeed(seed, trial_index)
    # Haar draws are unitary to ~1e-15
    u = BipartiteUnitary(haar_unitary(split.composite, key.with_stream(_UNITARY_STREAM)), split, 1e-10)
    env = _draw_env(mode, split.dim_reservoir, key.with_stream(_ENV_STREAM))

    direct = unital_defect_direct(u, env, SWEEP_UNITAL_TOL)
    commutator = unital_defect_commutator(block_decompose(u), env, SWEEP_UNITAL_TOL)
    disagreement = frobenius_distance(direct.defect, commutator.defect)

    deltas: tuple[float, ...] = ()
    if direct.is_unital:
        phi = kraus_from_dilation(u, env)
        d_sys = split.dim_system
        deltas = tuple(
            entropy_delta(
                phi,
                random_density(d_sys, 1 + n % d_sys, key.with_stream(_STATE_STREAM_BASE + n)),
            )
            for n in range(states_per_channel)
        )
    return _TrialOutcome(trial_index, direct.is_unital, disagreement, direct.defect_norm, deltas)


def h_theorem_sweep(
    d_sys: int,
    d_env: int,
    trials: int,
    env_mode: Union[EnvMode, str],
    seed: int,
    states_per_channel: Optional[int] = None,
    workers: Optional[int] = None,
) -> SweepResult:
    """
    Draw Haar unitaries on d_sys x d_env and reservoir states per env_mode;
    check that both unitality methods agree and that every unital channel
    is entropy non-decreasing on random inputs.
    """
    if trials < 1:
        raise ConfigError(f"trials must be at least 1, got {trials}")
    mode = EnvMode(env_mode)
    split = DimensionSplit(d_sys, d_env)
    states = settings.SWEEP_STATES_PER_CHANNEL if states_per_channel is None else states_per_channel
    if states < 1:
        raise ConfigError(f"states_per_channel must be at least 1, got {states}")
    workers = settings.SWEEP_WORKERS if workers is None else workers
    if workers < 1:
        raise ConfigError(f"workers must be at least 1, got {workers}")
    SamplerSeed(seed)

    logger.info(f"Sweep {d_sys}x{d_env}, {trials} trials, env={mode.value}, seed={seed}, workers={workers}")

    def run(index: int) -> _TrialOutcome:
        return _run_trial(index, split, mode, seed, states)

    if workers == 1:
        outcomes = [run(i) for i in range(trials)]
    else:
        # map() yields in submission order, i.e. by trial index
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, range(trials)))

    violations = []
    unital_deltas: list[float] = []
    for outcome in outcomes:
        if outcome.disagreement > SWEEP_AGREEMENT_TOL:
            violations.append(
                SweepViolation(outcome.trial_index, f"unitality methods disagree by {outcome.disagreement:.3e}")
            )
        if outcome.entropy_deltas:
            worst = min(outcome.entropy_deltas)
            unital_deltas.extend(outcome.entropy_deltas)
            if worst < -SWEEP_ENTROPY_TOL:
                violations.append(
                    SweepViolation(outcome.trial_index, f"unital channel lowered entropy by {-worst:.3e} nats")
                )

    for v in violations:
        logger.warning(f"Sweep trial {v.trial_index}: {v.description}")

    unital_count = sum(1 for o in outcomes if o.unital)
    return SweepResult(
        trials=trials,
        unital_count=unital_count,
        nonunital_count=trials - unital_count,
        max_method_disagreement=max(o.disagreement for o in outcomes),
        min_entropy_delta_unital=min(unital_deltas) if unital_deltas else None,
        max_abs_entropy_delta_unital=max(abs(x) for x in unital_deltas) if unital_deltas else None,
        violations=tuple(violations),
        parameters={
            "dim_sys": d_sys,
            "dim_env": d_env,
            "env_mode": mode.value,
            "seed": seed,
            "states_per_channel": states,
        },
    )
