# htheorem/services/documents.py
"""
JSON interchange: matrix documents, check requests, and the orjson
encoder used for every machine-readable report.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import orjson
from pydantic import BaseModel, ConfigDict, FiniteFloat, PositiveFloat, PositiveInt, model_validator
from pydantic import ValidationError as PydanticValidationError

from core.config import settings
from core.errors import DocumentError, HTheoremError
from core.linalg import ComplexMatrix, DimensionSplit
from core.state import DensityMatrix, validate_density
from services.channel import BipartiteUnitary

logger = logging.getLogger(__name__)

JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS


class SplitDocument(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    dim_system: PositiveInt
    dim_reservoir: PositiveInt

    def to_split(self) -> DimensionSplit:
        return DimensionSplit(self.dim_system, self.dim_reservoir)


class MatrixDocument(BaseModel):
    """rows x cols matrix; entries are nested rows of [re, im] pairs."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    rows: PositiveInt
    cols: PositiveInt
    entries: list[list[tuple[FiniteFloat, FiniteFloat]]]
    split: Optional[SplitDocument] = None

    @model_validator(mode="after")
    def check_shape(self) -> "MatrixDocument":
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise ValueError(f"entries do not form a {self.rows}x{self.cols} array")
        if self.split is not None:
            composite = self.split.dim_system * self.split.dim_reservoir
            if self.rows != composite or self.cols != composite:
                raise ValueError(
                    f"split {self.split.dim_system}x{self.split.dim_reservoir} does not match a "
                    f"{self.rows}x{self.cols} matrix"
                )
        return self

    @classmethod
    def from_matrix(cls, m: ComplexMatrix, split: Optional[DimensionSplit] = None) -> "MatrixDocument":
        entries = [[(float(z.real), float(z.imag)) for z in row] for row in m.data]
        split_doc = None if split is None else SplitDocument(dim_system=split.dim_system, dim_reservoir=split.dim_reservoir)
        return cls(rows=m.rows, cols=m.cols, entries=entries, split=split_doc)

    def to_matrix(self) -> ComplexMatrix:
        arr = np.array(self.entries, dtype=np.float64)
        return ComplexMatrix(arr[..., 0] + 1j * arr[..., 1])


class CheckRequest(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    unitary: MatrixDocument
    env: MatrixDocument
    tol: Optional[PositiveFloat] = None

    @model_validator(mode="after")
    def check_split(self) -> "CheckRequest":
        if self.unitary.split is None:
            raise ValueError("unitary needs a 'split' with dim_system and dim_reservoir")
        return self

    def build(self) -> tuple[BipartiteUnitary, DensityMatrix]:
        """Validated unitary and reservoir state; raises UnitarityError / DensityError."""
        split = self.unitary.split.to_split()
        u = BipartiteUnitary(self.unitary.to_matrix(), split, settings.UNITARITY_TOL)
        env = validate_density(self.env.to_matrix())
        return u, env


def _describe(exc: PydanticValidationError) -> str:
    first = exc.errors()[0]
    location = ".".join(str(part) for part in first.get("loc", ())) or "document"
    return f"{location}: {first.get('msg', 'invalid value')}"


def parse_check_request(raw: Union[bytes, str]) -> CheckRequest:
    try:
        payload = orjson.loads(raw)
    except orjson.JSONDecodeError as e:
        raise DocumentError(f"malformed JSON: {e}") from e
    try:
        return CheckRequest.model_validate(payload)
    except PydanticValidationError as e:
        raise DocumentError(f"invalid check request ({_describe(e)})") from e


def load_check_request(path: Union[str, Path]) -> CheckRequest:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise DocumentError(f"cannot read request file {path}: {e.strerror or e}") from e
    logger.debug(f"Loaded {len(raw)} bytes from {path}")
    return parse_check_request(raw)


def dumps(payload: Any) -> str:
    """Stable JSON text (sorted keys, two-space indent)."""
    try:
        return orjson.dumps(payload, option=JSON_OPTIONS).decode("utf-8")
    except TypeError as e:
        raise HTheoremError(f"report is not JSON serializable: {e}") from e
