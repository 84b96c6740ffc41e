# htheorem/cli/output.py
"""
Shared plumbing for commands: output format, styling, error mapping.
"""

import math
import os
from enum import Enum
from functools import wraps
from typing import Any, Callable

import typer

from core.config import settings
from core.errors import ConfigError, HTheoremError
from services.documents import dumps
from services.render import EntropyUnit


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


def color_enabled() -> bool:
    return settings.color_enabled and not os.environ.get("NO_COLOR")


def style(text: str, ok: bool) -> str:
    if not color_enabled():
        return text
    return typer.style(text, fg=typer.colors.GREEN if ok else typer.colors.RED, bold=True)


def entropy_unit(kb_units: bool) -> EntropyUnit:
    return EntropyUnit.KB_LN2 if kb_units else EntropyUnit.NATS


def require_positive(name: str, value: float) -> float:
    if not (math.isfinite(value) and value > 0.0):
        raise ConfigError(f"{name} must be positive and finite, got {value}")
    return value


def emit(payload: dict[str, Any], fmt: OutputFormat, text: Callable[..., str]) -> None:
    """Report to stdout in the requested format."""
    if fmt is OutputFormat.JSON:
        typer.echo(dumps(payload))
    else:
        typer.echo(text(payload, style))


def guarded(command: Callable[..., None]) -> Callable[..., None]:
    """Turn toolkit errors into a one-line diagnostic and their exit code."""

    @wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        try:
            command(*args, **kwargs)
        except HTheoremError as e:
            typer.echo(f"error: {e.message}", err=True)
            raise typer.Exit(int(e.exit_code))

    return wrapper
