# htheorem/cli/commands/check.py
"""
Check command for htheorem CLI.
Decides unitality of the channel induced by a user-supplied dilation.
"""

import logging
from pathlib import Path
from typing import Optional

import typer

from cli.output import OutputFormat, emit, guarded, require_positive
from core.config import settings
from core.errors import ExitCode
from services.documents import load_check_request
from services.render import check_text, check_to_dict
from services.scenarios import analyse_channel

logger = logging.getLogger(__name__)


@guarded
def check_command(
    request: Path = typer.Argument(..., help="JSON file with 'unitary' (with split), 'env' and optional 'tol'"),
    format: OutputFormat = typer.Option(OutputFormat.TEXT, "--format", help="Output format"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Unitality tolerance (overrides the request)"),
) -> None:
    """
    Compute Phi(1) - 1 by the direct and the commutator method.

    Exits 0 for a unital channel, 3 for a non-unital one, 1 on bad input.
    """
    req = load_check_request(request)
    u, env = req.build()
    threshold = tol if tol is not None else (req.tol or settings.UNITALITY_TOL)
    analysis = analyse_channel(request.name, u, env, require_positive("tol", threshold))
    logger.info(f"{request}: defect norm {analysis.direct.defect_norm:.3e}")
    emit(check_to_dict(analysis), format, check_text)
    if not analysis.is_unital:
        raise typer.Exit(int(ExitCode.NON_UNITAL))
