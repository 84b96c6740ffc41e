# htheorem/cli/commands/swap.py
"""
Swap command for htheorem CLI.
Runs the two-qubit heating-cooling process.
"""

import typer

from cli.output import OutputFormat, emit, entropy_unit, guarded, require_positive
from core.config import settings
from core.errors import ExitCode
from services.render import scenario_text, scenario_to_dict
from services.scenarios import run_heating_cooling


@guarded
def swap_command(
    format: OutputFormat = typer.Option(OutputFormat.TEXT, "--format", help="Output format"),
    tol: float = typer.Option(settings.EQUALITY_TOL, "--tol", help="Verdict tolerance"),
    kb_units: bool = typer.Option(False, "--kb-units", help="Show entropies in units of k_B ln 2"),
) -> None:
    """
    Heat qubit 1 and cool qubit 2 with one permutation unitary.

    Reports both reduced channels; exits 2 if any verdict fails.
    """
    report = run_heating_cooling(require_positive("tol", tol))
    emit(scenario_to_dict(report, entropy_unit(kb_units)), format, scenario_text)
    if not report.passed:
        raise typer.Exit(int(ExitCode.VERDICT_FAILED))
