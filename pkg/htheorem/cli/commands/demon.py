# htheorem/cli/commands/demon.py
"""
Demon command for htheorem CLI.
Runs the qubit Maxwell-demon cycle and prints its report.
"""

import typer

from cli.output import OutputFormat, emit, entropy_unit, guarded
from core.config import settings
from core.errors import ExitCode
from services.render import scenario_text, scenario_to_dict
from services.scenarios import DemonConfig, run_demon_cycle


@guarded
def demon_command(
    rho_ee: float = typer.Option(0.5, "--rho-ee", help="Excited-state population after thermalisation, in [0, 1]"),
    temperature: float = typer.Option(1.0, "--temperature", help="Bath temperature (k_B = 1)"),
    delta_e_x: float = typer.Option(0.0, "--delta-e-x", help="Level spacing at point X for work bookkeeping"),
    format: OutputFormat = typer.Option(OutputFormat.TEXT, "--format", help="Output format"),
    tol: float = typer.Option(settings.EQUALITY_TOL, "--tol", help="Verdict tolerance"),
    kb_units: bool = typer.Option(False, "--kb-units", help="Show entropies in units of k_B ln 2"),
) -> None:
    """
    Run the demon cycle.

    Exits 0 when every verdict passes and 2 when any fails.
    """
    cfg = DemonConfig(rho_ee=rho_ee, temperature=temperature, tol=tol, delta_e_x=delta_e_x)
    report = run_demon_cycle(cfg)
    emit(scenario_to_dict(report, entropy_unit(kb_units)), format, scenario_text)
    if not report.passed:
        raise typer.Exit(int(ExitCode.VERDICT_FAILED))
