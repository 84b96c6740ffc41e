# htheorem/cli/commands/sweep.py
"""
Sweep command for htheorem CLI.
Random-dilation check of unitality methods and the entropy H-theorem.
"""

import typer

from cli.output import OutputFormat, emit, entropy_unit, guarded
from core.config import settings
from core.errors import ConfigError, ExitCode
from services.render import sweep_text, sweep_to_dict
from services.sampler import EnvMode, h_theorem_sweep


@guarded
def sweep_command(
    dim_sys: int = typer.Option(2, "--dim-sys", help="System dimension"),
    dim_env: int = typer.Option(2, "--dim-env", help="Reservoir dimension"),
    trials: int = typer.Option(1000, "--trials", help="Number of random dilations"),
    env_mode: EnvMode = typer.Option(EnvMode.PURE, "--env-mode", help="Reservoir state ensemble"),
    seed: int = typer.Option(settings.DEFAULT_SEED, "--seed", help="Unsigned 64-bit seed"),
    states_per_channel: int = typer.Option(
        settings.SWEEP_STATES_PER_CHANNEL, "--states-per-channel", help="Random inputs per unital channel"
    ),
    workers: int = typer.Option(settings.SWEEP_WORKERS, "--workers", help="Worker threads"),
    format: OutputFormat = typer.Option(OutputFormat.TEXT, "--format", help="Output format"),
    kb_units: bool = typer.Option(False, "--kb-units", help="Show entropies in units of k_B ln 2"),
) -> None:
    """
    Sample Haar dilations and check both unitality methods agree and
    that unital channels never lower entropy.

    Exits 0 when there are no violations, 2 otherwise.
    """
    if dim_sys < 1 or dim_env < 1:
        raise ConfigError(f"dimensions must be positive, got --dim-sys {dim_sys} --dim-env {dim_env}")
    result = h_theorem_sweep(
        dim_sys,
        dim_env,
        trials,
        env_mode,
        seed,
        states_per_channel=states_per_channel,
        workers=workers,
    )
    emit(sweep_to_dict(result, entropy_unit(kb_units)), format, sweep_text)
    if not result.passed:
        raise typer.Exit(int(ExitCode.VERDICT_FAILED))
