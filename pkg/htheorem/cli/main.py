# htheorem/cli/main.py
"""
htheorem CLI - quantum channel unitality and entropy checks.
Run from the htheorem/ directory as `python -m cli.main <command>`.
"""

import os
import sys
from typing import Optional

import click
import typer

# Add htheorem/ to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

from core.config import validate_startup
from core.errors import ExitCode
from core.logging import setup_logging

from .commands.check import check_command
from .commands.demon import demon_command
from .commands.swap import swap_command
from .commands.sweep import sweep_command

# Create main Typer app
app = typer.Typer(
    name="htheorem",
    help="Unitality criterion, entropy bookkeeping and demon scenarios for quantum channels",
    add_completion=False,
)


@app.callback()
def main_callback(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Override LOG_LEVEL for this run"),
) -> None:
    setup_logging(log_level)
    validate_startup()


# Add subcommands
app.command("demon")(demon_command)
app.command("swap")(swap_command)
app.command("check")(check_command)
app.command("sweep")(sweep_command)


# typer may raise from its own vendored copy of click
_USAGE_ERRORS = tuple(
    {click.ClickException, *(c for c in typer.BadParameter.__mro__ if c.__name__ == "ClickException")}
)
_ABORTS = tuple({click.Abort, typer.Abort})


def run() -> None:
    """Entry point; click's own usage errors are reported with exit 1."""
    try:
        code = app(standalone_mode=False)
    except _USAGE_ERRORS as e:
        e.show()
        code = ExitCode.USAGE
    except _ABORTS:
        typer.echo("Aborted!", err=True)
        code = ExitCode.USAGE
    sys.exit(int(code or 0))


if __name__ == "__main__":
    run()
