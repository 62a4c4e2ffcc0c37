"""
Progress output for long computations
"""
import click

from app.core.config import settings


def progress(message: str) -> None:
    """Print a progress line on stderr when QCHAR_VERBOSE is set"""
    if settings.QCHAR_VERBOSE:
        click.echo(message, err=True)
