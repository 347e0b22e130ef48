"""Command-line front end."""

from .commands import EXIT_INPUT_ERROR, EXIT_OK, EXIT_VIOLATIONS, VERBS, Command, run

__all__ = ["EXIT_INPUT_ERROR", "EXIT_OK", "EXIT_VIOLATIONS", "VERBS", "Command", "run"]
