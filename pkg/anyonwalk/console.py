"""
Rich Console Output for anyonwalk

Tables, panels and progress bars for the CLI. Diagnostics go to stderr so
that machine-readable output (JSON from ``fit`` and ``dump-moments``) can
be piped from stdout.
"""

from __future__ import annotations

from contextlib import contextmanager
from typing import Any, Callable, Dict, Generator, Optional, Sequence

from rich.console import Console
from rich.markup import escape
from rich.progress import (
    BarColumn,
    Progress,
    SpinnerColumn,
    TaskProgressColumn,
    TextColumn,
    TimeElapsedColumn,
)
from rich.table import Table
from rich.theme import Theme

# =============================================================================
# Custom Theme
# =============================================================================

WALK_THEME = {
    "info": "cyan",
    "warning": "yellow",
    "error": "bold red",
    "success": "bold green",
    "pass": "green",
    "fail": "bold red",
    "level": "bold magenta",
    "value": "bold",
    "path": "bold blue",
}


class WalkConsole:
    """Rich console wrapper for anyonwalk CLI output."""

    def __init__(self, force_terminal: bool = False, no_color: bool = False) -> None:
        theme = Theme(WALK_THEME)
        self._console = Console(
            theme=theme, force_terminal=force_terminal, no_color=no_color, highlight=False
        )
        self._stderr = Console(
            theme=theme, force_terminal=force_terminal, no_color=no_color, stderr=True
        )

    def print(self, *args: Any, **kwargs: Any) -> None:
        self._console.print(*args, **kwargs)

    def print_error(self, message: str, **kwargs: Any) -> None:
        self._stderr.print(f"[error]Error:[/error] {escape(message)}", **kwargs)

    def print_warning(self, message: str, **kwargs: Any) -> None:
        self._stderr.print(f"[warning]Warning:[/warning] {escape(message)}", **kwargs)

    def print_success(self, message: str, **kwargs: Any) -> None:
        self._console.print(f"[success]{message}[/success]", **kwargs)

    def print_info(self, message: str, **kwargs: Any) -> None:
        self._console.print(f"[info]{escape(message)}[/info]", **kwargs)

    def print_rule(self, title: str = "", **kwargs: Any) -> None:
        self._console.rule(title, **kwargs)

    def print_table(
        self,
        columns: Sequence[str],
        rows: Sequence[Sequence[str]],
        title: Optional[str] = None,
        **kwargs: Any,
    ) -> None:
        """Print a formatted table; cells may carry theme markup."""
        table = Table(title=title, **kwargs)
        for col in columns:
            table.add_column(col)
        for row in rows:
            table.add_row(*[str(cell) for cell in row])
        self._console.print(table)

    def print_summary(self, title: str, values: Dict[str, Any], status: str = "info") -> None:
        """Two-column key/value summary."""
        table = Table(title=title, show_header=False, title_style=status)
        table.add_column("Quantity")
        table.add_column("Value", justify="right")
        for key, value in values.items():
            table.add_row(key, f"[value]{value}[/value]")
        self._console.print(table)

    @contextmanager
    def progress(
        self,
        description: str = "Running",
        total: Optional[int] = None,
    ) -> Generator[Callable[[int, int], None], None, None]:
        """
        Progress bar on stderr; yields a ``(completed, total)`` callback
        matching the runner's progress hook.
        """
        progress = Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            TaskProgressColumn(),
            TimeElapsedColumn(),
            console=self._stderr,
            transient=True,
        )
        with progress:
            task = progress.add_task(description, total=total)

            def update(completed: int, count: int) -> None:
                progress.update(task, completed=completed, total=count)

            yield update

    def status(self, message: str) -> Any:
        """Show a status spinner."""
        return self._stderr.status(message)


# =============================================================================
# Global Console Instance
# =============================================================================

_console: Optional[WalkConsole] = None


def get_console(force_terminal: bool = False, no_color: bool = False) -> WalkConsole:
    """Get the global console instance."""
    global _console
    if _console is None:
        _console = WalkConsole(force_terminal=force_terminal, no_color=no_color)
    return _console


def configure_console(force_terminal: bool = False, no_color: bool = False) -> WalkConsole:
    """Configure and return a new console instance."""
    global _console
    _console = WalkConsole(force_terminal=force_terminal, no_color=no_color)
    return _console

