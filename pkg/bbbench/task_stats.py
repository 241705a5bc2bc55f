import sys
import contextlib
from typing import Callable, Iterator, Optional

import psutil
import rich.console
import rich.progress

_console: Optional[rich.console.Console] = None
_boring = False


def init_console(boring=False):
    global _console, _boring
    if _console is None:
        _console = rich.console.Console(file=sys.stdout, highlight=False,
                                        no_color=boring, emoji=not boring)
        _boring = boring
    return _console


def get_console():
    return _console


def resolve_num_workers(jobs: int, ncells: int) -> int:
    """Number of grid workers: jobs < 0 means one per logical CPU. Never more than ncells."""
    if jobs < 0:
        jobs = psutil.cpu_count(logical=True) or 1
    return max(1, min(jobs, ncells))


@contextlib.contextmanager
def grid_progress(total: int, description: str = "benchmark") -> Iterator[Callable[[str], None]]:
    """Displays a transient progress bar over grid cells. Yields an advance(status) callable.
    The bar is disabled in boring mode."""
    progress = rich.progress.Progress(
        rich.progress.SpinnerColumn(),
        "[bold]{task.description}[/bold]",
        rich.progress.BarColumn(),
        "{task.completed}/{task.total}",
        "[dim]{task.fields[status]}[/dim]",
        rich.progress.TimeElapsedColumn(),
        console=_console or init_console(),
        transient=True,
        disable=_boring)
    task = progress.add_task(description, total=total, status="")
    with progress:
        def advance(status: str = ""):
            progress.update(task, advance=1, status=status)
        yield advance
