"""Console and file logging for bbbench.

Console output goes through a rich handler (markup enabled, so messages with user-supplied
text must be escape()d). The optional logfile gets the same records with markup stripped.
"""
import os
import os.path
import re
import copy
import logging
from typing import Any, Dict, Optional

from omegaconf import DictConfig
from rich.errors import MarkupError
from rich.highlighter import NullHighlighter
from rich.logging import RichHandler
from rich.markup import escape
from rich.padding import Padding
from rich.tree import Tree

from bbtls.exceptions import BBTLSBaseException, FormattedTraceback
from . import task_stats

# (font, colour) per level; levels in between take the style of the next level down
_LEVEL_STYLES = [
    (logging.CRITICAL, ("bold", "red")),
    (logging.ERROR,    ("bold", "red")),
    (logging.WARNING,  ("", "yellow")),
    (logging.INFO,     ("", "")),
    (logging.NOTSET,   ("dim", "")),
]

_MARKUP = re.compile(r'\[/?[a-z ]*\]')
_ANSI = re.compile(r'\x1B[@-_][0-?]*[ -/]*[@-~]')


def _level_style(levelno: int) -> str:
    for threshold, (font, colour) in _LEVEL_STYLES:
        if levelno >= threshold:
            return f"{font} {colour}".strip() or "normal"
    return "normal"


class BenchLogFormatter(logging.Formatter):
    """Wraps console messages in a per-level rich style. With plain=True, strips markup instead."""

    def __init__(self, plain: bool = False):
        if plain:
            fmt = "{asctime} {name} {levelname}: {message}"
        else:
            fmt = "{asctime} {name} [{style}]{levelname}: {message}[/{style}]"
        super().__init__(fmt, "%Y-%m-%d %H:%M:%S", style="{")
        self.plain = plain

    def format(self, record: logging.LogRecord) -> str:
        record = copy.copy(record)
        if self.plain:
            record.msg = _MARKUP.sub('', _ANSI.sub('', str(record.msg)))
        else:
            record.style = _level_style(record.levelno)
        return super().format(record)


class BenchConsoleHandler(RichHandler):
    def __init__(self, console):
        super().__init__(console=console, highlighter=NullHighlighter(), markup=True, keywords=[],
                         show_level=False, show_path=False, show_time=False)

    def emit(self, record: logging.LogRecord):
        try:
            super().emit(record)
        except MarkupError:
            # unescaped brackets in a message: print it verbatim
            record = copy.copy(record)
            record.msg = escape(str(record.msg))
            super().emit(record)


_logger: Optional[logging.Logger] = None
_boring = False
# (path, handler) of the active logfile
_logfile: Optional[tuple] = None


def is_boring() -> bool:
    return _boring


def logger(name="BBBENCH", boring=False, loglevel=logging.INFO) -> logging.Logger:
    """Returns the bbbench logger. The first call sets it up with the given settings, and
    routes bbtls library messages through it as well."""
    global _logger, _boring
    if _logger is None:
        if isinstance(loglevel, str):
            loglevel = getattr(logging, loglevel.upper())
        _boring = boring
        _logger = logging.getLogger(name)
        _logger.setLevel(loglevel)
        _logger.propagate = False
        handler = BenchConsoleHandler(task_stats.init_console(boring=boring))
        handler.setFormatter(BenchLogFormatter(plain=boring))
        handler.setLevel(loglevel)
        _logger.addHandler(handler)

        import bbtls
        bbtls.set_logger(_logger)
    return _logger


def declare_chapter(title: str, **kw):
    """Prints a horizontal rule with a title (nothing in boring mode)"""
    if not _boring:
        task_stats.init_console().rule(title, **kw)


def _close_logfile(log: logging.Logger):
    global _logfile
    if _logfile is not None:
        _, handler = _logfile
        handler.close()
        log.removeHandler(handler)
        _logfile = None


def logfile_path(logopts: DictConfig, subst: Optional[Dict[str, Any]] = None) -> str:
    """Builds the logfile path from the opts.log section. Characters outside [a-zA-Z0-9_./-]
    become underscores.

    Raises:
        KeyError, IndexError, ValueError: if the name has a bad {substitution}
    """
    name = logopts.name.format(**(subst or {}))
    return re.sub(r'[^a-zA-Z0-9_./-]', '_', os.path.join(logopts.dir or ".", name + logopts.ext))


def update_file_logger(log: logging.Logger, logopts: DictConfig,
                       subst: Optional[Dict[str, Any]] = None) -> Optional[str]:
    """Starts, switches or stops logging to file according to the opts.log section.

    Returns:
        Optional[str]: path of the logfile, or None if file logging is off (or failed to start)
    """
    global _logfile
    if not logopts.enable:
        _close_logfile(log)
        return None
    try:
        path = logfile_path(logopts, subst)
    except (KeyError, IndexError, ValueError) as exc:
        log.error(escape(f"bad substitution in log name '{logopts.name}': {exc}"))
        return None

    if _logfile is None or _logfile[0] != path:
        _close_logfile(log)
        logdir = os.path.dirname(path)
        if logdir:
            os.makedirs(logdir, exist_ok=True)
        # delay=True: the file appears with the first record
        handler = logging.FileHandler(path, 'w', delay=True)
        handler.setFormatter(BenchLogFormatter(plain=True))
        log.addHandler(handler)
        _logfile = path, handler

    _logfile[1].setLevel(getattr(logging, str(logopts.level).upper(), logging.INFO))
    return path


def _describe(exc: Any) -> str:
    if isinstance(exc, BBTLSBaseException):
        return exc.message
    if isinstance(exc, Exception):
        return f"{type(exc).__name__}: {exc}"
    return str(exc)


def _dim(text: str) -> str:
    return text if _boring else f"[dim]{text}[/dim]"


def _add_causes(tree: Tree, causes):
    for cause in causes:
        if isinstance(cause, FormattedTraceback):
            branch = tree.add(_dim("Traceback:"))
            for line in cause.lines:
                branch.add(_dim(escape(line)))
        elif isinstance(cause, (dict, DictConfig)):
            for key, value in cause.items():
                if isinstance(value, (dict, DictConfig)):
                    _add_causes(tree.add(escape(f"{key}:")), [value])
                else:
                    tree.add(escape(f"{key}: {value}"))
        else:
            branch = tree.add(escape(_describe(cause)))
            if isinstance(cause, BBTLSBaseException):
                _add_causes(branch, cause.nested)


def log_exception(*errors, log: Optional[logging.Logger] = None):
    """Logs errors (strings or exceptions) as a single message, skipping bbtls exceptions that
    have already been logged. If any of them have nested causes, prints a tree of causes to the console.
    """
    log = log or logger()

    messages = [_describe(exc) for exc in errors]
    fresh = [exc for exc in errors if not getattr(exc, "logged", False)]
    for exc in fresh:
        if isinstance(exc, BBTLSBaseException):
            exc.logged = True
    if fresh:
        log.error(escape(": ".join(messages)))

    nested = [exc for exc in errors if isinstance(exc, BBTLSBaseException) and exc.nested]
    if nested:
        declare_chapter("detailed error report follows", style="red")
        for exc in nested:
            label = escape(_describe(exc))
            tree = Tree(label if _boring else f"[bold red]{label}[/bold red]",
                        guide_style="" if _boring else "dim")
            _add_causes(tree, exc.nested)
            task_stats.init_console().print(Padding(tree, pad=(0, 0, 0, 8)))
