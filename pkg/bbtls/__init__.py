import os
import sys
import logging

#-----------
# see https://github.com/python-poetry/poetry/issues/273#issuecomment-1103812336
try:
    from importlib import metadata
    __version__ = metadata.version(__package__)
except Exception:  # running from a source checkout
    __version__ = "0+unknown"
#------------


class _UpToLevel(logging.Filter):
    """Passes records at or below the given level"""
    def __init__(self, level):
        super().__init__()
        self.level = level

    def filter(self, record):
        return record.levelno <= self.level


def init_logger(name="BBTLS",
           fmt="{asctime}: {message}",
           datefmt="%Y-%m-%d %H:%M:%S", loglevel="INFO"):
    """Returns the global library logger (initializing if not already done so, with the given values).
    INFO and below goes to stdout, warnings and errors to stderr."""
    global log
    if log is None:
        log = logging.getLogger(name)
        log.propagate = False

        level = os.environ.get('BBTLS_LOG_LEVEL') or loglevel
        log.setLevel(getattr(logging, level, logging.INFO))

        formatter = logging.Formatter(fmt, datefmt, style="{")

        out_handler = logging.StreamHandler(sys.stdout)
        out_handler.addFilter(_UpToLevel(logging.INFO))
        err_handler = logging.StreamHandler(sys.stderr)
        err_handler.setLevel(logging.WARNING)
        for handler in out_handler, err_handler:
            handler.setFormatter(formatter)
            log.addHandler(handler)

    return log


def set_logger(logger):
    """Routes library messages to another logger (the bbbench application logger, typically)"""
    global log
    log = logger

def logger():
    return init_logger()


log = None
init_logger()
