#-----------
# see https://github.com/python-poetry/poetry/issues/273#issuecomment-1103812336
try:
    from importlib import metadata
    __version__ = metadata.version("bbtls")
except Exception:  # running from a source checkout
    __version__ = "0+unknown"
#------------

# loaded configuration, set up by the CLI
CONFIG = None

from .benchlogging import logger, log_exception
