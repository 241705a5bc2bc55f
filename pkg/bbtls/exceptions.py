"""Errors raised by bbtls (and, through bbbench.exceptions, by bbbench).

Every error has a message and a list of nested causes: exceptions, tracebacks, or dicts of
details. bbbench.log_exception() renders the causes as a tree.
"""
import sys
import traceback
from types import TracebackType
from typing import Any, Dict, List, Optional, Union

# attach the traceback of a nested exception that is being handled (set by bbbench -v)
ALWAYS_REPORT_TRACEBACK = False


class FormattedTraceback(object):
    """Lines of a formatted traceback. Unlike a traceback object, this survives pickling."""
    def __init__(self, tb: TracebackType):
        self.lines = [line.rstrip() for line in traceback.format_tb(tb)]


Cause = Union[Exception, TracebackType, FormattedTraceback, Dict[str, Any]]


def _collect_causes(nested: Union[None, Cause, List[Cause]]) -> List[Cause]:
    if nested is None:
        return []
    causes = list(nested) if isinstance(nested, (list, tuple)) else [nested]
    # nested is the exception currently being handled: keep where it came from
    if len(causes) == 1 and ALWAYS_REPORT_TRACEBACK:
        exc_type, exc, exc_tb = sys.exc_info()
        if exc is not None and causes[0] is exc:
            causes.append(exc_tb)
    return [FormattedTraceback(cause) if isinstance(cause, TracebackType) else cause for cause in causes]


class BBTLSBaseException(Exception):
    def __init__(self, message: str, nested: Optional[Union[Cause, List[Cause]]] = None):
        """Initializes exception object

        Args:
            message (str): error message
            nested: cause(s) of the error. Defaults to None.
        """
        self.message = message
        self.nested = _collect_causes(nested)
        reasons = [str(cause) for cause in self.nested if isinstance(cause, Exception)]
        Exception.__init__(self, f"{message}: {', '.join(reasons)}" if reasons else message)
        # set by log_exception()
        self.logged = False


class DegeneratePair(BBTLSBaseException):
    """Secant pair does not define the requested steplength (zero curvature or a zero vector)"""
    def __init__(self, message: str, nested=None, pair=None):
        self.pair = pair
        super().__init__(message, nested)

class DegenerateData(BBTLSBaseException):
    """Scalar least-squares instance has no finite minimizer"""
    def __init__(self, message: str, nested=None, instance=None):
        self.instance = instance
        super().__init__(message, nested)

class DomainError(BBTLSBaseException):
    """Argument outside the domain of a function"""
    pass

class InvalidBracket(BBTLSBaseException):
    def __init__(self, lo: float, hi: float):
        self.lo, self.hi = lo, hi
        super().__init__(f"invalid search interval [{lo}, {hi}]")

class InvalidSpec(BBTLSBaseException):
    """Inconsistent problem definition"""
    pass

class MissingMinimizer(BBTLSBaseException):
    """Target-distance stopping requested for a problem without a known minimizer"""
    pass

class DegenerateStep(BBTLSBaseException):
    """Raw steplength formula is undefined and no safeguard is in effect"""
    pass

class ConfigError(BBTLSBaseException):
    pass
