from bbtls.exceptions import *

class BenchBaseException(BBTLSBaseException):
    pass

class BenchRuntimeError(BenchBaseException):
    pass

class BenchIOError(BenchBaseException):
    """Output file or directory could not be written or read"""
    pass

class BenchConfigError(BenchBaseException):
    """Invalid benchmark setting. Carries the name of the offending config field."""
    def __init__(self, field: str, reason: str, nested=None):
        self.field = field
        self.reason = reason
        super().__init__(f"invalid setting for '{field}': {reason}", nested)
