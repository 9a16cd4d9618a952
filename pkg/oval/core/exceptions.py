"""
Error types

Every error carries the process exit code the command line reports for it.
"""
from typing import Any, Dict, Optional


class OvalError(Exception):
    """Base error"""
    
    exit_code = 1
    
    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}
    
    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": type(self).__name__,
            "message": self.message,
            "details": self.details,
        }


class InvalidInputError(OvalError):
    """Input outside an operation's preconditions"""
    exit_code = 2


class PolygonValidationError(InvalidInputError):
    """Vertex loop is not a strictly convex polygon"""
    
    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message, {"index": index} if index is not None else None)
        self.index = index


class PolygonFileError(InvalidInputError):
    """Malformed polygon or curve descriptor file"""
    
    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, {"line": line} if line is not None else None)
        self.line = line


class DomainError(InvalidInputError):
    """Parameter outside the domain of a closed-form expression"""


class InvalidCurveError(InvalidInputError):
    """Support function does not describe a strictly convex curve"""


class DegeneracyError(OvalError):
    """Section decomposition hit a farthest-vertex tie inside a section"""
    exit_code = 3
    
    def __init__(self, message: str, arclength: Optional[float] = None):
        super().__init__(message, {"arclength": arclength})
        self.arclength = arclength


class HypothesisViolationError(OvalError):
    """Inscribed polygon too coarse: lambda >= pi / (2k)"""
    exit_code = 4
    
    def __init__(self, lam: float, k: float, minimal_n: int):
        super().__init__(
            f"lambda = {lam:.6g} violates lambda < pi/(2k) = {3.141592653589793 / (2 * k):.6g}; "
            f"use n >= {minimal_n}",
            {"lambda": lam, "k": k, "minimal_n": minimal_n},
        )
        self.lam = lam
        self.k = k
        self.minimal_n = minimal_n


class ResourceLimitError(OvalError):
    """Configured sample budget exceeded"""
    exit_code = 5


class OutputError(OvalError):
    """Output file could not be written"""
    exit_code = 5


class ConsistencyError(OvalError):
    """Two computations of the same quantity disagree, or a proven bound failed"""
    exit_code = 6
