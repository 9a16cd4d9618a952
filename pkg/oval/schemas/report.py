"""Run report schema"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class ChordLine(BaseModel):
    """Printable distinguished chord"""
    p0_x: float
    p0_y: float
    p0_s: float
    q0: int
    length: float


class RunReport(BaseModel):
    """Machine-readable command result; field order is the output order"""
    command: str
    inputs_digest: str
    delta: Optional[float] = None
    perimeter: Optional[float] = None
    quotient: Optional[float] = None
    chords: List[ChordLine] = []
    values: Dict[str, Any] = Field(default_factory=dict, description="Command specific results")
    degenerate: bool = False
    timing_ms: Optional[float] = None


class ErrorReport(BaseModel):
    """Generic error response"""
    success: bool = False
    message: str
    error: Optional[str] = None
    details: Optional[Any] = None
