"""Brute-force oracle schemas"""
from typing import List

from pydantic import BaseModel, Field, model_validator


class OracleResult(BaseModel):
    """Certified interval [lower, upper] for delta"""
    lower: float
    upper: float
    argmin_s: float
    samples: int = Field(..., gt=0)
    spacing: float = Field(..., gt=0, description="Max arclength gap between samples")
    
    @model_validator(mode="after")
    def check_order(self) -> "OracleResult":
        if self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")
        return self
    
    @property
    def width(self) -> float:
        return self.upper - self.lower
    
    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= value <= self.upper + slack


class ProfileSample(BaseModel):
    """One sample of the farthest-distance function"""
    s: float
    x: float
    y: float
    mu: float


class MuProfile(BaseModel):
    samples: List[ProfileSample]
    
    @property
    def minimum(self) -> float:
        return min(sample.mu for sample in self.samples)


class PointSetDelta(BaseModel):
    """Minimax invariant of a finite point set"""
    delta: float
    p_index: int
    q_index: int
