"""Equation family:  lap(u) + k u = f  with Dirichlet data, k >= 0."""

import enum
from dataclasses import dataclass


class SourceMode(str, enum.Enum):
    ZERO = "zero"
    GENERAL = "general"


@dataclass(frozen=True)
class EquationSpec:
    k: float
    source_mode: SourceMode

    def __post_init__(self):
        if not self.k >= 0:
            raise ValueError("k must be nonnegative")
        object.__setattr__(self, "source_mode", SourceMode(self.source_mode))

    @property
    def name(self):
        if self.k > 0:
            return "helmholtz"
        return "laplace" if self.source_mode is SourceMode.ZERO else "poisson"

    @classmethod
    def laplace(cls):
        return cls(0.0, SourceMode.ZERO)

    @classmethod
    def poisson(cls):
        return cls(0.0, SourceMode.GENERAL)

    @classmethod
    def helmholtz(cls, k, source_mode=SourceMode.ZERO):
        if not k > 0:
            raise ValueError("Helmholtz requires k > 0")
        return cls(k, source_mode)
