"""Design-solution quality estimates from testability and complexity figures.

Continuous engineering estimates, so plain floats; compare with a 1e-12
tolerance rather than exactly.
"""
from __future__ import annotations

from dataclasses import dataclass


class DomainError(ValueError):
    """Input outside its documented range."""


@dataclass(frozen=True)
class DesignQualityInput:
    """Inputs: fault-existence probability, undetected-fault count,
    testability grade, and the two complexity shares (assertion/boundary-scan
    vs functional logic)."""

    fault_probability: float
    undetected_faults: int
    testability: float
    scan_complexity: float
    logic_complexity: float

    def __post_init__(self):
        if not 0.0 <= self.fault_probability <= 1.0:
            raise DomainError("fault probability must lie in [0,1]")
        if self.undetected_faults < 0:
            raise DomainError("undetected-fault count must be >= 0")
        if not 0.0 <= self.testability <= 1.0:
            raise DomainError("testability must lie in [0,1]")
        if self.scan_complexity < 0 or self.logic_complexity < 0:
            raise DomainError("complexities must be >= 0")
        if self.scan_complexity + self.logic_complexity <= 0:
            raise DomainError("total complexity must be positive")


@dataclass(frozen=True)
class DesignQualityOutput:
    """All five estimates lie in [0,1]; ``quality`` averages the last three."""

    yield_estimate: float
    fault_level: float
    verification_time: float
    hardware_redundancy: float
    quality: float


def design_quality(inp: DesignQualityInput) -> DesignQualityOutput:
    """Evaluate the yield / fault-level / time / redundancy estimates and
    their average."""
    p = inp.fault_probability
    n = inp.undetected_faults
    k = inp.testability
    total = inp.scan_complexity + inp.logic_complexity
    yield_estimate = (1.0 - p) ** n
    fault_level = 1.0 - (1.0 - p) ** (n * (1.0 - k))
    verification_time = (1.0 - k) * inp.scan_complexity / total
    hardware_redundancy = inp.logic_complexity / total
    quality = (fault_level + verification_time + hardware_redundancy) / 3.0
    return DesignQualityOutput(yield_estimate, fault_level,
                               verification_time, hardware_redundancy, quality)
