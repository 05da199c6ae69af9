"""
Exception hierarchy for the workbench.

Every error carries a readable message plus the structured data needed to
replay the failure (element indices, the failing equation, the stage).
"""

from typing import Any, Dict, Optional


class QBRError(Exception):
    """Base class for all workbench errors."""

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_payload(self) -> Dict[str, Any]:
        payload = {"error": type(self).__name__, "message": self.message}
        payload.update({k: _plain(v) for k, v in self.details.items()})
        return payload


def _plain(value: Any) -> Any:
    if hasattr(value, "tolist"):
        return value.tolist()
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


# ring construction and arithmetic
class OrderCapExceeded(QBRError):
    pass


class MalformedSpec(QBRError):
    pass


class ForeignElement(QBRError):
    pass


class NonUnitalRing(QBRError):
    pass


class DifferentRings(QBRError):
    pass


class NotAHomomorphism(QBRError):
    pass


class IdealCapExceeded(QBRError):
    def __init__(self, message: str, partial: Optional[list] = None, **details: Any):
        super().__init__(message, **details)
        self.partial = partial or []


class NotIdempotent(QBRError):
    pass


class NotInIdeal(QBRError):
    pass


class NotAUnit(QBRError):
    pass


# witnesses and constructions
class PreconditionViolated(QBRError):
    pass


class NotAnExtension(QBRError):
    pass


class InvalidWitness(QBRError):
    pass


class NotAPartialInverse(QBRError):
    pass


class ConstructionFailed(QBRError):
    pass


class NotInCorner(QBRError):
    pass


class BadEquivalenceData(QBRError):
    pass


class NoReducer(QBRError):
    pass


class StageWitnessNotFound(QBRError):
    def __init__(self, stage: str, message: str = "", **details: Any):
        super().__init__(message or f"No witness found at stage {stage}", stage=stage, **details)
        self.stage = stage


class StageInvariantFailed(QBRError):
    """An identity that a construction guarantees did not hold."""


class HypothesisFailed(QBRError):
    pass


class NotABIdeal(QBRError):
    pass


class NotExchange(QBRError):
    pass


class ScaleCapExceeded(QBRError):
    pass
