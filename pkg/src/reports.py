"""
JSON reports: one CheckRecord per check, assembled into a Report.
"""

import json
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterator, List, Optional

from src import __version__
from src.errors import ConstructionFailed, QBRError, StageInvariantFailed

SCHEMA = "qbr-report/1"
STATUSES = ("pass", "fail", "skipped", "inconclusive")


@dataclass
class CheckRecord:
    name: str
    status: str
    reference: str = ""
    payload: Dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"Unknown status: {self.status}")


@dataclass
class Report:
    spec: Dict[str, Any]
    seed: int
    checks: List[CheckRecord] = field(default_factory=list)
    tool_version: str = __version__

    @property
    def status(self) -> str:
        """Any failure fails the report; otherwise one passing check passes it."""
        statuses = {c.status for c in self.checks}
        for status in ("fail", "pass", "inconclusive"):
            if status in statuses:
                return status
        return "skipped"

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1, "skipped": 2, "inconclusive": 2}[self.status]

    def counts(self) -> Dict[str, int]:
        return {s: sum(1 for c in self.checks if c.status == s) for s in STATUSES}

    def to_dict(self, timings: bool = True) -> dict:
        checks = [asdict(c) for c in self.checks]
        if not timings:
            for c in checks:
                c.pop("wall_time")
        return {"schema": SCHEMA, "tool_version": self.tool_version, "spec": self.spec, "seed": self.seed,
                "status": self.status, "checks": checks}

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True, default=_plain)


def _plain(value: Any) -> Any:
    if hasattr(value, "tolist"):
        return value.tolist()
    if hasattr(value, "item"):
        return value.item()
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def status_of(holds: Optional[bool]) -> str:
    if holds is None:
        return "inconclusive"
    return "pass" if holds else "fail"


@contextmanager
def timed(records: List[CheckRecord], name: str, reference: str = "") -> Iterator[CheckRecord]:
    """
    Collect one check. The body fills in status and payload. A broken
    construction identity fails the check; any other QBRError (caps, unmet
    hypotheses) marks it skipped. Either way the error payload is kept.
    """
    record = CheckRecord(name=name, status="pass", reference=reference)
    start = time.perf_counter()
    try:
        yield record
    except (StageInvariantFailed, ConstructionFailed) as exc:
        record.status = "fail"
        record.payload = exc.to_payload()
    except QBRError as exc:
        record.status = "skipped"
        record.payload = exc.to_payload()
    record.wall_time = round(time.perf_counter() - start, 6)
    records.append(record)
