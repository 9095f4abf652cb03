"""
Verification results and their JSON report format (schema version 1).

Checks count samples and failures and keep the first few failing witnesses
in canonical JSON. Apart from the single "timestamp" object, a report depends
only on the run configuration, so two runs with the same seed produce
byte-identical files once that object is removed.
"""

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MAX_WITNESSES = 20


def to_jsonable(value):
    """Convert subspaces, matrices, apartments and containers to JSON values."""
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, (frozenset, set)):
        return sorted(
            (to_jsonable(item) for item in value),
            key=lambda item: json.dumps(item, sort_keys=True),
        )
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return str(value)


def witness_of(**members):
    """A witness dict with every member in canonical JSON form."""
    return {name: to_jsonable(member) for name, member in members.items()}


@dataclass
class CheckResult:
    """
    Tally for one verified statement.

    Attributes:
        name (str): short identifier of the check.
        anchor (str): the mathematical statement the check exercises.
        samples (int): evaluated instances.
        failure_count (int): instances that failed.
        witnesses (list): the first MAX_WITNESSES failing instances.
        notes (list): free-form remarks carried into the report.
    """

    name: str
    anchor: str = ""
    samples: int = 0
    failure_count: int = 0
    witnesses: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        """True when no instance failed."""
        return self.failure_count == 0

    def record(self, ok, witness=None):
        """Count one instance; keep its witness if it failed."""
        self.samples += 1
        if not ok:
            self.failure_count += 1
            if witness is not None and len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append(witness)
        return ok

    def merge(self, other):
        """Fold another tally of the same check into this one."""
        self.samples += other.samples
        self.failure_count += other.failure_count
        room = MAX_WITNESSES - len(self.witnesses)
        self.witnesses.extend(other.witnesses[:room])
        self.notes.extend(note for note in other.notes if note not in self.notes)
        return self

    def to_dict(self):
        return {
            "name": self.name,
            "anchor": self.anchor,
            "samples": self.samples,
            "failures": self.failure_count,
            "passed": self.passed,
            "witnesses": self.witnesses,
            "notes": self.notes,
        }


@dataclass
class SuiteReport:
    """All checks of one suite plus the parameters it ran with."""

    suite: str
    parameters: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def add(self, check):
        """Append a check and log it if it failed."""
        if not check.passed:
            logger.warning(
                "%s/%s failed on %d of %d samples",
                self.suite,
                check.name,
                check.failure_count,
                check.samples,
            )
        self.checks.append(check)
        return check

    def to_dict(self):
        return {
            "suite": self.suite,
            "parameters": to_jsonable(self.parameters),
            "passed": self.passed,
            "checks": [check.to_dict() for check in self.checks],
        }


@dataclass
class RunReport:
    """Top-level report written by the CLI."""

    command: str
    config: dict = field(default_factory=dict)
    suites: list = field(default_factory=list)
    started_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))
    wall_clock_seconds: float = 0.0

    @property
    def passed(self):
        return all(suite.passed for suite in self.suites)

    def totals(self):
        """Aggregate check, sample and failure counts."""
        checks = [check for suite in self.suites for check in suite.checks]
        return {
            "checks": len(checks),
            "failed_checks": sum(1 for check in checks if not check.passed),
            "samples": sum(check.samples for check in checks),
            "failures": sum(check.failure_count for check in checks),
        }

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": to_jsonable(self.config),
            "passed": self.passed,
            "totals": self.totals(),
            "suites": [suite.to_dict() for suite in self.suites],
            "timestamp": {
                "started_at": self.started_at.isoformat(),
                "wall_clock_seconds": round(self.wall_clock_seconds, 3),
            },
        }

    def to_json(self):
        """Deterministic JSON text (sorted keys, two-space indent)."""
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def write_report(report, path):
    """Write ``report`` as JSON to ``path``."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(report.to_json())
    logger.info("Report written to %s", path)
