"""Rule-coded diagnostics shared by ingestion, validation, and diffing.

Every finding carries a stable code. Codes of the form ``R<n>-...`` anchor to
the tool's numbered FAIRness checklist (1 licensing, 3 completeness,
5 identifier scheme, 6 structure/encoding, 7 scheme metadata, 10 versioning);
``E-...`` codes are processing diagnostics. The code alone determines the
severity — the table below is the single source of truth, so reports stay
comparable across runs and tool versions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union


class Severity(str, Enum):
    ERROR = "ERROR"
    WARNING = "WARNING"
    INFO = "INFO"


# code -> (severity, rule number)
CATALOG: dict[str, tuple[Severity, int]] = {
    "R1-LICENSE-ND": (Severity.ERROR, 1),
    "R1-LICENSE-UNKNOWN": (Severity.WARNING, 1),
    "R3-NO-LABEL": (Severity.ERROR, 3),
    "R3-NO-DEFINITION": (Severity.ERROR, 3),
    "R3-INCOMPLETE": (Severity.WARNING, 3),
    "R5-HASH": (Severity.WARNING, 5),
    "R5-VERSION": (Severity.WARNING, 5),
    "R5-LONG-PATH": (Severity.INFO, 5),
    "R5-NOT-HTTP": (Severity.ERROR, 5),
    "R6-ORPHAN": (Severity.ERROR, 6),
    "R6-NONRECIPROCAL": (Severity.WARNING, 6),
    "R6-CYCLE": (Severity.ERROR, 6),
    "R6-DUP-PREFLABEL": (Severity.WARNING, 6),
    "R6-DUP-NOTATION": (Severity.WARNING, 6),
    "R6-MULTI-PREFLABEL": (Severity.ERROR, 6),
    "R6-DANGLING-REF": (Severity.WARNING, 6),
    "R6-AMBIGUOUS-REF": (Severity.WARNING, 6),
    "R7-NO-LICENSE": (Severity.ERROR, 7),
    "R7-NO-PROVENANCE": (Severity.ERROR, 7),
    "R7-NO-LIFECYCLE": (Severity.ERROR, 7),
    "R7-NO-VERSION": (Severity.WARNING, 7),
    "R10-REMOVED-IRI": (Severity.ERROR, 10),
    "R10-SEMANTIC-REVIEW": (Severity.INFO, 10),
    "E-DUP-ID": (Severity.ERROR, 5),
}

REPORT_SCHEMA_VERSION = 1

Subject = Optional[Union[str, int]]  # IRI string or 1-based source row number


@dataclass(frozen=True)
class Finding:
    code: str
    severity: Severity
    message: str
    subject: Subject = None
    rule_ref: int = 0

    def sort_key(self) -> tuple:
        return (self.rule_ref, self.code, _subject_key(self.subject), self.message)

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "severity": self.severity.value,
            "ruleRef": self.rule_ref,
            "subject": self.subject,
            "message": self.message,
        }


def _subject_key(subject: Subject) -> str:
    if subject is None:
        return ""
    if isinstance(subject, int):
        return f"row {subject:09d}"
    return subject


def finding(code: str, message: str, subject: Subject = None) -> Finding:
    """Build a Finding, taking severity and rule number from the catalog."""
    severity, rule_ref = CATALOG[code]
    return Finding(code, severity, message, subject, rule_ref)


@dataclass
class ValidationReport:
    """Deterministically ordered findings with severity counts and a verdict."""

    findings: list[Finding]

    def __post_init__(self):
        self.findings = sorted(self.findings, key=Finding.sort_key)

    @property
    def counts(self) -> dict[str, int]:
        out = {s.value: 0 for s in Severity}
        for f in self.findings:
            out[f.severity.value] += 1
        return out

    @property
    def verdict(self) -> str:
        if self.counts[Severity.ERROR.value] > 0:
            return "fail"
        if not self.findings:
            return "pass"
        return "pass-with-warnings"

    def codes(self) -> set[str]:
        return {f.code for f in self.findings}

    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity is Severity.ERROR]

    def to_json(self) -> str:
        doc = {
            "schemaVersion": REPORT_SCHEMA_VERSION,
            "verdict": self.verdict,
            "counts": self.counts,
            "findings": [f.to_dict() for f in self.findings],
        }
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        lines = []
        for f in self.findings:
            where = ""
            if isinstance(f.subject, int):
                where = f" [row {f.subject}]"
            elif f.subject:
                where = f" [{f.subject}]"
            lines.append(f"{f.severity.value:7} {f.code}{where}: {f.message}")
        counts = self.counts
        lines.append(
            f"verdict: {self.verdict} "
            f"({counts['ERROR']} errors, {counts['WARNING']} warnings, "
            f"{counts['INFO']} info)"
        )
        return "\n".join(lines) + "\n"
