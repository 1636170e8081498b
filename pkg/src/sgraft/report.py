"""Validation reports and verdicts, serialisable as key-value text blocks."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Issue:
    kind: str
    message: str
    subject: str = ""
    severity: str = "error"


@dataclass
class Report:
    name: str
    issues: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def error(self, kind, message, subject=""):
        self.issues.append(Issue(kind, message, str(subject), "error"))

    def warn(self, kind, message, subject=""):
        self.issues.append(Issue(kind, message, str(subject), "warning"))

    def extend(self, other: "Report", prefix: str = ""):
        for i in other.issues:
            subject = f"{prefix}{i.subject}" if prefix else i.subject
            self.issues.append(Issue(i.kind, i.message, subject, i.severity))

    @property
    def errors(self) -> list:
        return [i for i in self.issues if i.severity == "error"]

    @property
    def warnings(self) -> list:
        return [i for i in self.issues if i.severity == "warning"]

    @property
    def ok(self) -> bool:
        return not self.errors

    def kinds(self) -> set:
        return {i.kind for i in self.errors}

    def to_text(self) -> str:
        lines = [f"report {self.name}", f"status {'ok' if self.ok else 'rejected'}"]
        for k in sorted(self.info):
            lines.append(f"info.{k} {_fmt(self.info[k])}")
        for n, i in enumerate(self.issues):
            lines.append(f"issue.{n} severity={i.severity} kind={i.kind} "
                         f"subject={i.subject!s} message={i.message!r}")
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return " ".join(_fmt(x) for x in v)
    return str(v)


def block(kind: str, name: str, fields: dict) -> str:
    """Render a verdict as ``key value`` lines under a header."""
    lines = [f"{kind} {name}"]
    for k, v in fields.items():
        lines.append(f"{k} {_fmt(v)}")
    return "\n".join(lines) + "\n"
