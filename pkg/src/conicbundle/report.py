"""Check reports shared by every command, with a JSON schema."""

from __future__ import annotations

import json
import time
import traceback
import dataclasses
from dataclasses import dataclass

from .errors import AlgebraError

STATUSES = ("pass", "fail", "skip")

SCHEMA = {
    "type": "object",
    "required": ["command", "field", "checks", "overall", "millis"],
    "additionalProperties": False,
    "properties": {
        "command": {"type": "string"},
        "field": {"type": ["string", "null"]},
        "overall": {"enum": ["pass", "fail"]},
        "millis": {"type": "integer", "minimum": 0},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status", "detail"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": list(STATUSES)},
                    "detail": {},
                },
                "if": {"properties": {"status": {"const": "skip"}}},
                "then": {"properties": {"detail": {"type": "object", "required": ["reason"]}}},
            },
        },
    },
}

EXPECTED_ERRORS = (AlgebraError, ZeroDivisionError)


@dataclass
class Check:
    name: str
    status: str
    detail: object = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")
        if self.status == "skip" and not (isinstance(self.detail, dict) and self.detail.get("reason")):
            raise ValueError("a skipped check needs a reason")

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail}


def error_detail(exc: BaseException) -> dict:
    out = {"error": str(exc), "type": type(exc).__name__}
    hyp = getattr(exc, "hypothesis", None)
    if hyp:
        out["hypothesis"] = hyp
    info = getattr(exc, "info", None)
    if info:
        out.update({k: v for k, v in info.items() if k not in out})
    return out


def run_check(name: str, fn, /, *args, **kwargs) -> Check:
    """Run ``fn`` returning ``(status, detail)``; expected errors become failures."""
    try:
        status, detail = fn(*args, **kwargs)
    except EXPECTED_ERRORS as exc:
        return Check(name, "fail", error_detail(exc))
    except Exception as exc:  # noqa: BLE001 - reported, not swallowed
        detail = error_detail(exc)
        detail["traceback"] = traceback.format_exc().strip().splitlines()[-3:]
        return Check(name, "fail", detail)
    return Check(name, status, detail)


@dataclass
class Report:
    command: str
    field: str | None = None
    checks: list = dataclasses.field(default_factory=list)
    started: float = dataclasses.field(default_factory=time.perf_counter)
    millis: int | None = None

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, checks):
        for c in checks:
            self.add(c)

    @property
    def overall(self) -> str:
        return "fail" if any(c.status == "fail" for c in self.checks) else "pass"

    @property
    def exit_code(self) -> int:
        return 0 if self.overall == "pass" else 1

    def finish(self) -> "Report":
        self.millis = int((time.perf_counter() - self.started) * 1000)
        return self

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "command": self.command,
            "field": self.field,
            "checks": [c.to_dict() for c in self.checks],
            "overall": self.overall,
        }
        if timing:
            out["millis"] = self.millis if self.millis is not None else 0
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, ensure_ascii=False)

    def to_text(self, quiet: bool = False) -> str:
        lines = []
        if not quiet:
            for c in self.checks:
                lines.append(f"{c.status.upper():4}  {c.name}{_summary(c)}")
        n = {s: sum(c.status == s for c in self.checks) for s in STATUSES}
        lines.append(f"{self.command}: {self.overall.upper()} "
                     f"({n['pass']} passed, {n['fail']} failed, {n['skip']} skipped)")
        return "\n".join(lines)


def _summary(c: Check) -> str:
    d = c.detail
    if isinstance(d, dict):
        for key in ("reason", "error", "summary"):
            if key in d:
                return f"  - {d[key]}"
    return ""


def validate(doc: dict) -> None:
    import jsonschema

    jsonschema.validate(doc, SCHEMA)


def strip_timing(text: str) -> str:
    """The JSON document without its timing field, for determinism comparisons."""
    doc = json.loads(text)
    doc.pop("millis", None)
    return json.dumps(doc, indent=2, ensure_ascii=False)
