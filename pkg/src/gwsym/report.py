"""Deterministic verification reports in text and machine form.

The machine format is line-delimited and versioned: tab-separated records
``kind<TAB>field...`` with a schema header.  Rendering is deterministic
(exact values, fixed ordering, no timestamps) and round-trips losslessly.
"""
from __future__ import annotations

from dataclasses import dataclass, field

SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    claim: str
    detail: str = ""


@dataclass(frozen=True)
class Value:
    key: str
    value: str


@dataclass(frozen=True)
class TraceLine:
    text: str


@dataclass
class Section:
    title: str
    entries: list = field(default_factory=list)

    def verdict(self, name, passed, claim, detail=""):
        self.entries.append(Verdict(name, bool(passed), claim, detail))

    def value(self, key, value):
        self.entries.append(Value(key, str(value)))

    def trace(self, text):
        self.entries.append(TraceLine(str(text)))


@dataclass
class Report:
    sections: list = field(default_factory=list)

    def section(self, title) -> Section:
        s = Section(title)
        self.sections.append(s)
        return s

    def all_passed(self) -> bool:
        return all(e.passed for s in self.sections for e in s.entries
                   if isinstance(e, Verdict))

    def failures(self):
        return [e for s in self.sections for e in s.entries
                if isinstance(e, Verdict) and not e.passed]

    # -- text ---------------------------------------------------------------
    def to_text(self) -> str:
        lines = []
        for s in self.sections:
            lines.append(f"== {s.title} ==")
            for e in s.entries:
                if isinstance(e, Verdict):
                    mark = "PASS" if e.passed else "FAIL"
                    lines.append(f"  [{mark}] {e.name}: {e.claim}")
                    if e.detail:
                        for d in e.detail.splitlines():
                            lines.append(f"         {d}")
                elif isinstance(e, Value):
                    lines.append(f"  {e.key} = {e.value}")
                else:
                    lines.append(f"  | {e.text}")
            lines.append("")
        status = "ALL CHECKS PASSED" if self.all_passed() else \
            f"{len(self.failures())} CHECK(S) FAILED"
        lines.append(status)
        return "\n".join(lines) + "\n"

    # -- machine ------------------------------------------------------------
    def to_machine(self) -> str:
        rows = [f"schema\tgwsym-report\t{SCHEMA_VERSION}"]
        for s in self.sections:
            rows.append(f"section\t{_esc(s.title)}")
            for e in s.entries:
                if isinstance(e, Verdict):
                    rows.append("verdict\t{}\t{}\t{}\t{}".format(
                        _esc(e.name), "pass" if e.passed else "fail",
                        _esc(e.claim), _esc(e.detail)))
                elif isinstance(e, Value):
                    rows.append(f"value\t{_esc(e.key)}\t{_esc(e.value)}")
                else:
                    rows.append(f"trace\t{_esc(e.text)}")
        rows.append(f"status\t{'pass' if self.all_passed() else 'fail'}")
        return "\n".join(rows) + "\n"


def _esc(text: str) -> str:
    return (str(text).replace("\\", "\\\\").replace("\t", "\\t")
            .replace("\n", "\\n"))


def _unesc(text: str) -> str:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text):
            nxt = text[i + 1]
            out.append({"\\": "\\", "t": "\t", "n": "\n"}.get(nxt, nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def parse_machine(text: str) -> Report:
    """Inverse of to_machine (loses nothing)."""
    report = Report()
    section = None
    lines = text.splitlines()
    if not lines or not lines[0].startswith("schema\tgwsym-report"):
        raise ValueError("not a machine report")
    version = lines[0].split("\t")[2]
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {version}")
    for line in lines[1:]:
        if not line:
            continue
        parts = line.split("\t")
        kind = parts[0]
        if kind == "section":
            section = report.section(_unesc(parts[1]))
        elif kind == "verdict":
            section.entries.append(Verdict(_unesc(parts[1]),
                                           parts[2] == "pass",
                                           _unesc(parts[3]),
                                           _unesc(parts[4])))
        elif kind == "value":
            section.entries.append(Value(_unesc(parts[1]), _unesc(parts[2])))
        elif kind == "trace":
            section.entries.append(TraceLine(_unesc(parts[1])))
        elif kind == "status":
            pass
        else:
            raise ValueError(f"unknown record kind {kind!r}")
    return report
