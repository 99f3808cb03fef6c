"""Report assembly and emission (canonical JSON plus a markdown summary).

The payload (everything except timings and the timestamp) is byte-reproducible
for a fixed seed and configuration; volatile fields live in separate keys so
determinism can be checked by comparing payload serializations.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources

VERSION = "0.1.0"


@dataclass
class Report:
    seed: int
    guards: dict
    censuses: list[dict] = field(default_factory=list)
    cases: list[dict] = field(default_factory=list)
    oracles: list[dict] = field(default_factory=list)
    errors: list[dict] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    version: str = VERSION

    def sort(self) -> None:
        """Deterministic ordering regardless of worker scheduling."""
        self.censuses.sort(key=lambda c: (c["group"], c["prime"]))
        self.cases.sort(key=lambda c: (c["group"], c["prime"], str(c.get("check")),
                                       str(c["block"]["index"]), c["T_exponent"],
                                       str(c.get("note", "")),
                                       json.dumps(c["ledger"], sort_keys=True)))
        self.oracles.sort(key=lambda o: (o["group"], o["prime"], o["kind"],
                                         o.get("exponent") or 0))
        self.errors.sort(key=lambda e: (e["group"], e.get("prime") or 0))

    def payload(self) -> dict:
        self.sort()
        out = {
            "version": self.version,
            "seed": self.seed,
            "guards": self.guards,
            "censuses": self.censuses,
            "cases": self.cases,
            "oracles": self.oracles,
        }
        if self.errors:
            out["errors"] = self.errors
        return out

    def payload_json(self) -> str:
        return json.dumps(self.payload(), sort_keys=True, separators=(",", ":")) + "\n"

    def full_dict(self) -> dict:
        out = self.payload()
        out["timings"] = {k: round(v, 6) for k, v in sorted(self.timings.items())}
        out["timestamp"] = datetime.now(timezone.utc).isoformat()
        return out

    @property
    def ok(self) -> bool:
        return (not self.errors
                and all(c["holds"] for c in self.cases)
                and all(o["holds"] for o in self.oracles))

    def counts(self) -> dict:
        return {
            "cases": len(self.cases),
            "failed_cases": sum(1 for c in self.cases if not c["holds"]),
            "skipped_cases": sum(1 for c in self.cases if c.get("skipped")),
            "oracles": len(self.oracles),
            "failed_oracles": sum(1 for o in self.oracles if not o["holds"]),
            "errors": len(self.errors),
        }


def schema() -> dict:
    text = resources.files("bgawc").joinpath("report_schema.json").read_text()
    return json.loads(text)


def emit_json(report: Report, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.full_dict(), fh, sort_keys=True, indent=1)
        fh.write("\n")


def emit_markdown(report: Report, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_markdown(report))


def render_markdown(report: Report) -> str:
    report.sort()
    lines = ["# Verification report", ""]
    counts = report.counts()
    lines.append(f"- version: {report.version}, seed: {report.seed}")
    lines.append(f"- cases: {counts['cases']} ({counts['failed_cases']} failed, "
                 f"{counts['skipped_cases']} skipped)")
    lines.append(f"- oracle checks: {counts['oracles']} ({counts['failed_oracles']} failed)")
    if report.errors:
        lines.append(f"- errors: {counts['errors']}")
    lines.append("")
    lines.append("## Block censuses")
    lines.append("")
    lines.append("| group | order | p | field | blocks | defects | min fields |")
    lines.append("|---|---|---|---|---|---|---|")
    for c in report.censuses:
        defects = ",".join(str(b["defect"]) for b in c["blocks"])
        mfs = ",".join(str(b["min_field_degree"]) for b in c["blocks"])
        lines.append(f"| {c['group']} | {c['order']} | {c['prime']} | "
                     f"F_{{{c['prime']}^{c['field_degree']}}} | {len(c['blocks'])} "
                     f"| {defects} | {mfs} |")
    lines.append("")
    lines.append("## Identity checks per group and prime")
    lines.append("")
    lines.append("| group | p | check | cases | failed |")
    lines.append("|---|---|---|---|---|")
    tally: dict[tuple, list[int]] = {}
    for c in report.cases:
        key = (c["group"], c["prime"], c.get("check", "?"))
        row = tally.setdefault(key, [0, 0])
        row[0] += 1
        row[1] += 0 if c["holds"] else 1
    for (g, p, check), (n, bad) in sorted(tally.items()):
        lines.append(f"| {g} | {p} | {check} | {n} | {bad} |")
    lines.append("")
    failed = [c for c in report.cases if not c["holds"]]
    if failed:
        lines.append("## FAILED cases (full ledgers)")
        lines.append("")
        for c in failed:
            lines.append(f"- {c['group']} p={c['prime']} {c.get('check')} "
                         f"block={c['block']['index']} T=Frob^{c['T_exponent']}: "
                         f"lhs={c['lhs']} rhs={c['rhs']}")
            for item in c["ledger"]:
                lines.append(f"    - {item['chain']} length {item['length']}: {item['count']}")
    lines.append("")
    return "\n".join(lines)


def census_fingerprint(values: tuple) -> str:
    return hashlib.sha256(repr(values).encode()).hexdigest()[:12]
