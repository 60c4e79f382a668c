"""Versioned reports: JSON (canonical, byte-stable) and plain text."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import metadata

from .homology import BettiReport, BlockResult, Caps

SCHEMA = "dcrit-report/1"
ENGINE = "dcrit"


def engine_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0.0.0"


@dataclass
class Report:
    provenance: dict
    tasks: list = field(default_factory=list)
    schema: str = SCHEMA

    @classmethod
    def new(cls, spec_name: str, spec_sha256: str, exact: bool = True) -> Report:
        prov = {
            "engine": ENGINE,
            "version": engine_version(),
            "spec": spec_name,
            "spec_sha256": spec_sha256,
            "mode": "exact" if exact else "truncated",
        }
        return cls(prov)

    def add(self, name: str, options: dict, result: dict):
        opts = {k: str(v) for k, v in sorted(options.items()) if v is not None and k != "jobs"}
        self.tasks.append({"task": name, "options": opts, "result": result})

    def to_dict(self) -> dict:
        return {"schema": self.schema, "provenance": self.provenance, "tasks": self.tasks}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> Report:
        data = json.loads(text)
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {data.get('schema')!r}")
        return cls(data["provenance"], data["tasks"], data["schema"])

    def betti_reports(self) -> list[BettiReport]:
        return [betti_from_dict(t["result"]) for t in self.tasks if t["task"] == "cohomology"]

    def to_text(self) -> str:
        p = self.provenance
        lines = [f"{SCHEMA}  {p['engine']} {p['version']}  mode={p['mode']}",
                 f"spec {p['spec']}  sha256 {p['spec_sha256']}"]
        for t in self.tasks:
            opts = " ".join(f"{k}={v}" for k, v in t["options"].items())
            lines.append("")
            lines.append(f"== {t['task']} {opts}".rstrip())
            lines += TEXT[t["task"]](t["result"])
        return "\n".join(lines) + "\n"


def betti_from_dict(d: dict) -> BettiReport:
    caps = None if d["caps"] is None else Caps(d["caps"]["poly"], d["caps"]["word"])
    blocks = [BlockResult(b["degree"], b["weight"], b["dim"], b["rank_in"], b["rank_out"], b["betti"],
                          b.get("representatives"), list(b["flags"])) for b in d["blocks"]]
    return BettiReport(d["complex"], d["mode"], tuple(d["degrees"]), tuple(d["weights"]),
                       blocks, list(d["omissions"]), caps)


def _checks(result: dict) -> list[str]:
    out = [f"ok: {result['ok']}"]
    for c in result["checks"]:
        line = f"  [{'pass' if c['ok'] else 'FAIL'}] {c['check']}: {c['detail']}"
        if c["witness"] and not c["ok"]:
            line += f"  witness: {c['witness']}"
        out.append(line)
    return out


def _build(result: dict) -> list[str]:
    out = [f"group {result['group']}, Lie algebra of dimension {result['lie_dimension']}",
           f"f = {result['function']}"]
    for label, m in result["models"].items():
        out.append(f"  {label}: {m['name']}")
        for g in m["generators"]:
            out.append(f"    {g['name']:>8}  deg {g['degree']:>2}  wt {g['weight']:>2}  d = {g['d']}")
    return out


def _cohomology(result: dict) -> list[str]:
    out = [f"complex {result['complex']}  mode {result['mode']}  degrees {result['degrees']}  "
           f"weights {result['weights']}"]
    ws = list(range(result["weights"][0], result["weights"][1] + 1))
    table = {(b["degree"], b["weight"]): b for b in result["blocks"]}
    out.append("  deg \\ wt " + " ".join(f"{w:>4}" for w in ws) + "  total")
    for k in range(result["degrees"][0], result["degrees"][1] + 1):
        cells = []
        for w in ws:
            b = table.get((k, w))
            cells.append(f"{'-' if b is None else b['betti']:>4}" + ("*" if b and b["flags"] else ""))
        out.append(f"  {k:>8} " + " ".join(cells) + f"  {result['totals'][str(k)]:>5}")
    for b in result["blocks"]:
        for r in b.get("representatives") or []:
            out.append(f"  rep ({b['degree']},{b['weight']}): {r}")
    if any(b["flags"] for b in result["blocks"]):
        out.append("  * unverified boundary")
    for o in result["omissions"]:
        out.append(f"  omitted ({o['degree']},{o['weight']}): {o.get('reason', '')}")
    return out


def _compare(result: dict) -> list[str]:
    out = ["  deg  dcrit  bv  rank  iso"]
    for k, t in result["totals"].items():
        out.append(f"  {k:>3}  {t['dcrit']:>5}  {t['bv']:>2}  {t['rank']:>4}  {t['iso']}")
    out.append(f"quasi-isomorphism in range: {result['quasi_isomorphism']}")
    return out


def _symplectic(result: dict) -> list[str]:
    out = _checks(result)
    out.append(f"omega = {result['omega']}")
    dirs = result["pairing"]["directions"]
    out.append("pairing over " + (", ".join(dirs) if dirs else "no directions"))
    for row in result["pairing"]["matrix"]:
        out.append("  " + " ".join(f"{c:>4}" for c in row))
    return out


TEXT = {
    "validate": _checks,
    "build": _build,
    "cohomology": _cohomology,
    "vanest-compare": _compare,
    "symplectic-check": _symplectic,
}
