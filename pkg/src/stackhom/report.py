"""Report records shared by the theory and equivariant computations."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .linalg import Coefficients, ExactMatrix, GradedModulePresentation

__all__ = ["Check", "TheoryReport", "degree_label"]


_LABELS = {
    "chains": ("H_", 1),
    "cochains": ("H^", -1),
    "borel-moore": ("H^BM_", 1),
    "compact-cochains": ("H^{}_c", -1),
    "equivariant": ("H^G_", 1),
    "equivariant-bm": ("H^BM,G_", 1),
    "stack-chains": ("H_", 1),
}


def degree_label(theory: str, degree: int) -> str:
    """Printed name of a group: cohomological theories flip the sign of the degree."""
    prefix, sign = _LABELS.get(theory, ("H_", 1))
    k = sign * degree
    if "{}" in prefix:
        return prefix.format(k)
    return f"{prefix}{k}"


@dataclass
class Check:
    """One pass/fail verdict, optionally tied to a degree, with witness data."""

    name: str
    passed: bool
    degree: int | None = None
    witness: dict[str, Any] = field(default_factory=dict)

    def line(self) -> str:
        where = f" [{self.degree}]" if self.degree is not None else ""
        wit = ", ".join(f"{k}={_plain(v)}" for k, v in sorted(self.witness.items()))
        tail = f" ({wit})" if wit else ""
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}{where}{tail}"


def _plain(v):
    if isinstance(v, ExactMatrix):
        return v.to_dense()
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, Coefficients):
        return v.label
    return v


@dataclass
class TheoryReport:
    """Deterministic record of one computation or verification."""

    kind: str
    theory: str
    coefficients: Coefficients
    groups: GradedModulePresentation | None = None
    digest: str = ""
    checks: list[Check] = field(default_factory=list)
    tables: dict[str, tuple[str, GradedModulePresentation]] = field(default_factory=dict)
    matrices: dict[str, ExactMatrix] = field(default_factory=dict)
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(ch.passed for ch in self.checks)

    def add(self, name: str, passed: bool, degree: int | None = None, **witness) -> Check:
        ch = Check(name, bool(passed), degree, witness)
        self.checks.append(ch)
        return ch

    def group_lines(self, theory: str | None = None, groups: GradedModulePresentation | None = None,
                    show_zero: bool = False) -> list[str]:
        theory = theory or self.theory
        groups = groups if groups is not None else self.groups
        if groups is None:
            return []
        c = groups.coefficients
        degrees = groups.degrees() if show_zero else groups.nonzero_degrees()
        order = sorted(degrees, key=lambda k: (_LABELS.get(theory, ("", 1))[1] * k))
        return [f"{degree_label(theory, k)} = {groups[k].describe(c)}" for k in order]

    def text_lines(self) -> list[str]:
        out = []
        if self.digest:
            out.append(f"input: {self.digest}")
        out.append(f"coefficients: {self.coefficients.label}")
        show_zero = bool(self.meta.get("show_zero"))
        lines = self.group_lines(show_zero=show_zero)
        if self.groups is not None and not lines:
            lines = ["(all groups zero)"]
        out.extend(lines)
        for title, (theory, pres) in self.tables.items():
            out.append(f"{title}:")
            sub = self.group_lines(theory, pres, show_zero=True)
            out.extend("  " + s for s in sub)
        for k in sorted(self.meta):
            if k in ("show_zero",):
                continue
            v = self.meta[k]
            if k == "note":
                out.append(str(v))
            else:
                out.append(f"{k}: {_plain(v)}")
        out.extend(ch.line() for ch in self.checks)
        if self.checks:
            out.append(f"verdict: {'PASS' if self.passed else 'FAIL'}")
        return out

    def records(self) -> list[dict]:
        recs = [{"record": "header", "kind": self.kind, "theory": self.theory,
                 "coefficients": self.coefficients.label, "input": self.digest}]
        if self.groups is not None:
            for k in self.groups.degrees():
                g = self.groups[k]
                recs.append({"record": "group", "table": "main", "degree": k,
                             "label": degree_label(self.theory, k),
                             "free_rank": g.free_rank, "torsion": list(g.torsion)})
        for title, (theory, pres) in self.tables.items():
            for k in pres.degrees():
                g = pres[k]
                recs.append({"record": "group", "table": title, "degree": k,
                             "label": degree_label(theory, k),
                             "free_rank": g.free_rank, "torsion": list(g.torsion)})
        for k in sorted(self.meta):
            if k == "show_zero":
                continue
            recs.append({"record": "meta", "key": k, "value": _plain(self.meta[k])})
        for ch in self.checks:
            recs.append({"record": "check", "name": ch.name, "degree": ch.degree,
                         "passed": ch.passed, "witness": _plain(ch.witness)})
        if self.checks:
            recs.append({"record": "verdict", "passed": self.passed})
        return recs

    def records_text(self) -> str:
        return "".join(json.dumps(r, sort_keys=True, ensure_ascii=False) + "\n" for r in self.records())
