"""JSON structure files and report documents."""

from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from . import __version__
from .algebra import CayleyTable
from .crisp import ViolationReport
from .fuzzy import FuzzySubset, Thresholds, fmt
from .lab import CampaignConfig, CampaignReport

FIXTURES = (
    "example_subsemigroup.json",
    "example_left_ideal.json",
    "example_generalized_bi.json",
    "example_quasi.json",
)


class StructureError(ValueError):
    """Invalid structure document; ``path`` locates the offending node."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
        self.message = message


@dataclass
class StructureFile:
    name: str
    table: CayleyTable
    fuzzy_subsets: dict[str, FuzzySubset] = field(default_factory=dict)
    thresholds: dict[str, Thresholds] = field(default_factory=dict)

    @property
    def elements(self) -> tuple[str, ...]:
        return self.table.labels

    def subset(self, labels) -> frozenset[int]:
        out = set()
        for lab in labels:
            if lab not in self.table.labels:
                raise StructureError("subset", f"unknown element label {lab!r}")
            out.add(self.table.labels.index(lab))
        return frozenset(out)


def _no_duplicate_keys(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise StructureError("", f"duplicate name {k!r}")
        out[k] = v
    return out


def _rat(value: Any, path: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise StructureError(path, f"expected a string like '7/20' or '0.35', got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise StructureError(path, f"not an exact rational: {value!r}") from None


def _grade(value: Any, path: str) -> Fraction:
    g = _rat(value, path)
    if not 0 <= g <= 1:
        raise StructureError(path, f"grade {fmt(g)} outside [0, 1]")
    return g


def parse_structure(data: bytes | str) -> StructureFile:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise StructureError("", f"input is not UTF-8: {e}") from None
    try:
        doc = json.loads(data, object_pairs_hook=_no_duplicate_keys)
    except json.JSONDecodeError as e:
        raise StructureError(f"line {e.lineno} column {e.colno}", e.msg) from None
    if not isinstance(doc, dict):
        raise StructureError("", "top level must be an object")
    unknown = set(doc) - {"name", "elements", "table", "fuzzy_subsets", "thresholds"}
    if unknown:
        raise StructureError(sorted(unknown)[0], "unknown field")

    name = doc.get("name", "")
    if not isinstance(name, str):
        raise StructureError("name", "must be a string")

    labels = doc.get("elements")
    if not isinstance(labels, list) or not labels:
        raise StructureError("elements", "need a nonempty list of labels")
    for i, lab in enumerate(labels):
        if not isinstance(lab, str) or not lab:
            raise StructureError(f"elements[{i}]", f"malformed label {lab!r}")
    seen = set()
    for i, lab in enumerate(labels):
        if lab in seen:
            raise StructureError(f"elements[{i}]", f"duplicate name {lab!r}")
        seen.add(lab)
    n = len(labels)
    index = {lab: i for i, lab in enumerate(labels)}

    rows = doc.get("table")
    if not isinstance(rows, list) or len(rows) != n:
        raise StructureError("table", f"non-square table: need {n} rows")
    op = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise StructureError(f"table[{i}]", f"non-square table: need {n} entries")
        out = []
        for j, v in enumerate(row):
            if not isinstance(v, str) or v not in index:
                raise StructureError(f"table[{i}][{j}]", f"malformed label {v!r}")
            out.append(index[v])
        op.append(tuple(out))
    table = CayleyTable(tuple(op), tuple(labels))

    subsets = {}
    raw = doc.get("fuzzy_subsets", {})
    if not isinstance(raw, dict):
        raise StructureError("fuzzy_subsets", "must be an object of name -> {label: grade}")
    for sname, grades in raw.items():
        base = f"fuzzy_subsets.{sname}"
        if not isinstance(grades, dict):
            raise StructureError(base, "must map every label to a grade")
        for lab in grades:
            if lab not in index:
                raise StructureError(f"{base}.{lab}", f"malformed label {lab!r}")
        missing = [lab for lab in labels if lab not in grades]
        if missing:
            raise StructureError(base, f"missing grade for {missing[0]!r}")
        subsets[sname] = FuzzySubset(table, [_grade(grades[lab], f"{base}.{lab}") for lab in labels])

    ths = {}
    raw = doc.get("thresholds", {})
    if not isinstance(raw, dict):
        raise StructureError("thresholds", "must be an object of name -> [gamma, delta]")
    for tname, pair in raw.items():
        base = f"thresholds.{tname}"
        if not isinstance(pair, list) or len(pair) != 2:
            raise StructureError(base, "need [gamma, delta]")
        g, d = _rat(pair[0], base + "[0]"), _rat(pair[1], base + "[1]")
        try:
            ths[tname] = Thresholds(g, d)
        except ValueError as e:
            raise StructureError(base, str(e)) from None
    return StructureFile(name, table, subsets, ths)


def structure_to_dict(sf: StructureFile) -> dict:
    labels = list(sf.table.labels)
    return {
        "name": sf.name,
        "elements": labels,
        "table": [[labels[v] for v in row] for row in sf.table.op],
        "fuzzy_subsets": {
            k: {labels[i]: fmt(g) for i, g in enumerate(mu.grades)} for k, mu in sf.fuzzy_subsets.items()
        },
        "thresholds": {k: [fmt(t.gamma), fmt(t.delta)] for k, t in sf.thresholds.items()},
    }


def dump_structure(sf: StructureFile) -> bytes:
    return (json.dumps(structure_to_dict(sf), indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def load_structure(path: str | Path) -> StructureFile:
    return parse_structure(read_input(path))


def read_input(path: str | Path) -> bytes:
    """Read a file; bare names of bundled fixtures resolve to the packaged copies."""
    p = Path(path)
    if not p.exists() and p.name in FIXTURES and str(p) == p.name:
        return resources.files("lafuzzy").joinpath("data", p.name).read_bytes()
    return p.read_bytes()


def bundled(name: str) -> StructureFile:
    return parse_structure(resources.files("lafuzzy").joinpath("data", name).read_bytes())


# Known discrepancies between a bundled example's stated claims and what the
# deciders compute, keyed by fixture name and the ideal kind they concern.
FIXTURE_ERRATA = {
    ("example_generalized_bi", "generalized-bi"): (
        "stated failure point 2_{3/5} is q-coincident with mu at delta=1/2 (1/2 + 3/5 > 1), "
        "and (as)b is always 2 on this table, so mu passes both the (0, 1/2) and the classic generalized-bi check"
    ),
    ("example_generalized_bi", "bi"): (
        "the (0, 1/2) and classic bi-ideal failures come from the subsemigroup condition at (1, 1): "
        "1*1 = 3 and mu(3) = 7/20 < 2/5"
    ),
    ("example_subsemigroup", "subsemigroup"): (
        "the pair (2, 3) fails at (0, 1/2) for every point value s in (3/10, 7/10], 3/5 included; "
        "the first failing pair in lexicographic order is (1, 1)"
    ),
}


def errata_for(name: str, kinds) -> list[str]:
    return [FIXTURE_ERRATA[(name, k)] for k in kinds if (name, k) in FIXTURE_ERRATA]


# --- reports -------------------------------------------------------------

class Format(enum.Enum):
    TEXT = "text"
    JSON = "json"


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


@dataclass
class ReportDocument:
    command: str
    input_digest: str
    checks: list[dict] = field(default_factory=list)
    context: dict = field(default_factory=dict)
    errata: list[str] = field(default_factory=list)
    timing: dict | None = None
    tool_version: str = __version__

    @property
    def ok(self) -> bool:
        return all(c.get("holds", True) for c in self.checks)


def witness_dict(w: ViolationReport | None, T: CayleyTable) -> dict | None:
    if w is None:
        return None
    out = {"condition": w.condition, "elements": [T.labels[e] for e in w.elements]}
    if w.product is not None:
        out["product"] = T.labels[w.product]
    if w.values:
        out["values"] = dict(w.values)
    return out


def _jsonable(v):
    if isinstance(v, Fraction):
        return fmt(v)
    if isinstance(v, enum.Enum):
        return v.value
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def report_to_dict(doc: ReportDocument) -> dict:
    out = {
        "tool_version": doc.tool_version,
        "command": doc.command,
        "input_digest": doc.input_digest,
        "ok": doc.ok,
        "context": _jsonable(doc.context),
        "checks": _jsonable(doc.checks),
        "errata": list(doc.errata),
    }
    if doc.timing is not None:
        out["timing"] = _jsonable(doc.timing)
    return out


def _text_witness(w: dict) -> str:
    out = w.get("condition", "")
    if "elements" in w:
        out += " (" + ", ".join(str(e) for e in w["elements"]) + ")"
    if "product" in w:
        out += " -> " + str(w["product"])
    if "lhs" in w:
        out += f" lhs={w['lhs']} rhs={w['rhs']}"
    if w.get("values"):
        out += " " + " ".join(f"{k}={_text_value(x)}" for k, x in w["values"].items())
    return out.strip()


def _text_value(v) -> str:
    if isinstance(v, dict) and "elements" in v:
        return _text_witness(v)
    if isinstance(v, Fraction):
        s = fmt(v)
        return s if v.denominator == 1 else f"{s} (~{float(v):.4g})"
    if isinstance(v, dict):
        return ", ".join(f"{k}={_text_value(x)}" for k, x in v.items())
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_text_value(x) for x in v) + "]"
    if isinstance(v, enum.Enum):
        return v.value
    return str(v)


def emit_report(doc: ReportDocument, format: Format | str = Format.JSON) -> bytes:
    """Serialize deterministically; rationals are exact fractions, decimals only as text annotations."""
    format = Format(format)
    if format is Format.JSON:
        return (json.dumps(report_to_dict(doc), indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    lines = [f"lafuzzy {doc.tool_version} {doc.command}", f"input {doc.input_digest}"]
    for k, v in doc.context.items():
        lines.append(f"{k}: {_text_value(v)}")
    for c in doc.checks:
        status = c.get("status") or ("PASS" if c.get("holds", True) else "FAIL")
        rest = {k: v for k, v in c.items() if k not in ("check", "holds", "status", "violations", "counterexamples")}
        line = f"[{status}] {c['check']}"
        if rest:
            line += ": " + "; ".join(f"{k}: {_text_value(v)}" for k, v in rest.items())
        lines.append(line)
        for key in ("violations", "counterexamples"):
            items = c.get(key)
            if not items:
                continue
            if all(isinstance(x, str) for x in items):
                lines.append(f"    {key}: " + ", ".join(items))
            else:
                lines.extend(f"    {key[:-1]}: {_text_value(x)}" for x in items)
    for e in doc.errata:
        lines.append(f"erratum: {e}")
    if doc.timing is not None:
        lines.append("timing: " + _text_value(doc.timing))
    return ("\n".join(lines) + "\n").encode("utf-8")


# --- campaign configs and reports ------------------------------------------

_CONFIG_FIELDS = {
    "orders", "table_mode", "grade_denominator", "mu_samples", "threshold_samples", "seed", "theorems",
    "tables_per_order", "families_per_table", "implication_samples", "attempt_cap", "min_instances",
    "validate_enumeration",
}


def parse_campaign_config(data: bytes | str) -> CampaignConfig:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data, object_pairs_hook=_no_duplicate_keys)
    except json.JSONDecodeError as e:
        raise StructureError(f"line {e.lineno} column {e.colno}", e.msg) from None
    if not isinstance(doc, dict):
        raise StructureError("", "config must be an object")
    for k in doc:
        if k not in _CONFIG_FIELDS:
            raise StructureError(k, "unknown config field")
    kw = dict(doc)
    if "threshold_samples" in kw:
        pairs = kw["threshold_samples"]
        if not isinstance(pairs, list):
            raise StructureError("threshold_samples", "need a list of [gamma, delta]")
        ths = []
        for i, pair in enumerate(pairs):
            base = f"threshold_samples[{i}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise StructureError(base, "need [gamma, delta]")
            try:
                ths.append(Thresholds(_rat(pair[0], base + "[0]"), _rat(pair[1], base + "[1]")))
            except StructureError:
                raise
            except ValueError as e:
                raise StructureError(base, str(e)) from None
        kw["threshold_samples"] = ths
    for k in ("grade_denominator", "mu_samples", "seed", "tables_per_order", "families_per_table",
              "implication_samples", "attempt_cap", "min_instances"):
        if k in kw and (isinstance(kw[k], bool) or not isinstance(kw[k], int)):
            raise StructureError(k, "must be an integer")
    if "orders" in kw and (not isinstance(kw["orders"], list) or not all(type(n) is int for n in kw["orders"])):
        raise StructureError("orders", "need a list of integers")
    try:
        return CampaignConfig(**kw)
    except ValueError as e:
        raise StructureError("", str(e)) from None


def config_to_dict(cfg: CampaignConfig) -> dict:
    return {
        "orders": list(cfg.orders),
        "table_mode": cfg.table_mode.value,
        "grade_denominator": cfg.grade_denominator,
        "mu_samples": cfg.mu_samples,
        "threshold_samples": [[fmt(t.gamma), fmt(t.delta)] for t in cfg.threshold_samples],
        "seed": cfg.seed,
        "theorems": [t.value for t in cfg.theorems],
        "tables_per_order": cfg.tables_per_order,
        "families_per_table": cfg.families_per_table,
        "implication_samples": cfg.implication_samples,
        "attempt_cap": cfg.attempt_cap,
        "min_instances": cfg.min_instances,
        "validate_enumeration": cfg.validate_enumeration,
    }


def campaign_document(report: CampaignReport, input_digest: str, max_counterexamples: int = 20) -> ReportDocument:
    checks = []
    for tid in report.config.theorems:
        t = report.tallies[tid]
        entry = {"check": tid.value, "holds": t.failed == 0, "passed": t.passed, "vacuous": t.vacuous, "failed": t.failed}
        cex = [c for c in report.counterexamples if c.theorem is tid][:max_counterexamples]
        if cex:
            entry["counterexamples"] = [
                {
                    "table": [[c.table.labels[v] for v in row] for row in c.table.op],
                    "thresholds": None if c.thresholds is None else [fmt(c.thresholds.gamma), fmt(c.thresholds.delta)],
                    "kind": c.kind,
                    "grades": [fmt(g) for g in c.grades],
                    "detail": c.detail,
                    "witness": witness_dict(c.witness, c.table),
                }
                for c in cex
            ]
        checks.append(entry)
    context = {
        "config": config_to_dict(report.config),
        "tables_by_order": {str(n): k for n, k in report.tables.items()},
        "warnings": list(report.warnings),
    }
    return ReportDocument("verify-theorems", input_digest, checks, context)
