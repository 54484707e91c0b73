"""Command line front end. Every verdict comes from a library call; this layer only parses and prints."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .algebra import (
    EnumMode,
    SizeOutOfRange,
    check_law4,
    check_left_invertive,
    check_medial,
    check_paramedial,
    enumerate_la_semigroups,
    find_left_identities,
    intra_regular_witness,
    regular_witness,
)
from .crisp import IdealKind, ViolationReport, is_crisp
from .fuzzy import Cut, Thresholds, level, to_rat
from .ideals import PointDefMode, pointwise_violations, threshold_violations
from .lab import run_campaign
from .structio import (
    Format,
    ReportDocument,
    StructureFile,
    campaign_document,
    digest,
    emit_report,
    errata_for,
    parse_campaign_config,
    parse_structure,
    read_input,
    witness_dict,
)

REPORT_DIR_ENV = "LAFUZZY_REPORT_DIR"

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load(path: str) -> tuple[StructureFile, bytes]:
    try:
        data = read_input(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}") from None
    return parse_structure(data), data


def _subset_name(sf: StructureFile, name: str | None) -> str:
    if name is None:
        if len(sf.fuzzy_subsets) != 1:
            raise UsageError(f"--mu required; file has {sorted(sf.fuzzy_subsets) or 'no fuzzy subsets'}")
        return next(iter(sf.fuzzy_subsets))
    if name not in sf.fuzzy_subsets:
        raise UsageError(f"no fuzzy subset named {name!r}")
    return name


def _thresholds(sf: StructureFile, args) -> Thresholds:
    if args.gamma is not None or args.delta is not None:
        if args.gamma is None or args.delta is None:
            raise UsageError("--gamma and --delta go together")
        try:
            return Thresholds(args.gamma, args.delta)
        except ValueError as e:
            raise UsageError(str(e)) from None
    if args.thresholds is not None:
        if args.thresholds not in sf.thresholds:
            raise UsageError(f"no thresholds named {args.thresholds!r}")
        return sf.thresholds[args.thresholds]
    if len(sf.thresholds) == 1:
        return next(iter(sf.thresholds.values()))
    raise UsageError("give --gamma/--delta or --thresholds NAME")


def _rat_arg(s: str):
    try:
        return to_rat(s)
    except (ValueError, ZeroDivisionError, TypeError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {s!r}") from None


def _fail_entry(check: str, reports: list[ViolationReport], T, limit: int) -> dict:
    entry = {"check": check, "holds": not reports}
    if reports:
        entry["witness"] = witness_dict(reports[0], T)
        entry["violation_count"] = len(reports)
        if len(reports) > 1:
            entry["violations"] = [witness_dict(w, T) for w in reports[:limit]]
    return entry


# --- subcommands -------------------------------------------------------------

def cmd_check_table(args) -> ReportDocument:
    sf, data = _load(args.file)
    T = sf.table
    ids = find_left_identities(T)
    checks = []
    law_checks = (
        ("left-invertive", check_left_invertive, True),
        ("medial", check_medial, True),
        # both follow from the other laws once a left identity exists
        ("paramedial", check_paramedial, bool(ids)),
        ("law4", check_law4, bool(ids)),
    )
    for name, fn, required in law_checks:
        w = fn(T)
        entry = {"check": name, "holds": w is None or not required}
        if w is not None:
            entry["status"] = "FAIL" if required else "NO"
            entry["witness"] = {
                "elements": [T.labels[e] for e in w.elements],
                "lhs": T.labels[w.lhs],
                "rhs": T.labels[w.rhs],
            }
        checks.append(entry)
    checks.append({"check": "left-identities", "status": "INFO", "elements": sorted(T.labels[e] for e in ids)})
    irregular = [T.labels[a] for a in T.elements if regular_witness(T, a) is None]
    checks.append({"check": "regular", "status": "YES" if not irregular else "NO", "counterexamples": irregular})
    not_intra = [T.labels[a] for a in T.elements if intra_regular_witness(T, a) is None]
    checks.append({"check": "intra-regular", "status": "YES" if not not_intra else "NO", "counterexamples": not_intra})
    return ReportDocument("check-table", digest(data), checks, {"structure": sf.name, "order": T.n})


def _kinds(arg: str) -> list[IdealKind]:
    if arg == "all":
        return list(IdealKind)
    try:
        return [IdealKind(arg)]
    except ValueError:
        raise UsageError(f"unknown kind {arg!r}; choose from {[k.value for k in IdealKind]} or 'all'") from None


def cmd_check_crisp(args) -> ReportDocument:
    sf, data = _load(args.file)
    labels = [s for s in args.subset.split(",") if s] if args.subset else []
    A = sf.subset(labels)
    checks = []
    for kind in _kinds(args.kind):
        w = is_crisp(sf.table, A, kind)
        checks.append(_fail_entry(kind.value, [w] if w else [], sf.table, args.max_witnesses))
    ctx = {"structure": sf.name, "subset": sorted(labels, key=sf.table.labels.index)}
    return ReportDocument("check-crisp", digest(data), checks, ctx)


def cmd_check_fuzzy(args) -> ReportDocument:
    sf, data = _load(args.file)
    name = _subset_name(sf, args.mu)
    mu, th = sf.fuzzy_subsets[name], _thresholds(sf, args)
    checks = []
    for kind in _kinds(args.kind):
        if args.mode == "threshold":
            found = list(threshold_violations(sf.table, mu, th, kind))
        else:
            found = list(pointwise_violations(sf.table, mu, th, kind, args.hypothesis))
        checks.append(_fail_entry(kind.value, found, sf.table, args.max_witnesses))
    ctx = {
        "structure": sf.name,
        "fuzzy_subset": name,
        "gamma": th.gamma,
        "delta": th.delta,
        "mode": args.mode if args.mode == "threshold" else f"pointwise/{args.hypothesis}",
    }
    kinds = [c["check"] for c in checks]
    return ReportDocument("check-fuzzy", digest(data), checks, ctx, errata_for(sf.name, kinds))


def cmd_level_sets(args) -> ReportDocument:
    sf, data = _load(args.file)
    name = _subset_name(sf, args.mu)
    mu = sf.fuzzy_subsets[name]
    cut = Cut(args.cut)
    if cut is Cut.UPPER and args.gamma is None and args.thresholds is None and not sf.thresholds:
        th = Thresholds(0, 1)
    else:
        th = _thresholds(sf, args)
    S = level(mu, th, args.r, cut)
    members = [sf.table.labels[x] for x in sorted(S)]
    ctx = {"structure": sf.name, "fuzzy_subset": name, "gamma": th.gamma, "delta": th.delta, "r": to_rat(args.r), "cut": cut.value}
    checks = [{"check": "level-set", "status": "INFO", "elements": members}]
    return ReportDocument("level-sets", digest(data), checks, ctx)


def cmd_enumerate(args, out) -> int:
    mode = EnumMode.UP_TO_ISO if args.up_to_iso else EnumMode.ALL
    try:
        tables = enumerate_la_semigroups(args.order, mode)
        count = 0
        for T in tables:
            count += 1
            if args.format == "json":
                out.write(json.dumps({"index": count, "elements": list(T.labels),
                                      "table": [[T.labels[v] for v in row] for row in T.op]}) + "\n")
            else:
                out.write(f"# table {count}\n{T}\n\n")
            out.flush()
    except SizeOutOfRange as e:
        raise UsageError(str(e)) from None
    if args.format != "json":
        out.write(f"count: {count}\n")
    return EXIT_OK


def cmd_verify_theorems(args) -> ReportDocument:
    try:
        data = Path(args.config).read_bytes()
    except OSError as e:
        raise UsageError(f"cannot read {args.config}: {e.strerror or e}") from None
    cfg = parse_campaign_config(data)
    start = time.perf_counter()
    report = run_campaign(cfg, workers=args.workers)
    doc = campaign_document(report, digest(data))
    if args.timing:
        doc.timing = {"seconds": round(time.perf_counter() - start, 3)}
    return doc


# --- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lafuzzy", description="Decide crisp and fuzzy ideal classes of finite LA-semigroups.")
    p.add_argument("--version", action="version", version=f"lafuzzy {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, needs_file=True):
        if needs_file:
            sp.add_argument("file", help="structure JSON file, or the name of a bundled fixture")
        sp.add_argument("--format", choices=[f.value for f in Format], default="text")
        sp.add_argument("--out", help="also write the report to this file")

    def thresholds(sp):
        sp.add_argument("--gamma", type=_rat_arg)
        sp.add_argument("--delta", type=_rat_arg)
        sp.add_argument("--thresholds", help="named threshold pair from the file")
        sp.add_argument("--mu", help="named fuzzy subset from the file")

    sp = sub.add_parser("check-table", help="law verdicts for a Cayley table")
    common(sp)

    sp = sub.add_parser("check-crisp", help="crisp ideal classes of a subset")
    common(sp)
    sp.add_argument("--subset", required=True, help="comma separated element labels")
    sp.add_argument("--kind", default="all")
    sp.add_argument("--max-witnesses", type=int, default=50)

    sp = sub.add_parser("check-fuzzy", help="(in_gamma, in_gamma or q_delta)-fuzzy ideal classes")
    common(sp)
    thresholds(sp)
    sp.add_argument("--kind", default="all")
    sp.add_argument("--mode", choices=["threshold", "pointwise"], default="threshold")
    sp.add_argument("--hypothesis", choices=[m.value for m in PointDefMode], default=PointDefMode.IN_GAMMA.value)
    sp.add_argument("--max-witnesses", type=int, default=50)

    sp = sub.add_parser("level-sets", help="print a level cut of a fuzzy subset")
    common(sp)
    thresholds(sp)
    sp.add_argument("--r", type=_rat_arg, required=True)
    sp.add_argument("--cut", choices=[c.value for c in Cut], default=Cut.COMBINED.value)

    sp = sub.add_parser("enumerate", help="stream all LA-semigroups of an order")
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--up-to-iso", action="store_true")
    sp.add_argument("--format", choices=[f.value for f in Format], default="text")

    sp = sub.add_parser("verify-theorems", help="run a verification campaign")
    common(sp, needs_file=False)
    sp.add_argument("--config", required=True)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--timing", action="store_true", help="add wall-clock time (makes reports non-reproducible)")
    return p


_COMMANDS = {
    "check-table": cmd_check_table,
    "check-crisp": cmd_check_crisp,
    "check-fuzzy": cmd_check_fuzzy,
    "level-sets": cmd_level_sets,
    "verify-theorems": cmd_verify_theorems,
}


def _write_outputs(doc: ReportDocument, args, out) -> None:
    payload = emit_report(doc, args.format)
    out.write(payload.decode("utf-8"))
    if args.out:
        Path(args.out).write_bytes(payload)
    report_dir = os.environ.get(REPORT_DIR_ENV)
    if report_dir:
        d = Path(report_dir)
        d.mkdir(parents=True, exist_ok=True)
        stem = f"{doc.command}-{doc.input_digest.split(':')[-1][:12]}"
        (d / f"{stem}.json").write_bytes(emit_report(doc, Format.JSON))


def cli_main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "enumerate":
            return cmd_enumerate(args, out)
        doc = _COMMANDS[args.command](args)
        _write_outputs(doc, args, out)
        return EXIT_OK if doc.ok else EXIT_FAILED
    except SystemExit as e:  # --help / --version
        return EXIT_OK if not e.code else EXIT_USAGE
    except (UsageError, ValueError) as e:  # parse, precondition and range errors
        err.write(f"error: {e}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli_main())
