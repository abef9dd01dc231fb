"""Batch command line: every analysis as a subcommand.

Exit codes: 0 when the computation succeeded and every checked property
holds, 1 when a property fails (the report carries the witness), 2 on
input errors (bad syntax, bad flags, invalid structures).  Each
subcommand accepts --json; the JSON object carries every field of the
human report.
"""

from __future__ import annotations

import argparse
import json
import sys

from eventstruct import probability as PR
from eventstruct.cells import (
    Analyzer,
    check_cell_isomorphism,
    check_confusion,
    check_jump_free,
    check_locally_finite,
    check_pre_regular,
)
from eventstruct.errors import (
    EventStructError,
    NotRStoppedError,
    ParseError,
    PreconditionError,
    TruncatedStructureError,
    UnsafeNetError,
    ValidationError,
)
from eventstruct.formats import export_dot, parse_path, serialize
from eventstruct.nets import SafeNet, unfold_net
from eventstruct.prime import PrimeES
from eventstruct.stable import StableES, as_stable, check_conflict_driven, check_sensible
from eventstruct.translate import associated_es

__all__ = ["main"]


def _fmt(value):
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, frozenset):
        return "{" + ",".join(sorted(value)) + "}"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, dict):
        return "; ".join(f"{k}={_fmt(v)}" for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return " | ".join(_fmt(v) for v in value) if any(
            isinstance(v, dict) for v in value
        ) else " ".join(_fmt(v) for v in value)
    return str(value)


def _emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(_jsonable(report), indent=2, sort_keys=True))
        return
    for key, value in report.items():
        print(f"{key}: {_fmt(value)}")


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, frozenset):
        return sorted(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _config_arg(text: str) -> frozenset[str]:
    text = text.strip()
    if not text:
        return frozenset()
    return frozenset(t for t in (s.strip() for s in text.split(",")) if t)


def _load_structure(path: str):
    obj = parse_path(path)
    if isinstance(obj, SafeNet):
        raise ValidationError(
            f"{path!r} is a net; run 'unfold' first to obtain an event structure"
        )
    if isinstance(obj, dict):
        raise ValidationError(f"{path!r} is a distribution table, not a structure")
    return obj


def _load_dist(args, host):
    if args.uniform:
        return PR.attach_distributions(
            host, uniform=True, allow_truncated=args.allow_truncated
        )
    if args.dist:
        table = parse_path(args.dist)
        if not isinstance(table, dict):
            raise ValidationError(f"{args.dist!r} is not a distribution table")
        return PR.attach_distributions(
            host, table=table, allow_truncated=args.allow_truncated
        )
    raise ValidationError("pass --uniform or --dist FILE.prob")


def cmd_check(args) -> int:
    host = _load_structure(args.file)
    stable_view = host if isinstance(host, StableES) else as_stable(host)
    report: dict = {
        "structure": host.name,
        "kind": "ses" if isinstance(host, StableES) else "es",
        "events": len(host.events),
        "valid": True,
    }
    if isinstance(host, StableES) and host.dead_events:
        report["dead-events"] = list(host.dead_events)

    failures = 0
    sens = check_sensible(stable_view)
    report["sensible"] = sens.sensible
    if not sens.sensible:
        failures += 1
        report["sensible-pruned"] = list(sens.pruned)
        if sens.removed_events:
            report["sensible-removed-events"] = list(sens.removed_events)

    cd = check_conflict_driven(stable_view)
    report["conflict-driven"] = cd.conflict_driven
    if not cd.conflict_driven:
        failures += 1
        why = []
        if not cd.sensible:
            why.append(f"consistency not sensible (witness {_fmt(cd.unreachable_witness)})")
        if not cd.traced:
            f, _sel = cd.trace_witness
            why.append(f"inconsistent set {_fmt(f)} not traced to immediate conflicts")
        if not cd.persistent:
            a, b, v = cd.persistence_witness
            why.append(f"immediate conflict {a} {b} at {_fmt(v)} is not global")
        report["conflict-driven-why"] = why

    lf = check_locally_finite(host)
    report["locally-finite"] = lf.locally_finite
    if not lf.locally_finite:
        failures += 1
        report["locally-finite-uncovered"] = list(lf.uncovered)

    pr = check_pre_regular(host)
    report["pre-regular"] = pr.pre_regular
    report["max-enabled"] = pr.max_enabled

    jf = check_jump_free(host)
    report["jump-free"] = jf.jump_free
    if not jf.jump_free:
        failures += 1
        report["jump-witness"] = jf.witness.describe()

    # descriptive, not a pass/fail property: jump-free structures may
    # still contain confusion, which is what the cell machinery is for
    conf = check_confusion(host)
    report["confusion"] = conf.confusion
    if conf.confusion:
        report["confusion-reasons"] = list(conf.reasons)

    _emit(report, args.json)
    return 1 if failures else 0


def cmd_cells(args) -> int:
    host = _load_structure(args.file)
    an = Analyzer(host)
    v = _config_arg(args.at)
    try:
        cells = an.enabled_cells(v)
    except NotRStoppedError as exc:
        _emit({"structure": host.name, "at": v, "error": str(exc)}, args.json)
        return 1
    report = {
        "structure": host.name,
        "at": v,
        "cells": [
            {"events": c.events, "maximal": list(c.omega)} for c in cells
        ],
    }
    _emit(report, args.json)
    return 0


def cmd_cover(args) -> int:
    host = _load_structure(args.file)
    an = Analyzer(host)
    v = _config_arg(args.config)
    result = an.valid_decomposition(v)
    if hasattr(result, "steps"):
        report = {
            "structure": host.name,
            "configuration": v,
            "r-stopped": True,
            "steps": [
                {"cell": c.events, "choice": w} for c, w in result.steps
            ],
            "covering": [c.events for c in sorted(result.cells, key=lambda c: tuple(sorted(c.events)))],
        }
        _emit(report, args.json)
        return 0
    report = {
        "structure": host.name,
        "configuration": v,
        "r-stopped": False,
        "witness": result.describe(),
    }
    _emit(report, args.json)
    return 1


def cmd_translate(args) -> int:
    host = _load_structure(args.file)
    if not isinstance(host, StableES):
        raise ValidationError("translate expects a stable structure (.ses)")
    try:
        es, back = associated_es(host)
    except EventStructError as exc:
        _emit({"structure": host.name, "generable": False, "error": str(exc)}, args.json)
        return 1
    doc = serialize(es)
    report = {
        "structure": host.name,
        "generable": True,
        "events": len(es.events),
        "collapsed": sorted(
            {back.apply(p) for p in es.events if sum(back.apply(q) == back.apply(p) for q in es.events) > 1}
        ),
    }
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(doc)
        report["written"] = args.output
        _emit(report, args.json)
    elif args.json:
        report["document"] = doc
        _emit(report, args.json)
    else:
        sys.stdout.write(doc)
    return 0


def cmd_prob(args) -> int:
    host = _load_structure(args.file)
    lres = _load_dist(args, host)
    v = _config_arg(args.config)
    report: dict = {"structure": host.name, "configuration": v}
    code = 0
    try:
        report["likelihood"] = PR.likelihood(lres, v)
    except NotRStoppedError as exc:
        report["likelihood"] = None
        report["likelihood-note"] = str(exc)
        code = 1
    report["shadow"] = PR.shadow_probability(lres, v)
    if args.measure:
        report["measure"] = {
            "{" + ",".join(sorted(k)) + "}": p
            for k, p in sorted(PR.global_measure(lres).items(), key=lambda kv: tuple(sorted(kv[0])))
        }
    _emit(report, args.json)
    return code


def cmd_sample(args) -> int:
    host = _load_structure(args.file)
    lres = _load_dist(args, host)
    counts: dict[frozenset[str], int] = {}
    for i in range(args.runs):
        outcome, _trace = PR.sample_run(lres, args.seed + i)
        counts[outcome] = counts.get(outcome, 0) + 1
    report = {
        "structure": host.name,
        "runs": args.runs,
        "seed": args.seed,
        "counts": {
            "{" + ",".join(sorted(k)) + "}": n
            for k, n in sorted(counts.items(), key=lambda kv: tuple(sorted(kv[0])))
        },
    }
    _emit(report, args.json)
    return 0


def cmd_unfold(args) -> int:
    net = parse_path(args.file)
    if not isinstance(net, SafeNet):
        raise ValidationError("unfold expects a net (.net)")
    result = unfold_net(net, args.max_events)
    doc = serialize(result.es)
    report = {
        "net": net.name,
        "events": len(result.es.events),
        "truncated": result.truncated,
    }
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(doc)
        report["written"] = args.output
        _emit(report, args.json)
    elif args.json:
        report["document"] = doc
        _emit(report, args.json)
    else:
        sys.stdout.write(doc)
    return 0


def cmd_dot(args) -> int:
    obj = parse_path(args.file)
    if isinstance(obj, dict):
        raise ValidationError("dot export needs a structure or a net")
    at = _config_arg(args.at) if args.at is not None else None
    doc = export_dot(obj, at=at)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(doc)
        if args.json:
            _emit({"written": args.output}, True)
        else:
            print(f"written: {args.output}")
    else:
        sys.stdout.write(doc)
    return 0


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="eventstruct", description="event-structure analyses"
    )
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(fn=fn)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    p = add("check", cmd_check, help="validity and structural property summary")
    p.add_argument("file")

    p = add("cells", cmd_cells, help="branching cells enabled at a configuration")
    p.add_argument("file")
    p.add_argument("--at", default="", help="comma-separated event ids (default empty)")

    p = add("cover", cmd_cover, help="decompose a configuration into cells")
    p.add_argument("file")
    p.add_argument("--config", required=True, help="comma-separated event ids")

    p = add("translate", cmd_translate, help="stable structure to its associated ES")
    p.add_argument("file")
    p.add_argument("-o", "--output")

    p = add("prob", cmd_prob, help="likelihood and shadow probability")
    p.add_argument("file")
    p.add_argument("--config", required=True)
    p.add_argument("--dist", help="distribution file (.prob)")
    p.add_argument("--uniform", action="store_true")
    p.add_argument("--measure", action="store_true", help="print the full measure")
    p.add_argument("--allow-truncated", action="store_true")

    p = add("sample", cmd_sample, help="sample complete runs")
    p.add_argument("file")
    p.add_argument("--runs", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--dist")
    p.add_argument("--uniform", action="store_true")
    p.add_argument("--allow-truncated", action="store_true")

    p = add("unfold", cmd_unfold, help="bounded unfolding of a safe net")
    p.add_argument("file")
    p.add_argument("--max-events", type=int, required=True)
    p.add_argument("-o", "--output")

    p = add("dot", cmd_dot, help="Graphviz export")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--at", default=None, help="render cells enabled here as clusters")

    return top


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ValidationError, UnsafeNetError, TruncatedStructureError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PreconditionError, EventStructError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
