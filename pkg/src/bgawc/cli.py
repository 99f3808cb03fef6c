"""Command line interface: block census, chain census, identity verification,
and full corpus reports.

Exit codes: 0 all checks passed, 1 at least one identity or oracle failed,
2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import linalg as la
from .chains import DEFAULT_CHAIN_GUARD, DEFAULT_POSET_GUARD
from .corpus import CorpusEntry, default_corpus, parse_group
from .errors import BgawcError, ParseError
from .groups import DEFAULT_ORDER_GUARD
from .pipeline import DEFAULT_CHOP_BUDGET, World
from .report import emit_json, emit_markdown, render_markdown
from .runner import RunConfig, run_corpus


def _add_common(p: argparse.ArgumentParser, need_group: bool):
    if need_group:
        p.add_argument("--group", required=True,
                       help="builtin name ('symmetric 4', 'C7', 'cyclic 3 x symmetric 3') "
                            "or a group file path")
        p.add_argument("--prime", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-order", type=int, default=DEFAULT_ORDER_GUARD)
    p.add_argument("--json", dest="json_path", default=None, metavar="PATH")
    p.add_argument("--markdown", dest="markdown_path", default=None, metavar="PATH")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bgawc",
        description="Exact verification of Galois-refined weight-counting identities "
                    "for blocks of modular group algebras.")
    sub = ap.add_subparsers(dest="command", required=True)

    p_blocks = sub.add_parser("blocks", help="block census for one group and prime")
    _add_common(p_blocks, True)

    p_chains = sub.add_parser("chains", help="chain-orbit census for one group and prime")
    _add_common(p_chains, True)
    p_chains.add_argument("--family", choices=["all", "normal", "both"], default="both")

    p_verify = sub.add_parser("verify", help="run every identity for one group and prime")
    _add_common(p_verify, True)
    p_verify.add_argument("--family", choices=["all", "normal", "both"], default="both")

    p_report = sub.add_parser("report", help="run the default corpus and emit reports")
    _add_common(p_report, False)
    p_report.add_argument("--group", default=None,
                          help="restrict the corpus to a single builtin/file group")
    p_report.add_argument("--prime", type=int, default=None,
                          help="restrict to one prime (requires --group)")
    p_report.add_argument("--family", choices=["all", "normal", "both"], default="both")
    p_report.add_argument("--workers", type=int, default=None)

    return ap


def _world(args) -> World:
    G = parse_group(args.group, order_guard=args.max_order)
    return World(G, args.prime, seed=args.seed)


def cmd_blocks(args) -> int:
    w = _world(args)
    rows = []
    for b in w.data.blocks:
        rows.append({"index": b.index, "defect": b.defect,
                     "min_field_degree": b.minimal_field_degree,
                     "support_size": b.support_size(),
                     "ibr_count": len(w.data.ibr_indices(b.coords))})
    out = {"group": w.group.name, "order": w.group.order, "prime": w.prime,
           "field": f"GF({w.field.p}^{w.field.degree})", "blocks": rows,
           "p_regular_classes": len(w.data.p_regular)}
    text = json.dumps(out, indent=1, sort_keys=True)
    print(text)
    if args.json_path:
        with open(args.json_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0


def cmd_chains(args) -> int:
    w = _world(args)
    fams = ["all", "normal"] if args.family == "both" else [args.family]
    out = {"group": w.group.name, "order": w.group.order, "prime": w.prime,
           "p_subgroups": len(w.poset().subgroups),
           "p_subgroup_orbits": len(w.poset().orbit_reps), "families": {}}
    for fam in fams:
        reps = w.chains(fam)
        out["families"][fam] = {
            "orbit_reps": len(reps),
            "total_chains": sum(w.group.order // c.stabilizer.order for c in reps),
            "reps": [{"chain": c.short_label(), "length": c.length,
                      "stabilizer_order": c.stabilizer.order} for c in reps],
        }
    text = json.dumps(out, indent=1, sort_keys=True)
    print(text)
    if args.json_path:
        with open(args.json_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0


def _config_from(args, entries) -> RunConfig:
    fams = ("all", "normal") if getattr(args, "family", "both") == "both" \
        else (args.family,)
    return RunConfig(entries=entries, seed=args.seed, max_order=args.max_order,
                     families=fams, workers=getattr(args, "workers", None))


def cmd_verify(args) -> int:
    entry = CorpusEntry(args.group, args.group, primes=(args.prime,))
    config = _config_from(args, [entry])
    report = run_corpus(config)
    return _finish(report, args)


def cmd_report(args) -> int:
    if args.group is not None:
        primes = (args.prime,) if args.prime else None
        entries = [CorpusEntry(args.group, args.group, primes=primes)]
    elif args.prime is not None:
        raise ParseError("--prime requires --group")
    else:
        entries = default_corpus()
    config = _config_from(args, entries)
    report = run_corpus(config)
    return _finish(report, args)


def _finish(report, args) -> int:
    if args.json_path:
        emit_json(report, args.json_path)
    if args.markdown_path:
        emit_markdown(report, args.markdown_path)
    counts = report.counts()
    print(f"cases: {counts['cases']}  failed: {counts['failed_cases']}  "
          f"oracles: {counts['oracles']}  failed: {counts['failed_oracles']}  "
          f"errors: {counts['errors']}")
    if not report.ok:
        print(render_markdown(report) if not args.markdown_path else
              "see the markdown report for failing ledgers")
        return 1
    return 0


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "blocks":
            return cmd_blocks(args)
        if args.command == "chains":
            return cmd_chains(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "report":
            return cmd_report(args)
    except ParseError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except BgawcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
