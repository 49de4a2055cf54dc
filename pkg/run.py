"""
FK-UCT toolkit - command line launcher

    python run.py classify --builtin X3 --json
    python run.py nt-table space.json --xlsx x3.xlsx
    python run.py nt-cat --builtin W:3,2 --indecomposables --long-chain --phi
    python run.py counterexample --builtin X3 --y 34 --k 3
    python run.py enumerate-posets --max-points 4

Spaces come from a JSON file, inline JSON, or --builtin
(X1|X2|X3|X4|S|Cn:<n>|On:<n>|W:<n1,...>). Reports go to stdout, logs to stderr.
Exit codes: 0 ok, 1 other failure, 2 malformed input, 3 unsupported space.
"""

import argparse
import json
import logging
import sys
from typing import Dict, List, Optional

import pandas as pd

from common import config
from common.errors import CycleDetected, FktError, MalformedInput, UnsupportedSpace
from common.report_utils import (
    to_csv_text, to_dot, to_json_text, to_multi_sheet_excel, to_text_table, write_bytes,
)
from modules.kgroups.order_complex import k_group_table
from modules.ntcat.category import build_presented_category, indecomposable_arrows
from modules.ntcat.phi import phi_iso
from modules.ntcat.type_a import long_chain
from modules.ntmodules.counterexample import counterexample_pipeline
from modules.poset.builtins import parse_builtin
from modules.poset.enumerate import describe, enumerate_spaces
from modules.poset.poset_core import Space, space_from_json
from modules.uct.classifier import classify_uct, verdict_to_dict

logger = logging.getLogger(__name__)


# =============================================================================
# Input
# =============================================================================

def load_space(args) -> Space:
    """Space from --builtin, inline JSON or a JSON file."""
    if getattr(args, "builtin", None):
        return parse_builtin(args.builtin)
    source = getattr(args, "space", None)
    if not source:
        raise MalformedInput("give a space JSON file, inline JSON or --builtin")
    try:
        if source.lstrip().startswith("{"):
            data = json.loads(source)
        else:
            with open(source, encoding="utf-8") as fh:
                data = json.load(fh)
    except OSError as e:
        raise MalformedInput(f"cannot read {source}: {e}")
    except json.JSONDecodeError as e:
        raise MalformedInput(f"invalid JSON in {source}: {e}")
    return space_from_json(data)


def emit(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def save_excel(path: Optional[str], sheets: Dict[str, pd.DataFrame]):
    if path:
        write_bytes(config.output_path(path), to_multi_sheet_excel(sheets))


# =============================================================================
# Verbs
# =============================================================================

def cmd_classify(args) -> int:
    s = load_space(args)
    verdict = classify_uct(s)
    report = verdict_to_dict(s, verdict)
    if args.dot:
        highlight = {}
        if not verdict.holds:
            w = verdict.witness
            highlight = {x: w.model.labels[q] for q, x in enumerate(w.embedding)}
        emit(to_dot("space", s.labels, s.hasse_edge_list, highlight))
    elif args.json:
        emit(to_json_text(report))
    elif verdict.holds:
        emit("UCT holds")
        for comp in report["components"]:
            emit(f"  accordion m={comp['m']} n={comp['n']} points={','.join(comp['points'])}")
    else:
        w = report["witness"]
        emit(f"UCT fails: {w['kind']}")
        emit(f"  embedding: {', '.join(f'{k}->{v}' for k, v in w['embedding'].items())}")
        if "f" in w:
            emit(f"  retraction f: {', '.join(f'{k}->{v}' for k, v in w['f'].items())}")
    return 0


def cmd_nt_table(args) -> int:
    s = load_space(args)
    df = k_group_table(s).to_frame()
    if args.json:
        emit(to_json_text({"hom_table": {y: row.to_dict() for y, row in df.iterrows()}}))
    elif args.csv:
        emit(to_csv_text(df))
    else:
        emit(to_text_table(df))
    save_excel(args.xlsx, {"hom_table": df})
    return 0


def _arrow_frame(arrows) -> pd.DataFrame:
    return pd.DataFrame(
        [{"kind": a.kind, "source": str(a.source), "target": str(a.target), "degree": a.degree} for a in arrows],
        columns=["kind", "source", "target", "degree"],
    )


def cmd_nt_cat(args) -> int:
    s = load_space(args)
    c = build_presented_category(s)
    hom = c.hom_table().to_frame()
    report = {
        "objects": [str(o) for o in c.objects],
        "arrows": [a.name for a in c.generators],
        "hom_table": {y: row.to_dict() for y, row in hom.iterrows()},
    }
    sheets = {"hom_table": hom, "arrows": _arrow_frame(c.generators)}

    if args.relations:
        report["relations"] = c.relations_text()
    if args.indecomposables:
        inds = indecomposable_arrows(c)
        report["indecomposables"] = [ind.name for ind in inds]
        sheets["indecomposables"] = pd.DataFrame(
            [{"name": ind.name, "source": str(ind.source), "target": str(ind.target),
              "degree": ind.morphism.degree} for ind in inds])
    if args.long_chain:
        chain = long_chain(c)
        report["long_chain"] = [a.name for a in chain]
        sheets["long_chain"] = _arrow_frame(chain)
    if args.phi:
        iso = phi_iso(s, cw=c)
        report["phi"] = iso.as_dict()
        sheets["phi"] = pd.DataFrame(report["phi"]["generators"])

    if args.json:
        emit(to_json_text(report))
    else:
        emit(f"objects ({len(c.objects)}): {' '.join(report['objects'])}")
        emit(f"arrows ({len(c.generators)}):")
        for name in report["arrows"]:
            emit(f"  {name}")
        emit(to_text_table(hom))
        for key in ("relations", "indecomposables", "long_chain"):
            if key in report:
                emit(f"{key} ({len(report[key])}):")
                for line in report[key]:
                    emit(f"  {line}")
        if "phi" in report:
            emit("phi:")
            for g in report["phi"]["generators"]:
                emit(f"  {g['source']} -> {'+' if g['sign'] > 0 else '-'}{g['target']}")
    save_excel(args.xlsx, sheets)
    return 0


def cmd_counterexample(args) -> int:
    s = load_space(args)
    c = build_presented_category(s)
    y = s.parse_subset(args.y)
    report = counterexample_pipeline(c, y, args.k).as_dict()
    if args.json:
        emit(to_json_text(report))
    else:
        for key in sorted(report):
            if key != "M_entries":
                emit(f"{key}: {report[key]}")
        emit("M entries:")
        for name, group in report["M_entries"].items():
            emit(f"  M({name}) = {group}")
    return 0


def cmd_enumerate(args) -> int:
    if args.max_points > config.MAX_ENUM_POINTS:
        raise MalformedInput(f"--max-points above {config.MAX_ENUM_POINTS} (FKT_MAX_ENUM_POINTS)")
    rows: List[Dict] = []
    for s in enumerate_spaces(args.max_points, connected_only=args.connected):
        verdict = classify_uct(s)
        row = {
            "points": s.n_points,
            "relations": describe(s),
            "uct": verdict.holds,
            "witness": "" if verdict.holds else verdict.witness.kind.value,
        }
        rows.append(row)
        if not args.json:
            emit(f"{row['points']}\t{'yes' if row['uct'] else 'no'}\t{row['witness'] or '-'}\t{row['relations']}")
    if args.json:
        emit(to_json_text(rows))
    save_excel(args.xlsx, {"spaces": pd.DataFrame(rows)})
    return 0


# =============================================================================
# Parser
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="run.py", description="Filtrated K-theory UCT toolkit")
    parser.add_argument("--log-level", default=None, help="override FKT_LOG_LEVEL")
    sub = parser.add_subparsers(dest="verb", required=True)

    def with_space(p):
        p.add_argument("space", nargs="?", help="space JSON file or inline JSON")
        p.add_argument("--builtin", help="X1|X2|X3|X4|S|Cn:<n>|On:<n>|W:<n1,...>")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    p = with_space(sub.add_parser("classify", help="decide UCT(X) and print a witness"))
    p.add_argument("--dot", action="store_true", help="Hasse diagram in DOT with the witness marked")
    p.set_defaults(func=cmd_classify)

    p = with_space(sub.add_parser("nt-table", help="K-groups of S(Y,Z) over LC*(X)"))
    p.add_argument("--csv", action="store_true")
    p.add_argument("--xlsx", help="also write an Excel workbook")
    p.set_defaults(func=cmd_nt_table)

    p = with_space(sub.add_parser("nt-cat", help="presented category NT*(X)"))
    p.add_argument("--indecomposables", action="store_true")
    p.add_argument("--long-chain", action="store_true")
    p.add_argument("--phi", action="store_true")
    p.add_argument("--relations", action="store_true")
    p.add_argument("--xlsx", help="also write an Excel workbook")
    p.set_defaults(func=cmd_nt_cat)

    p = with_space(sub.add_parser("counterexample", help="module of projective dimension two"))
    p.add_argument("--y", required=True, help="object Y, e.g. 34 or {1^1}")
    p.add_argument("--k", type=int, default=2)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("enumerate-posets", help="all T0-spaces up to isomorphism with verdicts")
    p.add_argument("--max-points", type=int, default=4)
    p.add_argument("--connected", action="store_true", help="connected spaces only")
    p.add_argument("--json", action="store_true")
    p.add_argument("--xlsx", help="also write an Excel workbook")
    p.set_defaults(func=cmd_enumerate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config.configure_logging(args.log_level)
    try:
        return args.func(args)
    except (MalformedInput, CycleDetected) as e:
        logger.error(f"❌ {e}")
        return 2
    except UnsupportedSpace as e:
        logger.error(f"❌ {e}")
        return 3
    except FktError as e:
        logger.error(f"❌ {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
