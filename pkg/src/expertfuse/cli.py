"""Command-line front end: fuse, decide, simulate, corpus.

Human-readable tables go to stdout with 4 decimal places; files written
through the output flags carry full precision.  Every command is
deterministic given its flags and seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Sequence

from . import __version__
from .corpus import conflict_matrix, decision_difference, load_annotations
from .decision import Criterion, credibility, decide, pignistic, plausibility
from .expert_models import CertaintyWeights, DEFAULT_WEIGHTS
from .fusion import RULE_NAMES, combine, redistribute_conjunctions
from .lattice import FocalElement, Model
from .mass import MassFunction
from .stability import SAMPLING_LAWS, conflict_density, stability_table

SEED_ENV_VAR = "EXPERTFUSE_SEED"
DEFAULT_SEED = 2026


def _resolve_seed(flag_value: int | None) -> int:
    if flag_value is not None:
        return flag_value
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from None


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _load_mass(path: str) -> MassFunction:
    try:
        with open(path, encoding="utf-8") as handle:
            return MassFunction.from_json(handle.read())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from None
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: not a valid mass file ({exc})") from None


def _table_elements(m: MassFunction) -> list[FocalElement]:
    """Rows for the fusion table: atoms, focal elements, and the one-step
    meets and joins of focal pairs, in canonical order; ∅ leads when it
    carries mass."""
    frame = m.frame
    masks = {a.mask for a in frame.atoms()}
    focal = [x for x, _ in m.pairs if x]
    masks.update(focal)
    for i, x in enumerate(focal):
        for y in focal[i + 1:]:
            if x & y:
                masks.add(x & y)
            masks.add(x | y)
    rows = [FocalElement(frame, mask) for mask in sorted(masks)]
    if m.value_of_mask(0) > 0.0:
        rows.insert(0, frame.empty())
    return rows


def _print_criteria_table(m: MassFunction) -> None:
    rows = _table_elements(m)
    width = max(len("element"), max(len(str(el)) for el in rows))
    print(f"{'element':<{width}}  {'m':>8}  {'bel':>8}  {'pl':>8}  {'betP':>8}")
    for el in rows:
        mass = m.value(el)
        if el.is_empty:
            print(f"{str(el):<{width}}  {mass:>8.4f}  {0.0:>8.4f}  {0.0:>8.4f}  {'-':>8}")
            continue
        bel = credibility(m, el)
        pl = plausibility(m, el)
        bet = pignistic(m, el)
        print(f"{str(el):<{width}}  {mass:>8.4f}  {bel:>8.4f}  {pl:>8.4f}  {bet:>8.4f}")


def _criteria_json(m: MassFunction) -> dict:
    out = {}
    for el in _table_elements(m):
        entry = {
            "mass": m.value(el),
            "credibility": credibility(m, el) if not el.is_empty else 0.0,
            "plausibility": plausibility(m, el) if not el.is_empty else 0.0,
            "pignistic": pignistic(m, el) if not el.is_empty else None,
        }
        out[str(el)] = entry
    return out


def cmd_fuse(args: argparse.Namespace) -> int:
    masses = [_load_mass(path) for path in args.mass_files]
    fused = combine(masses, args.rule)
    if args.rule in ("pcr5", "pcr6") and fused.frame.model is Model.FREE:
        # the redistribution rules decide on exclusive classes, so a free
        # result is first projected onto the matching exclusive frame
        fused = redistribute_conjunctions(fused)
    print(f"rule: {args.rule}")
    print(f"frame: {{{', '.join(fused.frame.labels)}}} ({fused.frame.model.value})")
    _print_criteria_table(fused)
    if args.decide:
        report = decide(fused, Criterion.PIGNISTIC, fused.frame.atoms())
        line = f"decision (pignistic over singletons): {report.chosen}"
        if report.tie:
            line += f"  [tie between {', '.join(str(t) for t in report.tied)}]"
        print(line)
    if args.json:
        payload = {
            "rule": args.rule,
            "mass": fused.to_json_dict(),
            "criteria": _criteria_json(fused),
        }
        with open(args.json, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, ensure_ascii=False, indent=2)
            handle.write("\n")
    return 0


def cmd_decide(args: argparse.Namespace) -> int:
    m = _load_mass(args.mass_file)
    candidates: Sequence[FocalElement | str]
    if args.candidates:
        candidates = [c.strip() for c in args.candidates.split(",")]
    else:
        candidates = m.frame.atoms()
    report = decide(m, Criterion(args.criterion), candidates)
    for el, value in report.values:
        print(f"{args.criterion}({el}) = {value:.4f}")
    print(f"chosen: {report.chosen}")
    if report.tie:
        print(f"tie between: {', '.join(str(t) for t in report.tied)}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as handle:
            json.dump(report.to_json_dict(), handle, ensure_ascii=False, indent=2)
            handle.write("\n")
    return 0


def _parse_class_counts(text: str) -> list[int]:
    counts: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            low_text, high_text = part.split("..", 1)
            low, high = int(low_text), int(high_text)
            if high < low:
                raise ValueError(f"empty class range {part!r}")
            counts.extend(range(low, high + 1))
        else:
            counts.append(int(part))
    for n in counts:
        if n < 2:
            raise ValueError(f"class counts start at 2, got {n}")
    return counts


def cmd_simulate(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    counts = _parse_class_counts(args.classes)
    if args.histogram and len(counts) != 1:
        raise ValueError("--histogram needs a single class count")
    results = stability_table(counts, args.samples, seed, law=args.law)
    print(f"{'n':>3}  {'samples':>9}  {'change_rate':>11}  {'ci':>8}")
    for r in results:
        print(f"{r.n_classes:>3}  {r.accepted_pairs:>9}  {r.change_rate:>11.4f}  "
              f"{r.ci_halfwidth:>8.4f}")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(("n", "samples", "change_rate", "ci"))
            for r in results:
                writer.writerow(
                    (r.n_classes, r.accepted_pairs, repr(r.change_rate), repr(r.ci_halfwidth))
                )
    if args.histogram:
        n = counts[0]
        full = conflict_density(n, args.samples, args.bins, "all", seed, args.law)
        flipped = conflict_density(n, args.samples, args.bins, "decision_change", seed, args.law)
        with open(args.histogram, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(("bin_low", "bin_high", "freq_all", "freq_change"))
            for i in range(args.bins):
                writer.writerow(
                    (
                        repr(full.bin_edges[i]),
                        repr(full.bin_edges[i + 1]),
                        repr(full.frequencies[i]),
                        repr(flipped.frequencies[i]),
                    )
                )
    return 0


def _parse_weights(text: str) -> CertaintyWeights:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"--weights needs three comma-separated values, got {text!r}")
    c1, c2, c3 = (float(p) for p in parts)
    return CertaintyWeights(c1, c2, c3)


def cmd_corpus(args: argparse.Namespace) -> int:
    corpus = load_annotations(args.annotations)
    weights = _parse_weights(args.weights) if args.weights else DEFAULT_WEIGHTS
    if args.experts:
        names = [e.strip() for e in args.experts.split(",")]
        if len(names) != 2:
            raise ValueError("--experts needs exactly two comma-separated ids")
        expert_i, expert_j = names
    else:
        found = corpus.experts
        if len(found) != 2:
            raise ValueError(
                f"corpus has {len(found)} experts; pass --experts to pick two"
            )
        expert_i, expert_j = found
    rule_a, rule_b = (r.strip() for r in args.rules.split(","))
    for rule in (rule_a, rule_b):
        if rule not in RULE_NAMES:
            raise ValueError(f"unknown rule {rule!r}; expected one of {', '.join(RULE_NAMES)}")
    matrix = conflict_matrix(corpus, expert_i, expert_j, weights)
    diff = decision_difference(
        corpus, weights, rule_a, rule_b, experts=(expert_i, expert_j)
    )
    labels = matrix.labels
    width = max(len("class"), max(len(lab) for lab in labels))
    print(
        f"conflict matrix ×10^4 ({expert_i} rows, {expert_j} columns, "
        f"{matrix.tile_count} tiles)"
    )
    print(f"{'class':<{width}}  " + "  ".join(f"{lab:>10}" for lab in labels))
    for lab, row in zip(labels, matrix.values):
        print(f"{lab:<{width}}  " + "  ".join(f"{v:>10.4f}" for v in row))
    print(f"matrix total /10^4 (mean conflict): {matrix.total:.4f}")
    print(
        f"decision difference ({rule_a} vs {rule_b}): "
        f"{diff.differing}/{diff.tiles} tiles = {diff.rate:.4f}"
    )
    if args.matrix:
        with open(args.matrix, "w", encoding="utf-8", newline="") as handle:
            handle.write(matrix.to_csv_text())
    if args.diff:
        with open(args.diff, "w", encoding="utf-8") as handle:
            json.dump(diff.to_json_dict(), handle, ensure_ascii=False, indent=2)
            handle.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expertfuse",
        description="Fuse uncertain multi-expert classifications with belief functions.",
    )
    parser.add_argument("--version", action="version", version=f"expertfuse {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    fuse = sub.add_parser("fuse", help="combine mass files and print the criteria table")
    fuse.add_argument("mass_files", nargs="+", metavar="MASS_JSON")
    fuse.add_argument("--rule", choices=RULE_NAMES, default="conjunctive")
    fuse.add_argument("--decide", action="store_true",
                      help="also print the pignistic decision over singletons")
    fuse.add_argument("--json", metavar="PATH", help="write full-precision results")
    fuse.set_defaults(handler=cmd_fuse)

    dec = sub.add_parser("decide", help="evaluate a decision criterion on one mass file")
    dec.add_argument("mass_file", metavar="MASS_JSON")
    dec.add_argument("--criterion", choices=[c.value for c in Criterion],
                     default="pignistic")
    dec.add_argument("--candidates", metavar="ELEMENTS",
                     help="comma-separated elements (default: the classes)")
    dec.add_argument("--json", metavar="PATH", help="write the report as JSON")
    dec.set_defaults(handler=cmd_decide)

    sim = sub.add_parser("simulate", help="run the decision-change experiment")
    sim.add_argument("--classes", default="2..7", metavar="SPEC",
                     help="class counts, e.g. 3 or 2..7 or 2,4,7 (default 2..7)")
    sim.add_argument("--samples", type=_positive_int, default=10000,
                     help="accepted expert pairs per class count")
    sim.add_argument("--seed", type=int, default=None,
                     help=f"RNG seed (default ${SEED_ENV_VAR} or {DEFAULT_SEED})")
    sim.add_argument("--law", choices=SAMPLING_LAWS, default="uniform")
    sim.add_argument("--out", metavar="PATH", help="write the table as CSV")
    sim.add_argument("--histogram", metavar="PATH",
                     help="write a conflict histogram CSV (single class count only)")
    sim.add_argument("--bins", type=_positive_int, default=20)
    sim.set_defaults(handler=cmd_simulate)

    corp = sub.add_parser("corpus", help="conflict matrix and decision difference")
    corp.add_argument("annotations", metavar="CSV")
    corp.add_argument("--experts", metavar="ID,ID")
    corp.add_argument("--weights", metavar="C1,C2,C3",
                      help="certainty weights (default 2/3, 1/2, 1/3)")
    corp.add_argument("--rules", default="conjunctive,pcr6", metavar="RULE,RULE")
    corp.add_argument("--matrix", metavar="PATH", help="write the matrix as CSV")
    corp.add_argument("--diff", metavar="PATH", help="write the difference summary as JSON")
    corp.set_defaults(handler=cmd_corpus)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    for stream in (sys.stdout, sys.stderr):
        try:
            stream.reconfigure(encoding="utf-8", errors="replace")
        except (AttributeError, ValueError, io.UnsupportedOperation):
            pass
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "fuse" and len(args.mass_files) < 2:
        parser.error("fuse needs at least two mass files")
    try:
        return args.handler(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
