"""Command line front end.

Subcommands
    check-lemmas   recheck the finite facts behind the length arguments
    ball           enumerate a ball and write it as CSV
    growth         ball sizes per radius as CSV
    verify         reduction | basictool | patterns
    badstrings     census of block-free all-bad alternating words
    badcount       bad elements in a ball against the closed-form bound

Rational parameters are written p/q.  Exit codes: 0 success, 1 a
verification failed, 2 usage error, 3 a search budget ran out.  Reports are
sorted before writing, so output does not depend on thread count.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .group_defs import (
    builtin,
    load_group,
    verify_extended_table,
    verify_structure_lemmas,
)
from .metric import Ball, alternation_check, growth_series
from .patterns import bad_strings_census, count_bad_elements, verify_patterns
from .splitting import (
    check_contraction_criterion,
    verify_good_letter_bound,
    verify_reduction_G,
)
from .tree_automorphism import BudgetExceeded

THREADS_ENV = "TREEGROUPS_THREADS"

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


@dataclass
class RunConfig:
    """Everything that determined a run; embedded in JSON reports."""

    command: str
    group: str = ""
    generators: str = ""
    radius: int = 0
    epsilon: str = ""
    eta: str = ""
    p: str = ""
    shift: str = ""
    depth: int = 0
    max_k: int = 0
    step: int = 1
    threads: int = 1
    entry_budget: int = 0
    word_cap: int = 0
    out: str = ""
    json_path: str = ""


def _default_threads():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _resolve_group(spec):
    if spec in ("G", "H", "I"):
        return builtin(spec)
    if spec.startswith("file:"):
        return load_group(spec[len("file:"):])
    raise ValueError(f"--group must be G, H, I or file:<path>, got {spec!r}")


def _generating_set(group, which):
    if which == "standard":
        return group.standard_generators
    if which == "extended":
        return group.extended_generators
    raise ValueError(f"--generators must be standard or extended, got {which!r}")


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_jsonable(v) for v in obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _jsonable(dataclasses.asdict(obj))
    return obj


def _write_json(config, result):
    if not config.json_path:
        return
    payload = {
        "version": __version__,
        "command": config.command,
        "config": _jsonable(dataclasses.asdict(config)),
        "result": _jsonable(result),
    }
    with open(config.json_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(path, header, rows):
    out = open(path, "w", newline="", encoding="utf-8") if path else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(header)
        writer.writerows(rows)
    finally:
        if path:
            out.close()


def _status(passed):
    return EXIT_OK if passed else EXIT_VERIFICATION_FAILED


def _key_hex(raw):
    """Portrait keys use one byte per tree node; pack to bits for display."""
    bits = 0
    for byte in raw:
        bits = bits << 1 | byte
    return format(bits, "0%dx" % ((len(raw) + 3) // 4))


def cmd_check_lemmas(args):
    group = _resolve_group(args.group)
    config = RunConfig(command="check-lemmas", group=args.group,
                       json_path=args.json or "")
    result = {"structure": verify_structure_lemmas(group)}
    for check in result["structure"]["checks"]:
        print(("ok  " if check["passed"] else "FAIL") + " " + check["name"])
    if group.name == "I":
        result["extended_table"] = verify_extended_table(group)
        print(("ok  " if result["extended_table"]["passed"] else "FAIL")
              + " extended_table")
    passed = all(v["passed"] for v in result.values())
    result["passed"] = passed
    _write_json(config, result)
    return _status(passed)


def cmd_ball(args):
    group = _resolve_group(args.group)
    gens = _generating_set(group, args.generators)
    config = RunConfig(command="ball", group=args.group,
                       generators=args.generators, radius=args.radius,
                       entry_budget=args.entry_budget,
                       out=args.out or "", json_path=args.json or "")
    ball = Ball(group, gens, entry_budget=args.entry_budget)
    ball.extend(args.radius)
    rows = []
    for elem, length in ball.items(args.radius):
        key = _key_hex(group.table.portrait_key(elem.letters))
        word = " ".join(ball.a_geodesic_word(elem))
        rows.append((key, length, word))
    rows.sort(key=lambda r: (r[1], r[0], r[2]))
    _write_csv(args.out, ("portrait_key", "min_length", "geodesic_word"), rows)
    _write_json(config, {"radius": args.radius, "size": len(rows)})
    return EXIT_OK


def cmd_growth(args):
    group = _resolve_group(args.group)
    gens = _generating_set(group, args.generators)
    config = RunConfig(command="growth", group=args.group,
                       generators=args.generators, radius=args.max_radius,
                       step=args.step, entry_budget=args.entry_budget,
                       out=args.out or "", json_path=args.json or "")
    ball = Ball(group, gens, entry_budget=args.entry_budget)
    series = growth_series(group, args.max_radius, step=args.step, ball=ball)
    rows = [(r, n, "%.12g" % rate) for r, n, rate in series.rates()]
    _write_csv(args.out, ("radius", "gamma", "rate_estimate"), rows)
    _write_json(config, {"samples": series.samples})
    return EXIT_OK


def cmd_verify_reduction(args):
    group = _resolve_group(args.group)
    if group.name != "G":
        raise ValueError("verify reduction is a statement about G")
    config = RunConfig(command="verify reduction", group=args.group,
                       radius=args.radius, json_path=args.json or "")
    report = verify_reduction_G(args.radius)
    print(f"checked {report['checked']} even elements through radius "
          f"{args.radius}: {len(report['violations'])} violations")
    for w in report["witnesses"]:
        print(f"  {w['word']}: {w['length']} -> {w['parts_length_sum']}")
    _write_json(config, report)
    return _status(report["passed"])


def cmd_verify_basictool(args):
    group = _resolve_group(args.group)
    gens = _generating_set(group, args.generators)
    config = RunConfig(command="verify basictool", group=args.group,
                       generators=args.generators, radius=args.radius,
                       eta=str(args.eta), p=str(args.p), shift=str(args.shift),
                       depth=args.depth, json_path=args.json or "")
    cert = check_contraction_criterion(
        group, depth=args.depth, eta=args.eta, p=args.p, shift=args.shift,
        radius=args.radius, ball=Ball(group, gens,
                                      entry_budget=args.entry_budget))
    print(f"proportion {cert.proportion_observed} of {cert.checked} "
          f"stabilizer members satisfy the bound (need {cert.p})")
    _write_json(config, cert)
    return _status(cert.passed)


def cmd_verify_patterns(args):
    group = _resolve_group(args.group)
    config = RunConfig(command="verify patterns", group=args.group,
                       json_path=args.json or "")
    letters = verify_good_letter_bound(group)
    report = verify_patterns(group)
    print(f"bad letters: {', '.join(letters['bad_letters'])}; worst good "
          f"ratio {letters['worst_good_ratio']} at {letters['worst_good_letter']}")
    for family, entries in report["families"].items():
        failing = sum(1 for e in entries if not e["holds"])
        print(f"{'ok  ' if not failing else 'FAIL'} {family}: "
              f"{len(entries)} instances")
    result = {"letters": letters, "templates": report,
              "passed": letters["passed"] and report["passed"]}
    _write_json(config, result)
    return _status(result["passed"])


def cmd_badstrings(args):
    config = RunConfig(command="badstrings", max_k=args.max_k,
                       threads=args.threads, json_path=args.json or "",
                       out=args.out or "")
    census = bad_strings_census(args.max_k, threads=args.threads)
    rows = list(census.counts)
    if args.out:
        _write_csv(args.out, ("k", "count"), rows)
    else:
        for k, n in rows:
            print(f"k={k}: {n}")
    print(f"bound observed: {census.bound_observed}")
    period = census.period_structure
    if args.max_k < 24:
        print("words too short to judge the mod-8 repetition")
        passed = True
    else:
        print(f"mod-8 repetition holds: {period['holds']} "
              f"(offsets {period['head_offset']}, {period['tail_offset']})")
        passed = bool(period["holds"])
    print("interior separated pairs: "
          + ", ".join("(%s,%s)" % p for p in sorted(period["interior_pairs"])))
    _write_json(config, census)
    return _status(passed)


def cmd_badcount(args):
    group = _resolve_group(args.group)
    config = RunConfig(command="badcount", group=args.group,
                       radius=args.radius, epsilon=str(args.epsilon),
                       max_k=args.census_max_k, threads=args.threads,
                       word_cap=args.word_cap, json_path=args.json or "")
    report = count_bad_elements(
        group, args.radius, args.epsilon,
        census_max_k=args.census_max_k, word_cap=args.word_cap,
        threads=args.threads)
    print(f"{report['count']} bad elements in the level-{report['level']} "
          f"stabilizer within radius {args.radius}; bound {report['bound']}")
    _write_json(config, report)
    return _status(report["passed"])


def _add_common(parser, *, group=True, generators=False, radius=None):
    parser.add_argument("--json", help="write a JSON report here")
    if group:
        parser.add_argument("--group", required=True,
                            help="G, H, I or file:<path>")
    if generators:
        parser.add_argument("--generators", default="extended",
                            choices=("standard", "extended"))
    if radius is not None:
        parser.add_argument("--radius", type=int, default=radius)
    parser.add_argument("--entry-budget", type=int, default=4_000_000)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="treegroups",
        description="self-similar groups on the binary tree: word problem, "
                    "growth, and contraction certificates")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-lemmas", help="recheck the finite group facts")
    _add_common(p, radius=None)
    p.set_defaults(func=cmd_check_lemmas)

    p = sub.add_parser("ball", help="enumerate a ball as CSV")
    _add_common(p, generators=True, radius=20)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("growth", help="ball sizes per radius as CSV")
    _add_common(p, generators=True)
    p.add_argument("--max-radius", type=int, required=True)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("verify", help="run one of the verifications")
    vsub = p.add_subparsers(dest="verification", required=True)

    v = vsub.add_parser("reduction", help="the 7/8 split bound for G")
    _add_common(v, radius=40)
    v.set_defaults(func=cmd_verify_reduction)

    v = vsub.add_parser("basictool", help="the splitting proportion hypothesis")
    _add_common(v, generators=True, radius=40)
    v.add_argument("--depth", type=int, default=1)
    v.add_argument("--eta", type=Fraction, required=True, help="rational, p/q")
    v.add_argument("--p", type=Fraction, default=Fraction(1))
    v.add_argument("--shift", type=Fraction, default=Fraction(3))
    v.set_defaults(func=cmd_verify_basictool)

    v = vsub.add_parser("patterns", help="good letters and block templates")
    _add_common(v)
    v.set_defaults(func=cmd_verify_patterns)

    p = sub.add_parser("badstrings", help="census of block-free bad words")
    p.add_argument("--json", help="write a JSON report here")
    p.add_argument("--out", help="CSV path for the counts")
    p.add_argument("--max-k", type=int, default=40)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=cmd_badstrings)

    p = sub.add_parser("badcount", help="bad elements against the bound")
    _add_common(p, radius=30)
    p.add_argument("--epsilon", type=Fraction, required=True, help="rational, p/q")
    p.add_argument("--census-max-k", type=int, default=24)
    p.add_argument("--word-cap", type=int, default=1_000_000)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=cmd_badcount)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors already; keep 0 for --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
