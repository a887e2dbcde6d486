"""Command-line entry point: ``kgreedy run|greedy|optimal|compare|gen``."""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence

from .centralized import centralized_greedy
from .engine import RunConfig, check_lemma_invariants, run
from .formats import ParseError, format_trace, parse_topology, result_to_json, serialize_topology
from .oracle import BRUTE_FORCE_CAP, Family, GenSpec, approximation_report, brute_force_optimal, generate
from .protocol import CheckRule
from .topology import Link, Topology, is_k_valid_matching, is_maximal

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_gen_spec(text: str) -> tuple[GenSpec, int]:
    """Parse ``family=random,n=12,p=0.3,seed=7[,count=N]`` into a spec and count."""
    fields: dict[str, str] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"expected key=value, got {item!r}")
        fields[key.strip()] = value.strip()
    if "family" not in fields:
        raise UsageError("generator spec needs family=")
    try:
        family = Family(fields.pop("family").lower())
    except ValueError:
        raise UsageError(f"unknown family; choose from {[f.value for f in Family]}") from None
    count = 1
    kwargs: dict = {"family": family}
    ints = {"n": "n", "rows": "rows", "cols": "cols", "seed": "seed", "k": "k", "lo": "price_lo", "hi": "price_hi"}
    try:
        for key, value in fields.items():
            if key == "count":
                count = int(value)
            elif key == "p":
                kwargs["p"] = float(value)
            elif key == "ties":
                kwargs["ties"] = value.lower() in ("1", "true", "yes")
            elif key in ints:
                kwargs[ints[key]] = int(value)
            else:
                raise UsageError(f"unknown generator field {key!r}")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if count < 1:
        raise UsageError("count must be >= 1")
    return GenSpec(**kwargs), count


def _generate(spec: GenSpec) -> Topology:
    try:
        return generate(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load(path: str) -> Topology:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    try:
        return parse_topology(text)
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _link_line(l: Link) -> str:
    return f"link {l.src} {l.dst} {l.price}"


def cmd_run(args: argparse.Namespace) -> int:
    t = _load(args.topology)
    rule = CheckRule(args.check_rule)
    result = run(t, RunConfig(check_rule=rule))
    for l in result.ordered_schedule:
        print(_link_line(l))
    print(f"rounds {result.rounds}")
    if args.trace:
        Path(args.trace).write_text(format_trace(result.trace))
    if args.json:
        Path(args.json).write_text(result_to_json(result, t, rule))
    return EXIT_OK


def cmd_greedy(args: argparse.Namespace) -> int:
    sched = centralized_greedy(_load(args.topology))
    for l in sched.order:
        print(_link_line(l))
    print(f"weight {sched.total_price}")
    return EXIT_OK


def cmd_optimal(args: argparse.Namespace) -> int:
    t = _load(args.topology)
    if len(t.links) > BRUTE_FORCE_CAP:
        raise UsageError(f"{len(t.links)} links exceeds the brute-force cap of {BRUTE_FORCE_CAP}")
    opt = brute_force_optimal(t)
    for l in t.ranked:
        if l in opt.best:
            print(_link_line(l))
    print(f"weight {opt.best_weight}")
    return EXIT_OK


@dataclass(frozen=True)
class Verdict:
    ok: bool
    line: str


def check_instance(t: Topology, with_optimal: bool = False) -> Verdict:
    """Distributed vs centralized on one topology, plus protocol invariants."""
    result = run(t)
    greedy = centralized_greedy(t)
    problems = []
    if result.schedule != greedy.chosen:
        problems.append("schedule differs from centralized greedy")
    if not is_k_valid_matching(t, result.schedule) or not is_maximal(t, result.schedule):
        problems.append("schedule is not a maximal K-valid matching")
    report = check_lemma_invariants(result, t)
    problems += [str(v) for v in report.violations]
    if result.rounds > max(1, len(result.schedule)):
        problems.append(f"rounds {result.rounds} exceed marked count {len(result.schedule)}")
    parts = [f"links={len(t.links)}", f"k={t.k}", f"rounds={result.rounds}"]
    if result.rounds > result.round_bound:
        parts.append(f"FLAG rounds>ceil(|L|/K)={result.round_bound}")
    if with_optimal:
        if len(t.links) <= BRUTE_FORCE_CAP:
            rep = approximation_report(t)
            parts.append(f"greedy={rep.greedy.total_price} optimal={rep.optimal.best_weight} ratio={float(rep.ratio):.4f}")
        else:
            parts.append("optimal=skipped")
    status = "FAIL" if problems else "PASS"
    line = f"{status} " + " ".join(parts)
    if problems:
        line += " | " + "; ".join(problems)
    return Verdict(not problems, line)


def _check_spec(job: tuple[GenSpec, bool]) -> Verdict:
    spec, with_optimal = job
    return check_instance(generate(spec), with_optimal)


def cmd_compare(args: argparse.Namespace) -> int:
    if args.topology:
        verdicts = [check_instance(_load(args.topology), args.with_optimal)]
    else:
        base, count = parse_gen_spec(args.generate)
        specs = [replace(base, seed=base.seed + i) for i in range(count)]
        _generate(specs[0])  # surface bad parameters as a usage error
        jobs = [(s, args.with_optimal) for s in specs]
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                verdicts = list(pool.map(_check_spec, jobs))
        else:
            verdicts = [_check_spec(j) for j in jobs]
    for i, v in enumerate(verdicts):
        print(f"instance {i}: {v.line}")
    passed = sum(v.ok for v in verdicts)
    print(f"{passed}/{len(verdicts)} equal")
    return EXIT_OK if passed == len(verdicts) else EXIT_FAIL


def cmd_gen(args: argparse.Namespace) -> int:
    spec, _ = parse_gen_spec(args.spec)
    t = _generate(spec)
    text = serialize_topology(t)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kgreedy", description="K-hop greedy link scheduling")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate the distributed protocol")
    p.add_argument("--topology", required=True)
    p.add_argument("--check-rule", choices=[r.value for r in CheckRule], default=CheckRule.INTERFERING.value)
    p.add_argument("--trace", help="write the state trace as TSV")
    p.add_argument("--json", help="write a JSON run report")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("greedy", help="centralized greedy schedule")
    p.add_argument("--topology", required=True)
    p.set_defaults(func=cmd_greedy)

    p = sub.add_parser("optimal", help="exact maximum-weight schedule")
    p.add_argument("--topology", required=True)
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("compare", help="check distributed == centralized")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--topology")
    src.add_argument("--generate", metavar="SPEC", help="family=...,n=...,p=...,seed=...,count=N")
    p.add_argument("--with-optimal", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen", help="write a generated topology")
    p.add_argument("spec", help="family=...,n=...,seed=...")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"kgreedy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
