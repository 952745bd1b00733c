"""Command-line interface.

Exit codes: 0 success / equivalent, 1 not equivalent or a failed check,
2 budget refusal, 3 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .classify import (
    DEFAULT_BUDGET,
    PUBLISHED_COUNTS,
    PUBLISHED_LOWER_BOUNDS,
    BudgetExceededError,
    classify_cached,
    gen_A,
    gen_B,
    gen_C,
    is_isotropic_matrix,
    stacked_identity,
)
from .cohomology import InvalidProfileError, loads_profile, require_valid
from .equivalence import equivalence_witness
from .gf2 import atomic_write_text, format_matrix
from .verify import SUITES, run_suite

EXIT_OK, EXIT_NO, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3
CACHE_ENV = "Z2COHOM_CACHE_DIR"


class InputError(ValueError):
    pass


def parse_r_values(text: str) -> list[int]:
    """'4', '1-6' or '1,3,5' (ranges allowed inside lists)."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if "-" in part:
                lo, hi = (int(x) for x in part.split("-", 1))
                if lo > hi:
                    raise InputError(f"empty range {part!r}")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"cannot parse --r value {text!r}") from exc
    if any(r < 1 for r in out):
        raise InputError("r must be >= 1")
    return out


def _emit(text: str, output: str | None) -> None:
    if output:
        atomic_write_text(output, text)
    else:
        sys.stdout.write(text)


def cmd_classify(args: argparse.Namespace) -> int:
    rs = parse_r_values(args.r)
    budget = args.budget if args.budget is not None else DEFAULT_BUDGET
    if budget < 1:
        raise InputError("--budget must be positive")
    if args.force:
        budget = max(budget, max(rs))
    workers = 1 if args.deterministic else args.workers
    if workers < 1:
        raise InputError("--workers must be positive")
    cache_dir = args.cache_dir or os.environ.get(CACHE_ENV) or None
    over = [r for r in rs if r > budget]
    if over:
        print(
            f"error: r={over[0]} exceeds the classification budget r <= {budget}; "
            "raise --budget or pass --force",
            file=sys.stderr,
        )
        return EXIT_BUDGET
    docs = [json.loads(classify_cached(r, cache_dir, budget, workers)) for r in rs]
    for d in docs:
        bound = PUBLISHED_LOWER_BOUNDS.get(d["r"])
        if bound is not None:
            print(f"note: r={d['r']}: exact count {d['count']}; published lower bound {bound}", file=sys.stderr)

    if args.format == "json":
        text = json.dumps(docs[0] if len(docs) == 1 else docs, indent=2) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "count", "published", "published_kind"])
        for d in docs:
            r = d["r"]
            if r in PUBLISHED_COUNTS:
                w.writerow([r, d["count"], PUBLISHED_COUNTS[r], "exact"])
            elif r in PUBLISHED_LOWER_BOUNDS:
                w.writerow([r, d["count"], PUBLISHED_LOWER_BOUNDS[r], "lower_bound"])
            else:
                w.writerow([r, d["count"], "", ""])
        text = buf.getvalue()
    else:
        lines = []
        for d in docs:
            lines.append(f"r={d['r']}: {d['count']} classes")
            for c in d["classes"]:
                lines.append(f"  dim X={c['dim_X']} blocks={c['blocks']} weights={c['weight_distribution']}")
                lines.extend("    " + row for row in c["canonical"])
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def _load_profile(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            p = loads_profile(fh.read())
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    try:
        require_valid(p)
    except InvalidProfileError as exc:
        raise InputError(f"{path}: " + "; ".join(exc.violations)) from exc
    return p


def cmd_isomorphic(args: argparse.Namespace) -> int:
    p, q = _load_profile(args.profile_a), _load_profile(args.profile_b)
    result = equivalence_witness(p, q)
    _emit(result.to_json(), args.output)
    return EXIT_OK if result.equivalent else EXIT_NO


def cmd_generate(args: argparse.Namespace) -> int:
    fam = args.family

    def need(name: str) -> int:
        val = getattr(args, name)
        if val is None:
            raise InputError(f"--family {fam} requires --{name}")
        return val

    if fam in ("A", "B"):
        params = (need("l"),)
    elif fam == "C":
        params = (need("s"), need("t"))
    else:
        params = (need("r"),)
    builder = {"A": gen_A, "B": gen_B, "C": gen_C, "stacked-identity": stacked_identity}[fam]
    try:
        M = builder(*params)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if fam != "A":
        M = M.matrix
        if not is_isotropic_matrix(M):  # pragma: no cover
            raise AssertionError("generated matrix failed the membership check")
    _emit(format_matrix(M), args.output)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_suite(args.suite)
    for res in results:
        print(res.line())
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} checks passed")
    return EXIT_OK if passed == len(results) else EXIT_NO


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not budget refusals
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="z2cohom", description="Z/2 cohomology profiles and isotropic matrix orbits")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="classify orbits of isotropic 2r x r matrices")
    c.add_argument("--r", required=True, help="value, range (1-6) or comma list")
    c.add_argument("--budget", type=int, default=None, help=f"largest r allowed (default {DEFAULT_BUDGET})")
    c.add_argument("--force", action="store_true", help="raise the budget to cover every requested r")
    c.add_argument("--format", choices=("json", "csv", "text"), default="json")
    c.add_argument("--cache-dir", default=None, help=f"result cache (default ${CACHE_ENV})")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--deterministic", action="store_true", help="single worker, ordered output")
    c.add_argument("--output", "-o", default=None)
    c.set_defaults(func=cmd_classify)

    i = sub.add_parser("isomorphic", help="decide equivalence of two profile JSON files")
    i.add_argument("profile_a")
    i.add_argument("profile_b")
    i.add_argument("--output", "-o", default=None)
    i.set_defaults(func=cmd_isomorphic)

    g = sub.add_parser("generate", help="write a generator-family matrix")
    g.add_argument("--family", required=True, choices=("A", "B", "C", "stacked-identity"))
    g.add_argument("--l", type=int)
    g.add_argument("--s", type=int)
    g.add_argument("--t", type=int)
    g.add_argument("--r", type=int)
    g.add_argument("--output", "-o", default=None)
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="run self-check suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
