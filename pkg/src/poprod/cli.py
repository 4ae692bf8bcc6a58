"""Command-line interface: ``poprod {gen,entropy,extend,produce,bench,selfcheck}``.

Exit status is 1 for bad input and 2 when an internal check fails.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import kernels
from .entropy import entropy_exact, weak_order_entropy
from .extension import greedy_weak_extension
from .harness import FamilyError, bench, gen_family
from .multiselect import MODES, ComparisonOracle, produce, verify_production
from .poset import BRUTE_FORCE_LIMIT, OracleLimitError, PosetError, format_poset, parse_poset

SEED_ENV = "POSET_PRODUCE_SEED"


class InputError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _read_poset(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(str(exc)) from exc
    return parse_poset(text)


def _read_hidden(path: str, n: int) -> list[int]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(str(exc)) from exc
    vals = []
    for line in text.splitlines():
        vals.extend(line.split("#", 1)[0].split())
    try:
        hidden = [int(v) for v in vals]
    except ValueError:
        raise InputError("hidden order file must contain integers") from None
    if sorted(hidden) != list(range(n)):
        raise InputError(f"hidden order must be a permutation of 0..{n - 1}")
    return hidden


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    ranks = [int(r) for r in args.ranks.split(",")] if args.ranks else None
    P = gen_family(args.family, n=args.n, k=args.k, ranks=ranks, depth=args.depth,
                   p=args.p, seed=args.seed)
    _emit(format_poset(P, comment=f"family {args.family}"), args.out)
    return 0


def cmd_entropy(args) -> int:
    P = _read_poset(args.poset)
    ext = greedy_weak_extension(P)
    result = {"n": P.n, "greedy_entropy": ext.greedy_entropy}
    if P.n <= args.limit:
        H = entropy_exact(P, tol=args.tol, limit=args.limit)
        result.update(entropy=H.value, gap=H.gap, converged=H.converged)
    if args.json:
        print(json.dumps(result))
    else:
        print(f"greedy_entropy {result['greedy_entropy']:.4f}")
        if "entropy" in result:
            print(f"entropy {result['entropy']:.4f}")
        else:
            print(f"entropy skipped (n={P.n} > oracle limit {args.limit})")
    return 0


def cmd_extend(args) -> int:
    P = _read_poset(args.poset)
    ext = greedy_weak_extension(P)
    if args.json:
        print(json.dumps(ext.to_dict()))
        return 0
    for i, layer in enumerate(ext.weak.layers):
        print(f"layer {i}: {' '.join(map(str, layer))}")
    print(f"greedy_entropy {ext.greedy_entropy:.6f}")
    print(f"weak_entropy {weak_order_entropy(ext.weak):.6f}")
    return 0


def cmd_produce(args) -> int:
    P = _read_poset(args.poset)
    if args.hidden:
        hidden = _read_hidden(args.hidden, P.n)
        seed = args.seed if args.seed is not None else _default_seed()
    else:
        seed = args.seed if args.seed is not None else _default_seed()
        hidden = np.random.default_rng(seed).permutation(P.n).tolist()
    oracle = ComparisonOracle(hidden)
    prod = produce(P, oracle, mode=args.mode, seed=seed)
    ok = verify_production(P, hidden, prod.pi)
    if not ok:
        raise AssertionError("produced permutation violates the target order")
    if args.json:
        print(json.dumps({"pi": list(prod.pi), "comparisons": prod.comparisons, "verified": ok}))
    else:
        print("pi " + " ".join(map(str, prod.pi)))
        print(f"comparisons {prod.comparisons}")
        print(f"verified {ok}")
    return 0


def cmd_bench(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    report = bench(args.family, trials=args.trials, seed=seed, mode=args.mode)
    text = report.to_json() + "\n" if args.format == "json" else report.to_csv()
    _emit(text, args.out)
    if not all(r.verified for r in report.rows):
        raise AssertionError("a benchmark production failed verification")
    return 0


def cmd_selfcheck(args) -> int:
    from .selfcheck import run_selfcheck

    failures = run_selfcheck(seed=args.seed if args.seed is not None else _default_seed(),
                             size=args.size, out=sys.stdout)
    return 2 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="poprod", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("--backend-info", action="store_true", help="print kernel backend and exit")
    sub = parser.add_subparsers(dest="command")

    g = sub.add_parser("gen", help="emit a poset file for a named family")
    g.add_argument("--family", required=True,
                   help="chain, antichain, selection, multiselection, heap, random, gk")
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int, help="selection rank or G_k level")
    g.add_argument("--ranks", help="comma-separated cut positions for multiselection")
    g.add_argument("--depth", type=int, help="heap depth")
    g.add_argument("--p", type=float, help="edge probability for random")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("entropy", help="greedy-point entropy, and exact entropy for small n")
    e.add_argument("--poset", required=True, help="poset file ('-' for stdin)")
    e.add_argument("--tol", type=float, default=1e-4)
    e.add_argument("--limit", type=int, default=BRUTE_FORCE_LIMIT)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_entropy)

    x = sub.add_parser("extend", help="greedy weak-order extension with its trace")
    x.add_argument("--poset", required=True)
    x.add_argument("--json", action="store_true")
    x.set_defaults(func=cmd_extend)

    p = sub.add_parser("produce", help="arrange hidden data into the poset, counting comparisons")
    p.add_argument("--poset", required=True)
    p.add_argument("--hidden", help="file with the hidden ranks of t_0..t_{n-1}")
    p.add_argument("--seed", type=int, help=f"seed for hidden order and pivots (default ${SEED_ENV} or 0)")
    p.add_argument("--mode", choices=MODES, default="random", help="pivot rule")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_produce)

    b = sub.add_parser("bench", help="comparisons versus ITLB over poset families")
    b.add_argument("--family", action="append", required=True,
                   help="family spec, repeatable: chain:8, random:30:0.2, layers:100000:10, gk:4, ...")
    b.add_argument("--trials", type=int, default=5)
    b.add_argument("--seed", type=int)
    b.add_argument("--mode", choices=MODES, default="random")
    b.add_argument("--format", choices=("csv", "json"), default="csv")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)

    s = sub.add_parser("selfcheck", help="run the invariant corpus")
    s.add_argument("--seed", type=int)
    s.add_argument("--size", type=int, default=60, help="number of random posets")
    s.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    if args.backend_info:
        print(kernels.BACKEND)
        return 0
    if args.command is None:
        parser.print_help()
        return 1
    try:
        return args.func(args)
    except (InputError, PosetError, FamilyError, OracleLimitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (AssertionError, RuntimeError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
