"""Command-line interface.

Exit codes: 0 success, 1 usage or input error, 2 enumeration cap or search
budget exceeded. ``DTC_BUDGET`` overrides every enumeration budget.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from collections import Counter
from pathlib import Path

from . import exhaustive, io, metric, pairsearch, simkit
from .channel import DEFAULT_ENUM_CAP, ChannelSpec, enumerate_associated, transmitted_power
from .errors import BudgetExceeded, CapExceeded, DtcError, InvariantViolation

EXIT_OK, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2
SCENARIOS = {"known": "known_si", "unknown": "unknown_si", "ifree": "interference_free"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _budget(default: int) -> int:
    env = os.environ.get("DTC_BUDGET")
    if not env:
        return default
    try:
        value = int(env)
    except ValueError:
        raise UsageError(f"DTC_BUDGET must be an integer, got {env!r}")
    if value < 1:
        raise UsageError("DTC_BUDGET must be positive")
    return value


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _sym(t) -> str:
    return ",".join(str(c) for c in t)


def parse_snr_grid(text: str) -> list[float]:
    """``A:B:STEP`` inclusive of B (up to rounding), or a single value."""
    parts = text.split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"bad --snr-db {text!r}; expected A:B:STEP")
    if len(nums) == 1:
        return nums
    if len(nums) != 3:
        raise UsageError(f"bad --snr-db {text!r}; expected A:B:STEP")
    a, b, step = nums
    if not step > 0:
        raise UsageError("--snr-db step must be positive")
    if b < a:
        raise UsageError("--snr-db grid is empty")
    count = int(math.floor((b - a) / step + 1e-9)) + 1
    return [round(a + k * step, 12) for k in range(count)]


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}")
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _load(args) -> ChannelSpec:
    return io.load_spec(args.config)


def _load_cb(path, spec):
    cb = io.load_codebook(path)
    io.check_codebook(cb, spec)
    return cb


# -- commands ------------------------------------------------------------------

def cmd_analyze(args, out):
    spec = _load(args)
    if args.codebook:
        cb = _load_cb(args.codebook, spec)
        if cb.raw:
            cb = [[spec.constant_symbol(m) for m in cw] for cw in cb]
        spectrum = metric.distance_spectrum(list(cb), spec)
        out.write("sq_distance,count\n")
        for v, c in spectrum.pairs:
            out.write(f"{_fmt(v)},{c}\n")
        return EXIT_OK
    symbols = enumerate_associated(spec, cap=_budget(DEFAULT_ENUM_CAP))
    dm = metric.distance_matrix(symbols, spec)
    out.write("i,j,d\n")
    n = len(symbols)
    for i in range(n):
        for j in range(i + 1, n):
            d = float(dm.d[i, j])
            if args.all or d > 0:
                out.write(f"{i},{j},{_fmt(d)}\n")
    return EXIT_OK


def cmd_pair(args, out):
    spec = _load(args)
    if args.method == "brute":
        t, r, d = pairsearch.max_pair_bruteforce(spec, budget=_budget(pairsearch.DEFAULT_PAIR_BUDGET))
    elif args.method == "poly":
        t, r, d = pairsearch.max_pair_poly(spec)
    else:
        t, r = pairsearch.lemma1_construct(spec)
        d = metric.d_si(t, r, spec)
    out.write(f"d_max={d:g}\nu1={_sym(t)}\nu2={_sym(r)}\n")
    return EXIT_OK


def cmd_check(args, out):
    spec = _load(args)
    t2 = str(pairsearch.theorem2_condition(spec)).lower() if spec.M == 2 else "n/a"
    t3 = str(pairsearch.theorem3_condition(spec)).lower()
    out.write(f"theorem2={t2}\ntheorem3={t3}\n")
    return EXIT_OK


def cmd_reduce(args, out):
    spec = _load(args)
    cb = _load_cb(args.codebook, spec)
    if cb.raw:
        raise InvariantViolation("codewords", "reduction needs associated-symbol codewords")
    mode = args.mode or ("binary" if spec.M == 2 else "mary")
    if mode == "mary" and not pairsearch.theorem3_condition(spec) and not args.force:
        raise InvariantViolation("mode", "constant-symbol reduction may lose distance unless "
                                 "the interference gap condition holds (use --force)")
    part = pairsearch.partition(spec, mode, pivot=args.pivot)
    reduced = pairsearch.reduce_codebook(list(cb), part)
    io.save_codebook(reduced, args.out)
    out.write(f"wrote {len(reduced)} codewords to {args.out}\n")
    return EXIT_OK


def cmd_simulate(args, out):
    spec = _load(args)
    kind = SCENARIOS[args.scenario]
    grid = parse_snr_grid(args.snr_db)
    if args.codebook:
        cb = _load_cb(args.codebook, spec)
        if (kind == "known_si") == cb.raw:
            raise InvariantViolation("codewords", f"{args.scenario} scenario needs "
                                     f"{'symbol tuples' if kind == 'known_si' else 'raw input indices'}")
        scenario = simkit.Scenario(kind, cb.codewords)
    else:
        pair = None
        if kind == "known_si":
            if spec.M == 2:
                t, r, _ = pairsearch.max_pair_poly(spec)
            else:
                t, r, _ = pairsearch.max_pair_bruteforce(spec, budget=_budget(pairsearch.DEFAULT_PAIR_BUDGET))
            pair = (t, r)
        scenario = simkit.uncoded_scenario(kind, spec, pair)
    curve = simkit.monte_carlo(scenario, spec, grid, args.trials, args.seed,
                               threads=args.threads, batch_size=args.batch_size)
    text = curve.to_csv()
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_search(args, out):
    spec = _load(args)
    budget = _budget(exhaustive.DEFAULT_SEARCH_BUDGET)
    cap = _budget(DEFAULT_ENUM_CAP)
    if args.restrict is not None:
        res = exhaustive.best_restricted(spec, args.n, args.size, args.restrict, budget=budget)
        out.write(f"best_sq={res.best_sq:g}\nbest={math.sqrt(res.best_sq):.10g}\n"
                  f"subsets={res.subsets}\nsymbols={' '.join(_sym(t) for t in res.subset)}\n")
        codebook = res.codebook
    else:
        symbols = enumerate_associated(spec, cap=cap)
        if args.symbols:
            try:
                picks = [int(v) for v in args.symbols.split(",")]
            except ValueError:
                raise UsageError(f"bad --symbols {args.symbols!r}")
            if any(not 0 <= p < len(symbols) for p in picks):
                raise UsageError(f"--symbols indices must lie in [0, {len(symbols) - 1}]")
            symbols = [symbols[p] for p in picks]
        res = exhaustive.best_min_distance(exhaustive.SearchSpace(args.n, args.size, tuple(symbols)),
                                           spec, budget=budget)
        out.write(f"best_sq={res.best_sq:g}\nbest={res.best:.10g}\n")
        codebook = res.codebook
    for k, cw in enumerate(codebook):
        out.write(f"codeword {k}: {' | '.join(_sym(t) for t in cw)}\n")
    return EXIT_OK


def cmd_verify_appc(args, out):
    report = exhaustive.verify_appendix_c(budget=_budget(exhaustive.DEFAULT_SEARCH_BUDGET))
    out.write(report.format())
    return EXIT_OK


def cmd_power(args, out):
    spec = _load(args)
    if args.codebook:
        cb = _load_cb(args.codebook, spec)
        counts = Counter(spec.constant_symbol(s) if not isinstance(s, tuple) else s
                         for cw in cb for s in cw)
        total = sum(counts.values())
        usage = {t: c / total for t, c in counts.items()}
    else:
        symbols = enumerate_associated(spec, cap=_budget(DEFAULT_ENUM_CAP))
        usage = {t: 1.0 / len(symbols) for t in symbols}
    out.write(f"power={_fmt(transmitted_power(usage, spec))}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dtcode", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def with_config(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", required=True, help="channel spec JSON")
        return sp

    sp = with_config("analyze", "symbol distance matrix (or codebook spectrum) as CSV")
    sp.add_argument("--codebook")
    sp.add_argument("--all", action="store_true", help="include zero-distance pairs")
    sp.set_defaults(func=cmd_analyze)

    sp = with_config("pair", "maximum-distance symbol pair")
    sp.add_argument("--method", choices=("brute", "poly", "lemma1"), default="poly")
    sp.set_defaults(func=cmd_pair)

    sp = with_config("check", "alphabet gap conditions for pair and constant-symbol optimality")
    sp.set_defaults(func=cmd_check)

    sp = with_config("reduce", "reduce a codebook to M representative symbols")
    sp.add_argument("--codebook", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--mode", choices=("binary", "mary"))
    sp.add_argument("--pivot", type=int, default=0, help="pivot state index (binary mode)")
    sp.add_argument("--force", action="store_true")
    sp.set_defaults(func=cmd_reduce)

    sp = with_config("simulate", "Monte Carlo error rate vs SNR")
    sp.add_argument("--scenario", choices=tuple(SCENARIOS), required=True)
    sp.add_argument("--codebook")
    sp.add_argument("--snr-db", required=True, help="A:B:STEP (inclusive)")
    sp.add_argument("--trials", type=_positive_int, required=True)
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--threads", type=_positive_int, default=1)
    sp.add_argument("--batch-size", type=_positive_int, default=simkit.DEFAULT_BATCH)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_simulate)

    sp = with_config("search", "exhaustive max-min-distance codebook search")
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--size", type=_positive_int, required=True)
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--restrict", type=_positive_int, help="best over all k-symbol subsets")
    grp.add_argument("--symbols", help="comma-separated symbol indices (lexicographic order)")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("verify-appc", help="recheck the M=4 counterexample codebook")
    sp.set_defaults(func=cmd_verify_appc)

    sp = with_config("power", "average transmitted power")
    sp.add_argument("--codebook", help="usage = symbol frequencies of this codebook")
    sp.set_defaults(func=cmd_power)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        err.write(str(exc).rstrip("\n") + "\n")
        return EXIT_USAGE
    except (CapExceeded, BudgetExceeded) as exc:
        err.write(f"dtcode: {exc}\n")
        return EXIT_BUDGET
    except DtcError as exc:
        err.write(f"dtcode: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
