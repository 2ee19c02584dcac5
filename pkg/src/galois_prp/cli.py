"""Command-line front end: galois-prp {test,params,crossover,density,bench}."""
import argparse
import json
import math
import os
import random
import secrets
import statistics
import sys
import time

from .arith import prime_factors
from .density_lab import (
    AbstractAlgebraModel,
    SizeGuardError,
    SplittingDatum,
    brute_force_density,
    density_formula,
    valuation_bound_holds,
    inert_bound_holds,
    local_density,
    mr_density_oracle,
    split_bound_holds,
)
from .galois_test import TestConfig, galois_test, replay_evidence, theoretical_test
from .miller_rabin import Verdict, mr_test
from .params import DEFAULT_MODEL, CostModel, crossover, enumerate_candidates, select

EXIT_PRIME, EXIT_COMPOSITE, EXIT_USAGE = 0, 1, 2
DEFAULT_BITS = (512, 1024, 2048, 4096, 8192)


class UsageError(Exception):
    pass


def parse_int(text):
    text = text.strip().replace("_", "")
    try:
        if text.lower().startswith("0x"):
            return int(text, 16)
        if not text.isdigit():
            raise ValueError
        return int(text, 10)
    except ValueError:
        raise UsageError(f"cannot parse integer {text!r}") from None


def read_n(arg):
    if arg is None or arg == "-":
        arg = sys.stdin.read()
    return parse_int(arg)


def resolve_seed(seed):
    if seed is not None:
        return seed
    env = os.environ.get("GALOIS_SEED")
    if env:
        return parse_int(env)
    return secrets.randbits(64)


def load_model(path):
    if path is None:
        return DEFAULT_MODEL
    try:
        return CostModel.from_file(path)
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _dump(obj):
    print(json.dumps(obj, sort_keys=True))


# -- test ------------------------------------------------------------------

def cmd_test(args):
    n = read_n(args.n)
    if n < 3 or n % 2 == 0:
        raise UsageError("n must be an odd integer >= 3")
    seed = resolve_seed(args.seed)
    rng = random.Random(seed)
    try:
        if args.theoretical:
            result = theoretical_test(n, args.lam, rng=rng)
        else:
            config = TestConfig(
                bound=args.bound, allow_fallback=not args.no_fallback, d_cyc=args.d_cyc,
                d_kum=args.d_kum, r=args.r, model=load_model(args.model),
            )
            result = galois_test(n, args.lam, config, rng=rng)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        _dump(result.to_json(seed=seed, timings=args.timings))
    else:
        _print_result(result, seed, args.timings)
    return EXIT_COMPOSITE if result.verdict is Verdict.COMPOSITE else EXIT_PRIME


def _print_result(result, seed, timings):
    print(f"n        = {result.n}")
    print(f"lambda   = {result.lam}")
    print(f"seed     = {seed}")
    if result.is_composite:
        ev = result.evidence
        print(f"verdict  = composite ({ev.kind} at {ev.step})")
        print(f"evidence = {json.dumps(ev.to_json(), sort_keys=True)}")
        print(f"replayed = {replay_evidence(result.n, ev)}")
    else:
        how = "prime (certified by trial division)" if result.certified else "probable prime"
        print(f"verdict  = {how}")
        print(f"security = {result.security:.1f} bits")
    p = result.params
    if p is not None:
        if p.fallback:
            print(f"params   = fallback: {p.r} Miller-Rabin tests")
        else:
            print(f"params   = r={p.r} d_cyc={p.d_cyc} d_kum={p.d_kum} A={p.A:.5f}")
        if result.repetitions > 1:
            print(f"repeats  = {result.repetitions}")
    if timings:
        for key, ms in result.timings.items():
            print(f"  {key:<8} {ms:10.3f} ms")


# -- params ----------------------------------------------------------------

def cmd_params(args):
    model = load_model(args.model)
    if args.n is None and args.bits is None:
        raise UsageError("give n or --bits")
    n = read_n(args.n) if args.n is not None else None
    b = n.bit_length() if n is not None else args.bits
    cands = enumerate_candidates(n, args.lam, bits=args.bits, model=model, bound=args.bound)
    choice = select(n, args.lam, model, bound=args.bound, bits=args.bits)
    if args.json:
        _dump({
            "bits": b, "lambda": args.lam,
            "candidates": [c.to_json() for c in cands],
            "selected": choice.to_json(),
        })
        return 0
    print(f"b={b} lambda={args.lam} A={choice.A:.5f} candidates={len(cands)}")
    print(f"{'r':>6} {'d_cyc':>5} {'d_kum':>5} {'cost':>14}")
    for c in sorted(cands, key=lambda c: (c.est_galois_cost, c.d_cyc, c.d_kum)):
        mark = " *" if (not choice.fallback and (c.d_cyc, c.d_kum) == (choice.d_cyc, choice.d_kum)) else ""
        print(f"{c.r:>6} {c.d_cyc:>5} {c.d_kum:>5} {c.est_galois_cost:>14.6g}{mark}")
    print(f"MR cost ({math.ceil(args.lam / 2)} tests) = {choice.est_mr_cost:.6g}")
    if choice.fallback:
        print(f"fallback: {choice.r} Miller-Rabin tests")
    return 0


# -- crossover -------------------------------------------------------------

def cmd_crossover(args):
    model = load_model(args.model)
    bits = DEFAULT_BITS if not args.bits_list else [parse_int(x) for x in args.bits_list.split(",")]
    rows = [(b, crossover(b, model)) for b in bits]
    if args.csv:
        print("bits,lambda_star")
        for b, lam in rows:
            print(f"{b},{'none' if lam is None else lam}")
    else:
        for b, lam in rows:
            print(f"b={b:<10} lambda*={'none' if lam is None else lam}")
    return 0


# -- density ---------------------------------------------------------------

def _parse_datum(text):
    parts = [parse_int(x) for x in text.split(":")]
    if len(parts) == 4:
        p, f, m, t = parts
        v = 1
    elif len(parts) == 5:
        p, f, m, t, v = parts
    else:
        raise UsageError(f"datum {text!r} is not p:f:m:t[:v]")
    return SplittingDatum(p, v, f, m, t)


def _model_from_args(args):
    if args.datum:
        data = [_parse_datum(x) for x in args.datum]
        d = data[0].d
        return AbstractAlgebraModel.build(d, *data)
    if args.n is None:
        raise UsageError("density model needs --n or --datum")
    d = args.d
    data = []
    for p in prime_factors(args.n):
        v = 0
        while args.n % p ** (v + 1) == 0:
            v += 1
        if p == args.split:
            data.append(SplittingDatum(p, v, 1, d, 0))
        else:
            data.append(SplittingDatum(p, v, d, 1, 1 if d > 1 else 0))
    return AbstractAlgebraModel(args.n, d, data)


def cmd_density(args):
    try:
        if args.mode == "mr":
            n = parse_int(args.value)
            mu = mr_density_oracle(n)
            t = len(prime_factors(n))
            print(f"n={n} bad-witness density = {mu}")
            print(f"<= 1/4: {mu <= 0.25}   <= 2^(1-t) (t={t}): {mu <= 2.0 ** (1 - t)}")
            return 0
        model = _model_from_args(args)
        formula = density_formula(model)
        brute = brute_force_density(model)
    except (ValueError, SizeGuardError) as exc:
        raise UsageError(str(exc)) from None
    verdict = "EQUAL" if formula == brute else "DIFFER"
    print(f"n={model.n} d={model.d}")
    for x in model.data:
        print(f"  p={x.p} v={x.v} f={x.f} m={x.m} t={x.t}  factor={local_density(model.n, x)}")
    print(f"{formula} = {brute} {verdict}" if formula == brute else f"{formula} != {brute} {verdict}")
    print(f"split bound: {split_bound_holds(model)}  inert bound: {inert_bound_holds(model)}"
          f"  A=2.5,B=3 bound: {valuation_bound_holds(model, 2.5, 3)}")
    return 0 if formula == brute else 1


# -- bench -----------------------------------------------------------------

def random_probable_prime(bits, rng):
    while True:
        n = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        if all(n % p for p in (3, 5, 7, 11, 13)) and mr_test(n, 20, rng)[0] is Verdict.PRIME:
            return n


BENCH_COLUMNS = ("step2", "step4", "step5", "step9", "sigma", "power", "total", "MR")


def cmd_bench(args):
    seed = resolve_seed(args.seed)
    rng = random.Random(seed)
    model = load_model(args.model)
    header = f"{'b':>6} {'lambda':>6} {'r':>5} {'d_cyc':>5} {'d_kum':>5} " + " ".join(
        f"{c:>9}" for c in BENCH_COLUMNS) + f" {'ratio':>7}"
    print(header)
    for bits in args.bits:
        samples = {c: [] for c in BENCH_COLUMNS}
        choice = None
        for _ in range(args.repeat):
            n = random_probable_prime(bits, rng)
            config = TestConfig(allow_fallback=False, model=model, d_cyc=args.d_cyc, d_kum=args.d_kum)
            try:
                res = galois_test(n, args.lam, config, rng=rng)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            choice = res.params
            for c in BENCH_COLUMNS[:-1]:
                samples[c].append(res.timings.get(c, 0.0))
            t0 = time.perf_counter()
            mr_test(n, math.ceil(args.lam / 2), rng)
            samples["MR"].append((time.perf_counter() - t0) * 1000.0)
        med = {c: statistics.median(v) for c, v in samples.items()}
        ratio = med["total"] / med["MR"] if med["MR"] else math.nan
        r, dc, dk = (choice.r, choice.d_cyc, choice.d_kum) if choice else (0, 0, 0)
        print(f"{bits:>6} {args.lam:>6} {r:>5} {dc:>5} {dk:>5} "
              + " ".join(f"{med[c]:>9.2f}" for c in BENCH_COLUMNS) + f" {ratio:>7.3f}")
    print("times are median milliseconds; ratio = total / MR")
    return 0


# -- entry point -----------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="galois-prp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="run the composed pseudo-primality test")
    p.add_argument("n", nargs="?", help="decimal or 0x-hex; '-' or omitted reads stdin")
    p.add_argument("--lambda", dest="lam", type=int, default=64)
    p.add_argument("--seed", type=int)
    p.add_argument("--json", action="store_true")
    p.add_argument("--timings", action="store_true", help="include per-step timings")
    p.add_argument("--theoretical", action="store_true")
    p.add_argument("--model", help="cost-model file (key = value lines)")
    p.add_argument("--bound", type=int, default=8000, help="trial-division bound B")
    p.add_argument("--d-cyc", dest="d_cyc", type=int)
    p.add_argument("--d-kum", dest="d_kum", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--no-fallback", action="store_true")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("params", help="list candidate parameters and the selection")
    p.add_argument("n", nargs="?")
    p.add_argument("--bits", type=int, help="ideal-divisor mode for b-bit inputs")
    p.add_argument("--lambda", dest="lam", type=int, default=64)
    p.add_argument("--bound", type=int, default=8000)
    p.add_argument("--model")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("crossover", help="model-level crossover lambda* per bit size")
    p.add_argument("--bits-list", help="comma-separated bit sizes")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--model")
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("density", help="bad-witness density experiments")
    p.add_argument("mode", choices=["mr", "model"])
    p.add_argument("value", nargs="?", help="n for the mr mode")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--inert", action="store_true", help="all primes inert (default)")
    p.add_argument("--split", type=int, help="this prime splits completely")
    p.add_argument("--datum", action="append", help="p:f:m:t[:v], repeatable")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("bench", help="time the pipeline steps on random probable primes")
    p.add_argument("--bits", type=int, nargs="+", default=[1024])
    p.add_argument("--lambda", dest="lam", type=int, default=128)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int)
    p.add_argument("--model")
    p.add_argument("--d-cyc", dest="d_cyc", type=int)
    p.add_argument("--d-kum", dest="d_kum", type=int)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "density" and args.mode == "mr" and args.value is None:
        parser.error("density mr needs n")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"galois-prp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
