"""cantor-dioph command line interface.

Every command prints one deterministic JSON report (keys sorted, exact
rationals as {"p", "q"} pairs with a display-only decimal).  Wall-clock
timings are added only with --timings, in a separate "timings" block.

Exit codes: 0 success / member / all checks pass, 1 non-member or a
failed check, 2 usage error.
"""
import argparse
import random
import sys
import time
from fractions import Fraction

from . import __version__, kernels
from .errors import BudgetExceeded, CantorDiophError, UsageError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_SET = "missing-digit b=3 W=0,2"


class CliUsage(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def parse_rational(text):
    """"p/q", an integer, or a finite decimal; optional sign."""
    try:
        x = Fraction(text.strip())
    except (ValueError, ZeroDivisionError, AttributeError):
        raise CliUsage("not a rational: %r" % (text,))
    return x


def parse_vector(text):
    return tuple(parse_rational(t) for t in text.split(","))


def _load_system(args):
    from .ifs import parse_ifs
    if args.ifs_file:
        try:
            with open(args.ifs_file) as fh:
                text = fh.read()
        except OSError as exc:
            raise CliUsage("cannot read %s: %s" % (args.ifs_file, exc))
    else:
        text = args.set or DEFAULT_SET
    return parse_ifs(text)


def _digit_set(args):
    from .digits import MissingDigitSet
    ifs = _load_system(args)
    if ifs.digit_spec is None:
        raise CliUsage("this command needs a missing-digit set (--set \"missing-digit b=.. W=..\")")
    return MissingDigitSet.from_ifs(ifs)


def _target(text):
    from .arith.reals import RationalReal, parse_target
    try:
        if ":" not in text and text not in ("golden", "e", "pi"):
            return RationalReal(parse_rational(text))
        return parse_target(text)
    except ValueError as exc:
        raise CliUsage(str(exc))


def _address(args, ifs):
    from .acceptance import random_word
    from .ifs import Address
    given = [a for a in (args.address, args.random, args.pattern) if a is not None]
    if len(given) != 1:
        raise CliUsage("give exactly one of --address, --random, --pattern")
    if args.address is not None:
        addr = Address.parse(args.address)
    elif args.random is not None:
        addr = Address.finite(random_word(random.Random(args.seed), ifs.J, args.random))
    else:
        f, g = 1, ifs.J
        if args.pattern == "squares":
            marks = lambda i: int((i + 1) ** 0.5) ** 2 == i + 1
        elif args.pattern == "factorial":
            fact = set()
            v, k = 1, 1
            while v < 10 ** 7:
                fact.add(v)
                k += 1
                v *= k
            marks = lambda i: (i + 1) in fact
        else:
            raise CliUsage("pattern must be squares or factorial")
        addr = Address.generated(lambda i: g if marks(i) else f, args.pattern)
    if any(not 1 <= j <= ifs.J for j in addr.preperiod + addr.period):
        raise CliUsage("address symbols must lie in 1..%d" % ifs.J)
    return addr


def _t_grid(text):
    """"a:b:step" or a comma-separated list of rationals."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise CliUsage("t grid is start:stop:step")
        a, b, h = (parse_rational(p) for p in parts)
        if h <= 0:
            raise CliUsage("t step must be positive")
        out, t = [], a
        while t <= b:
            out.append(t)
            t += h
        return out
    return [parse_rational(t) for t in text.split(",")]


# ---------------------------------------------------------------------------
# commands; each returns (exit code, outputs dict, certificates dict)


def cmd_member(args):
    from .digits import MissingDigitSet, nearest_point
    from .extrinsic import membership
    ifs = _load_system(args)
    x = parse_vector(args.x)
    target = MissingDigitSet.from_ifs(ifs) if ifs.digit_spec else ifs
    member, cert = membership(target, x if len(x) > 1 else x[0])
    out = {"x": list(x), "member": member}
    if isinstance(target, MissingDigitSet):
        point, dist = nearest_point(target, x[0])
        out.update(nearest=point, distance=dist)
    return (EXIT_OK if member else EXIT_FAIL), out, cert


def cmd_nearest(args):
    from .digits import nearest_point
    S = _digit_set(args)
    x = parse_rational(args.x)
    point, dist = nearest_point(S, x)
    return EXIT_OK, {"x": x, "nearest": point, "distance": dist}, {"member": dist == 0}


def cmd_expand(args):
    from .digits import expand
    x = parse_rational(args.x)
    if not 0 <= x < 1:
        raise CliUsage("expand needs 0 <= x < 1")
    e = expand(x, args.base)
    return EXIT_OK, {"x": x, "base": args.base, "text": e.to_text(),
                     "preperiod": list(e.preperiod), "period": list(e.period),
                     "lengths": list(e.lengths)}, {"round_trip": e.to_rational() == x}


def cmd_enumerate(args):
    from .intrinsic import enumerate_rationals
    S = _digit_set(args)
    cat = enumerate_rationals(S, args.N, budget=args.budget, jobs=args.jobs)
    if args.format == "csv":
        return (EXIT_OK if cat.bound_holds else EXIT_FAIL), cat.to_csv(), None
    out = {"N": args.N, "count": len(cat), "points": cat.to_json_rows(), "bound": cat.bound}
    return (EXIT_OK if cat.bound_holds else EXIT_FAIL), out, {"count_le_bound": cat.bound_holds}


def cmd_intrinsic(args):
    from .intrinsic import intrinsic_dirichlet
    ifs = _load_system(args)
    xi = _address(args, ifs)
    res = intrinsic_dirichlet(ifs, xi, parse_rational(args.Q))
    out = {"approximant": list(res.approximant), "q": res.q, "q_unreduced": res.q_unreduced,
           "q_cap": res.q_cap, "error_bound": res.error_bound, "n": res.n, "m": res.m,
           "l": res.l, "address": res.address}
    certs = dict(res.certificates)
    ok = all(v for k, v in certs.items() if isinstance(v, bool))
    return (EXIT_OK if ok else EXIT_FAIL), out, certs


def cmd_extrinsic(args):
    from .extrinsic import extrinsic_lower_bound_check, uniform_extrinsic
    if args.check_bound:
        S = _digit_set(args)
        chk = extrinsic_lower_bound_check(S, parse_rational(args.x))
        out = {"x": chk.x, "distance": chk.distance, "nearest": chk.nearest, "bound": chk.bound}
        return (EXIT_OK if chk.verdict else EXIT_FAIL), out, {"distance_gt_bound": chk.verdict}
    ifs = _load_system(args)
    target = _digit_set(args) if ifs.digit_spec else ifs
    xi = [_target(t) for t in args.xi.split(";")]
    v = [int(c) for c in args.v.split(",")] if args.v else None
    res = uniform_extrinsic(target, xi, parse_rational(args.Q), v=v, Nmax=args.nmax, branch=args.branch,
                            prime_budget=args.budget or 10 ** 6)
    out = {"approximant": list(res.approximant), "s": res.s, "error_bound": res.error_bound,
           "branch": res.branch, "steps": res.steps, "K": res.K}
    return EXIT_OK, out, {"non_member": res.certificate}


def cmd_liouville(args):
    from .extrinsic import liouville_build, liouville_witness_check, parse_schedule
    ifs = _load_system(args)
    build = liouville_build(ifs, args.f, args.g, parse_schedule(args.schedule), args.stages)
    out = build.to_json()
    ok = all(all(st.certificates.values()) for st in build.stages)
    certs = {"stages_certified": ok}
    for k in args.witness or []:
        try:
            w = liouville_witness_check(build, k, budget=args.budget or 10 ** 6)
        except BudgetExceeded as exc:
            certs["witness_stage_%d" % k] = {"skipped": str(exc)}
            continue
        certs["witness_stage_%d" % k] = {"holds": w.holds, "Q": w.Q, "threshold": w.threshold,
                                         "checked": w.checked, "counterexample": w.counterexample}
        ok = ok and w.holds
    return (EXIT_OK if ok else EXIT_FAIL), out, certs


def cmd_profile(args):
    from .exponents import estimate_exponents, minima_profile
    xi = _target(args.xi)
    if args.exponents:
        S = _digit_set(args)
        rep = estimate_exponents(S, xi, args.depth)
        out = {"estimates": {k: {"lower_witness": e.lower_witness, "triple": e.triple,
                                 "upper_diagnostic": e.upper_diagnostic, "certified": e.certified}
                             for k, e in rep.estimates.items()},
               "classified": [{"p": p, "q": q, "member": m} for p, q, m in rep.classified],
               "diagnostics": rep.diagnostics}
        return (EXIT_OK if all(rep.checks.values()) else EXIT_FAIL), out, rep.checks
    prof = minima_profile(xi, _t_grid(args.t))
    code = EXIT_OK if not prof.violations() else EXIT_FAIL
    if args.format == "csv":
        return code, prof.to_csv(), None
    return code, prof.to_json(), {"band_violations": len(prof.violations())}


def cmd_periods(args):
    from .ifs import period_length_bound_check
    ifs = _load_system(args)
    x = parse_vector(args.x)
    L, ratio, address = period_length_bound_check(ifs, x)
    out = {"x": list(x), "address": address, "length": L, "ratio": ratio}
    certs = {}
    if ifs.digit_spec and len(x) == 1:
        from .arith.numtheory import expansion_lengths
        v, per = expansion_lengths(x[0].numerator, x[0].denominator, ifs.digit_spec[0])
        certs["formula_lengths"] = [v, per]
        certs["matches_formula"] = (len(address.preperiod), len(address.period)) == (v, per)
    return (EXIT_OK if certs.get("matches_formula", True) else EXIT_FAIL), out, certs


def cmd_scan(args):
    from . import digits
    if args.kind == "safe-prime":
        S = _digit_set(args)
        scan = digits.safe_prime_scan(S, args.qmax)
        if args.format == "csv":
            return EXIT_OK, "q,p\n" + "".join("%d,%d\n" % (q, p) for q, ps in scan.hits for p in ps), None
        return EXIT_OK, {"q_max": args.qmax, "scanned": scan.scanned,
                         "hits": [{"q": q, "members": ps} for q, ps in scan.hits]}, {}
    if args.kind == "gcd":
        if not args.word:
            raise CliUsage("--word is required for the gcd scan")
        S = _digit_set(args)
        word = digits.text_to_word(args.word, S.b)
        g = digits.gcd_pattern(S.b, word, S.W)
        ratio = digits.gcd_bound_ratio(S.b, word, S.Delta)
        return EXIT_OK, {"word": args.word, "gcd": g, "ratio": ratio}, {}
    if args.kind == "divisor":
        if args.N is None or args.dN is None:
            raise CliUsage("--N and --dN are required for the divisor scan")
        S = _digit_set(args)
        r = digits.divisor_digit_sets(S.b, args.N, args.dN, args.phi_len)
        return EXIT_OK, {"d_prime": r.d_prime, "word": list(r.word), "W1": sorted(r.W1),
                         "W2": sorted(r.W2)}, {"equal": r.equal}
    if args.kind == "phi-ratio":
        S = _digit_set(args)
        x = parse_rational(args.x) if args.x else None
        if x is None:
            raise CliUsage("--x is required for the phi-ratio scan")
        phi, ratio = digits.pthm_ratio(S, x)
        return EXIT_OK, {"x": x, "phi": phi, "ratio": ratio}, {}
    raise CliUsage("unknown scan kind")


def cmd_verify(args):
    from .acceptance import SUITES, run_suite
    names = args.suite or list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise CliUsage("unknown suite(s) %s; known: %s" % (", ".join(unknown), ", ".join(SUITES)))
    results = []
    for n in names:
        r = run_suite(n)
        print(r.line(), file=sys.stderr)
        results.append(r)
    ok = all(r.passed or not r.fatal for r in results)
    out = {"suites": [r.to_json() for r in results]}
    if args.timings:
        args._timings.update({r.name: round(r.seconds, 3) for r in results})
    return (EXIT_OK if ok else EXIT_FAIL), out, {"all_pass": ok}


# ---------------------------------------------------------------------------
# parser


def _common():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    src = g.add_mutually_exclusive_group()
    src.add_argument("--set", help="set description, e.g. \"missing-digit b=3 W=0,2\" (the default)")
    src.add_argument("--ifs-file", help="file in the IFS text format")
    g.add_argument("--format", choices=["json", "csv"], default="json")
    g.add_argument("--jobs", type=int, default=1, help="worker processes for enumeration")
    g.add_argument("--budget", type=int, default=None, help="enumeration / scan budget")
    g.add_argument("--seed", type=int, default=0, help="seed for random addresses")
    g.add_argument("--timings", action="store_true", help="add a wall-clock timings block")
    return p


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="cantor-dioph", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def add(name, fn, help):
        sp = sub.add_parser(name, parents=[common], help=help, description=help)
        sp.set_defaults(func=fn)
        return sp

    sp = add("member", cmd_member, "decide membership of a rational point")
    sp.add_argument("--x", required=True, help="p/q or comma-separated vector")
    sp = add("nearest", cmd_nearest, "nearest point of a missing-digit set and exact distance")
    sp.add_argument("--x", required=True)
    sp = add("expand", cmd_expand, "canonical base-b expansion of a rational in [0, 1)")
    sp.add_argument("--x", required=True)
    sp.add_argument("--base", type=int, default=10)
    sp = add("enumerate", cmd_enumerate, "all rationals of the set with denominator <= N")
    sp.add_argument("--N", type=int, required=True)
    sp = add("intrinsic", cmd_intrinsic, "intrinsic Dirichlet approximation of an address")
    sp.add_argument("--Q", required=True)
    sp.add_argument("--address", help="address text 'pre|per' or a finite word '1,2,1'")
    sp.add_argument("--random", type=int, help="random finite address of this length (uses --seed)")
    sp.add_argument("--pattern", help="squares or factorial: last map at those positions, first map elsewhere")
    sp = add("extrinsic", cmd_extrinsic, "uniform extrinsic approximation, or --check-bound for d(C, p/q)")
    sp.add_argument("--xi", default="0", help="target: p/q or a named real (sqrt:2, golden, ...); ';' separates coordinates")
    sp.add_argument("--Q", default="10")
    sp.add_argument("--v", help="direction vector, comma-separated integers")
    sp.add_argument("--nmax", type=int, default=10)
    sp.add_argument("--branch", choices=["progression", "prime"], default="progression")
    sp.add_argument("--check-bound", action="store_true")
    sp.add_argument("--x", help="p/q for --check-bound")
    sp = add("liouville", cmd_liouville, "staged Liouville-type construction with certificates")
    sp.add_argument("--f", type=int, default=1)
    sp.add_argument("--g", type=int, default=2)
    sp.add_argument("--schedule", default="logceil")
    sp.add_argument("--stages", type=int, default=2)
    sp.add_argument("--witness", type=int, action="append", help="stage to check by exhaustive scan")
    sp = add("profile", cmd_profile, "successive minima profile, or --exponents for exponent estimates")
    sp.add_argument("--xi", required=True)
    sp.add_argument("--t", default="0:5:1/2", help="start:stop:step or a list")
    sp.add_argument("--exponents", action="store_true")
    sp.add_argument("--depth", type=int, default=10 ** 12)
    sp = add("periods", cmd_periods, "eventually periodic address of a rational point")
    sp.add_argument("--x", required=True)
    sp = add("scan", cmd_scan, "safe-prime, gcd, divisor and first-bad-digit scans")
    sp.add_argument("--kind", choices=["safe-prime", "gcd", "divisor", "phi-ratio"], default="safe-prime")
    sp.add_argument("--qmax", type=int, default=100)
    sp.add_argument("--word")
    sp.add_argument("--N", type=int)
    sp.add_argument("--dN", type=int)
    sp.add_argument("--phi-len", type=int, default=0)
    sp.add_argument("--x")
    sp = add("verify", cmd_verify, "run acceptance suites (all by default)")
    sp.add_argument("--suite", action="append", help="suite name; repeatable")
    return parser


def _report(args, argv, outputs, certs):
    rep = {
        "command": args.command,
        "inputs": list(argv),
        "outputs": outputs,
        "certificates": certs,
        "version": __version__,
        "seed": args.seed,
    }
    if args.timings:
        rep["timings"] = dict(args._timings, backend=kernels.BACKEND)
    return rep


def main(argv=None):
    from .report import dumps
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)      # argparse exits 2 on usage errors, 0 on --help
    args._timings = {}
    if args.format == "csv" and args.command not in ("enumerate", "profile", "scan"):
        print("cantor-dioph: --format csv is available for enumerate, profile and scan", file=sys.stderr)
        return EXIT_USAGE
    t0 = time.perf_counter()
    try:
        code, outputs, certs = args.func(args)
    except (CliUsage, UsageError, BudgetExceeded, ValueError) as exc:
        print("cantor-dioph: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except CantorDiophError as exc:
        outputs, certs, code = {"error": type(exc).__name__, "message": str(exc)}, {}, EXIT_FAIL
    args._timings.setdefault("total", round(time.perf_counter() - t0, 3))
    if isinstance(outputs, str):
        sys.stdout.write(outputs)
    else:
        sys.stdout.write(dumps(_report(args, argv, outputs, certs)) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
