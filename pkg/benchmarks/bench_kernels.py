"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--q 20000 200000] [--repeat 3]

Prints one line per (kernel, q) with the best-of-repeat wall time of each
backend and the speed-up, after checking that both return the same result.
"""
import argparse
import sys
import timeit

from cantor_dioph import _pykernels

try:
    from cantor_dioph import _ckernels
except ImportError:
    _ckernels = None


def wmask(b, W):
    return bytes(1 if d in W else 0 for d in range(b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--q", type=int, nargs="+", default=[10 ** 4, 10 ** 5, 10 ** 6])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--b", type=int, default=3)
    ap.add_argument("--W", default="0,2")
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    m = wmask(args.b, {int(w) for w in args.W.split(",")})
    print("%-17s %10s %12s %12s %9s" % ("kernel", "q", "python [s]", "cython [s]", "speed-up"))
    for name in ("member_mask", "first_bad_digits"):
        py, cy = getattr(_pykernels, name), getattr(_ckernels, name)
        for q in args.q:
            if list(py(args.b, m, q)) != list(cy(args.b, m, q)):
                print("%s: backends disagree at q = %d" % (name, q), file=sys.stderr)
                return 2
            t_py = min(timeit.repeat(lambda: py(args.b, m, q), number=1, repeat=args.repeat))
            t_cy = min(timeit.repeat(lambda: cy(args.b, m, q), number=1, repeat=args.repeat))
            print("%-17s %10d %12.5f %12.5f %8.1fx" % (name, q, t_py, t_cy, t_py / t_cy))
    return 0


if __name__ == "__main__":
    sys.exit(main())
