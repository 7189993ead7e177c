"""Time the compiled and pure-Python search backends on the same problems.

    python3 benchmarks/bench_search.py [--repeat N]
"""
import argparse
import time

from gpdz2 import search
from gpdz2.equivariant import check_I, equivariant_problem, free_S, nabla, ztwo_product
from gpdz2.groupoid import interval
from gpdz2.universe import build_universe


def cases():
    U2 = build_universe(2).U
    yield "nabla -> U(2)", nabla(), U2
    yield "S(I) -> U(2)", free_S(interval()), U2
    yield "nabla x nabla -> nabla", ztwo_product(nabla(), nabla()).object, nabla()
    yield "U(2) -> U(2)", U2, U2
    yield "check_I -> U(3)", check_I(), build_universe(3).U


def best(fn, p, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(p)
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if search.compiled_search is None:
        raise SystemExit("compiled backend not built; run `pip install -e . --no-build-isolation`")
    print(f"{'problem':28} {'maps':>7} {'nodes':>9} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for name, X, A in cases():
        p = equivariant_problem(X, A)
        tp, rp = best(search.python_search, p, args.repeat)
        tc, rc = best(search.compiled_search, p, args.repeat)
        assert rp == rc, f"backends disagree on {name}"
        print(f"{name:28} {rp[1]:7d} {rp[2]:9d} {tp:10.4f} {tc:11.5f} {tp / max(tc, 1e-9):7.1f}x")


if __name__ == "__main__":
    main()
