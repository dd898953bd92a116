"""Timing comparison of the numba and numpy kernel paths.

Run with `python3 benchmarks/bench_kernels.py`.  Each kernel is warmed
once per backend (numba JIT compilation happens there), then timed over
`--repeat` runs; the table reports the best run and the speedup of
numba over numpy.  Both paths must return identical results; this is
asserted on every run.
"""
import argparse
import time

from skewlab import kernels
from skewlab.catalog import get_ring, get_system
from skewlab.poly import monomial_product_table, monomials_upto, sigma_power_tables
from skewlab.properties import SearchBudget, _enumerate_polys
from skewlab.rings import make_zn

BACKENDS = ("numba", "numpy") if kernels.HAVE_NUMBA else ("numpy",)


def best_of(fn, repeat):
    out = None
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


def bench_law_sweeps(repeat):
    ring = make_zn(257)  # 257^3 = 17M triples per law
    rows = []
    for backend in BACKENDS:
        fn = lambda: (
            kernels.associativity_witness(ring.mul_table, backend=backend),
            kernels.distributivity_witness(ring.add_table, ring.mul_table, backend=backend),
        )
        fn()  # warm
        out, dt = best_of(fn, repeat)
        assert out == (None, None)
        rows.append((backend, dt))
    return "law sweeps on Z257 (2x 17M triples)", rows


def bench_nil_mask(repeat):
    ring = make_zn(4093)
    rows = []
    for backend in BACKENDS:
        fn = lambda: kernels.nilpotent_mask(ring.mul_table, ring.zero, backend=backend)
        ref = fn()
        out, dt = best_of(fn, repeat)
        assert (out == ref).all()
        rows.append((backend, dt))
    return "nilpotent mask on Z4093", rows


def bench_zero_product_search(repeat):
    sys_ = get_system("untwisted(M2(Z2))")
    ring = sys_.ring
    D = 2
    exps = monomials_upto(sys_.n, D, sys_.order)
    stc = monomial_product_table(sys_, exps, monomials_upto(sys_.n, 2 * D, sys_.order))
    sig = sigma_power_tables(sys_.sigma, exps)
    polys, deg_starts = _enumerate_polys(ring, exps, SearchBudget(degree_bound=D))
    rows = []
    ref = None
    for backend in BACKENDS:
        fn = lambda: kernels.search_zero_products_table(
            polys, deg_starts, ring.add_table, ring.mul_table,
            sig, stc, ring.nil_mask(), ring.zero, 0, True, backend=backend,
        )
        out = fn()  # warm
        ref = ref or out
        out, dt = best_of(fn, repeat)
        assert out == ref
        rows.append((backend, dt))
    return f"zero-product search M2(Z2) D={D} ({ref[1]} pairs)", rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"backends: {', '.join(BACKENDS)}")
    for bench in (bench_law_sweeps, bench_nil_mask, bench_zero_product_search):
        title, rows = bench(args.repeat)
        print(f"\n{title}")
        base = dict(rows).get("numpy")
        for backend, dt in rows:
            speed = f"  ({base / dt:5.1f}x vs numpy)" if backend == "numba" and base else ""
            print(f"  {backend:6s} {dt * 1000:10.1f} ms{speed}")


if __name__ == "__main__":
    main()
