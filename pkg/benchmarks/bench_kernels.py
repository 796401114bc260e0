"""Compare the compiled and pure-Python kernel backends.

Run with ``python benchmarks/bench_kernels.py``. Times the Schur QR sweep on
random unitaries and a Trotter product built from pair rotations, and checks
both backends return the same result.
"""
import argparse
import time

import numpy as np

from sparselog import graphcore, kernels, models, opalg, trotterize


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_qr(mod, h0, z0):
    def run():
        h, z = h0.copy(), z0.copy()
        mod.hessenberg_qr(h, z, 30 * h.shape[0])
        return np.diag(h)
    return run


def bench_trotter(mod, plan):
    pairs = [(np.array([e[0] for e in c], dtype=np.intp), np.array([e[1] for e in c], dtype=np.intp))
             for c in plan.coloring.classes]
    order = list(range(plan.m)) + list(reversed(range(plan.m)))
    c, s = np.cos(plan.delta), 1j * np.sin(plan.delta)

    def run():
        out = np.eye(plan.graph.n, dtype=np.complex128)
        for _ in range(plan.steps):
            for j in order:
                mod.apply_pair_rotations(out, pairs[j][0], pairs[j][1], c, s)
        return out
    return run


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[32, 64, 128])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    found = kernels.backends()
    names = sorted(found)
    print(f"backends: {', '.join(names)} (default {kernels.BACKEND})")
    print(f"{'kernel':<28}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")

    rng = np.random.default_rng(0)
    for n in args.sizes:
        h0, z0 = opalg.hessenberg(models.haar_unitary(n, rng))
        res = {name: best_of(bench_qr(found[name], h0, z0), args.repeat) for name in names}
        report(f"schur QR sweep n={n}", res)

    for n in args.sizes:
        plan = trotterize.make_plan(graphcore.Graph.complete(min(n, 24)) if n < 24 else graphcore.Graph.ring(n),
                                    5.0, 0.005)
        res = {name: best_of(bench_trotter(found[name], plan), args.repeat) for name in names}
        report(f"trotter {plan.factor_count()} factors n={plan.graph.n}", res)


def report(label, res):
    names = sorted(res)
    outs = [res[n][1] for n in names]
    agree = all(np.allclose(o, outs[0], atol=1e-10) for o in outs)
    line = f"{label:<28}" + "".join(f"{res[n][0] * 1e3:>10.2f}ms" for n in names)
    if "cython" in res:
        line += f"{res['python'][0] / res['cython'][0]:>9.1f}x"
    print(line + ("" if agree else "  MISMATCH"))


if __name__ == "__main__":
    main()
