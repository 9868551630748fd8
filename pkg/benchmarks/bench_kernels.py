"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--qubits 8 12 16] [--repeat 5]

Prints one CSV row per (kernel, qubits) with the best per-call time of each
backend in microseconds and the speedup.
"""
import argparse
import csv
import sys
import timeit

import numpy as np

from qseal.kernels import available_backends


def random_state(n, seed=0):
    g = np.random.default_rng(seed)
    v = g.normal(size=1 << n) + 1j * g.normal(size=1 << n)
    return v / np.linalg.norm(v)


def cases(n):
    h = 2**-0.5
    half = (1 << n) - 1
    xmask, zmask = 0b1011 & half, 0b0110 & half
    return {
        "apply_1q": lambda k, psi: k.apply_1q(psi, n // 2, h, h, h, -h),
        "apply_cnot": lambda k, psi: k.apply_cnot(psi, 0, n - 1),
        "apply_cswap": lambda k, psi: k.apply_cswap(psi, 0, 1, n - 1),
        "pauli_expectation": lambda k, psi: k.pauli_expectation(psi, xmask, zmask, 1),
        "prob_one": lambda k, psi: k.prob_one(psi, n - 1),
        "masked_weight": lambda k, psi: k.masked_weight(psi, half, n // 2),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qubits", type=int, nargs="+", default=[8, 12, 16])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; run pip install -e . first", file=sys.stderr)
        return 1
    py, cy = backends["numpy"], backends["cython"]

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["kernel", "qubits", "numpy_us", "cython_us", "speedup"])
    for n in args.qubits:
        # fewer calls per timing on larger states
        number = max(1, 2**16 >> n) * 10
        for name, call in cases(n).items():
            best = {}
            for label, mod in (("numpy", py), ("cython", cy)):
                psi = random_state(n)
                t = min(timeit.repeat(lambda: call(mod, psi), number=number, repeat=args.repeat))
                best[label] = t / number * 1e6
            out.writerow([name, n, f"{best['numpy']:.2f}", f"{best['cython']:.2f}", f"{best['numpy'] / best['cython']:.1f}"])
    return 0


if __name__ == "__main__":
    sys.exit(main())
