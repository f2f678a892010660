"""Moments of the spectral measure of e_1 for the free Jacobi matrix.

The Ritz measure at dimension n is the n-point Gauss rule of the semicircle
law, so moment 2k equals the Catalan number C_k exactly while 2k <= 2n - 1
and drifts once the rule stops being exact.
"""

import argparse
from math import comb

from spectral_shadow import eigh, project, spectral_measure
from spectral_shadow.gallery import OperatorSpec


def catalan(k):
    return comb(2 * k, k) // (k + 1)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--dims", default="2,4,8,16")
    p.add_argument("--max-k", type=int, default=8)
    args = p.parse_args()
    dims = [int(d) for d in args.dims.split(",")]
    print("k  catalan " + " ".join(f"{'n=' + str(n):>16}" for n in dims))
    measures = []
    for n in dims:
        system = project(OperatorSpec("free_jacobi"), n)
        h = [1.0] + [0.0] * (n - 1)
        measures.append(spectral_measure(eigh(system.op), h))
    for k in range(args.max_k + 1):
        row = " ".join(f"{m.moment(2 * k):16.10f}" for m in measures)
        print(f"{k:<2} {catalan(k):>7} {row}")


if __name__ == "__main__":
    main()
