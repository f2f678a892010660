"""Assembled eigenfunctionals of multiplication by x against point evaluation.

For h = 1 and g(x) = sin(a x) the shell functional at the k-th midpoint is the
cell average of g, so its distance to g(x_k) is bounded by the midpoint rule,
a^2 / (24 n^2). Prints the observed error, the bound and the order per rung.
"""

import argparse
import math
from dataclasses import dataclass

import numpy as np

from spectral_shadow import (RiggingWeights, assemble, disintegrate, eigh, project,
                             spectral_measure)
from spectral_shadow.gallery import OperatorSpec


@dataclass
class Config:
    dims: tuple = (16, 32, 64, 128, 256, 512)
    frequency: float = 3.0
    interval: tuple = (0.0, 1.0)


def run(cfg):
    spec = OperatorSpec("multiplication", {"interval": list(cfg.interval)})
    length = cfg.interval[1] - cfg.interval[0]
    prev = None
    print(f"{'n':>6} {'max error':>12} {'bound':>12} {'order':>8}")
    for n in cfg.dims:
        system = project(spec, n)
        basis = eigh(system.op)
        h = system.embed.constant()
        sys_ = assemble(disintegrate(spectral_measure(basis, h)), basis,
                        RiggingWeights.generate(n), h)
        vals = sys_.values(system.embed.coordinates(lambda x: np.sin(cfg.frequency * x)))
        err = np.abs(vals - np.sin(cfg.frequency * sys_.lambdas()))[1:-1].max()
        bound = cfg.frequency**2 * length**2 / (24 * n**2)
        order = "" if prev is None else f"{math.log(prev[1] / err) / math.log(n / prev[0]):8.4f}"
        print(f"{n:6d} {err:12.4e} {bound:12.4e} {order:>8}")
        prev = (n, err)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--dims", default="16,32,64,128,256,512")
    p.add_argument("--frequency", type=float, default=3.0)
    args = p.parse_args()
    run(Config(tuple(int(d) for d in args.dims.split(",")), args.frequency))


if __name__ == "__main__":
    main()
