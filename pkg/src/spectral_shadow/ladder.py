"""Dimension ladders: the same observables computed at increasing ``n``, with
consecutive differences and observed convergence orders.

The limit value of an observable is read off the ladder; the order estimate at
rung ``i`` is ``log(|d_{i-1}| / |d_i|) / log(n_i / n_{i-1})`` where ``d_i`` is
the difference to the previous rung (``log2(e_n / e_2n)`` for doubling dims).
"""

import hashlib
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import StageError, ValidationError
from .gelfand import reconstruct
from .pipeline import build_rung, default_grid
from .rigging import ratio_excluded_mass

THREADS_ENV = "SPECTRAL_SHADOW_THREADS"
DIFF_FLOOR = 1e-13


@dataclass(frozen=True)
class Ladder:
    dims: tuple = (16, 32, 64, 128)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) < 2:
            raise ValidationError("a ladder needs at least two rungs", path="$.pipeline.dims")
        if any(d < 2 for d in dims) or any(b <= a for a, b in zip(dims, dims[1:])):
            raise ValidationError(f"ladder dims must be >= 2 and strictly increasing: {dims}",
                                  path="$.pipeline.dims")
        if 2 * dims[-1] >= 2**31:
            raise ValidationError("ladder dims too large", path="$.pipeline.dims")
        object.__setattr__(self, "dims", dims)


@dataclass(frozen=True)
class ReportRow:
    observable: str
    n: int
    value: float
    diff: float = None
    order: float = None


@dataclass(frozen=True, eq=False)
class ConvergenceReport:
    rows: tuple
    metadata: dict

    def observables(self):
        return list(dict.fromkeys(r.observable for r in self.rows))

    def series(self, name):
        return [r for r in self.rows if r.observable == name]

    def values(self, name):
        return np.array([r.value for r in self.series(name)])

    def orders(self, name):
        return [r.order for r in self.series(name) if r.order is not None]

    def as_rows(self):
        return [(r.observable, r.n, r.value, r.diff, r.order) for r in self.rows]


def _tag(x):
    return format(float(x), ".12g")


def observe(spec, config, n, grid):
    """Observable name -> value at rung ``n``, in a fixed order."""
    rung = build_rung(spec, config, n)
    try:
        out = {}
        for lam in grid:
            out[f"sigma@{_tag(lam)}"] = rung.family.sigma(lam, rung.h)
        for k in config.moments:
            out[f"moment[{k}]"] = rung.measure.moment(k)
        lambdas = rung.gelfand.lambdas()
        for name, g in rung.tests:
            vals = rung.gelfand.values(g)
            for lam in grid:
                out[f"omega[{name}]@{_tag(lam)}:re"] = float(np.interp(lam, lambdas, vals.real))
                out[f"omega[{name}]@{_tag(lam)}:im"] = float(np.interp(lam, lambdas, vals.imag))
        out["support_excluded_mass"] = rung.gelfand.support.excluded_mass
        out["ratio_excluded_mass"] = ratio_excluded_mass(rung.basis, rung.h)
        gap = 0.0
        for _, g in rung.tests:
            for lam in grid:
                lhs, rhs = reconstruct(rung.gelfand, rung.family, g, rung.h, lam)
                gap = max(gap, abs(lhs - rhs))
        out["reconstruct_gap"] = gap
    except Exception as exc:
        raise StageError(n, "observe", exc) from exc
    return out


def _digest(obj):
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def worker_count(jobs):
    cap = os.environ.get(THREADS_ENV)
    limit = os.cpu_count() or 1
    if cap:
        try:
            limit = max(1, int(cap))
        except ValueError:
            raise ValidationError(f"{THREADS_ENV} must be an integer, got {cap!r}") from None
    return max(1, min(jobs, limit))


def ladder_run(spec, ladder, config):
    """Evaluate every observable on every rung and assemble the convergence report."""
    if not isinstance(ladder, Ladder):
        ladder = Ladder(tuple(ladder))
    grid = config.lambda_grid
    if grid is None:
        grid = default_grid(build_rung(spec, config, ladder.dims[0]).basis)
    with ThreadPoolExecutor(max_workers=worker_count(len(ladder.dims))) as pool:
        results = list(pool.map(lambda n: observe(spec, config, n, grid), ladder.dims))
    rows = []
    for name in results[0]:
        prev_value = prev_diff = prev_n = None
        for n, res in zip(ladder.dims, results):
            value = res[name]
            diff = order = None
            if prev_value is not None:
                diff = value - prev_value
                floor = DIFF_FLOOR * max(1.0, abs(value))
                if prev_diff is not None and abs(prev_diff) > floor and abs(diff) > floor:
                    order = math.log(abs(prev_diff) / abs(diff)) / math.log(n / prev_n)
            rows.append(ReportRow(name, n, value, diff, order))
            prev_value, prev_diff, prev_n = value, diff, n
    cfg = config.to_dict()
    cfg.pop("output_dir")
    meta = {
        "spec_hash": _digest(spec.to_dict()),
        "config_hash": _digest(cfg),
        "version": __version__,
        "dims": list(ladder.dims),
        "lambda_grid": [float(x) for x in grid],
    }
    return ConvergenceReport(tuple(rows), meta)
