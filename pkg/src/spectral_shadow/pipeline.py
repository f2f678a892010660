"""One rung of the full pipeline: projection, eigenbasis, measure, shells and
assembled eigenfunctionals, plus the row builders behind each CLI output."""

from dataclasses import dataclass

import numpy as np

from .config import resolve_vector
from .disintegration import ShellPartition, disintegrate
from .errors import StageError
from .gallery import project, refine
from .gelfand import assemble, eigenfunctional_residual, reconstruct
from .hermitian import eigh
from .measure import SpectralFamily, spectral_measure
from .rigging import RiggingWeights

GRID_POINTS = 21


@dataclass(frozen=True, eq=False)
class Rung:
    spec: object
    config: object
    system: object
    basis: object
    h: np.ndarray
    tests: tuple
    weights: object
    family: object
    measure: object
    disintegration: object
    gelfand: object

    @property
    def n(self):
        return self.system.n


def build_rung(spec, config, n=None):
    """Run every stage at dimension ``n``; failures name the rung and stage."""
    n = spec.n if n is None else n
    stage = "project"
    try:
        system = project(spec, n)
        n = system.n
        stage = "eigh"
        basis = eigh(system.op)
        stage = "vectors"
        h = resolve_vector(config.probe, system)
        tests = tuple((name, resolve_vector(name, system)) for name in config.test_vectors)
        stage = "measure"
        measure = spectral_measure(basis, h)
        family = SpectralFamily(basis, config.bounded_cut)
        stage = "disintegrate"
        d = disintegrate(measure, ShellPartition(config.shell_mode, config.delta))
        stage = "assemble"
        weights = RiggingWeights.generate(n, config.s)
        gsys = assemble(d, basis, weights, h)
    except StageError:
        raise
    except Exception as exc:
        raise StageError(n, stage, exc) from exc
    return Rung(spec, config, system, basis, h, tests, weights, family, measure, d, gsys)


def default_grid(basis, points=GRID_POINTS):
    lam = basis.eigenvalues
    return tuple(np.linspace(lam[0], lam[-1], points).tolist())


def grid_for(rung):
    return rung.config.lambda_grid or default_grid(rung.basis)


def spectrum_rows(rung):
    b = rung.basis
    return [(i, b.eigenvalues[i], b.residuals[i]) for i in range(b.n)]


def measure_rows(rung):
    m = rung.measure
    return [(k, m.lambdas[k], m.weights[k]) for k in range(m.lambdas.size)]


def staircase_rows(rung):
    lam, cum = rung.measure.staircase()
    return list(zip(lam.tolist(), cum.tolist()))


def family_rows(rung):
    return [(lam, rung.family.sigma(lam, rung.h)) for lam in grid_for(rung)]


def disintegration_rows(rung):
    rows = []
    for k, s in enumerate(rung.disintegration.shells):
        for idx, c in zip(s.indices.tolist(), s.conditional.tolist()):
            rows.append((k, idx, s.lambda_rep, s.sigma_mass, c))
    return rows


def eigenfunctional_rows(rung):
    rows = []
    for s in rung.gelfand.shells:
        dn = s.functional.dual_norm(rung.weights)
        for k, c in enumerate(s.functional.coeffs.tolist()):
            rows.append((s.lambda_rep, k, c.real, c.imag, dn))
    return rows


def summary_rows(rung):
    n_fine = refine(rung.spec, rung.n)
    if n_fine is None:
        residual = [None] * len(rung.gelfand.shells)
    else:
        residual = eigenfunctional_residual(rung.gelfand, rung.spec, n_fine).tolist()
    rows = []
    for s, r in zip(rung.gelfand.shells, residual):
        gap = max(abs(np.subtract(*reconstruct(rung.gelfand, rung.family, g, rung.h, s.lambda_rep)))
                  for _, g in rung.tests)
        rows.append((s.lambda_rep, s.sigma_mass, r, gap))
    return rows


def reconstruct_rows(rung):
    g = rung.tests[0][1]
    rows = []
    for lam in grid_for(rung):
        lhs, rhs = reconstruct(rung.gelfand, rung.family, g, rung.h, lam)
        rows.append((lam, lhs.real, lhs.imag, rhs.real, rhs.imag, abs(lhs - rhs)))
    return rows
