"""Disintegration of a spectral measure over the eigenvalue axis.

A partition of the eigenvectors into *shells* (one per distinct eigenvalue,
or uniform eigenvalue bins) turns the measure of ``h`` into a marginal mass
per shell and a normalized conditional measure inside each shell.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .measure import BorelSet

ADDITIVITY_ATOL = 1e-15


@dataclass(frozen=True)
class ShellPartition:
    mode: str = "atom"
    delta: float = None

    def __post_init__(self):
        if self.mode not in ("atom", "bin"):
            raise ValidationError(f"shell mode must be 'atom' or 'bin', got {self.mode!r}")
        if self.mode == "bin" and self.delta is not None:
            if not (math.isfinite(self.delta) and self.delta > 0):
                raise ValidationError(f"bin width must be positive, got {self.delta}")


def default_delta(eigenvalues):
    lam = np.asarray(eigenvalues, dtype=float)
    spread = lam.max() - lam.min()
    return spread / math.ceil(math.sqrt(lam.size)) if spread > 0 else 1.0


@dataclass(frozen=True, eq=False)
class Shell:
    lambda_rep: float
    sigma_mass: float
    indices: np.ndarray
    conditional: np.ndarray

    def conditional_measure(self, mask):
        """Conditional measure of the eigenvectors selected by ``mask``."""
        return float(math.fsum(self.conditional[mask[self.indices]]))


@dataclass(frozen=True, eq=False)
class Disintegration:
    """Shells ordered by representative eigenvalue.

    ``eigenvalues`` are the merged per-eigenvector eigenvalues (the map ``q``)
    and ``index_weights`` the per-eigenvector masses the shells split up.
    """

    shells: tuple
    eigenvalues: np.ndarray
    index_weights: np.ndarray
    mode: str
    delta: float = None

    @property
    def total_mass(self):
        return float(math.fsum(s.sigma_mass for s in self.shells))

    def conditional_measure(self, C):
        """``tau_lambda(C)`` for every shell."""
        mask = C.mask(self.eigenvalues)
        return np.array([s.conditional_measure(mask) for s in self.shells])

    def marginal(self):
        """Per-eigenvector mass recovered as ``sigma_mass * conditional``."""
        out = np.zeros(self.eigenvalues.size)
        for s in self.shells:
            out[s.indices] += s.sigma_mass * s.conditional
        return out

    def nonzero(self):
        return tuple(s for s in self.shells if s.sigma_mass > 0)


def _shell(q, weights, idx, rep_if_empty):
    mass = float(math.fsum(weights[idx]))
    if mass > 0:
        cond = weights[idx] / mass
        rep = float(np.sum(weights[idx] * q[idx]) / mass)
    else:
        cond = np.zeros(idx.size)
        rep = float(np.mean(q[idx])) if idx.size else rep_if_empty
    return Shell(rep, mass, idx, cond)


def disintegrate(measure, part=ShellPartition()):
    """Split ``measure`` (which must keep its per-eigenvector detail) into shells."""
    if measure.index_weights is None:
        raise ValidationError("disintegration needs per-eigenvector weights")
    labels = measure.labels
    q = measure.lambdas[labels]
    w = np.asarray(measure.index_weights, dtype=float)
    shells = []
    if part.mode == "atom":
        for k, lam in enumerate(measure.lambdas):
            idx = np.flatnonzero(labels == k)
            s = _shell(q, w, idx, float(lam))
            # the atom value itself, not a weighted mean of merged neighbours
            shells.append(Shell(float(lam), s.sigma_mass, s.indices, s.conditional))
        return Disintegration(tuple(shells), q, w, "atom")

    delta = default_delta(q) if part.delta is None else float(part.delta)
    if not (math.isfinite(delta) and delta > 0):
        raise ValidationError(f"bin width must be positive, got {delta}")
    lo, hi = float(q.min()), float(q.max())
    nbins = max(1, math.ceil((hi - lo) / delta))
    # half-open bins [a, a + delta); the top bin also takes its right edge
    which = np.minimum(np.floor((q - lo) / delta).astype(int), nbins - 1)
    for j in range(nbins):
        idx = np.flatnonzero(which == j)
        shells.append(_shell(q, w, idx, lo + (j + 0.5) * delta))
    return Disintegration(tuple(shells), q, w, "bin", delta)


def consistency_check(d, C, f):
    """Both sides of ``int_C f(q) d nu = int f(lambda) tau_lambda(C) d sigma``.

    Equal up to rounding in atom mode; in bin mode they differ by at most
    ``Lip(f) * delta * total mass``.
    """
    mask = C.mask(d.eigenvalues)
    q = d.eigenvalues
    lhs = math.fsum((np.asarray(f(q[mask]), dtype=float) * d.index_weights[mask]).tolist())
    taus = d.conditional_measure(C)
    reps = np.array([s.lambda_rep for s in d.shells])
    masses = np.array([s.sigma_mass for s in d.shells])
    rhs = math.fsum((np.asarray(f(reps), dtype=float) * taus * masses).tolist())
    return lhs, rhs


def shell_additivity(d, C1, C2):
    """Check ``tau(C1 u C2) = tau(C1) + tau(C2)`` on every shell for disjoint ``C1``, ``C2``."""
    m1 = C1.mask(d.eigenvalues)
    m2 = C2.mask(d.eigenvalues)
    if np.any(m1 & m2):
        raise ValidationError("sets must be disjoint")
    union = BorelSet.from_mask(m1 | m2)
    lhs = d.conditional_measure(union)
    rhs = d.conditional_measure(C1) + d.conditional_measure(C2)
    return bool(np.all(np.abs(lhs - rhs) <= ADDITIVITY_ATOL))
