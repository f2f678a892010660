"""Generalized eigenfunctionals assembled shell by shell.

For a shell of the disintegration of ``h`` the assembled functional is

    omega = sum_{b in shell, b in B_h} tau(b) * eta_b / eta_b(h)

which reduces to ``E_shell h / ||E_shell h||^2``. It is normalized so that
``omega(h) = 1`` and, in atom mode, depends only on the shell's spectral
projector. Only evaluations ``omega(g)`` are meant to be compared across
rungs; the coefficient vectors are internal.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ValidationError
from .gallery import project, prolongation
from .hermitian import as_vector
from .measure import BorelSet
from .rigging import Eigenfunctional, dual_unit

NULL_DUAL_NORM = 1e-10
SUPPORT_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class Support:
    """Eigenvectors with ``eta_b(h)`` above threshold, and the measure of ``h`` left outside."""

    borel: BorelSet
    mask: np.ndarray
    excluded_mass: float
    eps: float
    eta_h: np.ndarray


def _eta_values(basis, w, h):
    """``eta_b(h) = <h, eta_b>`` for every eigenvector."""
    norms = np.sqrt(np.sum(w.weights[:, None] ** -2.0 * np.abs(basis.vectors) ** 2, axis=0))
    return np.conj(basis.coefficients(h)) / norms


def support_set(basis, w, h, eps=None):
    """Indices with ``|eta_b(h)| > eps``; ``eps`` defaults to ``1e-8 * median |eta_b(h)|``."""
    h = as_vector(h, basis.n, "h")
    if not np.any(h):
        raise ValidationError("generating vector h must be nonzero")
    eta_h = _eta_values(basis, w, h)
    mags = np.abs(eta_h)
    if eps is None:
        eps = SUPPORT_RTOL * float(np.median(mags))
    mask = mags > eps
    weights = np.abs(basis.coefficients(h)) ** 2
    excluded = float(np.sum(weights[~mask]))
    return Support(BorelSet.from_mask(mask), mask, excluded, eps, eta_h)


@dataclass(frozen=True, eq=False)
class GelfandShell:
    lambda_rep: float
    functional: Eigenfunctional
    sigma_mass: float
    indices: np.ndarray
    null: bool = False


@dataclass(frozen=True, eq=False)
class GelfandSystem:
    shells: tuple
    support: Support
    h: np.ndarray
    mode: str = "atom"

    def values(self, g):
        """``omega(g)`` per shell."""
        return np.array([s.functional(g) for s in self.shells])

    def lambdas(self):
        return np.array([s.lambda_rep for s in self.shells])

    def masses(self):
        return np.array([s.sigma_mass for s in self.shells])


def assemble(d, basis, w, h, eps=None):
    """Average the renormalized eigenvectors of each shell against its conditional measure."""
    h = as_vector(h, basis.n, "h")
    if d.eigenvalues.size != basis.n:
        raise DimensionError("disintegration and basis have different dimensions")
    sup = support_set(basis, w, h, eps)
    shells = []
    for s in d.nonzero():
        coeffs = np.zeros(basis.n, dtype=complex)
        for b, tau in zip(s.indices, s.conditional):
            if not sup.mask[b]:
                continue
            eta = dual_unit(w, basis.vectors[:, b], int(b))
            coeffs += tau * eta.coeffs / sup.eta_h[b]
        omega = Eigenfunctional(coeffs, "assembled", s.lambda_rep)
        null = omega.dual_norm(w) < NULL_DUAL_NORM
        shells.append(GelfandShell(s.lambda_rep, omega, s.sigma_mass, s.indices, null))
    return GelfandSystem(tuple(shells), sup, h, d.mode)


def weak_integral(sys, lam):
    """Coefficients of ``int_{-inf}^{lam} omega_mu d sigma(mu)``; equals ``E_lam h`` in atom mode."""
    out = np.zeros_like(sys.h)
    for s in sys.shells:
        if s.lambda_rep <= lam:
            out = out + s.sigma_mass * s.functional.coeffs
    return out


def reconstruct(sys, fam, g, h, lam):
    """``(<g, E_lam h>, sum_{shells <= lam} omega(g) * mass)``."""
    g = as_vector(g, fam.basis.n, "g")
    lhs = complex(np.vdot(g, fam.apply(lam, h)))
    rhs = complex(sum(s.functional(g) * s.sigma_mass
                      for s in sys.shells if s.lambda_rep <= lam))
    return lhs, rhs


def default_test_vectors(n, h, count=8):
    """The first ``min(count, n)`` reference basis vectors followed by ``h``."""
    eye = np.eye(n, dtype=complex)
    return [eye[k] for k in range(min(count, n))] + [as_vector(h, n, "h")]


def eigenfunctional_residual(sys, spec, n_fine, test_vectors=None):
    """Per shell, ``max_g |omega(u g) - lambda omega(g)| / ||g||`` with ``u`` the rung-``n_fine`` operator.

    ``omega`` is carried to the fine rung by the family's prolongation.
    Default test vectors are the coarse defaults (first reference vectors and
    ``h``) prolongated; explicit ``test_vectors`` are fine-rung coordinates.
    """
    n = sys.h.size
    if n_fine <= n:
        raise DimensionError(f"residual rung n'={n_fine} must exceed n={n}")
    p = prolongation(spec, n, n_fine)
    fine = project(spec, n_fine).op.matrix
    if test_vectors is None:
        tests = [p @ g for g in default_test_vectors(n, sys.h)]
    else:
        tests = [as_vector(g, n_fine, "test vector") for g in test_vectors]
    out = []
    for s in sys.shells:
        omega = p @ s.functional.coeffs
        worst = 0.0
        for g in tests:
            norm = np.linalg.norm(g)
            if norm == 0:
                continue
            r = abs(np.vdot(fine @ g, omega) - s.lambda_rep * np.vdot(g, omega)) / norm
            worst = max(worst, r)
        out.append(worst)
    return np.array(out)
