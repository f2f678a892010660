"""Nuclear and dual scalar products from a diagonal weight operator, and the
renormalized eigenvector functionals built from them.

The weight operator ``j`` is diagonal in the reference basis with entries
``w_k``. Then ``[x, y] = sum w_k^2 conj(x_k) y_k`` and the dual product is
``{x, y} = sum w_k^-2 conj(x_k) y_k``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ValidationError
from .hermitian import as_vector, _frozen
from .measure import L2Element

RATIO_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class RiggingWeights:
    weights: np.ndarray
    s: float = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size < 1:
            raise DimensionError("weights must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValidationError("weights must be finite and positive")
        object.__setattr__(self, "weights", _frozen(w))

    @classmethod
    def generate(cls, n, s=2.0):
        """``w_k = (1 + k)^s`` for ``k = 0 .. n-1``."""
        return cls((1.0 + np.arange(n)) ** s, float(s))

    @property
    def n(self):
        return self.weights.size

    @property
    def nuclear_trace(self):
        """``sum w_k^-2``: the trace over a [,]-orthonormal family."""
        return float(math.fsum((self.weights**-2.0).tolist()))

    @property
    def hypersum_sigma(self):
        """``sum sqrt(<g, g>)`` over the [,]-orthonormal, <,>-orthogonal basis ``e_k / w_k``."""
        return float(math.fsum((1.0 / self.weights).tolist()))

    def sigma_bound(self):
        """Dimension-free bound on ``hypersum_sigma``; None when no such bound exists."""
        if self.s is None:
            return None
        return 1.0 + 1.0 / (self.s - 1.0) if self.s > 1 else None

    def check_hypersum(self, bound=None):
        """Raise unless the hypersum stays bounded independently of the dimension."""
        if bound is None:
            bound = self.sigma_bound()
            if bound is None:
                hint = f"s={self.s} <= 1" if self.s is not None else "no bound given"
                raise ValidationError(f"hypersum of weights is not uniformly bounded ({hint})")
        sigma = self.hypersum_sigma
        if not math.isfinite(sigma) or sigma > bound:
            raise ValidationError(f"hypersum {sigma:.6g} exceeds bound {bound:.6g}")
        return sigma

    def _pair(self, x, y, power):
        x = as_vector(x, name="x")
        y = as_vector(y, name="y")
        if x.size != self.n or y.size != self.n:
            raise DimensionError(f"vectors of length {x.size}, {y.size} vs weights of length {self.n}")
        return complex(np.sum(self.weights**power * np.conj(x) * y))


def nuclear_dot(w, x, y):
    return w._pair(x, y, 2.0)


def dual_dot(w, x, y):
    return w._pair(x, y, -2.0)


def dual_norm(w, x):
    return math.sqrt(max(dual_dot(w, x, x).real, 0.0))


def nuclear_norm(w, x):
    return math.sqrt(max(nuclear_dot(w, x, x).real, 0.0))


@dataclass(frozen=True, eq=False)
class Eigenfunctional:
    """Antilinear form ``g -> <g, coeffs>`` represented by a coefficient vector.

    ``kind`` is ``"dual_unit"``, ``"ratio"`` or ``"assembled"``; ``label``
    carries the eigenvector index or eigenvalue it was built for.
    """

    coeffs: np.ndarray
    kind: str
    label: object = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen(np.asarray(self.coeffs, dtype=complex)))

    def __call__(self, g):
        return complex(np.vdot(as_vector(g, self.coeffs.size, "g"), self.coeffs))

    def dual_norm(self, w):
        return dual_norm(w, self.coeffs)

    def is_zero(self):
        return not np.any(self.coeffs)


def dual_unit(w, b, label=None):
    """``b / sqrt({b, b})``, of norm 1 for the dual product."""
    b = as_vector(b, w.n, "b")
    norm = dual_norm(w, b)
    if norm == 0.0:
        raise ValidationError("cannot renormalize the zero vector")
    return Eigenfunctional(b / norm, "dual_unit", label)


def ratio_threshold(x, eps=None):
    return RATIO_RTOL * np.linalg.norm(x) if eps is None else eps


def ratio_functional(basis, w, x, index, eps=None):
    """``b / <x, b>`` for eigenvector ``index``; the zero functional when ``|<x, b>| <= eps``.

    Evaluated on ``g`` it gives ``<g, b> / <x, b>``. ``eps`` defaults to
    ``1e-8 * ||x||``.
    """
    x = as_vector(x, basis.n, "x")
    b = basis.vectors[:, index]
    overlap = np.vdot(x, b)
    if abs(overlap) <= ratio_threshold(x, eps):
        return Eigenfunctional(np.zeros(basis.n, dtype=complex), "ratio", int(index))
    return Eigenfunctional(b / overlap, "ratio", int(index))


def ratio_excluded_mass(basis, x, eps=None):
    """Mass of the measure of ``x`` on eigenvectors where the ratio functional is cut to zero."""
    x = as_vector(x, basis.n, "x")
    c = basis.coefficients(x)
    return float(np.sum(np.abs(c[np.abs(c) <= ratio_threshold(x, eps)]) ** 2))


def weak_inverse(basis, w, h, f, q, eps=None):
    """``sum_b f(b) <q, phi_h(b)> |<b, h>|^2``: the pairing of ``q`` with the preimage of ``f``.

    For ``f`` the indicator of a set ``C`` this is ``<q, E(C) h>``.
    """
    w.check_hypersum()
    h = as_vector(h, basis.n, "h")
    q = as_vector(q, basis.n, "q")
    if not np.any(h):
        raise ValidationError("generating vector h must be nonzero")
    values = f.values if isinstance(f, L2Element) else np.asarray(f, dtype=complex)
    if values.shape != (basis.n,):
        raise DimensionError(f"function has {values.size} values, basis has {basis.n}")
    c = basis.coefficients(h)
    keep = np.abs(c) > ratio_threshold(h, eps)
    pairs = np.zeros(basis.n, dtype=complex)
    # <q, b / <h, b>> = <q, b> / <h, b>
    pairs[keep] = np.conj(basis.coefficients(q)[keep]) / np.conj(c[keep])
    return complex(np.sum(values * pairs * np.abs(c) ** 2))


def duality_pair(w, a, b):
    """``<a, b>`` viewed as the pairing of a [,]-element with a {,}-element."""
    a = as_vector(a, w.n, "a")
    b = as_vector(b, w.n, "b")
    return complex(np.vdot(a, b))


def duality_bound(w, a, b):
    return nuclear_norm(w, a) * dual_norm(w, b)


def extremal_partner(w, a):
    """``j^2 a``, the element attaining ``|<a, b>| = sqrt([a, a] {b, b})``."""
    return w.weights**2 * as_vector(a, w.n, "a")
