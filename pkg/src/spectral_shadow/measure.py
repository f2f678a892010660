"""Atomic spectral measures, projector-valued set functions and the staircase
spectral family of a finite-dimensional symmetric operator.

Everything here is a function of the spectral projectors: eigenvalues closer
than ``MERGE_RTOL * spread`` (or a rounding-level multiple of the largest
eigenvalue, whichever is larger) are merged into one atom before any set
membership is decided, so that numerically split degenerate pairs are never
separated.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ValidationError
from .hermitian import as_vector, _frozen

MERGE_RTOL = 1e-9
# relative floor so an all-degenerate spectrum (spread at rounding level) still merges
ROUNDING_RTOL = 1e3 * np.finfo(float).eps


def atom_labels(eigenvalues, rtol=MERGE_RTOL):
    """Group ascending eigenvalues into atoms.

    Returns ``(labels, atoms)``: ``labels[i]`` is the atom index of eigenvalue
    ``i`` and ``atoms[k]`` the mean of the eigenvalues in atom ``k``.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if lam.size == 0:
        return np.zeros(0, dtype=int), np.zeros(0)
    tol = max(rtol * (lam[-1] - lam[0]), ROUNDING_RTOL * float(np.abs(lam).max()))
    labels = np.concatenate(([0], np.cumsum(np.diff(lam) > tol)))
    atoms = np.bincount(labels, weights=lam) / np.bincount(labels)
    return labels, atoms


def merged_eigenvalues(basis):
    """Per-eigenvector eigenvalue with degenerate clusters replaced by their atom value."""
    labels, atoms = atom_labels(basis.eigenvalues)
    return atoms[labels]


@dataclass(frozen=True, eq=False)
class SpectralMeasure:
    """Atoms ``(lambdas[k], weights[k])`` plus the per-eigenvector detail they came from."""

    lambdas: np.ndarray
    weights: np.ndarray
    eigenvalues: np.ndarray = None
    index_weights: np.ndarray = None
    labels: np.ndarray = None

    def __post_init__(self):
        for name in ("lambdas", "weights", "eigenvalues", "index_weights", "labels"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, _frozen(value))
        if np.any(self.weights < 0):
            raise ValidationError("measure weights must be nonnegative")

    @classmethod
    def from_index_weights(cls, eigenvalues, index_weights):
        labels, atoms = atom_labels(eigenvalues)
        weights = np.bincount(labels, weights=index_weights, minlength=atoms.size)
        return cls(atoms, weights, np.asarray(eigenvalues, float), index_weights, labels)

    @property
    def total_mass(self):
        return float(math.fsum(self.weights))

    def support(self):
        """Eigenvector indices carrying positive weight."""
        return frozenset(np.flatnonzero(self.index_weights > 0).tolist())

    def moment(self, k):
        return float(np.sum(self.weights * self.lambdas**k))

    def integrate(self, f):
        return float(np.sum(self.weights * f(self.lambdas)))

    def staircase(self):
        """Jump locations and the right-continuous cumulative mass after each jump."""
        return self.lambdas, np.cumsum(self.weights)

    def cdf(self, lam):
        """``sigma(lambda)``: mass of the atoms at or below ``lam``."""
        return float(np.sum(self.weights[self.lambdas <= lam]))


def spectral_measure(basis, h):
    """Measure of ``h``: weight ``sum_{lambda_b = lambda} |<b, h>|^2`` at each distinct eigenvalue."""
    c = basis.coefficients(h)
    return SpectralMeasure.from_index_weights(basis.eigenvalues, np.abs(c) ** 2)


def stieltjes_integral(lambdas, cumulative, f):
    """``int f d sigma`` for a staircase given by jump points and cumulative values."""
    jumps = np.diff(np.concatenate(([0.0], cumulative)))
    return float(np.sum(f(np.asarray(lambdas)) * jumps))


@dataclass(frozen=True)
class BorelSet:
    """Finite union of half-open eigenvalue intervals ``[a, b)`` and explicit eigenvector indices.

    Intervals are tested against merged (atom) eigenvalues.
    """

    intervals: tuple = ()
    indices: frozenset = frozenset()
    full: bool = False

    def __post_init__(self):
        spans = []
        for item in self.intervals:
            try:
                a, b = (float(v) for v in item)
            except (TypeError, ValueError):
                raise ValidationError(f"malformed interval {item!r}") from None
            if math.isnan(a) or math.isnan(b) or not a < b:
                raise ValidationError(f"interval needs a < b, got [{a}, {b})")
            spans.append((a, b))
        spans.sort()
        merged = []
        for a, b in spans:
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        idx = set()
        for i in self.indices:
            if isinstance(i, (bool, np.bool_)) or int(i) != i:
                raise ValidationError(f"index {i!r} is not an integer")
            idx.add(int(i))
        object.__setattr__(self, "intervals", tuple(merged))
        object.__setattr__(self, "indices", frozenset(idx))

    @classmethod
    def everything(cls):
        return cls(full=True)

    @classmethod
    def empty(cls):
        return cls()

    @classmethod
    def interval(cls, a, b):
        return cls(intervals=((a, b),))

    @classmethod
    def of_indices(cls, indices):
        return cls(indices=frozenset(indices))

    @classmethod
    def from_mask(cls, mask):
        return cls(indices=frozenset(np.flatnonzero(mask).tolist()))

    def union(self, other):
        return BorelSet(self.intervals + other.intervals, self.indices | other.indices,
                        self.full or other.full)

    def mask(self, eigenvalues):
        """Boolean membership of each eigenvector, given its (merged) eigenvalue."""
        lam = np.asarray(eigenvalues, dtype=float)
        if self.full:
            return np.ones(lam.size, dtype=bool)
        out = np.zeros(lam.size, dtype=bool)
        for a, b in self.intervals:
            out |= (lam >= a) & (lam < b)
        if self.indices:
            bad = [i for i in self.indices if not 0 <= i < lam.size]
            if bad:
                raise ValidationError(f"indices {sorted(bad)} outside basis range 0..{lam.size - 1}")
            out[sorted(self.indices)] = True
        return out


def borel_projection(basis, C, x):
    """``sum_{b in C} <b, x> b``: the orthogonal projector of the set ``C`` applied to ``x``."""
    mask = C.mask(merged_eigenvalues(basis)) if isinstance(C, BorelSet) else np.asarray(C, bool)
    if mask.shape != (basis.n,):
        raise DimensionError(f"set mask has shape {mask.shape}, expected ({basis.n},)")
    return basis.synthesize(basis.coefficients(x), mask)


@dataclass(frozen=True, eq=False)
class SpectralFamily:
    """Staircase family ``E_lambda`` of the eigenbasis, optionally cut to a bounded window.

    With ``bounded_cut = (lo, hi)`` only eigenvectors whose eigenvalues lie in
    ``[lo, hi]`` belong to the family; the rest stand for unbounded eigenvalues.
    """

    basis: object
    bounded_cut: tuple = None

    def __post_init__(self):
        if self.bounded_cut is not None:
            lo, hi = (float(v) for v in self.bounded_cut)
            if not lo <= hi:
                raise ValidationError(f"bounded cut needs lo <= hi, got {self.bounded_cut}")
            object.__setattr__(self, "bounded_cut", (lo, hi))

    @property
    def eigenvalues(self):
        return merged_eigenvalues(self.basis)

    def bounded_mask(self):
        lam = self.eigenvalues
        if self.bounded_cut is None:
            return np.ones(lam.size, dtype=bool)
        lo, hi = self.bounded_cut
        return (lam >= lo) & (lam <= hi)

    def q(self):
        """Eigenvalue of each in-window eigenvector and 0 for the others."""
        return np.where(self.bounded_mask(), self.eigenvalues, 0.0)

    def indicator(self, lam):
        return self.bounded_mask() & (self.eigenvalues <= lam)

    def apply(self, lam, h):
        """``E_lambda h``."""
        return self.basis.synthesize(self.basis.coefficients(h), self.indicator(lam))

    def sigma(self, lam, h):
        """``<h, E_lambda h>``."""
        c = self.basis.coefficients(h)
        return float(np.sum(np.abs(c[self.indicator(lam)]) ** 2))

    def operator_apply(self, h):
        """``int lambda dE_lambda`` applied to ``h``."""
        c = self.basis.coefficients(h)
        mask = self.bounded_mask()
        return self.basis.synthesize(c * self.basis.eigenvalues, mask)


@dataclass(frozen=True, eq=False)
class L2Element:
    """Function on eigenvectors, as a class in L2 of the per-eigenvector weights."""

    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(np.asarray(self.values, dtype=complex)))
        object.__setattr__(self, "weights", _frozen(np.asarray(self.weights, dtype=float)))

    def norm2(self):
        return float(np.sum(np.abs(self.values) ** 2 * self.weights))

    def integral(self):
        return complex(np.sum(self.values * self.weights))


def _nonzero_mass(h):
    h = as_vector(h, name="h")
    if not np.any(h):
        raise ValidationError("generating vector h must be nonzero")
    return h


def indicator_class(basis, h, C):
    """Image of ``E(C) h`` under the isometry onto L2 of the measure of ``h``: the indicator of ``C``."""
    h = _nonzero_mass(h)
    weights = np.abs(basis.coefficients(h)) ** 2
    mask = C.mask(merged_eigenvalues(basis))
    return L2Element(mask.astype(float), weights)


def _zero_floor(x, zero_tol):
    return 1e-14 * np.linalg.norm(x) if zero_tol is None else zero_tol


def ratio_function(basis, x, z, zero_tol=None):
    """``<b, z> / <b, x>`` per eigenvector, 0 where ``<b, x>`` vanishes.

    ``<b, x>`` counts as zero when its modulus is at most ``zero_tol``
    (default: round-off level ``1e-14 * ||x||``).
    """
    x = as_vector(x, basis.n, "x")
    cx = basis.coefficients(x)
    cz = basis.coefficients(z)
    keep = np.abs(cx) > _zero_floor(x, zero_tol)
    values = np.zeros(basis.n, dtype=complex)
    values[keep] = cz[keep] / cx[keep]
    return L2Element(values, np.abs(cx) ** 2)


def lebesgue_decompose(basis, x, z, zero_tol=None):
    """Split the measure of ``z`` into parts absolutely continuous and singular w.r.t. that of ``x``.

    The singular part lives exactly on the eigenvectors with ``<b, x> = 0``, so
    the two supports are disjoint index sets.
    """
    x = as_vector(x, basis.n, "x")
    cx = basis.coefficients(x)
    cz = basis.coefficients(z)
    null = np.abs(cx) <= _zero_floor(x, zero_tol)
    f = ratio_function(basis, x, z, zero_tol)
    ac = np.where(null, 0.0, np.abs(f.values) ** 2 * np.abs(cx) ** 2)
    singular = np.where(null, np.abs(cz) ** 2, 0.0)
    return (SpectralMeasure.from_index_weights(basis.eigenvalues, ac),
            SpectralMeasure.from_index_weights(basis.eigenvalues, singular))
