"""Dense complex linear algebra: scalar products, Hermitian eigendecomposition,
expansion in an eigenbasis and the Cayley transform.

Vectors are plain 1-D complex numpy arrays holding coordinates in a fixed
orthonormal reference basis. Scalar products are antilinear in the first
argument, so ``dot(sp, b, x)`` is the coefficient of ``x`` along ``b``.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DimensionError, NumericalError, ValidationError

HERMITIAN_RTOL = 1e-12
TOL_FACTOR = 1e-10


def _frozen(a):
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def as_vector(x, n=None, name="vector"):
    """Validate and convert ``x`` to a finite complex 1-D array (length ``n`` if given)."""
    v = np.asarray(x, dtype=complex)
    if v.ndim != 1 or v.size < 1:
        raise DimensionError(f"{name} must be a non-empty 1-D sequence, got shape {v.shape}")
    if n is not None and v.size != n:
        raise DimensionError(f"{name} has length {v.size}, expected {n}")
    if not np.all(np.isfinite(v)):
        raise ValidationError(f"{name} has non-finite entries")
    return v


def hermitian_defect(a):
    """Max-norm of ``a - a^H`` relative to the max-norm of ``a``."""
    scale = np.max(np.abs(a)) if a.size else 0.0
    defect = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if scale == 0.0:
        return 0.0
    return defect / scale


def _check_hermitian(a, name):
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionError(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} has non-finite entries")
    defect = hermitian_defect(a)
    if defect > HERMITIAN_RTOL:
        raise ValidationError(f"{name} is not Hermitian (relative defect {defect:.3e})")


@dataclass(frozen=True, eq=False)
class ScalarProduct:
    """Either the canonical product or ``<x, y> = x^H G y`` for a Hermitian positive-definite G."""

    kind: str = "canonical"
    gram: np.ndarray = None

    def __post_init__(self):
        if self.kind == "canonical":
            if self.gram is not None:
                raise ValidationError("canonical scalar product takes no Gram matrix")
            return
        if self.kind != "gram":
            raise ValidationError(f"unknown scalar product kind {self.kind!r}")
        g = np.asarray(self.gram, dtype=complex)
        _check_hermitian(g, "Gram matrix")
        try:
            np.linalg.cholesky(g)
        except np.linalg.LinAlgError:
            raise ValidationError("Gram matrix is not positive definite") from None
        object.__setattr__(self, "gram", _frozen(g))

    @classmethod
    def canonical(cls):
        return cls()

    @classmethod
    def from_gram(cls, gram):
        return cls("gram", gram)

    @property
    def n(self):
        return None if self.gram is None else self.gram.shape[0]

    def metric(self, n):
        if self.gram is None:
            return np.eye(n, dtype=complex)
        return self.gram


def dot(sp, x, y):
    """Scalar product of ``x`` and ``y``; antilinear in ``x``."""
    x = as_vector(x, name="x")
    y = as_vector(y, name="y")
    if x.size != y.size:
        raise DimensionError(f"length mismatch: {x.size} vs {y.size}")
    if sp.gram is None:
        return complex(np.vdot(x, y))
    if sp.n != x.size:
        raise DimensionError(f"scalar product has dimension {sp.n}, vectors have {x.size}")
    return complex(np.vdot(x, sp.gram @ y))


@dataclass(frozen=True, eq=False)
class HermitianOp:
    """Matrix of a symmetric operator in the reference basis."""

    matrix: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.matrix, dtype=complex)
        _check_hermitian(a, "operator matrix")
        object.__setattr__(self, "matrix", _frozen(a))

    @property
    def n(self):
        return self.matrix.shape[0]

    def apply(self, x):
        return self.matrix @ as_vector(x, self.n)

    def norm_max(self):
        return float(np.max(np.abs(self.matrix)))

    def norm2(self):
        return float(np.linalg.norm(self.matrix, 2))


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """Ascending eigenvalues with orthonormal eigenvectors stored as the columns of ``vectors``.

    ``residuals`` holds ``||v b - lambda_b b||`` per eigenvector; ``residual`` is their max.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray = None
    sp: ScalarProduct = field(default_factory=ScalarProduct)

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        vec = np.asarray(self.vectors, dtype=complex)
        if lam.ndim != 1 or vec.shape != (lam.size, lam.size):
            raise DimensionError(
                f"eigenvalues {lam.shape} and vectors {vec.shape} do not form a basis"
            )
        if np.any(np.diff(lam) < 0):
            raise ValidationError("eigenvalues must be ascending")
        res = np.zeros(lam.size) if self.residuals is None else np.asarray(self.residuals, float)
        object.__setattr__(self, "eigenvalues", _frozen(lam))
        object.__setattr__(self, "vectors", _frozen(vec))
        object.__setattr__(self, "residuals", _frozen(res))

    @property
    def n(self):
        return self.eigenvalues.size

    @property
    def residual(self):
        return float(np.max(self.residuals)) if self.n else 0.0

    def gram_defect(self):
        """Max-norm distance of the eigenvector Gram matrix from the identity."""
        g = self.vectors.conj().T @ self.sp.metric(self.n) @ self.vectors
        return float(np.max(np.abs(g - np.eye(self.n))))

    def coefficients(self, x):
        """``<b, x>`` for every basis vector ``b``."""
        x = as_vector(x, self.n)
        if self.sp.gram is None:
            return self.vectors.conj().T @ x
        return self.vectors.conj().T @ (self.sp.gram @ x)

    def synthesize(self, coeffs, mask=None):
        """``sum_b c_b b``, optionally restricted to the eigenvectors selected by ``mask``."""
        c = np.asarray(coeffs, dtype=complex)
        if mask is None:
            return self.vectors @ c
        return self.vectors[:, mask] @ c[mask]


def default_tol(op):
    return TOL_FACTOR * max(op.norm_max(), np.finfo(float).tiny) * op.n


def _fix_phase(vectors):
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        mags = np.abs(col)
        k = int(np.argmax(mags > 1e-10 * mags.max()))
        out[:, j] = col * (np.conj(col[k]) / mags[k])
    return out


def eigh(op, tol=None, sp=None):
    """Hermitian eigendecomposition with ascending eigenvalues.

    With a Gram scalar product, ``op.matrix`` is read as the Hermitian form
    ``K_ij = <e_i, v e_j>`` and the generalized problem ``K x = lambda G x`` is
    solved (LAPACK reduces it by Cholesky congruence); the returned vectors are
    then orthonormal for ``sp``.
    """
    if not isinstance(op, HermitianOp):
        op = HermitianOp(op)
    sp = sp or ScalarProduct.canonical()
    if tol is None:
        tol = default_tol(op)
    a = np.array(op.matrix)
    g = None if sp.gram is None else np.array(sp.gram)
    if g is not None and g.shape != a.shape:
        raise DimensionError(f"Gram matrix {g.shape} does not match operator {a.shape}")
    try:
        lam, vec = scipy.linalg.eigh(a, g)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NumericalError(f"eigensolver did not converge: {exc}", residual=float("nan"))
    vec = _fix_phase(vec)
    metric = np.eye(op.n) if g is None else g
    residuals = np.linalg.norm(a @ vec - (metric @ vec) * lam, axis=0)
    basis = SpectralBasis(lam, vec, residuals, sp)
    if basis.residual > tol:
        raise NumericalError("eigendecomposition residual exceeds tolerance", basis.residual)
    return basis


def expand(basis, x):
    """Coefficients ``<b, x>`` of ``x`` in ``basis``, so that ``x = sum_b <b, x> b``."""
    return basis.coefficients(x)


def reconstruct_operator(basis):
    """Matrix of ``sum_b lambda_b |b><b|`` acting on reference coordinates."""
    v = basis.vectors
    m = (v * basis.eigenvalues) @ v.conj().T
    if basis.sp.gram is not None:
        m = m @ basis.sp.gram
    return m


def spectral_projector(basis, mask):
    """Orthogonal projector onto the span of the eigenvectors selected by ``mask``."""
    v = basis.vectors[:, mask]
    p = v @ v.conj().T
    if basis.sp.gram is not None:
        p = p @ basis.sp.gram
    return p


def cayley(op, x, rtol=1e-10):
    """Apply ``(v + i)(v - i)^{-1}`` to ``x``."""
    if not isinstance(op, HermitianOp):
        op = HermitianOp(op)
    x = as_vector(x, op.n)
    eye = np.eye(op.n)
    shifted = op.matrix - 1j * eye
    try:
        y = np.linalg.solve(shifted, x)
    except np.linalg.LinAlgError:
        raise NumericalError("v - iI is singular", residual=float("inf")) from None
    res = np.linalg.norm(shifted @ y - x)
    scale = (op.norm2() + 1.0) * max(np.linalg.norm(x), np.finfo(float).tiny)
    if res > rtol * scale:
        raise NumericalError("Cayley solve inaccurate; operator may not be Hermitian", res)
    return op.matrix @ y + 1j * y
