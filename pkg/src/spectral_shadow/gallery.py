"""Built-in symmetric operator families and their Galerkin (Ritz) matrices.

Each family is discretized in an orthonormal basis; an *embedding* records how
coordinates in that basis correspond to functions or sequences, so that test
functions can be sampled and coarse coordinates carried to a finer rung.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import legendre, polynomial

from .errors import DimensionError, ValidationError
from .hermitian import HermitianOp, ScalarProduct, hermitian_defect, HERMITIAN_RTOL

FAMILIES = ("multiplication", "free_jacobi", "discrete_laplacian", "schrodinger_1d", "dense_file")

SUPPORTED_BASES = {
    "multiplication": ("indicator", "fourier"),
    "free_jacobi": ("standard",),
    "discrete_laplacian": ("standard",),
    "schrodinger_1d": ("standard",),
    "dense_file": ("standard",),
}

# half-bandwidth of the banded families, used by the projection-consistency property
BANDWIDTH = {"free_jacobi": 1, "discrete_laplacian": 1}

_GL_NODES, _GL_WEIGHTS = legendre.leggauss(16)


def _interval(params, name="interval"):
    try:
        a, b = (float(v) for v in params.get(name, (0.0, 1.0)))
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a pair of numbers", path=f"$.{name}") from None
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise ValidationError(f"{name} must be finite with a < b, got [{a}, {b}]", path=f"$.{name}")
    return a, b


def _composite_gauss(fn, edges):
    """Integrals of ``fn`` over consecutive ``[edges[k], edges[k+1]]``."""
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    x = 0.5 * (hi + lo) + half * _GL_NODES
    vals = np.asarray(fn(x), dtype=complex)
    return (vals * _GL_WEIGHTS).sum(axis=1) * half[:, 0]


class SequenceEmbedding:
    """Coordinates are the sequence itself (standard basis of l2)."""

    kind = "sequence"

    def __init__(self, n):
        self.n = n

    def describe(self):
        return {"kind": self.kind, "n": self.n}

    def coordinates(self, fn):
        raise ValidationError("function test vectors need a function-space family")

    def constant(self):
        return np.full(self.n, 1.0 / math.sqrt(self.n), dtype=complex)

    def prolongation(self, n_fine):
        if n_fine < self.n:
            raise DimensionError(f"cannot prolongate from n={self.n} to n={n_fine}")
        p = np.zeros((n_fine, self.n), dtype=complex)
        p[np.arange(self.n), np.arange(self.n)] = 1.0
        return p


class CellEmbedding:
    """Normalized indicators of ``n`` uniform cells of ``[a, b]``."""

    kind = "cells"

    def __init__(self, n, a, b):
        self.n, self.a, self.b = n, a, b
        self.edges = np.linspace(a, b, n + 1)
        self.width = (b - a) / n
        self.nodes = 0.5 * (self.edges[:-1] + self.edges[1:])

    def describe(self):
        return {"kind": self.kind, "n": self.n, "interval": [self.a, self.b]}

    def coordinates(self, fn):
        return _composite_gauss(fn, self.edges) / math.sqrt(self.width)

    def constant(self):
        return np.full(self.n, math.sqrt(self.width), dtype=complex)

    def prolongation(self, n_fine):
        if n_fine % self.n:
            raise DimensionError(f"cell rung n={n_fine} is not a refinement of n={self.n}")
        r = n_fine // self.n
        p = np.zeros((n_fine, self.n), dtype=complex)
        p[np.arange(n_fine), np.arange(n_fine) // r] = 1.0 / math.sqrt(r)
        return p


class FourierEmbedding:
    """Exponentials ``exp(2 pi i m (x - a) / L) / sqrt(L)`` for modes ``m = j - n // 2``."""

    kind = "fourier"

    def __init__(self, n, a, b):
        self.n, self.a, self.b = n, a, b
        self.length = b - a
        self.modes = np.arange(n) - n // 2

    def describe(self):
        return {"kind": self.kind, "n": self.n, "interval": [self.a, self.b]}

    def coordinates(self, fn):
        panels = max(64, 4 * self.n)
        edges = np.linspace(self.a, self.b, panels + 1)
        lo, hi = edges[:-1, None], edges[1:, None]
        half = 0.5 * (hi - lo)
        x = (0.5 * (hi + lo) + half * _GL_NODES).ravel()
        w = (half * _GL_WEIGHTS).ravel()
        vals = np.asarray(fn(x), dtype=complex)
        phase = np.exp(-2j * np.pi * np.outer(self.modes, x - self.a) / self.length)
        return phase @ (w * vals) / math.sqrt(self.length)

    def constant(self):
        c = np.zeros(self.n, dtype=complex)
        c[self.n // 2] = math.sqrt(self.length)
        return c

    def prolongation(self, n_fine):
        if n_fine < self.n:
            raise DimensionError(f"cannot prolongate from n={self.n} to n={n_fine}")
        p = np.zeros((n_fine, self.n), dtype=complex)
        p[self.modes + n_fine // 2, np.arange(self.n)] = 1.0
        return p


class GridEmbedding:
    """Interior grid points of ``[a, b]`` with Dirichlet ends; coordinate = ``sqrt(h) f(x_i)``."""

    kind = "grid"

    def __init__(self, n, a, b):
        self.n, self.a, self.b = n, a, b
        self.step = (b - a) / (n + 1)
        self.nodes = a + self.step * np.arange(1, n + 1)

    def describe(self):
        return {"kind": self.kind, "n": self.n, "interval": [self.a, self.b]}

    def coordinates(self, fn):
        return math.sqrt(self.step) * np.asarray(fn(self.nodes), dtype=complex)

    def constant(self):
        return np.full(self.n, math.sqrt(self.step), dtype=complex)

    def prolongation(self, n_fine):
        if (n_fine + 1) % (self.n + 1):
            raise DimensionError(f"grid rung n={n_fine} is not a refinement of n={self.n}")
        fine = GridEmbedding(n_fine, self.a, self.b)
        # piecewise-linear interpolation of nodal values, zero at both walls
        coarse_x = np.concatenate(([self.a], self.nodes, [self.b]))
        p = np.zeros((n_fine, self.n), dtype=complex)
        for j in range(self.n):
            hat = np.zeros(self.n + 2)
            hat[j + 1] = 1.0
            p[:, j] = np.interp(fine.nodes, coarse_x, hat)
        return p * math.sqrt(fine.step / self.step)


@dataclass(frozen=True, eq=False)
class OperatorSpec:
    """Declarative description of a symmetric operator and how to discretize it.

    ``params`` holds the family-specific entries: ``interval`` (multiplication,
    schrodinger_1d), ``diag`` / ``offdiag`` (free_jacobi), ``potential``
    polynomial coefficients in ascending order (schrodinger_1d), and
    ``matrix`` / ``matrix_imag`` (dense_file). ``n`` is the default dimension.
    """

    family: str
    params: dict = field(default_factory=dict)
    basis: str = None
    n: int = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"unknown family {self.family!r}", path="$.family")
        basis = self.basis or SUPPORTED_BASES[self.family][0]
        if basis not in SUPPORTED_BASES[self.family]:
            raise ValidationError(
                f"basis {basis!r} is not supported for family {self.family!r}", path="$.basis"
            )
        object.__setattr__(self, "basis", basis)
        params = dict(self.params)
        if self.family in ("multiplication", "schrodinger_1d"):
            params["interval"] = list(_interval(params))
        if self.family == "free_jacobi":
            for key, default in (("diag", 0.0), ("offdiag", 1.0)):
                params[key] = float(params.get(key, default))
                if not math.isfinite(params[key]):
                    raise ValidationError(f"{key} must be finite", path=f"$.{key}")
        if self.family == "schrodinger_1d":
            pot = np.asarray(params.get("potential", [0.0]), dtype=float)
            if pot.ndim != 1 or pot.size == 0 or not np.all(np.isfinite(pot)):
                raise ValidationError("potential must be a list of finite numbers", "$.potential")
            params["potential"] = pot.tolist()
        if self.family == "dense_file":
            params["matrix"] = self._dense(params).tolist()
            params.pop("matrix_imag", None)
        object.__setattr__(self, "params", params)
        if self.n is not None and (int(self.n) != self.n or self.n < 2):
            raise ValidationError(f"n must be an integer >= 2, got {self.n}", path="$.n")

    @staticmethod
    def _dense(params):
        if "matrix" not in params:
            raise ValidationError("dense_file needs a matrix", path="$.matrix")
        m = np.asarray(params["matrix"])
        if np.iscomplexobj(m):
            a = m.astype(complex)
        else:
            try:
                a = np.asarray(m, dtype=float).astype(complex)
            except (TypeError, ValueError):
                raise ValidationError("matrix entries must be numbers", "$.matrix") from None
            if "matrix_imag" in params:
                im = np.asarray(params["matrix_imag"], dtype=float)
                if im.shape != a.shape:
                    raise ValidationError("matrix_imag shape differs from matrix", "$.matrix_imag")
                a = a + 1j * im
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 2:
            raise ValidationError(f"matrix must be square with n >= 2, got {a.shape}", "$.matrix")
        if not np.all(np.isfinite(a)):
            raise ValidationError("matrix has non-finite entries", "$.matrix")
        if hermitian_defect(a) > HERMITIAN_RTOL:
            raise ValidationError("matrix is not Hermitian", "$.matrix")
        return a

    @staticmethod
    def dense_matrix(params):
        return np.asarray(params["matrix"], dtype=complex)

    @property
    def interval(self):
        return tuple(self.params["interval"]) if "interval" in self.params else None

    def to_dict(self):
        """JSON-ready description (dense matrices split into real and imaginary parts)."""
        d = {"family": self.family, "basis": self.basis}
        if self.n is not None:
            d["n"] = int(self.n)
        for key, value in sorted(self.params.items()):
            if key == "matrix":
                m = self.dense_matrix(self.params)
                d["matrix"] = m.real.tolist()
                if np.any(m.imag):
                    d["matrix_imag"] = m.imag.tolist()
            else:
                d[key] = value
        return d


@dataclass(frozen=True, eq=False)
class RitzSystem:
    """The ``n``-dimensional Galerkin compression of an operator."""

    n: int
    op: HermitianOp
    sp: ScalarProduct
    embed: object
    spec: OperatorSpec = None


def _embedding(spec, n):
    if spec.family == "multiplication":
        a, b = spec.interval
        return CellEmbedding(n, a, b) if spec.basis == "indicator" else FourierEmbedding(n, a, b)
    if spec.family == "schrodinger_1d":
        return GridEmbedding(n, *spec.interval)
    return SequenceEmbedding(n)


def _tridiag(n, diag, off):
    m = np.diag(np.asarray(diag, dtype=complex) * np.ones(n))
    idx = np.arange(n - 1)
    m[idx, idx + 1] = off
    m[idx + 1, idx] = np.conj(off)
    return m


def galerkin_matrix(spec, n):
    """``<e_i, u e_j>`` in the family's orthonormal basis."""
    fam = spec.family
    if fam == "multiplication":
        a, b = spec.interval
        if spec.basis == "indicator":
            edges = np.linspace(a, b, n + 1)
            return np.diag(0.5 * (edges[:-1] + edges[1:])).astype(complex)
        length = b - a
        modes = np.arange(n) - n // 2
        gap = modes[None, :] - modes[:, None]
        safe = np.where(gap == 0, 1, gap)
        m = np.where(gap == 0, 0.5 * (a + b), -1j * length / (2 * np.pi * safe))
        return m.astype(complex)
    if fam == "free_jacobi":
        return _tridiag(n, spec.params["diag"], spec.params["offdiag"])
    if fam == "discrete_laplacian":
        return _tridiag(n, 2.0, -1.0)
    if fam == "schrodinger_1d":
        emb = GridEmbedding(n, *spec.interval)
        pot = polynomial.polyval(emb.nodes, spec.params["potential"])
        return _tridiag(n, 2.0, -1.0) / emb.step**2 + np.diag(pot)
    if fam == "dense_file":
        m = spec.dense_matrix(spec.params)
        if m.shape[0] != n:
            raise DimensionError(f"dense_file matrix has n={m.shape[0]}, requested n={n}")
        return m
    raise ValidationError(f"unknown family {fam!r}", path="$.family")


def project(spec, n=None):
    """Ritz projection of ``spec`` onto its first ``n`` basis functions."""
    n = spec.n if n is None else n
    if spec.family == "dense_file" and n is None:
        n = len(spec.params["matrix"])
    if n is None or int(n) != n or n < 2:
        raise ValidationError(f"dimension must be an integer >= 2, got {n}", path="$.n")
    n = int(n)
    op = HermitianOp(galerkin_matrix(spec, n))
    return RitzSystem(n, op, ScalarProduct.canonical(), _embedding(spec, n), spec)


def refine(spec, n):
    """Next nested dimension above ``n`` (None when the family cannot be refined)."""
    if spec.family == "dense_file":
        return None
    if spec.family == "schrodinger_1d":
        return 2 * n + 1
    return 2 * n


def prolongation(spec, n, n_fine):
    """Matrix carrying rung-``n`` coordinates to rung-``n_fine`` coordinates."""
    if spec.family == "dense_file":
        if n_fine != n:
            raise DimensionError("dense_file operators have a single fixed dimension")
        return np.eye(n, dtype=complex)
    return _embedding(spec, n).prolongation(n_fine)
