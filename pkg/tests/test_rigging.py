import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectral_shadow import (BorelSet, HermitianOp, RiggingWeights, dual_dot, dual_unit,
                             duality_pair, eigh, indicator_class, nuclear_dot, ratio_functional,
                             weak_inverse)
from spectral_shadow.errors import DimensionError, ValidationError
from spectral_shadow.gallery import OperatorSpec, project
from spectral_shadow.rigging import (duality_bound, extremal_partner, nuclear_norm,
                                     ratio_excluded_mass)
from spectral_shadow.rng import gaussian_vector

from conftest import random_hermitian, random_vector

R2 = 1 / math.sqrt(2)


def test_products_on_unit_vectors():
    w = RiggingWeights([1.0, 2.0])
    assert nuclear_dot(w, [1, 0], [1, 0]) == 1 and dual_dot(w, [1, 0], [1, 0]) == 1
    assert nuclear_dot(w, [0, 1], [0, 1]) == 4 and dual_dot(w, [0, 1], [0, 1]) == 0.25
    with pytest.raises(DimensionError):
        nuclear_dot(w, [1, 0, 0], [1, 0, 0])


def test_weights_validation():
    with pytest.raises(ValidationError):
        RiggingWeights([1.0, 0.0])
    with pytest.raises(ValidationError):
        RiggingWeights.generate(8, 1.0).check_hypersum()
    np.testing.assert_array_equal(RiggingWeights.generate(3, 2).weights, [1, 4, 9])


def test_cauchy_schwarz_random():
    w = RiggingWeights.generate(16, 2.0)
    x, y = gaussian_vector(1, 16), gaussian_vector(2, 16)
    assert abs(np.vdot(x, y)) ** 2 <= (nuclear_dot(w, x, x) * dual_dot(w, y, y)).real


@pytest.mark.parametrize("n", [1, 10, 1000, 100000])
def test_nuclear_budget_for_default_generator(n):
    w = RiggingWeights.generate(n, 2.0)
    assert w.nuclear_trace <= math.pi**2 / 6
    assert w.check_hypersum() <= 2.0
    assert w.sigma_bound() == 2.0


def test_dual_unit_examples():
    w = RiggingWeights([1.0, 1.0, 3.0])
    eta = dual_unit(w, [0, 0, 1])
    np.testing.assert_allclose(eta.coeffs, [0, 0, 3])
    assert dual_dot(w, eta.coeffs, eta.coeffs).real == pytest.approx(1.0, abs=1e-15)
    b = np.array([1.0, 2j, -1.0])
    once = dual_unit(w, b)
    np.testing.assert_allclose(dual_unit(w, once.coeffs).coeffs, once.coeffs, atol=1e-15)
    with pytest.raises(ValidationError):
        dual_unit(w, [0, 0, 0])


def test_dual_unit_on_multiplication_eigenvector():
    basis = eigh(project(OperatorSpec("multiplication"), 4).op)
    w = RiggingWeights.generate(4, 2.0)
    # b_0 is the first reference vector; weight (1 + 0)^2 = 1 leaves it unchanged
    np.testing.assert_allclose(basis.vectors[:, 0], [1, 0, 0, 0], atol=1e-15)
    for k in range(4):
        eta = dual_unit(w, basis.vectors[:, k])
        np.testing.assert_allclose(eta.coeffs, (k + 1) ** 2 * np.eye(4)[k], atol=1e-14)
        assert eta.dual_norm(w) == pytest.approx(1.0, abs=1e-12)


def test_ratio_functional_self_ratio(rng):
    basis = eigh(HermitianOp(random_hermitian(rng, 5)))
    w = RiggingWeights.generate(5)
    b = basis.vectors[:, 2]
    phi = ratio_functional(basis, w, b, 2)
    assert phi(b) == pytest.approx(1.0, abs=1e-14)
    g = random_vector(rng, 5)
    assert phi(g) == pytest.approx(np.vdot(g, b), abs=1e-14)
    assert ratio_functional(basis, w, b, 0).is_zero()


def test_ratio_functional_midpoint_oracle():
    system = project(OperatorSpec("multiplication"), 4)
    basis = eigh(system.op)
    w = RiggingWeights.generate(4)
    h = system.embed.constant()
    np.testing.assert_allclose(h, [0.5] * 4)
    phi = ratio_functional(basis, w, h, 0)
    # 4 * int_0^{1/4} x dx and 4 * int_0^{1/4} x^2 dx
    assert phi(system.embed.coordinates(lambda x: x)) == pytest.approx(0.125, abs=1e-15)
    val = phi(system.embed.coordinates(lambda x: x**2))
    assert val == pytest.approx(1 / 48, abs=1e-15)
    assert val - 0.125**2 == pytest.approx(1 / 192, abs=1e-15)


def test_ratio_excluded_mass():
    basis = eigh(HermitianOp(np.diag([1.0, 2.0, 3.0])))
    assert ratio_excluded_mass(basis, [1, 1, 1e-9]) == pytest.approx(1e-18)
    assert ratio_excluded_mass(basis, [1, 1, 1]) == 0


def test_weak_inverse_examples():
    basis = eigh(HermitianOp(np.diag([1.0, 2.0])))
    w = RiggingWeights.generate(2)
    h = np.array([R2, R2])
    assert weak_inverse(basis, w, h, np.ones(2), h) == pytest.approx(1.0, abs=1e-15)
    assert weak_inverse(basis, w, h, np.zeros(2), h) == 0
    atom = indicator_class(basis, h, BorelSet.interval(0.5, 1.5))
    # E({1}) h = (1/sqrt2, 0), so the pairing with e_1 is 1/sqrt2
    assert weak_inverse(basis, w, h, atom, [1, 0]) == pytest.approx(R2, abs=1e-15)
    with pytest.raises(ValidationError):
        weak_inverse(basis, RiggingWeights.generate(2, 0.5), h, atom, [1, 0])
    with pytest.raises(DimensionError):
        weak_inverse(basis, w, h, np.ones(3), h)


def test_weak_inverse_matches_projector(rng):
    n = 12
    a = random_hermitian(rng, n)
    basis = eigh(HermitianOp(a))
    w = RiggingWeights.generate(n)
    h, q = random_vector(rng, n), random_vector(rng, n)
    c = BorelSet.interval(-1.0, 2.0)
    f = indicator_class(basis, h, c)
    mask = c.mask(basis.eigenvalues)
    proj = basis.vectors[:, mask] @ basis.vectors[:, mask].conj().T
    assert weak_inverse(basis, w, h, f, q) == pytest.approx(np.vdot(q, proj @ h), abs=1e-12 * n)


def test_duality_pair_examples():
    w1 = RiggingWeights([1.0, 2.0])
    assert duality_pair(w1, [1, 0], [1, 0]) == 1 and duality_bound(w1, [1, 0], [1, 0]) == 1
    assert duality_pair(w1, [0, 1], [0, 1]) == 1
    assert duality_bound(w1, [0, 1], [0, 1]) == pytest.approx(1.0)


def test_extremal_partner_attains_bound():
    w = RiggingWeights.generate(8)
    a = gaussian_vector(5, 8)
    b = extremal_partner(w, a)
    b = b / np.linalg.norm(b)
    assert abs(duality_pair(w, a, b)) == pytest.approx(duality_bound(w, a, b), rel=1e-9)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 20), s=st.floats(0.0, 4.0))
def test_norm_ordering_with_weights_at_least_one(seed, n, s):
    w = RiggingWeights.generate(n, s)
    x = random_vector(np.random.default_rng(seed), n)
    ref = np.vdot(x, x).real
    assert dual_dot(w, x, x).real <= ref * (1 + 1e-14)
    assert ref <= nuclear_dot(w, x, x).real * (1 + 1e-14)
    assert nuclear_norm(w, x) >= 0


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 16))
def test_ratio_identity_property(seed, n):
    rng = np.random.default_rng(seed)
    basis = eigh(HermitianOp(random_hermitian(rng, n)))
    w = RiggingWeights.generate(n)
    h, g = random_vector(rng, n), random_vector(rng, n)
    for k in range(n):
        eta = dual_unit(w, basis.vectors[:, k])
        assert dual_dot(w, eta.coeffs, eta.coeffs).real == pytest.approx(1.0, abs=1e-12)
        phi = ratio_functional(basis, w, h, k)
        if not phi.is_zero():
            assert phi(g) * eta(h) == pytest.approx(eta(g), abs=1e-12 * max(1, abs(eta(g))))
