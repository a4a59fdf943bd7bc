"""Tests for the univariate square decompositions."""

import math

import numpy as np
import pytest

from jacksonsos.chebpoly import ChebPoly
from jacksonsos.jackson import jackson_lambda
from jacksonsos.quadrature import chebyshev_nodes
from jacksonsos.sos1d import (
    IllConditioned,
    NotNonnegative,
    decompose_kernel_slice,
    fejer_riesz,
    lukacs_decompose,
    to_preorder_pair,
)

WEIGHT = ChebPoly(1, {(0,): 0.5, (2,): -0.5})      # 1 - x^2
ONE_PLUS = ChebPoly(1, {(0,): 1.0, (1,): 1.0})     # 1 + x
ONE_MINUS = ChebPoly(1, {(0,): 1.0, (1,): -1.0})   # 1 - x


def _factor_values(h, theta):
    hv = np.polyval(h[::-1], np.exp(1j * theta))
    return np.abs(hv) ** 2


def _kernel_slice_poly(r: int, y: float) -> ChebPoly:
    coeffs = {(0,): 1.0}
    tkm, tk = 1.0, y
    for k in range(1, r + 1):
        coeffs[(k,)] = 2.0 * jackson_lambda(k, r) * tk
        tkm, tk = tk, 2.0 * y * tk - tkm
    return ChebPoly(1, coeffs)


def _random_nonneg(rng, max_half_degree: int):
    du = int(rng.integers(0, max_half_degree + 1))
    dv = int(rng.integers(0, max(max_half_degree, 1)))
    u = ChebPoly(1, {(k,): rng.standard_normal() for k in range(du + 1)})
    v = ChebPoly(1, {(k,): rng.standard_normal() for k in range(dv + 1)})
    return u * u + WEIGHT * (v * v)


class TestFejerRiesz:
    def test_constant(self):
        assert list(fejer_riesz([1.0])) == [1.0]

    def test_one_plus_cos(self):
        h = fejer_riesz([1.0, 1.0])
        theta = np.linspace(0, math.pi, 64)
        assert np.allclose(_factor_values(h, theta), 1 + np.cos(theta),
                           atol=1e-12)
        assert np.allclose(np.abs(h), 1 / math.sqrt(2), atol=1e-12)

    def test_sine_squared(self):
        # p = 1 - x^2, cosine form (1 - cos 2t)/2
        h = fejer_riesz([0.5, 0.0, -0.5])
        theta = np.linspace(0, math.pi, 64)
        assert np.allclose(_factor_values(h, theta), np.sin(theta) ** 2,
                           atol=1e-12)

    def test_degree_matches_trig_degree(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            p = _random_nonneg(rng, 6)
            dense = np.zeros(p.degree() + 1)
            for (k,), c in p.coeffs.items():
                dense[k] = c
            h = fejer_riesz(dense)
            assert h.size == p.degree() + 1

    def test_rejects_negative_input(self):
        with pytest.raises(NotNonnegative):
            fejer_riesz([0.0, 1.0])       # cos(t) goes negative
        with pytest.raises(NotNonnegative):
            fejer_riesz([-1.0])

    def test_zero_input(self):
        assert list(fejer_riesz([0.0, 0.0])) == [0.0]


class TestLukacsPairs:
    def test_weight_poly(self):
        pair = lukacs_decompose(WEIGHT)
        assert pair.parity == "even"
        assert pair.first.is_zero()
        assert {k: pytest.approx(abs(v)) for k, v in pair.second.coeffs.items()} \
            == {(0,): pytest.approx(1.0)}
        assert pair.residual <= 1e-12

    def test_x_squared(self):
        pair = lukacs_decompose(ChebPoly(1, {(0,): 0.5, (2,): 0.5}))
        assert pair.parity == "even"
        assert abs(pair.first.coeffs.get((1,), 0.0)) == pytest.approx(1.0)
        assert pair.second.is_zero()

    def test_one_minus_x(self):
        pair = lukacs_decompose(ONE_MINUS)
        assert pair.parity == "odd"
        assert pair.first.is_zero()
        assert abs(pair.second.coeffs.get((0,), 0.0)) == pytest.approx(1.0)

    def test_touching_square(self):
        """(1 - x^2)^2 has two double circle zeros; splitting still works."""
        p = WEIGHT * WEIGHT
        pair = lukacs_decompose(p)
        assert pair.residual <= 1e-8
        diff = pair.reconstruct() - p
        assert diff.max_abs_coeff() <= 1e-8

    def test_gate_rejects_negative(self):
        with pytest.raises(NotNonnegative):
            lukacs_decompose(ChebPoly.basis(1, (1,)))
        with pytest.raises(NotNonnegative):
            lukacs_decompose(ChebPoly(1, {(0,): -0.5, (2,): 0.5}))

    def test_zero_polynomial(self):
        pair = lukacs_decompose(ChebPoly.zero(1))
        assert pair.first.is_zero() and pair.second.is_zero()

    def test_multivariate_rejected(self):
        with pytest.raises(ValueError):
            lukacs_decompose(ChebPoly.basis(2, (1, 1)))

    def test_random_corpus_reconstruction(self):
        """Random two-square inputs reconstruct and meet the degree bounds."""
        rng = np.random.default_rng(1)
        for _ in range(40):
            p = _random_nonneg(rng, 12)
            pair = lukacs_decompose(p)
            assert pair.residual <= 1e-8
            deg = p.degree()
            if pair.parity == "even":
                assert 2 * pair.first.degree() <= deg or pair.first.is_zero()
                assert pair.second.is_zero() or \
                    2 * pair.second.degree() + 2 <= deg + 2
            else:
                m = (deg - 1) // 2
                assert pair.first.is_zero() or pair.first.degree() <= m
                assert pair.second.is_zero() or pair.second.degree() <= m

    def test_squares_evaluate_nonnegative(self):
        rng = np.random.default_rng(2)
        xs = rng.uniform(-1, 1, 200)
        for _ in range(10):
            p = _random_nonneg(rng, 8)
            pre = to_preorder_pair(lukacs_decompose(p))
            for x in xs[:50]:
                s0 = sum(q.eval((x,)) ** 2 for q in pre.sigma0)
                s1 = sum(q.eval((x,)) ** 2 for q in pre.sigma1)
                assert s0 >= -1e-12 and s1 >= -1e-12


class TestPreorderPairs:
    def test_one_minus_x_identity(self):
        pre = to_preorder_pair(lukacs_decompose(ONE_MINUS))
        assert len(pre.sigma0) == 1 and len(pre.sigma1) == 1
        recon = pre.reconstruct()
        assert (recon - ONE_MINUS).max_abs_coeff() <= 1e-12
        # explicit form: sigma0 = {(1-x)/sqrt(2)}, sigma1 = {1/sqrt(2)}
        root0 = pre.sigma0[0]
        assert abs(root0.coeffs.get((0,), 0.0)) == pytest.approx(
            1 / math.sqrt(2), abs=1e-12)
        assert abs(root0.coeffs.get((1,), 0.0)) == pytest.approx(
            1 / math.sqrt(2), abs=1e-12)

    def test_weight_form(self):
        pre = to_preorder_pair(lukacs_decompose(WEIGHT))
        assert pre.sigma0 == ()
        assert len(pre.sigma1) == 1

    def test_x_squared_form(self):
        pre = to_preorder_pair(lukacs_decompose(ChebPoly(1, {(0,): 0.5, (2,): 0.5})))
        assert len(pre.sigma0) == 1
        assert pre.sigma1 == ()

    def test_degree_bounds_on_corpus(self):
        """deg sigma0 <= deg p + 1 and deg(sigma1 * (1-x^2)) <= deg p + 1."""
        rng = np.random.default_rng(3)
        for _ in range(30):
            p = _random_nonneg(rng, 10)
            deg = p.degree()
            pre = to_preorder_pair(lukacs_decompose(p))
            for q in pre.sigma0:
                assert 2 * q.degree() <= deg + 1
            for q in pre.sigma1:
                assert 2 * q.degree() + 2 <= deg + 1 or \
                    (deg % 2 == 0 and 2 * q.degree() + 2 <= deg + 2)


class TestKernelSlices:
    def test_r0_slice(self):
        pre = decompose_kernel_slice(0, 0.3)
        assert len(pre.sigma0) == 1 and pre.sigma1 == ()
        assert pre.sigma0[0].eval((0.0,)) == pytest.approx(1.0)

    def test_r1_slice_at_one(self):
        """K_1(x, 1) = 1 + x splits through the half-angle route."""
        pre = decompose_kernel_slice(1, 1.0)
        recon = pre.reconstruct()
        target = _kernel_slice_poly(1, 1.0)
        assert (recon - target).max_abs_coeff() <= 1e-12
        assert len(pre.sigma0) == 1 and len(pre.sigma1) == 1

    def test_r8_residual(self):
        target = _kernel_slice_poly(8, 0.3)
        pre = decompose_kernel_slice(8, 0.3)
        diff = pre.reconstruct() - target
        assert diff.max_abs_coeff() / target.max_abs_coeff() <= 1e-8

    def test_slice_sweep(self):
        ys = chebyshev_nodes(20)
        for r in range(13):
            for y in ys:
                pre = decompose_kernel_slice(r, float(y))
                target = _kernel_slice_poly(r, float(y))
                diff = pre.reconstruct() - target
                assert diff.max_abs_coeff() / target.max_abs_coeff() <= 1e-8

    def test_touching_slice(self):
        """The r=30 slice at -sqrt(2)/2 touches zero; still decomposes."""
        y = -math.sqrt(0.5)
        pre = decompose_kernel_slice(30, y)
        target = _kernel_slice_poly(30, y)
        diff = pre.reconstruct() - target
        assert diff.max_abs_coeff() / target.max_abs_coeff() <= 1e-8

    def test_rejects_outside_interval(self):
        with pytest.raises(ValueError):
            decompose_kernel_slice(3, 1.5)
