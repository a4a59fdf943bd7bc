"""Tests for the tensor Chebyshev polynomial algebra."""

import math

import numpy as np
import pytest

from jacksonsos.chebpoly import (
    ChebPoly,
    MonoPoly,
    cheb_from_monomial,
    embed_univariate,
    enumerate_multidegrees,
    grid_extrema,
    hamming_weight,
    mono_from_cheb,
    total_degree,
)

from helpers import demo_f, random_cheb


class TestMultidegrees:
    def test_total_and_weight(self):
        assert total_degree((2, 0, 3)) == 5
        assert hamming_weight((2, 0, 3)) == 2
        assert hamming_weight((0, 0)) == 0

    def test_enumerate_n2_d2(self):
        got = enumerate_multidegrees(2, 2)
        assert len(got) == 6
        assert got == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]

    def test_enumerate_n1_d4(self):
        assert enumerate_multidegrees(1, 4) == [(0,), (1,), (2,), (3,), (4,)]

    def test_enumerate_count_n3_d2(self):
        got = enumerate_multidegrees(3, 2)
        assert len(got) == math.comb(5, 2) == 10
        # cross-check against exhaustive enumeration
        brute = [(a, b, c) for a in range(3) for b in range(3) for c in range(3)
                 if a + b + c <= 2]
        assert set(got) == set(brute)

    def test_enumerate_rejects_bad_args(self):
        with pytest.raises(ValueError):
            enumerate_multidegrees(0, 2)
        with pytest.raises(ValueError):
            enumerate_multidegrees(1, -1)


class TestConversions:
    def test_quartic_example(self):
        """1 - x^2 - x^3 + x^4 has the closed-form Chebyshev expansion."""
        f = demo_f()
        expected = {(0,): 7 / 8, (1,): -3 / 4, (3,): -1 / 4, (4,): 1 / 8}
        assert set(f.coeffs) == set(expected)
        for k, v in expected.items():
            assert f.coeffs[k] == pytest.approx(v, abs=1e-15)
        # evaluation agreement with the power form at random points
        mono = MonoPoly(1, {(0,): 1.0, (2,): -1.0, (3,): -1.0, (4,): 1.0})
        rng = np.random.default_rng(0)
        for x in rng.uniform(-1, 1, 10):
            assert f.eval((x,)) == pytest.approx(mono.eval((x,)), abs=1e-12)

    def test_constant(self):
        got = cheb_from_monomial(MonoPoly.constant(1, 5.0))
        assert got.coeffs == {(0,): 5.0}

    def test_cross_term(self):
        got = cheb_from_monomial(MonoPoly(2, {(1, 1): 1.0}))
        assert got.coeffs == {(1, 1): 1.0}

    def test_t4_to_monomials(self):
        mono = mono_from_cheb(ChebPoly.basis(1, (4,)))
        assert mono.coeffs == {(4,): 8.0, (2,): -8.0, (0,): 1.0}

    def test_t0_and_t11(self):
        assert mono_from_cheb(ChebPoly.basis(1, (0,))).coeffs == {(0,): 1.0}
        assert mono_from_cheb(ChebPoly.basis(2, (1, 1))).coeffs == {(1, 1): 1.0}

    def test_round_trip_random(self):
        """mono_from_cheb inverts cheb_from_monomial to 1e-12 relative."""
        rng = np.random.default_rng(5)
        for _ in range(30):
            n = int(rng.integers(1, 5))
            d = int(rng.integers(0, 13))
            p = random_cheb(rng, n, d)
            back = cheb_from_monomial(mono_from_cheb(p))
            diff = back - p
            assert diff.max_abs_coeff() <= 1e-12 * max(p.max_abs_coeff(), 1.0)

    def test_degree_preserved(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            n = int(rng.integers(1, 4))
            d = int(rng.integers(1, 9))
            keys = enumerate_multidegrees(n, d)
            top = [k for k in keys if total_degree(k) == d]
            coeffs = {k: rng.standard_normal() for k in keys}
            coeffs[top[0]] = 1.0
            mono = MonoPoly(n, coeffs)
            assert cheb_from_monomial(mono).degree() == d


class TestEvaluation:
    def test_defining_identity(self):
        x = math.cos(math.pi / 7)
        got = ChebPoly.basis(1, (3,)).eval((x,))
        assert got == pytest.approx(math.cos(3 * math.pi / 7), abs=1e-14)

    def test_all_ones_point(self):
        rng = np.random.default_rng(1)
        p = random_cheb(rng, 3, 4)
        assert p.eval((1.0, 1.0, 1.0)) == pytest.approx(sum(p.coeffs.values()),
                                                        rel=1e-12)

    def test_t22_at_origin(self):
        assert ChebPoly.basis(2, (2, 2)).eval((0.0, 0.0)) == pytest.approx(1.0)

    def test_eval_matches_monomial_form(self):
        rng = np.random.default_rng(2)
        p = random_cheb(rng, 2, 5)
        mono = mono_from_cheb(p)
        for _ in range(100):
            pt = rng.uniform(-1, 1, 2)
            a, b = p.eval(pt), mono.eval(pt)
            assert a == pytest.approx(b, rel=1e-10, abs=1e-10)

    def test_eval_outside_cube(self):
        p = ChebPoly.basis(1, (3,))
        mono = mono_from_cheb(p)
        for x in (1.5, -2.0, 3.25):
            assert p.eval((x,)) == pytest.approx(mono.eval((x,)), rel=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            ChebPoly.basis(2, (1, 0)).eval((0.5,))

    def test_eval_grid_matches_pointwise(self):
        rng = np.random.default_rng(3)
        p = random_cheb(rng, 2, 4)
        ax = np.linspace(-1, 1, 7)
        grid = p.eval_grid([ax, ax])
        for i, x in enumerate(ax):
            for j, y in enumerate(ax):
                assert grid[i, j] == pytest.approx(p.eval((x, y)), rel=1e-12,
                                                   abs=1e-12)


class TestAlgebra:
    def test_add_cancels(self):
        t1 = ChebPoly.basis(1, (1,))
        assert (t1 + t1.scale(-1.0)).is_zero()

    def test_scale_zero(self):
        assert ChebPoly.basis(1, (2,)).scale(0.0).is_zero()

    def test_constant_shift(self):
        f = demo_f()
        shifted = f.shift(0.1)
        assert shifted.coeffs[(0,)] == pytest.approx(7 / 8 + 0.1)
        assert shifted.coeffs[(1,)] == f.coeffs[(1,)]

    def test_t2_times_t3(self):
        got = ChebPoly.basis(1, (2,)) * ChebPoly.basis(1, (3,))
        assert got.coeffs == {(5,): 0.5, (1,): 0.5}
        rng = np.random.default_rng(4)
        for x in rng.uniform(-1, 1, 10):
            assert got.eval((x,)) == pytest.approx(
                math.cos(2 * math.acos(x)) * math.cos(3 * math.acos(x)), abs=1e-12)

    def test_t0_is_identity(self):
        rng = np.random.default_rng(7)
        p = random_cheb(rng, 2, 3)
        q = ChebPoly.constant(2, 1.0) * p
        assert (q - p).max_abs_coeff() <= 1e-15

    def test_weight_times_t1(self):
        weight = ChebPoly(1, {(0,): 0.5, (2,): -0.5})   # 1 - x^2
        got = weight * ChebPoly.basis(1, (1,))
        rng = np.random.default_rng(8)
        for x in rng.uniform(-1, 1, 10):
            assert got.eval((x,)) == pytest.approx((1 - x * x) * x, abs=1e-13)

    def test_mul_commutative_associative(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            n = int(rng.integers(1, 3))
            p = random_cheb(rng, n, int(rng.integers(0, 5)))
            q = random_cheb(rng, n, int(rng.integers(0, 5)))
            s = random_cheb(rng, n, int(rng.integers(0, 4)))
            comm = p * q - q * p
            assert comm.max_abs_coeff() <= 1e-12 * max(
                (p * q).max_abs_coeff(), 1.0)
            assoc = (p * q) * s - p * (q * s)
            assert assoc.max_abs_coeff() <= 1e-12 * max(
                ((p * q) * s).max_abs_coeff(), 1.0)

    def test_mul_degree_adds(self):
        rng = np.random.default_rng(10)
        p = random_cheb(rng, 1, 3)
        q = random_cheb(rng, 1, 4)
        assert (p * q).degree() == p.degree() + q.degree()

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            ChebPoly.basis(1, (1,)) + ChebPoly.basis(2, (1, 0))
        with pytest.raises(ValueError):
            ChebPoly.basis(1, (1,)) * ChebPoly.basis(2, (1, 0))


class TestInnerProduct:
    def test_orthogonality_table(self):
        """Inner products of basis pairs over the n=2, d=4 simplex are exact."""
        kappas = enumerate_multidegrees(2, 4)
        for a in kappas:
            for b in kappas:
                got = ChebPoly.basis(2, a).inner(ChebPoly.basis(2, b))
                expected = 2.0 ** (-hamming_weight(a)) if a == b else 0.0
                assert got == expected

    def test_named_values(self):
        t2 = ChebPoly.basis(1, (2,))
        assert t2.inner(t2) == 0.5
        t11 = ChebPoly.basis(2, (1, 1))
        assert t11.inner(t11) == 0.25
        assert ChebPoly.basis(1, (1,)).inner(ChebPoly.basis(1, (3,))) == 0.0


class TestBoundedness:
    def test_basis_bounded_on_cube(self):
        rng = np.random.default_rng(11)
        pts = rng.uniform(-1, 1, size=(10_000, 2))
        for kappa in [(3, 0), (5, 2), (1, 7), (4, 4)]:
            p = ChebPoly.basis(2, kappa)
            vals = [p.eval(pt) for pt in pts[:2500]]
            assert max(abs(v) for v in vals) <= 1.0 + 1e-12


class TestGridExtrema:
    def test_t2(self):
        t2 = ChebPoly.basis(1, (2,))
        lo, argmin, hi, argmax = grid_extrema(t2, 65, 2)
        assert lo == pytest.approx(-1.0, abs=1e-10)
        assert argmin[0] == pytest.approx(0.0, abs=1e-6)
        assert hi == pytest.approx(1.0, abs=1e-12)
        # both endpoints attain the max; lexicographically smallest wins
        assert argmax[0] == pytest.approx(-1.0, abs=1e-12)

    def test_quartic_min_matches_root_oracle(self):
        """Candidates are the endpoints and the real critical points."""
        f = demo_f()
        deriv = np.polynomial.polynomial.polyder([1.0, 0.0, -1.0, -1.0, 1.0])
        roots = np.polynomial.polynomial.polyroots(deriv)
        cands = [r.real for r in roots
                 if abs(r.imag) < 1e-12 and -1 <= r.real <= 1] + [-1.0, 1.0]
        vals = [np.polynomial.polynomial.polyval(x, [1.0, 0.0, -1.0, -1.0, 1.0])
                for x in cands]
        lo, argmin, _, _ = grid_extrema(f, 257, 3)
        assert lo == pytest.approx(min(vals), abs=1e-9)
        assert argmin[0] == pytest.approx(cands[int(np.argmin(vals))], abs=1e-5)

    def test_constant(self):
        c = ChebPoly.constant(2, 2.5)
        lo, _, hi, _ = grid_extrema(c, 17, 1)
        assert lo == hi == 2.5

    def test_point_budget_guard(self):
        p = ChebPoly.constant(8, 1.0)
        with pytest.raises(ValueError):
            grid_extrema(p, 100, 1)

    def test_min_points(self):
        with pytest.raises(ValueError):
            grid_extrema(ChebPoly.constant(1, 0.0), 1, 1)


class TestEmbedding:
    def test_embed_univariate(self):
        p = ChebPoly(1, {(2,): 1.5, (0,): -0.5})
        q = embed_univariate(p, 3, 1)
        assert q.coeffs == {(0, 2, 0): 1.5, (0, 0, 0): -0.5}
        with pytest.raises(ValueError):
            embed_univariate(p, 2, 2)
        with pytest.raises(ValueError):
            embed_univariate(ChebPoly.basis(2, (1, 1)), 3, 0)
