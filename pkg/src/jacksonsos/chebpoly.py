"""Sparse multivariate polynomial arithmetic in the tensor Chebyshev basis.

A polynomial is stored as a finite map from multidegrees (tuples of
nonnegative ints, one entry per variable) to real coefficients.  The map
``{kappa: c}`` represents ``sum_kappa c * T_kappa`` where
``T_kappa(x) = prod_i T_{kappa_i}(x_i)`` and ``T_k`` is the Chebyshev
polynomial of the first kind, ``T_k(cos t) = cos(k t)``.  The companion
class :class:`MonoPoly` uses the same storage for the ordinary power basis
``x^kappa`` and exists for parsing and reporting.

All operations are pure: they never mutate their inputs and return values
in canonical sparse form (no stored zeros, and no coefficients tinier than
``DROP_TOL`` relative to the largest one).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as _ncheb

Multidegree = tuple[int, ...]

#: coefficients smaller than this (relative to the largest magnitude in the
#: same polynomial) are dropped when canonicalizing
DROP_TOL = 1e-14

#: refuse to materialize tensor grids with more points than this
POINT_BUDGET = 10 ** 7

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def total_degree(kappa: Multidegree) -> int:
    """Sum of the entries of a multidegree."""
    return sum(kappa)


def hamming_weight(kappa: Multidegree) -> int:
    """Number of nonzero entries of a multidegree."""
    return sum(1 for k in kappa if k)


def _canon(coeffs: dict) -> dict:
    """Drop zeros and relatively negligible coefficients."""
    if not coeffs:
        return {}
    top = max(abs(c) for c in coeffs.values())
    if top == 0.0:
        return {}
    cut = DROP_TOL * top
    return {k: float(c) for k, c in coeffs.items() if abs(c) > cut}


def _t_values(x: float, dmax: int) -> list[float]:
    """T_0(x) .. T_dmax(x) by the three-term recurrence."""
    vals = [1.0]
    if dmax >= 1:
        vals.append(x)
    for _ in range(2, dmax + 1):
        vals.append(2.0 * x * vals[-1] - vals[-2])
    return vals


@dataclass(slots=True)
class ChebPoly:
    """Polynomial ``sum_kappa c_kappa T_kappa`` in ``num_vars`` variables.

    The empty coefficient map is the zero polynomial.  Inner-product
    coefficients against the product Chebyshev probability measure are
    ``c_kappa * 2**(-hamming_weight(kappa))``; plain basis coefficients are
    stored so that addition, multiplication and evaluation stay factor-free.
    """

    num_vars: int
    coeffs: dict

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("num_vars must be >= 1")
        self.coeffs = {tuple(k): float(c) for k, c in self.coeffs.items() if c != 0.0}

    @classmethod
    def zero(cls, num_vars: int) -> "ChebPoly":
        return cls(num_vars, {})

    @classmethod
    def constant(cls, num_vars: int, value: float) -> "ChebPoly":
        return cls(num_vars, {(0,) * num_vars: float(value)})

    @classmethod
    def basis(cls, num_vars: int, kappa: Multidegree) -> "ChebPoly":
        """The basis polynomial T_kappa."""
        kappa = tuple(int(k) for k in kappa)
        if len(kappa) != num_vars or any(k < 0 for k in kappa):
            raise ValueError(f"bad multidegree {kappa} for {num_vars} variables")
        return cls(num_vars, {kappa: 1.0})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Total degree; 0 for the zero polynomial."""
        if not self.coeffs:
            return 0
        return max(total_degree(k) for k in self.coeffs)

    def per_variable_degrees(self) -> tuple[int, ...]:
        """Largest exponent of each variable over the stored terms."""
        degs = [0] * self.num_vars
        for kappa in self.coeffs:
            for i, k in enumerate(kappa):
                if k > degs[i]:
                    degs[i] = k
        return tuple(degs)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    def _require_same_vars(self, other: "ChebPoly") -> None:
        if self.num_vars != other.num_vars:
            raise ValueError(
                f"dimension mismatch: {self.num_vars} vs {other.num_vars} variables"
            )

    # -- linear structure ---------------------------------------------------

    def __add__(self, other: "ChebPoly") -> "ChebPoly":
        self._require_same_vars(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0.0) + c
        return ChebPoly(self.num_vars, _canon(out))

    def __sub__(self, other: "ChebPoly") -> "ChebPoly":
        return self + other.scale(-1.0)

    def __neg__(self) -> "ChebPoly":
        return self.scale(-1.0)

    def scale(self, a: float) -> "ChebPoly":
        a = float(a)
        return ChebPoly(self.num_vars, _canon({k: a * c for k, c in self.coeffs.items()}))

    def shift(self, a: float) -> "ChebPoly":
        """Add the constant ``a``."""
        return self + ChebPoly.constant(self.num_vars, a)

    # -- products ------------------------------------------------------------

    def __mul__(self, other: "ChebPoly") -> "ChebPoly":
        """Pointwise product, via T_a T_b = (T_{a+b} + T_{|a-b|}) / 2 per axis."""
        self._require_same_vars(other)
        out: dict = {}
        for ka, ca in self.coeffs.items():
            for kb, cb in other.coeffs.items():
                base = ca * cb
                options = []
                for a, b in zip(ka, kb):
                    if a == 0 or b == 0:
                        options.append(((a + b, 1.0),))
                    else:
                        options.append(((a + b, 0.5), (abs(a - b), 0.5)))
                for combo in itertools.product(*options):
                    key = tuple(e[0] for e in combo)
                    w = base
                    for e in combo:
                        w *= e[1]
                    out[key] = out.get(key, 0.0) + w
        return ChebPoly(self.num_vars, _canon(out))

    def inner(self, other: "ChebPoly") -> float:
        """Inner product against the product Chebyshev measure.

        By orthogonality this is ``sum_kappa c_kappa(p) c_kappa(q)
        2**(-hamming_weight(kappa))`` over the shared multidegrees.
        """
        self._require_same_vars(other)
        small, big = self.coeffs, other.coeffs
        if len(big) < len(small):
            small, big = big, small
        total = 0.0
        for k, c in small.items():
            d = big.get(k)
            if d is not None:
                total += c * d * 2.0 ** (-hamming_weight(k))
        return total

    # -- evaluation -----------------------------------------------------------

    def eval(self, point) -> float:
        """Evaluate at a single point (allowed outside the cube)."""
        pt = [float(t) for t in point]
        if len(pt) != self.num_vars:
            raise ValueError(
                f"dimension mismatch: point has {len(pt)} entries, "
                f"polynomial has {self.num_vars} variables"
            )
        if not self.coeffs:
            return 0.0
        degs = self.per_variable_degrees()
        tables = [_t_values(x, d) for x, d in zip(pt, degs)]
        total = 0.0
        for kappa, c in self.coeffs.items():
            term = c
            for i, k in enumerate(kappa):
                term *= tables[i][k]
            total += term
        return total

    __call__ = eval

    def eval_grid(self, axes) -> np.ndarray:
        """Evaluate on the tensor grid spanned by the 1-D arrays ``axes``."""
        if len(axes) != self.num_vars:
            raise ValueError("one axis array per variable required")
        axes = [np.atleast_1d(np.asarray(a, dtype=float)) for a in axes]
        shape = tuple(a.size for a in axes)
        out = np.zeros(shape)
        if not self.coeffs:
            return out
        degs = self.per_variable_degrees()
        tables = [_ncheb.chebvander(a, d) for a, d in zip(axes, degs)]
        for kappa, c in self.coeffs.items():
            prod = tables[0][:, kappa[0]]
            for i in range(1, self.num_vars):
                prod = np.multiply.outer(prod, tables[i][:, kappa[i]])
            out += c * prod
        return out


@dataclass(slots=True)
class MonoPoly:
    """Polynomial ``sum_alpha a_alpha x^alpha`` in the power basis."""

    num_vars: int
    coeffs: dict

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("num_vars must be >= 1")
        self.coeffs = {tuple(k): float(c) for k, c in self.coeffs.items() if c != 0.0}

    @classmethod
    def constant(cls, num_vars: int, value: float) -> "MonoPoly":
        return cls(num_vars, {(0,) * num_vars: float(value)})

    def degree(self) -> int:
        if not self.coeffs:
            return 0
        return max(total_degree(k) for k in self.coeffs)

    def eval(self, point) -> float:
        pt = [float(t) for t in point]
        if len(pt) != self.num_vars:
            raise ValueError("dimension mismatch")
        total = 0.0
        for alpha, a in self.coeffs.items():
            term = a
            for x, e in zip(pt, alpha):
                if e:
                    term *= x ** e
            total += term
        return total

    __call__ = eval


# -- basis conversions ---------------------------------------------------------


@lru_cache(maxsize=None)
def _xpow_as_cheb(k: int) -> tuple:
    """Nonzero Chebyshev coefficients of x^k, as ((degree, coeff), ...)."""
    c = _ncheb.poly2cheb([0.0] * k + [1.0])
    return tuple((j, float(v)) for j, v in enumerate(c) if v != 0.0)


@lru_cache(maxsize=None)
def _cheb_as_xpow(k: int) -> tuple:
    """Nonzero power coefficients of T_k, as ((degree, coeff), ...)."""
    c = _ncheb.cheb2poly([0.0] * k + [1.0])
    return tuple((j, float(v)) for j, v in enumerate(c) if v != 0.0)


def _convert(coeffs: dict, table) -> dict:
    out: dict = {}
    for key, a in coeffs.items():
        expansions = [table(e) for e in key]
        for combo in itertools.product(*expansions):
            new_key = tuple(e[0] for e in combo)
            w = a
            for e in combo:
                w *= e[1]
            out[new_key] = out.get(new_key, 0.0) + w
    return _canon(out)


def cheb_from_monomial(p: MonoPoly) -> ChebPoly:
    """Re-express a power-basis polynomial in the tensor Chebyshev basis."""
    return ChebPoly(p.num_vars, _convert(p.coeffs, _xpow_as_cheb))


def mono_from_cheb(p: ChebPoly) -> MonoPoly:
    """Re-express a Chebyshev-basis polynomial in the power basis."""
    return MonoPoly(p.num_vars, _convert(p.coeffs, _cheb_as_xpow))


def embed_univariate(p: ChebPoly, num_vars: int, axis: int) -> ChebPoly:
    """Lift a univariate polynomial into ``num_vars`` variables at ``axis``."""
    if p.num_vars != 1:
        raise ValueError("only univariate polynomials can be embedded")
    if not 0 <= axis < num_vars:
        raise ValueError(f"axis {axis} out of range for {num_vars} variables")
    out = {}
    for (k,), c in p.coeffs.items():
        key = [0] * num_vars
        key[axis] = k
        out[tuple(key)] = c
    return ChebPoly(num_vars, out)


def enumerate_multidegrees(n: int, d: int) -> list[Multidegree]:
    """All multidegrees with ``n`` entries and total degree <= ``d``.

    Returned in lexicographic order; the count is binomial(n + d, d).
    """
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")

    def rec(vars_left: int, budget: int):
        if vars_left == 1:
            for k in range(budget + 1):
                yield (k,)
            return
        for k in range(budget + 1):
            for rest in rec(vars_left - 1, budget - k):
                yield (k,) + rest

    return list(rec(n, d))


# -- grid extremum estimation ---------------------------------------------------


def lobatto_axis(points: int) -> np.ndarray:
    """``points`` Chebyshev-Lobatto nodes cos(j*pi/(points-1)), ascending."""
    if points < 2:
        raise ValueError("need at least 2 points per axis")
    return np.cos(np.arange(points - 1, -1, -1) * math.pi / (points - 1))


def _golden_min(f, lo: float, hi: float, iters: int = 80):
    """Golden-section minimum of ``f`` on [lo, hi]; returns (value, point).

    Endpoints are probed as well, so the result never exceeds min(f(lo), f(hi)).
    """
    best_x, best_v = lo, f(lo)
    fv = f(hi)
    if fv < best_v:
        best_x, best_v = hi, fv
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
            if fc < best_v:
                best_x, best_v = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
            if fd < best_v:
                best_x, best_v = d, fd
        if b - a < 1e-14:
            break
    return best_v, best_x


def _refine(p: ChebPoly, axis: np.ndarray, idx, start_val: float, sign: float,
            refine_iters: int):
    """Coordinate-wise golden-section polish of ``sign * p`` from a grid cell."""
    m = axis.size
    x = [float(axis[i]) for i in idx]
    brackets = [(float(axis[max(i - 1, 0)]), float(axis[min(i + 1, m - 1)])) for i in idx]
    best_v, best_x = sign * start_val, list(x)
    for _ in range(max(refine_iters, 0)):
        for j in range(p.num_vars):
            lo, hi = brackets[j]

            def slice_fn(t, j=j):
                pt = list(best_x)
                pt[j] = t
                return sign * p.eval(pt)

            v, t = _golden_min(slice_fn, lo, hi)
            if v < best_v:
                best_v = v
                best_x[j] = t
    return sign * best_v, tuple(best_x)


def grid_extrema(p: ChebPoly, points_per_axis: int, refine_iters: int = 2):
    """Estimate extrema of ``p`` over the cube [-1, 1]^n.

    Evaluates on the tensor Chebyshev-Lobatto grid and polishes the best
    cells by coordinate-wise golden section.  Returns
    ``(min_est, argmin, max_est, argmax)``.  These are estimates, not
    certified bounds; ties go to the lexicographically smallest point.
    """
    if points_per_axis < 2:
        raise ValueError("points_per_axis must be >= 2")
    n = p.num_vars
    if points_per_axis ** n > POINT_BUDGET:
        raise ValueError(
            f"grid of {points_per_axis}^{n} points exceeds budget {POINT_BUDGET}"
        )
    axis = lobatto_axis(points_per_axis)
    vals = p.eval_grid([axis] * n)
    flat_min = int(np.argmin(vals))
    flat_max = int(np.argmax(vals))
    idx_min = np.unravel_index(flat_min, vals.shape)
    idx_max = np.unravel_index(flat_max, vals.shape)
    min_est, argmin = _refine(p, axis, idx_min, float(vals[idx_min]), 1.0, refine_iters)
    max_est, argmax = _refine(p, axis, idx_max, float(vals[idx_max]), -1.0, refine_iters)
    return min_est, argmin, max_est, argmax


def sup_norm_estimate(p: ChebPoly, points_per_axis: int = 257, refine_iters: int = 1) -> float:
    """Grid estimate of the sup norm of ``p`` on the cube."""
    lo, _, hi, _ = grid_extrema(p, points_per_axis, refine_iters)
    return max(abs(lo), abs(hi))
