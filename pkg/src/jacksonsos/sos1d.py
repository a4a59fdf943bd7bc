"""Constructive sum-of-squares splittings for polynomials on [-1, 1].

A univariate polynomial p that is nonnegative on [-1, 1] can be written as

    p = u^2 + (1 - x^2) v^2          (even degree 2m: deg u <= m, deg v <= m-1)
    p = (1 + x) s^2 + (1 - x) t^2    (odd degree 2m+1: deg s, deg t <= m)

and either form regroups into p = sigma_0 + sigma_1 (1 - x^2) with explicit
sums of squares sigma_0, sigma_1 of controlled degree.  The construction
here goes through the circle: the Chebyshev coefficients of p are the
cosine coefficients of the nonnegative trigonometric polynomial p(cos t),
whose spectral factor h (a real polynomial in z with |h(e^{it})|^2 =
p(cos t)) is recovered by rooting the symmetrized Laurent polynomial and
keeping one root from each reciprocal pair inside the closed unit disc.
Splitting h by frequency parity then yields (u, v); half-angle splitting
yields (s, t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chebpoly import ChebPoly, _canon, grid_extrema
from .jackson import jackson_lambda

#: relative tolerance for the sampled nonnegativity gate
NONNEG_TOL = 1e-10
#: relative tolerance on the spectral factorization residual
FACTOR_TOL = 1e-9
#: relative tolerance on the final reconstruction residual
RECON_TOL = 1e-8

_MODULUS_BAND = 1e-7      # |z| within this of 1 counts as an on-circle root
_ANGLE_TOLS = (1e-5, 1e-3)  # clustering tolerances tried for on-circle roots


class NotNonnegative(ValueError):
    """The input polynomial dips below zero on [-1, 1] beyond tolerance."""

    def __init__(self, message: str, value: float = math.nan, location=None):
        super().__init__(message)
        self.value = value
        self.location = location


class IllConditioned(ArithmeticError):
    """Root clustering or cancellation spoiled the requested tolerance."""


def _cos_eval(q: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Evaluate sum_k q_k cos(k theta)."""
    k = np.arange(q.size)
    return np.cos(np.outer(theta, k)) @ q


def _cluster_circle_roots(roots: np.ndarray, angle_tol: float):
    """Group on-circle roots into even-sized clusters; None if impossible.

    Each cluster of size 2s contributes s copies of a representative placed
    exactly on the unit circle at the cluster's circular mean angle.
    """
    if roots.size == 0:
        return []
    order = np.argsort(np.angle(roots))
    roots = roots[order]
    angles = np.angle(roots)
    breaks = [i for i in range(1, roots.size)
              if angles[i] - angles[i - 1] > angle_tol]
    clusters = []
    prev = 0
    for b in breaks + [roots.size]:
        clusters.append(list(range(prev, b)))
        prev = b
    # wrap-around: merge the first and last cluster when they touch mod 2 pi
    if len(clusters) > 1 and (angles[0] + 2.0 * math.pi - angles[-1]) <= angle_tol:
        clusters[0] = clusters.pop() + clusters[0]
    reps = []
    for cluster in clusters:
        if len(cluster) % 2:
            return None
        mean = np.sum(roots[cluster])
        if mean == 0:
            return None
        rep = mean / abs(mean)
        reps.extend([rep] * (len(cluster) // 2))
    return reps


def _autocorrelation(h: np.ndarray, d: int) -> np.ndarray:
    """Cosine coefficients a_0..a_d of |h(e^{it})|^2."""
    acf = np.array([float(np.dot(h[: h.size - k], h[k:])) for k in range(d + 1)])
    acf[1:] *= 2.0
    return acf


def _polish_factor(h: np.ndarray, q: np.ndarray, iters: int = 6) -> np.ndarray:
    """Damped Gauss-Newton on ||autocorrelation(h) - q||.

    Root extraction loses about half the working precision at double roots
    on the unit circle (the radial split of a double root scales with the
    square root of the backward error); a few Newton steps on the
    coefficient identity restore it.  Any real factor with the right
    autocorrelation is acceptable here, so leaving the minimum-phase
    manifold is harmless.
    """
    d = q.size - 1
    size = h.size
    best = h.copy()
    best_res = float(np.linalg.norm(_autocorrelation(best, d) - q))
    cur = best
    for _ in range(iters):
        res = _autocorrelation(cur, d) - q
        jac = np.zeros((d + 1, size))
        for k in range(d + 1):
            factor = 1.0 if k == 0 else 2.0
            for j in range(size):
                val = 0.0
                if j + k < size:
                    val += cur[j + k]
                if j - k >= 0:
                    val += cur[j - k]
                jac[k, j] = factor * val
        step = np.linalg.lstsq(jac, -res, rcond=None)[0]
        scale = 1.0
        nxt = cur + step
        nres = float(np.linalg.norm(_autocorrelation(nxt, d) - q))
        while nres >= best_res and scale > 1.0 / 32.0:
            scale *= 0.5
            nxt = cur + scale * step
            nres = float(np.linalg.norm(_autocorrelation(nxt, d) - q))
        cur = nxt
        if nres < best_res:
            best, best_res = nxt, nres
        else:
            break
        if best_res <= 1e-15 * max(1.0, float(np.linalg.norm(q))):
            break
    return best


def fejer_riesz(q) -> np.ndarray:
    """Spectral factor of a nonnegative cosine polynomial.

    Parameters
    ----------
    q : sequence of float
        Cosine coefficients: the input is ``t -> sum_k q[k] cos(k t)``,
        assumed nonnegative for all ``t``.

    Returns
    -------
    ndarray
        Real coefficients ``h_0..h_d`` (ascending powers of z) with
        ``|h(e^{it})|^2`` equal to the input to ``FACTOR_TOL`` relative at
        256 sampled angles, where d is the effective trigonometric degree.

    Raises
    ------
    NotNonnegative
        If sampling finds values below ``-NONNEG_TOL * max|q|``.
    IllConditioned
        If root pairing fails or the factorization residual is too large.
    """
    q = np.asarray(q, dtype=float)
    if q.ndim != 1 or q.size == 0:
        raise ValueError("expected a nonempty 1-D coefficient sequence")
    scale = float(np.max(np.abs(q)))
    if scale == 0.0:
        return np.zeros(1)
    # trim trailing coefficients that are negligible relative to the rest
    dq = q.size - 1
    while dq > 0 and abs(q[dq]) <= 1e-13 * scale:
        dq -= 1
    q = q[: dq + 1]

    theta = np.linspace(0.0, math.pi, 512)
    vals = _cos_eval(q, theta)
    vmin = float(np.min(vals))
    if vmin < -NONNEG_TOL * scale:
        raise NotNonnegative(
            f"sampled value {vmin:.3e} below tolerance for a nonnegative input",
            value=vmin,
            location=float(math.cos(theta[int(np.argmin(vals))])),
        )

    if dq == 0:
        return np.array([math.sqrt(max(q[0], 0.0))])

    # symmetrized Laurent polynomial z^dq * p((z + 1/z) / 2), ascending
    lau = np.zeros(2 * dq + 1)
    lau[dq] = q[0]
    for k in range(1, dq + 1):
        lau[dq + k] += 0.5 * q[k]
        lau[dq - k] += 0.5 * q[k]
    roots = np.roots(lau[::-1])

    moduli = np.abs(roots)
    on_circle = np.abs(moduli - 1.0) <= _MODULUS_BAND
    inside = roots[(moduli < 1.0) & ~on_circle]
    reps = None
    for tol in _ANGLE_TOLS:
        reps = _cluster_circle_roots(roots[on_circle], tol)
        if reps is not None:
            break
    if reps is None:
        raise IllConditioned("on-circle roots do not pair up evenly")
    selected = np.concatenate([inside, np.asarray(reps, dtype=complex)]) \
        if reps else inside
    if selected.size != dq:
        raise IllConditioned(
            f"selected {selected.size} roots for a degree-{dq} factor"
        )

    h = np.real(np.poly(selected))[::-1]

    # scale so the autocorrelation best matches q, then polish
    acf = _autocorrelation(h, dq)
    denom = float(np.dot(acf, acf))
    if denom == 0.0:
        raise IllConditioned("degenerate spectral factor")
    gamma2 = float(np.dot(acf, q)) / denom
    if not math.isfinite(gamma2) or gamma2 <= 0.0:
        raise IllConditioned(f"normalization failed (gamma^2 = {gamma2:.3e})")
    h = _polish_factor(math.sqrt(gamma2) * h, q)

    check = np.linspace(0.0, math.pi, 256)
    hv = np.polyval(h[::-1], np.exp(1j * check))
    resid = float(np.max(np.abs(np.abs(hv) ** 2 - _cos_eval(q, check))))
    val_scale = max(float(np.max(np.abs(vals))), 1e-300)
    if resid > FACTOR_TOL * val_scale:
        raise IllConditioned(
            f"factorization residual {resid:.3e} exceeds "
            f"{FACTOR_TOL:.0e} * {val_scale:.3e}"
        )
    return h


# -- splitting the spectral factor ----------------------------------------------


def _double_x(a: np.ndarray) -> np.ndarray:
    """T-basis coefficients of 2x * (sum a_k T_k)."""
    out = np.zeros(a.size + 1)
    out[1] += 2.0 * a[0]
    for k in range(1, a.size):
        out[k + 1] += a[k]
        out[k - 1] += a[k]
    return out


def _half_angle_basis(kind: str, jmax: int) -> list:
    """T-basis coefficients of cos((2j+1)t/2)/cos(t/2) ('V') or the sine
    analogue sin((2j+1)t/2)/sin(t/2) ('W'), for j = 0..jmax."""
    first = np.array([1.0])
    basis = [first]
    if jmax >= 1:
        basis.append(np.array([-1.0, 2.0]) if kind == "V" else np.array([1.0, 2.0]))
    for _ in range(2, jmax + 1):
        nxt = _double_x(basis[-1])
        nxt[: basis[-2].size] -= basis[-2]
        basis.append(nxt)
    return basis


def _dense_to_poly(a: np.ndarray) -> ChebPoly:
    return ChebPoly(1, _canon({(k,): float(c) for k, c in enumerate(a)}))


def _split_even(h: np.ndarray) -> tuple:
    """h of even degree 2m: factor as u(x) + i sin(t) v(x) on the circle."""
    m = (h.size - 1) // 2
    u = np.zeros(m + 1)
    u[0] = h[m]
    for j in range(1, m + 1):
        u[j] = h[m + j] + h[m - j]
    v = np.zeros(m)
    for j in range(1, m + 1):
        c = h[m + j] - h[m - j]             # coefficient of U_{j-1}
        if c == 0.0:
            continue
        k = j - 1
        while k >= 0:
            v[k] += c * (1.0 if k == 0 else 2.0)
            k -= 2
    return _dense_to_poly(u), _dense_to_poly(v)


def _split_odd(h: np.ndarray) -> tuple:
    """h of odd degree 2m+1: half-angle split into the (s, t) pair."""
    m = (h.size - 2) // 2
    e = np.array([h[m + 1 + j] + h[m - j] for j in range(m + 1)])
    f = np.array([h[m + 1 + j] - h[m - j] for j in range(m + 1)])
    vbasis = _half_angle_basis("V", m)
    wbasis = _half_angle_basis("W", m)
    s = np.zeros(m + 1)
    t = np.zeros(m + 1)
    for j in range(m + 1):
        if e[j]:
            s[: vbasis[j].size] += e[j] * vbasis[j]
        if f[j]:
            t[: wbasis[j].size] += f[j] * wbasis[j]
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    return (_dense_to_poly(s * inv_sqrt2), _dense_to_poly(t * inv_sqrt2))


@dataclass(slots=True, frozen=True)
class LukacsPair:
    """Two-square representation of a polynomial nonnegative on [-1, 1].

    Even parity: p = first^2 + (1 - x^2) second^2.
    Odd parity:  p = (1 + x) first^2 + (1 - x) second^2.
    """

    parity: str
    first: ChebPoly
    second: ChebPoly
    residual: float

    def reconstruct(self) -> ChebPoly:
        if self.parity == "even":
            weight = ChebPoly(1, {(0,): 0.5, (2,): -0.5})     # 1 - x^2
            return self.first * self.first + weight * (self.second * self.second)
        up = ChebPoly(1, {(0,): 1.0, (1,): 1.0})              # 1 + x
        dn = ChebPoly(1, {(0,): 1.0, (1,): -1.0})             # 1 - x
        return up * (self.first * self.first) + dn * (self.second * self.second)


def lukacs_decompose(p: ChebPoly) -> LukacsPair:
    """Decompose a univariate polynomial nonnegative on [-1, 1].

    The nonnegativity gate is a refined-grid minimum at relative tolerance
    ``NONNEG_TOL``; the output reconstructs ``p`` coefficientwise to
    ``RECON_TOL`` relative or the decomposition is rejected.
    """
    if p.num_vars != 1:
        raise ValueError("decomposition is univariate only")
    if p.is_zero():
        zero = ChebPoly.zero(1)
        return LukacsPair(parity="even", first=zero, second=zero, residual=0.0)

    lo, loc, hi, _ = grid_extrema(p, 1025, 1)
    norm = max(abs(lo), abs(hi))
    if lo < -NONNEG_TOL * norm:
        raise NotNonnegative(
            f"grid minimum {lo:.3e} at x={loc[0]:.6f} below tolerance",
            value=lo,
            location=loc[0],
        )

    deg = p.degree()
    dense = np.zeros(deg + 1)
    for (k,), c in p.coeffs.items():
        dense[k] = c
    h = fejer_riesz(dense)
    dq = h.size - 1
    if dq % 2 == 0:
        first, second = _split_even(h)
        parity = "even"
    else:
        first, second = _split_odd(h)
        parity = "odd"

    pair = LukacsPair(parity=parity, first=first, second=second, residual=0.0)
    diff = pair.reconstruct() - p
    residual = diff.max_abs_coeff() / p.max_abs_coeff()
    if residual > RECON_TOL:
        raise IllConditioned(
            f"reconstruction residual {residual:.3e} exceeds {RECON_TOL:.0e}"
        )
    return LukacsPair(parity=parity, first=first, second=second,
                      residual=residual)


@dataclass(slots=True, frozen=True)
class PreorderPair1D:
    """Explicit square lists realizing p = sigma_0 + sigma_1 (1 - x^2).

    ``sigma0`` and ``sigma1`` hold the square roots: sigma_i = sum q^2 over
    the respective list.  Degrees satisfy deg sigma_0 <= deg p + 1 and
    deg(sigma_1 (1 - x^2)) <= deg p + 1.
    """

    sigma0: tuple
    sigma1: tuple

    def reconstruct(self) -> ChebPoly:
        out = ChebPoly.zero(1)
        for qpoly in self.sigma0:
            out = out + qpoly * qpoly
        weight = ChebPoly(1, {(0,): 0.5, (2,): -0.5})
        for qpoly in self.sigma1:
            out = out + weight * (qpoly * qpoly)
        return out


def to_preorder_pair(pair: LukacsPair) -> PreorderPair1D:
    """Regroup a two-square pair into the sigma_0 / sigma_1 form.

    The odd case uses (1 +- x) = ((1 +- x)^2 + (1 - x^2)) / 2, so each of
    s and t contributes one square to sigma_0 and one to sigma_1.
    """
    if pair.parity == "even":
        sigma0 = tuple(q for q in (pair.first,) if not q.is_zero())
        sigma1 = tuple(q for q in (pair.second,) if not q.is_zero())
        return PreorderPair1D(sigma0=sigma0, sigma1=sigma1)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    up = ChebPoly(1, {(0,): 1.0, (1,): 1.0})
    dn = ChebPoly(1, {(0,): 1.0, (1,): -1.0})
    sigma0 = tuple(q for q in ((up * pair.first).scale(inv_sqrt2),
                               (dn * pair.second).scale(inv_sqrt2))
                   if not q.is_zero())
    sigma1 = tuple(q for q in (pair.first.scale(inv_sqrt2),
                               pair.second.scale(inv_sqrt2))
                   if not q.is_zero())
    return PreorderPair1D(sigma0=sigma0, sigma1=sigma1)


def decompose_kernel_slice(r: int, y: float) -> PreorderPair1D:
    """Square decomposition of the kernel slice x -> K_r(x, y), y in [-1, 1]."""
    if not -1.0 <= y <= 1.0:
        raise ValueError(f"slice point {y} outside [-1, 1]")
    coeffs = {(0,): 1.0}
    tk_prev, tk = 1.0, y
    for k in range(1, r + 1):
        coeffs[(k,)] = 2.0 * jackson_lambda(k, r) * tk
        tk_prev, tk = tk, 2.0 * y * tk - tk_prev
    return to_preorder_pair(lukacs_decompose(ChebPoly(1, coeffs)))
