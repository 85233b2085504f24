"""Quantitative estimates behind the block lower bound.

Covers the u_t series with a certified tail, the perturbed infinite
correction product, the elementary product bracket, the closed-form ratio
estimates for the A- and C-factors, the margin function g, and the table
of block values P_{F_n}(phi) approaching their limit.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpfr

from .errors import OutOfRange, SumExceedsOne, TailTooLarge
from .numtheory import fib
from .product import SudlerStream
from .scalar import DEFAULT_CONFIG, GUARD_BITS, PrecisionConfig, const_phi, frac
from . import decomposition

_ONE_SEVENTH_MARGIN_T = 1000


def u_t(t: int, cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """u_t = 2(sqrt(5) t - {t phi} + 1/2)."""
    if t < 1:
        raise ValueError("t must be >= 1")
    with cfg.context(GUARD_BITS):
        phi = (gmpy2.sqrt(mpfr(5)) - 1) / 2
        v = 2 * (gmpy2.sqrt(mpfr(5)) * t - frac(t * phi) + mpfr("0.5"))
    with cfg.context():
        return mpfr(v)


@dataclass(frozen=True)
class SeriesBound:
    """Partial sum up to T plus a certified upper bound on the tail."""

    partial: mpfr
    tail: mpfr
    total_upper: mpfr
    T: int


def _tail_inv_u_sq(T: int, sqrt5) -> mpfr:
    # sum_{t>T} u_t^{-2} < sum_{t>T} (2 sqrt5 t - 1)^{-2}
    #                    < int_T^inf (2 sqrt5 x - 1)^{-2} dx = 1/(2 sqrt5 (2 sqrt5 T - 1))
    return 1 / (2 * sqrt5 * (2 * sqrt5 * T - 1))


def sum_inv_u_sq(T: int, cfg: PrecisionConfig = DEFAULT_CONFIG) -> SeriesBound:
    """Certified enclosure of sum_{t>=1} 1/u_t^2 from the partial sum to T.

    The tail certificate uses u_t > 2 sqrt(5) t - 1 (forced by {t phi} < 1)
    and integral comparison.  For T >= 1000 the total upper bound is
    checked to sit below 1/7.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    with cfg.context(GUARD_BITS):
        sqrt5 = gmpy2.sqrt(mpfr(5))
        phi = (sqrt5 - 1) / 2
        half = mpfr("0.5")
        # compensated sum of 1/u_t^2; t*phi by direct multiplication so each
        # term is independently accurate
        total = mpfr(0)
        comp = mpfr(0)
        for t in range(1, T + 1):
            u = 2 * (sqrt5 * t - frac(t * phi) + half)
            y = 1 / (u * u) - comp
            s = total + y
            comp = (s - total) - y
            total = s
        tail = _tail_inv_u_sq(T, sqrt5)
        upper = total + tail
        if T >= _ONE_SEVENTH_MARGIN_T:
            assert upper < mpfr(1) / 7, f"series certificate failed: {upper} >= 1/7"
    with cfg.context():
        return SeriesBound(partial=mpfr(total), tail=mpfr(tail),
                           total_upper=mpfr(upper), T=T)


@dataclass(frozen=True)
class PerturbedProductBound:
    """Certified lower bound on prod_{t>=1}(1 - w^2/u_t^2): the exact finite
    product to T times the bracket lower bound 1 - w^2 * tail for the rest."""

    lower: mpfr
    finite_part: mpfr
    tail: mpfr
    T: int


def perturbed_c_infinity(w, T: int, cfg: PrecisionConfig = DEFAULT_CONFIG) -> PerturbedProductBound:
    """Lower-bound the infinite correction product at perturbation scale w.

    Requires |w| <= sqrt(5) (the admissible-shift range) and a tail small
    enough that the product bracket applies; otherwise TailTooLarge.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    with cfg.context(GUARD_BITS):
        sqrt5 = gmpy2.sqrt(mpfr(5))
        w = mpfr(w)
        if abs(w) > sqrt5:
            raise ValueError(f"|w| = {abs(w)} exceeds sqrt(5)")
        phi = (sqrt5 - 1) / 2
        half = mpfr("0.5")
        w2 = w * w
        prod = mpfr(1)
        for t in range(1, T + 1):
            u = 2 * (sqrt5 * t - frac(t * phi) + half)
            prod *= 1 - w2 / (u * u)
        tail = _tail_inv_u_sq(T, sqrt5)
        if w2 * tail >= 1:
            raise TailTooLarge(
                f"w^2 * tail = {w2 * tail} >= 1; increase T")
        lower = prod * (1 - w2 * tail)
    with cfg.context():
        return PerturbedProductBound(lower=mpfr(lower), finite_part=mpfr(prod),
                                     tail=mpfr(tail), T=T)


def prod_bound_check(a, cfg: PrecisionConfig = DEFAULT_CONFIG):
    """Bracket 1 - A < prod(1 - |a_t|) < 1/(1 - A) for A = sum|a_t| < 1.

    Returns (1 - A, 1/(1 - A)) after asserting the product really sits
    inside the bracket.
    """
    a = list(a)
    if len(a) < 2:
        raise ValueError("need at least two terms")
    with cfg.context(GUARD_BITS):
        A = mpfr(0)
        prod = mpfr(1)
        for x in a:
            ax = abs(mpfr(x))
            A += ax
            prod *= 1 - ax
        if A >= 1:
            raise SumExceedsOne(f"sum |a_t| = {A} >= 1")
        lower = 1 - A
        upper = 1 / (1 - A)
        assert lower < prod < upper, f"bracket violated: {lower} / {prod} / {upper}"
    with cfg.context():
        return mpfr(lower), mpfr(upper)


def ratio_A(n: int, eps, cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """|Abar_n(eps) / A_n| from the two closed forms."""
    with cfg.context(GUARD_BITS):
        v = decomposition.A_bar(n, eps, cfg) / decomposition.A_n(n, cfg)
    with cfg.context():
        return abs(mpfr(v))


def ratio_A_model(p, cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """First-order model 1 + p for the A-factor ratio."""
    with cfg.context():
        return 1 + mpfr(p)


def _p_bounds(cfg: PrecisionConfig):
    with cfg.context(GUARD_BITS):
        phi = (gmpy2.sqrt(mpfr(5)) - 1) / 2
        return -phi * phi, phi


def ratio_C_lower(p, cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """Lower-bound model 1 - (1 + 2p)^2 / 7 for the C-factor ratio,
    valid for p in [-phi^2, phi]."""
    lo, hi = _p_bounds(cfg)
    with cfg.context(GUARD_BITS):
        p = mpfr(p)
        slack = mpfr(2) ** (-cfg.bits // 2)
        if p < lo - slack or p > hi + slack:
            raise OutOfRange(f"p = {p} outside [-phi^2, phi]")
        v = 1 - (1 + 2 * p) ** 2 / 7
    with cfg.context():
        return mpfr(v)


def g(x, cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """g(x) = (1 + x)(1 - (1 + 2x)^2 / 7), the combined-ratio margin."""
    with cfg.context(GUARD_BITS):
        x = mpfr(x)
        v = (1 + x) * (1 - (1 + 2 * x) ** 2 / 7)
    with cfg.context():
        return mpfr(v)


def _g_prime_abs(x):
    # g(x) = (6 + 2x - 8x^2 - 4x^3)/7, so g'(x) = (2 - 16x - 12x^2)/7
    return abs((2 - 16 * x - 12 * x * x) / 7)


def g_min_on_range(grid_points: int = 4096, cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """Certified lower bound for g on [-phi^2, phi].

    Grid minimum minus a slab correction max|g'| * h/2, where max|g'| is
    taken over the grid and padded by max|g''| * h/2 (|g''| = |16 + 24x|/7
    is monotone on the interval, so its endpoint value is a true bound).
    """
    if grid_points < 1000:
        raise ValueError("grid must have at least 10^3 points")
    lo, hi = _p_bounds(cfg)
    with cfg.context(GUARD_BITS):
        h = (hi - lo) / (grid_points - 1)
        gmin = None
        dmax = mpfr(0)
        for i in range(grid_points):
            x = lo + h * i if i < grid_points - 1 else hi
            v = (1 + x) * (1 - (1 + 2 * x) ** 2 / 7)
            if gmin is None or v < gmin:
                gmin = v
            d = _g_prime_abs(x)
            if d > dmax:
                dmax = d
        g2max = (16 + 24 * hi) / 7  # |g''| increases on the interval
        slope_bound = dmax + g2max * h / 2
        certified = gmin - slope_bound * h / 2
    with cfg.context():
        return mpfr(certified)


@dataclass(frozen=True)
class BlockLimitRow:
    n: int
    F_n: int
    value: mpfr
    diff: mpfr  # |value - previous value|; 0 for the first row


def limit_estimate(n_max: int, cfg: PrecisionConfig = DEFAULT_CONFIG) -> list[BlockLimitRow]:
    """Table of P_{F_n}(phi) for n = 2..n_max from one streaming pass."""
    if not 2 <= n_max <= 32:
        raise ValueError("n_max must be in [2, 32] (cost guard)")
    phi = const_phi(cfg)
    stream = SudlerStream(phi, cfg)
    rows = []
    prev = None
    for n in range(2, n_max + 1):
        val = stream.advance_to(fib(n)).value
        with cfg.context():
            diff = abs(val - prev) if prev is not None else mpfr(0)
        rows.append(BlockLimitRow(n=n, F_n=fib(n), value=val, diff=diff))
        prev = val
    return rows
