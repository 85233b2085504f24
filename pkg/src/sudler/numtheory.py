"""Fibonacci numbers, Zeckendorf representations, and golden-ratio powers.

The integer N is always an arbitrary-size Python int; Fibonacci numbers are
exact.  Powers (-phi)^n are evaluated through the identity
F_n*phi = F_{n-1} - (-phi)^n at extended precision, which keeps the shift
coefficients eps_j exactly consistent with blockwise product evaluation.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpfr

from .errors import PrecisionExhausted
from .scalar import DEFAULT_CONFIG, GUARD_BITS, PrecisionConfig

_FIBS: list[int] = [0, 1]


def fib(n: int) -> int:
    """F_n, exact. F_0 = 0, F_1 = 1."""
    if n < 0:
        raise ValueError("Fibonacci index must be >= 0")
    while len(_FIBS) <= n:
        _FIBS.append(_FIBS[-1] + _FIBS[-2])
    return _FIBS[n]


def _extend_to_value(N: int) -> None:
    while _FIBS[-1] < N:
        _FIBS.append(_FIBS[-1] + _FIBS[-2])


@dataclass(frozen=True)
class Zeckendorf:
    """Strictly increasing Fibonacci indices (n_1, ..., n_m) with n_1 >= 2
    and n_{j+1} >= n_j + 2, summing to the represented integer."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = self.indices
        if not idx:
            raise ValueError("empty Zeckendorf representation")
        if idx[0] < 2:
            raise ValueError("smallest index must be >= 2")
        for a, b in zip(idx, idx[1:]):
            if b < a + 2:
                raise ValueError(f"indices {a}, {b} violate the gap condition")

    @property
    def m(self) -> int:
        return len(self.indices)

    def value(self) -> int:
        return sum(fib(n) for n in self.indices)


def zeckendorf(N: int) -> Zeckendorf:
    """Greedy largest-Fibonacci-first decomposition of N >= 1."""
    if N < 1:
        raise ValueError("N must be >= 1")
    _extend_to_value(N)
    indices = []
    rem = N
    # search over indices >= 2 so that the value 1 is always taken as F_2
    hi = len(_FIBS)
    while rem > 0:
        k = bisect.bisect_right(_FIBS, rem, lo=2, hi=hi) - 1
        indices.append(k)
        rem -= _FIBS[k]
        hi = k - 1  # greedy gap: next index is at most k - 2
    indices.reverse()
    return Zeckendorf(tuple(indices))


def neg_phi_pow(n: int, cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """(-phi)^n computed as F_{n-1} - F_n*phi.

    The subtraction cancels ~1.39n bits, so phi is taken with that many
    extra bits; the result is then correctly rounded at cfg.bits.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    extra = 2 * fib(n).bit_length() + 8
    with gmpy2.context(precision=cfg.bits + extra):
        phi = (gmpy2.sqrt(mpfr(5)) - 1) / 2
        v = fib(n - 1) - fib(n) * phi
    with cfg.context():
        return mpfr(v)


def phi_pow(n: int, cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """phi^n = |(-phi)^n| through the same Fibonacci identity."""
    with cfg.context():
        return abs(neg_phi_pow(n, cfg))


def _eps_from_tail(tail: tuple[int, ...], cfg: PrecisionConfig) -> mpfr:
    """eps = -sum_s (-phi)^{t_s} for Fibonacci indices t_s, evaluated in one
    cancellation-aware shot as sum F_{t_s - 1} - (sum F_{t_s}) * phi."""
    if not tail:
        return cfg.real(0)
    f_sum = sum(fib(t - 1) for t in tail)
    k_sum = sum(fib(t) for t in tail)
    extra = k_sum.bit_length() + max(tail) + GUARD_BITS
    with gmpy2.context(precision=cfg.bits + extra):
        phi = (gmpy2.sqrt(mpfr(5)) - 1) / 2
        # eps = -sum (-phi)^{t_s} = k_sum*phi - f_sum, exact up to one rounding
        v = k_sum * phi - f_sum
    with cfg.context():
        return mpfr(v)


@dataclass(frozen=True)
class ShiftCoefficients:
    """Per-block shifts eps_j = -sum_{s>j} (-phi)^{n_s} and the normalized
    p_j = -eps_j * (-phi)^{-n_j} in [-phi^2, phi]; eps_m = p_m = 0."""

    eps: tuple[mpfr, ...]
    p: tuple[mpfr, ...]


def shift_coefficients(z: Zeckendorf, cfg: PrecisionConfig = DEFAULT_CONFIG) -> ShiftCoefficients:
    idx = z.indices
    eps = []
    p = []
    with cfg.context(GUARD_BITS):
        inv_phi = (gmpy2.sqrt(mpfr(5)) + 1) / 2  # phi^{-1}
        for j, nj in enumerate(idx):
            tail = idx[j + 1:]
            e = _eps_from_tail(tail, cfg)
            # p_j = -eps_j * (-phi)^{-n_j} = -(-1)^{n_j} * eps_j * phi^{-n_j}
            pj = -e * inv_phi**nj
            if nj % 2:
                pj = -pj
            with cfg.context():
                p.append(mpfr(pj))
            eps.append(e)
    return ShiftCoefficients(tuple(eps), tuple(p))


@dataclass(frozen=True)
class CFExpansion:
    """Regular continued-fraction prefix of alpha in (0,1) with the
    convergent denominators q_1..q_depth."""

    quotients: tuple[int, ...]
    denominators: tuple[int, ...]


def cf_expand(alpha: mpfr, depth: int, cfg: PrecisionConfig = DEFAULT_CONFIG) -> CFExpansion:
    """[a_1, ..., a_depth] of alpha in (0,1) by the Gauss map."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must be in (0, 1)")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if depth > cfg.bits // 4:
        raise PrecisionExhausted(
            f"depth {depth} exceeds the precision guard bits/4 = {cfg.bits // 4}")
    quotients = []
    dens = []
    q_prev, q = 0, 1
    with gmpy2.context(precision=max(alpha.precision, cfg.bits)):
        x = mpfr(alpha)
        for _ in range(depth):
            if x <= 0:
                raise PrecisionExhausted("continued fraction terminated; precision exhausted")
            y = 1 / x
            a = int(gmpy2.floor(y))
            quotients.append(a)
            q_prev, q = q, a * q + q_prev
            dens.append(q)
            x = y - a
    return CFExpansion(tuple(quotients), tuple(dens))


def value_from_cf(prefix, cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """alpha with continued fraction [0; a_1, ..., a_k, 1, 1, 1, ...].

    The all-ones golden tail keeps the value a quadratic irrational, so the
    sine product never degenerates the way it would for a rational alpha.
    """
    prefix = tuple(int(a) for a in prefix)
    if any(a < 1 for a in prefix):
        raise ValueError("partial quotients must be >= 1")
    with cfg.context(GUARD_BITS):
        x = (gmpy2.sqrt(mpfr(5)) - 1) / 2
        for a in reversed(prefix):
            x = 1 / (a + x)
    with cfg.context():
        return mpfr(x)
