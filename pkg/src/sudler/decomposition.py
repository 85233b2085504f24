"""The three-factor split of the golden-ratio block product.

P_{F_n}(phi) factors exactly as A_n * B_n * C_n, and the shifted block
P_{F_n}(phi, eps) as Abar_n(eps) * B_n * Cbar_n(eps), with

    A_n        = |2 F_n sin(pi phi^n)|
    Abar_n(e)  = 2 F_n |sin(pi((-phi)^n - e))|
    B_n        = prod_{t=1}^{F_n-1} |s_nt / (2 sin(pi t / F_n))|
    C_n        = prod_{t=1}^{(F_n-1)/2} (1 - s_n0^2 / s_nt^2)
    Cbar_n(e)  = same with v_n(e)^2 in the numerator
    s_nt       = 2 sin(pi(t/F_n - phi^n({t F_{n-1}/F_n} - 1/2)))
    v_n(e)     = 2 sin(pi((-phi)^n/2 - e))

When F_n is even the C-products run to t = F_n/2 with the final factor at
exponent 1/2.  The inner fractional part {t F_{n-1}/F_n} is always taken
through exact integer arithmetic (t*F_{n-1} mod F_n)/F_n; a floating
evaluation would lose everything once F_n > 2^(bits/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpfr

from .errors import NonPositiveFactor, NotCoprime
from .numtheory import fib, neg_phi_pow, phi_pow
from .product import eval_shifted
from .scalar import DEFAULT_CONFIG, GUARD_BITS, PrecisionConfig, const_phi, two_sin_pi

_BATCH = 64

# (n, bits) -> list of s_nt^2 for t = 1..F_n//2, at bits+GUARD working precision
_SNT_SQ_CACHE: dict[tuple[int, int], list] = {}
# (n, bits) -> B_n; the O(F_n) ratio product is worth keeping around
_BN_CACHE: dict[tuple[int, int], mpfr] = {}
_SNT_CACHE_MAX_INDEX = 28


def s_nt(n: int, t: int, cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """2 sin(pi(t/F_n - phi^n({t F_{n-1}/F_n} - 1/2))) for 0 <= t <= F_n - 1."""
    if n < 2:
        raise ValueError("n must be >= 2")
    Fn = fib(n)
    if not 0 <= t <= Fn - 1:
        raise ValueError(f"t must be in [0, {Fn - 1}]")
    tau = (t * fib(n - 1)) % Fn
    work = cfg.bits + GUARD_BITS
    with gmpy2.context(precision=work):
        pn = mpfr(phi_pow(n, PrecisionConfig(work)))
        arg = mpfr(t) / Fn - pn * (mpfr(tau) / Fn - mpfr("0.5"))
    return two_sin_pi(arg, cfg)


def v_n(n: int, eps, cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """2 sin(pi((-phi)^n / 2 - eps)); signed."""
    work = cfg.bits + GUARD_BITS
    with gmpy2.context(precision=work):
        arg = mpfr(neg_phi_pow(n, PrecisionConfig(work))) / 2 - mpfr(eps)
    return two_sin_pi(arg, cfg)


def A_bar(n: int, eps, cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """2 F_n |sin(pi((-phi)^n - eps))|; equals A_n at eps = 0."""
    if n < 2:
        raise ValueError("n must be >= 2")
    work = cfg.bits + GUARD_BITS
    with gmpy2.context(precision=work):
        arg = mpfr(neg_phi_pow(n, PrecisionConfig(work))) - mpfr(eps)
    with cfg.context():
        return fib(n) * abs(two_sin_pi(arg, cfg))


def A_n(n: int, cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """|2 F_n sin(pi phi^n)|; the eps = 0 case of A_bar (|sin| is even)."""
    return A_bar(n, 0, cfg)


class _LogAccumulator:
    """Kahan log-sum fed by linear-space factor batches; must be used
    inside one gmpy2 context."""

    def __init__(self):
        self.logsum = mpfr(0)
        self.comp = mpfr(0)
        self.batch = mpfr(1)
        self.in_batch = 0

    def mul(self, factor) -> None:
        self.batch *= factor
        self.in_batch += 1
        if self.in_batch == _BATCH:
            self.add_log(gmpy2.log(self.batch))
            self.batch = mpfr(1)
            self.in_batch = 0

    def add_log(self, x) -> None:
        y = x - self.comp
        t = self.logsum + y
        self.comp = (t - self.logsum) - y
        self.logsum = t

    def total(self) -> mpfr:
        v = self.logsum
        if self.in_batch:
            v = v + gmpy2.log(self.batch)
        return v


def _snt_pass(n: int, cfg: PrecisionConfig, want_b: bool):
    """One sweep over t = 1..F_n-1 computing s_nt at working precision.

    Returns (log B_n, squares) where squares is s_nt^2 for t = 1..F_n//2.
    The half-table is cached per (n, bits) since the C-products and the
    threshold harness reuse it heavily.
    """
    Fn = fib(n)
    work = cfg.bits + GUARD_BITS
    key = (n, cfg.bits)
    squares = _SNT_SQ_CACHE.get(key)
    need_squares = squares is None
    if not need_squares and not want_b:
        return None, squares
    half = Fn // 2
    sq = [] if need_squares else None
    with gmpy2.context(precision=work):
        pn = mpfr(phi_pow(n, PrecisionConfig(work)))
        pi = gmpy2.const_pi()
        halfc = mpfr("0.5")
        inv_fn = 1 / mpfr(Fn)
        acc = _LogAccumulator() if want_b else None
        Fn1 = fib(n - 1)
        tau = 0
        for t in range(1, Fn):
            tau += Fn1
            if tau >= Fn:
                tau -= Fn
            arg = t * inv_fn - pn * (tau * inv_fn - halfc)
            # arg is always inside (0, 1): phi^n/2 < 1/(2 F_n)
            s = 2 * gmpy2.sin(pi * arg)
            if need_squares and t <= half:
                sq.append(s * s)
            if want_b:
                u = t * inv_fn
                if u > halfc:
                    u = 1 - u
                d = 2 * gmpy2.sin(pi * u)
                acc.mul(abs(s) / d)
        log_b = acc.total() if want_b else None
    if need_squares and n <= _SNT_CACHE_MAX_INDEX:
        _SNT_SQ_CACHE[key] = sq
        squares = sq
    elif need_squares:
        squares = sq
    return log_b, squares


def snt_squares(n: int, cfg: PrecisionConfig = DEFAULT_CONFIG) -> list:
    """s_nt^2 for t = 1..F_n//2, at working precision (cached)."""
    _, sq = _snt_pass(n, cfg, want_b=False)
    return sq


def B_n(n: int, cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """prod_{t=1}^{F_n-1} |s_nt / (2 sin(pi t/F_n))|, accumulated in log space."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if fib(n) == 1:
        return cfg.real(1)
    key = (n, cfg.bits)
    cached = _BN_CACHE.get(key)
    if cached is not None:
        return cached
    log_b, _ = _snt_pass(n, cfg, want_b=True)
    with cfg.context():
        val = gmpy2.exp(log_b)
    if n <= _SNT_CACHE_MAX_INDEX:
        _BN_CACHE[key] = val
    return val


def _c_product(n: int, w, cfg: PrecisionConfig) -> mpfr:
    """prod (1 - w^2/s_nt^2) over the half range, final factor at power 1/2
    when F_n is even; factors are checked positive."""
    Fn = fib(n)
    if Fn == 1:
        return cfg.real(1)
    squares = snt_squares(n, cfg)
    work = cfg.bits + GUARD_BITS
    with gmpy2.context(precision=work):
        w2 = mpfr(w) ** 2
        acc = _LogAccumulator()
        last = (Fn - 1) // 2
        for t in range(last):
            f = 1 - w2 / squares[t]
            if f <= 0:
                raise NonPositiveFactor(
                    f"factor 1 - w^2/s^2 at n={n}, t={t + 1} is {f}; "
                    "shift outside the admissible regime")
            acc.mul(f)
        if Fn % 2 == 0:
            f = 1 - w2 / squares[Fn // 2 - 1]
            if f <= 0:
                raise NonPositiveFactor(
                    f"final half-weight factor at n={n} is {f}")
            acc.add_log(gmpy2.log(f) / 2)
        log_c = acc.total()
    with cfg.context():
        return gmpy2.exp(log_c)


def C_n(n: int, cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """Correction product with w = s_n0 = 2 sin(pi phi^n / 2)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return _c_product(n, s_nt(n, 0, cfg), cfg)


def C_bar(n: int, eps, cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """Correction product with w = v_n(eps); needs |eps| <= phi^(n+1)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return _c_product(n, v_n(n, eps, cfg), cfg)


@dataclass(frozen=True)
class DecompositionResult:
    """The three factors, their product, the directly evaluated block, and
    the relative residual between the two."""

    n: int
    eps: mpfr
    A: mpfr
    B: mpfr
    C: mpfr
    recombined: mpfr
    direct: mpfr
    residual: mpfr


def verify_identity(n: int, eps=0, cfg: PrecisionConfig = DEFAULT_CONFIG) -> DecompositionResult:
    """Recombine Abar_n(eps) * B_n * Cbar_n(eps) and compare against the
    directly evaluated P_{F_n}(phi, eps)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    with cfg.context():
        e = mpfr(eps)
    A = A_bar(n, e, cfg)
    B = B_n(n, cfg)
    C = C_bar(n, e, cfg)
    phi = const_phi(cfg)
    direct = eval_shifted(phi, fib(n), e, cfg)
    with cfg.context(GUARD_BITS):
        recombined = A * B * C
        residual = abs(recombined / direct.value - 1)
    with cfg.context():
        return DecompositionResult(
            n=n, eps=e, A=A, B=B, C=C,
            recombined=mpfr(recombined), direct=direct.value,
            residual=mpfr(residual),
        )


def sine_product_rational(p: int, q: int, cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """prod_{r=1}^{q-1} 2 sin(pi r p / q), which equals q when gcd(p,q) = 1.

    Phases r*p mod q are exact integers, so the evaluation is a pure test
    of the sine kernel and the accumulation.
    """
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive")
    if math.gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) != 1")
    with gmpy2.context(precision=cfg.bits + GUARD_BITS):
        pi = gmpy2.const_pi()
        inv_q = 1 / mpfr(q)
        halfc = mpfr("0.5")
        acc = _LogAccumulator()
        k = 0
        for _ in range(1, q):
            k = (k + p) % q
            u = k * inv_q
            if u > halfc:
                u = 1 - u
            acc.mul(2 * gmpy2.sin(pi * u))
        total = acc.total()
    with cfg.context():
        return gmpy2.exp(total)
