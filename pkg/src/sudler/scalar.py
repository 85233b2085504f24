"""Precision configuration and the two transcendental kernels.

All real-valued quantities in this package are gmpy2.mpfr values computed
under an explicit :class:`PrecisionConfig`.  The two kernels provided here,
``two_sin_pi`` and ``log_abs_two_sin_pi``, do their argument reduction
exactly (fmod by 2, the 1-x fold) and evaluate sin/log with guard bits, so
results are deterministic and accurate to a few ulp at the configured
precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpfr

from .errors import IntegerArgument

# Guard bits used by kernels on top of the target precision.
GUARD_BITS = 16


@dataclass(frozen=True)
class PrecisionConfig:
    """Significand precision, in bits, for every real-valued computation.

    For a scan up to N the working precision should satisfy
    bits >= 64 + ceil(log2(N)); the default of 128 covers N up to ~10^19.
    """

    bits: int = 128

    def __post_init__(self):
        if self.bits < 53:
            raise ValueError(f"precision must be >= 53 bits, got {self.bits}")

    def context(self, guard: int = 0) -> gmpy2.context:
        return gmpy2.context(precision=self.bits + guard)

    def real(self, x) -> mpfr:
        """Convert int/float/str (decimal) to mpfr at this precision."""
        with self.context():
            return mpfr(x)

    def ulp(self) -> mpfr:
        return self.real(2) ** (1 - self.bits)


DEFAULT_CONFIG = PrecisionConfig()
FAST_CONFIG = PrecisionConfig(bits=53)


def const_phi(cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """(sqrt(5) - 1)/2, the fractional part of the golden ratio."""
    with cfg.context(GUARD_BITS):
        v = (gmpy2.sqrt(mpfr(5)) - 1) / 2
    with cfg.context():
        return mpfr(v)


def const_sqrt5(cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    with cfg.context(GUARD_BITS):
        v = gmpy2.sqrt(mpfr(5))
    with cfg.context():
        return mpfr(v)


def _reduced_half_period(x) -> tuple[mpfr, int]:
    """Reduce x to u in [0, 1/2] with sin(pi x) = sign * sin(pi u).

    Every step (fmod 2, +-1 shifts, the 1-u fold) is exact in binary
    floating point, so u carries no reduction error.  Must run inside a
    context whose precision is at least that of x.
    """
    v = gmpy2.fmod(x, 2)  # exact
    if v < 0:
        v += 2  # exact: v in (-2, 0), result in [0, 2)
    sign = 1
    if v >= 1:
        v -= 1  # exact (Sterbenz)
        sign = -1
    if v > mpfr("0.5"):
        v = 1 - v  # exact (Sterbenz)
    return v, sign


def two_sin_pi(x, cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """2*sin(pi*x) with full-precision argument reduction.

    The reduction modulo 2 is exact regardless of the magnitude of x (as
    long as x itself is exactly representable), so the periodicity
    two_sin_pi(x + 2k) == two_sin_pi(x) holds bit-for-bit.
    """
    x = mpfr(x) if not isinstance(x, mpfr) else x
    work = max(x.precision, cfg.bits) + GUARD_BITS
    with gmpy2.context(precision=work):
        u, sign = _reduced_half_period(x)
        s = gmpy2.sin(gmpy2.const_pi() * u)
        v = 2 * s if sign > 0 else -2 * s
    with cfg.context():
        return mpfr(v)


def log_abs_two_sin_pi(x, cfg: PrecisionConfig = DEFAULT_CONFIG) -> mpfr:
    """ln|2 sin(pi x)| for non-integer x.

    Raises IntegerArgument when x is an integer: the product factor is zero
    there, which only happens for rational alpha (a degenerate input).
    """
    x = mpfr(x) if not isinstance(x, mpfr) else x
    if gmpy2.is_integer(x):
        raise IntegerArgument(f"|2 sin(pi x)| vanishes at integer x = {x}")
    work = max(x.precision, cfg.bits) + GUARD_BITS
    with gmpy2.context(precision=work):
        u, _ = _reduced_half_period(x)
        r = gmpy2.log(2 * gmpy2.sin(gmpy2.const_pi() * u))
    with cfg.context():
        return mpfr(r)


def frac(x) -> mpfr:
    """Fractional part in [0, 1), exact for mpfr input.

    Runs at the input's own precision so an ambient low-precision context
    cannot truncate the result.
    """
    x = mpfr(x) if not isinstance(x, mpfr) else x
    with gmpy2.context(precision=x.precision):
        f = gmpy2.frac(x)
        if f < 0:
            f += 1
    return f
