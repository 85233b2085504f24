"""Exception types shared across the package."""


class SudlerError(Exception):
    """Base class for all package-specific errors."""


class IntegerArgument(SudlerError):
    """log|2 sin(pi x)| was requested at an integer x, where the factor is zero."""


class PrecisionExhausted(SudlerError):
    """A computation would consume more significand bits than the configuration allows."""


class ZeroFactor(SudlerError):
    """A sine factor evaluated to exactly zero (rational alpha or broken input)."""


class NonPositiveFactor(SudlerError):
    """A correction-product factor 1 - w^2/s^2 was <= 0; the shift is outside the admissible regime."""


class NotCoprime(SudlerError):
    """The rational sine-product formula needs gcd(p, q) = 1."""


class TailTooLarge(SudlerError):
    """The certified tail is too large for the product lower bound to apply."""


class SumExceedsOne(SudlerError):
    """The product bracket 1 - A < prod(1 - |a_t|) < 1/(1 - A) needs A < 1."""


class OutOfRange(SudlerError):
    """Argument outside the admissible interval."""
