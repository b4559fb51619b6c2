"""Arbitrary-precision arithmetic facade.

Everything numeric in the package goes through :mod:`mpmath`.  Working
precision is carried explicitly by a :class:`PrecisionContext`; a value
computed under a context is accurate to ``target_digits`` significant digits
unless an :class:`EvalResult` error estimate says otherwise.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, replace
from fractions import Fraction

import mpmath
from mpmath import mp


class NumericError(ArithmeticError):
    """Base class for numerical failures raised by this package."""


class PoleError(NumericError):
    pass


class DomainError(NumericError):
    pass


class TermBudgetExceeded(NumericError):
    pass


class InvalidParams(ValueError):
    pass


class ToleranceNotMet(NumericError):
    pass


class ContourError(NumericError):
    pass


@dataclass(frozen=True)
class PrecisionContext:
    """Working-precision contract.

    ``adaptive=False`` pins the working precision at
    ``target_digits + guard_digits`` and disables every guard-digit
    escalation; it exists to emulate naive fixed-precision evaluation.
    """

    target_digits: int = 30
    guard_digits: int = 10
    max_terms: int = 100_000
    adaptive: bool = True

    def __post_init__(self):
        if self.target_digits < 1:
            raise ValueError("target_digits must be >= 1")
        if self.guard_digits < 0:
            raise ValueError("guard_digits must be >= 0")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")

    @property
    def working_digits(self) -> int:
        return self.target_digits + self.guard_digits

    def with_guard(self, guard_digits: int) -> "PrecisionContext":
        return replace(self, guard_digits=guard_digits)

    def boosted(self, extra: int) -> "PrecisionContext":
        """Same context with ``extra`` more guard digits (no-op when not adaptive)."""
        if not self.adaptive or extra <= 0:
            return self
        return replace(self, guard_digits=self.guard_digits + extra)

    @classmethod
    def capped(cls, digits: int, max_terms: int = 100_000) -> "PrecisionContext":
        return cls(target_digits=digits, guard_digits=0, max_terms=max_terms, adaptive=False)


DEFAULT_CONTEXT = PrecisionContext()


@dataclass(frozen=True)
class EvalResult:
    value: object
    abs_error_estimate: object = 0
    terms_used: int = 0
    peak_term_magnitude: object = 0

    @property
    def digit_loss(self) -> float:
        """log10(peak / |value|); inf when the value is exactly zero."""
        peak = abs(self.peak_term_magnitude)
        val = abs(self.value)
        if peak == 0:
            return 0.0
        if val == 0:
            return math.inf
        return float(mpmath.log10(peak / val))

    def __float__(self):
        return float(self.value)


@contextmanager
def working(ctx: PrecisionContext):
    """Set the mpmath precision to the context's working digits."""
    with mp.workdps(ctx.working_digits):
        yield


def to_mpf(q) -> mpmath.mpf:
    """Convert an int, Fraction, str, float or mpf to mpf at the current precision."""
    if isinstance(q, Fraction):
        return mpmath.mpf(q.numerator) / q.denominator
    return mpmath.mpf(q)


def _check_pole(z) -> None:
    if isinstance(z, Fraction):
        bad = z.denominator == 1 and z <= 0
    else:
        zc = mpmath.mpmathify(z)
        re = mpmath.re(zc)
        bad = mpmath.im(zc) == 0 and re <= 0 and re == mpmath.floor(re)
    if bad:
        raise PoleError(f"gamma has a pole at {z}")


def gamma_real(z, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpmath.mpf:
    _check_pole(z)
    with working(ctx):
        return +mpmath.gamma(to_mpf(z))


def log_gamma_complex(z, ctx: PrecisionContext | None = DEFAULT_CONTEXT) -> mpmath.mpc:
    """Principal branch of log Gamma(z).

    ``ctx=None`` evaluates at the current mpmath precision (used in hot loops
    that already run inside :func:`working`).
    """
    if isinstance(z, Fraction):
        _check_pole(z)
        z = to_mpf(z)
    elif not isinstance(z, mpmath.mpc) or z.imag == 0:
        _check_pole(z)
    if ctx is None:
        return mpmath.mpc(mpmath.loggamma(z))
    with working(ctx):
        val = mpmath.loggamma(mpmath.mpmathify(z))
    return mpmath.mpc(val)


def pochhammer(a, k: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Rising factorial (a)_k by direct product; exact for Fraction/int ``a``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if isinstance(a, (int, Fraction)):
        out = Fraction(1)
        for i in range(k):
            out *= a + i
        return out
    with working(ctx):
        out = mpmath.mpf(1)
        a = mpmath.mpf(a)
        for i in range(k):
            out *= a + i
    return out
