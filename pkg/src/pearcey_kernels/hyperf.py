"""Generalized hypergeometric series and expressions built from them.

An expression is a finite sum of terms ``c * x**k * pFq(a; b; lam * x**m)``.
Differentiation maps such a sum to another such sum (the derivative of a
pFq is a shifted pFq), so every derivative the kernels need is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath.libmp import MPZ, from_man_exp, to_fixed

from .exact import ExactConst, ONE, const
from .numeric import (
    DEFAULT_CONTEXT,
    EvalResult,
    InvalidParams,
    PrecisionContext,
    TermBudgetExceeded,
    to_mpf,
)

# guard-digit escalation stops here; the result then carries a large error estimate
MAX_GUARD_DIGITS = 4000
_STOP_RUN = 3


def _frac_tuple(vals) -> tuple:
    return tuple(Fraction(v) for v in vals)


@dataclass(frozen=True)
class HypParams:
    upper: tuple = ()
    lower: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "upper", _frac_tuple(self.upper))
        object.__setattr__(self, "lower", _frac_tuple(self.lower))
        for b in self.lower:
            if b.denominator == 1 and b <= 0:
                raise InvalidParams(f"lower parameter {b} is a non-positive integer")
        if len(self.upper) > len(self.lower):
            raise InvalidParams("only p <= q (entire) series are supported")

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)

    def shifted(self, n: int) -> "HypParams":
        return HypParams(tuple(a + n for a in self.upper), tuple(b + n for b in self.lower))

    def __str__(self):
        up = ", ".join(str(a) for a in self.upper) or "-"
        lo = ", ".join(str(b) for b in self.lower) or "-"
        return f"{self.p}F{self.q}({up}; {lo})"


def pfq_derivative_params(params: HypParams, n: int) -> tuple[Fraction, HypParams]:
    """(scalar, shifted) with d^n/dz^n pFq(a; b; z) = scalar * pFq(a+n; b+n; z)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    scalar = Fraction(1)
    for a in params.upper:
        for i in range(n):
            scalar *= a + i
    for b in params.lower:
        for i in range(n):
            scalar /= b + i
    return scalar, params.shifted(n)


def _growth_index(params: HypParams, z) -> int:
    # pFq terms grow until k ~ |z|^(1/(q+1-p)) before they decay
    if z == 0:
        return 0
    return int(math.ceil(float(abs(z)) ** (1.0 / (params.q + 1 - params.p))))


def _ratio_factors(params: HypParams):
    """Integer polynomials in k giving term ratio num(k) / den(k) (without z)."""
    num_lin = [(a.numerator, a.denominator) for a in params.upper]
    den_lin = [(b.numerator, b.denominator) for b in params.lower]
    num_const = 1
    for b in params.lower:
        num_const *= b.denominator
    den_const = 1
    for a in params.upper:
        den_const *= a.denominator
    return num_lin, den_lin, num_const, den_const


def _sum_series(params: HypParams, z, max_terms: int):
    """Sum at the current mpmath precision.  Returns (sum, peak, n_terms, last_term).

    Fixed-point big-integer summation: terms are integers scaled by 2**fp, so
    the rational parameters enter exactly and the loop does no float work.
    """
    if z == 0:
        return mpmath.mpf(1), mpmath.mpf(1), 1, mpmath.mpf(0)
    wp = mpmath.mp.prec
    fp = wp + 20
    zfix = MPZ(to_fixed(mpmath.mpf(z)._mpf_, fp))
    num_lin, den_lin, num_const, den_const = _ratio_factors(params)
    one = MPZ(1) << fp
    term = one
    total = one
    peak = one
    kstar = _growth_index(params, z)
    small_run = 0
    k = 0
    while True:
        if k + 1 >= max_terms:
            raise TermBudgetExceeded(f"{params} at z={mpmath.nstr(z, 8)} needs more than {max_terms} terms")
        num = num_const
        for n, d in num_lin:
            num *= n + k * d
        den = den_const * (k + 1)
        for n, d in den_lin:
            den *= n + k * d
        term = ((term * zfix * num) >> fp) // den
        total += term
        k += 1
        aterm = abs(term)
        if aterm > peak:
            peak = aterm
        if term == 0:
            break
        # ratio magnitude < 1 once |z * num| < den
        if k >= kstar and abs(zfix * num) < (den << fp) and aterm.bit_length() + wp < abs(total).bit_length():
            small_run += 1
            if small_run >= _STOP_RUN:
                break
        else:
            small_run = 0
    return (mpmath.mpf(from_man_exp(total, -fp)), mpmath.mpf(from_man_exp(peak, -fp)),
            k + 1, mpmath.mpf(from_man_exp(term, -fp)))


def _err_from(peak, n_terms, last):
    return peak * mpmath.eps * max(n_terms, 1) + abs(last)


def pfq(params: HypParams, z, ctx: PrecisionContext = DEFAULT_CONTEXT) -> EvalResult:
    """Sum pFq(a; b; z) by the term recurrence, escalating guard digits on cancellation."""
    guard = ctx.guard_digits
    while True:
        with mpmath.workdps(ctx.target_digits + guard):
            zz = to_mpf(z)
            total, peak, n, last = _sum_series(params, zz, ctx.max_terms)
            res = EvalResult(+total, _err_from(peak, n, last), n, peak)
        if not ctx.adaptive or res.digit_loss <= guard - 5 or guard >= MAX_GUARD_DIGITS:
            return res
        guard = _next_guard(guard, res.digit_loss)


def _next_guard(guard: int, loss: float) -> int:
    nxt = max(2 * guard, 10)
    if math.isfinite(loss):
        # doubling alone can take many reruns when loss is far beyond guard
        while nxt - 5 < loss:
            nxt *= 2
    return min(nxt, MAX_GUARD_DIGITS)


@dataclass(frozen=True)
class HypTerm:
    """coeff * x**power * pFq(params; arg_scale * x**arg_power)."""

    coeff: ExactConst
    power: int
    params: HypParams
    arg_scale: ExactConst = ONE
    arg_power: int = 1

    def __post_init__(self):
        if self.power < 0:
            raise ValueError("power must be non-negative")
        if self.arg_power < 1:
            raise ValueError("arg_power must be positive")

    @property
    def like_key(self) -> tuple:
        return (self.power, self.params, self.arg_scale, self.arg_power, self.coeff.irrational_key)


@dataclass(frozen=True)
class HypExpr:
    terms: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @classmethod
    def merged(cls, terms) -> "HypExpr":
        """Combine like terms and drop zeros, preserving first-seen order."""
        acc: dict = {}
        for t in terms:
            if t.coeff.is_zero():
                continue
            key = t.like_key
            if key in acc:
                prev = acc[key]
                acc[key] = HypTerm(prev.coeff.add_like(t.coeff), prev.power, prev.params,
                                   prev.arg_scale, prev.arg_power)
            else:
                acc[key] = t
        return cls(tuple(t for t in acc.values() if not t.coeff.is_zero()))

    def __add__(self, other: "HypExpr") -> "HypExpr":
        return HypExpr.merged(self.terms + other.terms)

    def scaled(self, c) -> "HypExpr":
        if not isinstance(c, ExactConst):
            c = const(c)
        return HypExpr.merged(HypTerm(t.coeff * c, t.power, t.params, t.arg_scale, t.arg_power)
                              for t in self.terms)

    def __neg__(self):
        return self.scaled(-1)

    def __len__(self):
        return len(self.terms)

    @property
    def parity(self) -> int | None:
        """0 for even, 1 for odd, None if neither is guaranteed structurally."""
        if not self.terms:
            return 0
        if any(t.arg_power % 2 for t in self.terms):
            return None
        parities = {t.power % 2 for t in self.terms}
        return parities.pop() if len(parities) == 1 else None

    def derivative(self, n: int = 1) -> "HypExpr":
        e = self
        for _ in range(n):
            e = expr_differentiate(e)
        return e

    def __call__(self, x, ctx: PrecisionContext = DEFAULT_CONTEXT):
        return expr_eval(self, x, ctx).value


def expr_differentiate(e: HypExpr) -> HypExpr:
    out = []
    for t in e.terms:
        if t.power > 0:
            out.append(HypTerm(t.coeff * t.power, t.power - 1, t.params, t.arg_scale, t.arg_power))
        scalar, shifted = pfq_derivative_params(t.params, 1)
        c = t.coeff * t.arg_scale * (t.arg_power * scalar)
        out.append(HypTerm(c, t.power + t.arg_power - 1, shifted, t.arg_scale, t.arg_power))
    return HypExpr.merged(out)


def _eval_at_fixed(exprs, x, max_terms: int):
    """Evaluate several expressions at the current precision with a shared pFq cache."""
    xx = to_mpf(x)
    cache: dict = {}
    results = []
    for e in exprs:
        value = mpmath.mpf(0)
        peak = mpmath.mpf(0)
        err = mpmath.mpf(0)
        n_used = 0
        for t in e.terms:
            xk = xx ** t.power
            if xk == 0:
                continue
            key = (t.params, t.arg_scale, t.arg_power)
            if key not in cache:
                z = t.arg_scale.realize() * xx ** t.arg_power
                cache[key] = _sum_series(t.params, z, max_terms)
            total, tpeak, n, last = cache[key]
            scale = t.coeff.realize() * xk
            contrib = scale * total
            value += contrib
            peak = max(peak, abs(scale) * tpeak, abs(contrib))
            err += abs(scale) * _err_from(tpeak, n, last)
            n_used += n
        err += abs(value) * mpmath.eps
        results.append(EvalResult(+value, err, n_used, peak))
    return results


def eval_many(exprs, x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> list[EvalResult]:
    """Evaluate expressions at one point; precision escalates until none has lost its guard."""
    exprs = list(exprs)
    guard = ctx.guard_digits
    while True:
        with mpmath.workdps(ctx.target_digits + guard):
            results = _eval_at_fixed(exprs, x, ctx.max_terms)
        if not ctx.adaptive or guard >= MAX_GUARD_DIGITS:
            return results
        # an exact zero from nonzero contributions means total cancellation: escalate
        loss = max((r.digit_loss for r in results), default=0.0)
        if loss <= guard - 5:
            return results
        guard = _next_guard(guard, loss)


def expr_eval(e: HypExpr, x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> EvalResult:
    return eval_many([e], x, ctx)[0]
