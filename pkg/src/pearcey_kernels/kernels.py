"""Quartic and sextic function pairs, their kernels, densities and correlators.

Quartic pair (weight exp(-t^4/4)) and sextic pair (weight exp(-t^6/3)) are
stored as exact hypergeometric expressions; all derivatives are exact.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction as Q
from functools import lru_cache

import mpmath

from .exact import const
from .hyperf import HypExpr, HypParams, HypTerm, eval_many
from .numeric import DEFAULT_CONTEXT, EvalResult, PrecisionContext, to_mpf


class Case(str, enum.Enum):
    QUARTIC = "quartic"
    SEXTIC = "sextic"


class Regime(str, enum.Enum):
    OFF_DIAGONAL = "off-diagonal"
    NEAR_DIAGONAL = "near-diagonal"
    DIAGONAL = "diagonal"


# Measured: lim_{y->x} K(x, y) / rho(x) for each pair (see tests/test_kernels.py).
QUARTIC_DIAGONAL_SIGN = 1
SEXTIC_DIAGONAL_SIGN = 1

NEAR_DIAGONAL_WIDTH = Q(1, 1000)
MAX_DERIVATIVE = 4


def _quartic_pair():
    arg = const(Q(1, 64))
    marg = const(Q(-1, 64))
    phi = HypExpr.merged([
        HypTerm(const(Q(1, 2), gammas={Q(3, 4): -1}), 0, HypParams((), (Q(1, 2), Q(3, 4))), arg, 4),
        HypTerm(const(Q(-1, 4), pi=-1, two=Q(1, 2), gammas={Q(3, 4): 1}), 2,
                HypParams((), (Q(5, 4), Q(3, 2))), arg, 4),
    ])
    psi = HypExpr.merged([
        HypTerm(const(-1, pi=Q(-1, 2)), 1, HypParams((), (Q(3, 4), Q(5, 4))), marg, 4),
    ])
    return phi, psi


def _sextic_pair():
    scale = Q(3, 6**6)
    neg = const(-scale)
    pos = const(scale)
    phi = HypExpr.merged([
        HypTerm(const(Q(1, 3), three=Q(1, 6), gammas={Q(5, 6): -1}), 0,
                HypParams((), (Q(1, 3), Q(1, 2), Q(2, 3), Q(5, 6))), neg, 6),
        HypTerm(const(Q(-1, 12), pi=Q(-1, 2), three=Q(1, 2)), 2,
                HypParams((), (Q(2, 3), Q(5, 6), Q(7, 6), Q(4, 3))), neg, 6),
        HypTerm(const(Q(1, 144), pi=-1, three=Q(5, 6), gammas={Q(5, 6): 1}), 4,
                HypParams((), (Q(7, 6), Q(4, 3), Q(3, 2), Q(5, 3))), neg, 6),
    ])
    psi = HypExpr.merged([
        HypTerm(const(Q(-1, 3), three=Q(1, 3), gammas={Q(2, 3): -1}), 1,
                HypParams((), (Q(1, 2), Q(2, 3), Q(5, 6), Q(7, 6))), pos, 6),
        HypTerm(const(Q(1, 12), pi=-1, three=Q(1, 6), gammas={Q(2, 3): 1}), 3,
                HypParams((), (Q(5, 6), Q(7, 6), Q(4, 3), Q(3, 2))), pos, 6),
    ])
    return phi, psi


@dataclass(frozen=True)
class FunctionBank:
    case: Case
    phi: HypExpr
    psi: HypExpr
    phi_derivs: tuple  # orders 1..MAX_DERIVATIVE
    psi_derivs: tuple

    def phi_d(self, n: int) -> HypExpr:
        if n == 0:
            return self.phi
        if n <= len(self.phi_derivs):
            return self.phi_derivs[n - 1]
        return self.phi_derivs[-1].derivative(n - len(self.phi_derivs))

    def psi_d(self, n: int) -> HypExpr:
        if n == 0:
            return self.psi
        if n <= len(self.psi_derivs):
            return self.psi_derivs[n - 1]
        return self.psi_derivs[-1].derivative(n - len(self.psi_derivs))


def _derivs(e: HypExpr) -> tuple:
    out = []
    for _ in range(MAX_DERIVATIVE):
        e = e.derivative()
        out.append(e)
    return tuple(out)


@lru_cache(maxsize=None)
def _build(case: Case) -> FunctionBank:
    phi, psi = _quartic_pair() if case is Case.QUARTIC else _sextic_pair()
    return FunctionBank(case, phi, psi, _derivs(phi), _derivs(psi))


def build_bank(case, ctx: PrecisionContext | None = None) -> FunctionBank:
    """Bank of exact expressions; ``ctx`` is accepted for symmetry, constants stay symbolic."""
    return _build(Case(case))


@dataclass(frozen=True)
class KernelValue:
    value: object
    error_estimate: object
    regime: Regime

    def __float__(self):
        return float(self.value)


def _require(bank: FunctionBank, case: Case):
    if bank.case is not case:
        raise ValueError(f"expected a {case.value} bank, got {bank.case.value}")


def _combine(pairs, ctx: PrecisionContext, scale=1):
    """sum of sign * a * b for (sign, a, b) EvalResults; returns value, error, peak."""
    value = mpmath.mpf(0)
    err = mpmath.mpf(0)
    peak = mpmath.mpf(0)
    for sign, a, b in pairs:
        prod = a.value * b.value
        value += sign * prod
        err += abs(a.value) * b.abs_error_estimate + abs(b.value) * a.abs_error_estimate
        peak = max(peak, abs(prod))
    return value * scale, err * abs(scale), peak * abs(scale)


def _loss(value, peak) -> float:
    if peak == 0:
        return 0.0
    if value == 0:
        return math.inf
    return float(mpmath.log10(peak / abs(value)))


def _diagonal_boost(x, y) -> int:
    with mpmath.workdps(50):
        gap = abs(to_mpf(x) - to_mpf(y))
        if gap == 0 or gap >= to_mpf(NEAR_DIAGONAL_WIDTH):
            return 0
        return int(math.ceil(float(-mpmath.log10(gap))))


def _same_point(x, y) -> bool:
    with mpmath.workdps(50):
        return to_mpf(x) == to_mpf(y)


def _kernel(bank, x, y, ctx, numerator, density, sign, prefactor):
    if _same_point(x, y):
        rho = density(bank, x, ctx)
        with mpmath.workdps(ctx.working_digits):
            value = sign * rho.value
        return KernelValue(value, rho.abs_error_estimate, Regime.DIAGONAL)
    boost = _diagonal_boost(x, y)
    regime = Regime.NEAR_DIAGONAL if boost else Regime.OFF_DIAGONAL
    work = ctx.boosted(boost)
    while True:
        with mpmath.workdps(work.working_digits):
            num, err, peak = numerator(bank, x, y, work)
            gap = to_mpf(x) - to_mpf(y)
            value = prefactor * num / gap
            err = prefactor * err / abs(gap)
        loss = _loss(num, peak)
        if not work.adaptive or loss <= work.guard_digits - 5 or work.guard_digits > 2000:
            return KernelValue(value, err, regime)
        work = work.boosted(int(math.ceil(loss)) - work.guard_digits + 10)


def _quartic_numerator(bank, x, y, ctx):
    fx = eval_many([bank.phi, bank.phi_d(1), bank.phi_d(2)], x, ctx)
    gy = eval_many([bank.psi, bank.psi_d(1), bank.psi_d(2)], y, ctx)
    return _combine([(1, fx[1], gy[1]), (-1, fx[2], gy[0]), (-1, fx[0], gy[2])], ctx)


def _sextic_numerator(bank, x, y, ctx):
    fx = eval_many([bank.phi_d(n) for n in range(5)], x, ctx)
    gy = eval_many([bank.psi_d(n) for n in range(5)], y, ctx)
    return _combine([(1, fx[4], gy[0]), (-1, fx[3], gy[1]), (1, fx[2], gy[2]),
                     (-1, fx[1], gy[3]), (1, fx[0], gy[4])], ctx)


def kernel_quartic(bank: FunctionBank, x, y, ctx: PrecisionContext = DEFAULT_CONTEXT) -> KernelValue:
    _require(bank, Case.QUARTIC)
    return _kernel(bank, x, y, ctx, _quartic_numerator, density_quartic, QUARTIC_DIAGONAL_SIGN, 1)


def kernel_sextic(bank: FunctionBank, x, y, ctx: PrecisionContext = DEFAULT_CONTEXT) -> KernelValue:
    _require(bank, Case.SEXTIC)
    return _kernel(bank, x, y, ctx, _sextic_numerator, density_sextic, SEXTIC_DIAGONAL_SIGN, 2)


def density_quartic(bank: FunctionBank, x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> EvalResult:
    """-[phi' psi'' - phi'' psi' + x phi psi]"""
    _require(bank, Case.QUARTIC)
    f = eval_many([bank.phi, bank.phi_d(1), bank.phi_d(2)], x, ctx)
    g = eval_many([bank.psi, bank.psi_d(1), bank.psi_d(2)], x, ctx)
    with mpmath.workdps(ctx.working_digits):
        xx = to_mpf(x)
        xf = EvalResult(xx * f[0].value, abs(xx) * f[0].abs_error_estimate)
        val, err, peak = _combine([(1, f[1], g[2]), (-1, f[2], g[1]), (1, xf, g[0])], ctx, -1)
    return EvalResult(val, err, 0, peak)


def density_sextic(bank: FunctionBank, x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> EvalResult:
    """-x phi psi - 2[phi'''' psi' - phi' psi'''' + phi'' psi''' - phi''' psi'']"""
    _require(bank, Case.SEXTIC)
    f = eval_many([bank.phi_d(n) for n in range(5)], x, ctx)
    g = eval_many([bank.psi_d(n) for n in range(5)], x, ctx)
    with mpmath.workdps(ctx.working_digits):
        xx = to_mpf(x)
        v1, e1, p1 = _combine([(1, f[0], g[0])], ctx, -xx)
        v2, e2, p2 = _combine([(1, f[4], g[1]), (-1, f[1], g[4]), (1, f[2], g[3]),
                               (-1, f[3], g[2])], ctx, -2)
        return EvalResult(v1 + v2, e1 + e2, 0, max(p1, p2))


def _correlation(kernel, bank, x, ctx) -> EvalResult:
    k = kernel(bank, x, -x, ctx)
    with mpmath.workdps(ctx.working_digits):
        val = -(k.value ** 2)
        err = 2 * abs(k.value) * k.error_estimate
    return EvalResult(val, err, 0, abs(val))


def corr_quartic(bank: FunctionBank, x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> EvalResult:
    """-[K(x, -x)]^2"""
    _require(bank, Case.QUARTIC)
    return _correlation(kernel_quartic, bank, x, ctx)


def corr_sextic(bank: FunctionBank, x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> EvalResult:
    _require(bank, Case.SEXTIC)
    return _correlation(kernel_sextic, bank, x, ctx)


def kernel(bank: FunctionBank, x, y, ctx: PrecisionContext = DEFAULT_CONTEXT) -> KernelValue:
    fn = kernel_quartic if bank.case is Case.QUARTIC else kernel_sextic
    return fn(bank, x, y, ctx)


def density(bank: FunctionBank, x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> EvalResult:
    fn = density_quartic if bank.case is Case.QUARTIC else density_sextic
    return fn(bank, x, ctx)


def correlation(bank: FunctionBank, x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> EvalResult:
    fn = corr_quartic if bank.case is Case.QUARTIC else corr_sextic
    return fn(bank, x, ctx)
