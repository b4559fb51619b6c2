"""Small-x and large-x approximations of the quartic and sextic functions.

Each formula is implemented verbatim.  Where one does not track the exact
function, the tests record the measured disagreement rather than patch it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction as Q

import mpmath

from .kernels import Case, build_bank, density
from .numeric import DEFAULT_CONTEXT, DomainError, PrecisionContext, to_mpf, working


class AsymRegime(str, enum.Enum):
    LARGE_X = "large-x"
    SMALL_X = "small-x"


@dataclass(frozen=True)
class AsymptoticEval:
    value: object
    regime: AsymRegime
    leading_power: Q

    def __float__(self):
        return float(self.value)


def hyper_bessel_exponents(c_list) -> tuple[Q, Q]:
    """(lambda, xi) with lambda = sum c_k and xi = (n/2 - lambda) / (1 + n)."""
    c = [Q(v) for v in c_list]
    n = len(c)
    lam = sum(c, Q(0))
    return lam, (Q(n, 2) - lam) / (1 + n)


def hyper_bessel_asymptotic(c_list, z, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Large-z form of 0F_n(; c; -z) / prod Gamma(c_k) on arg(z) = 0."""
    n = len(c_list)
    if n < 1:
        raise ValueError("need at least one lower parameter")
    _, xi = hyper_bessel_exponents(c_list)
    with working(ctx):
        z = to_mpf(z)
        if z <= 0:
            raise DomainError("hyper-Bessel asymptotic needs z > 0")
        root = z ** (mpmath.mpf(1) / (1 + n))
        ang = mpmath.pi / (1 + n)
        xi_f = to_mpf(xi)
        pref = 2 * (2 * mpmath.pi) ** (-mpmath.mpf(n) / 2) / mpmath.sqrt(1 + n)
        val = (pref * mpmath.exp((1 + n) * root * mpmath.cos(ang)) * z ** xi_f
               * mpmath.cos(mpmath.pi * xi_f + (1 + n) * root * mpmath.sin(ang)))
    return val


def _positive(x):
    x = to_mpf(x)
    if x <= 0:
        raise DomainError("large-x asymptotics need x > 0")
    return x


def _quartic_large(x, ctx, growth: int, phase):
    with working(ctx):
        x = _positive(x)
        x43 = x ** (mpmath.mpf(4) / 3)
        amp = mpmath.sqrt(2 / (3 * mpmath.pi)) * x ** (-mpmath.mpf(1) / 3)
        val = amp * mpmath.exp(growth * mpmath.mpf(3) / 8 * x43) * mpmath.cos(
            3 * mpmath.sqrt(3) / 8 * x43 + phase)
    return AsymptoticEval(val, AsymRegime.LARGE_X, Q(-1, 3))


def phi4_asym_large(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> AsymptoticEval:
    with working(ctx):
        phase = -mpmath.pi / 6
    return _quartic_large(x, ctx, -1, phase)


def psi4_asym_large(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> AsymptoticEval:
    with working(ctx):
        phase = 2 * mpmath.pi / 3
    return _quartic_large(x, ctx, +1, phase)


def quartic_envelope(x, growth: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Amplitude of the quartic asymptotics (the formula without its cosine)."""
    with working(ctx):
        x = _positive(x)
        return (mpmath.sqrt(2 / (3 * mpmath.pi)) * x ** (-mpmath.mpf(1) / 3)
                * mpmath.exp(growth * mpmath.mpf(3) / 8 * x ** (mpmath.mpf(4) / 3)))


def kappa(x, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(5/3) (x/2)^(6/5)"""
    with working(ctx):
        return mpmath.mpf(5) / 3 * (to_mpf(x) / 2) ** (mpmath.mpf(6) / 5)


def phi6_asym_large(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> AsymptoticEval:
    with working(ctx):
        x = _positive(x)
        k = kappa(x, ctx)
        a = 3 * mpmath.pi / 8
        amp = (2 / x) ** (mpmath.mpf(2) / 5) / mpmath.sqrt(5 * mpmath.pi)
        val = amp * (mpmath.exp(-k) / 2
                     + mpmath.exp(mpmath.cos(a) * k) * mpmath.cos(mpmath.sin(a) * k - mpmath.pi / 5))
    return AsymptoticEval(val, AsymRegime.LARGE_X, Q(-2, 5))


def psi6_asym_large(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> AsymptoticEval:
    with working(ctx):
        x = _positive(x)
        k = kappa(x, ctx)
        a = 3 * mpmath.pi / 8
        amp = (2 / x) ** (mpmath.mpf(2) / 5) / mpmath.sqrt(5 * mpmath.pi)
        val = amp * (mpmath.exp(-k) / 2
                     - mpmath.exp(-mpmath.cos(a) * k) * mpmath.sin(mpmath.sin(a) * k + mpmath.pi / 5))
    return AsymptoticEval(val, AsymRegime.LARGE_X, Q(-2, 5))


def phi6_small(x, n_terms: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Taylor series of the sextic phi from the cosine expansion, truncated at n_terms."""
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    with working(ctx):
        x = to_mpf(x)
        c = mpmath.cbrt(3)
        total = mpmath.mpf(0)
        for r in range(n_terms):
            total += ((-c) ** r / mpmath.factorial(2 * r) * mpmath.gamma(mpmath.mpf(r) / 3 + mpmath.mpf(1) / 6)
                      * x ** (2 * r))
        val = mpmath.mpf(3) ** (-mpmath.mpf(5) / 6) / (2 * mpmath.pi) * total
    return val


# x^7 coefficient of the sextic psi: the Taylor expansion of the closed form gives
# 36/35 times the short form -3^(4/3) / (6^6 Gamma(2/3)).
PSI6_X7_CORRECTION = Q(36, 35)


def psi6_small(x, ctx: PrecisionContext = DEFAULT_CONTEXT, exact_x7: bool = True):
    """Three-term small-x expansion of the sextic psi (orders x, x^3, x^7).

    ``exact_x7=False`` uses the short form -3^(4/3) / (6^6 Gamma(2/3)) for the
    x^7 coefficient, which is 35/36 of the Taylor coefficient and leaves an
    O(x^7) remainder instead of O(x^9).
    """
    with working(ctx):
        x = to_mpf(x)
        g23 = mpmath.gamma(mpmath.mpf(2) / 3)
        three = mpmath.mpf(3)
        c1 = -mpmath.cbrt(3) / (3 * g23)
        c3 = three ** (mpmath.mpf(1) / 6) * g23 / (12 * mpmath.pi)
        c7 = -three ** (mpmath.mpf(4) / 3) / (mpmath.mpf(6) ** 6 * g23)
        if exact_x7:
            c7 *= to_mpf(PSI6_X7_CORRECTION)
        val = c1 * x + c3 * x ** 3 + c7 * x ** 7
    return val


DENSITY_DISPLAY_COEFF = {Case.QUARTIC: (Q(276, 1000), Q(1, 3)), Case.SEXTIC: (Q(270, 1000), Q(1, 5))}


def density_asym_leading(case, x, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Leading power law of the density (oscillating corrections omitted)."""
    coeff, power = DENSITY_DISPLAY_COEFF[Case(case)]
    with working(ctx):
        return to_mpf(coeff) * abs(to_mpf(x)) ** to_mpf(power)


def density_mean_coefficient(case, lo=20, hi=50, step=Q(1, 20),
                             ctx: PrecisionContext = PrecisionContext(15, 10)) -> float:
    """Oscillation average of rho(x) / x^power over [lo, hi] by the trapezoid rule."""
    case = Case(case)
    _, power = DENSITY_DISPLAY_COEFF[case]
    bank = build_bank(case)
    lo, hi, step = Q(lo), Q(hi), Q(step)
    n = int((hi - lo) / step)
    if n < 1:
        raise ValueError("window must contain at least one step")
    vals = []
    for i in range(n + 1):
        x = lo + i * step
        rho = density(bank, x, ctx).value
        with working(ctx):
            vals.append(rho / to_mpf(x) ** to_mpf(power))
    with working(ctx):
        area = (sum(vals[1:-1]) + (vals[0] + vals[-1]) / 2) * to_mpf(step)
        return float(area / to_mpf(hi - lo))
