"""Independent routes to the same functions.

* panel Gauss-Legendre quadrature of the defining integrals,
* closed-form Mellin transforms and their numerical counterparts,
* Mellin-Barnes line integrals for the four Meijer G instances,
* the Levy-function scaling identities.

Sign convention for the "imaginary parts": ``imag_g4_series`` and
``imag_g6_series`` equal the sine transforms (1/pi) int_0^inf w(t) sin(xt) dt.
The closed-form Mellin transforms use exp(-ixt), whose imaginary part is the
negative of that sine transform.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction as Q

import mpmath

from .exact import const
from .hyperf import HypExpr, HypParams, HypTerm, eval_many, expr_eval
from .kernels import build_bank
from .numeric import (
    DEFAULT_CONTEXT,
    ContourError,
    DomainError,
    EvalResult,
    PrecisionContext,
    ToleranceNotMet,
    log_gamma_complex,
    to_mpf,
    working,
)

PANEL_MAX = Q(1, 2)


class Integrand(str, enum.Enum):
    G4_REAL = "g4-real"
    G4_IMAG = "g4-imag"
    PSI4_SINE = "psi4-sine"
    G6_REAL = "g6-real"
    G6_IMAG = "g6-imag"
    PSI6_SINH = "psi6-sinh"
    LEVY = "levy"


@dataclass(frozen=True)
class QuadratureSpec:
    integrand_id: Integrand
    truncation_threshold: float
    tolerance: float
    alpha: float | None = None

    def __post_init__(self):
        if self.tolerance <= 0 or self.truncation_threshold <= 0:
            raise ValueError("tolerance and threshold must be positive")


def _panels(upper, x):
    ax = abs(float(x))
    width = float(PANEL_MAX) if ax == 0 else min(float(PANEL_MAX), math.pi / (4 * ax))
    n = max(1, int(math.ceil(float(upper) / width)))
    return [upper * i / n for i in range(n + 1)]


def _solve_truncation(log_env, digits: int) -> mpmath.mpf:
    """Smallest T beyond the envelope peak with log_env(T) < -ln(10)(digits+2)."""
    target = -math.log(10) * (digits + 2)
    t = 1.0
    while log_env(t) >= target or log_env(2 * t) > log_env(t):
        t *= 1.25
    lo, hi = t / 1.25, t
    for _ in range(60):
        mid = (lo + hi) / 2
        if log_env(mid) >= target:
            lo = mid
        else:
            hi = mid
    return mpmath.mpf(hi)


def _peak_log(log_env, upper: float) -> float:
    return max(log_env(upper * i / 200) for i in range(201))


def _integrate(f, log_env, x, ctx: PrecisionContext, spec: QuadratureSpec,
               smooth_at_zero: bool = True) -> EvalResult:
    """(1/pi) int_0^T f dt on oscillation-aware Gauss-Legendre panels.

    With ``smooth_at_zero=False`` the first panel uses tanh-sinh, which copes
    with an algebraic branch point at the origin.
    """
    T = _solve_truncation(log_env, ctx.target_digits)
    peak_log = _peak_log(log_env, float(T))
    extra = max(0, int(math.ceil(peak_log / math.log(10))))
    with mpmath.workdps(ctx.working_digits + extra):
        nodes = _panels(T, x)
        if smooth_at_zero:
            val, err = mpmath.quad(f, nodes, method="gauss-legendre", error=True)
        else:
            val, err = mpmath.quad(f, nodes[:2], method="tanh-sinh", error=True)
            if len(nodes) > 2:
                v2, e2 = mpmath.quad(f, nodes[1:], method="gauss-legendre", error=True)
                val, err = val + v2, err + e2
        val /= mpmath.pi
        err /= mpmath.pi
        tol = to_mpf(spec.tolerance) * max(1, abs(val))
        if err > tol:
            raise ToleranceNotMet(f"{spec.integrand_id.value}: error {mpmath.nstr(err, 3)} > {mpmath.nstr(tol, 3)}")
    with working(ctx):
        return EvalResult(+val, err, len(nodes) - 1, mpmath.exp(peak_log))


def _spec(ident, ctx, alpha=None):
    return QuadratureSpec(ident, 10.0 ** -(ctx.target_digits + 2), 10.0 ** -(ctx.target_digits - 2), alpha)


def quad_phi4(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> EvalResult:
    """(1/pi) int_0^inf exp(-t^4/4) cos(tx) dt"""
    with working(ctx):
        xx = to_mpf(x)
    return _integrate(lambda t: mpmath.exp(-t ** 4 / 4) * mpmath.cos(t * xx),
                      lambda t: -t ** 4 / 4, xx, ctx, _spec(Integrand.G4_REAL, ctx))


def quad_imag_g4(y, ctx: PrecisionContext = DEFAULT_CONTEXT) -> EvalResult:
    """(1/pi) int_0^inf exp(-t^4/4) sin(ty) dt"""
    with working(ctx):
        yy = to_mpf(y)
    return _integrate(lambda t: mpmath.exp(-t ** 4 / 4) * mpmath.sin(t * yy),
                      lambda t: -t ** 4 / 4, yy, ctx, _spec(Integrand.G4_IMAG, ctx))


def quad_psi4(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> EvalResult:
    """Im[(2w/pi) int_0^inf exp(-u^4/4) sin(w x u) du], w = exp(3 i pi/4), in real arithmetic."""
    with working(ctx):
        xx = to_mpf(x)
        r2 = mpmath.sqrt(2)
    ax = abs(float(xx))

    def f(u):
        p = xx * u / r2
        return -r2 * mpmath.exp(-u ** 4 / 4) * (mpmath.cos(p) * mpmath.sinh(p) + mpmath.sin(p) * mpmath.cosh(p))

    return _integrate(f, lambda u: -u ** 4 / 4 + ax * u / math.sqrt(2), xx, ctx,
                      _spec(Integrand.PSI4_SINE, ctx))


def quad_phi6(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> EvalResult:
    """(1/pi) int_0^inf exp(-t^6/3) cos(tx) dt"""
    with working(ctx):
        xx = to_mpf(x)
    return _integrate(lambda t: mpmath.exp(-t ** 6 / 3) * mpmath.cos(t * xx),
                      lambda t: -t ** 6 / 3, xx, ctx, _spec(Integrand.G6_REAL, ctx))


def quad_imag_g6(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> EvalResult:
    """(1/pi) int_0^inf exp(-t^6/3) sin(tx) dt"""
    with working(ctx):
        xx = to_mpf(x)
    return _integrate(lambda t: mpmath.exp(-t ** 6 / 3) * mpmath.sin(t * xx),
                      lambda t: -t ** 6 / 3, xx, ctx, _spec(Integrand.G6_IMAG, ctx))


def quad_psi6(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> EvalResult:
    """-Im[(2w/pi) int_0^inf exp(-t^6/3) sinh(w x t) dt], w = exp(i pi/3), in real arithmetic."""
    with working(ctx):
        xx = to_mpf(x)
        h = mpmath.sqrt(3) / 2
    ax = abs(float(xx))

    def f(t):
        a = xx * t / 2
        b = xx * t * h
        return -2 * mpmath.exp(-t ** 6 / 3) * (mpmath.cosh(a) * mpmath.sin(b) / 2 + h * mpmath.sinh(a) * mpmath.cos(b))

    return _integrate(f, lambda t: -t ** 6 / 3 + ax * t / 2, xx, ctx, _spec(Integrand.PSI6_SINH, ctx))


def levy_g(alpha, x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> EvalResult:
    """(1/pi) int_0^inf exp(-t^alpha) cos(xt) dt; signed and oscillating for alpha > 2."""
    a = float(alpha)
    if a <= 0:
        raise DomainError("alpha must be positive")
    with working(ctx):
        xx = to_mpf(x)
        aa = to_mpf(alpha)
    return _integrate(lambda t: mpmath.exp(-t ** aa) * mpmath.cos(t * xx),
                      lambda t: -t ** a, xx, ctx, _spec(Integrand.LEVY, ctx, a),
                      smooth_at_zero=Q(alpha).denominator == 1)


# -- Mellin transforms ------------------------------------------------------

def _mellin_closed(s, order: int, base, ctx):
    with working(ctx):
        s = mpmath.mpmathify(s)
        if not 0 < mpmath.re(s) < 1:
            raise DomainError("Mellin transform defined for 0 < Re(s) < 1")
        one_minus = (1 - s) / order
        logv = (one_minus * mpmath.log(base) - 1j * mpmath.pi * s / 2
                + log_gamma_complex(s, ctx) + log_gamma_complex(one_minus, ctx))
        return mpmath.mpc(mpmath.exp(logv) / (order * mpmath.pi))


def mellin_g4_star(s, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(1/(4 pi)) 4^((1-s)/4) exp(-i pi s/2) Gamma(s) Gamma((1-s)/4)"""
    return _mellin_closed(s, 4, 4, ctx)


def mellin_g6_star(s, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(1/(6 pi)) 3^((1-s)/6) exp(-i pi s/2) Gamma(s) Gamma((1-s)/6)"""
    return _mellin_closed(s, 6, 3, ctx)


def _sine_tail(s, X, weight_coeffs):
    # int_X^inf x^(s-1) sum_j c_j x^(-e_j) dx from the large-x sine-transform expansion
    return sum(to_mpf(c) * X ** (s - e) / (e - s) for c, e in weight_coeffs) / mpmath.pi


def mellin_numeric(order: int, s, ctx: PrecisionContext = PrecisionContext(20, 10),
                   cutoff=None):
    """int_0^inf x^(s-1) g(x) dx by quadrature of the series values (real s in (0, 1))."""
    if order == 4:
        real_e, imag_e = build_bank("quartic").phi, imag_g4_expr()
        cutoff = cutoff or 30
        # sine transform of exp(-t^4/4) ~ (1/pi) sum_j (-1)^j (4j)!/(4^j j!) x^(-4j-1)
        tail = [(Q((-1) ** j * math.factorial(4 * j), 4 ** j * math.factorial(j)), 4 * j + 1) for j in range(4)]
    elif order == 6:
        real_e, imag_e = build_bank("sextic").phi, imag_g6_expr()
        cutoff = cutoff or 60
        # sine transform of exp(-t^6/3) ~ (1/pi) sum_j (6j)!/(3^j j!) x^(-6j-1)
        tail = [(Q(math.factorial(6 * j), 3 ** j * math.factorial(j)), 6 * j + 1) for j in range(4)]
    else:
        raise ValueError("order must be 4 or 6")
    with working(ctx):
        ss = to_mpf(s)
        if not 0 < ss < 1:
            raise DomainError("need 0 < s < 1")
        X = to_mpf(cutoff)
        inner = PrecisionContext(ctx.target_digits, 10, ctx.max_terms)
        # x = u^(1/s) absorbs the x^(s-1) endpoint singularity: x^(s-1) dx = du / s
        nodes = [(X * i / (2 * int(cutoff))) ** ss for i in range(2 * int(cutoff) + 1)]

        def f(u):
            re, im = eval_many([real_e, imag_e], u ** (1 / ss), inner)
            return mpmath.mpc(re.value, im.value)

        # tanh-sinh where u^(1/s) is not smooth, Gauss-Legendre on the rest
        val = (mpmath.quad(f, nodes[:2]) + mpmath.quad(f, nodes[1:], method="gauss-legendre")) / ss
        re = mpmath.re(val)
        im = mpmath.im(val) + _sine_tail(ss, X, tail)
        return mpmath.mpc(re, -im)


# -- Meijer G line integrals -------------------------------------------------

def _left_right(m, n, a, b):
    left = max((-bj for bj in b[:m]), default=None)
    right = min((1 - aj for aj in a[:n]), default=None)
    return left, right


def default_gamma_line(m, n, a_params, b_params) -> Q:
    """Abscissa strictly between the left and right pole families."""
    a = [Q(v) for v in a_params]
    b = [Q(v) for v in b_params]
    left, right = _left_right(m, n, a, b)
    if left is not None and right is not None:
        return (left + right) / 2
    if left is not None:
        return left + Q(7, 20)
    if right is not None:
        return right - Q(7, 20)
    return Q(0)


@dataclass(frozen=True)
class MeijerSpec:
    m: int
    n: int
    p: int
    q: int
    a_params: tuple
    b_params: tuple
    argument: object
    gamma_line: object = None
    c_star: Q = field(init=False)
    mu: Q = field(init=False)

    def __post_init__(self):
        a = tuple(Q(v) for v in self.a_params)
        b = tuple(Q(v) for v in self.b_params)
        object.__setattr__(self, "a_params", a)
        object.__setattr__(self, "b_params", b)
        if len(a) != self.p or len(b) != self.q:
            raise ValueError("parameter list lengths must equal p and q")
        if not (0 <= self.m <= self.q and 0 <= self.n <= self.p):
            raise ValueError("need 0 <= m <= q and 0 <= n <= p")
        if self.gamma_line is None:
            object.__setattr__(self, "gamma_line", default_gamma_line(self.m, self.n, a, b))
        object.__setattr__(self, "c_star", Q(self.m + self.n) - Q(self.p + self.q, 2))
        object.__setattr__(self, "mu", sum(b, Q(0)) - sum(a, Q(0)) + Q(self.p - self.q, 2) + 1)
        left, right = _left_right(self.m, self.n, a, b)
        g = Q(self.gamma_line) if not isinstance(self.gamma_line, float) else Q(self.gamma_line).limit_denominator(10 ** 12)
        if (left is not None and g <= left) or (right is not None and g >= right):
            raise ContourError(f"gamma = {self.gamma_line} does not separate poles ({left}, {right})")


def _log_integrand(spec: MeijerSpec, s, logz, ctx):
    a, b, m, n = spec.a_params, spec.b_params, spec.m, spec.n
    val = -s * logz
    for bj in b[:m]:
        val += log_gamma_complex(bj + s, None)
    for aj in a[:n]:
        val += log_gamma_complex(1 - aj - s, None)
    for aj in a[n:]:
        val -= log_gamma_complex(aj + s, None)
    for bj in b[m:]:
        val -= log_gamma_complex(1 - bj - s, None)
    return val


def _strip_halfwidth(spec: MeijerSpec) -> float:
    """Distance from the line to the nearest pole of the integrand (in Im t)."""
    g = float(spec.gamma_line)
    left, right = _left_right(spec.m, spec.n, spec.a_params, spec.b_params)
    d = math.inf
    if left is not None:
        d = min(d, g - float(left))
    if right is not None:
        d = min(d, float(right) - g)
    return min(d, 1.0)


def meijer_line_integral(spec: MeijerSpec, ctx: PrecisionContext = DEFAULT_CONTEXT) -> EvalResult:
    """G^{m,n}_{p,q} on the vertical line Re(s) = gamma_line (needs c* > 0).

    G = (1/pi) int_0^H Re[exp(log Phi(gamma + it) - s ln z)] dt by the
    trapezoid rule, which converges geometrically in 1/h for integrands
    analytic in a strip; h is set from the pole-free half-width and checked
    against the rule on every other node.
    """
    if spec.c_star <= 0:
        raise ContourError("vertical-line contour needs c* > 0")
    d = 0.75 * _strip_halfwidth(spec)
    guard = ctx.guard_digits
    while True:
        work = ctx.with_guard(guard)
        with working(work):
            z = to_mpf(spec.argument)
            if z <= 0:
                raise DomainError("argument must be positive")
            logz = mpmath.log(z)
            gam = to_mpf(spec.gamma_line)

            def logf(t):
                return _log_integrand(spec, mpmath.mpc(gam, t), logz, work)

            threshold = mpmath.mpf(10) ** -(ctx.target_digits + 2)
            peak = abs(mpmath.exp(logf(0)))
            H, below = 0, 0
            while below < 3:
                H += 1
                v = abs(mpmath.exp(mpmath.re(logf(H))))
                peak = max(peak, v)
                below = below + 1 if v < threshold else 0
                if H > 100_000:
                    raise ToleranceNotMet("Mellin-Barnes integrand does not decay")
            # off-line growth of z^(-s) is exp(d |ln z|); aim the discretisation error below threshold
            budget = (ctx.target_digits + 2) * math.log(10) + math.log(max(float(peak), 1e-300) + 1) \
                + d * abs(float(logz)) + 5
            n = max(8, int(math.ceil(H * budget / (2 * math.pi * d))))
            n += n % 2
            samples = {}

            def f(k, n_):
                # keyed by the exact node fraction so refinements reuse samples
                key = Q(k, n_)
                if key not in samples:
                    samples[key] = mpmath.re(mpmath.exp(logf(H * to_mpf(key))))
                return samples[key]

            while True:
                h = mpmath.mpf(H) / n
                fine = h * (f(0, n) / 2 + sum(f(k, n) for k in range(1, n)))
                coarse = 2 * h * (f(0, n) / 2 + sum(f(2 * k, n) for k in range(1, n // 2)))
                diff = abs(fine - coarse)
                # error of the fine rule is the square of the coarse one (relative to the peak)
                err = diff ** 2 / max(peak, diff) + threshold
                tol = mpmath.mpf(10) ** -(ctx.target_digits - 2) * max(1, abs(fine))
                if err <= tol or n > 2 ** 22:
                    break
                n *= 2
            val = fine / mpmath.pi
            err /= mpmath.pi
        loss = float(mpmath.log10(peak / abs(val))) if val != 0 else math.inf
        if not ctx.adaptive or loss <= guard - 5 or guard > 400:
            if err > tol:
                raise ToleranceNotMet(f"Mellin-Barnes error {mpmath.nstr(err, 3)} > {mpmath.nstr(tol, 3)}")
            return EvalResult(val, err, n, peak)
        guard = max(2 * guard, int(math.ceil(loss)) + 10)


def _scaled_meijer(m, n, a, b, z, prefactor, x, ctx, gamma_line=None):
    spec = MeijerSpec(m, n, len(a), len(b), a, b, z, gamma_line)
    res = meijer_line_integral(spec, ctx)
    with working(ctx):
        scale = prefactor / to_mpf(x)
        return EvalResult(scale * res.value, abs(scale) * res.abs_error_estimate,
                          res.terms_used, abs(scale) * res.peak_term_magnitude)


def _nonzero(x):
    if to_mpf(x) == 0:
        raise DomainError("Mellin-Barnes representation is singular at x = 0")


def mb_phi4(x, ctx: PrecisionContext = DEFAULT_CONTEXT, gamma_line=None) -> EvalResult:
    """sqrt(2/pi) / x * G^{2,0}_{0,3}(x^4/64 | -; 1/4, 3/4, 1/2); even in x."""
    _nonzero(x)
    with working(ctx):
        ax = abs(to_mpf(x))
        pref = mpmath.sqrt(2 / mpmath.pi)
        z = ax ** 4 / 64
    return _scaled_meijer(2, 0, (), (Q(1, 4), Q(3, 4), Q(1, 2)), z, pref, ax, ctx, gamma_line)


def g4_imag_spec(y, gamma_line=None, ctx: PrecisionContext = DEFAULT_CONTEXT) -> MeijerSpec:
    with working(ctx):
        z = to_mpf(y) ** 4 / 64
    return MeijerSpec(2, 1, 1, 4, (1,), (Q(1, 2), 1, Q(1, 4), Q(3, 4)), z, gamma_line)


def mb_imag_g4(y, ctx: PrecisionContext = DEFAULT_CONTEXT, gamma_line=None) -> EvalResult:
    """sqrt(2/pi) / y * G^{2,1}_{1,4}(y^4/64 | 1; 1/2, 1, 1/4, 3/4); odd in y."""
    _nonzero(y)
    with working(ctx):
        yy = to_mpf(y)
        ay = abs(yy)
        pref = mpmath.sqrt(2 / mpmath.pi) * mpmath.sign(yy)
        z = ay ** 4 / 64
    return _scaled_meijer(2, 1, (1,), (Q(1, 2), 1, Q(1, 4), Q(3, 4)), z, pref, ay, ctx, gamma_line)


def mb_phi6(x, ctx: PrecisionContext = DEFAULT_CONTEXT, gamma_line=None) -> EvalResult:
    """sqrt(3/pi) / x * G^{3,0}_{0,5}(3x^6/6^6 | -; 1/6, 1/2, 5/6, 1/3, 2/3); even in x."""
    _nonzero(x)
    with working(ctx):
        ax = abs(to_mpf(x))
        pref = mpmath.sqrt(3 / mpmath.pi)
        z = 3 * ax ** 6 / 6 ** 6
    return _scaled_meijer(3, 0, (), (Q(1, 6), Q(1, 2), Q(5, 6), Q(1, 3), Q(2, 3)),
                          z, pref, ax, ctx, gamma_line)


def mb_imag_g6(x, ctx: PrecisionContext = DEFAULT_CONTEXT, gamma_line=None) -> EvalResult:
    """sqrt(3/pi) / x * G^{3,1}_{1,6}(3x^6/6^6 | 1; 1/3, 2/3, 1, 1/6, 1/2, 5/6); odd in x."""
    _nonzero(x)
    with working(ctx):
        xx = to_mpf(x)
        ax = abs(xx)
        pref = mpmath.sqrt(3 / mpmath.pi) * mpmath.sign(xx)
        z = 3 * ax ** 6 / 6 ** 6
    return _scaled_meijer(3, 1, (1,), (Q(1, 3), Q(2, 3), 1, Q(1, 6), Q(1, 2), Q(5, 6)),
                          z, pref, ax, ctx, gamma_line)


# -- series forms of the sine transforms ------------------------------------

def imag_g4_expr() -> HypExpr:
    arg = const(Q(1, 64))
    return HypExpr.merged([
        HypTerm(const(Q(1, 2), pi=Q(-1, 2)), 1, HypParams((), (Q(3, 4), Q(5, 4))), arg, 4),
        HypTerm(const(Q(-1, 6), pi=-1), 3, HypParams((1,), (Q(5, 4), Q(3, 2), Q(7, 4))), arg, 4),
    ])


def imag_g6_expr() -> HypExpr:
    arg = const(Q(-3, 6 ** 6))
    return HypExpr.merged([
        HypTerm(const(Q(1, 9), three=Q(5, 6), gammas={Q(2, 3): -1}), 1,
                HypParams((), (Q(1, 2), Q(2, 3), Q(5, 6), Q(7, 6))), arg, 6),
        HypTerm(const(Q(-1, 36), pi=-1, three=Q(2, 3), gammas={Q(2, 3): 1}), 3,
                HypParams((), (Q(5, 6), Q(7, 6), Q(4, 3), Q(3, 2))), arg, 6),
        HypTerm(const(Q(1, 240), pi=-1), 5,
                HypParams((1,), (Q(7, 6), Q(4, 3), Q(3, 2), Q(5, 3), Q(11, 6))), arg, 6),
    ])


def imag_g4_series(y, ctx: PrecisionContext = DEFAULT_CONTEXT) -> EvalResult:
    return expr_eval(imag_g4_expr(), y, ctx)


def imag_g6_series(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> EvalResult:
    return expr_eval(imag_g6_expr(), x, ctx)
