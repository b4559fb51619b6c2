"""Invariant suite behind ``pearcey_kernels selfcheck``, on reduced grids."""

from __future__ import annotations

from fractions import Fraction as Q

import mpmath

from . import oracle
from .hyperf import eval_many, expr_eval
from .kernels import QUARTIC_DIAGONAL_SIGN, SEXTIC_DIAGONAL_SIGN, build_bank, correlation, density, kernel
from .numeric import PrecisionContext

ODE_TOL = mpmath.mpf("1e-20")
METHOD_TOL = mpmath.mpf("1e-10")

ODE_CTX = PrecisionContext(40)
CHECK_CTX = PrecisionContext(20)


def _fmt(v) -> str:
    return mpmath.nstr(v, 3)


def _ode(case, which, order, coeff):
    # residual of f^(order)(x) - coeff * x * f(x)
    bank = build_bank(case)
    base, deriv = (bank.phi, bank.phi_d(order)) if which == "phi" else (bank.psi, bank.psi_d(order))
    worst = mpmath.mpf(0)
    for x in (Q(1, 2), Q(2)):
        f, fd = eval_many([base, deriv], x, ODE_CTX)
        with mpmath.workdps(50):
            worst = max(worst, abs(fd.value - coeff * mpmath.mpf(x.numerator) / x.denominator * f.value))
    return worst <= ODE_TOL, f"max residual {_fmt(worst)}"


def _spread(vals):
    return max(abs(a - b) for a in vals for b in vals)


def _triangle(case):
    bank = build_bank(case)
    quad, mb = (oracle.quad_phi4, oracle.mb_phi4) if case == "quartic" else (oracle.quad_phi6, oracle.mb_phi6)
    x = 1
    vals = [expr_eval(bank.phi, x, CHECK_CTX).value, quad(x, CHECK_CTX).value, mb(x, CHECK_CTX).value]
    d = _spread(vals)
    return d <= METHOD_TOL, f"series/quadrature/Mellin-Barnes spread {_fmt(d)} at x=1"


def _psi_pair():
    worst = mpmath.mpf(0)
    for case, quad in (("quartic", oracle.quad_psi4), ("sextic", oracle.quad_psi6)):
        bank = build_bank(case)
        for x in (1, 2):
            worst = max(worst, abs(expr_eval(bank.psi, x, CHECK_CTX).value - quad(x, CHECK_CTX).value))
    return worst <= METHOD_TOL, f"series vs quadrature max {_fmt(worst)}"


def _contour():
    ctx = PrecisionContext(16)
    vals = [oracle.mb_imag_g4(1, ctx, gamma_line=g).value for g in (Q(-2, 5), Q(-1, 4), Q(-1, 10))]
    ref = oracle.imag_g4_series(1, ctx).value
    d = max(_spread(vals), max(abs(v - ref) for v in vals))
    return d <= METHOD_TOL, f"gamma in (-0.4, -0.25, -0.1) spread incl. series {_fmt(d)}"


def _scaling():
    q, s = build_bank("quartic"), build_bank("sextic")
    ctx = CHECK_CTX
    worst = mpmath.mpf(0)
    with mpmath.workdps(ctx.working_digits):
        r2, c6 = mpmath.sqrt(2), mpmath.root(3, 6)
    for x in (Q(1, 2), Q(3, 2), Q(3)):
        with mpmath.workdps(ctx.working_digits):
            xm = mpmath.mpf(x.numerator) / x.denominator
            a = r2 * oracle.levy_g(4, r2 * xm, ctx).value - expr_eval(q.phi, x, ctx).value
            b = c6 * oracle.levy_g(6, c6 * xm, ctx).value - expr_eval(s.phi, x, ctx).value
        worst = max(worst, abs(a), abs(b))
    return worst <= METHOD_TOL, f"max |scaled Levy - phi| {_fmt(worst)}"


def _parity():
    worst = mpmath.mpf(0)
    for case in ("quartic", "sextic"):
        bank = build_bank(case)
        for x in (Q(1, 2), Q(3, 2), Q(3)):
            worst = max(worst, abs(density(bank, x, CHECK_CTX).value - density(bank, -x, CHECK_CTX).value))
    return worst <= mpmath.mpf("1e-15"), f"max |rho(x) - rho(-x)| {_fmt(worst)}"


def _negativity():
    worst = -mpmath.inf
    for case in ("quartic", "sextic"):
        bank = build_bank(case)
        for x in (Q(1, 2), Q(1), Q(2), Q(4)):
            worst = max(worst, correlation(bank, x, CHECK_CTX).value)
    return worst <= 0, f"max correlation {_fmt(worst)}"


def _diagonal():
    eps = Q(1, 10 ** 6)
    worst = mpmath.mpf(0)
    for case, sign in (("quartic", QUARTIC_DIAGONAL_SIGN), ("sextic", SEXTIC_DIAGONAL_SIGN)):
        bank = build_bank(case)
        for x in (Q(1, 2), Q(2)):
            k = kernel(bank, x, x + eps, CHECK_CTX).value
            worst = max(worst, abs(k - sign * density(bank, x, CHECK_CTX).value))
    return worst <= 10 * mpmath.mpf(eps.numerator) / eps.denominator, f"max |K(x,x+1e-6) - s rho| {_fmt(worst)}"


def _strip():
    num = oracle.mellin_numeric(4, Q(1, 2), PrecisionContext(14, 6))
    ref = oracle.mellin_g4_star(Q(1, 2))
    d = abs(num - ref)
    return d <= mpmath.mpf("1e-12"), f"|numeric - closed form| {_fmt(d)} at s=1/2"


INVARIANTS = (
    ("ode-quartic-phi", lambda: _ode("quartic", "phi", 3, 1)),
    ("ode-quartic-psi", lambda: _ode("quartic", "psi", 3, -1)),
    ("ode-sextic-phi", lambda: _ode("sextic", "phi", 5, Q(-1, 2))),
    ("ode-sextic-psi", lambda: _ode("sextic", "psi", 5, Q(1, 2))),
    ("triangle-quartic-phi", lambda: _triangle("quartic")),
    ("triangle-sextic-phi", lambda: _triangle("sextic")),
    ("series-vs-quadrature-psi", _psi_pair),
    ("contour-independence", _contour),
    ("scaling-identities", _scaling),
    ("density-parity", _parity),
    ("correlation-negativity", _negativity),
    ("diagonal-limit", _diagonal),
    ("mellin-strip", _strip),
)


def run_invariants():
    """Yield (name, passed, detail); an exception counts as a failure."""
    for name, check in INVARIANTS:
        try:
            ok, detail = check()
        except Exception as exc:  # noqa: BLE001 - report, do not abort the suite
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        yield name, bool(ok), detail
