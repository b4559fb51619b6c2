from fractions import Fraction as Q

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pearcey_kernels import oracle
from pearcey_kernels.hyperf import eval_many, expr_eval
from pearcey_kernels.kernels import (
    MAX_DERIVATIVE,
    QUARTIC_DIAGONAL_SIGN,
    SEXTIC_DIAGONAL_SIGN,
    Regime,
    corr_quartic,
    corr_sextic,
    density_quartic,
    density_sextic,
    kernel_quartic,
    kernel_sextic,
)
from pearcey_kernels.numeric import PrecisionContext

from conftest import mpq, quad_derivs, quartic_kernel_oracle, sextic_kernel_oracle

CTX = PrecisionContext(30)
ODE_CTX = PrecisionContext(40)
GRID = [Q(1, 2), 1, 2, 5, 10]


def tol(d):
    return mpmath.mpf(10) ** -d


def test_bank_shape(quartic, sextic):
    for bank in (quartic, sextic):
        assert len(bank.phi_derivs) == len(bank.psi_derivs) == MAX_DERIVATIVE
        assert bank.phi.parity == 0 and bank.psi.parity == 1
        assert bank.phi_d(2) == bank.phi.derivative(2)
        assert bank.psi_d(6) == bank.psi.derivative(6)


def test_bank_values_at_zero(quartic, sextic):
    with mpmath.workdps(40):
        g = lambda a: mpmath.gamma(mpmath.mpf(a))  # noqa: E731
        assert abs(expr_eval(quartic.phi, 0).value - 1 / (2 * g(0.75))) < tol(30)
        assert abs(expr_eval(sextic.phi, 0).value - mpmath.cbrt(3) ** 0.5 / (3 * g(mpmath.mpf(5) / 6))) < tol(30)
        slope = -mpmath.cbrt(3) / (3 * g(mpmath.mpf(2) / 3))
        assert abs(expr_eval(sextic.psi_d(1), 0).value - slope) < tol(30)


@pytest.mark.parametrize("x", GRID)
def test_ode_residuals(quartic, sextic, x):
    f = eval_many([quartic.phi, quartic.phi_d(3), quartic.psi, quartic.psi_d(3)], x, ODE_CTX)
    s = eval_many([sextic.phi, sextic.phi_d(5)], x, ODE_CTX)
    with mpmath.workdps(60):
        xx = mpq(x)
        assert abs(f[1].value - xx * f[0].value) <= tol(20)
        assert abs(f[3].value + xx * f[2].value) <= tol(20)
        assert abs(s[1].value + xx / 2 * s[0].value) <= tol(20)


def test_sextic_psi_fifth_order_equation(sextic):
    # exploratory: psi satisfies the sign-flipped homogeneous equation
    for x in GRID:
        s = eval_many([sextic.psi, sextic.psi_d(5)], x, ODE_CTX)
        with mpmath.workdps(60):
            assert abs(s[1].value - mpq(x) / 2 * s[0].value) <= tol(20)


@pytest.mark.parametrize("x", [Q(1, 2), 1, 2])
def test_sign_calibration(quartic, sextic, x):
    eps = Q(1, 10 ** 12)
    for bank, kern, dens, sign in ((quartic, kernel_quartic, density_quartic, QUARTIC_DIAGONAL_SIGN),
                                   (sextic, kernel_sextic, density_sextic, SEXTIC_DIAGONAL_SIGN)):
        k = kern(bank, x, x + eps, CTX)
        with mpmath.workdps(40):
            ratio = k.value / dens(bank, x, CTX).value
        assert abs(ratio - sign) < 1e-9


def test_regimes(quartic):
    assert kernel_quartic(quartic, 1, 1).regime is Regime.DIAGONAL
    assert kernel_quartic(quartic, 1, 1 + Q(1, 10 ** 4)).regime is Regime.NEAR_DIAGONAL
    assert kernel_quartic(quartic, 1, Q(1, 2)).regime is Regime.OFF_DIAGONAL


def test_bank_mismatch_rejected(quartic, sextic):
    with pytest.raises(ValueError):
        kernel_quartic(sextic, 1, 2)
    with pytest.raises(ValueError):
        density_sextic(quartic, 1)


def test_kernel_quartic_off_diagonal_oracle(quartic):
    got = kernel_quartic(quartic, 1, Q(1, 2), CTX).value
    ref = quartic_kernel_oracle(1, Q(1, 2))
    assert abs(got - ref) < tol(20)


def test_kernel_sextic_off_diagonal_oracle(sextic):
    got = kernel_sextic(sextic, 1, 2, CTX).value
    ref = sextic_kernel_oracle(1, 2)
    assert abs(got - ref) < tol(15)


@pytest.mark.parametrize("kern,dens,bank_name", [(kernel_quartic, density_quartic, "quartic"),
                                                 (kernel_sextic, density_sextic, "sextic")])
def test_near_diagonal_limit(kern, dens, bank_name, request):
    bank = request.getfixturevalue(bank_name)
    near = kern(bank, 1, 1 + Q(1, 10 ** 6), CTX).value
    diag = kern(bank, 1, 1, CTX).value
    assert abs(near - diag) < 1e-4


def test_density_quartic_at_zero(quartic):
    with mpmath.workdps(40):
        ref = mpmath.sqrt(2) * mpmath.gamma(mpmath.mpf(3) / 4) / (2 * mpmath.pi ** 1.5)
        assert abs(density_quartic(quartic, 0, CTX).value - ref) < tol(30)


def test_density_sextic_at_zero(sextic):
    # odd derivatives of phi and even derivatives of psi vanish at the origin
    f2, f4 = (expr_eval(sextic.phi_d(n), 0, CTX).value for n in (2, 4))
    g1, g3 = (expr_eval(sextic.psi_d(n), 0, CTX).value for n in (1, 3))
    with mpmath.workdps(40):
        assert abs(density_sextic(sextic, 0, CTX).value + 2 * (f4 * g1 + f2 * g3)) < tol(30)


def test_density_parity_examples(quartic, sextic):
    x = Q(17, 10)
    assert density_quartic(quartic, x).value == density_quartic(quartic, -x).value
    x = Q(13, 10)
    assert density_sextic(sextic, x).value == density_sextic(sextic, -x).value


def test_density_display_coefficients(quartic, sextic):
    # single points carry the oscillating correction; averages are checked in the acceptance suite
    with mpmath.workdps(30):
        assert abs(density_quartic(quartic, 30).value / mpmath.mpf(30) ** (mpmath.mpf(1) / 3) - 0.276) < 0.01
        assert abs(density_sextic(sextic, 30).value / mpmath.mpf(30) ** (mpmath.mpf(1) / 5) - 0.270) < 0.02


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=Q(-6), max_value=Q(6), max_denominator=100))
def test_parity(x):
    from pearcey_kernels.kernels import build_bank

    ctx = PrecisionContext(20)
    for case in ("quartic", "sextic"):
        bank = build_bank(case)
        f = eval_many([bank.phi, bank.psi], x, ctx)
        g = eval_many([bank.phi, bank.psi], -x, ctx)
        with mpmath.workdps(40):
            assert abs(f[0].value - g[0].value) <= tol(18) * max(1, abs(f[0].value))
            assert abs(f[1].value + g[1].value) <= tol(18) * max(1, abs(f[1].value))
        dens = density_quartic if case == "quartic" else density_sextic
        with mpmath.workdps(40):
            assert abs(dens(bank, x, ctx).value - dens(bank, -x, ctx).value) <= tol(15)


def test_correlation_negative(quartic, sextic):
    for i in range(0, 41):
        x = Q(i, 4)
        assert corr_quartic(quartic, x, PrecisionContext(20)).value <= 0
        assert corr_sextic(sextic, x, PrecisionContext(20)).value <= 0


def test_correlation_is_minus_kernel_squared(quartic, sextic):
    x = Q(7, 5)
    for bank, kern, corr in ((quartic, kernel_quartic, corr_quartic), (sextic, kernel_sextic, corr_sextic)):
        k = kern(bank, x, -x, CTX).value
        with mpmath.workdps(40):
            assert abs(corr(bank, x, CTX).value + k ** 2) < tol(28)


def test_correlation_at_zero_is_diagonal(quartic, sextic):
    for bank, corr, dens in ((quartic, corr_quartic, density_quartic), (sextic, corr_sextic, density_sextic)):
        rho = dens(bank, 0, CTX).value
        with mpmath.workdps(40):
            assert abs(corr(bank, 0, CTX).value + rho ** 2) < tol(28)
            # continuity at the origin
            assert abs(corr(bank, Q(1, 10 ** 8), CTX).value + rho ** 2) < 1e-6


def test_quartic_correlation_at_two_oracle(quartic):
    ref = quartic_kernel_oracle(2, -2)
    got = corr_quartic(quartic, 2, CTX).value
    with mpmath.workdps(40):
        assert -got > 0
        assert abs(-got - ref ** 2) < tol(18)


def test_sextic_correlation_oracle(sextic):
    x = Q(3, 2)
    ref = sextic_kernel_oracle(x, -x)
    got = corr_sextic(sextic, x, CTX).value
    with mpmath.workdps(40):
        assert abs(-got - ref ** 2) < tol(14)


@pytest.mark.slow
def test_density_quartic_against_quadrature_assembly(quartic):
    worst = mpmath.mpf(0)
    for i in range(21):
        x = Q(i, 2)
        f = quad_derivs(oracle.quad_phi4, x, 2, 25)
        g = quad_derivs(oracle.quad_psi4, x, 2, 25)
        with mpmath.workdps(40):
            ref = -(f[1] * g[2] - f[2] * g[1] + mpq(x) * f[0] * g[0])
            worst = max(worst, abs(density_quartic(quartic, x, CTX).value - ref))
    assert worst <= tol(12)
