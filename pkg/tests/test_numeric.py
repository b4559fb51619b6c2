from fractions import Fraction as Q

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pearcey_kernels.hyperf import HypParams, pfq
from pearcey_kernels.numeric import (
    EvalResult,
    PoleError,
    PrecisionContext,
    gamma_real,
    log_gamma_complex,
    pochhammer,
)

CTX100 = PrecisionContext(100)


def test_context_validation():
    with pytest.raises(ValueError):
        PrecisionContext(0)
    with pytest.raises(ValueError):
        PrecisionContext(10, -1)
    with pytest.raises(ValueError):
        PrecisionContext(10, 5, 0)
    assert PrecisionContext(30, 10).working_digits == 40


def test_capped_context_never_boosts():
    c = PrecisionContext.capped(10)
    assert c.working_digits == 10
    assert c.boosted(20) is c
    assert PrecisionContext(10).boosted(5).guard_digits == 15


def test_digit_loss():
    assert EvalResult(mpmath.mpf(1), 0, 1, mpmath.mpf(1000)).digit_loss == pytest.approx(3)
    assert EvalResult(mpmath.mpf(0), 0, 1, mpmath.mpf(1)).digit_loss == float("inf")
    assert EvalResult(mpmath.mpf(2)).digit_loss == 0


def test_gamma_simple_values():
    assert gamma_real(1) == 1
    with mpmath.workdps(60):
        assert abs(gamma_real(Q(1, 2), PrecisionContext(50)) - mpmath.sqrt(mpmath.pi)) < mpmath.mpf(10) ** -50


def test_gamma_three_quarters_stable_across_precisions():
    lo = gamma_real(Q(3, 4), PrecisionContext(50))
    hi = gamma_real(Q(3, 4), PrecisionContext(80))
    with mpmath.workdps(90):
        assert lo != hi
        assert abs(lo - hi) < mpmath.mpf(10) ** -50


@pytest.mark.parametrize("z", [0, -1, -2, Q(-3)])
def test_gamma_poles(z):
    with pytest.raises(PoleError):
        gamma_real(z)
    with pytest.raises(PoleError):
        log_gamma_complex(z)


def test_log_gamma_trivial_points():
    assert abs(log_gamma_complex(1)) < mpmath.mpf(10) ** -35
    assert abs(log_gamma_complex(2)) < mpmath.mpf(10) ** -35


def _stirling_log_gamma(z, shift=60, terms=30):
    # log Gamma(z) = log Gamma(z + N) - sum log(z + k), seed from the Stirling series
    w = z + shift
    val = (w - mpmath.mpf(1) / 2) * mpmath.log(w) - w + mpmath.log(2 * mpmath.pi) / 2
    for k in range(1, terms + 1):
        val += mpmath.bernoulli(2 * k) / (2 * k * (2 * k - 1) * w ** (2 * k - 1))
    for k in range(shift):
        val -= mpmath.log(z + k)
    return val


def test_log_gamma_complex_against_recurrence():
    with mpmath.workdps(50):
        z = mpmath.mpc("0.25", 10)
        ref = _stirling_log_gamma(z)
        got = log_gamma_complex(z, PrecisionContext(40))
        assert abs(got - ref) < mpmath.mpf(10) ** -38


def test_log_gamma_exp_matches_gamma_on_real_axis():
    with mpmath.workdps(40):
        for x in (Q(1, 3), Q(5, 2), Q(7)):
            assert abs(mpmath.exp(log_gamma_complex(x, PrecisionContext(35))) / gamma_real(x) - 1) < mpmath.mpf(10) ** -33


def test_pochhammer():
    assert pochhammer(Q(5, 7), 0) == 1
    assert pochhammer(0, 0) == 1
    assert pochhammer(Q(1, 2), 2) == Q(3, 4)
    assert pochhammer(Q(3, 4), 3) == Q(231, 64)
    assert pochhammer(mpmath.mpf("0.75"), 3) == mpmath.mpf(231) / 64
    with pytest.raises(ValueError):
        pochhammer(1, -1)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=1e-3, max_value=1 - 1e-3))
def test_first_reflection(z):
    with mpmath.workdps(110):
        zz = mpmath.mpf(z)
        prod = gamma_real(zz, CTX100) * gamma_real(1 - zz, CTX100) * mpmath.sin(mpmath.pi * zz) / mpmath.pi
        assert abs(prod - 1) < mpmath.mpf(10) ** -95


def test_first_reflection_at_one_half():
    with mpmath.workdps(110):
        h = Q(1, 2)
        assert abs(gamma_real(h, CTX100) ** 2 / mpmath.pi - 1) < mpmath.mpf(10) ** -95


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=-0.499, max_value=0.499))
def test_second_reflection(z):
    with mpmath.workdps(110):
        zz = mpmath.mpf(z)
        prod = (gamma_real(mpmath.mpf(1) / 2 + zz, CTX100) * gamma_real(mpmath.mpf(1) / 2 - zz, CTX100)
                * mpmath.cos(mpmath.pi * zz) / mpmath.pi)
        assert abs(prod - 1) < mpmath.mpf(10) ** -95


@pytest.mark.parametrize("n", [2, 3, 4])
@settings(max_examples=20, deadline=None)
@given(z=st.floats(min_value=0.05, max_value=7.0))
def test_multiplication_formula(n, z):
    with mpmath.workdps(110):
        zz = mpmath.mpf(z)
        lhs = mpmath.mpf(1)
        for k in range(n):
            lhs *= gamma_real(zz + mpmath.mpf(k) / n, CTX100)
        rhs = (2 * mpmath.pi) ** (mpmath.mpf(n - 1) / 2) * mpmath.mpf(n) ** (mpmath.mpf(1) / 2 - n * zz) \
            * gamma_real(n * zz, CTX100)
        assert abs(lhs / rhs - 1) < mpmath.mpf(10) ** -95


def test_monotone_refinement():
    # cancelling series: the psi-hat argument at x = 12
    params = HypParams((), (Q(3, 4), Q(5, 4)))
    z = Q(-12 ** 4, 64)
    with mpmath.workdps(300):
        ref = pfq(params, z, PrecisionContext(250)).value
    prev = None
    for guard in (10, 20, 40, 80):
        res = pfq(params, z, PrecisionContext(20, guard, adaptive=False))
        with mpmath.workdps(300):
            err = abs(res.value - ref)
        if prev is not None:
            assert err <= prev.abs_error_estimate
        prev = res
