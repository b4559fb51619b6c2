from fractions import Fraction as Q

import mpmath
import pytest

from pearcey_kernels.exact import ONE, ZERO, ExactConst, const


def close(a, b, digits=35):
    return abs(a - b) <= mpmath.mpf(10) ** -digits * max(abs(b), 1)


def test_realize_composite():
    c = const(Q(-1, 4), pi=-1, two=Q(1, 2), gammas={Q(3, 4): 1})
    with mpmath.workdps(45):
        ref = -mpmath.sqrt(2) * mpmath.gamma(mpmath.mpf(3) / 4) / (4 * mpmath.pi)
        assert close(c.realize(45), ref)


def test_integer_powers_fold_into_rational():
    assert const(3, three=2, two=-1) == const(Q(27, 2))
    assert const(1, three=Q(7, 6)) == const(3, three=Q(1, 6))


def test_integer_gamma_folds_to_factorial():
    assert const(1, gammas={Q(5): 1}) == const(24)


def test_product_and_scalars():
    a = const(Q(1, 3), pi=Q(1, 2), gammas={Q(2, 3): -1})
    b = const(6, pi=Q(-1, 2), gammas={Q(2, 3): 1})
    assert a * b == const(2)
    assert a * 3 == const(1, pi=Q(1, 2), gammas={Q(2, 3): -1})
    assert (-a).rational == Q(-1, 3)
    assert ONE * ZERO == ZERO
    assert ZERO.is_zero()


def test_add_like_requires_same_irrational_part():
    a = const(Q(1, 2), pi=1)
    assert a.add_like(a) == const(1, pi=1)
    with pytest.raises(ValueError):
        a.add_like(const(1))


def test_is_dataclass_value():
    assert isinstance(ONE, ExactConst)
    assert hash(const(2, pi=1)) == hash(const(2, pi=1))
