"""Results must not depend on the caller's global mpmath precision."""

from fractions import Fraction as Q

import mpmath
import pytest

from pearcey_kernels import asymptotics as A
from pearcey_kernels import kernels as K
from pearcey_kernels import oracle as O
from pearcey_kernels.numeric import PrecisionContext, gamma_real

C = PrecisionContext(25)
q, s = K.build_bank("quartic"), K.build_bank("sextic")

CALLS = {
    "gamma": lambda: gamma_real(Q(3, 4), C),
    "density-quartic": lambda: K.density_quartic(q, Q(3, 2), C),
    "density-sextic": lambda: K.density_sextic(s, Q(3, 2), C),
    "kernel-sextic-diagonal": lambda: K.kernel_sextic(s, 1, 1, C),
    "kernel-quartic-near": lambda: K.kernel_quartic(q, 1, 1 + Q(1, 10 ** 6), C),
    "corr-sextic": lambda: K.corr_sextic(s, 0, C),
    "quad-psi6": lambda: O.quad_psi6(2, C),
    "mb-phi4": lambda: O.mb_phi4(2, C),
    "mellin-g6": lambda: O.mellin_g6_star(Q(1, 2), C),
    "levy": lambda: O.levy_g(Q(3, 2), 2, C),
    "hyper-bessel": lambda: A.hyper_bessel_asymptotic([Q(3, 4), Q(5, 4)], 10 ** 4, C),
    "phi6-large": lambda: A.phi6_asym_large(7, C),
    "phi6-small": lambda: A.phi6_small(Q(1, 2), 20, C),
    "psi6-small": lambda: A.psi6_small(Q(1, 2), C),
}


def _value(r):
    return getattr(r, "value", r)


@pytest.mark.parametrize("name", list(CALLS))
def test_independent_of_ambient_dps(name):
    out = []
    for dps in (15, 80):
        with mpmath.workdps(dps):
            out.append(_value(CALLS[name]()))
    with mpmath.workdps(100):
        assert out[0] == out[1]
