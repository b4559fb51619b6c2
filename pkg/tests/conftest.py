from fractions import Fraction as Q

import mpmath
import pytest

from pearcey_kernels import oracle
from pearcey_kernels.kernels import build_bank
from pearcey_kernels.numeric import PrecisionContext


@pytest.fixture(scope="session")
def quartic():
    return build_bank("quartic")


@pytest.fixture(scope="session")
def sextic():
    return build_bank("sextic")


def mpq(x):
    x = Q(x)
    return mpmath.mpf(x.numerator) / x.denominator


def quad_derivs(quad_fn, x, n, dps=30):
    """[f(x), f'(x), ..., f^(n)(x)] by mpmath finite differences of a quadrature oracle."""
    with mpmath.workdps(dps):
        f = lambda t: quad_fn(t, PrecisionContext(mpmath.mp.dps)).value  # noqa: E731
        return [+d for d in mpmath.diffs(f, mpq(x), n)]


def quartic_kernel_oracle(x, y, dps=30):
    f = quad_derivs(oracle.quad_phi4, x, 2, dps)
    g = quad_derivs(oracle.quad_psi4, y, 2, dps)
    with mpmath.workdps(dps):
        return (f[1] * g[1] - f[2] * g[0] - f[0] * g[2]) / (mpq(x) - mpq(y))


def sextic_kernel_oracle(x, y, dps=30):
    f = quad_derivs(oracle.quad_phi6, x, 4, dps)
    g = quad_derivs(oracle.quad_psi6, y, 4, dps)
    with mpmath.workdps(dps):
        num = f[4] * g[0] - f[3] * g[1] + f[2] * g[2] - f[1] * g[3] + f[0] * g[4]
        return 2 * num / (mpq(x) - mpq(y))
