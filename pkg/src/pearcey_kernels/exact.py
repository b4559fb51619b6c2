"""Symbolic constants of the form  q * pi^a * 2^b * 3^c * prod Gamma(r_i)^e_i.

These stay exact under the product rule used when differentiating
hypergeometric expressions, and are only turned into floating point
(``realize``) at the precision an evaluation asks for.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from .numeric import to_mpf

Q = Fraction


def _split(e: Fraction) -> tuple[int, Fraction]:
    whole = e.numerator // e.denominator
    return whole, e - whole


@dataclass(frozen=True)
class ExactConst:
    rational: Fraction = Fraction(1)
    pi_pow: Fraction = Fraction(0)
    two_pow: Fraction = Fraction(0)
    three_pow: Fraction = Fraction(0)
    gammas: tuple = field(default=())  # sorted ((arg, power), ...)

    @classmethod
    def make(cls, rational=1, pi_pow=0, two_pow=0, three_pow=0, gammas=None) -> "ExactConst":
        rational = Q(rational)
        two_whole, two_frac = _split(Q(two_pow))
        three_whole, three_frac = _split(Q(three_pow))
        rational *= Q(2) ** two_whole * Q(3) ** three_whole
        powers: dict[Fraction, int] = {}
        for arg, p in (gammas or {}).items():
            arg = Q(arg)
            if arg.denominator == 1:
                if arg <= 0:
                    raise ValueError(f"Gamma pole at {arg}")
                fact = 1
                for i in range(1, arg.numerator):
                    fact *= i
                rational *= Q(fact) ** p
                continue
            powers[arg] = powers.get(arg, 0) + p
        if rational == 0:
            return ZERO
        gam = tuple(sorted((a, p) for a, p in powers.items() if p != 0))
        return cls(rational, Q(pi_pow), two_frac, three_frac, gam)

    @property
    def irrational_key(self) -> tuple:
        return (self.pi_pow, self.two_pow, self.three_pow, self.gammas)

    def is_zero(self) -> bool:
        return self.rational == 0

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ExactConst.make(self.rational * other, self.pi_pow, self.two_pow,
                                   self.three_pow, dict(self.gammas))
        if not isinstance(other, ExactConst):
            return NotImplemented
        gam = dict(self.gammas)
        for a, p in other.gammas:
            gam[a] = gam.get(a, 0) + p
        return ExactConst.make(self.rational * other.rational,
                               self.pi_pow + other.pi_pow,
                               self.two_pow + other.two_pow,
                               self.three_pow + other.three_pow, gam)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def add_like(self, other: "ExactConst") -> "ExactConst":
        """Sum of two constants sharing the same irrational part."""
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.irrational_key != other.irrational_key:
            raise ValueError("constants are not like terms")
        return ExactConst.make(self.rational + other.rational, self.pi_pow, self.two_pow,
                               self.three_pow, dict(self.gammas))

    def realize(self, dps: int | None = None):
        """Numerical value at ``dps`` digits (current mpmath precision if None)."""
        if dps is None:
            dps = mpmath.mp.dps
        return _realize(self, dps)

    def __float__(self):
        return float(self.realize(20))

    def __str__(self):
        parts = [str(self.rational)]
        if self.pi_pow:
            parts.append(f"pi^({self.pi_pow})")
        if self.two_pow:
            parts.append(f"2^({self.two_pow})")
        if self.three_pow:
            parts.append(f"3^({self.three_pow})")
        parts += [f"Gamma({a})^{p}" for a, p in self.gammas]
        return "*".join(parts)


ZERO = ExactConst(Fraction(0))
ONE = ExactConst()


@lru_cache(maxsize=4096)
def _realize(c: ExactConst, dps: int):
    with mpmath.workdps(dps + 5):
        val = to_mpf(c.rational)
        if c.pi_pow:
            val *= mpmath.pi ** to_mpf(c.pi_pow)
        if c.two_pow:
            val *= mpmath.mpf(2) ** to_mpf(c.two_pow)
        if c.three_pow:
            val *= mpmath.mpf(3) ** to_mpf(c.three_pow)
        for a, p in c.gammas:
            val *= mpmath.gamma(to_mpf(a)) ** p
    with mpmath.workdps(dps):
        return +val


def const(rational=1, pi=0, two=0, three=0, gammas=None) -> ExactConst:
    """Shorthand constructor, e.g. ``const(Q(1, 2), gammas={Q(3, 4): -1})``."""
    return ExactConst.make(rational, pi, two, three, gammas)
