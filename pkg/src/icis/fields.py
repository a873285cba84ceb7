"""Coefficient fields for the jet linear algebra: Q exactly, or Z/p for large primes."""
from __future__ import annotations

from math import isqrt
from typing import Optional

from flint import nmod
from gmpy2 import mpq

# fixed primes keep modular runs deterministic
PRIMES = (2305843009213693951, 4611686018427387847, 9223372036854775783)


class BadPrimeError(ZeroDivisionError):
    """A denominator of the input vanishes modulo the chosen prime."""


class RationalField:
    modulus: Optional[int] = None

    def __call__(self, c):
        return mpq(c)

    def lift(self, x) -> mpq:
        return mpq(x)

    def __repr__(self) -> str:
        return "QQ"


class PrimeField:
    def __init__(self, p: int):
        self.modulus = p

    def __call__(self, c):
        if isinstance(c, nmod):
            return c
        c = mpq(c)
        den = int(c.denominator) % self.modulus
        if not den:
            raise BadPrimeError(f"denominator {c.denominator} vanishes mod {self.modulus}")
        return nmod(int(c.numerator), self.modulus) / den

    def lift(self, x) -> mpq:
        """Rational reconstruction; raises ValueError when no small fraction fits."""
        return rational_reconstruction(int(x), self.modulus)

    def __repr__(self) -> str:
        return f"GF({self.modulus})"


QQ = RationalField()


def rational_reconstruction(a: int, m: int) -> mpq:
    """The fraction n/d with |n|, d <= sqrt(m/2) and n = a*d mod m."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        raise ValueError(f"{a} mod {m} has no small rational preimage")
    return mpq(r1, s1)
