"""Exact integer and rational arithmetic primitives.

Rationals are plain ``fractions.Fraction`` values (always stored reduced,
positive denominator, structural equality), parsed from and emitted in the
shared ``a/b`` text format.  On top of that this module provides certified
primality, deterministic factorization with a configurable bit bound,
p-adic valuations on the rationals, Legendre symbols (classical and the
unit-part variant for arbitrary nonzero rationals), and four-squares
decompositions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import FactorizationLimitExceeded

__all__ = [
    "Place",
    "Factorization",
    "parse_rational",
    "format_rational",
    "is_prime",
    "factor",
    "factor_rational",
    "valuation",
    "unit_part",
    "unit_residue",
    "legendre",
    "generalized_legendre",
    "four_squares",
    "FACTOR_BIT_LIMIT",
]

#: Default cap on |n| for factor(); beyond it FactorizationLimitExceeded.
FACTOR_BIT_LIMIT = 256

_TRIAL_LIMIT = 10**6

# Deterministic Miller-Rabin base set, valid for all n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def parse_rational(text: str) -> Fraction:
    """Parse the shared rational text format "a/b" or "a".

    A leading ASCII minus is accepted; the result is stored reduced.
    """
    return Fraction(text.strip().replace("−", "-"))


def format_rational(x: Fraction | int) -> str:
    """Emit a rational in lowest terms as "a/b", or "a" for integers."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (exact below 3.3e24)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Place:
    """A rational prime or the infinite place.

    ``prime`` is None for the infinite place.  Finite places are
    primality-certified on construction.
    """

    prime: int | None

    def __post_init__(self) -> None:
        if self.prime is not None and not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")

    @staticmethod
    def finite(p: int) -> "Place":
        return Place(p)

    @staticmethod
    def infinite() -> "Place":
        return Place(None)

    @property
    def is_finite(self) -> bool:
        return self.prime is not None

    def __str__(self) -> str:
        return "inf" if self.prime is None else str(self.prime)


INFINITE_PLACE = Place(None)


def parse_place(text: str) -> Place:
    """Parse a place: a decimal prime or the literal "inf"."""
    text = text.strip()
    if text in ("inf", "infinity", "oo"):
        return INFINITE_PLACE
    return Place(int(text))


@dataclass(frozen=True)
class Factorization:
    """Sign and sorted (prime, exponent) pairs; exponents may be negative."""

    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> Fraction:
        out = Fraction(self.sign)
        for p, e in self.factors:
            out *= Fraction(p) ** e
        return out

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0


def _pollard_rho(n: int) -> int:
    """Brent-cycle rho with a deterministic parameter schedule.

    Returns a nontrivial factor of composite odd n.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 1000):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed on {n}")  # unreachable in practice


def factor(n: int, bit_limit: int = FACTOR_BIT_LIMIT) -> Factorization:
    """Complete prime factorization of a nonzero integer.

    Trial division up to 10**6, then deterministic Pollard rho on what
    remains.  Raises FactorizationLimitExceeded when |n| needs more than
    ``bit_limit`` bits.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    if abs(n).bit_length() > bit_limit:
        raise FactorizationLimitExceeded(
            f"|n| has {abs(n).bit_length()} bits > limit {bit_limit}"
        )
    sign = 1 if n > 0 else -1
    n = abs(n)
    found: dict[int, int] = {}

    def _record(p: int, e: int = 1) -> None:
        found[p] = found.get(p, 0) + e

    for p in (2, 3, 5):
        while n % p == 0:
            n //= p
            _record(p)
    d = 7
    # 2/4-step wheel over numbers coprime to 2,3,5 would be tidier; a plain
    # odd stride is fast enough at this scale.
    while d <= _TRIAL_LIMIT and d * d <= n:
        while n % d == 0:
            n //= d
            _record(d)
        d += 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            _record(m)
            continue
        g = _pollard_rho(m)
        stack.append(g)
        stack.append(m // g)
    return Factorization(sign, tuple(sorted(found.items())))


def factor_rational(x: Fraction | int, bit_limit: int = FACTOR_BIT_LIMIT) -> Factorization:
    """Factorization of a nonzero rational; denominator primes get negative exponents."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("cannot factor 0")
    num = factor(x.numerator, bit_limit)
    den = factor(x.denominator, bit_limit)
    exps: dict[int, int] = dict(num.factors)
    for p, e in den.factors:
        exps[p] = exps.get(p, 0) - e
    factors = tuple(sorted((p, e) for p, e in exps.items() if e != 0))
    return Factorization(num.sign, factors)


def valuation(x: Fraction | int, p: int) -> int | float:
    """p-adic valuation of a rational: the exponent of p, with v(0) = +inf.

    Computed by dividing out p; never factors, so it is total regardless of
    the factorization bit bound.
    """
    x = Fraction(x)
    if x == 0:
        return math.inf
    v = 0
    num = x.numerator
    while num % p == 0:
        num //= p
        v += 1
    if v:
        return v
    den = x.denominator
    while den % p == 0:
        den //= p
        v -= 1
    return v


def unit_part(x: Fraction | int, p: int) -> Fraction:
    """x * p**(-v_p(x)): the p-unit left after stripping all powers of p."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("0 has no unit part")
    v = valuation(x, p)
    return x * Fraction(p) ** (-v)


def unit_residue(x: Fraction | int, p: int, modulus: int) -> int:
    """Residue mod ``modulus`` of a rational whose denominator is coprime to it."""
    x = Fraction(x)
    inv = pow(x.denominator, -1, modulus)
    return x.numerator * inv % modulus


def legendre(a: int, l: int) -> int:
    """Legendre symbol (a|l) for an odd prime l, via Euler's criterion.

    Returns 0 iff l divides a, else +1 for quadratic residues, -1 otherwise.
    """
    if l == 2 or not is_prime(l):
        raise ValueError(f"{l} is not an odd prime")
    a %= l
    if a == 0:
        return 0
    r = pow(a, (l - 1) // 2, l)
    return -1 if r == l - 1 else 1


def generalized_legendre(x: Fraction | int, l: int) -> int:
    """Legendre symbol of the l-unit part of a nonzero rational; never 0."""
    u = unit_part(x, l)
    return legendre(unit_residue(u, l, l), l)


def four_squares(n: int) -> tuple[int, int, int, int]:
    """Decompose n >= 0 as x1^2+x2^2+x3^2+x4^2 with x1 >= x2 >= x3 >= x4 >= 0.

    Descending greedy search with backtracking; returns the
    lexicographically largest nonincreasing decomposition.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")

    def _search(rem: int, k: int, cap: int) -> tuple[int, ...] | None:
        if k == 0:
            return () if rem == 0 else None
        hi = min(cap, math.isqrt(rem))
        # Largest remaining square first; prune when even k copies of x
        # cannot reach rem.
        for x in range(hi, -1, -1):
            if k * x * x < rem:
                break
            rest = _search(rem - x * x, k - 1, x)
            if rest is not None:
                return (x, *rest)
        return None

    out = _search(n, 4, math.isqrt(n))
    assert out is not None  # Lagrange: always solvable
    return out  # type: ignore[return-value]
