"""Exact scalars, quadratic symbols and the counting functions mu, delta, beta.

Everything here is exact. Rationals are :class:`fractions.Fraction`; values
involving half-integral powers of a prime live in Q(sqrt p) as
:class:`ExactScalar`; the classical Gauss sum g = sum_x zeta_p^{x^2} is kept
symbolic in :class:`GaussExpr`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

Rational = Fraction
Number = Union[int, Fraction]


def fmt_rational(x: Number) -> str:
    """Serialize a rational as ``"num/den"``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str | int) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(s)


def jacobi_symbol(a: int, m: int) -> int:
    """Jacobi symbol (a/m) for odd m >= 1."""
    if m <= 0 or m % 2 == 0:
        raise ValueError(f"jacobi_symbol needs odd positive modulus, got {m}")
    a %= m
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def legendre(a: int, p: int) -> int:
    """Legendre symbol for an odd prime p."""
    return jacobi_symbol(a, p)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), extending the Jacobi symbol to all n."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * jacobi_symbol(a, n)


def nonresidue(p: int) -> int:
    """Smallest quadratic non-residue mod the odd prime p."""
    for w in range(2, p):
        if legendre(w, p) == -1:
            return w
    raise ValueError(f"no non-residue mod {p}")


# -- mu, delta, beta -----------------------------------------------------------


@lru_cache(maxsize=None)
def mu(m: int, r: int, p: int) -> Fraction:
    """prod_{i<r} (p^{m-i} - 1); equals 1 for r = 0.

    Defined for every integer m; a negative exponent gives a rational.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    out = Fraction(1)
    for i in range(r):
        out *= Fraction(p) ** (m - i) - 1
    return out


@lru_cache(maxsize=None)
def delta(m: int, r: int, p: int) -> Fraction:
    """prod_{i<r} (p^{m-i} + 1); equals 1 for r = 0."""
    if r < 0:
        raise ValueError("r must be non-negative")
    out = Fraction(1)
    for i in range(r):
        out *= Fraction(p) ** (m - i) + 1
    return out


@lru_cache(maxsize=None)
def beta(m: int, r: int, p: int) -> Fraction:
    """mu(m, r) / mu(r, r).

    For m >= r >= 0 this is the number of r-dimensional subspaces of F_p^m.
    For 0 <= m < r the product contains the factor p^0 - 1 and the value is 0.
    """
    return mu(m, r, p) / mu(r, r, p)


# -- Q(sqrt p) ---------------------------------------------------------------------


@dataclass(frozen=True)
class ExactScalar:
    """The number a + b*sqrt(p) with a, b rational."""

    p: int
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @classmethod
    def rational(cls, x: Number, p: int) -> "ExactScalar":
        return cls(p, Fraction(x), Fraction(0))

    @classmethod
    def sqrt_p_power(cls, e: int, p: int) -> "ExactScalar":
        """p^{e/2} for any integer e."""
        if e % 2 == 0:
            return cls(p, Fraction(p) ** (e // 2), 0)
        return cls(p, 0, Fraction(p) ** ((e - 1) // 2))

    def _coerce(self, other: object) -> "ExactScalar":
        if isinstance(other, ExactScalar):
            if other.p != self.p:
                raise ValueError(f"mixing Q(sqrt {self.p}) and Q(sqrt {other.p})")
            return other
        if isinstance(other, (int, Fraction)):
            return ExactScalar(self.p, Fraction(other), 0)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> "ExactScalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ExactScalar(self.p, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(self.p, -self.a, -self.b)

    def __sub__(self, other: object) -> "ExactScalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "ExactScalar":
        return (-self) + other

    def __mul__(self, other: object) -> "ExactScalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ExactScalar(
            self.p,
            self.a * o.a + self.p * self.b * o.b,
            self.a * o.b + self.b * o.a,
        )

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, ExactScalar):
            return (self.p, self.a, self.b) == (other.p, other.a, other.b)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.p, self.a, self.b))

    def is_rational(self) -> bool:
        return self.b == 0

    def to_rational(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is not rational")
        return self.a

    def to_json(self) -> dict:
        return {"a": fmt_rational(self.a), "b": fmt_rational(self.b), "p": self.p}

    @classmethod
    def from_json(cls, obj: dict) -> "ExactScalar":
        return cls(int(obj["p"]), parse_rational(obj["a"]), parse_rational(obj["b"]))

    def __repr__(self) -> str:
        if self.b == 0:
            return f"{self.a}"
        return f"({self.a} + {self.b}*sqrt({self.p}))"


# -- symbolic Gauss sums -----------------------------------------------------------


@dataclass(frozen=True)
class GaussExpr:
    """r0 + r1*g where g is the quadratic Gauss sum mod p, g^2 = (-1/p) p."""

    p: int
    r0: Fraction = Fraction(0)
    r1: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "r0", Fraction(self.r0))
        object.__setattr__(self, "r1", Fraction(self.r1))

    @property
    def g_squared(self) -> int:
        return legendre(-1, self.p) * self.p

    @classmethod
    def g_power(cls, e: int, p: int) -> "GaussExpr":
        """g^e for e >= 0."""
        sq = legendre(-1, p) * p
        if e % 2 == 0:
            return cls(p, Fraction(sq) ** (e // 2), 0)
        return cls(p, 0, Fraction(sq) ** (e // 2))

    def __add__(self, other: "GaussExpr") -> "GaussExpr":
        if isinstance(other, (int, Fraction)):
            other = GaussExpr(self.p, other, 0)
        if other.p != self.p:
            raise ValueError("mixing Gauss sums of different primes")
        return GaussExpr(self.p, self.r0 + other.r0, self.r1 + other.r1)

    __radd__ = __add__

    def __mul__(self, other: object) -> "GaussExpr":
        if isinstance(other, (int, Fraction)):
            return GaussExpr(self.p, self.r0 * other, self.r1 * other)
        if not isinstance(other, GaussExpr):
            return NotImplemented
        if other.p != self.p:
            raise ValueError("mixing Gauss sums of different primes")
        return GaussExpr(
            self.p,
            self.r0 * other.r0 + self.g_squared * self.r1 * other.r1,
            self.r0 * other.r1 + self.r1 * other.r0,
        )

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"r0": fmt_rational(self.r0), "r1": fmt_rational(self.r1), "p": self.p}


# -- characters ------------------------------------------------------------------


@dataclass(frozen=True)
class CharacterData:
    """Real character data attached to a weight k + 1/2 form.

    For a theta series of the even lattice with Gram Q, ``detQ2`` is 2 det Q
    and chi(d) = (2 det Q / |d|). An explicit ``chi_prime`` table overrides
    the symbol evaluation (abstract forms).
    """

    k: int
    detQ2: int | None = None
    level: int | None = None
    chi_prime: tuple[tuple[int, int], ...] = ()

    def chi(self, d: int) -> int:
        if self.detQ2 is None:
            raise ValueError("character has no symbol data")
        return kronecker(self.detQ2, abs(d))


def chi_prime_at(char: CharacterData, p: int) -> int:
    """chi'(p) = chi(p) * ((-1)^{k+1} / p) for an odd prime p."""
    if p == 2:
        raise ValueError("chi' is evaluated at odd primes only")
    if char.level is not None and char.level % p == 0:
        raise ValueError(f"p={p} divides the level {char.level}")
    for q, v in char.chi_prime:
        if q == p:
            return v
    value = char.chi(p) * legendre((-1) ** (char.k + 1), p)
    if value == 0:
        raise ValueError(f"chi'({p}) vanishes; p divides 2 det Q")
    return value
