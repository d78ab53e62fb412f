"""Exact elements of Q(zeta_M) for M a prime power, as reduced coefficient vectors.

The basis is 1, zeta, ..., zeta^{phi(M)-1}; a vector indexed by exponents mod M
is reduced with the relation Phi_M(zeta) = 0, i.e.
zeta^{phi(M)} = -sum_{i=0}^{p-2} zeta^{i M/p}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


def _prime_of(M: int) -> int:
    for q in range(2, M + 1):
        if M % q == 0:
            m = M
            while m % q == 0:
                m //= q
            if m != 1:
                raise ValueError(f"conductor {M} is not a prime power")
            return q
    raise ValueError(f"bad conductor {M}")


def _reduce(M: int, vec: Sequence) -> tuple:
    p = _prime_of(M)
    phi = M - M // p
    step = M // p
    c = list(vec) + [0] * (M - len(vec))
    for e in range(M - 1, phi - 1, -1):
        v = c[e]
        if v:
            c[e] = 0
            for i in range(p - 1):
                c[e - phi + i * step] -= v
    return tuple(c[:phi])


@dataclass(frozen=True)
class CycInt:
    M: int
    coeffs: tuple

    @classmethod
    def from_exponents(cls, M: int, counts: Sequence) -> "CycInt":
        """sum_e counts[e] * zeta_M^e, with e taken mod M."""
        vec = [0] * M
        for e, v in enumerate(counts):
            vec[e % M] += v
        return cls(M, _reduce(M, vec))

    @classmethod
    def rational(cls, M: int, x) -> "CycInt":
        return cls.from_exponents(M, [x])

    @classmethod
    def zeta(cls, M: int, e: int = 1) -> "CycInt":
        vec = [0] * M
        vec[e % M] = 1
        return cls(M, _reduce(M, vec))

    def _check(self, other: "CycInt") -> None:
        if other.M != self.M:
            raise ValueError(f"conductors differ: {self.M} vs {other.M}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycInt.rational(self.M, other)
        self._check(other)
        return CycInt(self.M, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.M, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycInt(self.M, tuple(a * other for a in self.coeffs))
        self._check(other)
        M = self.M
        vec = [0] * M
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        vec[(i + j) % M] += a * b
        return CycInt(M, _reduce(M, vec))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = CycInt.rational(self.M, 1)
        for _ in range(e):
            out = out * self
        return out

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("cyclotomic value is not rational")
        return Fraction(self.coeffs[0])

    def embed(self, M2: int) -> "CycInt":
        """Image under Q(zeta_M) -> Q(zeta_M2), zeta_M -> zeta_M2^{M2/M}."""
        if M2 % self.M:
            raise ValueError("target conductor must be a multiple")
        f = M2 // self.M
        vec = [0] * M2
        for i, a in enumerate(self.coeffs):
            vec[(i * f) % M2] += a
        return CycInt(M2, _reduce(M2, vec))

    def to_json(self) -> dict:
        return {"M": self.M, "coeffs": [str(Fraction(a)) for a in self.coeffs]}
