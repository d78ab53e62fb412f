"""Integral lattices given by Gram matrices, and the sublattices between pL and L/p.

A lattice Lambda is an integer symmetric matrix T (its Gram matrix in a fixed
basis). A lattice Omega with p Lambda <= Omega <= (1/p) Lambda is stored as an
integer matrix H with Omega = (1/p) Lambda H, H in upper-triangular column
Hermite normal form. Then p^2 Z^n <= H Z^n, the Smith divisors of H lie in
{1, p, p^2}, and the Gram matrix of Omega is (1/p^2) tH T H.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .arith import beta, delta
from .config import DEFAULT_CAP, CapExceeded, DomainError
from .ffspace import FpQuadSpace
from .intmat import (
    congruent,
    det,
    hnf_columns,
    inverse,
    is_positive_definite,
    is_psd,
    kernel_mod,
    matmul,
    rref_mod,
    snf_invariants,
    transpose,
)

IntMat = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class GramMatrix:
    entries: IntMat

    def __init__(self, entries: Sequence[Sequence[int]]):
        ent = tuple(tuple(int(x) for x in row) for row in entries)
        n = len(ent)
        if any(len(r) != n for r in ent):
            raise DomainError("Gram matrix must be square")
        if any(ent[i][j] != ent[j][i] for i in range(n) for j in range(n)):
            raise DomainError("Gram matrix must be symmetric")
        object.__setattr__(self, "entries", ent)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def even(self) -> bool:
        return all(self.entries[i][i] % 2 == 0 for i in range(self.n))

    def is_positive_definite(self) -> bool:
        return is_positive_definite(self.entries)

    def is_psd(self) -> bool:
        return is_psd(self.entries)

    @property
    def det(self) -> int:
        return int(det(self.entries))

    def transform(self, G: Sequence[Sequence[int]]) -> "GramMatrix":
        """tG T G."""
        return GramMatrix(congruent(self.entries, G))

    def to_json(self) -> dict:
        return {"n": self.n, "gram": [list(r) for r in self.entries]}

    def __repr__(self) -> str:
        return f"GramMatrix({[list(r) for r in self.entries]})"


def as_gram(T) -> GramMatrix:
    return T if isinstance(T, GramMatrix) else GramMatrix(T)


def parse_gram(text: str) -> GramMatrix:
    """Shorthand: ``2I3`` (scalar times identity), ``diag:a,b,c`` or inline JSON."""
    text = text.strip()
    m = re.fullmatch(r"(-?\d*)I(\d+)", text)
    if m:
        s = int(m.group(1)) if m.group(1) not in ("", "-") else (-1 if m.group(1) == "-" else 1)
        n = int(m.group(2))
        return GramMatrix([[s if i == j else 0 for j in range(n)] for i in range(n)])
    if text.startswith("diag:"):
        vals = [int(x) for x in text[5:].split(",") if x.strip()]
        n = len(vals)
        return GramMatrix([[vals[i] if i == j else 0 for j in range(n)] for i in range(n)])
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"cannot parse Gram matrix {text!r}") from exc
    if isinstance(data, dict):
        data = data["gram"]
    if isinstance(data, int):
        data = [[data]]
    return GramMatrix(data)


# -- basic invariants ------------------------------------------------------------------------


def is_even_integral(M: Sequence[Sequence]) -> bool:
    n = len(M)
    for i in range(n):
        for j in range(n):
            x = Fraction(M[i][j])
            if x.denominator != 1:
                return False
        if Fraction(M[i][i]).numerator % 2:
            return False
    return True


def size_reduce(T: Sequence[Sequence[int]]) -> IntMat:
    """A Gram matrix of the same lattice with |2 T_ij| <= T_jj for i != j.

    Replaces x_i by x_i - q x_j while that shrinks T_ii, then sorts the basis by
    norm. For psd T a zero diagonal entry forces a zero row, so this terminates.
    """
    M = [list(r) for r in T]
    n = len(M)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if i == j or M[j][j] == 0 or 2 * abs(M[i][j]) <= M[j][j]:
                    continue
                q = round(Fraction(M[i][j], M[j][j]))
                for c in range(n):  # column i -= q column j
                    M[c][i] -= q * M[c][j]
                for c in range(n):  # row i -= q row j
                    M[i][c] -= q * M[j][c]
                changed = True
    order = sorted(range(n), key=lambda a: M[a][a])
    return tuple(tuple(M[a][b] for b in order) for a in order)


def discriminant(T) -> int:
    return as_gram(T).det


def level_of(Q) -> int:
    """Least N >= 1 with N Q^{-1} even integral."""
    Q = as_gram(Q)
    if Q.det == 0:
        raise DomainError("level of a singular form")
    Qi = inverse(Q.entries)
    n = Q.n
    N = 1
    for i in range(n):
        for j in range(n):
            den = Fraction(Qi[i][j]).denominator
            N = N * den // _gcd(N, den)
    # now N Q^{-1} is integral; make the diagonal even
    while any((N * Fraction(Qi[i][i])).numerator % 2 for i in range(n)):
        N *= 2
    return N


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def hnf(columns: Sequence[Sequence[int]]) -> IntMat:
    """Canonical upper-triangular column HNF of the lattice spanned by the columns of a matrix."""
    cols = transpose(columns)
    n = len(columns)
    return tuple(tuple(r) for r in hnf_columns(cols, n))


# -- sublattices -------------------------------------------------------------------------------


@dataclass(frozen=True)
class Sublattice:
    """Omega = (1/p) Lambda H for the ambient Gram T of Lambda."""

    ambient: GramMatrix
    p: int
    H: IntMat
    gram: tuple[tuple[Fraction, ...], ...] = field(compare=False)
    type: tuple[int, int, int] = field(compare=False)

    @classmethod
    def from_H(cls, T, p: int, H: Sequence[Sequence[int]]) -> "Sublattice":
        T = as_gram(T)
        Ht = tuple(tuple(int(x) for x in r) for r in H)
        g = congruent(T.entries, Ht)
        gram = tuple(tuple(Fraction(x, p * p) for x in row) for row in g)
        d = snf_invariants(Ht)
        if any(x not in (1, p, p * p) for x in d):
            raise DomainError(f"H={Ht} is not between p Lambda and Lambda/p")
        typ = (d.count(p * p), d.count(p), d.count(1))
        return cls(T, p, Ht, gram, typ)

    @property
    def n(self) -> int:
        return self.ambient.n

    @property
    def r(self) -> int:
        return self.type[0] + self.type[2]

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.gram for x in row)

    def is_even(self) -> bool:
        return is_even_integral(self.gram)

    def integer_gram(self) -> GramMatrix:
        if not self.is_integral():
            raise DomainError("Omega is not integral")
        return GramMatrix([[int(x) for x in row] for row in self.gram])

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "gram": [[str(x) if x.denominator != 1 else int(x) for x in r] for r in self.gram],
            "H": [list(r) for r in self.H],
            "type": list(self.type),
        }


def _in_lattice(v: list[int], cols: list[list[int]], diag: list[int]) -> bool:
    """Whether v (supported on rows < len(cols)) lies in the span of the
    upper-triangular columns ``cols`` with diagonal ``diag``."""
    v = list(v)
    for i in range(len(cols) - 1, -1, -1):
        if v[i] % diag[i]:
            return False
        a = v[i] // diag[i]
        if a:
            c = cols[i]
            for r in range(i + 1):
                v[r] -= a * c[r]
    return True


def sublattices_between(
    T,
    p: int,
    type_filter: tuple[int, int, int] | None = None,
    even_only: bool = False,
    cap: int = DEFAULT_CAP,
) -> list[Sublattice]:
    """Every Omega with p Lambda <= Omega <= (1/p) Lambda, each once.

    ``even_only`` keeps only even integral Omega (pruned during the search);
    ``type_filter`` keeps only Omega of the given type (n0, n1, n2).
    """
    T = as_gram(T)
    Hs = _enumerate_H(T.entries, p, type_filter, even_only, cap)
    return [Sublattice.from_H(T, p, H) for H in Hs]


@lru_cache(maxsize=20000)
def _enumerate_H(T: IntMat, p: int, type_filter, even_only: bool, cap: int) -> tuple:
    n = len(T)
    pp = p * p
    target_exp = None
    if type_filter is not None:
        n0, n1, n2 = type_filter
        if n0 + n1 + n2 != n:
            return ()
        target_exp = 2 * n0 + n1
    results: list = []
    visited = [0]

    def Tc(c: list[int]) -> list[int]:
        return [sum(T[i][k] * c[k] for k in range(n)) for i in range(n)]

    def rec(j: int, cols: list[list[int]], diag: list[int], tcols: list[list[int]], exp: int) -> None:
        visited[0] += 1
        if visited[0] > cap:
            raise CapExceeded(f"sublattice search exceeded cap {cap}")
        if j == n:
            if target_exp is not None and exp != target_exp:
                return
            H = tuple(tuple(cols[c][r] for c in range(n)) for r in range(n))
            if type_filter is not None:
                d = snf_invariants(H)
                if (d.count(pp), d.count(p), d.count(1)) != type_filter:
                    return
            results.append(H)
            return
        remaining = n - j - 1
        for e, dj in ((0, 1), (1, p), (2, pp)):
            if target_exp is not None:
                if exp + e > target_exp or exp + e + 2 * remaining < target_exp:
                    continue
            mult = pp // dj
            ranges = [range(diag[i]) for i in range(j)] if dj != pp else [range(1)] * j
            for head in _product(ranges):
                if dj == p and any(head):
                    if not _in_lattice([mult * h for h in head], cols, diag):
                        continue
                c = list(head) + [dj] + [0] * (n - j - 1)
                tc = Tc(c)
                if even_only:
                    ok = True
                    for i in range(j):
                        if sum(cols[i][k] * tc[k] for k in range(n)) % pp:
                            ok = False
                            break
                    if not ok:
                        continue
                    if sum(c[k] * tc[k] for k in range(n)) % (2 * pp):
                        continue
                rec(j + 1, cols + [c], diag + [dj], tcols + [tc], exp + e)

    rec(0, [], [], [], 0)
    return tuple(results)


def _product(ranges):
    if not ranges:
        yield ()
        return
    import itertools

    yield from itertools.product(*ranges)


def quotient_space(Lam, omega: Sublattice) -> FpQuadSpace:
    """The quadratic space (Lambda cap Omega) / p(Lambda + Omega) over F_p.

    Scaled by p: A = p Lambda cap p Omega = pZ^n cap HZ^n and
    B = p^2 (Lambda + Omega) = p^2 Z^n + pHZ^n; a vector x of A stands for x/p,
    whose norm is tx T x / p^2.
    """
    T = as_gram(Lam).entries
    p = omega.p
    n = len(T)
    H = [list(r) for r in omega.H]
    if not omega.is_integral():
        raise DomainError("quotient space needs Omega integral")
    if n == 0:
        return FpQuadSpace(p, [])
    ker = kernel_mod(H, p, n)
    gensA = [[sum(H[i][k] * y[k] for k in range(n)) for i in range(n)] for y in ker]
    gensA += [[p * H[i][k] for i in range(n)] for k in range(n)]
    gensB = [[p * p if i == k else 0 for i in range(n)] for k in range(n)]
    gensB += [[p * H[i][k] for i in range(n)] for k in range(n)]
    A = hnf_columns(gensA, n)
    B = hnf_columns(gensB, n)
    Mx = matmul(inverse(A), B)
    if any(Fraction(x).denominator != 1 for row in Mx for x in row):
        raise ArithmeticError("p(Lambda+Omega) not inside Lambda cap Omega")
    Mp = [[int(x) % p for x in row] for row in transpose(Mx)]
    _, pivots = rref_mod(Mp, p)
    free = [i for i in range(n) if i not in pivots]
    vecs = [[A[r][i] for r in range(n)] for i in free]
    g = []
    for x in vecs:
        Tx = [sum(T[r][k] * x[k] for k in range(n)) for r in range(n)]
        row = []
        for y in vecs:
            v = Fraction(sum(y[r] * Tx[r] for r in range(n)), p * p)
            if v.denominator != 1:
                raise ArithmeticError("quotient form not integral")
            row.append(int(v))
        g.append(row)
    if len(free) != omega.type[1]:
        raise ArithmeticError("quotient dimension differs from n1")
    return FpQuadSpace(p, g)


# -- neighbors -----------------------------------------------------------------------------------


def neighbor_count_formula(k: int, j: int, p: int) -> int:
    """p^{j(j-1)/2} beta(k, j) delta(k, j)."""
    return int(Fraction(p) ** (j * (j - 1) // 2) * beta(k, j, p) * delta(k, j, p))


def neighbors(L, p: int, j: int, cap: int = DEFAULT_CAP) -> list[GramMatrix]:
    """All p^j-neighbors of L as Gram matrices (in the HNF basis of each K)."""
    return [om.integer_gram() for om in neighbor_sublattices(L, p, j, cap)]


def neighbor_sublattices(L, p: int, j: int, cap: int = DEFAULT_CAP) -> list[Sublattice]:
    L = as_gram(L)
    n = L.n
    dL = L.det
    if (2 * dL) % p == 0:
        raise DomainError(f"p={p} divides 2 disc L")
    if j == 0:
        return [Sublattice.from_H(L, p, [[p if a == b else 0 for b in range(n)] for a in range(n)])]
    if n % 2 == 0 or j > (n - 1) // 2 or j < 0:
        raise DomainError("need odd rank 2k+1 and 0 <= j <= k")
    out = []
    for om in sublattices_between(L, p, (j, n - 2 * j, j), even_only=True, cap=cap):
        if det(om.gram) == dL:
            out.append(om)
    return out
