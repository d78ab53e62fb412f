"""Fourier coefficients of Siegel theta series and other coefficient sources.

The coefficient of theta^{(n)}(L) at the even matrix T is the representation
number #{C in Z^{m x n} : tC Q C = T}. Vectors of a given norm are listed by
Fincke-Pohst enumeration over an exact rational LDL^t decomposition of Q.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .arith import CharacterData, fmt_rational, parse_rational
from .config import DEFAULT_CAP, CapExceeded, CoverageError, DomainError
from .intmat import is_psd
from .lattice import IntMat, as_gram, level_of, size_reduce


def _ldl(Q: IntMat) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Q[x] = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2."""
    m = len(Q)
    A = [[Fraction(x) for x in row] for row in Q]
    for i in range(m):
        if A[i][i] <= 0:
            raise DomainError("Q must be positive definite")
        for j in range(i + 1, m):
            A[j][i] = A[i][j]
            A[i][j] = A[i][j] / A[i][i]
        for k in range(i + 1, m):
            for l in range(k, m):
                A[k][l] -= A[k][i] * A[i][l]
    d = [A[i][i] for i in range(m)]
    mu = [[A[i][j] if j > i else Fraction(0) for j in range(m)] for i in range(m)]
    return d, mu


@lru_cache(maxsize=None)
def vectors_of_norm(Q: IntMat, t: int, cap: int = DEFAULT_CAP) -> tuple[tuple[int, ...], ...]:
    """All x in Z^m with tx Q x = t (Q positive definite)."""
    m = len(Q)
    if t < 0:
        return ()
    if t == 0:
        return (tuple([0] * m),)
    d, mu = _ldl(Q)
    out: list[tuple[int, ...]] = []
    x = [0] * m
    steps = [0]

    def rec(i: int, budget: Fraction) -> None:
        steps[0] += 1
        if steps[0] > cap:
            raise CapExceeded(f"vector enumeration of norm {t} exceeded cap {cap}")
        if i < 0:
            if budget == 0:
                out.append(tuple(x))
            return
        c = -sum((mu[i][j] * x[j] for j in range(i + 1, m)), Fraction(0))
        bound = budget / d[i]  # (x_i - c)^2 <= bound
        r = math.isqrt(bound.numerator // bound.denominator) + 1
        lo = math.floor(c - r)
        hi = math.ceil(c + r)
        for v in range(lo, hi + 1):
            diff = v - c
            rem = budget - d[i] * diff * diff
            if rem < 0:
                continue
            x[i] = v
            rec(i - 1, rem)
        x[i] = 0

    rec(m - 1, Fraction(t))
    return tuple(sorted(out))


def _to_int_matrix(T: Sequence[Sequence]) -> IntMat | None:
    rows = []
    for row in T:
        r = []
        for v in row:
            f = Fraction(v)
            if f.denominator != 1:
                return None
            r.append(int(f))
        rows.append(tuple(r))
    return tuple(rows)


def repr_count(Q, T: Sequence[Sequence], cap: int = DEFAULT_CAP) -> int:
    """#{C in Z^{m x n} : tC Q C = T}."""
    Qm = as_gram(Q)
    Ti = _to_int_matrix(T)
    if Ti is None:
        return 0
    if not Qm.is_positive_definite():
        raise DomainError("Q must be positive definite")
    return _repr_count(Qm.entries, Ti, cap)


@lru_cache(maxsize=200000)
def _repr_count(Q: IntMat, T: IntMat, cap: int) -> int:
    n = len(T)
    if n == 0:
        return 1
    if Q and all(Q[i][i] % 2 == 0 for i in range(len(Q))):
        if any(T[i][i] % 2 for i in range(n)):
            return 0
    if not is_psd(T):
        return 0
    m = len(Q)
    cands = [vectors_of_norm(Q, T[i][i], cap) for i in range(n)]
    Qx = [
        {x: tuple(sum(Q[a][b] * x[b] for b in range(m)) for a in range(m)) for x in cand}
        for cand in cands
    ]
    count = 0
    chosen: list[tuple[int, ...]] = []

    def rec(i: int) -> None:
        nonlocal count
        if i == n:
            count += 1
            return
        for x in cands[i]:
            ok = True
            for h in range(i):
                qx = Qx[h][chosen[h]]
                if sum(qx[a] * x[a] for a in range(m)) != T[h][i]:
                    ok = False
                    break
            if ok:
                chosen.append(x)
                rec(i + 1)
                chosen.pop()

    rec(0)
    return count


def repr_tuples(Q, T: Sequence[Sequence], cap: int = DEFAULT_CAP) -> list[tuple[tuple[int, ...], ...]]:
    """The tuples (x_1, ..., x_n) counted by repr_count."""
    Qm = as_gram(Q)
    Ti = _to_int_matrix(T)
    if Ti is None or not is_psd(Ti):
        return []
    Q = Qm.entries
    n, m = len(Ti), len(Q)
    cands = [vectors_of_norm(Q, Ti[i][i], cap) for i in range(n)]
    out: list = []
    chosen: list = []

    def rec(i: int) -> None:
        if i == n:
            out.append(tuple(chosen))
            return
        for x in cands[i]:
            if all(
                sum(chosen[h][a] * Q[a][b] * x[b] for a in range(m) for b in range(m)) == Ti[h][i]
                for h in range(i)
            ):
                chosen.append(x)
                rec(i + 1)
                chosen.pop()

    rec(0)
    return out


# -- coefficient sources -----------------------------------------------------------------------


class CoefficientSource:
    """Map from even integral psd Gram matrices to rational coefficients.

    Contract: c(tG T G) = c(T) for unimodular G, and c(T) = 0 when T is not
    even integral or not positive semi-definite.
    """

    k: int
    character: CharacterData
    level: int | None

    def value(self, T: IntMat) -> Fraction:
        raise NotImplementedError

    def __call__(self, T: Sequence[Sequence]) -> Fraction:
        Ti = _to_int_matrix(T)
        if Ti is None:
            return Fraction(0)
        if any(Ti[i][i] % 2 for i in range(len(Ti))) or not is_psd(Ti):
            return Fraction(0)
        return self.value(Ti)


class ThetaSource(CoefficientSource):
    """theta^{(n)}(L) for the even positive definite lattice L of odd rank 2k+1."""

    def __init__(self, Q, cap: int = DEFAULT_CAP):
        Q = as_gram(Q)
        if not Q.even or not Q.is_positive_definite():
            raise DomainError("theta source needs an even positive definite Gram")
        if Q.n % 2 == 0:
            raise DomainError("theta source needs odd rank")
        self.Q = Q
        self.k = (Q.n - 1) // 2
        self.level = level_of(Q)
        self.character = CharacterData(self.k, 2 * Q.det, self.level)
        self.cap = cap

    def value(self, T: IntMat) -> Fraction:
        # representation numbers depend only on the class of T
        return Fraction(_repr_count(self.Q.entries, size_reduce(T), self.cap))

    def __repr__(self) -> str:
        return f"ThetaSource({[list(r) for r in self.Q.entries]})"


class TableSource(CoefficientSource):
    """Finite table of coefficients with a policy for keys outside it."""

    def __init__(self, table: dict, k: int, character: CharacterData | None = None,
                 level: int | None = None, policy: str = "error-outside"):
        if policy not in ("zero-outside", "error-outside"):
            raise DomainError(f"unknown policy {policy}")
        self.table = {tuple(tuple(r) for r in key): Fraction(v) for key, v in table.items()}
        self.k = k
        self.character = character or CharacterData(k)
        self.level = level
        self.policy = policy

    def value(self, T: IntMat) -> Fraction:
        if T in self.table:
            return self.table[T]
        if self.policy == "zero-outside":
            return Fraction(0)
        raise CoverageError(f"coefficient at {[list(r) for r in T]} not in table")


class FunctionSource(CoefficientSource):
    """Source defined by a Python callable on integer Gram tuples."""

    def __init__(self, fn: Callable[[IntMat], Fraction], k: int, character: CharacterData,
                 level: int | None = None):
        self.fn = fn
        self.k = k
        self.character = character
        self.level = level

    def value(self, T: IntMat) -> Fraction:
        return Fraction(self.fn(T))


def even_psd_matrices(n: int, bound: int) -> list[IntMat]:
    """All even integral psd n x n matrices with diagonal entries <= bound."""
    out: list[IntMat] = []
    diag_vals = range(0, bound + 1, 2)
    pos = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def rec_diag(i: int, diag: list[int]) -> None:
        if i == n:
            rec_off(0, diag, {})
            return
        for v in diag_vals:
            rec_diag(i + 1, diag + [v])

    def rec_off(k: int, diag: list[int], off: dict) -> None:
        if k == len(pos):
            M = tuple(
                tuple(diag[i] if i == j else off[(min(i, j), max(i, j))] for j in range(n)) for i in range(n)
            )
            if is_psd(M):
                out.append(M)
            return
        i, j = pos[k]
        b = math.isqrt(diag[i] * diag[j])
        for v in range(-b, b + 1):
            off[(i, j)] = v
            rec_off(k + 1, diag, off)

    rec_diag(0, [])
    return sorted(out)


def coeff_table(Q, n: int, bound: int, cap: int = DEFAULT_CAP) -> dict[IntMat, int]:
    """Representation numbers at every even psd T with max diagonal <= bound."""
    Q = as_gram(Q)
    return {T: _repr_count(Q.entries, T, cap) for T in even_psd_matrices(n, bound)}


def table_source(table: dict, k: int, policy: str = "error-outside", **kw) -> TableSource:
    return TableSource(table, k, policy=policy, **kw)


def table_to_json(table: dict) -> list[dict]:
    return [
        {"gram": [list(r) for r in key], "c": fmt_rational(v)}
        for key, v in sorted(table.items())
    ]


def table_from_json(data: list[dict]) -> dict[IntMat, Fraction]:
    return {tuple(tuple(r) for r in e["gram"]): parse_rational(e["c"]) for e in data}


def cached_coeff_table(Q, n: int, bound: int, cache_dir: str | None) -> dict:
    """coeff_table, persisted as JSON under ``cache_dir`` keyed by (Q, n, bound)."""
    Q = as_gram(Q)
    if cache_dir is None:
        return coeff_table(Q, n, bound)
    key = hashlib.sha256(json.dumps([Q.to_json()["gram"], n, bound]).encode()).hexdigest()[:16]
    path = os.path.join(cache_dir, f"theta_{key}.json")
    if os.path.exists(path):
        with open(path) as fh:
            return table_from_json(json.load(fh))
    table = coeff_table(Q, n, bound)
    os.makedirs(cache_dir, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(table_to_json(table), fh)
    return table
