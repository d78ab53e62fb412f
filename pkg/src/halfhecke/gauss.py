"""Exponential sums over symmetric matrices: oracles and closed forms.

Every oracle here is a literal sum over all (or all invertible) symmetric
matrices Y mod M, accumulated as an exponent histogram and turned into an
exact :class:`CycInt`. The enumeration is vectorised with numpy over integer
arrays; no floating point is involved.

Conventions: e{X} = exp(pi i tr X). For an even integral T,
e{YT/M} = zeta_M^{tr(YT)/2}, and tr(YT)/2 = sum_i (T_ii/2) Y_ii + sum_{i<j} T_ij Y_ij.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .arith import GaussExpr, legendre
from .config import DEFAULT_CAP, DomainError, check_cap
from .cyclotomic import CycInt
from .ffspace import FpQuadSpace, SpaceClass, classify, space_key

_CHUNK = 1 << 19


def _sym_positions(d: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(d) for j in range(i, d)]


def _chunks(d: int, M: int, cap: int) -> Iterator[dict]:
    """Yield dicts (i, j) -> int64 array covering all symmetric Y mod M."""
    pos = _sym_positions(d)
    N = len(pos)
    check_cap(M**N, cap, f"symmetric {d}x{d} matrices mod {M}")
    t = 0
    while t < N and M ** (t + 1) <= _CHUNK:
        t += 1
    tail = pos[N - t:]
    head = pos[: N - t]
    if t:
        grids = np.indices((M,) * t).reshape(t, -1).astype(np.int64)
    else:
        grids = np.zeros((0, 1), dtype=np.int64)
    size = grids.shape[1]
    for vals in itertools.product(range(M), repeat=len(head)):
        entries = {}
        for (ij, v) in zip(head, vals):
            entries[ij] = np.full(size, v, dtype=np.int64)
        for k, ij in enumerate(tail):
            entries[ij] = grids[k]
        yield entries


def _det_mod(entries: dict, d: int, p: int) -> np.ndarray:
    """Vectorised determinant mod p by Laplace expansion with shared minors."""
    def e(i: int, j: int) -> np.ndarray:
        return entries[(i, j)] if i <= j else entries[(j, i)]

    size = next(iter(entries.values())).shape[0] if entries else 1
    if d == 0:
        return np.ones(size, dtype=np.int64)
    # minors[cols] = det of rows (d - len(cols))..(d-1) restricted to cols
    minors = {(c,): e(d - 1, c) % p for c in range(d)}
    for k in range(d - 2, -1, -1):
        nxt = {}
        for cols in itertools.combinations(range(d), d - k):
            acc = np.zeros(size, dtype=np.int64)
            for pos, c in enumerate(cols):
                rest = cols[:pos] + cols[pos + 1:]
                term = e(k, c) * minors[rest]
                acc = acc - term if pos % 2 else acc + term
            nxt[cols] = acc % p
        minors = nxt
    return minors[tuple(range(d))]


def _legendre_table(p: int) -> np.ndarray:
    return np.array([legendre(x, p) for x in range(p)], dtype=np.int64)


def _half_trace_coeffs(T: Sequence[Sequence[int]]) -> dict:
    """Coefficients c_ij with tr(YT)/2 = sum c_ij Y_ij over i <= j."""
    d = len(T)
    out = {}
    for i, j in _sym_positions(d):
        if i == j:
            if T[i][i] % 2:
                raise DomainError("T must be even integral")
            out[(i, j)] = T[i][i] // 2
        else:
            out[(i, j)] = T[i][j]
    return out


def _histogram(T: Sequence[Sequence[int]], M: int, p: int, weight: str | None, cap: int) -> np.ndarray:
    """hist[c, w+1] = #{Y : tr(YT)/2 = c mod M, weight(Y) = w}.

    weight is None (w = 1 always), "legendre" (w = (det Y/p)) or "invertible"
    (w = 1 if det Y is a unit mod p, else 0).
    """
    d = len(T)
    coeff = _half_trace_coeffs(T)
    hist = np.zeros((M, 3), dtype=np.int64)
    leg = _legendre_table(p) if weight == "legendre" else None
    if d == 0:
        hist[0, 2] = 1
        return hist
    for entries in _chunks(d, M, cap):
        expo = np.zeros_like(next(iter(entries.values())))
        for ij, c in coeff.items():
            if c % M:
                expo = (expo + (c % M) * entries[ij]) % M
        if weight is None:
            w = np.ones_like(expo)
        else:
            dm = _det_mod(entries, d, p)
            if weight == "legendre":
                w = leg[dm]
            elif weight == "invertible":
                w = (dm != 0).astype(np.int64)
            else:
                raise ValueError(f"unknown weight {weight}")
        hist += np.bincount(expo * 3 + (w + 1), minlength=3 * M).reshape(M, 3)
    return hist


def e_sum_oracle(T: Sequence[Sequence[int]], M: int, weight: str | None = None, cap: int = DEFAULT_CAP) -> CycInt:
    """sum over symmetric Y mod M of weight(Y) * zeta_M^{tr(YT)/2}."""
    p = _prime_base(M)
    hist = _histogram(T, M, p, weight, cap)
    counts = [int(hist[c, 2]) - int(hist[c, 0]) for c in range(M)]
    return CycInt.from_exponents(M, counts)


def _prime_base(M: int) -> int:
    for q in range(2, M + 1):
        if M % q == 0:
            return q
    raise ValueError(M)


def even_lift(V: FpQuadSpace) -> list[list[int]]:
    """An even integral matrix congruent to the Gram of V mod p (p odd)."""
    p = V.p
    if p == 2:
        return [list(r) for r in V.gram]
    return [[(x + p if (i == j and x % 2) else x) for j, x in enumerate(row)] for i, row in enumerate(V.gram)]


# -- classical Gauss sum ----------------------------------------------------------------


@lru_cache(maxsize=None)
def g1_cyclotomic(p: int) -> CycInt:
    """G_1(p) = sum_{g mod p} zeta_p^{g^2}."""
    counts = [0] * p
    for g in range(p):
        counts[g * g % p] += 1
    return CycInt.from_exponents(p, counts)


def g1_square_identity(p: int) -> Fraction:
    """G_1(p)^2 computed in Q(zeta_p); equals (-1/p) p."""
    g = g1_cyclotomic(p)
    return (g * g).rational_value()


def gauss_expr_to_cyc(x: GaussExpr, M: int) -> CycInt:
    g = g1_cyclotomic(x.p).embed(M)
    return CycInt.rational(M, x.r0) + g * x.r1


# -- G_Y(D) -------------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockShape:
    r0: int
    r1: int
    r2: int
    r3: int

    def __post_init__(self) -> None:
        if min(self.r0, self.r1, self.r2, self.r3) < 0:
            raise ValueError("block sizes must be non-negative")

    @property
    def n(self) -> int:
        return self.r0 + self.r1 + self.r2 + self.r3

    def D(self, p: int) -> list[int]:
        return [1] * self.r0 + [p] * self.r1 + [p * p] * self.r2 + [1] * self.r3


def gyd_closed(shape: BlockShape, det_y1: int, p: int) -> GaussExpr:
    """p^{r2} (det Y1 / p) G_1(p)^{r1}."""
    if p == 2:
        raise DomainError("G_Y(D) closed form needs p odd")
    if shape.r1 == 0:
        det_y1 = 1
    s = legendre(det_y1, p)
    if s == 0:
        raise DomainError("det Y1 must be a unit mod p")
    return GaussExpr.g_power(shape.r1, p) * (s * p**shape.r2)


def block_Y(shape: BlockShape, p: int, Y0, Y1, Y2, Y3) -> list[list[int]]:
    """Assemble the block matrix Y with D = diag(I, pI, p^2 I, I)."""
    r0, r1, r2, r3 = shape.r0, shape.r1, shape.r2, shape.r3
    n = shape.n
    Y = [[0] * n for _ in range(n)]
    o1, o2, o3 = r0, r0 + r1, r0 + r1 + r2
    for i in range(r0):
        for j in range(r0):
            Y[i][j] = Y0[i][j]
        for j in range(r1):
            Y[i][o1 + j] = p * Y2[i][j]
            Y[o1 + j][i] = Y2[i][j]
        for j in range(r3):
            Y[i][o3 + j] = Y3[i][j]
            Y[o3 + j][i] = Y3[i][j]
    for i in range(r1):
        for j in range(r1):
            Y[o1 + i][o1 + j] = Y1[i][j]
    for i in range(r2):
        Y[o2 + i][o2 + i] = 1
    return Y


def gyd_oracle(Y: Sequence[Sequence[int]], D: Sequence[int], cap: int = DEFAULT_CAP,
               p: int | None = None) -> CycInt:
    """sum over G in Z^{1,n} / Z^{1,n} D of exp(2 pi i G Y D^{-1} tG), D diagonal.

    The value lies in Q(zeta_{p^2}) where p^2 is the largest diagonal entry of D
    (which must be 1, p or p^2 for one odd prime p); pass ``p`` when D = I.
    """
    n = len(D)
    primes = {_prime_base(d) for d in D if d > 1}
    if len(primes) > 1:
        raise DomainError("D must involve a single prime")
    if primes:
        q = primes.pop()
        if p is not None and p != q:
            raise DomainError(f"D involves {q}, not p={p}")
        p = q
    elif p is None:
        raise DomainError("D = I: the prime must be given")
    M = p * p
    if any(d not in (1, p, M) for d in D):
        raise DomainError("diagonal of D must lie in {1, p, p^2}")
    for i in range(n):
        for j in range(n):
            if Fraction(Y[i][j], D[j]) != Fraction(Y[j][i], D[i]):
                raise DomainError("Y D^{-1} must be symmetric")
    from .intmat import rank_mod

    if rank_mod([list(Y[i]) + [D[i] if j == i else 0 for j in range(n)] for i in range(n)], p) < n:
        raise DomainError("(tY, D) is not a coprime pair")
    size = 1
    for d in D:
        size *= d
    check_cap(size, cap, "G_Y(D) coset enumeration")
    counts = [0] * M
    ranges = [range(d) for d in D]
    for g in itertools.product(*ranges):
        x = 0
        for i in range(n):
            if g[i]:
                for j in range(n):
                    if g[j]:
                        x += g[i] * Y[i][j] * g[j] * (M // D[j])
        counts[x % M] += 1
    return CycInt.from_exponents(M, counts)


# -- twisted sums --------------------------------------------------------------------------


def gstar_oracle(V: FpQuadSpace, cap: int = DEFAULT_CAP) -> CycInt:
    """G*(V) = sum_Y (det Y / p) e{YT/p}."""
    return e_sum_oracle(even_lift(V), V.p, "legendre", cap)


def gtilde_oracle(V: FpQuadSpace, cap: int = DEFAULT_CAP) -> Fraction:
    """p^{-d} G_1(p)^d G*(V), certified rational."""
    p, d = V.p, V.dim
    if d == 0:
        return Fraction(1)
    val = g1_cyclotomic(p) ** d * gstar_oracle(V, cap)
    if not val.is_rational():
        raise ArithmeticError(f"twisted Gauss sum of {V} is not rational: {val}")
    return val.rational_value() / p**d


def gtilde_closed(cls: SpaceClass) -> Fraction:
    """Closed form of the normalized twisted Gauss sum of a class (p odd)."""
    p, t, s = cls.p, cls.regular_rank, cls.radical_dim
    c = t // 2
    if t % 2 == 0:
        if s % 2:
            return Fraction(0)
        x = s // 2
        return (-1) ** c * Fraction(p) ** ((c + x) ** 2 - (c + x)) * _odd_prod(x, p)
    # regular part H^c + <2 eta>: disc = (-1)^c 2 eta
    disc_sign = 1 if cls.disc_is_square else -1
    minus_eta = legendre(-2 * (-1) ** c, p) * disc_sign
    if s % 2 == 0:
        x = s // 2
        return (-1) ** c * minus_eta * Fraction(p) ** ((c + x) ** 2 + x) * _odd_prod(x, p)
    x = (s + 1) // 2
    return (-1) ** c * Fraction(p) ** ((c + x) ** 2 - (c + x)) * _odd_prod(x, p)


def _odd_prod(x: int, p: int) -> int:
    out = 1
    for i in range(1, x + 1):
        out *= p ** (2 * i - 1) - 1
    return out


def gtilde(V: FpQuadSpace | SpaceClass) -> Fraction:
    cls = V if isinstance(V, SpaceClass) else classify(V)
    return gtilde_closed(cls)


# -- alpha sums --------------------------------------------------------------------------------


def alpha_closed(W: FpQuadSpace) -> int:
    """p^{d(d+1)/2} if the form of W vanishes identically, else 0."""
    d = W.dim
    zero = all(x == 0 for row in W.gram for x in row)
    return W.p ** (d * (d + 1) // 2) if zero else 0


def alpha_oracle(W: FpQuadSpace, cap: int = DEFAULT_CAP) -> Fraction:
    """sum over all symmetric Y mod p of e{WY/p}."""
    return e_sum_oracle(even_lift(W), W.p, None, cap).rational_value()


def alpha_prime_cyclotomic(U: FpQuadSpace, cap: int = DEFAULT_CAP) -> Fraction:
    """sum over invertible symmetric Y mod p of e{UY/p}, summed in Q(zeta_p)."""
    if U.dim == 0:
        return Fraction(1)
    val = e_sum_oracle(even_lift(U), U.p, "invertible", cap)
    return val.rational_value()


@lru_cache(maxsize=None)
def _alpha_prime_cached(p: int, gram: tuple, cap: int) -> int:
    U = FpQuadSpace(p, gram)
    if U.dim == 0:
        return 1
    hist = _histogram(even_lift(U), p, p, "invertible", cap)
    n0 = int(hist[0, 2])
    n1 = int(hist[1, 2])
    return n0 - n1


def alpha_prime(U: FpQuadSpace, cap: int = DEFAULT_CAP) -> int:
    """alpha'(U) by residue counting: N_0 - N_1 (Galois invariance of the sum)."""
    return _alpha_prime_cached(U.p, U.gram, cap)


def alpha_prime_class(key, p: int, rep: FpQuadSpace) -> int:
    """alpha' of an isometry class given by a representative (cached by key)."""
    return _alpha_prime_by_key(key, p, rep.gram)


@lru_cache(maxsize=None)
def _alpha_prime_by_key(key, p: int, gram: tuple) -> int:
    return alpha_prime(FpQuadSpace(p, gram))


def class_key(V: FpQuadSpace):
    return space_key(V)
