"""Quadratic spaces over F_p.

A space is stored as its Gram matrix. For odd p the form is x -> tx G x with
G reduced mod p, and spaces are classified by radical dimension, regular rank
and the square class of the regular discriminant.

For p = 2 the Gram matrix is an even integral lift W and the form is
q(x) = tx W x / 2 mod 2. Only counting is offered there; isometry classes are
found by brute force over GL_d(F_2) (see :func:`orbit_key_2`).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .arith import beta, delta, legendre, nonresidue
from .config import DEFAULT_CAP, check_cap

Gram = tuple[tuple[int, ...], ...]


def _norm_gram(gram: Sequence[Sequence[int]], p: int) -> Gram:
    d = len(gram)
    if any(len(row) != d for row in gram):
        raise ValueError("Gram matrix must be square")
    if any(gram[i][j] != gram[j][i] for i in range(d) for j in range(d)):
        raise ValueError("Gram matrix must be symmetric")
    if p == 2:
        if any(gram[i][i] % 2 for i in range(d)):
            raise ValueError("p = 2 spaces need an even integral lift")
        return tuple(
            tuple(gram[i][j] % 4 if i == j else gram[i][j] % 2 for j in range(d)) for i in range(d)
        )
    return tuple(tuple(x % p for x in row) for row in gram)


@dataclass(frozen=True)
class FpQuadSpace:
    p: int
    gram: Gram

    def __init__(self, p: int, gram: Sequence[Sequence[int]]):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "gram", _norm_gram(gram, p))

    @property
    def dim(self) -> int:
        return len(self.gram)

    def perp(self, other: "FpQuadSpace") -> "FpQuadSpace":
        if other.p != self.p:
            raise ValueError("different primes")
        d, e = self.dim, other.dim
        g = [[0] * (d + e) for _ in range(d + e)]
        for i in range(d):
            for j in range(d):
                g[i][j] = self.gram[i][j]
        for i in range(e):
            for j in range(e):
                g[d + i][d + j] = other.gram[i][j]
        return FpQuadSpace(self.p, g)

    def restrict(self, rows: Sequence[Sequence[int]]) -> "FpQuadSpace":
        """Form on the span of the given row vectors (assumed independent)."""
        G = self.gram
        d = self.dim
        GB = [[sum(G[i][k] * b[k] for k in range(d)) for i in range(d)] for b in rows]
        return FpQuadSpace(
            self.p, [[sum(a[i] * gb[i] for i in range(d)) for gb in GB] for a in rows]
        )


def zero_space(p: int, d: int = 0) -> FpQuadSpace:
    return FpQuadSpace(p, [[0] * d for _ in range(d)])


def diag_space(p: int, entries: Sequence[int]) -> FpQuadSpace:
    d = len(entries)
    return FpQuadSpace(p, [[entries[i] if i == j else 0 for j in range(d)] for i in range(d)])


# -- classification (p odd) --------------------------------------------------------


@dataclass(frozen=True, order=True)
class SpaceClass:
    """Isometry class over F_p, p odd: V = V0 + radical of dimension radical_dim."""

    p: int
    regular_rank: int
    disc_is_square: bool
    radical_dim: int

    @property
    def dim(self) -> int:
        return self.regular_rank + self.radical_dim

    def regular(self) -> "SpaceClass":
        return SpaceClass(self.p, self.regular_rank, self.disc_is_square, 0)

    def descriptor(self) -> tuple[str, int, int]:
        """Name of the regular part: ("H", c, 0) for H^c, ("HA", c, 0) for
        H^{c-1} + A, ("Heta", c, e) for H^c + <eta> with (eta/p) = e."""
        t, p = self.regular_rank, self.p
        sq = 1 if self.disc_is_square else -1
        c = t // 2
        if t % 2 == 0:
            return ("H", c, 0) if sq == legendre(-1, p) ** c else ("HA", c, 0)
        return ("Heta", c, sq * legendre(-1, p) ** c)

    def __str__(self) -> str:
        kind, c, e = self.descriptor()
        if kind == "H":
            reg = f"H^{c}"
        elif kind == "HA":
            reg = f"H^{c - 1}+A"
        else:
            reg = f"H^{c}+<{'1' if e == 1 else 'w'}>"
        return f"{reg}+<0>^{self.radical_dim} (p={self.p})"

    def to_json(self) -> dict:
        kind, c, e = self.descriptor()
        return {
            "p": self.p,
            "regular_rank": self.regular_rank,
            "disc_is_square": self.disc_is_square,
            "radical_dim": self.radical_dim,
            "name": str(self),
        }


def diagonalize(gram: Sequence[Sequence[int]], p: int) -> tuple[list[int], int]:
    """Diagonalize a symmetric form mod odd p: (nonzero diagonal entries, radical dim)."""
    A = [[x % p for x in row] for row in gram]
    idx = list(range(len(A)))
    diag: list[int] = []
    while idx:
        piv = next((i for i in idx if A[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in idx for j in idx if i != j and A[i][j]), None)
            if pair is None:
                break
            i, j = pair
            # e_i <- e_i + e_j makes the diagonal entry 2 A_ij != 0.
            for k in range(len(A)):
                A[i][k] = (A[i][k] + A[j][k]) % p
            for k in range(len(A)):
                A[k][i] = (A[k][i] + A[k][j]) % p
            piv = i
        a = A[piv][piv]
        inv = pow(a, -1, p)
        idx.remove(piv)
        col = {k: A[k][piv] for k in idx}
        for k in idx:
            f = (col[k] * inv) % p
            if f:
                for m in idx:
                    A[k][m] = (A[k][m] - f * col[m]) % p
        diag.append(a)
    return diag, len(idx)


def classify(V: FpQuadSpace) -> SpaceClass:
    if V.p == 2:
        raise ValueError("classification needs p odd")
    diag, s = diagonalize(V.gram, V.p)
    disc = 1
    for a in diag:
        disc = disc * a % V.p
    return SpaceClass(V.p, len(diag), legendre(disc, V.p) == 1, s)


def radical_split(V: FpQuadSpace) -> tuple[SpaceClass, int]:
    cls = classify(V)
    return cls.regular(), cls.radical_dim


def enumerate_classes(d: int, p: int) -> list[SpaceClass]:
    """The 2d+1 isometry classes of dimension d."""
    out = []
    for s in range(d, -1, -1):
        t = d - s
        if t == 0:
            out.append(SpaceClass(p, 0, True, s))
        else:
            out.append(SpaceClass(p, t, True, s))
            out.append(SpaceClass(p, t, False, s))
    return out


def class_rep(cls: SpaceClass) -> FpQuadSpace:
    """Canonical Gram diag(1,...,1[,w],0,...,0)."""
    p = cls.p
    entries = [1] * cls.regular_rank + [0] * cls.radical_dim
    if not cls.disc_is_square:
        entries[cls.regular_rank - 1] = nonresidue(p)
    return diag_space(p, entries)


def class_from_descriptor(p: int, kind: str, c: int, eta: int = 1, radical_dim: int = 0) -> SpaceClass:
    """SpaceClass for H^c ("H"), H^{c-1}+A ("HA") or H^c+<eta> ("Heta")."""
    m1 = legendre(-1, p) ** c
    if kind == "H":
        return SpaceClass(p, 2 * c, m1 == 1, radical_dim)
    if kind == "HA":
        return SpaceClass(p, 2 * c, m1 == -1, radical_dim)
    if kind == "Heta":
        return SpaceClass(p, 2 * c + 1, m1 * legendre(eta, p) == 1, radical_dim)
    raise ValueError(f"unknown descriptor {kind}")


# -- p = 2 orbits ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def _gl2(d: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    out = []
    for entries in itertools.product((0, 1), repeat=d * d):
        G = [entries[i * d:(i + 1) * d] for i in range(d)]
        if _rank_mod2(G) == d:
            out.append(tuple(tuple(r) for r in G))
    return tuple(out)


def _rank_mod2(rows: Sequence[Sequence[int]]) -> int:
    from .intmat import rank_mod

    return rank_mod(rows, 2)


def _q2_key(gram: Gram) -> tuple[int, ...]:
    d = len(gram)
    return tuple(gram[i][i] // 2 % 2 for i in range(d)) + tuple(
        gram[i][j] % 2 for i in range(d) for j in range(i + 1, d)
    )


@lru_cache(maxsize=None)
def orbit_key_2(gram: Gram) -> tuple[int, tuple[int, ...]]:
    """Canonical key of the GL_d(F_2)-orbit of the form q(x) = txWx/2 mod 2."""
    d = len(gram)
    best = None
    for G in _gl2(d):
        # G acts on the right: W -> tG W G, computed on the integer lift.
        W2 = [[sum(G[a][i] * gram[a][b] * G[b][j] for a in range(d) for b in range(d)) for j in range(d)] for i in range(d)]
        key = _q2_key(tuple(tuple(r) for r in W2))
        if best is None or key < best:
            best = key
    return (d, best if best is not None else ())


def space_key(V: FpQuadSpace):
    """Isometry-class key: SpaceClass for odd p, orbit key for p = 2."""
    return orbit_key_2(V.gram) if V.p == 2 else classify(V)


# -- subspace enumeration -----------------------------------------------------------------


def subspace_count(d: int, a: int, p: int) -> int:
    return int(beta(d, a, p)) if 0 <= a <= d else 0


def iter_subspaces(d: int, a: int, p: int, cap: int = DEFAULT_CAP) -> Iterator[list[list[int]]]:
    """All a-dimensional subspaces of F_p^d as reduced row-echelon bases."""
    if a < 0 or a > d:
        return
    check_cap(subspace_count(d, a, p), cap, f"subspaces of F_{p}^{d} of dim {a}")
    for pivots in itertools.combinations(range(d), a):
        pset = set(pivots)
        free = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, d) if c not in pset]
        for vals in itertools.product(range(p), repeat=len(free)):
            rows = [[0] * d for _ in range(a)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            yield rows


def subspace_tally(V: FpQuadSpace, a: int, indep_last: bool = False, cap: int = DEFAULT_CAP) -> Counter:
    """Counter of isometry-class keys over all a-dimensional subspaces of V.

    With ``indep_last`` only subspaces meeting the line spanned by the last
    basis vector trivially are counted.
    """
    return Counter(dict(_tally(V.p, V.gram, a, indep_last, cap)))


@lru_cache(maxsize=4096)
def _tally(p: int, gram: Gram, a: int, indep_last: bool, cap: int) -> tuple:
    V = FpQuadSpace(p, gram)
    d = V.dim
    out: Counter = Counter()
    for rows in iter_subspaces(d, a, p, cap):
        if indep_last and _contains_last(rows, d, p):
            continue
        out[space_key(V.restrict(rows))] += 1
    return tuple(sorted(out.items(), key=lambda kv: repr(kv[0])))


def _contains_last(rows: list[list[int]], d: int, p: int) -> bool:
    """Whether e_d lies in the span of the RREF rows."""
    # In RREF, e_d is in the span iff some row equals e_d exactly.
    return any(r[d - 1] == 1 and not any(r[: d - 1]) for r in rows)


def Rstar(V: FpQuadSpace, W: FpQuadSpace, cap: int = DEFAULT_CAP) -> int:
    """Number of subspaces of V isometric to W (subspace enumeration)."""
    if W.dim > V.dim:
        return 0
    return subspace_tally(V, W.dim, cap=cap).get(space_key(W), 0)


def Rstar_class(V: FpQuadSpace, U: SpaceClass, cap: int = DEFAULT_CAP) -> int:
    if U.dim > V.dim:
        return 0
    return subspace_tally(V, U.dim, cap=cap).get(U, 0)


def Rstar_indep(V_plus_delta: FpQuadSpace, U: FpQuadSpace, cap: int = DEFAULT_CAP) -> int:
    """Subspaces isometric to U meeting the marked last line trivially."""
    if U.dim > V_plus_delta.dim:
        return 0
    last = V_plus_delta.gram[-1][-1] if V_plus_delta.dim else None
    if last is None or (last % V_plus_delta.p == 0):
        raise ValueError("marked line must be anisotropic and last")
    return subspace_tally(V_plus_delta, U.dim, indep_last=True, cap=cap).get(space_key(U), 0)


# -- matrix counts ----------------------------------------------------------------------


def _iter_matrices(rows: int, cols: int, p: int, cap: int):
    check_cap(p ** (rows * cols), cap, f"{rows}x{cols} matrices over F_{p}")
    for entries in itertools.product(range(p), repeat=rows * cols):
        yield [entries[i * cols:(i + 1) * cols] for i in range(rows)]


def _form_image(T: FpQuadSpace, C) -> Gram:
    """tC T C as a normalized Gram (C is dim T x dim S)."""
    d = T.dim
    cols = len(C[0]) if d else 0
    G = T.gram
    out = [[sum(C[a][i] * G[a][b] * C[b][j] for a in range(d) for b in range(d)) for j in range(cols)] for i in range(cols)]
    return _norm_gram(out, T.p)


def r_count(T: FpQuadSpace, S: FpQuadSpace, cap: int = DEFAULT_CAP) -> int:
    """#{C : tC T C = S} over F_p."""
    if S.dim == 0:
        return 1
    if T.dim == 0:
        return 0
    return sum(1 for C in _iter_matrices(T.dim, S.dim, T.p, cap) if _form_image(T, C) == S.gram)


def rstar_count(T: FpQuadSpace, S: FpQuadSpace, cap: int = DEFAULT_CAP) -> int:
    """As r_count, restricted to C of full column rank."""
    from .intmat import rank_mod

    if S.dim == 0:
        return 1
    if T.dim < S.dim:
        return 0
    return sum(
        1
        for C in _iter_matrices(T.dim, S.dim, T.p, cap)
        if _form_image(T, C) == S.gram and rank_mod(C, T.p) == S.dim
    )


def ortho_order(T: FpQuadSpace, cap: int = DEFAULT_CAP) -> int:
    return rstar_count(T, T, cap)


# -- closed forms -------------------------------------------------------------------------


def iso_count_closed(cls: SpaceClass, ell: int) -> int:
    """Totally isotropic ell-dimensional subspaces of a regular space."""
    if cls.radical_dim:
        raise ValueError("iso_count_closed expects a regular class")
    if ell < 0:
        return 0
    kind, c, _ = cls.descriptor()
    p = cls.p
    if ell > c:
        return 0
    if kind == "H":
        val = beta(c, ell, p) * delta(c - 1, ell, p)
    elif kind == "HA":
        val = beta(c - 1, ell, p) * delta(c, ell, p) if c >= 1 else (1 if ell == 0 else 0)
    else:
        val = beta(c, ell, p) * delta(c, ell, p)
    return int(val)


def isotropic_count(cls: SpaceClass, a: int) -> int:
    """Totally isotropic a-subspaces of a space with radical: sum over the
    intersection dimension t with the radical."""
    s = cls.radical_dim
    reg = cls.regular()
    p = cls.p
    total = 0
    for t in range(0, min(s, a) + 1):
        total += int(beta(s, t, p)) * p ** ((s - t) * (a - t)) * iso_count_closed(reg, a - t)
    return total


def perp_two(cls: SpaceClass) -> SpaceClass:
    """Class of V + <2> given the class of V."""
    p = cls.p
    disc_sq = cls.disc_is_square == (legendre(2, p) == 1)
    return SpaceClass(p, cls.regular_rank + 1, disc_sq, cls.radical_dim)


def Rstar_perp2_zero(V: FpQuadSpace | SpaceClass, a: int) -> int:
    """R*(V + <2>, <0>^a) by radical splitting and the closed isotropic counts."""
    cls = V if isinstance(V, SpaceClass) else classify(V)
    if a < 0 or a > cls.dim + 1:
        return 0
    return isotropic_count(perp_two(cls), a)
