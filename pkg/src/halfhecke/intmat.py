"""Small exact matrix routines over Z, Q and F_p.

Matrices are lists of rows (lists of ints or Fractions). The sizes handled by
this package are tiny (n <= 6), so clarity wins over asymptotics.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list]


def to_lists(M: Sequence[Sequence]) -> Matrix:
    return [list(row) for row in M]


def to_tuples(M: Sequence[Sequence]) -> tuple[tuple, ...]:
    return tuple(tuple(row) for row in M)


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(n: int, m: int | None = None) -> Matrix:
    return [[0] * (n if m is None else m) for _ in range(n)]


def transpose(M: Sequence[Sequence]) -> Matrix:
    if not M:
        return []
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    if not A:
        return []
    Bt = list(zip(*B)) if B else []
    if not Bt:
        return [[] for _ in A]
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def congruent(T: Sequence[Sequence], H: Sequence[Sequence]) -> Matrix:
    """tH T H."""
    return matmul(transpose(H), matmul(T, H))


def column(M: Sequence[Sequence], j: int) -> list:
    return [row[j] for row in M]


def from_columns(cols: Sequence[Sequence], n: int) -> Matrix:
    return [[c[i] for c in cols] for i in range(n)]


def det(M: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-free elimination (exact for int or Fraction)."""
    n = len(M)
    if n == 0:
        return Fraction(1)
    A = [[Fraction(x) for x in row] for row in M]
    sign = 1
    out = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if A[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            A[i], A[piv] = A[piv], A[i]
            sign = -sign
        out *= A[i][i]
        for r in range(i + 1, n):
            f = A[r][i] / A[i][i]
            if f:
                for c in range(i, n):
                    A[r][c] -= f * A[i][c]
    return sign * out


def inverse(M: Sequence[Sequence]) -> Matrix:
    """Exact inverse over Q."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for i in range(n):
        piv = next((r for r in range(i, n) if A[r][i] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        A[i], A[piv] = A[piv], A[i]
        inv = 1 / A[i][i]
        A[i] = [x * inv for x in A[i]]
        for r in range(n):
            if r != i and A[r][i] != 0:
                f = A[r][i]
                A[r] = [x - f * y for x, y in zip(A[r], A[i])]
    return [row[n:] for row in A]


def is_psd(M: Sequence[Sequence]) -> bool:
    """Exact positive semi-definiteness test for a symmetric rational matrix."""
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    for i in range(n):
        if A[i][i] < 0:
            return False
        if A[i][i] == 0:
            if any(A[i][c] != 0 for c in range(i, n)):
                return False
            continue
        for r in range(i + 1, n):
            f = A[r][i] / A[i][i]
            if f:
                for c in range(i, n):
                    A[r][c] -= f * A[i][c]
    return True


def is_positive_definite(M: Sequence[Sequence]) -> bool:
    """Leading principal minors all positive."""
    return all(det([row[:k] for row in M[:k]]) > 0 for k in range(1, len(M) + 1))


# -- Hermite and Smith forms ----------------------------------------------------------


def hnf_columns(gens: Sequence[Sequence[int]], n: int) -> Matrix:
    """Upper-triangular column HNF of the full-rank lattice spanned by ``gens``.

    ``gens`` is a list of integer column vectors of length n. The result H has
    positive diagonal, zeros below it, and entries right of the diagonal in
    row i reduced into [0, H[i][i]).
    """
    active = [list(g) for g in gens if any(g)]
    cols: list[list[int] | None] = [None] * n
    for i in range(n - 1, -1, -1):
        while True:
            nz = [c for c in active if c[i] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda c: abs(c[i]))
            piv = nz[0]
            for c in nz[1:]:
                q = c[i] // piv[i]
                for r in range(i + 1):
                    c[r] -= q * piv[r]
            active = [c for c in active if any(c)]
        nz = [c for c in active if c[i] != 0]
        if not nz:
            raise ValueError("generators do not span a full-rank lattice")
        piv = nz[0]
        if piv[i] < 0:
            piv = [-x for x in piv]
        active = [c for c in active if c is not nz[0]]
        cols[i] = piv
    H = from_columns(cols, n)  # type: ignore[arg-type]
    for j in range(n):
        for i in range(j - 1, -1, -1):
            q = H[i][j] // H[i][i]
            if q:
                for r in range(i + 1):
                    H[r][j] -= q * H[r][i]
    return H


def smith_form(M: Sequence[Sequence[int]]) -> tuple[list[int], Matrix, Matrix, Matrix]:
    """Smith normal form with transforms.

    Returns (d, P, Pinv, Q) with P*M*Q = S, where S is the rectangular diagonal
    matrix with diagonal d (d_1 | d_2 | ..., non-negative; trailing zeros allowed),
    P and Q unimodular and Pinv = P^{-1}.
    """
    m = len(M)
    k = len(M[0]) if m else 0
    A = [list(map(int, row)) for row in M]
    P = identity(m)
    Pinv = identity(m)
    Q = identity(k)

    def swap_rows(i: int, j: int) -> None:
        A[i], A[j] = A[j], A[i]
        P[i], P[j] = P[j], P[i]
        for row in Pinv:
            row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, c: int) -> None:  # row_dst += c row_src
        A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
        P[dst] = [x + c * y for x, y in zip(P[dst], P[src])]
        for row in Pinv:  # column_src -= c column_dst
            row[src] -= c * row[dst]

    def neg_row(i: int) -> None:
        A[i] = [-x for x in A[i]]
        P[i] = [-x for x in P[i]]
        for row in Pinv:
            row[i] = -row[i]

    def swap_cols(i: int, j: int) -> None:
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in Q:
            row[i], row[j] = row[j], row[i]

    def add_col(dst: int, src: int, c: int) -> None:
        for row in A:
            row[dst] += c * row[src]
        for row in Q:
            row[dst] += c * row[src]

    t = 0
    while t < min(m, k):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, k) if A[i][j] != 0]
        if not entries:
            break
        _, i0, j0 = min(entries)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            changed = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(i, t, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, k):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(j, t, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, k) if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            neg_row(t)
        t += 1
    d = [A[i][i] for i in range(min(m, k))]
    return d, P, Pinv, Q


def snf_invariants(H: Sequence[Sequence[int]]) -> list[int]:
    d, *_ = smith_form(H)
    return d


# -- linear algebra over F_p ------------------------------------------------------------


def rref_mod(M: Sequence[Sequence[int]], p: int) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over F_p and the pivot columns."""
    A = [[x % p for x in row] for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [(x * inv) % p for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def rank_mod(M: Sequence[Sequence[int]], p: int) -> int:
    if not M or not M[0]:
        return 0
    return len(rref_mod(M, p)[1])


def kernel_mod(M: Sequence[Sequence[int]], p: int, ncols: int | None = None) -> list[list[int]]:
    """Basis of {x : M x = 0 mod p} as integer vectors in [0, p)."""
    cols = ncols if ncols is not None else (len(M[0]) if M else 0)
    if not M:
        return [[int(i == j) for i in range(cols)] for j in range(cols)]
    R, pivots = rref_mod(M, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * cols
        v[f] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-R[r][f]) % p
        basis.append(v)
    return basis
