"""Even Jacobi forms of index 1 at the level of Fourier coefficients.

A coefficient is indexed by (T, R): the bordered matrix [[T, tR], [R, 2]] is
the Gram matrix of Lambda + Delta in the basis (x_1, ..., x_n, w), with
Delta = Zw of norm 2. For an even form, c(T, 2R) = c(T - 2 tR R, 0), so every
coefficient is read off from the orthogonal indices Lambda + Delta.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .arith import ExactScalar, beta, fmt_rational, parse_rational
from .config import DEFAULT_CAP, CoverageError, DomainError, Report
from .ffspace import FpQuadSpace, iter_subspaces, _contains_last
from .gauss import alpha_prime
from .hecke import (
    HeckeParams,
    _even_H,
    _split_gram,
    apply_Tj,
    apply_Ttilde,
    params_for,
)
from .intmat import congruent, is_psd, matmul
from .lattice import IntMat, _enumerate_H, as_gram, is_even_integral
from .theta import CoefficientSource

Key = tuple[IntMat, tuple[int, ...]]


def bordered(T: Sequence[Sequence[int]], R: Sequence[int]) -> list[list[int]]:
    n = len(T)
    M = [list(T[i]) + [R[i]] for i in range(n)]
    M.append(list(R) + [2])
    return M


def _key(T, R) -> Key:
    Tt = tuple(tuple(int(x) for x in row) for row in T)
    Rt = tuple(int(x) for x in R)
    if len(Rt) != len(Tt):
        raise DomainError("R must have length n")
    return Tt, Rt


def shear(T, R) -> IntMat | None:
    """T - tR R / 2 when R is even (the orthogonal index), else None."""
    T, R = _key(T, R)
    if any(r % 2 for r in R):
        return None
    n = len(T)
    return tuple(tuple(T[i][j] - (R[i] * R[j]) // 2 for j in range(n)) for i in range(n))


def is_index(T, R) -> bool:
    M = bordered(*_key(T, R))
    return is_even_integral(M) and is_psd(M)


class JacobiStore:
    """Coefficients c(T, R) of a degree-n index-1 Jacobi form.

    ``fn`` computes a coefficient at a valid index; invalid indices give 0.
    ``even`` records that the store vanishes at odd R.
    """

    def __init__(self, n: int, fn: Callable[[IntMat, tuple], object], even: bool, p: int | None = None,
                 k: int | None = None, level: int | None = None, character=None):
        self.n = n
        self._fn = fn
        self.even = even
        self.p = p
        self.k = k
        self.level = level
        self.character = character
        self._cache: dict = {}

    def __call__(self, T, R):
        key = _key(T, R)
        if key in self._cache:
            return self._cache[key]
        if len(key[0]) != self.n:
            raise DomainError(f"index has degree {len(key[0])}, store has {self.n}")
        if not is_index(*key):
            val = Fraction(0)
        elif self.even and any(r % 2 for r in key[1]):
            val = Fraction(0)
        else:
            val = self._fn(*key)
        self._cache[key] = val
        return val

    @classmethod
    def from_table(cls, n: int, table: dict, even: bool, policy: str = "error-outside", **kw) -> "JacobiStore":
        """Table keyed by (T, R); even stores also answer sheared lookups."""
        data = {_key(T, R): v for (T, R), v in table.items()}
        ortho = {}
        if even:
            for (T, R), v in data.items():
                s = shear(T, R)
                if s is not None:
                    ortho[s] = v

        def fn(T, R):
            if (T, R) in data:
                return data[(T, R)]
            if even:
                s = shear(T, R)
                if s in ortho:
                    return ortho[s]
            if policy == "zero-outside":
                return Fraction(0)
            raise CoverageError(f"no coefficient at T={[list(r) for r in T]}, R={list(R)}")

        return cls(n, fn, even, **kw)

    def to_json(self, keys: Iterable[Key]) -> list[dict]:
        out = []
        for T, R in keys:
            v = self(T, R)
            c = v.to_json() if isinstance(v, ExactScalar) else fmt_rational(v)
            out.append({"T": [list(r) for r in T], "R": list(R), "c": c})
        return out


def store_from_json(n: int, data: list[dict], even: bool = True, **kw) -> JacobiStore:
    table = {}
    for e in data:
        c = e["c"]
        table[(tuple(map(tuple, e["T"])), tuple(e["R"]))] = (
            ExactScalar.from_json(c) if isinstance(c, dict) else parse_rational(c)
        )
    return JacobiStore.from_table(n, table, even, **kw)


# -- lift and projection ---------------------------------------------------------------------------


def lift_from_siegel(source: CoefficientSource, n: int) -> JacobiStore:
    """Coefficients of f * theta^{(n,1)}: c_F(T, R) = c_f(T - tR R/2) for even R, else 0."""

    def fn(T, R):
        s = shear(T, R)
        if s is None:
            return Fraction(0)
        return source(s)

    return JacobiStore(n, fn, True, k=source.k, level=source.level, character=source.character)


def psi_projection(store: JacobiStore) -> JacobiStore:
    """Keep the coefficients with even R and drop the rest."""

    def fn(T, R):
        if any(r % 2 for r in R):
            return Fraction(0)
        return store(T, R)

    return JacobiStore(store.n, fn, True, store.p, store.k, store.level, store.character)


# -- coefficient formulas ----------------------------------------------------------------------


def _perp_delta(gram: Sequence[Sequence[int]], p: int) -> FpQuadSpace:
    """Omega_1/p + Delta/p with the marked line last."""
    d = len(gram)
    g = [list(gram[i]) + [0] for i in range(d)] + [[0] * d + [2]]
    return FpQuadSpace(p, g)


@lru_cache(maxsize=None)
def rstar_delta_zero(p: int, gram: tuple, a: int) -> int:
    """Totally isotropic a-subspaces of gram + <2> meeting Delta-bar trivially."""
    V = _perp_delta(gram, p)
    d = V.dim
    count = 0
    for rows in iter_subspaces(d, a, p):
        if _contains_last(rows, d, p):
            continue
        U = V.restrict(rows)
        if all(x == 0 for row in U.gram for x in row):
            count += 1
    return count


@lru_cache(maxsize=None)
def rstar_delta_alpha(p: int, gram: tuple, a: int) -> int:
    """sum over a-subspaces U of gram + <2> meeting Delta-bar trivially of alpha'(U)."""
    V = _perp_delta(gram, p)
    d = V.dim
    total = 0
    for rows in iter_subspaces(d, a, p):
        if _contains_last(rows, d, p):
            continue
        total += alpha_prime(V.restrict(rows))
    return total


def exponent_EjDelta(n0: int, n2: int, params: HeckeParams) -> int:
    j, k, n = params.j, params.k, params.n
    r = n0 + n2
    return j * (k - n) + k * (n2 - n0) + n0 * (n - n2) + (j - r) * (j - r - 1) // 2


def coeff_AJtilde(n0: int, n1: int, n2: int, omega1_gram, params: HeckeParams) -> Fraction:
    """A~^J_{j,Delta} from the type of Omega and the Gram of Omega_1 mod p."""
    if params.p_divides_level:
        raise DomainError("A~^J needs p not dividing the level")
    if n0 + n1 + n2 != params.n:
        raise DomainError("type does not add up to n")
    r = n0 + n2
    if r > params.j:
        return Fraction(0)
    g = FpQuadSpace(params.p, omega1_gram).gram
    if len(g) != n1:
        raise DomainError("Omega_1 Gram has the wrong size")
    sign = params.chi_prime_p ** (params.j - r)
    return sign * Fraction(params.p) ** exponent_EjDelta(n0, n2, params) * rstar_delta_zero(params.p, g, params.j - r)


def coeff_AJ(n0: int, n1: int, n2: int, omega1_gram, params: HeckeParams) -> Fraction:
    """A^J_{j,Delta}: the alpha'-weighted count of subspaces avoiding Delta-bar."""
    if params.p_divides_level:
        raise DomainError("A^J with subspace sums needs p not dividing the level")
    r = n0 + n2
    j, k, n, p = params.j, params.k, params.n, params.p
    if r > j:
        return Fraction(0)
    g = FpQuadSpace(p, omega1_gram).gram
    sign = params.chi_prime_p ** (j - r)
    e = (k + 1) * (n2 - n0) + n0 * (n - n2 + 2)
    return sign * Fraction(p) ** e * rstar_delta_alpha(p, g, j - r)


# -- operator application ----------------------------------------------------------------------------


def _jacobi_params(store: JacobiStore, params: HeckeParams) -> None:
    if store.n != params.n:
        raise DomainError(f"store degree {store.n} differs from n={params.n}")
    if store.k is not None and store.k != params.k:
        raise DomainError("store weight differs from params")


@lru_cache(maxsize=100000)
def _jacobi_records(T: IntMat, p: int, cap: int) -> tuple:
    pp = p * p
    out = []
    for H in _even_H(T, p, cap):
        g = congruent(T, H)
        gram = tuple(tuple(x // pp for x in row) for row in g)
        typ, qg = _split_gram(T, H, p)
        out.append((gram, typ, qg))
    return tuple(out)


def apply_TJ(store: JacobiStore, T, R, params: HeckeParams, variant: str = "Tj",
             cap: int = DEFAULT_CAP) -> ExactScalar:
    """The (T, R)-th coefficient of F|T^J_j(p^2) or F|T~^J_j(p^2).

    For p not dividing the level the store must be even and R even: the index
    is sheared to Lambda + Delta orthogonal, and Omega + Delta runs over the
    even lattices between p Lambda + Delta and (1/p) Lambda + Delta.
    For p dividing the level, Omega = Lambda H runs over the sublattices of
    index p^j containing p Lambda and carries the glue R H.
    """
    _jacobi_params(store, params)
    T, R = _key(T, R)
    p, j, k, n = params.p, params.j, params.k, params.n
    if not is_index(T, R):
        return ExactScalar(p)
    if variant not in ("Tj", "Ttilde", "Ttilde-combination"):
        raise DomainError(f"unknown variant {variant!r}")
    if j == 0:
        return ExactScalar(p, store(T, R))
    if params.p_divides_level:
        if variant != "Tj":
            raise DomainError("T~^J is defined for p not dividing the level")
        total = Fraction(0)
        pp = p * p
        for H in _enumerate_H(T, p, (j, n - j, 0), False, cap):
            # Omega = (1/p) Lambda H lies in Lambda; its basis is (1/p) x H
            Tg = tuple(tuple(x // pp for x in row) for row in congruent(T, H))
            Rg = tuple(sum(R[a] * H[a][b] for a in range(n)) // p for b in range(n))
            total += Fraction(store(Tg, Rg))
        return ExactScalar(p, total * Fraction(p) ** (j * (n + 1 - k)))
    if not store.even:
        raise DomainError("p not dividing the level: only even stores are supported")
    Lam = shear(T, R)
    if Lam is None:
        raise DomainError("p not dividing the level: the index must have even R")
    zero = tuple([0] * n)
    if variant == "Ttilde-combination":
        acc = Fraction(0)
        for ell in range(j + 1):
            coef = params.chi_prime_p ** (j - ell) * Fraction(p) ** (j - ell) * beta(n - ell, j - ell, p)
            acc += coef * apply_TJ(store, Lam, zero, params.with_j(ell), "Tj", cap).to_rational()
        return ExactScalar(p, acc * Fraction(p) ** (j * (k - n - 1)))
    total = Fraction(0)
    for gram, (n0, n1, n2), qg in _jacobi_records(Lam, p, cap):
        if n0 + n2 > j:
            continue
        c = store(gram, zero)
        if not c:
            continue
        if variant == "Tj":
            a = coeff_AJ(n0, n1, n2, qg, params)
        else:
            a = coeff_AJtilde(n0, n1, n2, qg, params)
        total += a * Fraction(c)
    return ExactScalar(p, total)


def hecke_image(store: JacobiStore, params: HeckeParams, variant: str = "Tj", cap: int = DEFAULT_CAP) -> JacobiStore:
    """Lazy store of F|T^J_j (or T~^J_j); values are exact scalars."""

    def fn(T, R):
        return apply_TJ(store, T, R, params, variant, cap)

    even = not params.p_divides_level and store.even
    return JacobiStore(store.n, fn, even, params.p, store.k, store.level, store.character)


def full_enumeration_check(T, p: int, cap: int = DEFAULT_CAP) -> bool:
    """Every even M between p(Lambda + Delta) and (1/p)(Lambda + Delta) that
    contains w primitively splits as Omega + Delta, and the Omega that occur are
    exactly the even lattices between p Lambda and (1/p) Lambda (p odd)."""
    T = as_gram(T).entries
    n = len(T)
    if p == 2:
        raise DomainError("p must be odd")
    big = tuple(tuple(r) for r in bordered(T, [0] * n))
    found = set()
    for H in _enumerate_H(big, p, None, True, cap):
        # p M = H Z^{n+1} in the basis (x, w): w in M iff p e_w in H Z^{n+1}
        if not _in_span(H, [0] * n + [p]) or _in_span(H, [0] * n + [1]):
            continue
        # in column HNF the last column alone reaches the w coordinate
        if H[n][n] != p or any(H[i][n] for i in range(n)):
            return False
        found.add(tuple(tuple(H[i][c] for c in range(n)) for i in range(n)))
    return found == set(_even_H(T, p, cap))


def _in_span(H: IntMat, v: list[int]) -> bool:
    from .intmat import inverse

    x = matmul(inverse(H), [[a] for a in v])
    return all(Fraction(r[0]).denominator == 1 for r in x)


# -- verification --------------------------------------------------------------------------------


def jacobi_indices(n: int, bound: int, rbound: int = 2) -> list[Key]:
    """Valid (T, R) with the diagonal of T at most ``bound`` and |R_i| <= rbound."""
    from itertools import product

    from .theta import even_psd_matrices

    out = []
    for T in even_psd_matrices(n, bound):
        for R in product(range(-rbound, rbound + 1), repeat=n):
            if is_index(T, R):
                out.append((T, tuple(R)))
    return out


def verify_jacobi_correspondence(source: CoefficientSource, p: int, j: int, n: int, indices: Iterable[Key],
                 cap: int = DEFAULT_CAP) -> Report:
    """Check the operator relation between f | T and (f theta) | T^J that applies at p."""
    params = params_for(source, p, j, n)
    F = lift_from_siegel(source, n)
    if not params.p_divides_level:
        relation = "Ttilde"
        image = hecke_image(F, params, "Ttilde", cap)
    elif p != 2:
        relation = "Tj"
        image = hecke_image(F, params, "Tj", cap)
    else:
        relation = "Tj-psi"
        raw = hecke_image(F, params, "Tj", cap)
        image = psi_projection(raw)
    rep = Report("jacobi_correspondence", data={"p": p, "j": j, "n": n, "relation": relation})
    odd_nonzero = 0
    for T, R in indices:
        s = shear(T, R)
        if s is None:
            lhs = ExactScalar(p)
            if relation == "Ttilde":
                # the odd-R coefficient of an even image is zero; nothing to compare
                continue
        elif relation == "Ttilde":
            lhs = apply_Ttilde(source, s, params, cap=cap)
        else:
            lhs = ExactScalar.sqrt_p_power(j, p) * apply_Tj(source, s, params, cap)
        rhs = image(T, R)
        if not isinstance(rhs, ExactScalar):
            rhs = ExactScalar(p, rhs)
        if relation == "Tj-psi" and s is None and raw(T, R) != 0:
            odd_nonzero += 1
        rep.record(lhs == rhs, {"T": [list(r) for r in T], "R": list(R), "lhs": str(lhs), "rhs": str(rhs)},
                   keep=False)
    rep.data["odd_glue_nonzero_before_psi"] = odd_nonzero
    return rep


def verify_jacobi_paths(source: CoefficientSource, p: int, j: int, n: int, grams: Iterable,
                        cap: int = DEFAULT_CAP) -> Report:
    """T~^J via coeff_AJtilde against the l-combination of T^J_l via coeff_AJ."""
    params = params_for(source, p, j, n)
    F = lift_from_siegel(source, n)
    zero = tuple([0] * n)
    rep = Report("jacobi_paths", data={"p": p, "j": j, "n": n})
    for T in grams:
        a = apply_TJ(F, T, zero, params, "Ttilde", cap)
        b = apply_TJ(F, T, zero, params, "Ttilde-combination", cap)
        rep.record(a == b, {"T": [list(r) for r in as_gram(T).entries], "direct": str(a), "combination": str(b)},
                   keep=False)
    return rep
