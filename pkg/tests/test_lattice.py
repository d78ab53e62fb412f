import random
from itertools import product

import pytest
from hypothesis import given, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from halfhecke.config import DomainError
from halfhecke.ffspace import classify
from halfhecke.hecke import omega_data, random_unimodular
from halfhecke.intmat import congruent, matmul, snf_invariants
from halfhecke.lattice import (
    GramMatrix,
    Sublattice,
    discriminant,
    hnf,
    is_even_integral,
    level_of,
    neighbor_count_formula,
    neighbor_sublattices,
    neighbors,
    parse_gram,
    quotient_space,
    size_reduce,
    sublattices_between,
)
from halfhecke.theta import repr_count


def test_parse_gram_shorthands():
    assert parse_gram("2I3").entries == ((2, 0, 0), (0, 2, 0), (0, 0, 2))
    assert parse_gram("diag:2,2,4").entries == ((2, 0, 0), (0, 2, 0), (0, 0, 4))
    assert parse_gram("[[2,1],[1,2]]").entries == ((2, 1), (1, 2))
    with pytest.raises(DomainError):
        parse_gram("[[1,2]")


def test_level_examples():
    assert level_of(parse_gram("2I3")) == 4
    assert level_of(parse_gram("diag:2,2,4")) == 8
    assert level_of(parse_gram("diag:2,2,6")) == 12
    assert discriminant(parse_gram("2I3")) == 8
    assert not is_even_integral([[1, 0], [0, 1]])


def test_snf_examples():
    assert snf_invariants([[1, 0, 0], [0, 3, 0], [0, 0, 9]]) == [1, 3, 9]
    assert snf_invariants([[3, 1], [0, 3]]) == [1, 9]
    assert snf_invariants([[1, 2], [0, 1]]) == [1, 1]


matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-12, 12), min_size=n, max_size=n), min_size=n, max_size=n))


@given(matrices)
def test_snf_matches_sympy(M):
    ours = snf_invariants(M)
    S = smith_normal_form(Matrix(M), domain=ZZ)
    theirs = sorted((abs(S[i, i]) for i in range(len(M))), key=lambda x: (x == 0, x))
    assert sorted(ours, key=lambda x: (x == 0, x)) == theirs


@given(st.integers(0, 10**6), st.integers(1, 3))
def test_hnf_is_basis_invariant(seed, n):
    rng = random.Random(seed)
    while True:
        H = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        if snf_invariants(H)[-1] != 0:
            break
    U = random_unimodular(n, rng)
    assert hnf(H) == hnf(matmul(H, U))


def _subgroup_count(p: int, n: int) -> int:
    """Subgroups of (Z/p^2)^n, by closing every generating pair (n <= 2)."""
    mod = p * p
    elems = list(product(range(mod), repeat=n))
    groups = set()
    for a in elems:
        for b in elems:
            g = frozenset(tuple((x * ai + y * bi) % mod for ai, bi in zip(a, b))
                          for x in range(mod) for y in range(mod))
            groups.add(g)
    return len(groups)


def test_between_counts_match_subgroup_oracle():
    assert len(sublattices_between([[2]], 3)) == 3 == _subgroup_count(3, 1)
    assert len(sublattices_between([[2, 0], [0, 2]], 3)) == 23 == _subgroup_count(3, 2)


def test_between_examples():
    Hs = sorted(s.H for s in sublattices_between([[2]], 3))
    assert Hs == [((1,),), ((3,),), ((9,),)]
    even = sublattices_between([[2]], 3, even_only=True)
    assert sorted(s.H for s in even) == [((3,),), ((9,),)]


def test_between_types_partition():
    T = [[2, 1], [1, 2]]
    total = len(sublattices_between(T, 3))
    by_type = sum(len(sublattices_between(T, 3, t)) for t in
                  [(a, b, 2 - a - b) for a in range(3) for b in range(3 - a)])
    assert total == by_type


def test_quotient_space_examples():
    T = [[2, 0], [0, 4]]
    same = Sublattice.from_H(T, 3, [[3, 0], [0, 3]])
    assert quotient_space(T, same).gram == ((2, 0), (0, 1))
    small = Sublattice.from_H(T, 3, [[9, 0], [0, 9]])
    assert quotient_space(T, small).dim == 0


def test_quotient_space_two_routes_agree():
    T = parse_gram("2I3").entries
    subs = sublattices_between(T, 3, (1, 1, 1))
    assert subs
    rng = random.Random(0)
    for om in subs:
        if not om.is_integral():
            continue
        q1 = classify(quotient_space(T, om))
        assert q1 == omega_data(T, om).qclass
        H2 = matmul([list(r) for r in om.H], random_unimodular(3, rng))
        assert classify(quotient_space(T, Sublattice.from_H(T, 3, H2))) == q1


def test_neighbor_examples():
    L = parse_gram("2I3")
    assert len(neighbors(L, 3, 1)) == 4 == neighbor_count_formula(1, 1, 3)
    assert len(neighbors(L, 5, 1)) == 6 == neighbor_count_formula(1, 1, 5)
    assert neighbor_count_formula(2, 2, 3) == 120


def test_neighbors_in_genus():
    L = parse_gram("diag:2,2,4")
    for K in neighbors(L, 3, 1):
        assert K.det == L.det and K.even and level_of(K) == level_of(L)
    for om in neighbor_sublattices(L, 3, 1):
        assert om.type == (1, 1, 1)


@given(st.integers(0, 10**6), st.sampled_from([((2, 1), (1, 4)), ((4, 2), (2, 8)), ((2, 0, 0), (0, 4, 2), (0, 2, 6))]))
def test_size_reduce_preserves_class(seed, T):
    rng = random.Random(seed)
    T2 = congruent(T, random_unimodular(len(T), rng))
    R = size_reduce(T2)
    assert GramMatrix(R).det == GramMatrix(T).det
    assert all(2 * abs(R[i][j]) <= R[j][j] for i in range(len(R)) for j in range(len(R)) if i != j)
    assert repr_count(parse_gram("2I5"), R) == repr_count(parse_gram("2I5"), T)
