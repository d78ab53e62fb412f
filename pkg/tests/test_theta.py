import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from halfhecke.config import CoverageError, DomainError
from halfhecke.hecke import random_unimodular
from halfhecke.intmat import congruent
from halfhecke.lattice import parse_gram
from halfhecke.theta import (
    TableSource,
    ThetaSource,
    cached_coeff_table,
    coeff_table,
    even_psd_matrices,
    repr_count,
    repr_tuples,
    table_from_json,
    table_to_json,
    vectors_of_norm,
)

I3 = parse_gram("2I3")


def test_repr_examples():
    assert repr_count(I3, [[2]]) == 6
    assert repr_count(I3, [[0, 0], [0, 0]]) == 1
    assert repr_count(I3, [[2, 0], [0, 2]]) == 24
    assert repr_count(I3, [[18]]) == 30
    assert repr_count(I3, [[36]]) == 36


def test_coeff_table_examples():
    assert coeff_table(I3, 1, 4) == {((0,),): 1, ((2,),): 6, ((4,),): 12}
    assert coeff_table(I3, 2, 0) == {((0, 0), (0, 0)): 1}


@pytest.mark.parametrize("Q", [((2, 1), (1, 2)), ((2, 0, 0), (0, 2, 1), (0, 1, 4)), ((4, 1), (1, 6))])
def test_vectors_of_norm_against_box(Q):
    m = len(Q)
    for t in range(0, 13):
        box = [x for x in itertools.product(range(-6, 7), repeat=m)
               if sum(x[a] * Q[a][b] * x[b] for a in range(m) for b in range(m)) == t]
        assert sorted(vectors_of_norm(Q, t)) == sorted(box)


@given(st.integers(0, 10**6), st.sampled_from([((2, 0), (0, 4)), ((4, 2), (2, 4)), ((2, 1), (1, 6))]))
def test_repr_count_class_invariant(seed, T):
    rng = random.Random(seed)
    T2 = congruent(T, random_unimodular(2, rng, steps=4, bound=1))
    assert repr_count(I3, T2) == repr_count(I3, T)
    Q2 = congruent(I3.entries, random_unimodular(3, rng, steps=4, bound=1))
    assert repr_count(Q2, T) == repr_count(I3, T)


def test_repr_tuples_length():
    for T in even_psd_matrices(2, 4):
        assert len(repr_tuples(I3, T)) == repr_count(I3, T)


def test_theta_source_support():
    src = ThetaSource(I3)
    assert src.k == 1 and src.level == 4
    assert src([[1]]) == 0
    assert src([[Fraction(1, 2)]]) == 0
    assert src([[2, 3], [3, 2]]) == 0
    with pytest.raises(DomainError):
        ThetaSource(parse_gram("2I2"))


def test_table_source_policies():
    t = {((2,),): Fraction(6)}
    src = TableSource(t, 1, policy="error-outside")
    assert src([[2]]) == 6
    assert src([[3]]) == 0
    with pytest.raises(CoverageError):
        src([[4]])
    assert TableSource(t, 1, policy="zero-outside")([[4]]) == 0


def test_table_json_and_cache(tmp_path):
    table = coeff_table(I3, 2, 4)
    assert table_from_json(table_to_json(table)) == table
    a = cached_coeff_table(I3, 2, 4, str(tmp_path))
    b = cached_coeff_table(I3, 2, 4, str(tmp_path))
    assert a == b == {k: Fraction(v) for k, v in table.items()}
    assert len(list(tmp_path.iterdir())) == 1


def test_even_psd_enumeration():
    mats = even_psd_matrices(2, 2)
    assert ((2, 1), (1, 2)) in mats and ((0, 0), (0, 2)) in mats
    assert all(T[0][1] ** 2 <= T[0][0] * T[1][1] for T in mats)
