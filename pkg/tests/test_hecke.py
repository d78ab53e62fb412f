import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from halfhecke.arith import ExactScalar
from halfhecke.config import DomainError
from halfhecke.ffspace import zero_space
from halfhecke.hecke import (
    HeckeParams,
    OmegaData,
    apply_Tj,
    apply_Tprime,
    apply_Ttilde,
    coeff_A,
    coeff_Atilde,
    diagonal_bounded,
    exponent_Ej,
    exponent_M,
    lambda_from_neighbors,
    lambda_j,
    params_for,
    random_unimodular,
    theta_closed_coefficient,
    uq,
    verify_annihilation,
    verify_closed_forms,
    verify_eichler,
    verify_eigenform,
    verify_inversion,
    verify_paths,
    within_bound,
)
from halfhecke.intmat import congruent
from halfhecke.lattice import Sublattice, neighbors, parse_gram
from halfhecke.theta import ThetaSource, repr_count

I3 = parse_gram("2I3")
D224 = parse_gram("diag:2,2,4")
SRC = ThetaSource(I3)
P311 = HeckeParams(3, 1, 1, 1)


def test_params_validation():
    with pytest.raises(DomainError):
        HeckeParams(4, 1, 1, 1)
    with pytest.raises(DomainError):
        HeckeParams(3, 2, 1, 1)
    with pytest.raises(DomainError):
        HeckeParams(2, 1, 1, 1)
    assert HeckeParams(2, 1, 1, 1, p_divides_level=True).p == 2
    assert params_for(ThetaSource(D224), 3, 1, 1).chi_prime_p == -1
    assert params_for(ThetaSource(parse_gram("diag:2,2,6")), 3, 1, 1).p_divides_level


def test_exponent_examples():
    z = zero_space(3, 0)
    assert exponent_Ej(OmegaData(0, 1, 0, z, None), P311) == 0
    assert exponent_Ej(OmegaData(1, 0, 0, z, None), P311) == 0
    assert exponent_Ej(OmegaData(0, 0, 1, z, None), P311) == 1


def test_coefficient_examples():
    L = [[2]]
    assert coeff_Atilde(L, Sublattice.from_H(L, 3, [[9]]), P311) == 1
    assert coeff_Atilde(L, Sublattice.from_H(L, 3, [[3]]), P311) == 0
    assert coeff_A(L, Sublattice.from_H(L, 3, [[9]]), P311) == ExactScalar(3, 0, 1)


def test_operator_values_one_variable():
    assert apply_Ttilde(SRC, [[2]], P311) == 30
    assert apply_Ttilde(SRC, [[4]], P311) == 60
    assert apply_Ttilde(SRC, [[2]], P311, "combination") == 30
    assert uq(1, 1, P311) == -1
    assert apply_Tprime(SRC, [[2]], P311) == 24
    assert apply_Tj(SRC, [[2]], P311.with_j(0)) == 6


def test_eigenvalue_examples():
    assert lambda_j(HeckeParams(3, 1, 1, 1)) == 4
    assert lambda_j(HeckeParams(3, 1, 1, 2)) == Fraction(16, 3)
    for p in (3, 5, 7):
        assert lambda_j(HeckeParams(p, 1, 1, 1, -1)) == p - 1
    with pytest.raises(DomainError):
        lambda_j(HeckeParams(3, 2, 1, 2))


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("chi", [1, -1])
@pytest.mark.parametrize("k,n,j", [(1, 1, 1), (1, 2, 1), (2, 2, 1), (2, 2, 2), (2, 3, 2)])
def test_eigenvalue_is_averaged_eichler_relation(p, chi, k, n, j):
    params = HeckeParams(p, j, k, n, chi)
    assert lambda_j(params) == lambda_from_neighbors(params)


def test_eigenform_one_variable():
    for p in (3, 5):
        rep = verify_eigenform(I3, p, 1, 1, [[[2 * t]] for t in range(8)])
        assert rep.passed, rep.failures


def test_paths_and_inversion_small():
    assert verify_paths(SRC, 3, 1, 2, diagonal_bounded(2, 6)).passed
    assert verify_paths(SRC, 3, 2, 2, diagonal_bounded(2, 4)).passed
    assert verify_inversion(SRC, 3, 2, 2, diagonal_bounded(2, 4)).passed


def test_paths_cancel_sqrt_p():
    for T in diagonal_bounded(2, 4):
        v = apply_Ttilde(SRC, T, HeckeParams(3, 1, 1, 2), "combination")
        assert v.b == 0


def test_eichler_and_closed_forms_small():
    for L in (I3, D224):
        assert verify_eichler(L, 5, 1, 2, diagonal_bounded(2, 4)).passed
        assert verify_closed_forms(L, 3, 1, 2, diagonal_bounded(2, 4)).passed


def test_closed_form_neighbor_sum_at_zero():
    # b_1 at the zero matrix counts the neighbours once each
    params = HeckeParams(3, 1, 1, 1)
    assert theta_closed_coefficient(I3, [[0]], params, "b") == 4


def test_tprime_annihilates_when_chi_minus():
    # chi'(3) = -1 for diag(2, 2, 4): the operator T'_{k+1} kills its theta series
    rep = verify_annihilation(D224, 3, 1, 2, diagonal_bounded(2, 6))
    assert rep.passed, rep.failures[:3]


def test_tprime_beyond_k_matches_formal_eichler_extension():
    # Observed for chi' = +1: theta(L) | T'_{k+1} = (2/p) * sum over p-neighbours theta(K)
    # coefficientwise, so the operator does not annihilate theta^{(2)}(2I3).
    for p in (3, 5):
        params = HeckeParams(p, 2, 1, 2, 1)
        nbrs = neighbors(I3, p, 1)
        for T in diagonal_bounded(2, 4):
            lhs = apply_Tprime(SRC, T, params)
            rhs = Fraction(2, p) * sum(repr_count(K, T) for K in nbrs)
            assert lhs == rhs
    assert apply_Tprime(SRC, [[0, 0], [0, 0]], HeckeParams(3, 2, 1, 2)) == Fraction(8, 3)


def test_bound_examples():
    assert exponent_M(1, 1, 1) == Fraction(25, 16)
    assert exponent_M(2, 1, 1) == Fraction(33, 16)
    assert within_bound(4, 1, 1, 1, 3)
    assert within_bound(Fraction(16, 3), 2, 1, 1, 3)
    assert not within_bound(10**6, 1, 1, 1, 3)


def test_empty_targets_pass():
    assert verify_eichler(I3, 3, 1, 1, []).passed


@given(st.integers(0, 10**6), st.sampled_from([((2, 1), (1, 4)), ((4, 0), (0, 4)), ((2, 0), (0, 6))]),
       st.sampled_from([1, 2]))
def test_ttilde_unimodular_invariance(seed, T, j):
    rng = random.Random(seed)
    params = HeckeParams(3, j, 1, 2)
    T2 = congruent(T, random_unimodular(2, rng))
    assert apply_Ttilde(SRC, T2, params) == apply_Ttilde(SRC, T, params)


