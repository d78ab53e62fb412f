from fractions import Fraction

import pytest

from halfhecke.arith import ExactScalar
from halfhecke.config import DomainError
from halfhecke.hecke import HeckeParams, apply_Ttilde, diagonal_bounded
from halfhecke.jacobi import (
    JacobiStore,
    apply_TJ,
    bordered,
    coeff_AJtilde,
    full_enumeration_check,
    is_index,
    jacobi_indices,
    lift_from_siegel,
    psi_projection,
    rstar_delta_zero,
    shear,
    store_from_json,
    verify_jacobi_correspondence,
    verify_jacobi_paths,
)
from halfhecke.lattice import parse_gram
from halfhecke.theta import ThetaSource, repr_tuples

SRC = ThetaSource(parse_gram("2I3"))


def test_bordered_and_shear():
    assert bordered([[4]], [2]) == [[4, 2], [2, 2]]
    assert shear(((4,),), (2,)) == ((2,),)
    assert shear(((4,),), (1,)) is None
    assert is_index(((2,),), (2,)) and not is_index(((0,),), (1,))


def test_lift_coefficients():
    F = lift_from_siegel(SRC, 1)
    assert F(((2,),), (0,)) == 6
    assert F(((4,),), (2,)) == 6  # T - R^2/2 = 2
    assert F(((2,),), (1,)) == 0


def test_lift_matches_bordered_representations():
    # c(T, R) counts representations of [[T, R], [R, 2]] by L + <2> whose last
    # vector is the basis vector of <2>
    LD = [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]]
    w = (0, 0, 0, 1)
    for n, bound in ((1, 10), (2, 4)):
        F = lift_from_siegel(SRC, n)
        for T, R in jacobi_indices(n, bound):
            count = sum(1 for tup in repr_tuples(LD, bordered(T, R)) if tup[-1] == w)
            assert F(T, R) == count


def test_psi_projection():
    table = {(((2,),), (0,)): Fraction(6), (((2,),), (1,)): Fraction(5)}
    raw = JacobiStore.from_table(1, table, even=False, policy="zero-outside")
    out = psi_projection(raw)
    assert out(((2,),), (1,)) == 0 and out(((2,),), (0,)) == 6
    even = lift_from_siegel(SRC, 1)
    assert all(psi_projection(even)(T, R) == even(T, R) for T, R in jacobi_indices(1, 6))


def test_rstar_delta_example():
    assert rstar_delta_zero(3, ((-2 % 3,),), 1) == 2
    assert rstar_delta_zero(3, ((1,),), 0) == 1


def test_coeff_AJtilde_trivial():
    params = HeckeParams(3, 1, 1, 1)
    assert coeff_AJtilde(1, 0, 0, (), params) == Fraction(3) ** 0 * 1


def test_jacobi_value_matches_siegel():
    params = HeckeParams(3, 1, 1, 1)
    F = lift_from_siegel(SRC, 1)
    assert apply_TJ(F, ((2,),), (0,), params, "Ttilde") == 30 == apply_Ttilde(SRC, [[2]], params)


def test_zero_store_maps_to_zero():
    zero = JacobiStore(1, lambda T, R: Fraction(0), True, k=1, level=4)
    params = HeckeParams(3, 1, 1, 1)
    assert apply_TJ(zero, ((2,),), (0,), params, "Ttilde") == 0


@pytest.mark.parametrize("T", [[[2]], [[4]], [[2, 1], [1, 2]], [[0, 0], [0, 2]]])
def test_full_enumeration_reduces_to_siegel_lattices(T):
    assert full_enumeration_check(T, 3)


@pytest.mark.parametrize("p,n", [(3, 1), (2, 1), (3, 2), (2, 2)])
def test_correspondence_small(p, n):
    rep = verify_jacobi_correspondence(SRC, p, 1, n, jacobi_indices(n, 6 if n == 1 else 4))
    assert rep.passed, rep.failures[:3]


def test_correspondence_odd_p_dividing_level():
    src = ThetaSource(parse_gram("diag:2,2,6"))
    rep = verify_jacobi_correspondence(src, 3, 1, 1, jacobi_indices(1, 8))
    assert rep.passed and rep.data["relation"] == "Tj"


def test_correspondence_p2_sees_odd_glue():
    rep = verify_jacobi_correspondence(SRC, 2, 1, 1, jacobi_indices(1, 8))
    assert rep.passed and rep.data["odd_glue_nonzero_before_psi"] > 0


def test_empty_index_set():
    assert verify_jacobi_correspondence(SRC, 3, 1, 1, []).passed


def test_jacobi_paths():
    assert verify_jacobi_paths(SRC, 3, 1, 2, diagonal_bounded(2, 4)).passed


def test_store_json_roundtrip():
    F = lift_from_siegel(SRC, 1)
    keys = jacobi_indices(1, 6)
    data = F.to_json(keys)
    G = store_from_json(1, data, even=True)
    assert all(G(T, R) == F(T, R) for T, R in keys)
    s = ExactScalar(2, 1, 1)
    assert ExactScalar.from_json(s.to_json()) == s


def test_odd_index_on_even_store_rejected():
    F = lift_from_siegel(SRC, 1)
    with pytest.raises(DomainError):
        apply_TJ(F, ((2,),), (1,), HeckeParams(3, 1, 1, 1), "Ttilde")
