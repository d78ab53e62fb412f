import itertools
import random

import pytest
from hypothesis import given, strategies as st

from halfhecke.arith import beta
from halfhecke.ffspace import (
    FpQuadSpace,
    Rstar,
    Rstar_indep,
    Rstar_perp2_zero,
    SpaceClass,
    class_rep,
    classify,
    diag_space,
    enumerate_classes,
    iso_count_closed,
    isotropic_count,
    orbit_key_2,
    ortho_order,
    r_count,
    rstar_count,
    subspace_tally,
    zero_space,
)
from halfhecke.intmat import rank_mod

H3 = diag_space(3, [1, -1])


def random_gram(rng, d, p):
    g = [[0] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            g[i][j] = g[j][i] = rng.randrange(p)
    return g


def random_invertible(rng, d, p):
    while True:
        C = [[rng.randrange(p) for _ in range(d)] for _ in range(d)]
        if rank_mod(C, p) == d:
            return C


def test_classify_examples():
    c = classify(diag_space(5, [1, -1]))
    assert c.descriptor()[0] == "H" and c.radical_dim == 0
    c = classify(diag_space(3, [0]))
    assert c.regular_rank == 0 and c.radical_dim == 1
    c = classify(diag_space(3, [2]))
    assert c.regular_rank == 1 and not c.disc_is_square


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("d", range(5))
def test_enumerate_classes_count(p, d):
    classes = enumerate_classes(d, p)
    assert len(classes) == 2 * d + 1
    assert len({classify(class_rep(c)) for c in classes}) == 2 * d + 1


@given(st.integers(0, 10**6), st.integers(1, 4), st.sampled_from([3, 5, 7]))
def test_classify_invariant_under_base_change(seed, d, p):
    rng = random.Random(seed)
    g = random_gram(rng, d, p)
    C = random_invertible(rng, d, p)
    g2 = [[sum(C[a][i] * g[a][b] * C[b][j] for a in range(d) for b in range(d)) for j in range(d)]
          for i in range(d)]
    assert classify(FpQuadSpace(p, g)) == classify(FpQuadSpace(p, g2))


def test_matrix_count_examples():
    assert rstar_count(H3, zero_space(3, 1)) == 4
    assert ortho_order(H3) == 4
    assert r_count(H3, zero_space(3, 0)) == 1


def test_rstar_examples():
    assert Rstar(H3, zero_space(3, 1)) == 2
    V = diag_space(3, [1, 2, 0])
    assert Rstar(V, V) == 1
    assert Rstar(diag_space(3, [2, 2]), zero_space(3, 1)) == 0


@pytest.mark.parametrize("p,d", [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2)])
def test_rstar_is_orbit_count(p, d):
    # R*(V, W) = r*(V, W) / |O(W)| for every subspace type W
    for cls in enumerate_classes(d, p):
        V = class_rep(cls)
        for a in range(1, d + 1):
            for W in {classify(V.restrict(rows)) for rows in _subspaces(V, a)}:
                Wr = class_rep(W)
                assert Rstar(V, Wr) * ortho_order(Wr) == rstar_count(V, Wr)


def _subspaces(V, a):
    from halfhecke.ffspace import iter_subspaces

    return iter_subspaces(V.dim, a, V.p)


def test_iso_count_examples():
    hyp = classify(H3)
    assert iso_count_closed(hyp, 0) == 1
    assert iso_count_closed(hyp, 1) == 2
    assert iso_count_closed(classify(diag_space(3, [1, -1, 1])), 1) == 4


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("d", range(5))
def test_isotropic_count_against_enumeration(p, d):
    for cls in enumerate_classes(d, p):
        V = class_rep(cls)
        for a in range(d + 1):
            assert isotropic_count(cls, a) == Rstar(V, zero_space(p, a))


def test_perp_two_examples():
    assert Rstar_perp2_zero(zero_space(3, 0), 0) == 1
    assert Rstar_perp2_zero(diag_space(3, [2]), 1) == 0
    assert Rstar_perp2_zero(diag_space(3, [-2]), 1) == 2


def test_rstar_indep_examples():
    V = diag_space(3, [-2, 2])  # marked anisotropic line last
    assert Rstar_indep(V, zero_space(3, 0)) == 1
    assert Rstar_indep(V, zero_space(3, 1)) == 2
    assert Rstar_indep(V, zero_space(3, 3)) == 0


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("d", range(4))
def test_tally_totals(p, d):
    V = FpQuadSpace(p, [[2 * (i == j) for j in range(d)] for i in range(d)])
    for a in range(d + 1):
        assert sum(subspace_tally(V, a).values()) == beta(d, a, p)


def test_orbits_over_f2():
    def orbits(d):
        keys = set()
        pos = [(i, j) for i in range(d) for j in range(i, d)]
        for vals in itertools.product(*[((0, 2) if i == j else (0, 1)) for i, j in pos]):
            g = [[0] * d for _ in range(d)]
            for (i, j), v in zip(pos, vals):
                g[i][j] = g[j][i] = v
            keys.add(orbit_key_2(tuple(map(tuple, g))))
        return len(keys)

    # F_2-quadratic forms up to equivalence: d=1: 0, x^2; d=2: 0, x^2, xy, x^2+xy+y^2
    assert orbits(1) == 2
    assert orbits(2) == 4


def test_p2_needs_even_lift():
    with pytest.raises(ValueError):
        FpQuadSpace(2, [[1]])


def test_spaceclass_json():
    c = SpaceClass(3, 2, True, 1)
    assert c.to_json()["radical_dim"] == 1
