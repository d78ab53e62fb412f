import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from halfhecke.arith import legendre
from halfhecke.config import DomainError
from halfhecke.cyclotomic import CycInt
from halfhecke.ffspace import FpQuadSpace, class_rep, classify, diag_space, enumerate_classes, zero_space
from halfhecke.gauss import (
    BlockShape,
    alpha_closed,
    alpha_oracle,
    alpha_prime,
    alpha_prime_cyclotomic,
    block_Y,
    e_sum_oracle,
    g1_cyclotomic,
    gauss_expr_to_cyc,
    gtilde_closed,
    gtilde_oracle,
    gyd_closed,
    gyd_oracle,
)


def test_e_sum_examples():
    z = CycInt.zeta
    assert e_sum_oracle([[2]], 3, "legendre") == z(3, 1) - z(3, 2)
    assert e_sum_oracle([[0, 0], [0, 0]], 3) == CycInt.rational(3, 27)
    assert e_sum_oracle([[2]], 9) == CycInt.rational(9, 0)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_g1_square(p):
    g = g1_cyclotomic(p)
    assert g * g == CycInt.rational(p, legendre(-1, p) * p)


def test_gyd_examples():
    g1 = gauss_expr_to_cyc(gyd_closed(BlockShape(0, 1, 0, 0), 1, 3), 9)
    assert gyd_oracle([[1]], [3]) == g1
    assert gyd_oracle([[1]], [9]).rational_value() == 3
    assert gyd_oracle([[1]], [1], p=3).rational_value() == 1


def test_gyd_identity_needs_prime():
    with pytest.raises(DomainError):
        gyd_oracle([[1]], [1])


@given(st.integers(0, 10**6), st.sampled_from([3, 5]),
       st.sampled_from([(0, 1, 0, 0), (1, 1, 0, 0), (0, 2, 0, 0), (0, 0, 1, 1), (1, 0, 2, 0), (0, 1, 1, 1)]))
def test_gyd_closed_matches_oracle(seed, p, shape):
    rng = random.Random(seed)
    r0, r1, r2, r3 = shape
    sh = BlockShape(*shape)
    while True:
        Y1 = [[0] * r1 for _ in range(r1)]
        for i in range(r1):
            for j in range(i, r1):
                Y1[i][j] = Y1[j][i] = rng.randrange(p * p)
        from halfhecke.intmat import det

        d = int(det(Y1)) if r1 else 1
        if d % p:
            break
    Y0 = [[rng.randrange(9) for _ in range(r0)] for _ in range(r0)]
    for i in range(r0):
        for j in range(i):
            Y0[i][j] = Y0[j][i]
    Y01 = [[rng.randrange(9) for _ in range(r1)] for _ in range(r0)]
    Y03 = [[rng.randrange(9) for _ in range(r3)] for _ in range(r0)]
    Y = block_Y(sh, p, Y0, Y1, Y01, Y03)
    assert gyd_oracle(Y, sh.D(p), p=p) == gauss_expr_to_cyc(gyd_closed(sh, d, p), p * p)


def test_gtilde_examples():
    assert gtilde_closed(classify(zero_space(3, 0))) == 1
    assert gtilde_closed(classify(diag_space(5, [1, -1]))) == -1
    for p in (3, 5, 7):
        for eta in (1, 2, 3):
            if eta % p:
                assert gtilde_closed(classify(diag_space(p, [2 * eta]))) == legendre(-eta, p)
    assert gtilde_closed(classify(diag_space(3, [1, -1, 0, 0]))) == -18
    assert gtilde_oracle(diag_space(3, [1, -1, 0, 0])) == -18


@pytest.mark.parametrize("p", [3, 5, 7])
def test_gtilde_closed_matches_oracle_small(p):
    for d in range(3):
        for cls in enumerate_classes(d, p):
            assert gtilde_closed(cls) == gtilde_oracle(class_rep(cls))


def test_alpha_examples():
    assert alpha_closed(zero_space(3, 2)) == 27
    assert alpha_oracle(zero_space(3, 2)) == 27
    assert alpha_prime(zero_space(3, 0)) == 1
    assert alpha_prime(diag_space(3, [2])) == -1


@given(st.integers(0, 10**6), st.integers(1, 2), st.sampled_from([2, 3, 5]))
def test_alpha_prime_routes_agree(seed, d, p):
    rng = random.Random(seed)
    g = [[0] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            g[i][j] = g[j][i] = rng.randrange(p)
    if p == 2:
        for i in range(d):
            g[i][i] = 2 * rng.randrange(2)
    U = FpQuadSpace(p, g)
    assert alpha_prime(U) == alpha_prime_cyclotomic(U)


@given(st.integers(0, 10**6), st.integers(0, 2), st.sampled_from([3, 5]))
def test_alpha_closed_matches_oracle(seed, d, p):
    rng = random.Random(seed)
    g = [[0] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            g[i][j] = g[j][i] = rng.randrange(p) * rng.randrange(2)
    W = FpQuadSpace(p, g)
    assert alpha_oracle(W) == alpha_closed(W)


def test_gtilde_is_rational_valued():
    for d in range(3):
        for cls in enumerate_classes(d, 5):
            assert isinstance(gtilde_oracle(class_rep(cls)), Fraction)
