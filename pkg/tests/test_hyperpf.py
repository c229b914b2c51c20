import itertools
import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from invtools.hyperpf import (
    SparseTensor,
    act,
    determinant,
    hyperpfaffian_eval,
    permanent,
    permutation_sign,
    projection_identity_check,
    projection_point,
    random_sparse_tensor,
    random_unimodular,
    sl_invariance_check,
    wedge_pairing,
)

F = Fraction


def inversion_sign(seq):
    inv = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
    return -1 if inv % 2 else 1


def naive_permanent(X):
    d = len(X)
    return sum((math.prod((F(X[i][s[i]]) for i in range(d)), start=F(1)) for s in itertools.permutations(range(d))), F(0))


def test_wedge_pairing_examples():
    assert wedge_pairing(4, (1, 2, 3, 4)) == 1
    assert wedge_pairing(4, (2, 1, 3, 4)) == -1
    assert wedge_pairing(4, (1, 1, 3, 4)) == 0
    with pytest.raises(ValueError):
        wedge_pairing(4, (1, 2, 3))


@settings(max_examples=100, deadline=None)
@given(st.permutations(list(range(1, 8))))
def test_permutation_sign_matches_inversions(perm):
    assert permutation_sign(perm) == inversion_sign(perm)


def test_single_term_values():
    c = F(7, 3)
    assert hyperpfaffian_eval(SparseTensor(2, 1, {(1, 2, 3, 4): c})) == c
    assert hyperpfaffian_eval(SparseTensor(2, 1, {(2, 1, 3, 4): c})) == -c


def test_sparse_tensor_validation():
    with pytest.raises(ValueError):
        SparseTensor(1, 1, {(1, 2, 3): 1})
    with pytest.raises(ValueError):
        SparseTensor(1, 1, {(1, 3): 1})
    t = SparseTensor(1, 2, {(1, 2): F(1, 2), (3, 4): -1})
    assert SparseTensor.from_json(t.to_json()) == t


def test_guard():
    with pytest.raises(ValueError):
        hyperpfaffian_eval(SparseTensor(3, 3, {}))


def pfaffian_pairing_oracle(A):
    """Direct sum of sgn(pi) A[pi1][pi2] A[pi3][pi4] over all 4! orderings."""
    total = F(0)
    for pi in itertools.permutations(range(4)):
        total += inversion_sign(pi) * A[pi[0]][pi[1]] * A[pi[2]][pi[3]]
    return total


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_degree_two_pfaffian_against_oracle(seed):
    rng = random.Random(seed)
    A = [[F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(4)] for _ in range(4)]
    p = SparseTensor(1, 2, {(i + 1, j + 1): A[i][j] for i in range(4) for j in range(4)})
    assert hyperpfaffian_eval(p) == pfaffian_pairing_oracle(A)
    # on antisymmetric input the pairing is 8 times the classical Pfaffian
    S = [[A[i][j] - A[j][i] for j in range(4)] for i in range(4)]
    q = SparseTensor(1, 2, {(i + 1, j + 1): S[i][j] for i in range(4) for j in range(4)})
    pf = S[0][1] * S[2][3] - S[0][2] * S[1][3] + S[0][3] * S[1][2]
    assert hyperpfaffian_eval(q) == 8 * pf


def test_projection_point_shape():
    p = projection_point(2, 1, [[F(5)]])
    assert p.terms == {(1, 2, 3, 4): 5}
    p = projection_point(1, 2, [[1, 2], [3, 4]])
    assert sorted(p.terms) == [(1, 2), (1, 4), (3, 2), (3, 4)]
    for k, d in [(1, 3), (2, 2), (3, 2)]:
        assert len(projection_point(k, d, [[1] * d for _ in range(d)]).terms) == d * d


def test_projection_identity_examples():
    X = [[1, 2], [3, 4]]
    rep = projection_identity_check(2, 2, X)
    assert rep.value == 20 and rep.expected == 20 and rep.ok
    rep = projection_identity_check(1, 2, X)
    assert rep.value == -4 and rep.ok
    assert projection_identity_check(2, 1, [[F(-3, 7)]]).value == F(-3, 7)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), d=st.integers(1, 5))
def test_permanent_and_determinant_oracles(seed, d):
    rng = random.Random(seed)
    X = [[F(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(d)] for _ in range(d)]
    assert permanent(X) == naive_permanent(X)
    assert determinant(X) == sympy.Matrix(X).det()


def test_sl_invariance_examples():
    rng = random.Random(0)
    p = random_sparse_tensor(2, 1, 10, rng)
    ident = [[F(int(i == j)) for j in range(4)] for i in range(4)]
    assert sl_invariance_check(p, ident).ok
    lam = F(3, 2)
    diag = [[F(0)] * 4 for _ in range(4)]
    for i, v in enumerate([lam, 1 / lam, F(1), F(1)]):
        diag[i][i] = v
    assert sl_invariance_check(p, diag).ok
    q = random_sparse_tensor(1, 1, 4, rng)
    upper = [[F(1), F(rng.randint(-9, 9))], [F(0), F(1)]]
    assert sl_invariance_check(q, upper).ok


def test_sl_invariance_rejects_wrong_determinant():
    p = SparseTensor(1, 1, {(1, 2): 1})
    with pytest.raises(ValueError):
        sl_invariance_check(p, [[F(2), F(0)], [F(0), F(1)]])


def test_general_linear_scales_by_determinant():
    # the top exterior power sees g through det(g) = 2, once
    rng = random.Random(4)
    p = random_sparse_tensor(1, 2, 8, rng)
    g = [[F(int(i == j)) for j in range(4)] for i in range(4)]
    g[0][0] = F(2)
    assert hyperpfaffian_eval(act(g, p)) == 2 * hyperpfaffian_eval(p)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), c=st.fractions(min_value=-5, max_value=5, max_denominator=7))
def test_homogeneous_of_degree_n(seed, c):
    rng = random.Random(seed)
    for k, n in [(1, 2), (1, 3), (2, 2)]:
        p = random_sparse_tensor(k, n, 6, rng)
        assert hyperpfaffian_eval(p.scaled(c)) == c**n * hyperpfaffian_eval(p)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_random_unimodular(seed):
    rng = random.Random(seed)
    N = rng.randint(1, 5)
    g = random_unimodular(N, rng)
    assert determinant(g) == 1
