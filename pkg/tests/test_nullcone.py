import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from invtools.nullcone import (
    FractionalMatching,
    SeparatingTriple,
    fractional_matching,
    null_cone_membership,
    verify_fractional_matching,
    verify_separating_triple,
)
from invtools.torus import ExponentTensor, Tensor3, find_invariant_monomial, is_invariant_monomial

F = Fraction

# A support of side 3 whose only fractional perfect matchings have
# denominator 9, so its least-degree invariant monomial has degree 9 > 2n.
DEGREE_NINE_SUPPORT = [(3, 1, 1), (2, 1, 3), (2, 3, 2), (1, 3, 1), (3, 3, 2), (3, 3, 3), (1, 2, 2), (2, 2, 1)]


def tensor(n, support):
    return Tensor3(n, {t: 1 for t in support})


def random_support(rng, n):
    triples = list(itertools.product(range(1, n + 1), repeat=3))
    return rng.sample(triples, rng.randint(0, len(triples)))


def scipy_margin(n, support):
    """t* from a floating-point solve of the same program with full x, y, z."""
    nv = 3 * n + 1
    A_ub, b_ub = [], []
    for i, j, k in support:
        row = np.zeros(nv)
        row[i - 1] = row[n + j - 1] = row[2 * n + k - 1] = -1
        row[-1] = 1
        A_ub.append(row)
        b_ub.append(0)
    A_eq = np.zeros((3, nv))
    for axis in range(3):
        A_eq[axis, axis * n : (axis + 1) * n] = 1
    c = np.zeros(nv)
    c[-1] = -1
    bounds = [(None, None)] * (3 * n) + [(None, 1)]
    res = linprog(c, A_ub=np.array(A_ub) if A_ub else None, b_ub=b_ub or None, A_eq=A_eq, b_eq=np.zeros(3),
                  bounds=bounds, method="highs")
    assert res.status == 0
    return -res.fun


def test_zero_tensor_is_in_null_cone():
    v = null_cone_membership(Tensor3(2))
    assert v.in_null_cone and v.certificate.margin == 1
    assert v.to_json()["t"] == "1"


def test_diagonal_tensor_is_not_in_null_cone():
    v = null_cone_membership(tensor(2, [(1, 1, 1), (2, 2, 2)]))
    assert not v.in_null_cone
    assert v.certificate.weights == {(1, 1, 1): F(1, 2), (2, 2, 2): F(1, 2)}


def test_single_entry_separates():
    v = null_cone_membership(tensor(2, [(1, 1, 1)]))
    assert v.in_null_cone
    cert = v.certificate
    assert cert.margin == 1
    assert verify_separating_triple([(1, 1, 1)], 2, cert)
    # the direction x = y = z = (1/2, -1/2) gives margin 3/2 before capping
    half = (F(1, 2), F(-1, 2))
    assert verify_separating_triple([(1, 1, 1)], 2, SeparatingTriple(half, half, half, F(3, 2)))


def test_fractional_matching_examples():
    for n in (1, 2, 3, 4):
        fm = fractional_matching([(i, i, i) for i in range(1, n + 1)], n)
        assert fm.weights == {(i, i, i): F(1, n) for i in range(1, n + 1)}
    assert fractional_matching([(1, 1, 1), (1, 2, 2)], 2) is None
    assert fractional_matching([], 2) is None


def test_certificate_checkers_reject_bad_certificates():
    sup = [(1, 1, 1), (2, 2, 2)]
    assert not verify_fractional_matching(sup, 2, FractionalMatching({(1, 1, 1): F(1)}))
    assert not verify_fractional_matching(sup, 2, FractionalMatching({(1, 1, 1): F(1, 2), (1, 2, 2): F(1, 2)}))
    assert not verify_separating_triple(sup, 2, SeparatingTriple((F(1), F(0)), (F(0), F(0)), (F(0), F(0)), F(1)))


@settings(max_examples=120, deadline=None)
@given(n=st.integers(1, 4), seed=st.integers(0, 10**6))
def test_exactly_one_certificate_and_scipy_agrees(n, seed):
    rng = random.Random(seed)
    sup = random_support(rng, n)
    v = null_cone_membership(tensor(n, sup))
    dual = fractional_matching(sup, n)
    assert v.in_null_cone == (dual is None)
    if v.in_null_cone:
        assert verify_separating_triple(sup, n, v.certificate)
        assert v.certificate.margin == 1
    else:
        assert verify_fractional_matching(sup, n, v.certificate)
    t_float = scipy_margin(n, sup)
    assert (t_float > 1e-9) == v.in_null_cone


@settings(max_examples=60, deadline=None)
@given(n=st.integers(2, 4), seed=st.integers(0, 10**6))
def test_adding_support_can_only_leave_the_null_cone(n, seed):
    rng = random.Random(seed)
    sup = random_support(rng, n)
    extra = random_support(rng, n)
    before = null_cone_membership(tensor(n, sup), cross_check=False).in_null_cone
    after = null_cone_membership(tensor(n, set(sup) | set(extra)), cross_check=False).in_null_cone
    assert before or not after


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 3), seed=st.integers(0, 10**6))
def test_verdict_depends_only_on_support(n, seed):
    rng = random.Random(seed)
    sup = random_support(rng, n)
    scaled = Tensor3(n, {t: F(rng.choice((-1, 1)) * rng.randint(1, 9), rng.randint(1, 9)) for t in sup})
    assert null_cone_membership(scaled).in_null_cone == null_cone_membership(tensor(n, sup)).in_null_cone


def monomial_from_matching(fm, n):
    L = n
    for w in fm.weights.values():
        L = L * w.denominator // math.gcd(L, w.denominator)
    return ExponentTensor(n, {t: int(w * L) for t, w in fm.weights.items()})


@settings(max_examples=80, deadline=None)
@given(n=st.integers(1, 3), seed=st.integers(0, 10**6))
def test_fractional_matchings_and_invariant_monomials_correspond(n, seed):
    rng = random.Random(seed)
    sup = random_support(rng, n)
    v = null_cone_membership(tensor(n, sup))
    if v.in_null_cone:
        # no invariant monomial on the support at any degree the witness bound allows
        assert find_invariant_monomial(sup, n, 3 * n) is None
        return
    E = monomial_from_matching(v.certificate, n)
    assert is_invariant_monomial(E) and set(E.exponents) <= set(sup)
    back = FractionalMatching({t: F(e, E.degree) for t, e in E.exponents.items()})
    assert verify_fractional_matching(sup, n, back)


def test_degree_two_n_search_misses_a_degree_nine_invariant():
    n = 3
    v = null_cone_membership(tensor(n, DEGREE_NINE_SUPPORT))
    assert not v.in_null_cone
    assert {w.denominator for w in v.certificate.weights.values()} == {9}
    assert find_invariant_monomial(DEGREE_NINE_SUPPORT, n, 2 * n) is None
    E = find_invariant_monomial(DEGREE_NINE_SUPPORT, n, 9)
    assert E is not None and E.degree == 9 and is_invariant_monomial(E)
