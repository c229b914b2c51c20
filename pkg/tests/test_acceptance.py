"""Acceptance criteria, each run at its stated size, tolerance and time limit.

Every test prints one PASS/FAIL line (also repeated in the terminal summary).
Seeds are fixed so the runs are reproducible.
"""

import itertools
import math
import random
import time
from fractions import Fraction

from acceptance_report import record
from corpus import disguised_zero, random_circuit, random_nonzero_aux_circuit
from invtools.circuit import (
    HOMOGENEOUS_SIZE_CONSTANT,
    Assignment,
    const_values,
    evaluate,
    homogeneous_components,
    homogeneous_size_bound,
)
from invtools.hyperpf import (
    projection_identity_check,
    random_sparse_tensor,
    random_unimodular,
    sl_invariance_check,
    wedge_pairing,
)
from invtools.nullcone import fractional_matching, null_cone_membership, verify_fractional_matching, verify_separating_triple
from invtools.pit import PitConfig, pit, verify_witness
from invtools.repaudit import MAX_SYM_DIM, extract_invariant, invariant_dimension, sym_dimension
from invtools.torus import (
    Tensor3,
    brute_force_matching,
    decide_matching_via_encoding,
    find_invariant_monomial,
    random_instance,
    reference_encoding,
    verify_min_degree,
)


def _rational(rng):
    return Fraction(rng.randint(-30, 30), rng.randint(1, 30))


def test_homogeneous_components_correctness():
    start = time.perf_counter()
    rng = random.Random(20240101)
    m, r, r_max = 3, 2, 8
    mismatches = size_violations = const_violations = 0
    for _ in range(200):
        c, _ = random_circuit(rng, size=rng.randint(5, 40), m=m, r=r, max_xdeg=8)
        h = homogeneous_components(c, r_max)
        if h.size > homogeneous_size_bound(c.size, r_max):
            size_violations += 1
        pool = list(const_values(c))
        for v in const_values(h):
            if v in pool:
                pool.remove(v)
            else:
                const_violations += 1
                break
        for _ in range(5):
            a = Assignment({i: _rational(rng) for i in range(m)}, {i: _rational(rng) for i in range(r)})
            if sum(evaluate(h, a)) != evaluate(c, a)[0]:
                mismatches += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == size_violations == const_violations == 0
    detail = (
        f"200 circuits x 5 points, {mismatches} sum mismatches, {size_violations} size violations "
        f"(c = {HOMOGENEOUS_SIZE_CONSTANT}), {const_violations} constant-subset violations"
    )
    assert record("homogeneous components", ok, detail, elapsed, 30) == "PASS"


def test_pit_one_sidedness_and_soundness():
    start = time.perf_counter()
    rng = random.Random(7)
    zero_wrong = 0
    for t in range(50):
        if not pit(disguised_zero(rng), PitConfig(epsilon=Fraction(1, 8), seed=t)).is_zero:
            zero_wrong += 1
    eps = Fraction(1, 8)
    trials = 200
    failures = bad_witnesses = 0
    for t in range(trials):
        c = random_nonzero_aux_circuit(rng, size=rng.randint(5, 40))
        res = pit(c, PitConfig(epsilon=eps, seed=1000 + t))
        if res.is_zero:
            failures += 1
        elif not verify_witness(c, res.witness):
            bad_witnesses += 1
    sigma = math.sqrt(float(eps * (1 - eps)) / trials)
    upper = float(eps) + 3 * sigma
    rate = failures / trials
    elapsed = time.perf_counter() - start
    ok = zero_wrong == 0 and rate <= upper and bad_witnesses == 0
    detail = (
        f"50 disguised zeros, {zero_wrong} answered Nonzero; nonzero failure rate {rate:.3f} "
        f"<= eps + 3 sigma = {upper:.3f}; {bad_witnesses} bad witnesses"
    )
    assert record("PIT one-sidedness/soundness", ok, detail, elapsed, 60) == "PASS"


def test_min_degree_brute_force():
    start = time.perf_counter()
    expected = {1: 1, 2: 4, 3: 36, 4: 576}
    problems = []
    for n, count in expected.items():
        rep = verify_min_degree(n)
        below = [rep.invariant_counts[d] for d in range(1, n)]
        if not rep.ok or any(below) or rep.invariant_counts[n] != count or rep.matching_count != count:
            problems.append(n)
    elapsed = time.perf_counter() - start
    detail = "n = 1..4: no invariants below degree n, exactly 1, 4, 36, 576 at degree n"
    if problems:
        detail += f"; failed at n = {problems}"
    assert record("least-degree torus invariants", not problems, detail, elapsed, 120) == "PASS"


def test_matching_pipeline_equivalence():
    start = time.perf_counter()
    rng = random.Random(3141)
    cfg = PitConfig(epsilon=Fraction(1, 128), seed=99)
    disagreements = 0
    yes = total = 0
    for n in (2, 3, 4):
        C = reference_encoding(n)
        for _ in range(100):
            U = random_instance(n, rng.randint(n, 3 * n), rng)
            truth = brute_force_matching(U)
            if decide_matching_via_encoding(U, C, cfg) != truth:
                disagreements += 1
            yes += truth == "YES"
            total += 1
    elapsed = time.perf_counter() - start
    detail = f"{total} instances (n = 2, 3, 4; {yes} YES), {disagreements} disagreements at eps = 1/128"
    assert record("matching pipeline", disagreements == 0, detail, elapsed, 120) == "PASS"


def test_null_cone_duality():
    start = time.perf_counter()
    rng = random.Random(0)
    both_or_neither = bad_certs = search_mismatches = small = 0
    mismatch_examples = []
    for _ in range(200):
        n = rng.randint(1, 4)
        triples = list(itertools.product(range(1, n + 1), repeat=3))
        support = rng.sample(triples, rng.randint(0, len(triples)))
        verdict = null_cone_membership(Tensor3(n, {t: 1 for t in support}), cross_check=False)
        dual = fractional_matching(support, n)
        if verdict.in_null_cone == (dual is not None):
            both_or_neither += 1
        if verdict.in_null_cone:
            good = verify_separating_triple(support, n, verdict.certificate)
        else:
            good = verify_fractional_matching(support, n, verdict.certificate)
        if dual is not None:
            good = good and verify_fractional_matching(support, n, dual)
        bad_certs += not good
        if n <= 3:
            small += 1
            has_low_degree_invariant = find_invariant_monomial(support, n, 2 * n) is not None
            if has_low_degree_invariant == verdict.in_null_cone:
                search_mismatches += 1
                mismatch_examples.append((n, sorted(support)))
    elapsed = time.perf_counter() - start
    ok = both_or_neither == bad_certs == search_mismatches == 0
    detail = (
        f"200 supports, {both_or_neither} duality violations, {bad_certs} bad certificates, "
        f"{search_mismatches}/{small} disagreements with the degree <= 2n search"
    )
    if mismatch_examples:
        detail += f"; first: {mismatch_examples[0]}"
    assert record("null-cone duality", ok, detail, elapsed, 60) == "PASS"


def test_projection_identity():
    start = time.perf_counter()
    rng = random.Random(11)
    wrong = []
    for k, d in itertools.product((2, 1), (2, 3)):
        for _ in range(20):
            X = [[rng.randint(-9, 9) for _ in range(d)] for _ in range(d)]
            if not projection_identity_check(k, d, X).ok:
                wrong.append((k, d, X))
    elapsed = time.perf_counter() - start
    detail = f"k = 2 against d! per, k = 1 against d! det, d = 2, 3, 80 matrices, {len(wrong)} mismatches"
    assert record("projection identity", not wrong, detail, elapsed, 60) == "PASS"


def test_sl_invariance():
    start = time.perf_counter()
    rng = random.Random(5)
    failures = 0
    nonzero = 0
    for k, n in ((1, 1), (1, 2), (2, 1)):
        N = 2 * k * n
        for _ in range(20):
            p = random_sparse_tensor(k, n, rng.randint(2, 8), rng)
            rep = sl_invariance_check(p, random_unimodular(N, rng))
            failures += not rep.ok
            nonzero += rep.before != 0
    elapsed = time.perf_counter() - start
    detail = f"60 random det-1 rational g over (k,n) in (1,1), (1,2), (2,1), {failures} failures, {nonzero} nonzero values"
    assert record("SL-invariance", failures == 0, detail, elapsed, 120) == "PASS"


def test_uniqueness_audit():
    start = time.perf_counter()
    problems = []
    for args, want in (((2, 2, 1), 1), ((4, 4, 1), 1), ((4, 2, 1), 0)):
        got = invariant_dimension(*args)
        if got != want:
            problems.append(f"dim{args} = {got}")
    nondivisible = 0
    for N, m, d in itertools.product(range(2, 7), range(1, 5), range(1, 5)):
        if (m * d) % N == 0 or sym_dimension(N, m, d) > MAX_SYM_DIM:
            continue
        nondivisible += 1
        if invariant_dimension(N, m, d) != 0:
            problems.append(f"dim{(N, m, d)} != 0")
    for N, m in ((2, 2), (4, 4)):
        inv = extract_invariant(N, m, 1)
        scale = None
        for t in itertools.product(range(1, N + 1), repeat=m):
            c = inv.coords.get((t,), Fraction(0))
            sign = wedge_pairing(N, t)
            if sign == 0:
                if c != 0:
                    problems.append(f"extract({N},{m},1) nonzero off the wedge at {t}")
                continue
            ratio = c / sign
            scale = ratio if scale is None else scale
            if ratio != scale or ratio == 0:
                problems.append(f"extract({N},{m},1) off-sign at {t}")
    elapsed = time.perf_counter() - start
    detail = (
        f"dims 1, 1, 0 at (2,2,1), (4,4,1), (4,2,1); {nondivisible} guarded cases with N not dividing md all 0; "
        "extracted invariants proportional to the wedge"
    )
    if problems:
        detail += f"; problems: {problems[:3]}"
    assert record("uniqueness audit", not problems, detail, elapsed, 300) == "PASS"
