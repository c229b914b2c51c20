"""The action of ST_n x ST_n x ST_n on n x n x n tensors.

``(a, b, c)`` scales the entry ``(i, j, k)`` by ``a_i b_j c_k`` and therefore
scales the coordinate function ``x_ijk`` by ``(a_i b_j c_k)**-1``.  Every
monomial is an eigenvector, so invariance of a monomial only depends on its
three axis marginals.

All triples are 1-based, as are permutations (tuples over ``1..n``).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .circuit import Circuit, CircuitBuilder, component_output, homogeneous_components, substitute_main_vars
from .pit import PitConfig, PitResult, pit
from .rational import format_rational, parse_rational

Triple = tuple[int, int, int]

MAX_ENUMERATE_N = 6
MAX_EXHAUSTIVE_N = 4
MAX_ENCODING_N = 4
MAX_BACKTRACK_N = 8


def _check_triple(t: Sequence[int], n: int) -> Triple:
    if len(t) != 3:
        raise ValueError(f"expected a triple, got {t!r}")
    i, j, k = (int(v) for v in t)
    if not (1 <= i <= n and 1 <= j <= n and 1 <= k <= n):
        raise ValueError(f"index {t!r} outside [1, {n}]^3")
    return i, j, k


@dataclass(frozen=True)
class Tensor3:
    n: int
    entries: Mapping[Triple, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for t, v in self.entries.items():
            q = parse_rational(v)
            if q:
                clean[_check_triple(t, self.n)] = q
        object.__setattr__(self, "entries", clean)

    @property
    def support(self) -> frozenset[Triple]:
        return frozenset(self.entries)

    def __getitem__(self, t: Triple) -> Fraction:
        return self.entries.get(t, Fraction(0))

    def flat(self) -> dict[int, Fraction]:
        """Value of every coordinate keyed by the row-major flat index."""
        n = self.n
        return {
            (i - 1) * n * n + (j - 1) * n + (k - 1): self[(i, j, k)]
            for i in range(1, n + 1)
            for j in range(1, n + 1)
            for k in range(1, n + 1)
        }

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "entries": [[i, j, k, format_rational(v)] for (i, j, k), v in sorted(self.entries.items())],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> Tensor3:
        n = int(doc["n"])
        entries: dict[Triple, Fraction] = {}
        for row in doc["entries"]:
            if len(row) != 4:
                raise ValueError(f"tensor entry must be [i, j, k, value], got {row!r}")
            t = _check_triple(row[:3], n)
            if t in entries:
                raise ValueError(f"duplicate tensor entry {t}")
            entries[t] = parse_rational(row[3])
        return cls(n, entries)


@dataclass(frozen=True)
class ExponentTensor:
    n: int
    exponents: Mapping[Triple, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for t, e in self.exponents.items():
            if not isinstance(e, int) or e < 0:
                raise ValueError(f"exponent of {t} must be a nonnegative integer")
            if e:
                clean[_check_triple(t, self.n)] = e
        object.__setattr__(self, "exponents", clean)

    @property
    def degree(self) -> int:
        return sum(self.exponents.values())

    @classmethod
    def from_triples(cls, n: int, triples: Iterable[Triple]) -> ExponentTensor:
        exps: dict[Triple, int] = {}
        for t in triples:
            exps[tuple(t)] = exps.get(tuple(t), 0) + 1
        return cls(n, exps)


@dataclass(frozen=True)
class MatchingInstance:
    n: int
    edges: frozenset[Triple]

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(_check_triple(e, self.n) for e in self.edges))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> MatchingInstance:
        edges = [tuple(e) for e in edges]
        if len(set(edges)) != len(edges):
            raise ValueError("matching instance contains duplicate triples")
        return cls(n, frozenset(edges))

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def from_json(cls, doc: Mapping) -> MatchingInstance:
        return cls.from_edges(int(doc["n"]), doc["edges"])


@dataclass(frozen=True)
class MatchingMonomial:
    sigma: tuple[int, ...]
    tau: tuple[int, ...]

    def __post_init__(self):
        n = len(self.sigma)
        if sorted(self.sigma) != list(range(1, n + 1)) or sorted(self.tau) != list(range(1, n + 1)):
            raise ValueError("sigma and tau must be permutations of 1..n")

    @property
    def triples(self) -> tuple[Triple, ...]:
        return tuple((i + 1, s, t) for i, (s, t) in enumerate(zip(self.sigma, self.tau)))

    def exponent_tensor(self) -> ExponentTensor:
        return ExponentTensor.from_triples(len(self.sigma), self.triples)


# -- monomials -----------------------------------------------------------


def marginals(E: ExponentTensor) -> tuple[list[int], list[int], list[int]]:
    m1, m2, m3 = [0] * E.n, [0] * E.n, [0] * E.n
    for (i, j, k), e in E.exponents.items():
        m1[i - 1] += e
        m2[j - 1] += e
        m3[k - 1] += e
    return m1, m2, m3


def is_invariant_monomial(E: ExponentTensor) -> bool:
    # each torus factor is cut out by the single relation prod(a) == 1, so the
    # character a**M1 is trivial exactly when M1 is a constant vector
    return all(len(set(M)) <= 1 for M in marginals(E))


def torus_scalar(E: ExponentTensor, a: Sequence[Fraction], b: Sequence[Fraction], c: Sequence[Fraction]) -> Fraction:
    """Factor by which ``(a, b, c)`` rescales the monomial ``x**E``."""
    s = Fraction(1)
    for (i, j, k), e in E.exponents.items():
        s /= (a[i - 1] * b[j - 1] * c[k - 1]) ** e
    return s


def random_torus_element(n: int, rng: random.Random, span: int = 7) -> tuple[list[Fraction], ...]:
    """Three random rational vectors, each with product 1."""
    out = []
    for _ in range(3):
        v = [Fraction(rng.randint(1, span), rng.randint(1, span)) * rng.choice((1, -1)) for _ in range(n - 1)]
        v.append(1 / math.prod(v, start=Fraction(1)))
        out.append(v)
    return tuple(out)


def enumerate_matching_monomials(n: int) -> list[MatchingMonomial]:
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_ENUMERATE_N:
        raise ValueError(f"refusing to list (n!)^2 = {math.factorial(n) ** 2} monomials for n={n} > {MAX_ENUMERATE_N}")
    perms = list(itertools.permutations(range(1, n + 1)))
    return [MatchingMonomial(s, t) for s in perms for t in perms]


@dataclass
class MinDegreeReport:
    n: int
    invariant_counts: dict[int, int]  # degree -> number of invariant monomials
    monomial_counts: dict[int, int]  # degree -> number of monomials enumerated
    matching_count: int
    counterexample: ExponentTensor | None = None
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.counterexample is None and not self.reason

    def to_json(self) -> dict:
        doc = {
            "n": self.n,
            "ok": self.ok,
            "invariant_counts": {str(d): c for d, c in sorted(self.invariant_counts.items())},
            "monomial_counts": {str(d): c for d, c in sorted(self.monomial_counts.items())},
            "matching_count": self.matching_count,
        }
        if self.counterexample is not None:
            doc["counterexample"] = [[*t, e] for t, e in sorted(self.counterexample.exponents.items())]
        if self.reason:
            doc["reason"] = self.reason
        return doc


def verify_min_degree(n: int) -> MinDegreeReport:
    """Exhaustively check degrees 1..n: no invariant monomials below n, and the
    degree-n invariant monomials are exactly the matching monomials."""
    if not 1 <= n <= MAX_EXHAUSTIVE_N:
        raise ValueError(f"exhaustive check needs 1 <= n <= {MAX_EXHAUSTIVE_N}")
    coords = [(i, j, k) for i in range(n) for j in range(n) for k in range(n)]
    matching = {tuple(sorted(_flat(t, n) for t in mm.triples)) for mm in enumerate_matching_monomials(n)}
    report = MinDegreeReport(n, {}, {}, len(matching))
    for d in range(1, n + 1):
        found = 0
        total = 0
        for combo in itertools.combinations_with_replacement(range(n**3), d):
            total += 1
            if not _constant_marginals(combo, coords, n):
                continue
            found += 1
            if d < n or combo not in matching:
                if report.counterexample is None:
                    report.counterexample = ExponentTensor.from_triples(
                        n, (tuple(v + 1 for v in coords[x]) for x in combo)
                    )
        report.invariant_counts[d] = found
        report.monomial_counts[d] = total
    if report.invariant_counts[n] != len(matching) and report.counterexample is None:
        report.reason = "some matching monomial is not invariant"
    return report


def _flat(t: Triple, n: int) -> int:
    i, j, k = t
    return (i - 1) * n * n + (j - 1) * n + (k - 1)


def _constant_marginals(combo, coords, n: int) -> bool:
    for axis in range(3):
        counts = [0] * n
        for x in combo:
            counts[coords[x][axis]] += 1
        if min(counts) != max(counts):
            return False
    return True


# -- the reduction -------------------------------------------------------


def instance_to_tensor(U: MatchingInstance) -> Tensor3:
    return Tensor3(U.n, {e: Fraction(1) for e in U.edges})


def reference_encoding(n: int) -> Circuit:
    """``C(x, y) = sum_m y_m * (m-th matching monomial)``.

    Only a stand-in for the degree-n slice of a genuine succinct encoding:
    its specializations span exactly the matching monomials, which is all the
    decision pipeline reads.  The m-th aux variable belongs to the m-th entry
    of :func:`enumerate_matching_monomials`.
    """
    if not 1 <= n <= MAX_ENCODING_N:
        raise ValueError(f"reference encoding is built for 1 <= n <= {MAX_ENCODING_N}")
    monos = enumerate_matching_monomials(n)
    b = CircuitBuilder(m=n**3, r=len(monos), dims=(n, n, n))
    xs = {}
    for i, j, k in itertools.product(range(1, n + 1), repeat=3):
        xs[(i, j, k)] = b.xvar_at(i, j, k)
    ys = [b.yvar(t) for t in range(len(monos))]
    terms = []
    for y, mono in zip(ys, monos):
        prod = b.product(xs[t] for t in mono.triples)
        terms.append(b.mul(y, prod))
    return b.build([b.sum(terms)])


def matching_slice_pit(U: MatchingInstance, C: Circuit, cfg: PitConfig = PitConfig()) -> PitResult:
    """Degree-n slice of ``C`` at the 0/1 tensor of ``U``, tested for zero."""
    n = U.n
    if C.m != n**3:
        raise ValueError(f"encoding has {C.m} main variables, expected {n**3}")
    comps = homogeneous_components(C, n)
    slice_n = component_output(comps, n, 0, n)
    specialized = substitute_main_vars(slice_n, instance_to_tensor(U).flat())
    return pit(specialized, cfg)


def decide_matching_via_encoding(U: MatchingInstance, C: Circuit, cfg: PitConfig = PitConfig()) -> str:
    """``"YES"`` iff the degree-n slice of ``C`` does not vanish at the instance tensor."""
    return "NO" if matching_slice_pit(U, C, cfg).is_zero else "YES"


def find_matching(U: MatchingInstance) -> list[Triple] | None:
    """A perfect matching of ``U`` by backtracking over the first coordinate."""
    n = U.n
    if n > MAX_BACKTRACK_N:
        raise ValueError(f"backtracking is limited to n <= {MAX_BACKTRACK_N}")
    by_i: list[list[Triple]] = [[] for _ in range(n + 1)]
    for e in sorted(U.edges):
        by_i[e[0]].append(e)
    chosen: list[Triple] = []
    used_j: set[int] = set()
    used_k: set[int] = set()

    def extend(i: int) -> bool:
        if i > n:
            return True
        for e in by_i[i]:
            _, j, k = e
            if j in used_j or k in used_k:
                continue
            used_j.add(j)
            used_k.add(k)
            chosen.append(e)
            if extend(i + 1):
                return True
            chosen.pop()
            used_j.discard(j)
            used_k.discard(k)
        return False

    return chosen if extend(1) else None


def find_invariant_monomial(support: Iterable[Triple], n: int, max_degree: int) -> ExponentTensor | None:
    """Exhaustive search for a nonconstant invariant monomial using only ``support``.

    Constant marginals force the degree to be ``n * c``; for each such degree
    up to ``max_degree`` the exponents are filled slice by slice (first
    coordinate ``i`` gets exactly ``c`` factors) with the other two marginals
    capped at ``c``.
    """
    by_i: list[list[Triple]] = [[] for _ in range(n + 1)]
    for e in sorted(set(support)):
        by_i[e[0]].append(e)
    for c in range(1, max_degree // n + 1):
        cnt_j = [0] * (n + 1)
        cnt_k = [0] * (n + 1)
        picked: list[Triple] = []

        def fill(i: int, start: int, left: int) -> bool:
            if left == 0:
                if i == n:
                    return True
                return fill(i + 1, 0, c)
            row = by_i[i]
            for pos in range(start, len(row)):
                _, j, k = row[pos]
                if cnt_j[j] == c or cnt_k[k] == c:
                    continue
                cnt_j[j] += 1
                cnt_k[k] += 1
                picked.append(row[pos])
                if fill(i, pos, left - 1):
                    return True
                picked.pop()
                cnt_j[j] -= 1
                cnt_k[k] -= 1
            return False

        if fill(1, 0, c):
            return ExponentTensor.from_triples(n, picked)
    return None


def brute_force_matching(U: MatchingInstance) -> str:
    return "YES" if find_matching(U) is not None else "NO"


def random_instance(n: int, edges: int, rng: random.Random) -> MatchingInstance:
    triples = list(itertools.product(range(1, n + 1), repeat=3))
    return MatchingInstance(n, frozenset(rng.sample(triples, edges)))
