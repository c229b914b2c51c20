"""Hyperpfaffian evaluation on sparse order-2k tensors.

``Pf_{k,n}(p)`` is the pairing of ``e_1 ^ ... ^ e_N`` (``N = 2kn``) with
``p^{(x) n}``.  We normalize the pairing so that a basis tensor
``e_pi(1) (x) ... (x) e_pi(N)`` pairs to ``sgn(pi)`` when ``pi`` is a
permutation and to 0 otherwise.  The 1/2-scaled wedge convention differs from
this by a global constant only; with the sign convention the projection
identity ``Pf(p(X)) = d! * per(X)`` holds verbatim.

Indices are 1-based throughout.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .rational import format_rational, parse_rational

MAX_KN = 8
MAX_PERMANENT_D = 10
MAX_LEAVES = 50_000_000

Matrix = Sequence[Sequence[Fraction]]


@dataclass(frozen=True)
class HyperPfParams:
    k: int
    n: int

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise ValueError("k and n must be positive")

    @property
    def N(self) -> int:
        return 2 * self.k * self.n

    @property
    def order(self) -> int:
        return 2 * self.k


@dataclass(frozen=True)
class SparseTensor:
    k: int
    n: int
    terms: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        params = HyperPfParams(self.k, self.n)
        clean = {}
        for idx, c in self.terms.items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != params.order:
                raise ValueError(f"term {idx} has order {len(idx)}, expected {params.order}")
            if any(not 1 <= i <= params.N for i in idx):
                raise ValueError(f"term {idx} has an index outside 1..{params.N}")
            clean[idx] = clean.get(idx, Fraction(0)) + parse_rational(c)
        object.__setattr__(self, "terms", clean)

    @property
    def params(self) -> HyperPfParams:
        return HyperPfParams(self.k, self.n)

    def scaled(self, c: Fraction) -> SparseTensor:
        return SparseTensor(self.k, self.n, {t: c * v for t, v in self.terms.items()})

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "terms": [[list(t), format_rational(v)] for t, v in sorted(self.terms.items())],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> SparseTensor:
        terms: dict[tuple[int, ...], Fraction] = {}
        for entry in doc["terms"]:
            idx, value = entry
            idx = tuple(int(i) for i in idx)
            terms[idx] = terms.get(idx, Fraction(0)) + parse_rational(value)
        return cls(int(doc["k"]), int(doc["n"]), terms)


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of a sequence of distinct items, by cycle counting over their ranks."""
    order = sorted(range(len(seq)), key=seq.__getitem__)
    seen = [False] * len(seq)
    sign = 1
    for start in range(len(seq)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def wedge_pairing(N: int, tup: Sequence[int]) -> int:
    if len(tup) != N:
        raise ValueError(f"expected {N} indices, got {len(tup)}")
    if any(not 1 <= i <= N for i in tup):
        raise ValueError(f"indices must lie in 1..{N}")
    if len(set(tup)) != N:
        return 0
    return permutation_sign(tup)


def _block_data(idx: tuple[int, ...]) -> tuple[int, int] | None:
    mask = 0
    inv = 0
    for pos, i in enumerate(idx):
        bit = 1 << (i - 1)
        if mask & bit:
            return None
        inv += bin(mask >> i).count("1")  # earlier entries larger than i
        mask |= bit
    return mask, inv & 1


def hyperpfaffian_eval(p: SparseTensor) -> Fraction:
    """Sum over ordered n-tuples of terms of the coefficient product times the
    sign pairing of the concatenated indices.

    Tuples are grown term by term and abandoned as soon as two terms share an
    index; the sign is maintained incrementally from inversion counts.
    """
    params = p.params
    if params.k * params.n > MAX_KN:
        raise ValueError(f"k*n = {params.k * params.n} exceeds the desk-scale guard {MAX_KN}")
    blocks = []
    for idx, c in sorted(p.terms.items()):
        if not c:
            continue
        data = _block_data(idx)
        if data is not None:
            blocks.append((data[0], data[1], idx, c))
    if len(blocks) ** params.n > MAX_LEAVES and len(blocks) > 1:
        raise ValueError(f"{len(blocks)}^{params.n} term tuples exceed the enumeration guard")

    total = Fraction(0)
    n = params.n

    def grow(depth: int, used: int, parity: int, coef: Fraction):
        nonlocal total
        if depth == n:
            total += -coef if parity else coef
            return
        for mask, inv, idx, c in blocks:
            if used & mask:
                continue
            cross = 0
            for i in idx:
                cross += bin(used >> i).count("1")
            grow(depth + 1, used | mask, (parity + inv + cross) & 1, coef * c)

    grow(0, 0, 0, Fraction(1))
    return total


# -- the projection to permanent / determinant ---------------------------


def projection_point(k: int, d: int, X: Matrix) -> SparseTensor:
    """Sum over (i, j) of ``X[i][j]`` times the basis tensor with first half
    ``1+2ki .. k+2ki`` and second half ``k+1+2kj .. 2k+2kj`` (0-based i, j)."""
    if len(X) != d or any(len(row) != d for row in X):
        raise ValueError(f"matrix must be {d} x {d}")
    terms = {}
    for i in range(d):
        for j in range(d):
            left = tuple(range(1 + 2 * k * i, k + 1 + 2 * k * i))
            right = tuple(range(k + 1 + 2 * k * j, 2 * k + 1 + 2 * k * j))
            terms[left + right] = parse_rational(X[i][j])
    return SparseTensor(k, d, terms)


def permanent(X: Matrix) -> Fraction:
    """Ryser's inclusion-exclusion formula."""
    d = len(X)
    if d > MAX_PERMANENT_D:
        raise ValueError(f"permanent guard is d <= {MAX_PERMANENT_D}")
    if d == 0:
        return Fraction(1)
    rows = [[parse_rational(v) for v in row] for row in X]
    total = Fraction(0)
    for size in range(1, d + 1):
        sign = -1 if (d - size) % 2 else 1
        for cols in itertools.combinations(range(d), size):
            prod = Fraction(1)
            for row in rows:
                s = sum((row[c] for c in cols), Fraction(0))
                if not s:
                    prod = Fraction(0)
                    break
                prod *= s
            total += sign * prod
    return total


def determinant(X: Matrix) -> Fraction:
    A = [[parse_rational(v) for v in row] for row in X]
    d = len(A)
    det = Fraction(1)
    for col in range(d):
        piv = next((r for r in range(col, d) if A[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det *= A[col][col]
        for r in range(col + 1, d):
            f = A[r][col] / A[col][col]
            if f:
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return det


@dataclass(frozen=True)
class ProjectionReport:
    k: int
    d: int
    value: Fraction
    expected: Fraction
    kind: str  # "permanent" for even k, "determinant" for odd k

    @property
    def ok(self) -> bool:
        return self.value == self.expected

    def to_json(self) -> dict:
        return {
            "eval": format_rational(self.value),
            "expected": format_rational(self.expected),
            "ok": self.ok,
        }


def projection_identity_check(k: int, d: int, X: Matrix) -> ProjectionReport:
    if k * d > MAX_KN:
        raise ValueError(f"k*d = {k * d} exceeds the desk-scale guard {MAX_KN}")
    value = hyperpfaffian_eval(projection_point(k, d, X))
    if k % 2 == 0:
        kind, base = "permanent", permanent(X)
    else:
        kind, base = "determinant", determinant(X)
    return ProjectionReport(k, d, value, math.factorial(d) * base, kind)


# -- SL invariance -------------------------------------------------------


def act(g: Matrix, p: SparseTensor) -> SparseTensor:
    """Apply ``g`` to every tensor slot of ``p``."""
    N = p.params.N
    if len(g) != N or any(len(row) != N for row in g):
        raise ValueError(f"g must be {N} x {N}")
    G = [[parse_rational(v) for v in row] for row in g]
    cols = [[(i + 1, G[i][j]) for i in range(N) if G[i][j]] for j in range(N)]
    out: dict[tuple[int, ...], Fraction] = {}
    for idx, c in p.terms.items():
        if not c:
            continue
        for choice in itertools.product(*(cols[j - 1] for j in idx)):
            coef = c
            for _, v in choice:
                coef *= v
            key = tuple(i for i, _ in choice)
            out[key] = out.get(key, Fraction(0)) + coef
    return SparseTensor(p.k, p.n, {t: v for t, v in out.items() if v})


@dataclass(frozen=True)
class InvarianceReport:
    before: Fraction
    after: Fraction

    @property
    def ok(self) -> bool:
        return self.before == self.after


def sl_invariance_check(p: SparseTensor, g: Matrix) -> InvarianceReport:
    if determinant(g) != 1:
        raise ValueError("g must have determinant exactly 1")
    return InvarianceReport(hyperpfaffian_eval(p), hyperpfaffian_eval(act(g, p)))


def random_unimodular(N: int, rng: random.Random, span: int = 3) -> list[list[Fraction]]:
    """``D L U`` with random rational unit-triangular ``L``, ``U`` and a diagonal
    ``D`` of determinant one."""

    def entry():
        return Fraction(rng.randint(-span, span), rng.randint(1, span))

    L = [[Fraction(int(i == j)) if j >= i else entry() for j in range(N)] for i in range(N)]
    U = [[Fraction(int(i == j)) if j <= i else entry() for j in range(N)] for i in range(N)]
    diag = [Fraction(rng.randint(1, span), rng.randint(1, span)) * rng.choice((1, -1)) for _ in range(N - 1)]
    diag.append(1 / math.prod(diag, start=Fraction(1)))
    LU = [[sum((L[i][t] * U[t][j] for t in range(N)), Fraction(0)) for j in range(N)] for i in range(N)]
    return [[diag[i] * LU[i][j] for j in range(N)] for i in range(N)]


def random_sparse_tensor(k: int, n: int, terms: int, rng: random.Random, span: int = 5) -> SparseTensor:
    N = 2 * k * n
    out = {}
    for _ in range(terms):
        idx = tuple(rng.randint(1, N) for _ in range(2 * k))
        out[idx] = Fraction(rng.randint(-span, span), rng.randint(1, span))
    return SparseTensor(k, n, out)
