"""Brute-force dimension of SL_N-invariants in Sym^d((C^N)^{(x) m}).

A vector is SL_N-invariant iff the Lie algebra sl_N kills it.  We use the
N^2 - 1 generators ``E_ab`` (a != b) and ``E_aa - E_{a+1,a+1}``, acting on
symmetric tensors by the product rule over all ``d * m`` tensor slots.

Computations run in the monomial model: the symmetric tensor ``b_M`` (sum of
all distinct arrangements of the multiset ``M`` of index tuples) corresponds to
``mult(M) * z^M``, and the Lie algebra acts on monomials as derivations.  The
diagonal generators are diagonal in this basis, so their joint kernel is the
span of the *weight-zero* multisets, those using every index ``1..N`` equally
often.  The off-diagonal constraints are then eliminated exactly on that span
(sparse rational row reduction).
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

MAX_SYM_DIM = 20_000

Multiset = tuple[tuple[int, ...], ...]


def sym_dimension(N: int, m: int, d: int) -> int:
    return math.comb(N**m + d - 1, d)


def _check_guard(N: int, m: int, d: int):
    if N < 1 or m < 1 or d < 1:
        raise ValueError("N, m, d must be positive")
    dim = sym_dimension(N, m, d)
    if dim > MAX_SYM_DIM:
        raise ValueError(f"dim Sym^{d}((C^{N})^{m}) = {dim} exceeds the guard {MAX_SYM_DIM}")


def weight_zero_basis(N: int, m: int, d: int) -> list[Multiset]:
    """Canonically ordered multisets (sorted lists of 0-based tuples) killed by
    every diagonal generator ``E_aa - E_{a+1,a+1}``.

    On ``z^M`` that generator acts by the scalar ``count_a(M) - count_{a+1}(M)``.
    """
    tuples = list(itertools.product(range(N), repeat=m))
    basis = []
    for M in itertools.combinations_with_replacement(tuples, d):
        counts = [0] * N
        for t in M:
            for i in t:
                counts[i] += 1
        if all(counts[a] - counts[a + 1] == 0 for a in range(N - 1)):
            basis.append(M)
    return basis


def _raise_lower(M: Multiset, a: int, b: int) -> Counter:
    """Image of ``z^M`` under the derivation induced by ``E_ab``."""
    out: Counter = Counter()
    mult = Counter(M)
    for t, mu in mult.items():
        rest = list(M)
        rest.remove(t)
        for s, v in enumerate(t):
            if v == b:
                t2 = t[:s] + (a,) + t[s + 1 :]
                out[tuple(sorted(rest + [t2]))] += mu
    return out


def _constraint_matrix(N: int, basis: list[Multiset]) -> DomainMatrix:
    """Sparse matrix over QQ whose rows are the coordinates of ``E_ab z^M`` (a != b)."""
    col = {M: i for i, M in enumerate(basis)}
    rows: dict[int, dict[int, object]] = {}
    for a in range(N):
        for b in range(N):
            if a == b:
                continue
            images: dict[Multiset, dict[int, object]] = {}
            for M in basis:
                for image, coef in _raise_lower(M, a, b).items():
                    images.setdefault(image, {})[col[M]] = QQ(coef)
            for image in sorted(images):
                rows[len(rows)] = images[image]
    return DomainMatrix(rows, (len(rows), len(basis)), QQ)


def invariant_dimension(N: int, m: int, d: int) -> int:
    _check_guard(N, m, d)
    basis = weight_zero_basis(N, m, d)
    if not basis:
        return 0
    return len(basis) - _constraint_matrix(N, basis).rank()


@dataclass(frozen=True)
class Invariant:
    N: int
    m: int
    d: int
    coords: dict[Multiset, Fraction]  # symmetric-tensor coordinates, 1-based tuples

    def residual_is_zero(self) -> bool:
        """Every generator kills the vector (checked afresh, in the monomial model)."""
        poly = {
            tuple(tuple(i - 1 for i in t) for t in M): c * _arrangements(M) for M, c in self.coords.items()
        }
        for a in range(self.N):
            for b in range(self.N):
                if a == b:
                    continue
                acc: Counter = Counter()
                for M, c in poly.items():
                    for image, coef in _raise_lower(M, a, b).items():
                        acc[image] += c * coef
                if any(acc.values()):
                    return False
        # diagonal generators: weight zero by construction, verify anyway
        for M in poly:
            counts = Counter(i for t in M for i in t)
            if len({counts.get(i, 0) for i in range(self.N)}) != 1:
                return False
        return True


def _arrangements(M) -> int:
    """Number of distinct orderings of the multiset ``M``."""
    out = math.factorial(len(M))
    for mu in Counter(M).values():
        out //= math.factorial(mu)
    return out


def extract_invariant(N: int, m: int, d: int) -> Invariant:
    """The unique invariant symmetric tensor, scaled so its first nonzero coordinate is +1."""
    _check_guard(N, m, d)
    basis = weight_zero_basis(N, m, d)
    if not basis:
        raise ValueError(f"no invariants in Sym^{d}((C^{N})^{m}) (dimension 0)")
    kernel = _constraint_matrix(N, basis).nullspace().to_Matrix()
    if kernel.rows != 1:
        raise ValueError(f"invariant space has dimension {kernel.rows}, not 1")
    vec = [Fraction(int(v.p), int(v.q)) for v in kernel.row(0)]
    coords = {}
    for M, c in zip(basis, vec):
        if c:
            coords[tuple(tuple(i + 1 for i in t) for t in M)] = c / _arrangements(M)
    first = coords[min(coords)]
    return Invariant(N, m, d, {M: c / first for M, c in sorted(coords.items())})
