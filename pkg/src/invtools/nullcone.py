"""Null-cone membership for the ST_n^3 action on 3-tensors.

By the Hilbert-Mumford criterion ``T`` lies in the null cone iff some
``x, y, z`` with zero coordinate sums satisfy ``x_i + y_j + z_k > 0`` on the
support of ``T``.  The strict system becomes the linear program

    max t   s.t.  x_i + y_j + z_k >= t  on supp(T),   sum x = sum y = sum z = 0,   t <= 1

and ``T`` is in the null cone iff ``t* > 0``.  When ``t* = 0`` the optimal
dual is a fractional perfect matching on the support: nonnegative weights of
total mass one whose three axis marginals are all ``1/n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import lp
from .rational import format_rational
from .torus import Tensor3, Triple


@dataclass(frozen=True)
class SeparatingTriple:
    x: tuple[Fraction, ...]
    y: tuple[Fraction, ...]
    z: tuple[Fraction, ...]
    margin: Fraction

    def to_json(self) -> dict:
        return {
            "x": [format_rational(v) for v in self.x],
            "y": [format_rational(v) for v in self.y],
            "z": [format_rational(v) for v in self.z],
            "t": format_rational(self.margin),
        }


@dataclass(frozen=True)
class FractionalMatching:
    weights: Mapping[Triple, Fraction]

    def to_json(self) -> dict:
        return {"weights": [[*t, format_rational(w)] for t, w in sorted(self.weights.items()) if w]}


@dataclass(frozen=True)
class NullConeVerdict:
    in_null_cone: bool
    certificate: SeparatingTriple | FractionalMatching
    pivots: int = 0

    def to_json(self) -> dict:
        doc = {"verdict": "InNullCone" if self.in_null_cone else "NotInNullCone"}
        doc.update(self.certificate.to_json())
        return doc


def verify_separating_triple(support: Iterable[Triple], n: int, cert: SeparatingTriple) -> bool:
    if not (len(cert.x) == len(cert.y) == len(cert.z) == n):
        return False
    if sum(cert.x) != 0 or sum(cert.y) != 0 or sum(cert.z) != 0:
        return False
    if cert.margin <= 0:
        return False
    return all(cert.x[i - 1] + cert.y[j - 1] + cert.z[k - 1] >= cert.margin for i, j, k in support)


def verify_fractional_matching(support: Iterable[Triple], n: int, fm: FractionalMatching) -> bool:
    support = set(support)
    if any(t not in support or w < 0 for t, w in fm.weights.items()):
        return False
    if sum(fm.weights.values()) != 1:
        return False
    target = Fraction(1, n)
    for axis in range(3):
        marg = [Fraction(0)] * n
        for t, w in fm.weights.items():
            marg[t[axis] - 1] += w
        if any(v != target for v in marg):
            return False
    return True


def _margin_lp(support: list[Triple], n: int) -> lp.LPResult:
    # variables x_1..x_{n-1}, y_1..y_{n-1}, z_1..z_{n-1}, t; the last coordinate of
    # each vector is minus the sum of the others
    h = n - 1
    nv = 3 * h + 1
    A_ub = []
    for e in support:
        row = [Fraction(0)] * nv
        for axis, idx in enumerate(e):
            if idx <= h:
                row[axis * h + idx - 1] -= 1
            else:
                for q in range(h):
                    row[axis * h + q] += 1
        row[-1] = Fraction(1)
        A_ub.append(row)
    A_ub.append([Fraction(0)] * (nv - 1) + [Fraction(1)])
    b_ub = [Fraction(0)] * len(support) + [Fraction(1)]
    c = [0] * (nv - 1) + [1]
    return lp.maximize(c, A_ub, b_ub, free=range(nv))


def _full_vector(part: list[Fraction]) -> tuple[Fraction, ...]:
    return tuple(part) + (-sum(part, Fraction(0)),)


def fractional_matching(support: Iterable[Triple], n: int) -> FractionalMatching | None:
    """Feasibility solve for a fractional perfect matching on ``support``."""
    edges = sorted(set(support))
    if not edges:
        return None
    A_eq, b_eq = [], []
    for axis in range(3):
        for v in range(1, n + 1):
            A_eq.append([1 if e[axis] == v else 0 for e in edges])
            b_eq.append(Fraction(1, n))
    w = lp.feasible_point(len(edges), A_eq, b_eq)
    if w is None:
        return None
    return FractionalMatching({e: wi for e, wi in zip(edges, w) if wi})


def null_cone_membership(T: Tensor3, cross_check: bool = True) -> NullConeVerdict:
    n = T.n
    support = sorted(T.support)
    res = _margin_lp(support, n)
    assert res.status == lp.OPTIMAL, res.status
    h = n - 1
    t_star = res.x[-1]
    if t_star > 0:
        x = res.x
        cert = SeparatingTriple(
            _full_vector(x[0:h]), _full_vector(x[h : 2 * h]), _full_vector(x[2 * h : 3 * h]), t_star
        )
        assert verify_separating_triple(support, n, cert)
        verdict = NullConeVerdict(True, cert, res.pivots)
    else:
        w = res.duals_ub[: len(support)]
        total = sum(w, Fraction(0))
        fm = FractionalMatching({e: wi / total for e, wi in zip(support, w) if wi})
        assert verify_fractional_matching(support, n, fm)
        verdict = NullConeVerdict(False, fm, res.pivots)
    if cross_check:
        dual = fractional_matching(support, n)
        # exactly one of the two certificates exists
        assert (dual is None) == verdict.in_null_cone
        if dual is not None:
            assert verify_fractional_matching(support, n, dual)
    return verdict
