"""Arithmetic circuits over exact rationals.

A circuit is a list of binary gates in topological order.  Variables come in
two sorts: *main* variables ``x`` (the coordinates of the representation) and
*auxiliary* variables ``y`` (the parameters of a succinct encoding).  Degree
and homogeneity always refer to the main variables; auxiliary variables
behave like constants for that purpose.

Main and auxiliary variables are stored by flat 0-based index.  A circuit may
declare ``dims`` for its main variables (``(n, n, n)`` for 3-tensors); the
JSON form then addresses them by 1-based coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence, Union

from .rational import bit_complexity, format_rational, parse_rational


class CircuitError(ValueError):
    """Structural defect in a circuit, pinned to a gate id when possible."""

    def __init__(self, message: str, gate_id: int | None = None):
        if gate_id is not None:
            message = f"gate {gate_id}: {message}"
        super().__init__(message)
        self.gate_id = gate_id


class BadPrimeError(ArithmeticError):
    """A rational constant has a denominator divisible by the modulus."""

    def __init__(self, p: int, value: Fraction):
        super().__init__(f"denominator of {format_rational(value)} vanishes mod {p}")
        self.p = p
        self.value = value


# -- gates ---------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class MainVar:
    index: int


@dataclass(frozen=True)
class AuxVar:
    index: int


@dataclass(frozen=True)
class Add:
    left: int
    right: int


@dataclass(frozen=True)
class Mul:
    left: int
    right: int


Gate = Union[Const, MainVar, AuxVar, Add, Mul]


@dataclass(frozen=True)
class Circuit:
    """Immutable gate list.  ``None`` in ``outputs`` is the structural zero."""

    gates: tuple[Gate, ...]
    outputs: tuple[int | None, ...]
    m: int
    r: int
    dims: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if self.dims is None:
            object.__setattr__(self, "dims", (self.m,))
        else:
            object.__setattr__(self, "dims", tuple(self.dims))

    @property
    def size(self) -> int:
        return len(self.gates)

    def with_outputs(self, outputs: Iterable[int | None]) -> Circuit:
        return Circuit(self.gates, tuple(outputs), self.m, self.r, self.dims)


class CircuitBuilder:
    """Append-only helper that hands out gate ids.

    Arguments to :meth:`add` / :meth:`mul` may be ``None`` (structural zero);
    no gate is emitted in that case.
    """

    def __init__(self, m: int = 0, r: int = 0, dims: Sequence[int] | None = None):
        self.m = m
        self.r = r
        self.dims = tuple(dims) if dims is not None else None
        self.gates: list[Gate] = []
        self._consts: dict[Fraction, int] = {}

    def _push(self, gate: Gate) -> int:
        self.gates.append(gate)
        return len(self.gates) - 1

    def const(self, value, share: bool = False) -> int:
        q = parse_rational(value)
        if share and q in self._consts:
            return self._consts[q]
        gid = self._push(Const(q))
        if share:
            self._consts[q] = gid
        return gid

    def xvar(self, index: int) -> int:
        return self._push(MainVar(index))

    def xvar_at(self, *coords: int) -> int:
        return self._push(MainVar(flat_index(coords, self.dims or (self.m,))))

    def yvar(self, index: int) -> int:
        return self._push(AuxVar(index))

    def add(self, a: int | None, b: int | None) -> int | None:
        if a is None:
            return b
        if b is None:
            return a
        return self._push(Add(a, b))

    def mul(self, a: int | None, b: int | None) -> int | None:
        if a is None or b is None:
            return None
        return self._push(Mul(a, b))

    def neg(self, a: int | None) -> int | None:
        return self.mul(self.const(-1, share=True), a)

    def sub(self, a: int | None, b: int | None) -> int | None:
        return self.add(a, self.neg(b))

    def sum(self, ids: Iterable[int | None]) -> int | None:
        acc = None
        for g in ids:
            acc = self.add(acc, g)
        return acc

    def product(self, ids: Iterable[int | None]) -> int | None:
        acc: int | None = None
        first = True
        for g in ids:
            if first:
                acc, first = g, False
            else:
                acc = self.mul(acc, g)
        if first:
            return self.const(1, share=True)
        return acc

    def build(self, outputs: Sequence[int | None]) -> Circuit:
        c = Circuit(tuple(self.gates), tuple(outputs), self.m, self.r, self.dims)
        validate(c)
        return c


def flat_index(coords: Sequence[int], dims: Sequence[int]) -> int:
    """Row-major flat index of 1-based ``coords``."""
    if len(coords) != len(dims):
        raise ValueError(f"expected {len(dims)} coordinates, got {len(coords)}")
    idx = 0
    for c, d in zip(coords, dims):
        if not 1 <= c <= d:
            raise ValueError(f"coordinate {c} outside 1..{d}")
        idx = idx * d + (c - 1)
    return idx


def unflat_index(idx: int, dims: Sequence[int]) -> tuple[int, ...]:
    coords = []
    for d in reversed(dims):
        idx, c = divmod(idx, d)
        coords.append(c + 1)
    return tuple(reversed(coords))


# -- validation and metrics ----------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    size: int  # s, number of gates
    m: int
    r: int
    const_bits: int  # b, max bit complexity over Const gates
    total_const_bits: int

    @property
    def encoding_size(self) -> int:
        """Gate count plus constant bit complexity."""
        return self.size + self.total_const_bits


def validate(circuit: Circuit) -> ValidationReport:
    if circuit.m < 0 or circuit.r < 0:
        raise CircuitError("variable counts must be nonnegative")
    if math.prod(circuit.dims) != circuit.m:
        raise CircuitError(f"dims {circuit.dims} do not multiply to m={circuit.m}")
    b = 0
    total = 0
    for gid, g in enumerate(circuit.gates):
        if isinstance(g, Const):
            if not isinstance(g.value, Fraction):
                raise CircuitError("constant is not an exact rational", gid)
            bits = bit_complexity(g.value)
            b = max(b, bits)
            total += bits
        elif isinstance(g, MainVar):
            if not 0 <= g.index < circuit.m:
                raise CircuitError(f"main variable {g.index} outside [0, {circuit.m})", gid)
        elif isinstance(g, AuxVar):
            if not 0 <= g.index < circuit.r:
                raise CircuitError(f"aux variable {g.index} outside [0, {circuit.r})", gid)
        elif isinstance(g, (Add, Mul)):
            for child in (g.left, g.right):
                if not isinstance(child, int) or not 0 <= child < gid:
                    raise CircuitError(f"child {child} does not precede the gate", gid)
        else:
            raise CircuitError(f"unknown gate {g!r}", gid)
    for out in circuit.outputs:
        if out is not None and not 0 <= out < len(circuit.gates):
            raise CircuitError(f"output id {out} out of range")
    return ValidationReport(len(circuit.gates), circuit.m, circuit.r, b, total)


# -- scalar rings --------------------------------------------------------


class RationalField:
    name = "QQ"
    zero = Fraction(0)

    def const(self, q: Fraction) -> Fraction:
        return q

    def coerce(self, v) -> Fraction:
        return parse_rational(v)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def __repr__(self):
        return "RationalField()"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


@dataclass(frozen=True)
class PrimeField:
    p: int

    zero = 0

    @property
    def name(self) -> str:
        return f"GF({self.p})"

    def const(self, q: Fraction) -> int:
        if q.denominator % self.p == 0:
            raise BadPrimeError(self.p, q)
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def coerce(self, v) -> int:
        if isinstance(v, int) and not isinstance(v, bool):
            return v % self.p
        return self.const(parse_rational(v))

    def add(self, a, b):
        return (a + b) % self.p

    def mul(self, a, b):
        return a * b % self.p


QQ = RationalField()


@dataclass(frozen=True)
class Assignment:
    main: Mapping[int, Any] = field(default_factory=dict)
    aux: Mapping[int, Any] = field(default_factory=dict)
    ring: RationalField | PrimeField = QQ


def reachable(circuit: Circuit, roots: Iterable[int | None] | None = None) -> list[bool]:
    roots = circuit.outputs if roots is None else roots
    seen = [False] * len(circuit.gates)
    for out in roots:
        if out is not None:
            seen[out] = True
    for gid in range(len(circuit.gates) - 1, -1, -1):
        if seen[gid]:
            g = circuit.gates[gid]
            if isinstance(g, (Add, Mul)):
                seen[g.left] = True
                seen[g.right] = True
    return seen


def evaluate(circuit: Circuit, a: Assignment) -> list:
    """Value of every output at the point ``a``, gate by gate in ``a.ring``."""
    ring = a.ring
    live = reachable(circuit)
    vals: list[Any] = [None] * len(circuit.gates)
    main_cache: dict[int, Any] = {}
    aux_cache: dict[int, Any] = {}
    for gid, g in enumerate(circuit.gates):
        if not live[gid]:
            continue
        if isinstance(g, Mul):
            vals[gid] = ring.mul(vals[g.left], vals[g.right])
        elif isinstance(g, Add):
            vals[gid] = ring.add(vals[g.left], vals[g.right])
        elif isinstance(g, Const):
            vals[gid] = ring.const(g.value)
        elif isinstance(g, MainVar):
            if g.index not in main_cache:
                if g.index not in a.main:
                    raise ValueError(f"assignment misses main variable {g.index}")
                main_cache[g.index] = ring.coerce(a.main[g.index])
            vals[gid] = main_cache[g.index]
        else:
            if g.index not in aux_cache:
                if g.index not in a.aux:
                    raise ValueError(f"assignment misses aux variable {g.index}")
                aux_cache[g.index] = ring.coerce(a.aux[g.index])
            vals[gid] = aux_cache[g.index]
    return [ring.zero if out is None else vals[out] for out in circuit.outputs]


# -- transforms ----------------------------------------------------------

# Every gate expands into at most (r_max + 1)**2 gates (a Mul needs d+1
# products and d additions for component d), hence for r_max >= 1 the output
# has at most 4 * r_max**2 * s gates.
HOMOGENEOUS_SIZE_CONSTANT = 4


def homogeneous_size_bound(s: int, r_max: int) -> int:
    return HOMOGENEOUS_SIZE_CONSTANT * max(r_max, 1) ** 2 * s


def homogeneous_components(circuit: Circuit, r_max: int) -> Circuit:
    """Split every output into its homogeneous parts of degree 0..r_max.

    The result has ``(r_max + 1) * len(outputs)`` outputs, ordered
    ``[H_0(out_0), ..., H_rmax(out_0), H_0(out_1), ...]``.  Absent components
    are ``None`` rather than fresh zero constants, so every Const gate of the
    result is a copy of a Const gate of the input.
    """
    if not isinstance(r_max, int) or r_max < 0:
        raise ValueError(f"degree bound must be a nonnegative integer, got {r_max!r}")
    validate(circuit)
    b = CircuitBuilder(circuit.m, circuit.r, circuit.dims)
    comps: list[list[int | None]] = []
    empty = [None] * (r_max + 1)
    for g in circuit.gates:
        cur = list(empty)
        if isinstance(g, Const):
            cur[0] = b.const(g.value)
        elif isinstance(g, AuxVar):
            cur[0] = b.yvar(g.index)
        elif isinstance(g, MainVar):
            if r_max >= 1:
                cur[1] = b.xvar(g.index)
        elif isinstance(g, Add):
            lc, rc = comps[g.left], comps[g.right]
            cur = [b.add(lc[d], rc[d]) for d in range(r_max + 1)]
        else:
            lc, rc = comps[g.left], comps[g.right]
            for d in range(r_max + 1):
                cur[d] = b.sum(b.mul(lc[i], rc[d - i]) for i in range(d + 1))
        comps.append(cur)
    outputs = []
    for out in circuit.outputs:
        outputs.extend(empty if out is None else comps[out])
    result = b.build(outputs)
    bound = homogeneous_size_bound(circuit.size, r_max)
    assert result.size <= bound, (result.size, bound)
    return result


def component_output(circuit: Circuit, r_max: int, output: int, degree: int) -> Circuit:
    """Restrict a :func:`homogeneous_components` result to a single output."""
    if not 0 <= degree <= r_max:
        raise ValueError(f"degree {degree} outside 0..{r_max}")
    return circuit.with_outputs([circuit.outputs[output * (r_max + 1) + degree]])


def substitute_main_vars(circuit: Circuit, point: Mapping[int, Any]) -> Circuit:
    """Replace each MainVar gate by the constant ``point[index]``.

    Gate ids and size are unchanged.
    """
    gates: list[Gate] = []
    for gid, g in enumerate(circuit.gates):
        if isinstance(g, MainVar):
            if g.index not in point:
                raise ValueError(f"point misses main variable {g.index} (gate {gid})")
            gates.append(Const(parse_rational(point[g.index])))
        else:
            gates.append(g)
    return Circuit(tuple(gates), circuit.outputs, circuit.m, circuit.r, circuit.dims)


def const_values(circuit: Circuit) -> list[Fraction]:
    return [g.value for g in circuit.gates if isinstance(g, Const)]


def has_main_vars(circuit: Circuit) -> bool:
    return any(isinstance(g, MainVar) for g in circuit.gates)


# -- JSON ----------------------------------------------------------------


def circuit_to_json(circuit: Circuit) -> dict:
    gates = []
    for g in circuit.gates:
        if isinstance(g, Const):
            gates.append({"op": "const", "value": format_rational(g.value)})
        elif isinstance(g, MainVar):
            gates.append({"op": "xvar", "index": list(unflat_index(g.index, circuit.dims))})
        elif isinstance(g, AuxVar):
            gates.append({"op": "yvar", "index": g.index + 1})
        elif isinstance(g, Add):
            gates.append({"op": "add", "l": g.left, "r": g.right})
        else:
            gates.append({"op": "mul", "l": g.left, "r": g.right})
    doc = {"m": circuit.m, "r": circuit.r, "gates": gates, "outputs": list(circuit.outputs)}
    if len(circuit.dims) != 1:
        doc["dims"] = list(circuit.dims)
    return doc


def circuit_from_json(doc: Mapping) -> Circuit:
    """Inverse of :func:`circuit_to_json`.

    ``xvar`` indices are 1-based coordinates over ``dims``; when ``dims`` is
    absent and a 3-coordinate index is used, ``m`` is taken to be ``n**3``.
    ``yvar`` indices are 1-based.
    """
    try:
        m = int(doc["m"])
        r = int(doc["r"])
        raw_gates = doc["gates"]
        outputs = [None if o is None else int(o) for o in doc["outputs"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise CircuitError(f"malformed circuit document: {exc}") from exc
    dims = doc.get("dims")
    if dims is None:
        n = round(m ** (1 / 3)) if m > 0 else 0
        three = any(
            g.get("op") == "xvar" and isinstance(g.get("index"), list) and len(g["index"]) == 3
            for g in raw_gates
        )
        dims = (n, n, n) if three and n**3 == m else (m,)
    dims = tuple(int(d) for d in dims)
    gates: list[Gate] = []
    for gid, g in enumerate(raw_gates):
        op = g.get("op")
        try:
            if op == "const":
                gates.append(Const(parse_rational(g["value"])))
            elif op == "xvar":
                idx = g["index"]
                coords = idx if isinstance(idx, list) else [idx]
                gates.append(MainVar(flat_index([int(c) for c in coords], dims)))
            elif op == "yvar":
                gates.append(AuxVar(int(g["index"]) - 1))
            elif op == "add":
                gates.append(Add(int(g["l"]), int(g["r"])))
            elif op == "mul":
                gates.append(Mul(int(g["l"]), int(g["r"])))
            else:
                raise CircuitError(f"unknown op {op!r}", gid)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, CircuitError):
                raise
            raise CircuitError(f"malformed gate: {exc}", gid) from exc
    c = Circuit(tuple(gates), tuple(outputs), m, r, dims)
    validate(c)
    return c
