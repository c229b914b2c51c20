"""Randomized identity testing for circuits in the auxiliary variables.

Each trial draws a fresh random prime ``p`` and a random point, then
evaluates the circuit mod ``p``.  A zero polynomial evaluates to zero for
every choice, so ``IdenticallyZero`` is never wrong; a nonzero value is a
witness that is re-checked before it is reported.

Exact evaluation is hopeless here: the polynomial can have degree ``2**s`` and
coefficients of exponential bit length, which is why everything happens mod
random word-sized primes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import isprime

from .circuit import Assignment, BadPrimeError, Circuit, PrimeField, evaluate, has_main_vars, validate
from .rational import parse_rational

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
POINT_RANGE_SLACK = 6


class PitFailure(RuntimeError):
    """Prime resampling exhausted without a usable modulus."""


def splitmix64(x: int) -> int:
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def trial_seed(seed: int, trial: int) -> int:
    """Sub-seed of trial ``trial``: splitmix64 of the master seed advanced by the trial number."""
    return splitmix64((seed + trial * GOLDEN_GAMMA) & MASK64)


def trials_for(epsilon: Fraction) -> int:
    """Smallest t with 2**-t <= epsilon."""
    t = 0
    while Fraction(1, 2**t) > epsilon:
        t += 1
    return max(t, 1)


@dataclass(frozen=True)
class PitConfig:
    epsilon: Fraction = Fraction(1, 128)
    seed: int = 0
    prime_bits: int = 62
    max_prime_retries: int = 32

    def __post_init__(self):
        eps = parse_rational(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        if not 0 < eps < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {eps}")
        if self.prime_bits < 32:
            raise ValueError("prime bit length must be at least 32")
        object.__setattr__(self, "seed", int(self.seed) & MASK64)

    @property
    def trials(self) -> int:
        return trials_for(self.epsilon)


@dataclass(frozen=True)
class Witness:
    prime: int
    point: tuple[int, ...]  # aux variable values, already reduced mod prime
    output: int
    value: int


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    sub_seed: int
    prime: int
    bad_primes: int
    values: tuple[int, ...]


@dataclass(frozen=True)
class PitResult:
    is_zero: bool
    witness: Witness | None
    transcript: tuple[TrialRecord, ...] = field(default=())

    def to_json(self) -> dict:
        doc: dict = {"answer": "IdenticallyZero" if self.is_zero else "Nonzero"}
        if self.witness is not None:
            w = self.witness
            doc["witness"] = {
                "prime": str(w.prime),
                "point": [str(v) for v in w.point],
                "output": w.output,
                "value": str(w.value),
            }
        doc["trials"] = len(self.transcript)
        return doc


def random_prime(rng: random.Random, bits: int) -> int:
    while True:
        cand = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        if isprime(cand):
            return cand


def evaluate_mod(circuit: Circuit, point, p: int) -> list[int]:
    aux = dict(enumerate(point))
    return evaluate(circuit, Assignment(main={}, aux=aux, ring=PrimeField(p)))


def verify_witness(circuit: Circuit, w: Witness) -> bool:
    try:
        values = evaluate_mod(circuit, w.point, w.prime)
    except BadPrimeError:
        return False
    return values[w.output] % w.prime != 0


def pit(circuit: Circuit, cfg: PitConfig = PitConfig()) -> PitResult:
    """Decide whether every output of an auxiliary-variable circuit is the zero polynomial."""
    validate(circuit)
    if has_main_vars(circuit):
        raise ValueError("identity testing expects a circuit over auxiliary variables only")
    if all(out is None for out in circuit.outputs):
        return PitResult(True, None, ())
    point_bits = circuit.size + POINT_RANGE_SLACK
    records = []
    for t in range(cfg.trials):
        sub = trial_seed(cfg.seed, t)
        rng = random.Random(sub)
        for bad in range(cfg.max_prime_retries + 1):
            p = random_prime(rng, cfg.prime_bits)
            point = tuple(rng.getrandbits(point_bits) % p for _ in range(circuit.r))
            try:
                values = evaluate_mod(circuit, point, p)
                break
            except BadPrimeError:
                continue
        else:
            raise PitFailure(
                f"trial {t}: {cfg.max_prime_retries + 1} primes in a row divide a constant's denominator"
            )
        records.append(TrialRecord(t, sub, p, bad, tuple(values)))
        for out, v in enumerate(values):
            if v != 0:
                w = Witness(p, point, out, v)
                if not verify_witness(circuit, w):
                    raise AssertionError("witness failed re-evaluation")
                return PitResult(False, w, tuple(records))
    return PitResult(True, None, tuple(records))
