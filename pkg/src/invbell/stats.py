"""Probability queries, CHSH correlators, and reproducible sampling.

Event queries operate on the 16-outcome tables from :mod:`invbell.protocol`.
Sampling uses splitmix64 in counter mode: draw ``i`` under master seed ``s``
consumes the ``i``-th output of the splitmix64 stream seeded with ``s``, so
any chunking of the draw range reproduces the same outcomes bit for bit on
every platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

import numpy as np

from .errors import DimensionMismatch, ZeroConditioning
from .protocol import OUTCOMES, Distribution, OutcomeQuadruple

VARIABLES = ("q1", "q2", "q3", "q4")

CLASSICAL_BOUND = 2.0
TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class EventPredicate:
    """Partial assignment of outcome variables; unconstrained fields are omitted."""

    constraints: Mapping[str, int]

    def __post_init__(self):
        clean: dict[str, int] = {}
        for var in VARIABLES:
            if var in self.constraints:
                value = int(self.constraints[var])
                if value not in (-1, 1):
                    raise ValueError(f"constraint {var}={self.constraints[var]!r} is not +1 or -1")
                clean[var] = value
        unknown = set(self.constraints) - set(VARIABLES)
        if unknown:
            raise ValueError(f"unknown variables {sorted(unknown)}")
        object.__setattr__(self, "constraints", clean)

    def matches(self, outcome: OutcomeQuadruple) -> bool:
        return all(getattr(outcome, var) == value for var, value in self.constraints.items())

    def conjunction(self, other: "EventPredicate") -> Union["EventPredicate", None]:
        """Merged predicate, or None when the two conflict (empty event)."""
        merged = dict(self.constraints)
        for var, value in other.constraints.items():
            if merged.get(var, value) != value:
                return None
            merged[var] = value
        return EventPredicate(merged)


Eventish = Union[EventPredicate, Mapping[str, int]]


def as_predicate(e: Eventish) -> EventPredicate:
    return e if isinstance(e, EventPredicate) else EventPredicate(e)


def prob(d: Distribution, e: Eventish) -> float:
    """Probability of the event described by `e`."""
    pred = as_predicate(e)
    return math.fsum(p for outcome, p in d.probs.items() if pred.matches(outcome))


def conditional(d: Distribution, target: Eventish, given: Eventish) -> float:
    """P(target | given); raises ZeroConditioning when P(given) = 0."""
    given = as_predicate(given)
    denominator = prob(d, given)
    if denominator <= 0.0:
        raise ZeroConditioning(f"conditioning event {given.constraints} has probability zero")
    joint = as_predicate(target).conjunction(given)
    numerator = prob(d, joint) if joint is not None else 0.0
    return numerator / denominator


def marginal(d: Distribution, variables: Iterable[str]) -> dict[tuple[int, ...], float]:
    """Distribution of the named variables, keyed by value tuples in q1..q4 order."""
    requested = set(variables)
    unknown = requested - set(VARIABLES)
    if unknown:
        raise ValueError(f"unknown variables {sorted(unknown)}")
    names = [v for v in VARIABLES if v in requested]
    if not names:
        raise ValueError("marginal needs at least one variable")
    out: dict[tuple[int, ...], float] = {}
    for outcome, p in d.probs.items():
        key = tuple(getattr(outcome, v) for v in names)
        out[key] = out.get(key, 0.0) + p
    return out


@dataclass(frozen=True)
class ChshSettings:
    """Four measurement angles; the observable at angle t is cos(t) Z + sin(t) X."""

    a0: float
    a1: float
    b0: float
    b1: float

    def __post_init__(self):
        for name in ("a0", "a1", "b0", "b1"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"angle {name}={getattr(self, name)!r} is not finite")
            object.__setattr__(self, name, value)


_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)
_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)


def observable(theta: float) -> np.ndarray:
    """cos(theta) Z + sin(theta) X, the +-1-valued observable in the Z-X plane."""
    return math.cos(theta) * _Z + math.sin(theta) * _X


def correlator(state, angle_a: float, angle_b: float) -> float:
    """<M(angle_a) x M(angle_b)> on a two-qubit pure state."""
    if state.n_qubits != 2:
        raise DimensionMismatch(f"need a 2-qubit state, got {state.n_qubits} qubits")
    op = np.kron(observable(angle_a), observable(angle_b))
    amps = state.amplitudes
    return float(np.real(amps.conj() @ op @ amps))


def chsh_value(state, s: ChshSettings) -> float:
    """E(a0,b0) + E(a0,b1) + E(a1,b0) - E(a1,b1) from exact expectations."""
    return (
        correlator(state, s.a0, s.b0)
        + correlator(state, s.a0, s.b1)
        + correlator(state, s.a1, s.b0)
        - correlator(state, s.a1, s.b1)
    )


# splitmix64 constants (Steele, Lea, and Flood's mixer)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)
_U64_MASK = (1 << 64) - 1


def _uniform_block(seed: int, start: int, count: int) -> np.ndarray:
    """Uniform [0, 1) doubles for draw indices start..start+count-1."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(seed) + idx * _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _MIX_A
    z = (z ^ (z >> np.uint64(27))) * _MIX_B
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)


@dataclass(frozen=True)
class SampleReport:
    """Outcome counts from `n` seeded draws plus their total-variation distance."""

    n: int
    seed: int
    counts: Mapping[OutcomeQuadruple, int]
    tv_distance: float

    def empirical(self) -> Distribution:
        return Distribution({o: c / self.n for o, c in self.counts.items()})


def sample(d: Distribution, n: int, seed: int, chunk_size: int = 1 << 16) -> SampleReport:
    """Draw `n` outcomes by inverse CDF over the fixed outcome ordering.

    Identical (d, n, seed) give identical counts on every platform, for any
    chunk_size; chunking only bounds peak memory.
    """
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    if chunk_size < 1:
        raise ValueError(f"chunk_size must be >= 1, got {chunk_size}")
    seed = int(seed) & _U64_MASK
    probs = d.as_array()
    cdf = np.cumsum(probs)
    counts = np.zeros(16, dtype=np.int64)
    start = 0
    while start < n:
        block = min(chunk_size, n - start)
        u = _uniform_block(seed, start, block)
        idx = np.searchsorted(cdf, u, side="right")
        np.clip(idx, 0, 15, out=idx)
        counts += np.bincount(idx, minlength=16)
        start += block
    tv = 0.5 * float(np.abs(counts / n - probs).sum())
    return SampleReport(
        n=n,
        seed=seed,
        counts={OUTCOMES[i]: int(counts[i]) for i in range(16)},
        tv_distance=tv,
    )
