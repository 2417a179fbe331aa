"""Construction of the four-qubit basis-choice experiment.

Two parties share a maximally entangled pair (Q1, Q2) and each holds an
ancilla register (Q3 for Alice, Q4 for Bob) that records which of the two
bases, Z or X, the party measures in.  Measuring in X means applying a
Hadamard to the system qubit before the fixed sigma_z measurement, so the
register value determines the applied rotation.  A register can be driven
two ways:

* ``coherent`` - the ancilla starts in sqrt(p)|0> + sqrt(1-p)|1> and the
  Hadamard is attached as a controlled gate, with every projection deferred
  to the final measurement;
* ``coin`` - a classical coin picks the branch, giving an explicit mixture
  of prepared ancilla values with the rotation applied per branch.

Both mechanisms yield identical computational-basis diagonals; they differ
only in the coherences between ancilla sectors.

Sign convention: outcome +1 corresponds to |0>, -1 to |1>.  For the
registers Q3/Q4, +1 therefore means "Z was chosen" and -1 "X was chosen".
Basis-state indices order the registers as Q1 Q2 Q3 Q4, most significant
bit first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np

from .errors import DimensionMismatch
from .qcore import (
    DensityMatrix,
    StateVector,
    apply_unitary,
    controlled_unitary,
    density_from_state,
    hadamard,
    measurement_probs,
    mix,
)

PROB_ATOL = 1e-12

CHOICE_MODES = ("coherent", "coin")
BASES = ("Z", "X")


class OutcomeQuadruple(NamedTuple):
    """One joint outcome; each field is +1 or -1."""

    q1: int
    q2: int
    q3: int
    q4: int


def outcome_from_index(index: int) -> OutcomeQuadruple:
    """Quadruple for basis-state `index` (Q1 is the most significant bit)."""
    return OutcomeQuadruple(*(1 - 2 * ((index >> shift) & 1) for shift in (3, 2, 1, 0)))


def index_of_outcome(outcome: OutcomeQuadruple) -> int:
    return sum(((1 - v) // 2) << shift for v, shift in zip(outcome, (3, 2, 1, 0)))


OUTCOMES: tuple[OutcomeQuadruple, ...] = tuple(outcome_from_index(i) for i in range(16))


@dataclass(frozen=True)
class Distribution:
    """Probability table over the 16 outcome quadruples.

    Missing quadruples default to probability zero.  Values must be
    nonnegative and sum to one within 1e-12.
    """

    probs: Mapping[OutcomeQuadruple, float]

    def __post_init__(self):
        table: dict[OutcomeQuadruple, float] = {o: 0.0 for o in OUTCOMES}
        for key, value in self.probs.items():
            outcome = OutcomeQuadruple(*key)
            if any(v not in (-1, 1) for v in outcome):
                raise ValueError(f"outcome {outcome} has values outside {{+1, -1}}")
            value = float(value)
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"probability of {outcome} is {value!r}")
            table[outcome] = value
        total = math.fsum(table.values())
        if abs(total - 1.0) > PROB_ATOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "probs", table)

    def as_array(self) -> np.ndarray:
        """Probabilities in basis-index order."""
        return np.array([self.probs[o] for o in OUTCOMES], dtype=np.float64)

    @classmethod
    def from_array(cls, values) -> "Distribution":
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (16,):
            raise ValueError(f"expected 16 probabilities, got shape {values.shape}")
        return cls({OUTCOMES[i]: float(values[i]) for i in range(16)})

    @classmethod
    def uniform(cls) -> "Distribution":
        return cls.from_array(np.full(16, 1.0 / 16.0))

    @classmethod
    def point_mass(cls, outcome: OutcomeQuadruple) -> "Distribution":
        return cls({OutcomeQuadruple(*outcome): 1.0})


@dataclass(frozen=True)
class Scenario:
    """Declarative description of one experiment run.

    choice_prob is the probability that a party picks the Z basis; both
    parties use the same value, and both use the fixed basis pair (Z, X).
    """

    alice_mode: str = "coherent"
    bob_mode: str = "coherent"
    choice_prob: float = 0.5
    initial_state: str = "phi-minus"

    def __post_init__(self):
        for name, mode in (("alice_mode", self.alice_mode), ("bob_mode", self.bob_mode)):
            if mode not in CHOICE_MODES:
                raise ValueError(f"{name} must be one of {CHOICE_MODES}, got {mode!r}")
        p = float(self.choice_prob)
        if not math.isfinite(p) or not 0.0 <= p <= 1.0:
            raise ValueError(f"choice_prob must lie in [0, 1], got {self.choice_prob!r}")
        object.__setattr__(self, "choice_prob", p)
        if self.initial_state not in _INITIAL_STATES:
            raise ValueError(f"unknown initial state {self.initial_state!r}")


def bell_state() -> StateVector:
    """Maximally entangled pair (|00> - |11>)/sqrt(2) on Q1 Q2."""
    amps = np.zeros(4, dtype=np.complex128)
    amps[0] = 1.0 / np.sqrt(2.0)
    amps[3] = -1.0 / np.sqrt(2.0)
    return StateVector(amps)


_INITIAL_STATES = {"phi-minus": bell_state}

_KET0 = np.array([1.0, 0.0], dtype=np.complex128)
_KET1 = np.array([0.0, 1.0], dtype=np.complex128)


def _register_branches(mode: str, z_prob: float) -> list[tuple[float, np.ndarray]]:
    """Weighted ancilla preparations for one party's choice register."""
    if mode == "coherent":
        amp = np.array([math.sqrt(z_prob), math.sqrt(1.0 - z_prob)], dtype=np.complex128)
        return [(1.0, amp)]
    branches = []
    if z_prob > 0.0:
        branches.append((z_prob, _KET0))
    if z_prob < 1.0:
        branches.append((1.0 - z_prob, _KET1))
    return branches


def build_final_density(s: Scenario) -> DensityMatrix:
    """Final four-qubit state of the experiment described by `s`.

    Each branch tensors the entangled pair with the two register
    preparations, then applies a controlled Hadamard from Q3 onto Q1 and
    from Q4 onto Q2.  Coin-mode registers contribute one branch per coin
    face; coherent registers contribute a single superposed branch.
    """
    pair = _INITIAL_STATES[s.initial_state]()
    ch = controlled_unitary(hadamard(), control=0, target=1, n=2)
    components = []
    for w_a, reg3 in _register_branches(s.alice_mode, s.choice_prob):
        for w_b, reg4 in _register_branches(s.bob_mode, s.choice_prob):
            amps = np.kron(np.kron(pair.amplitudes, reg3), reg4)
            state = StateVector(amps)
            state = apply_unitary(state, ch, [2, 0])
            state = apply_unitary(state, ch, [3, 1])
            components.append((w_a * w_b, density_from_state(state)))
    return mix(components)


def outcome_distribution(rho: DensityMatrix) -> Distribution:
    """Distribution of (q1, q2, q3, q4) under sigma_z measurement of all four qubits."""
    if rho.n_qubits != 4:
        raise DimensionMismatch(f"need a 4-qubit state, got {rho.n_qubits} qubits")
    probs = measurement_probs(rho)
    return Distribution({OUTCOMES[i]: float(probs[i]) for i in range(16)})
