"""Classical-model analysis of the inverted scenario.

Here the entangled-pair outcomes (q1, q2) play the role of inputs and the
basis-choice registers (q3, q4) the role of outputs.  The module builds the
conditional table P(q3, q4 | q1, q2), measures signaling (dependence of one
register's marginal on the remote outcome), and decides local-polytope
membership.  For two binary inputs and two binary outputs, membership is
exactly no-signaling plus the eight CHSH inequalities, so no linear program
is needed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import MissingSupport
from .protocol import Distribution
from .stats import conditional, marginal

DEFAULT_TOL = 1e-9

SIGNS = (1, -1)

# Fixed ordering of (+-1, +-1) pairs for table rows (inputs) and columns (outputs).
PAIR_ORDER: tuple[tuple[int, int], ...] = ((1, 1), (1, -1), (-1, 1), (-1, -1))

_PAIR_INDEX = {pair: i for i, pair in enumerate(PAIR_ORDER)}

# Output-pair products q3*q4 in PAIR_ORDER, used for correlators.
_PAIR_PRODUCT = np.array([a * b for a, b in PAIR_ORDER], dtype=np.float64)


def pair_index(a: int, b: int) -> int:
    return _PAIR_INDEX[(a, b)]


def _chsh_sign_patterns() -> tuple[tuple[int, int, int, int], ...]:
    patterns = []
    for k in range(4):
        base = [1, 1, 1, 1]
        base[k] = -1
        patterns.append(tuple(base))
        patterns.append(tuple(-s for s in base))
    return tuple(patterns)


CHSH_SIGN_PATTERNS = _chsh_sign_patterns()


@dataclass(frozen=True, eq=False)
class ConditionalTable:
    """P(q3, q4 | q1, q2); rows are input pairs, columns output pairs, both in PAIR_ORDER."""

    entries: np.ndarray

    def __post_init__(self):
        table = np.array(self.entries, dtype=np.float64)
        if table.shape != (4, 4):
            raise ValueError(f"conditional table must be 4x4, got shape {table.shape}")
        if not np.all(np.isfinite(table)):
            raise ValueError("conditional table contains non-finite entries")
        if table.min() < 0.0:
            raise ValueError(f"conditional table entry {table.min()!r} is negative")
        row_sums = table.sum(axis=1)
        if np.abs(row_sums - 1.0).max() > 1e-12:
            raise ValueError(f"conditional rows must sum to 1, got {row_sums.tolist()}")
        table.setflags(write=False)
        object.__setattr__(self, "entries", table)

    def entry(self, q1: int, q2: int, q3: int, q4: int) -> float:
        return float(self.entries[pair_index(q1, q2), pair_index(q3, q4)])

    def output_marginal(self, variable: str, q1: int, q2: int) -> float:
        """P(variable = +1 | q1, q2) for variable q3 or q4."""
        row = self.entries[pair_index(q1, q2)]
        if variable == "q3":
            return float(row[pair_index(1, 1)] + row[pair_index(1, -1)])
        if variable == "q4":
            return float(row[pair_index(1, 1)] + row[pair_index(-1, 1)])
        raise ValueError(f"variable must be q3 or q4, got {variable!r}")

    def correlators(self) -> np.ndarray:
        """E(q1, q2) = sum over outputs of q3*q4*P, one per input pair in PAIR_ORDER."""
        return self.entries @ _PAIR_PRODUCT


@dataclass(frozen=True)
class SignalingReport:
    """Marginal-discrepancy deltas; signaling when either exceeds the tolerance."""

    delta_q3: float
    delta_q4: float
    signaling: bool
    tol: float


@dataclass(frozen=True)
class DeterministicStrategy:
    """Local deterministic responses: q3 = f(q1), q4 = g(q2)."""

    f: tuple[int, int]
    g: tuple[int, int]

    def __post_init__(self):
        for name, pair in (("f", self.f), ("g", self.g)):
            if tuple(pair) not in set(itertools.product(SIGNS, repeat=2)):
                raise ValueError(f"{name} must map into {{+1, -1}}, got {pair!r}")

    def f_of(self, q1: int) -> int:
        return self.f[0] if q1 == 1 else self.f[1]

    def g_of(self, q2: int) -> int:
        return self.g[0] if q2 == 1 else self.g[1]


@dataclass(frozen=True)
class PolytopeReport:
    """Membership verdict with its witness.

    verdict is "local", "signaling", or "nonlocal-nosignaling".  For a
    signaling table the witness is the largest marginal delta; for a
    nonlocal one it is the violated sign combination and its value.
    """

    verdict: str
    signaling: SignalingReport
    combination_values: tuple[float, ...]
    witness_signs: tuple[int, int, int, int] | None
    witness_value: float | None
    witness: str


def conditional_table(d: Distribution) -> ConditionalTable:
    """Table of P(q3, q4 | q1, q2); requires support on all four input pairs."""
    pair_probs = marginal(d, ("q1", "q2"))
    for q1, q2 in PAIR_ORDER:
        if pair_probs.get((q1, q2), 0.0) <= 0.0:
            raise MissingSupport(f"(q1, q2)=({q1:+d}, {q2:+d}) has probability zero")
    table = np.zeros((4, 4), dtype=np.float64)
    for i, (q1, q2) in enumerate(PAIR_ORDER):
        for j, (q3, q4) in enumerate(PAIR_ORDER):
            table[i, j] = conditional(d, {"q3": q3, "q4": q4}, {"q1": q1, "q2": q2})
    return ConditionalTable(table)


def no_signaling_check(t: ConditionalTable, tol: float = DEFAULT_TOL) -> SignalingReport:
    """Largest dependence of each register's marginal on the remote outcome."""
    if tol < 0.0:
        raise ValueError(f"tol must be nonnegative, got {tol!r}")
    delta_q3 = max(
        abs(t.output_marginal("q3", q1, 1) - t.output_marginal("q3", q1, -1)) for q1 in SIGNS
    )
    delta_q4 = max(
        abs(t.output_marginal("q4", 1, q2) - t.output_marginal("q4", -1, q2)) for q2 in SIGNS
    )
    return SignalingReport(
        delta_q3=float(delta_q3),
        delta_q4=float(delta_q4),
        signaling=max(delta_q3, delta_q4) > tol,
        tol=float(tol),
    )


def strategy_chsh(s: DeterministicStrategy) -> float:
    """E(+,+) + E(+,-) + E(-,+) - E(-,-) with E(q1, q2) = f(q1) g(q2)."""
    correlator = {(q1, q2): s.f_of(q1) * s.g_of(q2) for q1 in SIGNS for q2 in SIGNS}
    return float(
        correlator[(1, 1)] + correlator[(1, -1)] + correlator[(-1, 1)] - correlator[(-1, -1)]
    )


def enumerate_strategies() -> list[tuple[DeterministicStrategy, float]]:
    """All 16 deterministic strategies with their CHSH values."""
    strategies = []
    for f in itertools.product(SIGNS, repeat=2):
        for g in itertools.product(SIGNS, repeat=2):
            s = DeterministicStrategy(f=f, g=g)
            strategies.append((s, strategy_chsh(s)))
    return strategies


def strategy_table(s: DeterministicStrategy) -> ConditionalTable:
    """Point-mass conditional table induced by one deterministic strategy."""
    table = np.zeros((4, 4), dtype=np.float64)
    for i, (q1, q2) in enumerate(PAIR_ORDER):
        table[i, pair_index(s.f_of(q1), s.g_of(q2))] = 1.0
    return ConditionalTable(table)


def pr_box_table() -> ConditionalTable:
    """No-signaling table with anticorrelated outputs on input (-1, -1) only.

    Reaches CHSH combination value 4, the no-signaling maximum; standard
    nonlocal, non-signaling fixture.
    """
    table = np.zeros((4, 4), dtype=np.float64)
    for i, (q1, q2) in enumerate(PAIR_ORDER):
        want = -1 if (q1, q2) == (-1, -1) else 1
        for j, (q3, q4) in enumerate(PAIR_ORDER):
            if q3 * q4 == want:
                table[i, j] = 0.5
    return ConditionalTable(table)


def local_polytope_check(t: ConditionalTable, tol: float = DEFAULT_TOL) -> PolytopeReport:
    """Decide membership: signaling check first, then the eight CHSH combinations."""
    sig = no_signaling_check(t, tol)
    correlators = t.correlators()
    values = tuple(
        float(sum(sign * e for sign, e in zip(pattern, correlators)))
        for pattern in CHSH_SIGN_PATTERNS
    )
    if sig.signaling:
        delta = max(sig.delta_q3, sig.delta_q4)
        return PolytopeReport(
            verdict="signaling",
            signaling=sig,
            combination_values=values,
            witness_signs=None,
            witness_value=delta,
            witness=f"marginal delta {delta!r} exceeds tol {sig.tol!r}",
        )
    worst = int(np.argmax(values))
    if values[worst] <= 2.0 + tol:
        return PolytopeReport(
            verdict="local",
            signaling=sig,
            combination_values=values,
            witness_signs=None,
            witness_value=None,
            witness="all eight CHSH combinations within the classical bound",
        )
    signs = CHSH_SIGN_PATTERNS[worst]
    return PolytopeReport(
        verdict="nonlocal-nosignaling",
        signaling=sig,
        combination_values=values,
        witness_signs=signs,
        witness_value=values[worst],
        witness=f"combination {signs} reaches {values[worst]!r}",
    )
