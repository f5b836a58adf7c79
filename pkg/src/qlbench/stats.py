"""Sequential-measurement probability calculus.

Two-step statistics are always chain-rule products
P(first = i, then = j) = P(first = i) * P(then = j | first = i), computed by
measure, collapse, measure again.  Argument order is named "first"/"then"
throughout; no spatial notation is used anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvariantViolationError,
    PreconditionError,
)
from .hilbert import (
    MeasurementBasis,
    StateVector,
    ZERO_PROBABILITY,
    born_probability,
    collapse,
    commutes,
)

DISTRIBUTION_TOL = 1e-9
ENTRY_TOL = 1e-12


@dataclass(frozen=True)
class FrequencyTable:
    """Raw outcome counts; probabilities are exact rationals n_i / n."""

    labels: tuple[str, ...]
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        labels = tuple(str(l) for l in self.labels)
        counts = tuple(int(c) for c in self.counts)
        if len(labels) != len(counts) or not labels:
            raise InvariantViolationError("labels and counts must be nonempty and aligned")
        if any(c < 0 for c in counts):
            raise InvariantViolationError("negative count")
        if sum(counts) == 0:
            raise InvariantViolationError("no trials recorded")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return sum(self.counts)

    def probabilities(self) -> tuple[Fraction, ...]:
        total = self.total
        return tuple(Fraction(c, total) for c in self.counts)

    def to_distribution(self) -> Distribution:
        return Distribution(self.labels, [float(p) for p in self.probabilities()])


@dataclass(frozen=True)
class Distribution:
    """Labelled probabilities in [0, 1] summing to one."""

    labels: tuple[str, ...]
    probs: np.ndarray

    def __post_init__(self) -> None:
        labels = tuple(str(l) for l in self.labels)
        probs = np.asarray(self.probs, dtype=float).reshape(-1)
        if len(labels) != probs.size or not labels:
            raise InvariantViolationError("labels and probabilities must align")
        if np.any(probs < -ENTRY_TOL) or np.any(probs > 1.0 + ENTRY_TOL):
            raise InvariantViolationError("probability outside [0, 1]")
        if abs(float(probs.sum()) - 1.0) > DISTRIBUTION_TOL:
            raise InvariantViolationError(f"probabilities sum to {probs.sum()!r}, not 1")
        probs = np.clip(probs, 0.0, 1.0)
        probs.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "probs", probs)

    def __getitem__(self, index: int) -> float:
        return float(self.probs[index])


@dataclass(frozen=True)
class SequentialTable:
    """Ordered two-measurement table: entries[i, j] = P(first = i, then = j)."""

    first_basis: MeasurementBasis
    second_basis: MeasurementBasis
    entries: np.ndarray

    def __post_init__(self) -> None:
        if self.first_basis.dim != self.second_basis.dim:
            raise DimensionMismatchError("bases of different dimension in one table")
        entries = np.asarray(self.entries, dtype=float)
        expected = (self.first_basis.size, self.second_basis.size)
        if entries.shape != expected:
            raise InvariantViolationError(f"entries shape {entries.shape}, expected {expected}")
        if np.any(entries < -ENTRY_TOL):
            raise InvariantViolationError("negative table entry")
        if abs(float(entries.sum()) - 1.0) > DISTRIBUTION_TOL:
            raise InvariantViolationError(f"table sums to {entries.sum()!r}, not 1")
        entries = np.clip(entries, 0.0, None)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    def first_marginal(self) -> np.ndarray:
        return self.entries.sum(axis=1)

    def second_marginal(self) -> np.ndarray:
        return self.entries.sum(axis=0)


def born_distribution(state: StateVector, basis: MeasurementBasis) -> Distribution:
    """Outcome distribution of one measurement on ``state``."""
    if state.dim != basis.dim:
        raise DimensionMismatchError(f"state dim {state.dim} vs basis dim {basis.dim}")
    probs = [born_probability(state, p) for p in basis.projectors]
    return Distribution(basis.labels, probs)


def sequential_distribution(
    state: StateVector,
    first: MeasurementBasis,
    second: MeasurementBasis,
    *,
    zero_tol: float = ZERO_PROBABILITY,
) -> SequentialTable:
    """Measure ``first``, collapse on its outcome, then measure ``second``.

    Rows with first-outcome probability below ``zero_tol`` are exactly zero:
    an impossible branch contributes nothing and is never collapsed on.
    """
    if state.dim != first.dim or state.dim != second.dim:
        raise DimensionMismatchError("state and bases must share one dimension")
    entries = np.zeros((first.size, second.size))
    for i, proj in enumerate(first.projectors):
        p_first = born_probability(state, proj)
        if p_first <= zero_tol:
            continue
        after = collapse(state, proj)
        for j, then_proj in enumerate(second.projectors):
            entries[i, j] = p_first * born_probability(after, then_proj)
    return SequentialTable(first_basis=first, second_basis=second, entries=entries)


def marginal_over_second(table: SequentialTable) -> Distribution:
    """Row sums: the first measurement's distribution, recovered exactly.

    Summing a chain-rule table over the later outcome always returns the
    earlier measurement's statistics; this identity survives noncommutation.
    """
    return Distribution(table.first_basis.labels, table.first_marginal())


def nondistribution_defect(
    state: StateVector,
    target_basis: MeasurementBasis,
    target_index: int,
    interposed: MeasurementBasis,
) -> float:
    """Gap between a direct outcome probability and its total probability
    through an interposed measurement.

    Returns |P(target = i) - sum_j P(interposed = j, then target = i)|.
    Zero when the two measurements are compatible; positive in general.
    """
    if not 0 <= target_index < target_basis.size:
        raise PreconditionError(f"outcome index {target_index} out of range")
    direct = born_probability(state, target_basis.projectors[target_index])
    through = sequential_distribution(state, interposed, target_basis)
    return abs(direct - float(through.entries[:, target_index].sum()))


def commutation_defect(
    state: StateVector, basis_a: MeasurementBasis, basis_b: MeasurementBasis
) -> float:
    """Largest order asymmetry max_ij |P(a_i then b_j) - P(b_j then a_i)|."""
    forward = sequential_distribution(state, basis_a, basis_b)
    reverse = sequential_distribution(state, basis_b, basis_a)
    return float(np.max(np.abs(forward.entries - reverse.entries.T)))


def bases_equal(a: MeasurementBasis, b: MeasurementBasis, tol: float = 1e-9) -> bool:
    if a.dim != b.dim or a.size != b.size:
        return False
    return all(
        float(np.max(np.abs(p.matrix - q.matrix))) <= tol
        for p, q in zip(a.projectors, b.projectors)
    )


def commuting_bases(a: MeasurementBasis, b: MeasurementBasis, tol: float = 1e-10) -> bool:
    return all(commutes(p, q, tol) for p in a.projectors for q in b.projectors)


@dataclass(frozen=True)
class JointWitness:
    """The most order-asymmetric entry of a table pair."""

    first_index: int
    second_index: int
    forward: float
    reverse: float

    @property
    def asymmetry(self) -> float:
        return abs(self.forward - self.reverse)


@dataclass(frozen=True)
class JointVerdict:
    exists: bool
    joint: Distribution | None
    witness: JointWitness | None


def joint_exists(t_ab: SequentialTable, t_ba: SequentialTable, tol: float = 1e-9) -> JointVerdict:
    """Decide whether the two ordered tables admit one symmetric joint.

    A joint distribution over outcome pairs exists iff the order of
    measurement is statistically irrelevant: t_ab[i, j] = t_ba[j, i] for all
    entries.  When it exists the common table is returned as a distribution
    over pairs; otherwise the maximally asymmetric entry is the witness.
    """
    if not (
        bases_equal(t_ab.first_basis, t_ba.second_basis)
        and bases_equal(t_ab.second_basis, t_ba.first_basis)
    ):
        raise PreconditionError("tables do not cover the same basis pair in opposite orders")
    gap = np.abs(t_ab.entries - t_ba.entries.T)
    worst = np.unravel_index(int(np.argmax(gap)), gap.shape)
    i, j = int(worst[0]), int(worst[1])
    if float(gap[i, j]) <= tol:
        labels = [
            f"({la},{lb})"
            for la in t_ab.first_basis.labels
            for lb in t_ab.second_basis.labels
        ]
        joint = Distribution(labels, t_ab.entries.reshape(-1))
        return JointVerdict(exists=True, joint=joint, witness=None)
    witness = JointWitness(
        first_index=i,
        second_index=j,
        forward=float(t_ab.entries[i, j]),
        reverse=float(t_ba.entries[j, i]),
    )
    return JointVerdict(exists=False, joint=None, witness=witness)


def dispersion(p: float) -> float:
    """p - p^2: zero exactly at the definite values 0 and 1, positive between."""
    if not -ENTRY_TOL <= p <= 1.0 + ENTRY_TOL:
        raise PreconditionError(f"probability {p!r} outside [0, 1]")
    p = min(1.0, max(0.0, float(p)))
    return p - p * p


def binomial_bound(p: float, n_trials: int, z: float = 4.0) -> float:
    """z standard deviations of a binomial proportion estimate of p."""
    if n_trials < 1:
        raise PreconditionError("need at least one trial")
    return z * math.sqrt(max(p * (1.0 - p), 0.0) / n_trials)


def within_binomial_bound(
    exact: SequentialTable, empirical: SequentialTable, n_trials: int, z: float = 4.0
) -> bool:
    """Entrywise |empirical - exact| <= z * sqrt(p(1-p)/n) comparison."""
    if exact.entries.shape != empirical.entries.shape:
        raise DimensionMismatchError("table shapes differ")
    bounds = np.vectorize(lambda p: binomial_bound(p, n_trials, z))(exact.entries)
    return bool(np.all(np.abs(empirical.entries - exact.entries) <= bounds))
