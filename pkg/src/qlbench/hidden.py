"""Dispersion-free hidden-state ensembles with context-dependent disturbance.

The constructed model assigns every ensemble member a definite outcome for
each declared measurement context, so each member is dispersion-free, yet the
transition kernels (overlap-squared rows, one kernel per ordered context
pair) reproduce the full ordered two-measurement statistics of the source
state, including their order asymmetry.  The kernel choice is the minimal
one; any row-stochastic family with the right conditionals would serve, and
nothing here depends on the kernels knowing the source state.

Model building and exact evaluation are pure.  Monte-Carlo trials draw from
one seeded generator in a fixed order, so a (seed, n_trials) pair fully
determines the empirical table.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import InvariantViolationError, PreconditionError
from .hilbert import MeasurementBasis, StateVector, principal_vector
from .stats import SequentialTable, born_distribution, commutation_defect, dispersion

WEIGHT_TOL = 1e-12
ROW_TOL = 1e-12

CHAIN_BROKEN = "broken at 'distributive ⇒ commutative'"
CHAIN_NOT_EXERCISED = "not exercised (compatible observables)"


@dataclass(frozen=True)
class HiddenState:
    """A value-definite state: one definite outcome index per declared context."""

    values: Mapping[str, int]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "values", MappingProxyType({str(k): int(v) for k, v in self.values.items()})
        )

    def value(self, context: str) -> int:
        try:
            return self.values[context]
        except KeyError:
            raise PreconditionError(f"context {context!r} not declared for this state") from None

    def truth(self, context: str, outcome: int) -> int:
        """1 if this state yields ``outcome`` in ``context``, else 0."""
        return 1 if self.value(context) == outcome else 0


@dataclass(frozen=True)
class HiddenEnsemble:
    """Convex mixture of value-definite states over declared contexts."""

    members: tuple[tuple[HiddenState, float], ...]
    contexts: Mapping[str, MeasurementBasis]

    def __post_init__(self) -> None:
        contexts = MappingProxyType(dict(self.contexts))
        members = tuple((state, float(weight)) for state, weight in self.members)
        if not members or not contexts:
            raise InvariantViolationError("ensemble needs members and declared contexts")
        total = 0.0
        for state, weight in members:
            if weight < 0.0:
                raise InvariantViolationError(f"negative weight {weight!r}")
            total += weight
            for name, basis in contexts.items():
                outcome = state.value(name)  # raises if not total on contexts
                if not 0 <= outcome < basis.size:
                    raise InvariantViolationError(
                        f"outcome {outcome} out of range for context {name!r}"
                    )
        if abs(total - 1.0) > WEIGHT_TOL:
            raise InvariantViolationError(f"weights sum to {total!r}, not 1")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "contexts", contexts)

    def context_ids(self) -> tuple[str, ...]:
        return tuple(self.contexts)

    def marginal(self, context: str) -> np.ndarray:
        """Probability of each outcome of ``context`` under the mixture."""
        basis = self._basis(context)
        probs = np.zeros(basis.size)
        for state, weight in self.members:
            probs[state.value(context)] += weight
        return probs

    def proposition_probability(self, context: str, outcome: int) -> float:
        return float(self.marginal(context)[outcome])

    def _basis(self, context: str) -> MeasurementBasis:
        try:
            return self.contexts[context]
        except KeyError:
            raise PreconditionError(f"context {context!r} not declared") from None


@dataclass(frozen=True)
class TransitionKernel:
    """Row-stochastic disturbance matrix between two measurement contexts.

    rows[i, j] = probability that, after outcome i in ``from_context``, the
    hidden value for ``to_context`` becomes j.
    """

    from_context: str
    to_context: str
    rows: np.ndarray

    def __post_init__(self) -> None:
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim != 2:
            raise InvariantViolationError("kernel rows must form a matrix")
        if np.any(rows < 0.0):
            raise InvariantViolationError("negative kernel entry")
        sums = rows.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > ROW_TOL):
            raise InvariantViolationError(f"kernel rows sum to {sums!r}, not 1")
        rows = rows.copy()
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)


@dataclass(frozen=True)
class HiddenModel:
    """A value-definite ensemble plus one transition kernel per ordered context pair."""

    ensemble: HiddenEnsemble
    kernels: Mapping[tuple[str, str], TransitionKernel]

    def __post_init__(self) -> None:
        kernels = MappingProxyType(dict(self.kernels))
        for (src, dst), kernel in kernels.items():
            if kernel.from_context != src or kernel.to_context != dst:
                raise InvariantViolationError("kernel key disagrees with kernel contexts")
            if src not in self.ensemble.contexts or dst not in self.ensemble.contexts:
                raise InvariantViolationError("kernel references an undeclared context")
        object.__setattr__(self, "kernels", kernels)

    def kernel(self, first: str, then: str) -> TransitionKernel:
        if first == then:
            # repeating a context re-reads the definite value: identity kernel
            basis = self.ensemble.contexts.get(first)
            if basis is None:
                raise PreconditionError(f"context {first!r} not declared")
            return TransitionKernel(first, first, np.eye(basis.size))
        try:
            return self.kernels[(first, then)]
        except KeyError:
            raise PreconditionError(f"no kernel declared for order ({first!r}, {then!r})") from None


def _overlap_matrix(basis_a: MeasurementBasis, basis_b: MeasurementBasis) -> np.ndarray:
    """rows[i, j] = tr(P_i Q_j), the squared overlap of the two ray families."""
    rows = np.empty((basis_a.size, basis_b.size))
    for i, p in enumerate(basis_a.projectors):
        for j, q in enumerate(basis_b.projectors):
            rows[i, j] = float(np.trace(p.matrix @ q.matrix).real)
    return np.clip(rows, 0.0, None)


def build_qm_equivalent_model(
    state: StateVector,
    basis_a: MeasurementBasis,
    basis_b: MeasurementBasis,
    context_ids: tuple[str, str] = ("A", "B"),
) -> HiddenModel:
    """Construct the dispersion-free ensemble that reproduces the state's
    ordered two-measurement statistics for the two declared contexts.

    Member weights are the product of the two single-measurement marginals,
    so both orders see their correct first-measurement distribution; the
    kernels carry the conditional statistics.  Every member has a definite
    outcome for both contexts.
    """
    id_a, id_b = context_ids
    if id_a == id_b:
        raise PreconditionError("context ids must be distinct")
    if state.dim != basis_a.dim or state.dim != basis_b.dim:
        raise PreconditionError("state and bases must share one dimension")

    marginal_a = born_distribution(state, basis_a).probs
    marginal_b = born_distribution(state, basis_b).probs
    members = []
    for i in range(basis_a.size):
        for j in range(basis_b.size):
            weight = float(marginal_a[i] * marginal_b[j])
            members.append((HiddenState({id_a: i, id_b: j}), weight))
    total = sum(w for _, w in members)
    members = [(s, w / total) for s, w in members]

    overlaps = _overlap_matrix(basis_a, basis_b)
    kernels = {
        (id_a, id_b): TransitionKernel(id_a, id_b, overlaps),
        (id_b, id_a): TransitionKernel(id_b, id_a, overlaps.T),
    }
    ensemble = HiddenEnsemble(members=tuple(members), contexts={id_a: basis_a, id_b: basis_b})
    return HiddenModel(ensemble=ensemble, kernels=kernels)


def exact_sequential(model: HiddenModel, order: tuple[str, str]) -> SequentialTable:
    """Closed-form ordered table: first marginal times the kernel row."""
    first, then = order
    ensemble = model.ensemble
    kernel = model.kernel(first, then)
    marginal = ensemble.marginal(first)
    entries = marginal[:, None] * kernel.rows
    return SequentialTable(
        first_basis=ensemble.contexts[first],
        second_basis=ensemble.contexts[then],
        entries=entries,
    )


def simulate_sequential(
    model: HiddenModel, order: tuple[str, str], n_trials: int, seed: int
) -> SequentialTable:
    """Monte-Carlo realization of the model's ordered statistics.

    Each trial draws a member by weight, reads off its definite value for the
    first context, then redraws the second-context value from the kernel row
    (the first measurement disturbs the hidden value for the other context).
    Deterministic given (seed, n_trials).
    """
    if n_trials < 1:
        raise PreconditionError("need at least one trial")
    first, then = order
    ensemble = model.ensemble
    kernel = model.kernel(first, then)
    rng = np.random.default_rng(seed)

    weights = np.array([w for _, w in ensemble.members])
    first_values = np.array([s.value(first) for s, _ in ensemble.members])
    member_idx = rng.choice(len(weights), size=n_trials, p=weights / weights.sum())
    firsts = first_values[member_idx]

    cumulative = np.cumsum(kernel.rows, axis=1)
    cumulative[:, -1] = 1.0
    draws = rng.random(n_trials)
    thens = (draws[:, None] > cumulative[firsts]).sum(axis=1)

    counts = np.zeros((ensemble.contexts[first].size, ensemble.contexts[then].size))
    np.add.at(counts, (firsts, thens), 1.0)
    return SequentialTable(
        first_basis=ensemble.contexts[first],
        second_basis=ensemble.contexts[then],
        entries=counts / n_trials,
    )


def _law_lhs(a: int, b: int) -> int:
    return min(a, max(b, 1 - b))


def _law_rhs(a: int, b: int) -> int:
    return max(min(a, b), min(a, 1 - b))


@dataclass(frozen=True)
class TruthTableRow:
    a: int
    b: int
    lhs: int
    rhs: int

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class TruthTableReport:
    rows: tuple[TruthTableRow, ...]

    @property
    def all_equal(self) -> bool:
        return all(row.equal for row in self.rows)


def truth_table_distributivity() -> TruthTableReport:
    """Evaluate a ∧ (b ∨ b') = (a ∧ b) ∨ (a ∧ b') on definite truth values.

    With ' as negation, ∧ as min, and ∨ as max, all four assignments agree:
    definite values always distribute.
    """
    rows = tuple(
        TruthTableRow(a=a, b=b, lhs=_law_lhs(a, b), rhs=_law_rhs(a, b))
        for a in (0, 1)
        for b in (0, 1)
    )
    return TruthTableReport(rows=rows)


@dataclass(frozen=True)
class NoGoAudit:
    """Computed evidence for each link of the implication chain
    value-definiteness → dispersion-free mixtures → distributive logic →
    commutative statistics, on one concrete model.

    The first links hold by construction and by the truth-table check; the
    last fails whenever the two contexts do not commute, which is the point.
    """

    context_ids: tuple[str, str]
    member_count: int
    members_value_definite: bool
    members_distributive: bool
    member_pairs_checked: int
    member_max_dispersion: float
    mixture_max_dispersion: float
    hv_commutation_defect: float
    qm_commutation_defect: float
    defects_match: bool
    noncommuting: bool
    chain_verdict: str
    table_first_then: SequentialTable
    table_then_first: SequentialTable


def audit_no_go(
    state: StateVector,
    basis_a: MeasurementBasis,
    basis_b: MeasurementBasis,
    context_ids: tuple[str, str] = ("A", "B"),
    *,
    defect_tol: float = 1e-6,
) -> NoGoAudit:
    """Build the model and check every auditable link of the chain."""
    model = build_qm_equivalent_model(state, basis_a, basis_b, context_ids)
    ensemble = model.ensemble
    id_a, id_b = context_ids

    propositions = [
        (name, outcome)
        for name, basis in ensemble.contexts.items()
        for outcome in range(basis.size)
    ]

    value_definite = True
    distributive = True
    pairs_checked = 0
    member_max_dispersion = 0.0
    for member, _weight in ensemble.members:
        truths = {prop: member.truth(*prop) for prop in propositions}
        if any(t not in (0, 1) for t in truths.values()):
            value_definite = False
        member_max_dispersion = max(
            member_max_dispersion, max(dispersion(float(t)) for t in truths.values())
        )
        for pa in propositions:
            for pb in propositions:
                pairs_checked += 1
                if _law_lhs(truths[pa], truths[pb]) != _law_rhs(truths[pa], truths[pb]):
                    distributive = False

    mixture_max_dispersion = max(
        dispersion(ensemble.proposition_probability(name, outcome))
        for name, outcome in propositions
    )

    table_ab = exact_sequential(model, (id_a, id_b))
    table_ba = exact_sequential(model, (id_b, id_a))
    hv_defect = float(np.max(np.abs(table_ab.entries - table_ba.entries.T)))
    qm_defect = commutation_defect(state, basis_a, basis_b)
    defects_match = abs(hv_defect - qm_defect) <= 1e-9
    noncommuting = qm_defect > defect_tol

    return NoGoAudit(
        context_ids=context_ids,
        member_count=len(ensemble.members),
        members_value_definite=value_definite,
        members_distributive=distributive,
        member_pairs_checked=pairs_checked,
        member_max_dispersion=member_max_dispersion,
        mixture_max_dispersion=mixture_max_dispersion,
        hv_commutation_defect=hv_defect,
        qm_commutation_defect=qm_defect,
        defects_match=defects_match,
        noncommuting=noncommuting,
        chain_verdict=CHAIN_BROKEN if noncommuting else CHAIN_NOT_EXERCISED,
        table_first_then=table_ab,
        table_then_first=table_ba,
    )


def _format_complex(value) -> str:
    value = complex(value)
    if value.imag == 0.0:
        return repr(value.real)
    return str(value)


def serialize_model(model: HiddenModel) -> str:
    """Render a model in the replayable line-oriented experiment format."""
    ensemble = model.ensemble
    ids = ensemble.context_ids()
    dim = ensemble.contexts[ids[0]].dim
    lines = [f"model-dim {dim}"]
    for name in ids:
        basis = ensemble.contexts[name]
        vectors = " ; ".join(
            " ".join(_format_complex(c) for c in principal_vector(p))
            for p in basis.projectors
        )
        labels = " ".join(basis.labels)
        lines.append(f"context {name} labels {labels} vectors {vectors}")
    for member, weight in ensemble.members:
        values = " ".join(f"{name}={member.value(name)}" for name in ids)
        lines.append(f"member {values} weight {weight!r}")
    for (src, dst), kernel in model.kernels.items():
        rows = " ; ".join(" ".join(repr(float(x)) for x in row) for row in kernel.rows)
        lines.append(f"kernel {src} {dst} rows {rows}")
    return "\n".join(lines) + "\n"


def _split_on_semicolons(tokens: list[str]) -> list[list[str]]:
    groups: list[list[str]] = [[]]
    for token in tokens:
        if token == ";":
            groups.append([])
        else:
            groups[-1].append(token)
    return [g for g in groups if g]


def parse_model(text: str) -> HiddenModel:
    """Parse a model previously produced by :func:`serialize_model`."""
    dim: int | None = None
    contexts: dict[str, MeasurementBasis] = {}
    members: list[tuple[HiddenState, float]] = []
    kernels: dict[tuple[str, str], TransitionKernel] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        key, rest = tokens[0], tokens[1:]
        try:
            if key == "model-dim":
                dim = int(rest[0])
            elif key == "context":
                name = rest[0]
                if rest[1] != "labels":
                    raise ValueError("expected 'labels'")
                split = rest.index("vectors")
                labels = rest[2:split]
                groups = _split_on_semicolons(rest[split + 1:])
                vectors = [[complex(tok) for tok in group] for group in groups]
                contexts[name] = MeasurementBasis.from_vectors(vectors, labels)
            elif key == "member":
                if rest[-2] != "weight":
                    raise ValueError("expected 'weight'")
                weight = float(rest[-1])
                values = {}
                for pair in rest[:-2]:
                    name, _, idx = pair.partition("=")
                    values[name] = int(idx)
                members.append((HiddenState(values), weight))
            elif key == "kernel":
                src, dst = rest[0], rest[1]
                if rest[2] != "rows":
                    raise ValueError("expected 'rows'")
                groups = _split_on_semicolons(rest[3:])
                rows = np.array([[float(tok) for tok in group] for group in groups])
                kernels[(src, dst)] = TransitionKernel(src, dst, rows)
            else:
                raise ValueError(f"unknown key {key!r}")
        except (ValueError, IndexError) as exc:
            raise InvariantViolationError(f"model line {lineno}: {exc}") from exc

    if dim is None or not contexts or not members:
        raise InvariantViolationError("model file incomplete")
    ensemble = HiddenEnsemble(members=tuple(members), contexts=contexts)
    return HiddenModel(ensemble=ensemble, kernels=kernels)


def load_model(path) -> HiddenModel:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_model(handle.read())
