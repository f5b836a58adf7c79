"""Finite outcome universes, their disjoint union, and universe-relative set algebra.

Complementation always takes an explicit universe argument; there is no
default.  An implicit complementation universe is exactly how the classical
distribution law appears to fail, so the choice is made unforgeable here and
the fallacy can only be reproduced through an explicit coercion flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import InvariantViolationError, PreconditionError, QLBenchError


class SpaceMismatchError(QLBenchError, ValueError):
    """Events from different outcome spaces were combined."""


class ComplementUniverseError(PreconditionError):
    """An event reaches outside its chosen complementation universe."""


@dataclass(frozen=True)
class Universe:
    """One experiment's outcome set: an ordered tuple of distinct labels."""

    name: str
    outcomes: tuple[str, ...]

    def __post_init__(self) -> None:
        outcomes = tuple(str(o) for o in self.outcomes)
        if not outcomes:
            raise InvariantViolationError(f"universe {self.name!r} is empty")
        if len(set(outcomes)) != len(outcomes):
            raise InvariantViolationError(f"universe {self.name!r} has duplicate labels")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "name", str(self.name))


@dataclass(frozen=True)
class OutcomeSpace:
    """Disjoint union of universes; labels are globally distinct."""

    universes: tuple[Universe, ...]

    def __post_init__(self) -> None:
        universes = tuple(self.universes)
        if not universes:
            raise InvariantViolationError("outcome space needs at least one universe")
        seen: set[str] = set()
        for u in universes:
            overlap = seen.intersection(u.outcomes)
            if overlap:
                raise InvariantViolationError(
                    f"label(s) {sorted(overlap)} appear in more than one universe"
                )
            seen.update(u.outcomes)
        object.__setattr__(self, "universes", universes)

    @cached_property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for u in self.universes for label in u.outcomes)

    @cached_property
    def label_set(self) -> frozenset[str]:
        return frozenset(self.labels)

    def universe_of(self, label: str) -> Universe:
        for u in self.universes:
            if label in u.outcomes:
                return u
        raise PreconditionError(f"label {label!r} not in this outcome space")

    def event(self, labels) -> EventSet:
        return EventSet(self, frozenset(labels))

    def atom(self, label: str) -> EventSet:
        return self.event([label])


@dataclass(frozen=True)
class EventSet:
    """A finite subset of an outcome space's labels."""

    space: OutcomeSpace
    members: frozenset[str]

    def __post_init__(self) -> None:
        members = frozenset(str(m) for m in self.members)
        if not members <= self.space.label_set:
            stray = members - self.space.label_set
            raise InvariantViolationError(f"label(s) {sorted(stray)} not in the outcome space")
        object.__setattr__(self, "members", members)

    def _check_space(self, other: EventSet) -> None:
        if self.space != other.space:
            raise SpaceMismatchError("events belong to different outcome spaces")

    def union(self, other: EventSet) -> EventSet:
        self._check_space(other)
        return EventSet(self.space, self.members | other.members)

    def intersect(self, other: EventSet) -> EventSet:
        self._check_space(other)
        return EventSet(self.space, self.members & other.members)

    __or__ = union
    __and__ = intersect

    def __repr__(self) -> str:
        return "{" + ", ".join(sorted(self.members)) + "}"


def union(a: EventSet, b: EventSet) -> EventSet:
    return a.union(b)


def intersect(a: EventSet, b: EventSet) -> EventSet:
    return a.intersect(b)


def complement_relative(event: EventSet, within: Universe | OutcomeSpace) -> EventSet:
    """Complement of ``event`` relative to an explicitly chosen universe.

    ``within`` may be one Universe of the event's space or the whole space.
    Members outside the chosen universe are refused: complementing an event
    relative to a universe that does not contain it is precisely the misuse
    this module exists to make impossible by accident.
    """
    if isinstance(within, OutcomeSpace):
        if within != event.space:
            raise SpaceMismatchError("complement universe from a different outcome space")
        pool = within.labels
        label = "the whole outcome space"
    else:
        if within not in event.space.universes:
            raise SpaceMismatchError("complement universe from a different outcome space")
        pool = within.outcomes
        label = f"universe {within.name!r}"
    stray = event.members.difference(pool)
    if stray:
        raise ComplementUniverseError(
            f"event member(s) {sorted(stray)} lie outside {label}"
        )
    return EventSet(event.space, frozenset(pool) - event.members)


def restricted_to(event: EventSet, within: Universe, *, coerce: bool = False) -> EventSet:
    """View an event inside one universe.

    Refuses when members fall outside ``within`` unless ``coerce`` is set, in
    which case the outside members are dropped.  Coercion is the deliberate,
    logged act of confusing universes; callers record that they did it.
    """
    stray = event.members.difference(within.outcomes)
    if stray and not coerce:
        raise ComplementUniverseError(
            f"event member(s) {sorted(stray)} lie outside universe {within.name!r}; "
            "pass coerce=True to drop them deliberately"
        )
    return EventSet(event.space, event.members.intersection(within.outcomes))


@dataclass(frozen=True)
class ClassicalDistributivityVerdict:
    lhs: EventSet
    rhs: EventSet
    distributive: bool


def distributes_classical(a: EventSet, b: EventSet, c: EventSet) -> ClassicalDistributivityVerdict:
    """Evaluate a ∩ (b ∪ c) against (a ∩ b) ∪ (a ∩ c) as finite sets."""
    lhs = a.intersect(b.union(c))
    rhs = a.intersect(b).union(a.intersect(c))
    return ClassicalDistributivityVerdict(lhs=lhs, rhs=rhs,
                                          distributive=lhs.members == rhs.members)


@dataclass(frozen=True)
class TraceLine:
    expression: str
    value: frozenset[str]


@dataclass(frozen=True)
class ComplementChainTrace:
    """Step-by-step expansion of a ∩ (b ∪ b') with complements taken in X."""

    a_label: str
    b_label: str
    lines: tuple[TraceLine, ...]

    @property
    def all_equal_to_atom(self) -> bool:
        return all(line.value == frozenset([self.a_label]) for line in self.lines)

    @property
    def verdict(self) -> str:
        if self.all_equal_to_atom:
            return f"distributive, {self.a_label} = {self.a_label}"
        return "chain broke: some line differs from the starting atom"


def eq10_trace(a_label: str, b_label: str, space: OutcomeSpace) -> ComplementChainTrace:
    """Expand a ∩ (b ∪ b'_X) step by step, all complements relative to X.

    Every line evaluates to {a}: with a consistent complementation universe
    the chain is distributive all the way down to the terminal rule that
    distinct atoms intersect to the empty set.
    """
    labels = space.labels
    for label in (a_label, b_label):
        if label not in labels:
            raise PreconditionError(f"label {label!r} is not an atom of the space")

    atom = {label: space.atom(label) for label in labels}
    cx = {label: complement_relative(atom[label], space) for label in labels}
    a = atom[a_label]
    b = atom[b_label]
    b_rest = [x for x in labels if x != b_label]

    def big_union(events):
        out = EventSet(space, frozenset())
        for e in events:
            out = out.union(e)
        return out

    lines = [
        TraceLine(f"{a_label} ∩ X", a.intersect(space.event(labels)).members),
        TraceLine(
            f"{a_label} ∩ ({b_label} ∪ {b_label}'_X)",
            a.intersect(b.union(cx[b_label])).members,
        ),
        TraceLine(
            f"({a_label} ∩ {b_label}) ∪ ({a_label} ∩ {b_label}'_X)",
            a.intersect(b).union(a.intersect(cx[b_label])).members,
        ),
        TraceLine(
            f"({a_label} ∩ {b_label}) ∪ [{a_label} ∩ ({' ∪ '.join(b_rest)})]",
            a.intersect(b).union(a.intersect(big_union(atom[x] for x in b_rest))).members,
        ),
        TraceLine(
            f"{a_label} ∩ [" + " ∪ ".join(f"({x} ∪ {x}'_X)" for x in labels) + "]",
            a.intersect(big_union(atom[x].union(cx[x]) for x in labels)).members,
        ),
        TraceLine(
            " ∪ ".join(f"({a_label} ∩ {x}) ∪ ({a_label} ∩ {x}'_X)" for x in labels),
            big_union(a.intersect(atom[x]).union(a.intersect(cx[x])) for x in labels).members,
        ),
        TraceLine(a_label, a.members),
    ]
    return ComplementChainTrace(a_label=a_label, b_label=b_label, lines=tuple(lines))


MISMATCH_FLAG = "inequality manufactured by complement-universe mismatch"


@dataclass(frozen=True)
class SideBySide:
    lhs: frozenset[str]
    rhs: frozenset[str]

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class MismatchReport:
    """Three evaluations of a ∩ (b ∪ b') = (a ∩ b) ∪ (a ∩ b').

    ``mixed`` complements b in X on the left and in its own universe on the
    right, manufacturing the inequality; the two consistent evaluations agree
    on both sides.
    """

    a_label: str
    b_label: str
    lhs_mixed: frozenset[str]
    rhs_omega: frozenset[str]
    flag_raised: bool
    flag: str
    consistent_space: SideBySide
    consistent_universe: SideBySide
    coercions: tuple[str, ...]


def universe_mismatch_demo(a_label: str, b_label: str, space: OutcomeSpace) -> MismatchReport:
    """Reproduce the complement-universe confusion on purpose, with a logged flag.

    Requires the two atoms to come from distinct universes; the confusion is
    only possible across incompatible contexts.
    """
    universe_a = space.universe_of(a_label)
    universe_b = space.universe_of(b_label)
    if universe_a == universe_b:
        raise PreconditionError(
            "atoms from the same universe: the demo needs incompatible contexts"
        )

    a = space.atom(a_label)
    b = space.atom(b_label)
    b_in_space = complement_relative(b, space)
    b_in_omega = complement_relative(b, universe_b)

    lhs_mixed = a.intersect(b.union(b_in_space)).members
    rhs_omega = a.intersect(b).union(a.intersect(b_in_omega)).members
    flag_raised = lhs_mixed != rhs_omega

    consistent_space = SideBySide(
        lhs=lhs_mixed,
        rhs=a.intersect(b).union(a.intersect(b_in_space)).members,
    )

    coerced_a = restricted_to(a, universe_b, coerce=True)
    coercions = (
        f"event {{{a_label}}} coerced into universe {universe_b.name!r}: "
        f"dropped {sorted(a.members - coerced_a.members)}",
    )
    consistent_universe = SideBySide(
        lhs=coerced_a.intersect(b.union(b_in_omega)).members,
        rhs=coerced_a.intersect(b).union(coerced_a.intersect(b_in_omega)).members,
    )

    return MismatchReport(
        a_label=a_label,
        b_label=b_label,
        lhs_mixed=lhs_mixed,
        rhs_omega=rhs_omega,
        flag_raised=flag_raised,
        flag=MISMATCH_FLAG if flag_raised else "",
        consistent_space=consistent_space,
        consistent_universe=consistent_universe,
        coercions=coercions,
    )
