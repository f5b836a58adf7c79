"""The lattice of closed subspaces of a low-dimensional complex space.

Subspaces are stored as orthonormal frames produced by a rank-revealing SVD;
singular values below ``RANK_TOL`` count as zero, which is the only
numerically fragile decision in the module.  Equality is mutual inclusion at
``INCLUSION_TOL``, never frame equality.  Meet is computed through De Morgan
on orthocomplements so that one well-tested join/complement path serves both
operations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InvariantViolationError, PreconditionError
from .hilbert import MAX_DIM

RANK_TOL = 1e-10       # singular values below this count as zero
FRAME_TOL = 1e-10      # orthonormality of stored frames
INCLUSION_TOL = 1e-9   # residual norm allowed when testing containment


def _orthonormal_frame(columns: np.ndarray, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Rank-revealing orthonormalization of a (dim, k) column stack."""
    if columns.shape[1] == 0:
        return columns
    u, s, _ = np.linalg.svd(columns, full_matrices=False)
    rank = int(np.sum(s > rank_tol))
    return np.ascontiguousarray(u[:, :rank])


@dataclass(frozen=True)
class Subspace:
    """A closed linear subspace, held as an orthonormal frame of column vectors.

    The zero subspace has an empty frame of shape (ambient_dim, 0).
    """

    frame: np.ndarray

    def __post_init__(self) -> None:
        frame = np.asarray(self.frame, dtype=complex)
        if frame.ndim != 2:
            raise InvariantViolationError(f"frame must be 2-d, got shape {frame.shape}")
        d, k = frame.shape
        if d < 1 or d > MAX_DIM:
            raise InvariantViolationError(f"ambient dimension {d} outside [1, {MAX_DIM}]")
        if k > d:
            raise InvariantViolationError(f"frame has {k} vectors in dimension {d}")
        if k:
            gram = frame.conj().T @ frame
            if np.max(np.abs(gram - np.eye(k))) > FRAME_TOL:
                raise InvariantViolationError("frame vectors are not orthonormal")
        frame = frame.copy()
        frame.setflags(write=False)
        object.__setattr__(self, "frame", frame)

    @property
    def ambient_dim(self) -> int:
        return self.frame.shape[0]

    @property
    def dim(self) -> int:
        return self.frame.shape[1]

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def projector_matrix(self) -> np.ndarray:
        return self.frame @ self.frame.conj().T

    @classmethod
    def zero(cls, ambient_dim: int) -> Subspace:
        return cls(np.zeros((ambient_dim, 0), dtype=complex))

    @classmethod
    def full(cls, ambient_dim: int) -> Subspace:
        return cls(np.eye(ambient_dim, dtype=complex))

    @classmethod
    def from_vectors(cls, ambient_dim: int, vectors) -> Subspace:
        """Span of arbitrary (possibly dependent, unnormalized) vectors."""
        vecs = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
        if not vecs:
            return cls.zero(ambient_dim)
        for v in vecs:
            if v.size != ambient_dim:
                raise DimensionMismatchError(
                    f"vector of length {v.size} in ambient dimension {ambient_dim}"
                )
        return cls(_orthonormal_frame(np.column_stack(vecs)))

    @classmethod
    def ray(cls, vector) -> Subspace:
        v = np.asarray(vector, dtype=complex).reshape(-1)
        return cls.from_vectors(v.size, [v])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return subspace_equal(self, other)

    __hash__ = None  # equality is numeric, not structural

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} of C^{self.ambient_dim})"


def _require_same_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError(
            f"ambient dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}"
        )


def join(a: Subspace, b: Subspace) -> Subspace:
    """Smallest subspace containing both: the span of the concatenated frames."""
    _require_same_ambient(a, b)
    return Subspace(_orthonormal_frame(np.hstack([a.frame, b.frame])))


def orthocomplement(a: Subspace) -> Subspace:
    """All vectors orthogonal to ``a``; dimensions are complementary."""
    if a.is_zero:
        return Subspace.full(a.ambient_dim)
    u, s, _ = np.linalg.svd(a.frame, full_matrices=True)
    rank = int(np.sum(s > RANK_TOL))
    return Subspace(np.ascontiguousarray(u[:, rank:]))


def meet(a: Subspace, b: Subspace) -> Subspace:
    """Intersection, computed as the complement of the join of complements."""
    _require_same_ambient(a, b)
    return orthocomplement(join(orthocomplement(a), orthocomplement(b)))


def includes(a: Subspace, b: Subspace, tol: float = INCLUSION_TOL) -> bool:
    """Is ``a`` contained in ``b``?  True iff each frame vector of ``a``
    projects onto ``b`` with residual norm at most ``tol``."""
    _require_same_ambient(a, b)
    if a.is_zero:
        return True
    residual = a.frame - b.frame @ (b.frame.conj().T @ a.frame)
    return float(np.max(np.linalg.norm(residual, axis=0))) <= tol


def subspace_equal(a: Subspace, b: Subspace, tol: float = INCLUSION_TOL) -> bool:
    return includes(a, b, tol) and includes(b, a, tol)


@dataclass(frozen=True)
class DistributivityVerdict:
    """Both sides of a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c), plus the verdict."""

    lhs: Subspace
    rhs: Subspace
    distributive: bool


def distributes(a: Subspace, b: Subspace, c: Subspace) -> DistributivityVerdict:
    """Evaluate a ∧ (b ∨ c) against (a ∧ b) ∨ (a ∧ c).

    The right side is always contained in the left on any subspace triple;
    a violation of that containment would mean the numerics failed, so it is
    checked and raised rather than reported as a verdict.
    """
    _require_same_ambient(a, b)
    _require_same_ambient(a, c)
    lhs = meet(a, join(b, c))
    rhs = join(meet(a, b), meet(a, c))
    if not includes(rhs, lhs):
        raise InvariantViolationError(
            "rhs not contained in lhs: rank decision failed near tolerance"
        )
    return DistributivityVerdict(lhs=lhs, rhs=rhs, distributive=subspace_equal(lhs, rhs))


def orthomodular_holds(a: Subspace, b: Subspace, tol: float = INCLUSION_TOL) -> bool:
    """For a ⊆ b, check b = a ∨ (b ∧ a')."""
    _require_same_ambient(a, b)
    if not includes(a, b, tol):
        raise PreconditionError("orthomodular law requires a ⊆ b")
    rebuilt = join(a, meet(b, orthocomplement(a)))
    return subspace_equal(rebuilt, b, tol)


def absorption_holds(a: Subspace, b: Subspace, tol: float = INCLUSION_TOL) -> bool:
    """a ∧ (a ∨ b) = a and a ∨ (a ∧ b) = a."""
    return subspace_equal(meet(a, join(a, b)), a, tol) and subspace_equal(
        join(a, meet(a, b)), a, tol
    )


def de_morgan_holds(a: Subspace, b: Subspace, tol: float = INCLUSION_TOL) -> bool:
    """(a ∧ b)' = a' ∨ b'."""
    return subspace_equal(
        orthocomplement(meet(a, b)), join(orthocomplement(a), orthocomplement(b)), tol
    )


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    checked: int
    passed: bool
    counterexample: str | None


@dataclass(frozen=True)
class LatticeAxiomReport:
    checks: tuple[AxiomCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def by_name(self, name: str) -> AxiomCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)


def _index_pairs(n: int, limit: int, rng: np.random.Generator):
    if n * n <= limit:
        return [(i, j) for i in range(n) for j in range(n)]
    return [tuple(pair) for pair in rng.integers(0, n, size=(limit, 2))]


def _index_triples(n: int, limit: int, rng: np.random.Generator):
    if n ** 3 <= limit:
        return [(i, j, k) for i in range(n) for j in range(n) for k in range(n)]
    return [tuple(t) for t in rng.integers(0, n, size=(limit, 3))]


def check_lattice_axioms(
    sample,
    *,
    pair_limit: int = 4000,
    triple_limit: int = 4000,
    seed: int = 0,
) -> LatticeAxiomReport:
    """Check the ordering and complement axioms over a sample of subspaces.

    Per-element axioms run on every sample member; pair and triple axioms run
    exhaustively when the sample is small, otherwise on a seeded pseudorandom
    selection of at most ``pair_limit`` / ``triple_limit`` tuples.
    """
    sample = list(sample)
    if not sample:
        raise PreconditionError("empty sample")
    ambient = sample[0].ambient_dim
    for s in sample:
        if s.ambient_dim != ambient:
            raise DimensionMismatchError("mixed ambient dimensions in sample")

    rng = np.random.default_rng(seed)
    pairs = _index_pairs(len(sample), pair_limit, rng)
    triples = _index_triples(len(sample), triple_limit, rng)
    checks = []

    def run(name, cases, predicate, describe):
        failure = None
        count = 0
        for case in cases:
            count += 1
            if not predicate(*case):
                failure = describe(*case)
                break
        checks.append(AxiomCheck(name=name, checked=count, passed=failure is None,
                                 counterexample=failure))

    run(
        "reflexivity: a ⊆ a",
        [(i,) for i in range(len(sample))],
        lambda i: includes(sample[i], sample[i]),
        lambda i: f"sample[{i}]",
    )
    run(
        "antisymmetry: a ⊆ b and b ⊆ a imply a = b",
        pairs,
        lambda i, j: not (includes(sample[i], sample[j]) and includes(sample[j], sample[i]))
        or subspace_equal(sample[i], sample[j]),
        lambda i, j: f"sample[{i}], sample[{j}]",
    )
    run(
        "transitivity: a ⊆ b ⊆ c implies a ⊆ c",
        triples,
        lambda i, j, k: not (includes(sample[i], sample[j]) and includes(sample[j], sample[k]))
        or includes(sample[i], sample[k]),
        lambda i, j, k: f"sample[{i}], sample[{j}], sample[{k}]",
    )
    run(
        "involution: (a')' = a",
        [(i,) for i in range(len(sample))],
        lambda i: subspace_equal(orthocomplement(orthocomplement(sample[i])), sample[i]),
        lambda i: f"sample[{i}]",
    )
    run(
        "complement disjointness: a ∧ a' = 0",
        [(i,) for i in range(len(sample))],
        lambda i: meet(sample[i], orthocomplement(sample[i])).is_zero,
        lambda i: f"sample[{i}]",
    )
    run(
        "order reversal: a ⊆ b iff b' ⊆ a'",
        pairs,
        lambda i, j: includes(sample[i], sample[j])
        == includes(orthocomplement(sample[j]), orthocomplement(sample[i])),
        lambda i, j: f"sample[{i}], sample[{j}]",
    )
    return LatticeAxiomReport(checks=tuple(checks))
