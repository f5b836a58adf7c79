"""Experiment-file parsing.

One line-oriented format drives every command, so runs are archivable and
replayable.  Lines are ``key value ...``; ``#`` starts a comment.  Keys:

    state z+ | state 0.6 0.8 | state angles POLAR AZIMUTH
    context z | context angles POLAR AZIMUTH | context vectors c c ; c c
    universe NAME label label ...
    atoms LABEL LABEL
    trials N        seed N (hex ok)      tol X
    target N        samples N
    family PATH | family builtin:NAME
    model PATH

Unknown keys are rejected.  Complex amplitudes are Python complex literals
without internal spaces; basis vectors are separated by a standalone ``;``.
Syntax problems (unknown keys, malformed numbers, wrong arity) and semantic
problems (non-normalized states, non-orthonormal bases, duplicate labels)
raise distinct error types, both carrying line and column.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import InvariantViolationError, QLBenchError
from .events import Universe
from .hilbert import (
    AXIS_NAMES,
    MeasurementBasis,
    STATE_PRESET_NAMES,
    StateVector,
    named_axis_basis,
    named_state,
    principal_vector,
    spin_direction_basis,
)

DEFAULT_SEED = 0xC0FFEE
DEFAULT_TOL = 1e-9
DEFAULT_TRIALS = 100_000
DEFAULT_SAMPLES = 200


class ConfigError(QLBenchError, ValueError):
    """Problem in an experiment file, located by line and column."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ConfigSyntaxError(ConfigError):
    pass


class ConfigSemanticError(ConfigError):
    pass


@dataclass
class ExperimentConfig:
    state: StateVector | None = None
    contexts: tuple[tuple[str, MeasurementBasis], ...] = ()
    universes: tuple[Universe, ...] = ()
    atoms: tuple[str, str] | None = None
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    tol: float = DEFAULT_TOL
    target: int = 0
    samples: int = DEFAULT_SAMPLES
    family: str | None = None
    model: str | None = None


@dataclass
class _Token:
    text: str
    column: int


def _tokenize(line: str) -> list[_Token]:
    return [
        _Token(m.group(0), m.start() + 1)
        for m in re.finditer(r"\S+", line)
    ]


def _split_groups(tokens: list[_Token]) -> list[list[_Token]]:
    groups: list[list[_Token]] = [[]]
    for tok in tokens:
        if tok.text == ";":
            groups.append([])
        else:
            groups[-1].append(tok)
    return [g for g in groups if g]


class _Parser:
    def __init__(self) -> None:
        self.config = ExperimentConfig()
        self._contexts: list[tuple[str, MeasurementBasis]] = []
        self._universes: list[Universe] = []
        self._seen_labels: set[str] = set()
        self._anon_contexts = 0

    def feed(self, lineno: int, line: str) -> None:
        tokens = _tokenize(line.split("#", 1)[0])
        if not tokens:
            return
        key = tokens[0]
        handler = getattr(self, f"_key_{key.text.replace('-', '_')}", None)
        if handler is None:
            raise ConfigSyntaxError(f"unknown key {key.text!r}", lineno, key.column)
        handler(lineno, tokens[1:])

    def finish(self) -> ExperimentConfig:
        self.config.contexts = tuple(self._contexts)
        self.config.universes = tuple(self._universes)
        return self.config

    # -- helpers ----------------------------------------------------------

    def _need(self, lineno: int, rest: list[_Token], count: int, what: str) -> None:
        if len(rest) != count:
            column = rest[0].column if rest else 1
            raise ConfigSyntaxError(f"expected {what}", lineno, column)

    def _int(self, lineno: int, tok: _Token) -> int:
        try:
            return int(tok.text, 0)
        except ValueError:
            raise ConfigSyntaxError(f"malformed integer {tok.text!r}", lineno, tok.column) from None

    def _float(self, lineno: int, tok: _Token) -> float:
        try:
            return float(tok.text)
        except ValueError:
            raise ConfigSyntaxError(f"malformed number {tok.text!r}", lineno, tok.column) from None

    def _complex(self, lineno: int, tok: _Token) -> complex:
        try:
            return complex(tok.text)
        except ValueError:
            raise ConfigSyntaxError(
                f"malformed complex number {tok.text!r}", lineno, tok.column
            ) from None

    # -- key handlers ------------------------------------------------------

    def _key_state(self, lineno: int, rest: list[_Token]) -> None:
        if not rest:
            raise ConfigSyntaxError("state needs a preset, amplitudes, or angles", lineno, 1)
        head = rest[0]
        if head.text in STATE_PRESET_NAMES:
            self._need(lineno, rest, 1, "exactly one preset name")
            self.config.state = named_state(head.text)
            return
        if head.text == "angles":
            self._need(lineno, rest, 3, "'angles POLAR AZIMUTH'")
            polar = self._float(lineno, rest[1])
            azimuth = self._float(lineno, rest[2])
            basis = spin_direction_basis(polar, azimuth)
            self.config.state = StateVector(principal_vector(basis.projectors[0]))
            return
        amplitudes = [self._complex(lineno, tok) for tok in rest]
        try:
            self.config.state = StateVector(amplitudes)
        except InvariantViolationError as exc:
            raise ConfigSemanticError(str(exc), lineno, head.column) from exc

    def _key_context(self, lineno: int, rest: list[_Token]) -> None:
        if not rest:
            raise ConfigSyntaxError("context needs an axis, angles, or vectors", lineno, 1)
        head = rest[0]
        if head.text in AXIS_NAMES:
            self._need(lineno, rest, 1, "exactly one axis name")
            self._contexts.append((head.text, named_axis_basis(head.text)))
            return
        if head.text == "angles":
            self._need(lineno, rest, 3, "'angles POLAR AZIMUTH'")
            polar = self._float(lineno, rest[1])
            azimuth = self._float(lineno, rest[2])
            name = f"dir({polar:g},{azimuth:g})"
            self._contexts.append((name, spin_direction_basis(polar, azimuth)))
            return
        if head.text == "vectors":
            groups = _split_groups(rest[1:])
            if not groups:
                raise ConfigSyntaxError("no vectors given", lineno, head.column)
            vectors = [[self._complex(lineno, tok) for tok in group] for group in groups]
            self._anon_contexts += 1
            name = f"basis{self._anon_contexts}"
            try:
                basis = MeasurementBasis.from_vectors(vectors)
            except (InvariantViolationError, ValueError) as exc:
                raise ConfigSemanticError(
                    f"context vectors invalid: {exc}", lineno, head.column
                ) from exc
            self._contexts.append((name, basis))
            return
        raise ConfigSyntaxError(
            f"context must be one of {AXIS_NAMES}, 'angles', or 'vectors'",
            lineno,
            head.column,
        )

    def _key_universe(self, lineno: int, rest: list[_Token]) -> None:
        if len(rest) < 2:
            raise ConfigSyntaxError("universe needs a name and at least one label", lineno, 1)
        name = rest[0].text
        labels = [tok.text for tok in rest[1:]]
        overlap = self._seen_labels.intersection(labels)
        if overlap:
            raise ConfigSemanticError(
                f"label(s) {sorted(overlap)} already used by another universe",
                lineno,
                rest[1].column,
            )
        try:
            universe = Universe(name, tuple(labels))
        except InvariantViolationError as exc:
            raise ConfigSemanticError(str(exc), lineno, rest[0].column) from exc
        self._seen_labels.update(labels)
        self._universes.append(universe)

    def _key_atoms(self, lineno: int, rest: list[_Token]) -> None:
        self._need(lineno, rest, 2, "exactly two atom labels")
        self.config.atoms = (rest[0].text, rest[1].text)

    def _key_trials(self, lineno: int, rest: list[_Token]) -> None:
        self._need(lineno, rest, 1, "one integer")
        value = self._int(lineno, rest[0])
        if value < 1:
            raise ConfigSemanticError("trials must be positive", lineno, rest[0].column)
        self.config.trials = value

    def _key_seed(self, lineno: int, rest: list[_Token]) -> None:
        self._need(lineno, rest, 1, "one integer")
        self.config.seed = self._int(lineno, rest[0])

    def _key_tol(self, lineno: int, rest: list[_Token]) -> None:
        self._need(lineno, rest, 1, "one number")
        value = self._float(lineno, rest[0])
        if value <= 0:
            raise ConfigSemanticError("tol must be positive", lineno, rest[0].column)
        self.config.tol = value

    def _key_target(self, lineno: int, rest: list[_Token]) -> None:
        self._need(lineno, rest, 1, "one integer")
        value = self._int(lineno, rest[0])
        if value < 0:
            raise ConfigSemanticError("target index must be >= 0", lineno, rest[0].column)
        self.config.target = value

    def _key_samples(self, lineno: int, rest: list[_Token]) -> None:
        self._need(lineno, rest, 1, "one integer")
        value = self._int(lineno, rest[0])
        if value < 1:
            raise ConfigSemanticError("samples must be positive", lineno, rest[0].column)
        self.config.samples = value

    def _key_family(self, lineno: int, rest: list[_Token]) -> None:
        if len(rest) < 1:
            raise ConfigSyntaxError("family needs a path or builtin:NAME", lineno, 1)
        self.config.family = " ".join(tok.text for tok in rest)

    def _key_model(self, lineno: int, rest: list[_Token]) -> None:
        if len(rest) < 1:
            raise ConfigSyntaxError("model needs a path", lineno, 1)
        self.config.model = " ".join(tok.text for tok in rest)


def parse_experiment_config(text: str) -> ExperimentConfig:
    """Parse an experiment file; raises ConfigSyntaxError / ConfigSemanticError."""
    parser = _Parser()
    for lineno, line in enumerate(text.splitlines(), start=1):
        parser.feed(lineno, line)
    return parser.finish()


def load_experiment_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_experiment_config(handle.read())
