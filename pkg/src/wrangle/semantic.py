"""Interactive semantic-type prediction over value samples.

A pluggable scorer assigns each (sample, type) pair a base score in
[0, 1]; analyst overrides pin a sample's score to one or zero and the
column-level score is the plain average over samples.  The default
scorer looks samples up in a local gazetteer file; the neural scorer it
stands in for is out of scope by design.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .core import (
    Assistant,
    AssistantDescriptor,
    Choice,
    ColumnAnnotation,
    ConflictingConstraintsError,
    ConstraintParseError,
    InteractionSet,
    Output,
    escape_arg,
    unescape_arg,
)
from .table import Table, is_missing, read_csv


@dataclass(frozen=True)
class Sample:
    """A small set of column values scored jointly; 1-based index."""

    index: int
    values: tuple[str, ...]

    def label(self) -> str:
        return "{" + ", ".join(self.values) + "}"


def draw_samples(cells, n_samples: int, sample_size: int, seed: int) -> list[Sample]:
    """Seeded uniform draws without replacement within each sample (with
    replacement across samples).  When the column has no more distinct
    values than the sample size, the single sample holds all of them."""
    distinct: list[str] = []
    seen = set()
    for cell in cells:
        if is_missing(cell) or cell in seen:
            continue
        seen.add(cell)
        distinct.append(cell)
    if not distinct:
        raise ValueError("no non-missing values to sample")
    if len(distinct) <= sample_size:
        return [Sample(1, tuple(sorted(distinct)))]
    rng = random.Random(seed)
    return [
        Sample(i + 1, tuple(sorted(rng.sample(distinct, sample_size))))
        for i in range(n_samples)
    ]


@dataclass(frozen=True)
class IsType:
    sample: int
    type: str

    def render(self) -> str:
        return f"is_type(S{self.sample},{escape_arg(self.type)})"


@dataclass(frozen=True)
class NotType:
    sample: int
    type: str

    def render(self) -> str:
        return f"not_type(S{self.sample},{escape_arg(self.type)})"


SemanticConstraint = IsType | NotType

_CONSTRAINT_RE = re.compile(r"^(is_type|not_type)\(S(\d+),(.*)\)$")


def parse_constraint(text: str) -> SemanticConstraint:
    match = _CONSTRAINT_RE.match(text.strip())
    if not match:
        raise ConstraintParseError(f"bad semantic constraint {text!r}")
    kind, index, type_name = match.groups()
    type_name = unescape_arg(type_name)
    if not type_name:
        raise ConstraintParseError(f"missing type name in {text!r}")
    cls = IsType if kind == "is_type" else NotType
    return cls(int(index), type_name)


def _check_polarity(interactions: InteractionSet) -> None:
    pinned: dict[tuple[int, str], type] = {}
    for constraint in interactions:
        key = (constraint.sample, constraint.type)
        if key in pinned and pinned[key] is not type(constraint):
            raise ConflictingConstraintsError(
                f"sample S{key[0]} both is and is not {key[1]}"
            )
        pinned[key] = type(constraint)


@dataclass(frozen=True)
class ScoreMatrix:
    """Base scores per (sample index, semantic type), all in [0, 1]."""

    scores: Mapping[tuple[int, str], float]
    catalog: tuple[str, ...]
    samples: tuple[Sample, ...]
    provenance: str

    def __post_init__(self) -> None:
        for key, value in self.scores.items():
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"score out of range at {key}: {value}")


class GazetteerScorer:
    """Scores a sample by the fraction of its values listed under a type
    in a flat ``type<TAB>value`` file; lookups are case-insensitive."""

    def __init__(self, path) -> None:
        self.id = f"gazetteer:{Path(path).name}"
        self.catalog: list[str] = []
        self._entries: dict[str, set[str]] = {}
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConflictingConstraintsError(f"unreadable gazetteer: {exc}") from exc
        for line_no, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            type_name, sep, value = line.partition("\t")
            if not sep:
                raise ValueError(f"gazetteer line {line_no} lacks a tab separator")
            if type_name not in self._entries:
                self._entries[type_name] = set()
                self.catalog.append(type_name)
            self._entries[type_name].add(value.strip().casefold())

    def score(self, values: Iterable[str]) -> dict[str, float]:
        values = list(values)
        return {
            t: sum(1 for v in values if v.strip().casefold() in members) / len(values)
            for t, members in self._entries.items()
        }


class ConstantScorer:
    """Mock scorer: the same per-type base score for every sample.  Used
    by fixtures that pin column-level scores, and by the invariant suite
    to show the constraint algebra is scorer-independent."""

    def __init__(self, scores: Mapping[str, float]) -> None:
        self.id = "constant"
        self.catalog = list(scores)
        self._scores = dict(scores)

    def score(self, values: Iterable[str]) -> dict[str, float]:
        return dict(self._scores)


def score_matrix(samples: list[Sample], scorer) -> ScoreMatrix:
    scores: dict[tuple[int, str], float] = {}
    for sample in samples:
        for type_name, value in scorer.score(sample.values).items():
            scores[(sample.index, type_name)] = value
    return ScoreMatrix(
        scores=scores,
        catalog=tuple(scorer.catalog),
        samples=tuple(samples),
        provenance=scorer.id,
    )


def adjusted_score(
    matrix: ScoreMatrix, interactions: InteractionSet, sample: int, type_name: str
) -> float:
    """Piecewise override of the base score: one when the analyst pinned
    the sample to the type, zero when they rejected it, base otherwise."""
    _check_polarity(interactions)
    if IsType(sample, type_name) in interactions:
        return 1.0
    if NotType(sample, type_name) in interactions:
        return 0.0
    return matrix.scores[(sample, type_name)]


def column_score(matrix: ScoreMatrix, interactions: InteractionSet, type_name: str) -> float:
    """Arithmetic mean of the adjusted per-sample scores."""
    if not matrix.samples:
        raise ValueError("column score over zero samples")
    total = sum(
        adjusted_score(matrix, interactions, s.index, type_name) for s in matrix.samples
    )
    return total / len(matrix.samples)


def semantic_best(matrix: ScoreMatrix, interactions: InteractionSet) -> str:
    """Catalog type with the highest column score; catalog order breaks
    ties."""
    if not matrix.catalog:
        raise ConflictingConstraintsError("the semantic type catalog is empty")
    best = matrix.catalog[0]
    best_score = column_score(matrix, interactions, best)
    for type_name in matrix.catalog[1:]:
        score = column_score(matrix, interactions, type_name)
        if score > best_score:
            best, best_score = type_name, score
    return best


def semantic_choices(
    matrix: ScoreMatrix, interactions: InteractionSet, epsilon: float = 0.3
) -> list[Choice]:
    """Both polarities for every (sample, type) pair whose base score
    reaches the threshold, ordered by descending base score."""
    _check_polarity(interactions)
    samples_by_index = {s.index: s for s in matrix.samples}
    ranked = sorted(
        (
            (index, type_name)
            for (index, type_name), p in matrix.scores.items()
            if p >= epsilon and type_name in matrix.catalog
        ),
        key=lambda key: (-matrix.scores[key], key[0], matrix.catalog.index(key[1])),
    )
    choices: list[Choice] = []
    for index, type_name in ranked:
        if IsType(index, type_name) in interactions or NotType(index, type_name) in interactions:
            continue
        sample = samples_by_index[index]
        choices.append(
            Choice(
                label=f"Sample {index} {sample.label()} is {type_name}",
                interactions=interactions.add(IsType(index, type_name)),
            )
        )
        choices.append(
            Choice(
                label=f"Sample {index} {sample.label()} is not {type_name}",
                interactions=interactions.add(NotType(index, type_name)),
            )
        )
    return choices


# -- assistant -------------------------------------------------------------------


class _BoundSamples:
    def __init__(self, table: Table, column_index: int, matrix: ScoreMatrix) -> None:
        self.table = table
        self.column_index = column_index
        self.matrix = matrix


class SemanticAssistant(Assistant):
    descriptor = AssistantDescriptor(
        id="semantic-type",
        display_name="Semantic type prediction",
        input_slots=("input",),
        constraint_grammar_id="colnet",
    )

    def __init__(
        self,
        gazetteer: str | None = None,
        scorer=None,
        column: str | None = None,
        n_samples: int = 8,
        sample_size: int = 4,
        epsilon: float = 0.3,
        seed: int = 0,
    ) -> None:
        if scorer is None and gazetteer is None:
            raise ConflictingConstraintsError(
                "semantic-type needs a gazetteer path or an explicit scorer"
            )
        self.scorer = scorer if scorer is not None else GazetteerScorer(gazetteer)
        self.column = column
        self.n_samples = n_samples
        self.sample_size = sample_size
        self.epsilon = epsilon
        self.seed = seed

    def bind(self, bindings: Mapping[str, str]) -> _BoundSamples:
        table = read_csv(bindings["input"])
        index = 0
        if self.column is not None:
            index = (
                int(self.column) - 1
                if re.fullmatch(r"\d+", self.column)
                else table.column_index(self.column)
            )
        cells = table.columns[index].cells
        distinct = len({c for c in cells if not is_missing(c)})
        samples = draw_samples(
            cells, self.n_samples, min(self.sample_size, max(distinct, 1)), self.seed
        )
        return _BoundSamples(table, index, score_matrix(samples, self.scorer))

    def best(self, data: _BoundSamples, interactions: InteractionSet) -> str:
        return semantic_best(data.matrix, interactions)

    def apply(self, expression: str, data: _BoundSamples) -> Output:
        badges = [None] * data.table.n_columns
        badges[data.column_index] = ColumnAnnotation(badge=expression)
        return Output(table=data.table, annotations=tuple(badges))

    def choices(self, data: _BoundSamples, interactions: InteractionSet) -> list[Choice]:
        return semantic_choices(data.matrix, interactions, self.epsilon)

    def valid(self, expression: str, interactions: InteractionSet, data: _BoundSamples) -> bool:
        return expression in data.matrix.catalog

    def script(self, expression: str) -> str:
        return f"semantic_type={expression}"

    def parse_constraint(self, text: str) -> SemanticConstraint:
        return parse_constraint(text)

    def score(self, data: _BoundSamples, expression: str, interactions: InteractionSet) -> float:
        return column_score(data.matrix, interactions, expression)
