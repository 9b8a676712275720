"""Probabilistic column-type inference with missing and anomalous values.

Each of the five primitive types has a character-level machine; every
cell is scored under a three-component mixture (valid for the type,
missing-data marker, anomaly) over the column's unique values.  The
recommendation is the highest-posterior type allowed by the
constraints; constraints never change the probabilities, they only
exclude types or clamp a value's component back to valid.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Mapping

from .core import (
    Assistant,
    AssistantDescriptor,
    Choice,
    ColumnAnnotation,
    ConstraintParseError,
    ConstraintsExhaustedError,
    InteractionSet,
    Output,
    escape_arg,
    unescape_arg,
)
from .pfsm import (
    LOG_ZERO,
    Pfsm,
    anomaly_machine,
    boolean_machine,
    date_machine,
    float_machine,
    integer_machine,
    missing_machine,
    string_machine,
)
from .table import MISSING_TOKENS, Table, read_csv, table_from_cells

PRIMITIVE_TYPES = ("boolean", "integer", "float", "date", "string")

VALID = "valid"
MISSING = "missing"
ANOMALY = "anomaly"

# Mixture weights (valid, missing, anomaly); the strong valid component
# is what lets a dominant vocabulary value outweigh scattered numerics.
DEFAULT_WEIGHTS = (0.895, 0.07, 0.035)


@dataclass(frozen=True)
class ColumnTypeExpression:
    type: str
    missing: tuple[str, ...]
    anomalies: tuple[str, ...]

    def render(self) -> str:
        return (
            f"type={self.type}"
            f" missing=[{','.join(self.missing)}]"
            f" anomalies=[{','.join(self.anomalies)}]"
        )


@dataclass(frozen=True)
class NotType:
    type: str

    def render(self) -> str:
        return f"not_type({self.type})"


@dataclass(frozen=True)
class NotMissing:
    value: str

    def render(self) -> str:
        return f"not_missing({escape_arg(self.value)})"


@dataclass(frozen=True)
class NotAnomaly:
    value: str

    def render(self) -> str:
        return f"not_anomaly({escape_arg(self.value)})"


TypeConstraint = NotType | NotMissing | NotAnomaly

_CONSTRAINT_RE = re.compile(r"^(not_type|not_missing|not_anomaly)\((.*)\)$")


def parse_constraint(text: str) -> TypeConstraint:
    match = _CONSTRAINT_RE.match(text.strip())
    if not match:
        raise ConstraintParseError(f"bad type constraint {text!r}")
    kind, arg = match.groups()
    arg = unescape_arg(arg)
    if kind == "not_type":
        if arg not in PRIMITIVE_TYPES:
            raise ConstraintParseError(f"unknown primitive type {arg!r}")
        return NotType(arg)
    return NotMissing(arg) if kind == "not_missing" else NotAnomaly(arg)


class TypeScorer:
    """Machines plus mixture weights; per-unique-value component
    likelihoods are memoized so scoring is linear in unique values."""

    def __init__(self, weights: tuple[float, float, float] = DEFAULT_WEIGHTS) -> None:
        self.weights = weights
        self.machines: dict[str, Pfsm] = {
            "boolean": boolean_machine(),
            "integer": integer_machine(),
            "float": float_machine(),
            "date": date_machine(),
            "string": string_machine(),
        }
        self.missing = missing_machine(MISSING_TOKENS)
        self.anomaly = anomaly_machine()
        self._cache: dict[str, dict[str, tuple[float, float, float]]] = {}
        self.forward_calls = 0

    def components(self, value: str) -> dict[str, tuple[float, float, float]]:
        """Weighted (valid, missing, anomaly) likelihoods per type."""
        if value in self._cache:
            return self._cache[value]
        w_valid, w_missing, w_anomaly = self.weights
        self.forward_calls += 2
        missing = w_missing * self.missing.likelihood(value)
        anomaly = w_anomaly * self.anomaly.likelihood(value)
        result = {}
        for name, machine in self.machines.items():
            self.forward_calls += 1
            result[name] = (w_valid * machine.likelihood(value), missing, anomaly)
        self._cache[value] = result
        return result


DEFAULT_SCORER = TypeScorer()


@dataclass(frozen=True)
class TypePosterior:
    log_scores: dict[str, float]
    probabilities: dict[str, float]
    assignments: dict[str, dict[str, str]]  # type -> unique value -> component
    counts: dict[str, int]

    def ranked_types(self) -> list[str]:
        order = {t: k for k, t in enumerate(PRIMITIVE_TYPES)}
        return sorted(
            PRIMITIVE_TYPES, key=lambda t: (-self.log_scores[t], order[t])
        )


def column_posterior(
    cells,
    scorer: TypeScorer = DEFAULT_SCORER,
    clamp_valid: frozenset[str] = frozenset(),
) -> TypePosterior:
    """Per-type score over unique values and their counts; values in
    ``clamp_valid`` contribute only their valid component (and force
    the assignment to valid), realizing the analyst's overrides."""
    counts = Counter(cells)
    if not counts:
        raise ValueError("cannot infer a type for an empty column")
    log_scores: dict[str, float] = {}
    assignments: dict[str, dict[str, str]] = {}
    for t in PRIMITIVE_TYPES:
        total = 0.0
        assignment: dict[str, str] = {}
        for value, n in counts.items():
            valid, missing, anomaly = scorer.components(value)[t]
            if value in clamp_valid:
                mass = valid
                assignment[value] = VALID
            else:
                mass = valid + missing + anomaly
                best = max(
                    ((valid, 2, VALID), (missing, 1, MISSING), (anomaly, 0, ANOMALY))
                )
                assignment[value] = best[2]
            total += n * (math.log(mass) if mass > 0 else LOG_ZERO)
        log_scores[t] = total
        assignments[t] = assignment
    probabilities = _normalize(log_scores)
    return TypePosterior(log_scores, probabilities, assignments, dict(counts))


def _normalize(log_scores: Mapping[str, float]) -> dict[str, float]:
    finite = [s for s in log_scores.values() if s != LOG_ZERO]
    if not finite:
        return {t: 1.0 / len(log_scores) for t in log_scores}
    peak = max(finite)
    weights = {
        t: math.exp(s - peak) if s != LOG_ZERO else 0.0 for t, s in log_scores.items()
    }
    total = sum(weights.values())
    return {t: w / total for t, w in weights.items()}


def _clamped_values(interactions: InteractionSet) -> frozenset[str]:
    return frozenset(
        c.value for c in interactions if isinstance(c, (NotMissing, NotAnomaly))
    )


def _excluded_types(interactions: InteractionSet) -> frozenset[str]:
    return frozenset(c.type for c in interactions if isinstance(c, NotType))


def typeinfer_best(
    cells,
    interactions: InteractionSet = InteractionSet(),
    scorer: TypeScorer = DEFAULT_SCORER,
    cache: dict | None = None,
) -> ColumnTypeExpression:
    """Highest-posterior expression compatible with the constraints."""
    excluded = _excluded_types(interactions)
    allowed = [t for t in PRIMITIVE_TYPES if t not in excluded]
    if not allowed:
        raise ConstraintsExhaustedError("every primitive type has been excluded")
    posterior = _posterior_for(cells, interactions, scorer, cache)
    chosen = next(t for t in posterior.ranked_types() if t in allowed)
    return _expression(posterior, chosen)


def _posterior_for(cells, interactions, scorer, cache) -> TypePosterior:
    clamp = _clamped_values(interactions)
    if cache is not None and clamp in cache:
        return cache[clamp]
    posterior = column_posterior(cells, scorer, clamp)
    if cache is not None:
        cache[clamp] = posterior
    return posterior


def _expression(posterior: TypePosterior, chosen: str) -> ColumnTypeExpression:
    assignment = posterior.assignments[chosen]
    order = lambda value: (-posterior.counts[value], value)
    missing = tuple(sorted((v for v, c in assignment.items() if c == MISSING), key=order))
    anomalies = tuple(sorted((v for v, c in assignment.items() if c == ANOMALY), key=order))
    return ColumnTypeExpression(chosen, missing, anomalies)


def typeinfer_choices(
    cells,
    interactions: InteractionSet = InteractionSet(),
    scorer: TypeScorer = DEFAULT_SCORER,
    cache: dict | None = None,
) -> list[Choice]:
    """Reject the current type first, then mark each inferred missing
    value as not missing, then each anomaly as not anomalous (largest
    counts first)."""
    expression = typeinfer_best(cells, interactions, scorer, cache)
    choices = [
        Choice(
            label=f"column is not {expression.type}",
            interactions=interactions.add(NotType(expression.type)),
        )
    ]
    for value in expression.missing:
        choices.append(
            Choice(
                label=f"'{value}' is not missing",
                interactions=interactions.add(NotMissing(value)),
            )
        )
    for value in expression.anomalies:
        choices.append(
            Choice(
                label=f"'{value}' is not an anomaly",
                interactions=interactions.add(NotAnomaly(value)),
            )
        )
    return choices


def typeinfer_valid(
    expression: ColumnTypeExpression, interactions: InteractionSet
) -> bool:
    if expression.type in _excluded_types(interactions):
        return False
    for constraint in interactions:
        if isinstance(constraint, NotMissing) and constraint.value in expression.missing:
            return False
        if isinstance(constraint, NotAnomaly) and constraint.value in expression.anomalies:
            return False
    return True


def annotate(cells, expression: ColumnTypeExpression):
    """Per-cell masks under an expression, plus the numeric view built
    from the valid cells when the type is numeric."""
    missing = set(expression.missing)
    anomalies = set(expression.anomalies)
    masks = tuple(
        MISSING if cell in missing else ANOMALY if cell in anomalies else VALID
        for cell in cells
    )
    numeric = None
    if expression.type in ("integer", "float"):
        from .table import parse_number

        numeric = [
            parse_number(cell) if mask == VALID else None
            for cell, mask in zip(cells, masks)
        ]
    return masks, numeric


# -- assistant -------------------------------------------------------------------


class _BoundColumn:
    def __init__(self, table: Table, column_index: int) -> None:
        self.table = table
        self.column_index = column_index
        self.cells = table.columns[column_index].cells
        self.posterior_cache: dict[frozenset, TypePosterior] = {}


class TypeInferAssistant(Assistant):
    descriptor = AssistantDescriptor(
        id="type-infer",
        display_name="Column type inference (ptype)",
        input_slots=("input",),
        constraint_grammar_id="ptype",
    )

    def __init__(self, column: str | None = None, weights=DEFAULT_WEIGHTS) -> None:
        self.column = column
        self.scorer = TypeScorer(tuple(weights)) if tuple(weights) != DEFAULT_WEIGHTS else DEFAULT_SCORER

    def bind(self, bindings: Mapping[str, str]) -> _BoundColumn:
        table = read_csv(bindings["input"])
        index = 0
        if self.column is not None:
            index = (
                int(self.column) - 1
                if re.fullmatch(r"\d+", self.column)
                else table.column_index(self.column)
            )
        return _BoundColumn(table, index)

    def best(self, data: _BoundColumn, interactions: InteractionSet) -> ColumnTypeExpression:
        return typeinfer_best(data.cells, interactions, self.scorer, data.posterior_cache)

    def apply(self, expression: ColumnTypeExpression, data: _BoundColumn) -> Output:
        masks, _ = annotate(data.cells, expression)
        source = data.table.columns[data.column_index]
        annotated = table_from_cells([source.name], [[c] for c in source.cells])
        badge = ColumnAnnotation(
            badge=expression.type,
            missing=sum(1 for m in masks if m == MISSING),
            anomalies=sum(1 for m in masks if m == ANOMALY),
        )
        return Output(table=annotated, annotations=(badge,))

    def choices(self, data: _BoundColumn, interactions: InteractionSet) -> list[Choice]:
        return typeinfer_choices(data.cells, interactions, self.scorer, data.posterior_cache)

    def valid(self, expression, interactions: InteractionSet, data=None) -> bool:
        return typeinfer_valid(expression, interactions)

    def script(self, expression: ColumnTypeExpression) -> str:
        return expression.render()

    def parse_constraint(self, text: str) -> TypeConstraint:
        return parse_constraint(text)

    def score(self, data: _BoundColumn, expression, interactions) -> float:
        posterior = _posterior_for(data.cells, interactions, self.scorer, data.posterior_cache)
        return posterior.probabilities[expression.type]
