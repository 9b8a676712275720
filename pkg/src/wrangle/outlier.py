"""The m-sigma outlier-removal assistant and its aggregate-row variant.

Values outside [mean - m*sigma, mean + m*sigma] (population sigma,
missing values excluded) are offered for removal; the best expression
is simply whatever the analyst has selected so far.  The aggregate
variant finds rows holding numeric outliers and offers categorical
filters collected from those rows, which is how total/summary rows
hiding in a dataset get swept out with a couple of clicks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import (
    Assistant,
    AssistantDescriptor,
    Choice,
    ConstraintParseError,
    InteractionSet,
    Output,
    escape_arg,
    unescape_arg,
)
from .table import (
    CATEGORICAL,
    NUMERIC,
    Table,
    is_missing,
    parse_number,
    read_csv,
    table_from_cells,
)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


@dataclass(frozen=True)
class RemoveValue:
    value: str

    def render(self) -> str:
        return f"remove_value({escape_arg(self.value)})"


def _escape_field(text: str) -> str:
    return escape_arg(text).replace("=", "%3D")


def _unescape_field(text: str) -> str:
    return unescape_arg(text.replace("%3D", "="))


@dataclass(frozen=True)
class RemoveRows:
    column: str
    value: str

    def render(self) -> str:
        return f"remove_rows({_escape_field(self.column)}={_escape_field(self.value)})"


_VALUE_RE = re.compile(r"^remove_value\((.*)\)$")
_ROWS_RE = re.compile(r"^remove_rows\((.*?)=(.*)\)$")


def parse_value_constraint(text: str) -> RemoveValue:
    match = _VALUE_RE.match(text.strip())
    if not match:
        raise ConstraintParseError(f"bad outlier constraint {text!r}")
    return RemoveValue(unescape_arg(match.group(1)))


def parse_rows_constraint(text: str) -> RemoveRows:
    match = _ROWS_RE.match(text.strip())
    if not match:
        raise ConstraintParseError(f"bad aggregate-removal constraint {text!r}")
    return RemoveRows(_unescape_field(match.group(1)), _unescape_field(match.group(2)))


@dataclass(frozen=True)
class OutlierSet:
    values: tuple[float, ...]
    mean: float
    sigma: float
    low: float
    high: float


def detect_outliers(values, m: float) -> OutlierSet:
    """Values v with v <= mean - m*sigma or v >= mean + m*sigma, using
    the population standard deviation over all (non-missing) values.  A
    column with no spread has no outliers."""
    data = np.asarray(values, dtype=float)
    data = data[~np.isnan(data)]
    if data.size < 2:
        raise ValueError("outlier detection needs at least two values")
    if m <= 0:
        raise ValueError("the sigma multiplier must be positive")
    mean = float(np.mean(data))
    sigma = float(np.std(data))
    low, high = mean - m * sigma, mean + m * sigma
    if sigma == 0.0:
        return OutlierSet((), mean, sigma, low, high)
    flagged = sorted({float(v) for v in data if v <= low or v >= high})
    return OutlierSet(tuple(flagged), mean, sigma, low, high)


def outlier_best(interactions: InteractionSet) -> tuple:
    """The expression is the interaction set itself."""
    return tuple(interactions)


def outlier_choices(outliers: OutlierSet, interactions: InteractionSet) -> list[Choice]:
    """One option per not-yet-selected outlier, farthest from the mean
    first."""
    selected = {
        parse_number(c.value) for c in interactions if isinstance(c, RemoveValue)
    }
    remaining = [v for v in outliers.values if v not in selected]
    remaining.sort(key=lambda v: (-abs(v - outliers.mean), v))
    return [
        Choice(
            label=f"Remove value {_fmt(v)}",
            interactions=interactions.add(RemoveValue(_fmt(v))),
        )
        for v in remaining
    ]


def remove_values(selection: Sequence[RemoveValue], cells: Sequence[str]) -> list[str]:
    targets = {parse_number(c.value) for c in selection}
    kept = []
    for cell in cells:
        value = None if is_missing(cell) else parse_number(cell)
        if value is not None and value in targets:
            continue
        kept.append(cell)
    return kept


@dataclass(frozen=True)
class AggregateFilter:
    column: str
    value: str
    count: int


def collect_aggregate_filters(table: Table, m: float) -> list[AggregateFilter]:
    """Categorical (column, value) pairs occurring in rows that contain
    a numeric outlier, deduplicated and ordered by occurrence count
    descending, then by name."""
    numeric = [c for c in table.columns if c.kind == NUMERIC]
    categorical = [c for c in table.columns if c.kind == CATEGORICAL]
    if not numeric or not categorical:
        return []
    flagged_rows: set[int] = set()
    for column in numeric:
        view = column.numeric_view
        data = view[~np.isnan(view)]
        if data.size < 2:
            continue
        mean = float(np.mean(data))
        sigma = float(np.std(data))
        if sigma == 0.0:
            continue
        low, high = mean - m * sigma, mean + m * sigma
        for row, value in enumerate(view):
            if not np.isnan(value) and (value <= low or value >= high):
                flagged_rows.add(row)
    counts: dict[tuple[str, str], int] = {}
    for row in flagged_rows:
        for column in categorical:
            cell = column.cells[row]
            if is_missing(cell):
                continue
            counts[(column.name, cell)] = counts.get((column.name, cell), 0) + 1
    filters = [AggregateFilter(col, val, n) for (col, val), n in counts.items()]
    filters.sort(key=lambda f: (-f.count, f.column, f.value))
    return filters


def remove_rows(selection: Sequence[RemoveRows], table: Table) -> Table:
    """Drop every row matched by any selected categorical filter."""
    by_column: dict[int, set[str]] = {}
    for constraint in selection:
        index = table.column_index(constraint.column)
        by_column.setdefault(index, set()).add(constraint.value)
    rows = table.rows()
    kept = [
        row
        for row in rows
        if not any(row[i] in values for i, values in by_column.items())
    ]
    return table_from_cells(table.header, kept)


# -- assistants -------------------------------------------------------------------


def _pick_column(table: Table, spec: str | None, kind: str) -> int:
    if spec is not None:
        return (
            int(spec) - 1 if re.fullmatch(r"\d+", spec) else table.column_index(spec)
        )
    for i, column in enumerate(table.columns):
        if column.kind == kind:
            return i
    raise ValueError(f"no {kind} column in the input table")


class _BoundValues:
    def __init__(self, table: Table, column_index: int, m: float) -> None:
        self.table = table
        self.column_index = column_index
        self.cells = table.columns[column_index].cells
        # Bounds are computed from the raw values; they refresh with the
        # table, not between selections.
        self.outliers = detect_outliers(table.columns[column_index].numeric_view, m)


class OutlierValuesAssistant(Assistant):
    descriptor = AssistantDescriptor(
        id="outlier",
        display_name="Outlier value removal",
        input_slots=("input",),
        constraint_grammar_id="outlier",
    )

    def __init__(self, column: str | None = None, m: float = 3.0) -> None:
        self.column = column
        self.m = m

    def bind(self, bindings: Mapping[str, str]) -> _BoundValues:
        table = read_csv(bindings["input"])
        return _BoundValues(table, _pick_column(table, self.column, NUMERIC), self.m)

    def best(self, data: _BoundValues, interactions: InteractionSet) -> tuple:
        return outlier_best(interactions)

    def apply(self, expression: tuple, data: _BoundValues) -> Output:
        column = data.table.columns[data.column_index]
        kept = remove_values(expression, column.cells)
        return Output(table=table_from_cells([column.name], [[c] for c in kept]))

    def choices(self, data: _BoundValues, interactions: InteractionSet) -> list[Choice]:
        return outlier_choices(data.outliers, interactions)

    def valid(self, expression: tuple, interactions: InteractionSet, data: _BoundValues) -> bool:
        return set(expression) <= set(interactions)

    def script(self, expression: tuple) -> str:
        return "\n".join(c.render() for c in expression)

    def parse_constraint(self, text: str) -> RemoveValue:
        return parse_value_constraint(text)


class _BoundTable:
    def __init__(self, table: Table, m: float) -> None:
        self.table = table
        self.filters = collect_aggregate_filters(table, m)


class OutlierRowsAssistant(Assistant):
    descriptor = AssistantDescriptor(
        id="outlier-rows",
        display_name="Aggregate row removal",
        input_slots=("input",),
        constraint_grammar_id="outlier-rows",
    )

    def __init__(self, m: float = 3.0) -> None:
        self.m = m

    def bind(self, bindings: Mapping[str, str]) -> _BoundTable:
        return _BoundTable(read_csv(bindings["input"]), self.m)

    def best(self, data: _BoundTable, interactions: InteractionSet) -> tuple:
        return outlier_best(interactions)

    def apply(self, expression: tuple, data: _BoundTable) -> Output:
        return Output(table=remove_rows(expression, data.table))

    def choices(self, data: _BoundTable, interactions: InteractionSet) -> list[Choice]:
        selected = {
            (c.column, c.value) for c in interactions if isinstance(c, RemoveRows)
        }
        return [
            Choice(
                label=f"Remove rows where {f.column} = {f.value}",
                interactions=interactions.add(RemoveRows(f.column, f.value)),
            )
            for f in data.filters
            if (f.column, f.value) not in selected
        ]

    def valid(self, expression: tuple, interactions: InteractionSet, data: _BoundTable) -> bool:
        return set(expression) <= set(interactions)

    def script(self, expression: tuple) -> str:
        return "\n".join(c.render() for c in expression)

    def parse_constraint(self, text: str) -> RemoveRows:
        return parse_rows_constraint(text)
