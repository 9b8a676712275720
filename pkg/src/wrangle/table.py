"""Tabular data model shared by all assistants.

Tables keep cells as raw text and derive per-column views: a parsed
numeric vector for numeric columns and a relative-frequency map for
categorical ones.  CSV input honors an arbitrary dialect, output is
canonical RFC 4180 (comma, LF, quote only when needed).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dialect import CANONICAL_DIALECT, Dialect, parse_with_dialect

# Tokens treated as absent data everywhere (kind detection, statistics,
# and the type-inference missing machine use the same vocabulary).
MISSING_TOKENS = frozenset(
    {"", "?", "NA", "N/A", "na", "null", "NULL", "-", "NaN", "nan"}
)

NUMERIC = "numeric"
CATEGORICAL = "categorical"
TEXT = "text"

_NUMBER_RE = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)$")


def is_missing(cell: str) -> bool:
    return cell in MISSING_TOKENS


def parse_number(cell: str) -> float | None:
    """Deterministic, locale-free numeric parse: optional sign, decimal
    point, surrounding whitespace; no thousands separators."""
    stripped = cell.strip()
    if _NUMBER_RE.match(stripped):
        return float(stripped)
    return None


def detect_kind(cells: list[str] | tuple[str, ...]) -> str:
    """Numeric if at least 90% of non-missing cells parse as reals, else
    categorical while the distinct count stays small, else free text.
    Invariant under row permutation."""
    present = [c for c in cells if not is_missing(c)]
    if not present:
        return TEXT
    parsed = sum(1 for c in present if parse_number(c) is not None)
    if parsed / len(present) >= 0.9:
        return NUMERIC
    if len(set(present)) <= max(20, 0.05 * len(cells)):
        return CATEGORICAL
    return TEXT


def category_frequencies(cells) -> dict[str, float]:
    """Relative frequency per category over the non-missing cells."""
    counts: dict[str, int] = {}
    for cell in cells:
        if is_missing(cell):
            continue
        counts[cell] = counts.get(cell, 0) + 1
    total = sum(counts.values())
    if total == 0:
        return {}
    return {value: n / total for value, n in counts.items()}


@dataclass(frozen=True, eq=False)
class Column:
    name: str
    cells: tuple[str, ...]
    kind: str
    numeric_view: np.ndarray | None = None
    frequency_view: dict[str, float] | None = None

    @property
    def n_rows(self) -> int:
        return len(self.cells)

    def numeric_values(self) -> np.ndarray:
        """Parsed values with missing/unparseable entries dropped."""
        if self.numeric_view is None:
            raise ValueError(f"column {self.name!r} is not numeric")
        return self.numeric_view[~np.isnan(self.numeric_view)]


def column(name: str, cells) -> Column:
    """Build a column with kind detection and the matching derived view."""
    cells = tuple(cells)
    kind = detect_kind(cells)
    numeric_view = None
    frequency_view = None
    if kind == NUMERIC:
        numeric_view = np.array(
            [
                np.nan if is_missing(c) else _parse_or_nan(c)
                for c in cells
            ],
            dtype=float,
        )
    elif kind == CATEGORICAL:
        frequency_view = category_frequencies(cells)
    return Column(name, cells, kind, numeric_view, frequency_view)


def _parse_or_nan(cell: str) -> float:
    value = parse_number(cell)
    return np.nan if value is None else value


@dataclass(frozen=True, eq=False)
class Table:
    columns: tuple[Column, ...]
    n_rows: int

    @property
    def n_columns(self) -> int:
        return len(self.columns)

    @property
    def header(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def rows(self) -> list[list[str]]:
        return [
            [c.cells[i] for c in self.columns] for i in range(self.n_rows)
        ]

    def column_index(self, name: str) -> int:
        for i, c in enumerate(self.columns):
            if c.name == name:
                return i
        raise KeyError(f"no column named {name!r}")


def table_from_cells(header, rows) -> Table:
    """Assemble a table from a header and raw rows.

    Ragged rows are padded with empty cells; rows wider than the header
    widen the table (extra data is kept, not dropped).  Duplicate or
    empty column names are auto-suffixed so names stay unique.
    """
    width = max([len(header)] + [len(r) for r in rows]) if (header or rows) else 0
    names = _unique_names(list(header) + [""] * (width - len(header)))
    columns = tuple(
        column(names[j], [row[j] if j < len(row) else "" for row in rows])
        for j in range(width)
    )
    return Table(columns, len(rows))


def _unique_names(names: list[str]) -> list[str]:
    result = []
    seen: dict[str, int] = {}
    for i, raw in enumerate(names):
        name = raw if raw else f"column_{i + 1}"
        if name in seen:
            seen[name] += 1
            name = f"{name}_{seen[name]}"
        seen.setdefault(name, 1)
        result.append(name)
    return result


def read_text_file(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def table_from_text(text: str, dialect: Dialect = CANONICAL_DIALECT) -> Table:
    """Parse CSV text: first row is the header, the rest are data."""
    parsed = parse_with_dialect(text, dialect)
    if not parsed:
        raise ValueError("zero rows: input text holds no data")
    return table_from_cells(parsed[0], parsed[1:])


def read_csv(path, dialect: Dialect = CANONICAL_DIALECT) -> Table:
    return table_from_text(read_text_file(path), dialect)


def _render_cell(cell: str) -> str:
    if any(ch in cell for ch in (",", '"', "\n", "\r")):
        return '"' + cell.replace('"', '""') + '"'
    return cell


def render_csv(table: Table) -> str:
    lines = [",".join(_render_cell(name) for name in table.header)]
    for row in table.rows():
        lines.append(",".join(_render_cell(cell) for cell in row))
    return "\n".join(lines) + "\n"


def write_csv(table: Table, path) -> None:
    Path(path).write_text(render_csv(table), encoding="utf-8")


@dataclass(frozen=True)
class Preview:
    """First-N-rows rendering of a table with optional per-column badges."""

    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    annotations: tuple[str | None, ...] | None = None


def preview(table: Table, n: int = 10, annotations=None) -> Preview:
    rows = table.rows()[: max(n, 0)]
    return Preview(
        header=table.header,
        rows=tuple(tuple(row) for row in rows),
        annotations=tuple(annotations) if annotations is not None else None,
    )


class EmpiricalCdf:
    """Right-continuous step function of a sample: F(x) = P(X <= x)."""

    def __init__(self, values) -> None:
        data = np.asarray(values, dtype=float)
        if data.size == 0:
            raise ValueError("empirical CDF of an empty sample")
        self.support = np.unique(data)
        counts = np.searchsorted(np.sort(data), self.support, side="right")
        self.cumulative = counts / data.size

    def __call__(self, x: float) -> float:
        index = np.searchsorted(self.support, x, side="right")
        return 0.0 if index == 0 else float(self.cumulative[index - 1])


def empirical_cdf(values) -> EmpiricalCdf:
    return EmpiricalCdf(values)
