"""CSV dialect detection driven by a data-consistency objective.

A dialect is the (delimiter, quote, escape) triple needed to split a raw
file into cells.  Every candidate triple observed in the file is scored
with ``pattern score x type score``; analyst constraints fix a component
to a value or block a character from consideration.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .core import (
    Assistant,
    AssistantDescriptor,
    Choice,
    ConflictingConstraintsError,
    ConstraintParseError,
    InteractionSet,
    Output,
    escape_arg,
    unescape_arg,
)

# The sentinel for "component not used" is None; it prints as "none".
QUOTE_CHARS = ('"', "'")
ESCAPE_CHAR = "\\"
LINE_BREAKS = ("\n", "\r")

_CHAR_SPELLINGS = {"\t": "\\t", "\n": "\\n", "\r": "\\r", " ": "\\s"}
_SPELLED_CHARS = {v: k for k, v in _CHAR_SPELLINGS.items()}


def spell_char(char: str | None) -> str:
    if char is None:
        return "none"
    return _CHAR_SPELLINGS.get(char, char)


def unspell_char(text: str) -> str | None:
    if text == "none":
        return None
    if text in _SPELLED_CHARS:
        return _SPELLED_CHARS[text]
    if len(text) != 1:
        raise ConstraintParseError(f"expected a single character, got {text!r}")
    return text


@dataclass(frozen=True)
class Dialect:
    """CSV formatting triple.  ``None`` marks an unused component."""

    delimiter: str | None
    quote: str | None = None
    escape: str | None = None

    def __post_init__(self) -> None:
        present = [c for c in (self.delimiter, self.quote, self.escape) if c is not None]
        if len(present) != len(set(present)):
            raise ValueError("delimiter, quote and escape must be distinct")

    def render(self) -> str:
        return (
            f"delimiter={spell_char(self.delimiter)}"
            f" quote={spell_char(self.quote)}"
            f" escape={spell_char(self.escape)}"
        )


CANONICAL_DIALECT = Dialect(delimiter=",", quote='"', escape=None)


def parse_dialect(text: str) -> Dialect:
    """Inverse of :meth:`Dialect.render`."""
    fields: dict[str, str | None] = {}
    for token in text.split():
        key, sep, value = token.partition("=")
        if not sep or key not in ("delimiter", "quote", "escape"):
            raise ConstraintParseError(f"bad dialect component {token!r}")
        fields[key] = unspell_char(value)
    if "delimiter" not in fields:
        raise ConstraintParseError(f"dialect spec {text!r} lacks a delimiter")
    return Dialect(
        delimiter=fields.get("delimiter"),
        quote=fields.get("quote"),
        escape=fields.get("escape"),
    )


# -- parsing ------------------------------------------------------------


def parse_with_dialect(text: str, dialect: Dialect) -> list[list[str]]:
    """Split raw text into rows of cells under a dialect.

    Best-effort, stateful split: a quote at cell start opens a quoted
    region (doubled quote inside is a literal quote, an unterminated
    quote consumes to the end of the text), the escape character makes
    the next character literal, and a None delimiter yields one cell
    per line.
    """
    if dialect.delimiter is None:
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        return [[line.rstrip("\r")] for line in lines]

    rows: list[list[str]] = []
    row: list[str] = []
    cell: list[str] = []
    in_quotes = False
    at_cell_start = True
    i = 0
    n = len(text)
    delim, quote, esc = dialect.delimiter, dialect.quote, dialect.escape

    def end_cell() -> None:
        nonlocal cell, at_cell_start
        row.append("".join(cell))
        cell = []
        at_cell_start = True

    def end_row() -> None:
        nonlocal row
        end_cell()
        rows.append(row)
        row = []

    while i < n:
        ch = text[i]
        if esc is not None and ch == esc and i + 1 < n:
            cell.append(text[i + 1])
            at_cell_start = False
            i += 2
            continue
        if in_quotes:
            if ch == quote:
                if i + 1 < n and text[i + 1] == quote:
                    cell.append(quote)
                    i += 2
                    continue
                in_quotes = False
                i += 1
                continue
            cell.append(ch)
            i += 1
            continue
        if quote is not None and ch == quote and at_cell_start:
            in_quotes = True
            at_cell_start = False
            i += 1
            continue
        if ch == delim:
            end_cell()
            i += 1
            continue
        if ch == "\n":
            end_row()
            i += 1
            continue
        if ch == "\r":
            if i + 1 < n and text[i + 1] == "\n":
                i += 1
            end_row()
            i += 1
            continue
        cell.append(ch)
        at_cell_start = False
        i += 1

    if cell or row or (n and not text.endswith(("\n", "\r"))):
        end_row()
    return rows


# -- consistency scoring -------------------------------------------------

_NUMBER_CELL = re.compile(r"^\s*[+-]?(?:\d+\.?\d*|\.\d+)\s*$")
_DATE_CELL = re.compile(
    r"^(?:\d{4}[-/]\d{1,2}[-/]\d{1,2}|\d{1,2}[-/]\d{1,2}[-/]\d{4})$"
)
_TIME_CELL = re.compile(r"^\d{1,2}:\d{2}(?::\d{2})?$")
_URL_CELL = re.compile(r"^https?://\S+$")
_EMAIL_CELL = re.compile(r"^[^@\s]+@[^@\s]+\.[^@\s]+$")
_TOKEN_CELL = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")

# JSON is deliberately not a recognized type; extra detectors are
# config-gated through DialectConfig.extra_detectors.
_DETECTORS = (
    _NUMBER_CELL,
    _DATE_CELL,
    _TIME_CELL,
    _URL_CELL,
    _EMAIL_CELL,
    _TOKEN_CELL,
)

TYPE_SCORE_FLOOR = 1e-3


def cell_has_type(cell: str, extra: tuple[re.Pattern, ...] = ()) -> bool:
    if cell == "":
        return True
    for pattern in _DETECTORS + tuple(extra):
        if pattern.match(cell):
            return True
    return False


def pattern_score(rows: list[list[str]]) -> float:
    """Structural regularity of the parsed rows.

    Rows are grouped by cell count L; each group of N rows contributes
    N * (L - 1) / L and the total is averaged over the number of
    distinct groups.  Many rows agreeing on a multi-cell width score
    high; a no-delimiter parse (L = 1 everywhere) scores zero.
    """
    if not rows:
        raise ValueError("pattern score needs at least one row")
    groups: dict[int, int] = {}
    for row in rows:
        groups[len(row)] = groups.get(len(row), 0) + 1
    total = sum(n * (length - 1) / length for length, n in groups.items())
    return total / len(groups)


def type_score(rows: list[list[str]], extra: tuple[re.Pattern, ...] = ()) -> float:
    """Proportion of cells with an identifiable data type, floored at
    TYPE_SCORE_FLOOR so the consistency product never collapses."""
    cells = [cell for row in rows for cell in row]
    if not cells:
        raise ValueError("type score needs at least one cell")
    typed = sum(1 for cell in cells if cell_has_type(cell, extra))
    return max(TYPE_SCORE_FLOOR, typed / len(cells))


@dataclass(frozen=True)
class ScoredDialect:
    dialect: Dialect
    pattern: float
    type: float

    @property
    def consistency(self) -> float:
        return self.pattern * self.type


@dataclass(frozen=True)
class DialectConfig:
    max_lines: int = 1000
    extra_detectors: tuple[re.Pattern, ...] = ()


# -- constraints ----------------------------------------------------------

SLOTS = ("delimiter", "quote", "escape")


@dataclass(frozen=True)
class FixComponent:
    slot: str
    value: str | None

    def render(self) -> str:
        return f"fix_{self.slot}({escape_arg(spell_char(self.value))})"


@dataclass(frozen=True)
class BlockComponent:
    slot: str
    value: str | None

    def render(self) -> str:
        return f"not_{self.slot}({escape_arg(spell_char(self.value))})"


_CONSTRAINT_RE = re.compile(r"^(fix|not)_(delimiter|quote|escape)\((.*)\)$")


def parse_constraint(text: str) -> FixComponent | BlockComponent:
    match = _CONSTRAINT_RE.match(text.strip())
    if not match:
        raise ConstraintParseError(f"bad dialect constraint {text!r}")
    kind, slot, arg = match.groups()
    value = unspell_char(unescape_arg(arg))
    return FixComponent(slot, value) if kind == "fix" else BlockComponent(slot, value)


def _slot_constraints(interactions: InteractionSet) -> tuple[dict, dict]:
    fixed: dict[str, str | None] = {}
    blocked: dict[str, set] = {slot: set() for slot in SLOTS}
    for constraint in interactions:
        if isinstance(constraint, FixComponent):
            if constraint.slot in fixed and fixed[constraint.slot] != constraint.value:
                raise ConflictingConstraintsError(
                    f"{constraint.slot} fixed to two different values"
                )
            fixed[constraint.slot] = constraint.value
        elif isinstance(constraint, BlockComponent):
            blocked[constraint.slot].add(constraint.value)
        else:
            raise ConstraintParseError(f"not a dialect constraint: {constraint!r}")
    for slot, value in fixed.items():
        if value in blocked[slot]:
            raise ConflictingConstraintsError(
                f"{slot} value {spell_char(value)!r} is both fixed and blocked"
            )
    return fixed, blocked


def dialect_valid(dialect: Dialect, interactions: InteractionSet) -> bool:
    fixed, blocked = _slot_constraints(interactions)
    for slot in SLOTS:
        value = getattr(dialect, slot)
        if slot in fixed and value != fixed[slot]:
            return False
        if value in blocked[slot]:
            return False
    return True


# -- candidate generation --------------------------------------------------


def candidate_dialects(text: str, interactions: InteractionSet) -> list[Dialect]:
    """Enumerate dialects from the characters observed in the file,
    filtered (and, for fixed components, forced) by the constraints.

    Delimiter candidates are the non-alphanumeric, non-quote characters
    in the file (tab allowed, line breaks and the escape character not)
    plus comma and the no-delimiter sentinel.  Adding a constraint never
    enlarges the pool except for an explicit fix, which is definitive.
    """
    if not text:
        raise ValueError("empty input text")
    fixed, blocked = _slot_constraints(interactions)
    chars = set(text)

    delimiters: list[str | None] = [","]
    for ch in sorted(chars):
        if ch.isalnum() or ch in QUOTE_CHARS or ch == ESCAPE_CHAR:
            continue
        if ch in LINE_BREAKS or (ord(ch) < 32 and ch != "\t"):
            continue
        if ch != ",":
            delimiters.append(ch)
    delimiters.append(None)

    quotes: list[str | None] = [q for q in QUOTE_CHARS if q in chars]
    quotes.append(None)

    escapes: list[str | None] = [None]
    if ESCAPE_CHAR in chars and _escape_is_adjacent(text, delimiters, quotes):
        escapes.insert(0, ESCAPE_CHAR)

    pools: dict[str, list[str | None]] = {
        "delimiter": delimiters,
        "quote": quotes,
        "escape": escapes,
    }
    for slot in SLOTS:
        if slot in fixed:
            pools[slot] = [fixed[slot]]
        else:
            pools[slot] = [v for v in pools[slot] if v not in blocked[slot]]

    candidates = []
    for d in pools["delimiter"]:
        for q in pools["quote"]:
            for e in pools["escape"]:
                present = [c for c in (d, q, e) if c is not None]
                if len(present) != len(set(present)):
                    continue
                candidates.append(Dialect(d, q, e))
    if not candidates:
        raise ConflictingConstraintsError("constraints leave no candidate dialect")
    return candidates


def _escape_is_adjacent(text: str, delimiters: Iterable, quotes: Iterable) -> bool:
    specials = {c for c in list(delimiters) + list(quotes) if c is not None}
    for i, ch in enumerate(text):
        if ch != ESCAPE_CHAR:
            continue
        if i + 1 < len(text) and text[i + 1] in specials:
            return True
        if i > 0 and text[i - 1] in specials:
            return True
    return False


# -- optimization -----------------------------------------------------------

# Tie-break preference for equal consistency scores.
_DELIM_PREFERENCE = {",": 0, "\t": 1, ";": 2, "|": 3}


def _delim_rank(char: str | None) -> tuple[int, int]:
    if char is None:
        return (2, 0)
    if char in _DELIM_PREFERENCE:
        return (0, _DELIM_PREFERENCE[char])
    return (1, ord(char))


def _component_rank(char: str | None) -> tuple[int, int]:
    return (1, 0) if char is None else (0, ord(char))


def _sort_key(scored: ScoredDialect) -> tuple:
    return (
        -scored.consistency,
        _delim_rank(scored.dialect.delimiter),
        _component_rank(scored.dialect.quote),
        _component_rank(scored.dialect.escape),
    )


def score_dialect(
    text: str,
    dialect: Dialect,
    config: DialectConfig = DialectConfig(),
    cache: dict | None = None,
) -> ScoredDialect:
    if cache is not None and dialect in cache:
        return cache[dialect]
    sample = _clip_lines(text, config.max_lines)
    rows = parse_with_dialect(sample, dialect)
    if not rows:
        scored = ScoredDialect(dialect, 0.0, TYPE_SCORE_FLOOR)
    else:
        p = pattern_score(rows)
        # The type score pass can be skipped when the pattern score is
        # already zero; the product cannot recover.
        t = type_score(rows, config.extra_detectors) if p > 0 else TYPE_SCORE_FLOOR
        scored = ScoredDialect(dialect, p, t)
    if cache is not None:
        cache[dialect] = scored
    return scored


def _clip_lines(text: str, max_lines: int) -> str:
    if max_lines <= 0:
        return text
    pos = -1
    for _ in range(max_lines):
        pos = text.find("\n", pos + 1)
        if pos == -1:
            return text
    return text[: pos + 1]


def rank_dialects(
    text: str,
    interactions: InteractionSet,
    config: DialectConfig = DialectConfig(),
    cache: dict | None = None,
) -> list[ScoredDialect]:
    """Score every candidate dialect allowed by the constraints and
    return the full ranking, best first, deterministic under ties."""
    candidates = candidate_dialects(text, interactions)
    scored = [score_dialect(text, d, config, cache) for d in candidates]
    scored.sort(key=_sort_key)
    return scored


def dialect_best(
    text: str,
    interactions: InteractionSet,
    config: DialectConfig = DialectConfig(),
    cache: dict | None = None,
) -> tuple[Dialect, list[ScoredDialect]]:
    ranking = rank_dialects(text, interactions, config, cache)
    return ranking[0].dialect, ranking


def dialect_choices(
    text: str,
    interactions: InteractionSet,
    config: DialectConfig = DialectConfig(),
    cache: dict | None = None,
) -> list[Choice]:
    """Refinements on the current best dialect: first reject one of its
    components, then fix a slot to an alternative candidate, ordered by
    the best consistency among candidates carrying that alternative."""
    best, ranking = dialect_best(text, interactions, config, cache)
    fixed, _ = _slot_constraints(interactions)

    choices: list[Choice] = []
    for slot in SLOTS:
        value = getattr(best, slot)
        if slot in fixed or value is None:
            continue
        constraint = BlockComponent(slot, value)
        if constraint in interactions:
            continue
        choices.append(
            Choice(
                label=f"Don't use {_describe(value)} as the {slot}",
                interactions=interactions.add(constraint),
            )
        )

    for slot in SLOTS:
        if slot in fixed:
            continue
        best_value = getattr(best, slot)
        seen: set = set()
        alternatives = []
        for scored in ranking:  # best-scoring dialect per component value
            value = getattr(scored.dialect, slot)
            if value == best_value or value in seen:
                continue
            seen.add(value)
            alternatives.append((scored.consistency, value))
        for _, value in sorted(alternatives, key=lambda t: -t[0]):
            constraint = FixComponent(slot, value)
            if constraint in interactions:
                continue
            choices.append(
                Choice(
                    label=f"Use {_describe(value)} as the {slot}",
                    interactions=interactions.add(constraint),
                )
            )
    return choices


def _describe(value: str | None) -> str:
    if value is None:
        return "nothing"
    if value == "\t":
        return "tab"
    if value == " ":
        return "space"
    return f"'{value}'"


# -- assistant ---------------------------------------------------------------


class _BoundText:
    def __init__(self, text: str) -> None:
        self.text = text
        self.score_cache: dict[Dialect, ScoredDialect] = {}


class DialectAssistant(Assistant):
    descriptor = AssistantDescriptor(
        id="csv-dialect",
        display_name="CSV dialect detection",
        input_slots=("input",),
        constraint_grammar_id="dialect",
    )

    def __init__(self, **options) -> None:
        self.config = DialectConfig(**options)

    def bind(self, bindings: Mapping[str, str]) -> _BoundText:
        from .table import read_text_file

        return _BoundText(read_text_file(bindings["input"]))

    def best(self, data: _BoundText, interactions: InteractionSet) -> Dialect:
        best, _ = dialect_best(data.text, interactions, self.config, data.score_cache)
        return best

    def ranking(self, data: _BoundText, interactions: InteractionSet) -> list[ScoredDialect]:
        return rank_dialects(data.text, interactions, self.config, data.score_cache)

    def apply(self, expression: Dialect, data: _BoundText) -> Output:
        from .table import table_from_text

        return Output(table=table_from_text(data.text, expression))

    def choices(self, data: _BoundText, interactions: InteractionSet) -> list[Choice]:
        return dialect_choices(data.text, interactions, self.config, data.score_cache)

    def valid(self, expression: Dialect, interactions: InteractionSet, data=None) -> bool:
        return dialect_valid(expression, interactions)

    def script(self, expression: Dialect) -> str:
        return expression.render()

    def parse_constraint(self, text: str):
        return parse_constraint(text)

    def score(self, data: _BoundText, expression: Dialect, interactions: InteractionSet) -> float:
        return score_dialect(data.text, expression, self.config, data.score_cache).consistency
