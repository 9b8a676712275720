"""Synthetic-corruption evaluation and oracle-guided interaction counts.

A base table is split 50/50 by row; one half is corrupted with a column
reordering plus two further corruptions drawn from a pool (inserted
noise columns, a deleted column, a recoded categorical, a linear
rescale).  The two extra corruptions never target the same column.  A
simulated analyst then drives the assistant: at each step it selects
the offered choice contradicting the first discrepancy between the
recommendation and the recorded ground truth, until the schema
reconciliation (permutation, deletes, inserts) is exact or the
interaction cap is reached.  Success is defined on that schema
structure; transform parameters are excluded because a moment-matched
fit cannot recover the sign of a negative corruption slope.

Base tables are generated look-alikes (an Iris-like and an Adult-like
shape) so the harness stays hermetic; the thresholds asserted in the
acceptance suite are properties of this implementation, not a
reproduction of any external corpus.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import Choice, InteractionSet, Session
from .datadiff import (
    DatadiffAssistant,
    Match,
    NoMatch,
    PatchSet,
)
from .dialect import DialectAssistant, FixComponent
from .table import Table, render_csv, table_from_cells
from .typeinfer import NotType, TypeInferAssistant

ALL_CORRUPTIONS = (
    "insert_numeric",
    "insert_categorical",
    "delete",
    "recode",
    "linear",
)
SCHEMA_CORRUPTIONS = ("insert_numeric", "insert_categorical", "delete")

INTERACTION_CAP = 10


# -- base table generators ---------------------------------------------------


def make_iris_like(seed: int, rows: int = 300) -> Table:
    # Numeric shapes are deliberately distinct from one another AND from
    # the U(0,1) noise columns the corruption inserts: a moment-matched
    # linear transform absorbs affine differences, so only shape keeps
    # wrong matchings more expensive than right ones.
    rng = np.random.default_rng(seed)
    species = ["setosa", "versicolor", "virginica"]
    weights = [0.4, 0.35, 0.25]
    header = ["sepal_length", "sepal_width", "petal_length", "petal_width", "species"]
    bimodal = np.where(
        rng.random(rows) < 0.5, rng.normal(1.5, 0.2, rows), rng.normal(5.0, 0.6, rows)
    )
    data = [
        np.round((rng.gamma(2.0, 0.9, rows) + 4.0), 1),
        np.round(rng.triangular(2.0, 3.1, 4.4, rows), 1),
        np.round(bimodal.clip(0.1), 1),
        np.round(rng.exponential(0.8, rows) + 0.1, 1),
    ]
    labels = rng.choice(species, size=rows, p=weights)
    cells = [
        [str(data[0][i]), str(data[1][i]), str(data[2][i]), str(data[3][i]), labels[i]]
        for i in range(rows)
    ]
    return table_from_cells(header, cells)


def make_adult_like(seed: int, rows: int = 400) -> Table:
    rng = np.random.default_rng(seed)
    header = [
        "age", "workclass", "fnlwgt", "education", "grade_code",
        "marital_status", "occupation", "relationship", "race", "surname",
        "capital_gain", "city", "hours_per_week", "country", "zip",
    ]

    def flat_cat(prefix, levels):
        values = [f"{prefix}_{k}" for k in range(levels)]
        return rng.choice(values, size=rows)

    def head_cat(prefix, levels, head):
        values = [f"{prefix}_{k}" for k in range(levels)]
        weights = np.full(levels, (1.0 - head) / (levels - 1))
        weights[0] = head
        return rng.choice(values, size=rows, p=weights)

    # A vacated column slot can only be filled by a same-kind column, so
    # the kind groups are kept small: 4 numeric columns (shape-distinct)
    # and 4 low-cardinality categoricals.  The rest exceed the
    # categorical cardinality threshold (text kind), which rules out the
    # rank recode entirely; with disjoint value sets their raw distance
    # is ~1, worse than a delete plus insert, so they never bridge.
    hours = np.where(
        rng.random(rows) < 0.55, 40, np.round(rng.normal(45, 12, rows).clip(1, 99))
    )
    columns = [
        np.round(rng.gamma(2.2, 9.0, rows) + 17).clip(17, 90).astype(int).astype(str),
        flat_cat("work", 3),
        np.round(rng.lognormal(12, 0.8, rows)).astype(int).astype(str),
        flat_cat("edu", 7),
        flat_cat("grade", 24),
        head_cat("marital", 5, 0.9),
        flat_cat("occup", 35),
        flat_cat("rel", 28),
        head_cat("race", 16, 0.55),
        flat_cat("surname", 90),
        np.where(rng.random(rows) < 0.08, rng.integers(1000, 50000, rows), 0).astype(str),
        flat_cat("city", 60),
        hours.astype(int).astype(str),
        flat_cat("country", 45),
        flat_cat("zip", 70),
    ]
    cells = [[str(columns[j][i]) for j in range(len(header))] for i in range(rows)]
    return table_from_cells(header, cells)


# -- corruption ---------------------------------------------------------------


@dataclass(frozen=True)
class GroundTruth:
    """Reconciliation from the corrupted half back to the clean half."""

    pairs: frozenset[tuple[int, int]]
    deletes: frozenset[int]
    inserts: frozenset[int]
    transformed: frozenset[int]  # reference positions of recoded/rescaled columns


@dataclass(frozen=True)
class CorruptionCase:
    case_id: int
    corrupted: Table
    clean: Table
    truth: GroundTruth
    applied: tuple[str, ...]


def corrupt(
    table: Table, seed: int, kinds: Sequence[str] = ALL_CORRUPTIONS
) -> CorruptionCase:
    """Split rows 50/50, reorder the corrupted half's columns and apply
    two further named corruptions (on distinct columns)."""
    if table.n_columns < 4 or table.n_rows < 40:
        raise ValueError("corruption needs at least 4 columns and 40 rows")
    rng = random.Random(seed)
    rows = table.rows()
    order = list(range(len(rows)))
    rng.shuffle(order)
    half = len(rows) // 2
    clean_rows = [rows[i] for i in order[:half]]
    victim_rows = [rows[i] for i in order[half:]]

    clean = table_from_cells(table.header, clean_rows)
    header = list(table.header)
    n = len(header)

    chosen = rng.sample(list(kinds), 2)
    targets = rng.sample(range(n), 2)  # corruptions never share a column
    columns = {name: [row[j] for row in victim_rows] for j, name in enumerate(header)}
    deleted: list[str] = []
    inserted: list[str] = []
    transformed: list[str] = []

    for kind, target in zip(chosen, targets):
        name = header[target]
        if kind == "delete":
            deleted.append(name)
        elif kind == "insert_numeric":
            fresh = f"noise_{target}"
            columns[fresh] = [f"{rng.random():.4f}" for _ in victim_rows]
            inserted.append(fresh)
        elif kind == "insert_categorical":
            fresh = f"flag_{target}"
            columns[fresh] = [rng.choice(["yes", "no"]) for _ in victim_rows]
            inserted.append(fresh)
        elif kind == "recode":
            name = _pick_column(table, rng, "categorical", exclude=deleted) or name
            values = columns[name]
            categories = sorted(set(values))
            mapping = {c: f"code_{k}" for k, c in enumerate(categories)}
            columns[name] = [mapping[v] for v in values]
            if name not in deleted:
                transformed.append(name)
        elif kind == "linear":
            name = _pick_column(table, rng, "numeric", exclude=deleted) or name
            values = columns[name]
            parsed = [float(v) for v in values if _is_number(v)]
            mean = sum(parsed) / len(parsed) if parsed else 0.0
            a = rng.uniform(-0.5, 0.5)
            b = rng.uniform(-2 * mean, 2 * mean) if mean else rng.uniform(-1, 1)
            columns[name] = [
                f"{a * float(v) + b:.6g}" if _is_number(v) else v for v in values
            ]
            if name not in deleted:
                transformed.append(name)
        else:
            raise ValueError(f"unknown corruption {kind!r}")

    survivors = [name for name in header if name not in deleted] + inserted
    rng.shuffle(survivors)
    corrupted_rows = [
        [columns[name][i] for name in survivors] for i in range(len(victim_rows))
    ]
    corrupted = table_from_cells(survivors, corrupted_rows)

    ref_pos = {name: j for j, name in enumerate(header)}
    pairs = frozenset(
        (i, ref_pos[name])
        for i, name in enumerate(survivors)
        if name in ref_pos
    )
    truth = GroundTruth(
        pairs=pairs,
        deletes=frozenset(i for i, name in enumerate(survivors) if name not in ref_pos),
        inserts=frozenset(ref_pos[name] for name in deleted),
        transformed=frozenset(ref_pos[name] for name in transformed if name in ref_pos),
    )
    return CorruptionCase(seed, corrupted, clean, truth, tuple(chosen))


def _pick_column(table: Table, rng: random.Random, kind: str, exclude=()) -> str | None:
    names = [c.name for c in table.columns if c.kind == kind and c.name not in exclude]
    return rng.choice(names) if names else None


def _is_number(value: str) -> bool:
    from .table import parse_number

    return parse_number(value) is not None


# -- oracle-driven sessions ------------------------------------------------------


@dataclass(frozen=True)
class InteractionTrace:
    assistant: str
    case_id: int
    interactions: int | None  # None marks DNF (cap reached, no convergence)
    chosen: tuple[str, ...]


def drive(
    session: Session,
    done: Callable[[object], bool],
    pick: Callable[[object, Sequence[Choice]], int | None],
    cap: int = INTERACTION_CAP,
) -> tuple[int | None, list[str]]:
    """Generic simulated analyst: stop when the recommendation passes
    ``done``; otherwise select the choice picked by the oracle."""
    chosen: list[str] = []
    for count in range(cap + 1):
        rec = session.step()
        if done(rec.expression):
            return count, chosen
        if count == cap:
            break
        index = pick(rec.expression, rec.choices)
        if index is None:
            break
        chosen.append(rec.choices[index].label)
        session.select(index)
    return None, chosen


def _datadiff_oracle(truth: GroundTruth):
    def done(expression: PatchSet) -> bool:
        return (
            frozenset(expression.permutation) == truth.pairs
            and frozenset(expression.deletes) == truth.deletes
            and frozenset(expression.inserts) == truth.inserts
        )

    def pick(expression: PatchSet, choices: Sequence[Choice]) -> int | None:
        # Contradict wrong pairs occupying a slot that must end up as an
        # insert first: each such nomatch rules one filler out for good,
        # while blocking the roaming inserted column only reroutes it.
        wrong = sorted(frozenset(expression.permutation) - truth.pairs)
        wrong.sort(
            key=lambda pair: (
                pair[1] not in truth.inserts,
                pair[0] not in truth.deletes,
                pair,
            )
        )
        wanted = [NoMatch(str(i + 1), str(j + 1)) for i, j in wrong]
        missing = sorted(truth.pairs - frozenset(expression.permutation))
        wanted += [Match(str(i + 1), str(j + 1)) for i, j in missing]
        for target in wanted:
            for index, choice in enumerate(choices):
                if choice.interactions.constraints[-1] == target:
                    return index
        return None

    return done, pick


def run_datadiff_cases(
    cases: int, seed: int, kinds: Sequence[str] = ALL_CORRUPTIONS
) -> list[InteractionTrace]:
    import tempfile
    from pathlib import Path

    traces = []
    base_seed = seed * 1000
    with tempfile.TemporaryDirectory(prefix="wrangle-eval-") as workdir:
        for k in range(cases):
            base = (
                make_iris_like(base_seed + k)
                if k % 2 == 0
                else make_adult_like(base_seed + k)
            )
            case = corrupt(base, base_seed + k, kinds)
            input_path = Path(workdir) / f"input_{k}.csv"
            reference_path = Path(workdir) / f"reference_{k}.csv"
            input_path.write_text(render_csv(case.corrupted))
            reference_path.write_text(render_csv(case.clean))
            # A wide table can offer more nomatch/match options than the
            # interactive default cap would show; the oracle needs them.
            session = Session(
                DatadiffAssistant(max_choices=120),
                {"input": str(input_path), "reference": str(reference_path)},
            )
            done, pick = _datadiff_oracle(case.truth)
            count, chosen = drive(session, done, pick)
            traces.append(InteractionTrace("datadiff", k, count, tuple(chosen)))
    return traces


def run_dialect_cases(cases: int, seed: int) -> list[InteractionTrace]:
    """Randomized files with a target dialect drawn from the candidate
    set; the oracle fixes one differing component per step, so three
    interactions always suffice."""
    import tempfile
    from pathlib import Path

    from .dialect import SLOTS, Dialect, candidate_dialects

    rng = random.Random(seed)
    traces = []
    with tempfile.TemporaryDirectory(prefix="wrangle-eval-") as workdir:
        for k in range(cases):
            written = Dialect(rng.choice([",", ";", "\t", "|", ":"]), None, None)
            path = Path(workdir) / f"case_{k}.csv"
            path.write_text(_random_csv(rng, written))
            candidates = candidate_dialects(path.read_text(), InteractionSet())
            target = candidates[rng.randrange(len(candidates))]
            session = Session(DialectAssistant(), {"input": str(path)})

            def done(expression: Dialect) -> bool:
                return expression == target

            def pick(expression: Dialect, choices: Sequence[Choice]) -> int | None:
                for slot in SLOTS:
                    if getattr(expression, slot) != getattr(target, slot):
                        wanted = FixComponent(slot, getattr(target, slot))
                        for index, choice in enumerate(choices):
                            if choice.interactions.constraints[-1] == wanted:
                                return index
                return None

            count, chosen = drive(session, done, pick)
            traces.append(InteractionTrace("csv-dialect", k, count, tuple(chosen)))
    return traces


def _random_csv(rng: random.Random, dialect) -> str:
    rows = []
    for _ in range(rng.randint(8, 20)):
        cells = []
        for _ in range(rng.randint(3, 6)):
            kind = rng.random()
            if kind < 0.5:
                cells.append(f"{rng.randint(0, 999)}")
            elif kind < 0.8:
                cells.append(rng.choice(["alpha", "beta", "gamma", "delta"]))
            else:
                cells.append(f"{rng.randint(0, 23):02d}:{rng.randint(0, 59):02d}")
        row = dialect.delimiter.join(cells)
        rows.append(row)
    return "\n".join(rows) + "\n"


def run_typeinfer_cases(cases: int, seed: int) -> list[InteractionTrace]:
    """Columns with a known generating type; the oracle rejects wrong
    types until the inferred one matches."""
    import tempfile
    from pathlib import Path

    rng = random.Random(seed)
    traces = []
    generators = {
        "boolean": lambda: rng.choice(["yes", "no", "true", "false"]),
        "integer": lambda: str(rng.randint(-500, 500)),
        "float": lambda: f"{rng.uniform(-100, 100):.2f}",
        "string": lambda: "".join(
            rng.choice("abcdefghijklmnopqrstuvwxyz ,.") for _ in range(rng.randint(5, 14))
        ),
    }
    with tempfile.TemporaryDirectory(prefix="wrangle-eval-") as workdir:
        for k in range(cases):
            target = rng.choice(list(generators))
            cells = [generators[target]() for _ in range(rng.randint(30, 80))]
            path = Path(workdir) / f"col_{k}.csv"
            path.write_text("value\n" + "\n".join(cells) + "\n")
            session = Session(TypeInferAssistant(), {"input": str(path)})

            def done(expression) -> bool:
                return expression.type == target

            def pick(expression, choices: Sequence[Choice]) -> int | None:
                wanted = NotType(expression.type)
                for index, choice in enumerate(choices):
                    if choice.interactions.constraints[-1] == wanted:
                        return index
                return None

            count, chosen = drive(session, done, pick)
            traces.append(InteractionTrace("type-infer", k, count, tuple(chosen)))
    return traces


# -- reporting ---------------------------------------------------------------------


@dataclass(frozen=True)
class Report:
    fractions: dict[str, float]
    average: float | None
    cases: int

    def render(self) -> str:
        cells = " ".join(f"{k}={v:.2f}" for k, v in self.fractions.items())
        avg = "—" if self.average is None else f"{self.average:.2f}"
        return f"cases={self.cases} {cells} average={avg}"

    def to_csv(self) -> str:
        header = ",".join(list(self.fractions) + ["average", "cases"])
        avg = "—" if self.average is None else f"{self.average:.4f}"
        values = ",".join(
            [f"{v:.4f}" for v in self.fractions.values()] + [avg, str(self.cases)]
        )
        return header + "\n" + values + "\n"


def report(traces: Sequence[InteractionTrace]) -> Report:
    """Fractions per interaction bucket {0,1,2,3,4+} and the average
    over the cases that needed some interaction (DNF counts at the
    cap)."""
    if not traces:
        raise ValueError("report needs at least one trace")
    buckets = {"0": 0, "1": 0, "2": 0, "3": 0, "4+": 0}
    needed: list[int] = []
    for trace in traces:
        count = INTERACTION_CAP if trace.interactions is None else trace.interactions
        if count >= 4:
            buckets["4+"] += 1
        else:
            buckets[str(count)] += 1
        if count > 0:
            needed.append(count)
    fractions = {k: v / len(traces) for k, v in buckets.items()}
    average = sum(needed) / len(needed) if needed else None
    return Report(fractions, average, len(traces))
