"""Schema reconciliation between an input table and a reference table.

The recommender compares per-column empirical distributions (the
Kolmogorov-Smirnov statistic for numeric columns, total variation for
categorical ones), builds a padded pairwise cost matrix and solves a
minimum-cost perfect matching.  The result is a patch list: delete the
unmatched input columns, permute the rest into reference order, recode
or linearly rescale where a transform beats the raw distance, and
insert an empty column for every unmatched reference column.  Analyst
constraints pin a match to zero cost, forbid one with infinite cost, or
block transforms on a column.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

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
from .table import (
    CATEGORICAL,
    NUMERIC,
    Column,
    Table,
    category_frequencies,
    is_missing,
    read_csv,
    table_from_cells,
)


# -- patches ----------------------------------------------------------------
#
# Index conventions: delete() addresses input positions, insert()
# reference positions, permute() holds (input, reference) pairs, and
# recode()/linear()/notransform() address the post-permute position,
# which coincides with the reference position.  All indices are 0-based
# internally and 1-based in the serialized script.


@dataclass(frozen=True)
class Recode:
    target: int
    mapping: tuple[tuple[str, str], ...]

    def render(self) -> str:
        # identity pairs are carried (so applying never misreports a
        # known category as unseen) but not worth printing
        pairs = ",".join(f"{old}->{new}" for old, new in self.mapping if old != new)
        return f"recode({self.target + 1},[{pairs}])"


@dataclass(frozen=True)
class Linear:
    target: int
    slope: float
    intercept: float

    def render(self) -> str:
        return f"linear({self.target + 1},{_fmt(self.slope)},{_fmt(self.intercept)})"


@dataclass(frozen=True)
class Delete:
    source: int

    def render(self) -> str:
        return f"delete({self.source + 1})"


@dataclass(frozen=True)
class Insert:
    target: int

    def render(self) -> str:
        return f"insert({self.target + 1})"


@dataclass(frozen=True)
class Permute:
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        sources = [i for i, _ in self.pairs]
        targets = [j for _, j in self.pairs]
        if len(set(sources)) != len(sources) or len(set(targets)) != len(targets):
            raise ValueError("permutation pairs must be injective in both coordinates")

    def render(self) -> str:
        body = ",".join(f"({i + 1},{j + 1})" for i, j in self.pairs)
        return f"permute({body})"


Patch = Recode | Linear | Delete | Insert | Permute


def _fmt(x: float) -> str:
    return f"{x:.12g}"


@dataclass(frozen=True)
class PatchSet:
    """Ordered patch list; application order is delete, permute,
    recode/linear, insert.  Exactly one permute patch per set."""

    patches: tuple[Patch, ...]

    def __post_init__(self) -> None:
        if sum(1 for p in self.patches if isinstance(p, Permute)) != 1:
            raise ValueError("a patch set carries exactly one permute patch")

    @property
    def permutation(self) -> tuple[tuple[int, int], ...]:
        for p in self.patches:
            if isinstance(p, Permute):
                return p.pairs
        raise AssertionError("unreachable")

    @property
    def deletes(self) -> tuple[int, ...]:
        return tuple(p.source for p in self.patches if isinstance(p, Delete))

    @property
    def inserts(self) -> tuple[int, ...]:
        return tuple(p.target for p in self.patches if isinstance(p, Insert))

    @property
    def transforms(self) -> tuple[Recode | Linear, ...]:
        return tuple(p for p in self.patches if isinstance(p, (Recode, Linear)))

    def render(self) -> str:
        return "\n".join(p.render() for p in self.patches)


def make_patch_set(
    pairs: Iterable[tuple[int, int]],
    deletes: Iterable[int] = (),
    inserts: Iterable[int] = (),
    transforms: Iterable[Recode | Linear] = (),
) -> PatchSet:
    patches: list[Patch] = [Delete(i) for i in sorted(deletes)]
    patches.append(Permute(tuple(sorted(pairs))))
    patches.extend(sorted(transforms, key=lambda t: t.target))
    patches.extend(Insert(j) for j in sorted(inserts))
    return PatchSet(tuple(patches))


# -- constraints --------------------------------------------------------------


def _escape_key(text: str) -> str:
    return escape_arg(text).replace(",", "%2C")


def _unescape_key(text: str) -> str:
    return unescape_arg(text.replace("%2C", ","))


@dataclass(frozen=True)
class NoTransform:
    """Blocks recode/linear on a post-permute column position.  The key
    is kept textual (1-based position or reference column name) and
    resolved against the bound tables."""

    column: str

    def render(self) -> str:
        return f"notransform({_escape_key(self.column)})"


@dataclass(frozen=True)
class NoMatch:
    left: str
    right: str

    def render(self) -> str:
        return f"nomatch({_escape_key(self.left)},{_escape_key(self.right)})"


@dataclass(frozen=True)
class Match:
    left: str
    right: str

    def render(self) -> str:
        return f"match({_escape_key(self.left)},{_escape_key(self.right)})"


DatadiffConstraint = NoTransform | NoMatch | Match

_CONSTRAINT_RE = re.compile(r"^(notransform|nomatch|match)\((.*)\)$")


def parse_constraint(text: str) -> DatadiffConstraint:
    match = _CONSTRAINT_RE.match(text.strip())
    if not match:
        raise ConstraintParseError(f"bad datadiff constraint {text!r}")
    kind, body = match.groups()
    args = [_unescape_key(a) for a in body.split(",")]
    if kind == "notransform":
        if len(args) != 1 or not args[0]:
            raise ConstraintParseError(f"notransform takes one column key: {text!r}")
        return NoTransform(args[0])
    if len(args) != 2 or not all(args):
        raise ConstraintParseError(f"{kind} takes two column keys: {text!r}")
    return NoMatch(args[0], args[1]) if kind == "nomatch" else Match(args[0], args[1])


@dataclass(frozen=True)
class ResolvedConstraints:
    notransform: frozenset[int]
    nomatch: frozenset[tuple[int, int]]
    match: frozenset[tuple[int, int]]


def _resolve_key(key: str, table: Table, side: str) -> int:
    if re.fullmatch(r"\d+", key):
        pos = int(key) - 1
        if not 0 <= pos < table.n_columns:
            raise ConflictingConstraintsError(
                f"{side} column index {key} out of range (1..{table.n_columns})"
            )
        return pos
    try:
        return table.column_index(key)
    except KeyError:
        raise ConflictingConstraintsError(f"unknown {side} column {key!r}") from None


def _resolve_pair(left: str, right: str, ti: Table, tr: Table) -> tuple[int, int]:
    # Canonical order is (input, reference); the transcript-style
    # reversed order is tolerated when only the swap resolves.
    try:
        return _resolve_key(left, ti, "input"), _resolve_key(right, tr, "reference")
    except ConflictingConstraintsError:
        return _resolve_key(right, ti, "input"), _resolve_key(left, tr, "reference")


def resolve_constraints(
    interactions: InteractionSet, ti: Table, tr: Table
) -> ResolvedConstraints:
    notransform: set[int] = set()
    nomatch: set[tuple[int, int]] = set()
    match: set[tuple[int, int]] = set()
    for constraint in interactions:
        if isinstance(constraint, NoTransform):
            notransform.add(_resolve_key(constraint.column, tr, "reference"))
        elif isinstance(constraint, NoMatch):
            nomatch.add(_resolve_pair(constraint.left, constraint.right, ti, tr))
        elif isinstance(constraint, Match):
            match.add(_resolve_pair(constraint.left, constraint.right, ti, tr))
        else:
            raise ConstraintParseError(f"not a datadiff constraint: {constraint!r}")
    conflicts = match & nomatch
    if conflicts:
        raise ConflictingConstraintsError(
            f"pair(s) both matched and unmatched: {sorted(conflicts)}"
        )
    lefts = [i for i, _ in match]
    rights = [j for _, j in match]
    if len(set(lefts)) != len(lefts) or len(set(rights)) != len(rights):
        raise ConflictingConstraintsError("match constraints must be mutually injective")
    return ResolvedConstraints(frozenset(notransform), frozenset(nomatch), frozenset(match))


# -- distribution distances ----------------------------------------------------


def ks_statistic(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov statistic: the supremum over the
    pooled support of |F_a - F_b|.  Missing values are dropped first."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a = np.sort(a[~np.isnan(a)])
    b = np.sort(b[~np.isnan(b)])
    if a.size == 0 or b.size == 0:
        raise ValueError("KS statistic of an empty sample")
    pooled = np.union1d(a, b)
    fa = np.searchsorted(a, pooled, side="right") / a.size
    fb = np.searchsorted(b, pooled, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def tv_statistic(p: Mapping[str, float], q: Mapping[str, float]) -> float:
    """Total variation distance between two frequency maps: half the L1
    distance over the union of categories."""
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def rank_recode_mapping(
    freq_input: Mapping[str, float], freq_reference: Mapping[str, float]
) -> dict[str, str]:
    """Align categories of both columns by descending frequency (ties
    broken lexicographically) and map rank to rank; surplus input
    categories map to themselves."""
    by_rank = lambda freq: [v for v, _ in sorted(freq.items(), key=lambda t: (-t[1], t[0]))]
    input_ranked = by_rank(freq_input)
    reference_ranked = by_rank(freq_reference)
    mapping = {}
    for rank, value in enumerate(input_ranked):
        mapping[value] = reference_ranked[rank] if rank < len(reference_ranked) else value
    return mapping


def moment_matching_linear(values_input, values_reference) -> tuple[float, float] | None:
    """Closed-form linear fit a = sigma_r / sigma_i, b = mu_r - a * mu_i;
    a degenerate input column (sigma_i = 0) disables the transform."""
    xi = np.asarray(values_input, dtype=float)
    xr = np.asarray(values_reference, dtype=float)
    sigma_i = float(np.std(xi))
    if sigma_i == 0.0:
        return None
    a = float(np.std(xr)) / sigma_i
    b = float(np.mean(xr)) - a * float(np.mean(xi))
    return a, b


# -- pairwise patch inference ----------------------------------------------------


@dataclass(frozen=True)
class DatadiffConfig:
    lambda_linear: float = 0.1
    lambda_recode: float = 0.1
    lambda_insert: float = 0.6
    lambda_delete: float = 0.6
    max_choices: int = 25
    sample_rows: int | None = None  # optional cap for cost-matrix construction
    sample_seed: int = 0


def infer_pairwise_patch(
    col_input: Column,
    col_reference: Column,
    target: int,
    config: DatadiffConfig = DatadiffConfig(),
    allow_transform: bool = True,
) -> tuple[Recode | Linear | None, float, float]:
    """Best patch (or none) for matching one input column to one
    reference column, with its cost and the raw no-transform cost.

    Numeric pairs compare by KS, optionally after the moment-matched
    linear transform (plus its penalty); categorical pairs compare by
    TV, optionally after the frequency-rank recode.  A numeric column
    never matches a symbolic one.
    """
    numeric_i = col_input.kind == NUMERIC
    numeric_r = col_reference.kind == NUMERIC
    if numeric_i != numeric_r:
        return None, float("inf"), float("inf")

    if numeric_i:
        xi = col_input.numeric_values()
        xr = col_reference.numeric_values()
        if xi.size == 0 or xr.size == 0:
            return None, float("inf"), float("inf")
        raw = ks_statistic(xi, xr)
        if allow_transform:
            fit = moment_matching_linear(xi, xr)
            if fit is not None:
                a, b = fit
                transformed = ks_statistic(a * xi + b, xr) + config.lambda_linear
                if transformed < raw:
                    return Linear(target, a, b), transformed, raw
        return None, raw, raw

    freq_i = col_input.frequency_view or category_frequencies(col_input.cells)
    freq_r = col_reference.frequency_view or category_frequencies(col_reference.cells)
    if not freq_i or not freq_r:
        return None, float("inf"), float("inf")
    raw = tv_statistic(freq_i, freq_r)
    both_categorical = col_input.kind == CATEGORICAL and col_reference.kind == CATEGORICAL
    if allow_transform and both_categorical:
        mapping = rank_recode_mapping(freq_i, freq_r)
        recoded: dict[str, float] = {}
        for value, f in freq_i.items():
            key = mapping[value]
            recoded[key] = recoded.get(key, 0.0) + f
        transformed = tv_statistic(recoded, freq_r) + config.lambda_recode
        if transformed < raw and any(old != new for old, new in mapping.items()):
            return Recode(target, tuple(sorted(mapping.items()))), transformed, raw
    return None, raw, raw


@dataclass
class PairCosts:
    """Pairwise costs computed once per (input, reference) table pair
    and reused across interactions; constraints only override entries."""

    cost: np.ndarray  # with the best transform applied
    raw: np.ndarray  # transform suppressed
    patches: list[list[Recode | Linear | None]]
    n_input: int
    n_reference: int


def build_pair_costs(
    ti: Table, tr: Table, config: DatadiffConfig = DatadiffConfig()
) -> PairCosts:
    ti, tr = _maybe_sample(ti, config), _maybe_sample(tr, config)
    n_i, n_r = ti.n_columns, tr.n_columns
    cost = np.zeros((n_i, n_r))
    raw = np.zeros((n_i, n_r))
    patches: list[list[Recode | Linear | None]] = [[None] * n_r for _ in range(n_i)]
    for i in range(n_i):
        for j in range(n_r):
            patch, c, r = infer_pairwise_patch(ti.columns[i], tr.columns[j], j, config)
            cost[i, j] = c
            raw[i, j] = r
            patches[i][j] = patch
    return PairCosts(cost, raw, patches, n_i, n_r)


def _maybe_sample(table: Table, config: DatadiffConfig) -> Table:
    if config.sample_rows is None or table.n_rows <= config.sample_rows:
        return table
    rng = np.random.default_rng(config.sample_seed)
    keep = np.sort(rng.choice(table.n_rows, size=config.sample_rows, replace=False))
    rows = table.rows()
    return table_from_cells(table.header, [rows[k] for k in keep])


def build_cost_matrix(
    pair_costs: PairCosts,
    resolved: ResolvedConstraints,
    config: DatadiffConfig = DatadiffConfig(),
) -> tuple[np.ndarray, list[list[Recode | Linear | None]]]:
    """Square (n_i + n_r) matrix: real-to-real entries carry the pair
    cost after constraint overrides, each input column gets a dedicated
    delete slot, each reference column a dedicated insert slot, and the
    padding block costs nothing."""
    n_i, n_r = pair_costs.n_input, pair_costs.n_reference
    size = n_i + n_r
    matrix = np.full((size, size), np.inf)
    patches: list[list[Recode | Linear | None]] = [[None] * n_r for _ in range(n_i)]

    for i in range(n_i):
        for j in range(n_r):
            if j in resolved.notransform:
                matrix[i, j] = pair_costs.raw[i, j]
            else:
                matrix[i, j] = pair_costs.cost[i, j]
                patches[i][j] = pair_costs.patches[i][j]
            if (i, j) in resolved.nomatch:
                matrix[i, j] = np.inf
                patches[i][j] = None

    for i in range(n_i):
        matrix[i, n_r + i] = config.lambda_delete
    for j in range(n_r):
        matrix[n_i + j, j] = config.lambda_insert
    matrix[n_i:, n_r:] = 0.0

    # A pinned pair costs zero AND loses every alternative: zeroing the
    # entry alone only nudges the optimizer, which may still route
    # around the pin when that is globally cheaper.
    for i, j in resolved.match:
        matrix[i, :] = np.inf
        matrix[:, j] = np.inf
        matrix[i, j] = 0.0
    return matrix, patches


def assignment(matrix: np.ndarray) -> tuple[list[tuple[int, int]], float]:
    """Minimum-cost perfect matching on a padded square cost matrix.

    Returns the assigned (row, column) pairs and the optimal total
    cost; an all-infinite row or column (constraints that rule out
    every option) surfaces as a conflicting-constraints error.
    """
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("assignment needs a square matrix")
    try:
        rows, cols = linear_sum_assignment(matrix)
    except ValueError as exc:  # scipy: "cost matrix is infeasible"
        raise ConflictingConstraintsError(
            "constraints admit no feasible column matching"
        ) from exc
    total = float(matrix[rows, cols].sum())
    if not np.isfinite(total):
        raise ConflictingConstraintsError("constraints admit no feasible column matching")
    return list(zip(rows.tolist(), cols.tolist())), total


@dataclass
class _Solution:
    patch_set: PatchSet
    pairs: list[tuple[int, int]]
    pair_cost: dict[tuple[int, int], float]
    total_cost: float


def _solve(
    ti: Table,
    tr: Table,
    interactions: InteractionSet,
    config: DatadiffConfig,
    pair_costs: PairCosts,
) -> _Solution:
    resolved = resolve_constraints(interactions, ti, tr)
    matrix, patches = build_cost_matrix(pair_costs, resolved, config)
    assigned, total = assignment(matrix)
    n_i, n_r = pair_costs.n_input, pair_costs.n_reference

    pairs: list[tuple[int, int]] = []
    deletes: list[int] = []
    transforms: list[Recode | Linear] = []
    for row, col in assigned:
        if row < n_i and col < n_r:
            pairs.append((row, col))
            if patches[row][col] is not None:
                transforms.append(patches[row][col])
        elif row < n_i:
            deletes.append(row)
    matched_refs = {j for _, j in pairs}
    inserts = [j for j in range(n_r) if j not in matched_refs]

    patch_set = make_patch_set(pairs, deletes, inserts, transforms)
    pair_cost = {(i, j): float(matrix[i, j]) for i, j in pairs}
    return _Solution(patch_set, sorted(pairs), pair_cost, total)


def datadiff_best(
    ti: Table,
    tr: Table,
    interactions: InteractionSet = InteractionSet(),
    config: DatadiffConfig = DatadiffConfig(),
    pair_costs: PairCosts | None = None,
) -> PatchSet:
    """The patch list maximizing the objective (negated total matching
    cost) over the expressions allowed by the constraints."""
    if pair_costs is None:
        pair_costs = build_pair_costs(ti, tr, config)
    return _solve(ti, tr, interactions, config, pair_costs).patch_set


def datadiff_valid(
    patch_set: PatchSet, interactions: InteractionSet, ti: Table, tr: Table
) -> bool:
    """Conjunction over patches: the permutation contains every pinned
    pair and no forbidden pair; no transform targets a blocked column."""
    resolved = resolve_constraints(interactions, ti, tr)
    pairs = set(patch_set.permutation)
    if any(pair not in pairs for pair in resolved.match):
        return False
    if any(pair in pairs for pair in resolved.nomatch):
        return False
    if any(t.target in resolved.notransform for t in patch_set.transforms):
        return False
    return True


def datadiff_choices(
    ti: Table,
    tr: Table,
    interactions: InteractionSet = InteractionSet(),
    config: DatadiffConfig = DatadiffConfig(),
    pair_costs: PairCosts | None = None,
) -> list[Choice]:
    """Refinements derived from the current best patch set: block each
    applied transform (in position order), unpin matched pairs (worst
    cost first), pin unmatched pairs (best cost first)."""
    if pair_costs is None:
        pair_costs = build_pair_costs(ti, tr, config)
    resolved = resolve_constraints(interactions, ti, tr)
    solution = _solve(ti, tr, interactions, config, pair_costs)

    choices: list[Choice] = []
    for transform in solution.patch_set.transforms:
        if transform.target in resolved.notransform:
            continue
        constraint = NoTransform(str(transform.target + 1))
        choices.append(
            Choice(
                label=f"Don't transform column {transform.target + 1}",
                interactions=interactions.add(constraint),
            )
        )

    matched = sorted(
        solution.pairs, key=lambda p: (-solution.pair_cost[p], p)
    )
    for i, j in matched:
        if (i, j) in resolved.match or (i, j) in resolved.nomatch:
            continue
        constraint = NoMatch(str(i + 1), str(j + 1))
        choices.append(
            Choice(
                label=f"Don't match {ti.columns[i].name} and {tr.columns[j].name}",
                interactions=interactions.add(constraint),
            )
        )

    pinned_left = {i for i, _ in resolved.match}
    pinned_right = {j for _, j in resolved.match}
    in_pairs = set(solution.pairs)
    unmatched = [
        (float(pair_costs.cost[i, j]), i, j)
        for i in range(pair_costs.n_input)
        for j in range(pair_costs.n_reference)
        if (i, j) not in in_pairs
    ]
    for cost, i, j in sorted(unmatched, key=lambda t: (t[0], t[1], t[2])):
        if len(choices) >= config.max_choices:
            break
        if (i, j) in resolved.nomatch or i in pinned_left or j in pinned_right:
            continue
        constraint = Match(str(i + 1), str(j + 1))
        choices.append(
            Choice(
                label=f"Match {ti.columns[i].name} and {tr.columns[j].name}",
                interactions=interactions.add(constraint),
            )
        )
    return choices[: config.max_choices]


# -- applying patches ------------------------------------------------------------


def apply_patches(
    patch_set: PatchSet, ti: Table, reference_names: Sequence[str] | None = None
) -> tuple[Table, list[str]]:
    """Execute a patch list: drop deleted columns, order the rest by
    their reference position, apply transforms, and materialize inserts
    as all-missing columns.  Output columns take the reference schema's
    names when provided.  Recoding a value absent from the mapping
    leaves it unchanged and records a warning."""
    warnings: list[str] = []
    transforms = {t.target: t for t in patch_set.transforms}
    placed: dict[int, tuple[str, list[str]]] = {}

    for i, j in patch_set.permutation:
        column = ti.columns[i]
        name = reference_names[j] if reference_names is not None else column.name
        cells = list(column.cells)
        transform = transforms.get(j)
        if isinstance(transform, Recode):
            mapping = dict(transform.mapping)
            seen_misses: set[str] = set()
            for k, cell in enumerate(cells):
                if is_missing(cell):
                    continue
                if cell in mapping:
                    cells[k] = mapping[cell]
                elif cell not in seen_misses:
                    seen_misses.add(cell)
                    warnings.append(
                        f"recode({j + 1}): value {cell!r} not in mapping, left unchanged"
                    )
        elif isinstance(transform, Linear):
            for k, cell in enumerate(cells):
                if is_missing(cell):
                    continue
                value = ti.columns[i].numeric_view[k] if ti.columns[i].numeric_view is not None else None
                if value is None or np.isnan(value):
                    continue
                cells[k] = _fmt(transform.slope * value + transform.intercept)
        placed[j] = (name, cells)

    for j in patch_set.inserts:
        name = reference_names[j] if reference_names is not None else f"inserted_{j + 1}"
        placed[j] = (name, [""] * ti.n_rows)

    header = []
    columns = []
    for j in sorted(placed):
        name, cells = placed[j]
        header.append(name)
        columns.append(cells)
    rows = [[col[k] for col in columns] for k in range(ti.n_rows)]
    return table_from_cells(header, rows), warnings


# -- assistant ----------------------------------------------------------------------


class _BoundPair:
    def __init__(self, ti: Table, tr: Table, config: DatadiffConfig) -> None:
        self.input = ti
        self.reference = tr
        self._config = config
        self._pair_costs: PairCosts | None = None

    @property
    def pair_costs(self) -> PairCosts:
        if self._pair_costs is None:
            self._pair_costs = build_pair_costs(self.input, self.reference, self._config)
        return self._pair_costs


class DatadiffAssistant(Assistant):
    descriptor = AssistantDescriptor(
        id="datadiff",
        display_name="Table reconciliation (datadiff)",
        input_slots=("input", "reference"),
        constraint_grammar_id="datadiff",
    )

    def __init__(self, **options) -> None:
        self.config = DatadiffConfig(**options)

    def bind(self, bindings: Mapping[str, str]) -> _BoundPair:
        return _BoundPair(
            read_csv(bindings["input"]), read_csv(bindings["reference"]), self.config
        )

    def best(self, data: _BoundPair, interactions: InteractionSet) -> PatchSet:
        return datadiff_best(
            data.input, data.reference, interactions, self.config, data.pair_costs
        )

    def apply(self, expression: PatchSet, data: _BoundPair) -> Output:
        table, warnings = apply_patches(expression, data.input, data.reference.header)
        return Output(table=table, warnings=tuple(warnings))

    def choices(self, data: _BoundPair, interactions: InteractionSet) -> list[Choice]:
        return datadiff_choices(
            data.input, data.reference, interactions, self.config, data.pair_costs
        )

    def valid(self, expression: PatchSet, interactions: InteractionSet, data: _BoundPair) -> bool:
        return datadiff_valid(expression, interactions, data.input, data.reference)

    def script(self, expression: PatchSet) -> str:
        return expression.render()

    def parse_constraint(self, text: str) -> DatadiffConstraint:
        return parse_constraint(text)

    def score(self, data: _BoundPair, expression: PatchSet, interactions: InteractionSet) -> float:
        solution = _solve(
            data.input, data.reference, interactions, self.config, data.pair_costs
        )
        return -solution.total_cost
