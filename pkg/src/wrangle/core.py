"""Session state machine and the contract shared by every assistant.

An assistant bundles an empty interaction set, a transform ``apply``, a
recommender ``best`` and a choice generator ``choices``.  A ``Session``
drives the recommend / preview / refine / accept loop over one of them:
the analyst either accepts the current recommendation or picks one of
the offered one-constraint refinements, which re-runs the recommender.
"""

from __future__ import annotations

import uuid
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Iterator, Mapping, Sequence

if TYPE_CHECKING:  # table imports dialect, which imports this module
    from .table import Preview, Table


class WrangleError(Exception):
    """Base class for errors raised by assistants and sessions."""


class UnknownAssistantError(WrangleError):
    pass


class BindingError(WrangleError):
    """A required input slot is missing or unreadable."""


class ConstraintParseError(WrangleError):
    pass


class ConflictingConstraintsError(WrangleError):
    """The accumulated constraints admit no expression at all."""


class ConstraintsExhaustedError(ConflictingConstraintsError):
    """Every candidate in a finite expression space has been excluded."""


class NoRecommendationError(WrangleError):
    pass


class StaleChoiceError(WrangleError):
    """A choice index refers to a list that is no longer current."""


class SessionAcceptedError(WrangleError):
    pass


# Arguments inside textual constraints may not contain "/" or newlines
# (the wire protocol joins constraints with "/" and frames by line).

def escape_arg(text: str) -> str:
    return text.replace("%", "%25").replace("/", "%2F").replace("\n", "%0A")


def unescape_arg(text: str) -> str:
    return text.replace("%0A", "\n").replace("%2F", "/").replace("%25", "%")


@dataclass(frozen=True)
class InteractionSet:
    """Ordered, duplicate-free set of analyst constraints (one grammar
    per assistant).  The empty set is the distinguished starting point."""

    constraints: tuple[Any, ...] = ()

    def add(self, constraint: Any) -> "InteractionSet":
        if constraint in self.constraints:
            raise ConflictingConstraintsError(f"duplicate constraint {constraint!r}")
        return InteractionSet(self.constraints + (constraint,))

    def __contains__(self, constraint: Any) -> bool:
        return constraint in self.constraints

    def __iter__(self) -> Iterator[Any]:
        return iter(self.constraints)

    def __len__(self) -> int:
        return len(self.constraints)


EMPTY_INTERACTIONS = InteractionSet()


@dataclass(frozen=True)
class AssistantDescriptor:
    id: str
    display_name: str
    input_slots: tuple[str, ...]
    constraint_grammar_id: str

    def __post_init__(self) -> None:
        if not self.input_slots:
            raise ValueError("an assistant needs at least one input slot")


@dataclass(frozen=True)
class Choice:
    """One offered refinement: a label plus the full replacement
    interaction set (current constraints extended by exactly one)."""

    label: str
    interactions: InteractionSet


@dataclass(frozen=True)
class ColumnAnnotation:
    """Per-column badge data attached to previews."""

    badge: str | None = None
    missing: int = 0
    anomalies: int = 0


@dataclass
class Output:
    """Result of applying an expression: the transformed table plus
    optional per-column annotations and free-form warnings."""

    table: Table
    annotations: tuple[ColumnAnnotation | None, ...] | None = None
    warnings: tuple[str, ...] = ()

    def preview(self, n: int) -> "Preview":
        from .table import preview as table_preview

        badges = None
        if self.annotations is not None:
            badges = tuple(
                None
                if a is None
                else ", ".join(
                    part
                    for part in (
                        a.badge,
                        f"missing: {a.missing}" if a.missing else None,
                        f"anomalies: {a.anomalies}" if a.anomalies else None,
                    )
                    if part
                )
                for a in self.annotations
            )
        return table_preview(self.table, n, annotations=badges)


@dataclass(frozen=True)
class Recommendation:
    expression: Any
    script: str
    preview: Preview
    choices: tuple[Choice, ...]
    score: float | None = None
    output: Output = None  # type: ignore[assignment]


@dataclass(frozen=True)
class FinalResult:
    expression: Any
    script_text: str
    output: Output


class Assistant(ABC):
    """The tuple of operations every concrete assistant implements.

    Instances are stateless apart from configuration; bound input data
    is created by :meth:`bind` and threaded through the operations so
    sessions stay independent and computations stay pure.
    """

    descriptor: AssistantDescriptor

    def initial_interactions(self) -> InteractionSet:
        return EMPTY_INTERACTIONS

    @abstractmethod
    def bind(self, bindings: Mapping[str, str]) -> Any:
        """Load and validate the datasets named by ``bindings``."""

    @abstractmethod
    def best(self, data: Any, interactions: InteractionSet) -> Any:
        """Recommend the best expression under the given constraints."""

    @abstractmethod
    def apply(self, expression: Any, data: Any) -> Output:
        """Execute the expression against the bound input data."""

    @abstractmethod
    def choices(self, data: Any, interactions: InteractionSet) -> list[Choice]:
        """Offer one-constraint refinements of the interaction set."""

    @abstractmethod
    def valid(self, expression: Any, interactions: InteractionSet, data: Any) -> bool:
        """Check that an expression satisfies every constraint."""

    @abstractmethod
    def script(self, expression: Any) -> str:
        """Serialize the expression to its textual script form."""

    @abstractmethod
    def parse_constraint(self, text: str) -> Any:
        """Parse one textual constraint of this assistant's grammar."""

    def render_constraint(self, constraint: Any) -> str:
        return constraint.render()

    def score(self, data: Any, expression: Any, interactions: InteractionSet) -> float | None:
        """Objective value of the expression, when the assistant has one."""
        return None


class Registry:
    """Maps assistant ids to descriptors and configurable factories."""

    def __init__(self) -> None:
        self._entries: dict[str, tuple[AssistantDescriptor, Any]] = {}

    def register(self, descriptor: AssistantDescriptor, factory: Any) -> None:
        if descriptor.id in self._entries:
            raise ValueError(f"assistant id {descriptor.id!r} already registered")
        self._entries[descriptor.id] = (descriptor, factory)

    def descriptors(self) -> list[AssistantDescriptor]:
        return [entry[0] for entry in self._entries.values()]

    def descriptor(self, assistant_id: str) -> AssistantDescriptor:
        try:
            return self._entries[assistant_id][0]
        except KeyError:
            raise UnknownAssistantError(f"unknown assistant {assistant_id!r}") from None

    def create(self, assistant_id: str, **config: Any) -> Assistant:
        try:
            factory = self._entries[assistant_id][1]
        except KeyError:
            raise UnknownAssistantError(f"unknown assistant {assistant_id!r}") from None
        return factory(**config)


class Session:
    """One analyst's live loop over a single assistant.

    Operations on a session are serialized by the caller (or by the
    service layer's per-session lock); the underlying assistant
    computations are pure given the bound inputs and constraints.
    """

    def __init__(
        self,
        assistant: Assistant,
        bindings: Mapping[str, str],
        *,
        session_id: str | None = None,
        preview_rows: int = 10,
    ) -> None:
        missing = [s for s in assistant.descriptor.input_slots if s not in bindings]
        if missing:
            raise BindingError(f"missing input slot(s): {', '.join(missing)}")
        self.session_id = session_id or uuid.uuid4().hex[:12]
        self.assistant = assistant
        self.bindings = dict(bindings)
        self.data = assistant.bind(self.bindings)
        self.interactions = assistant.initial_interactions()
        self.history: list[str] = []
        self.status = "active"
        self.preview_rows = preview_rows
        self.result: FinalResult | None = None
        self._recommendation: Recommendation | None = None

    # -- loop operations ------------------------------------------------

    def step(self) -> Recommendation:
        """Compute (or return the cached) recommendation for the current
        constraints: best expression, output preview, sorted choices."""
        self._require_active()
        if self._recommendation is not None:
            return self._recommendation
        expression = self.assistant.best(self.data, self.interactions)
        output = self.assistant.apply(expression, self.data)
        choices = tuple(self.assistant.choices(self.data, self.interactions))
        self._check_choice_invariants(choices)
        rec = Recommendation(
            expression=expression,
            script=self.assistant.script(expression),
            preview=output.preview(self.preview_rows),
            choices=choices,
            score=self.assistant.score(self.data, expression, self.interactions),
            output=output,
        )
        self._recommendation = rec
        return rec

    def select(self, choice_index: int) -> "Session":
        """Adopt one offered refinement; invalidates the cached
        recommendation so stale indices are detectable."""
        self._require_active()
        if self._recommendation is None:
            raise NoRecommendationError(
                "no current recommendation; compute step() before selecting"
            )
        choices = self._recommendation.choices
        if not 0 <= choice_index < len(choices):
            raise StaleChoiceError(
                f"choice index {choice_index} out of range (have {len(choices)})"
            )
        chosen = choices[choice_index]
        self.interactions = chosen.interactions
        self.history.append(chosen.label)
        self._recommendation = None
        return self

    def accept(self) -> FinalResult:
        self._require_active()
        if self._recommendation is None:
            raise NoRecommendationError("nothing to accept; compute step() first")
        rec = self._recommendation
        self.result = FinalResult(
            expression=rec.expression,
            script_text=rec.script,
            output=rec.output,
        )
        self.status = "accepted"
        return self.result

    # -- helpers ---------------------------------------------------------

    def _require_active(self) -> None:
        if self.status != "active":
            raise SessionAcceptedError("session already accepted; sessions are immutable")

    def _check_choice_invariants(self, choices: Sequence[Choice]) -> None:
        seen_labels: set[str] = set()
        current = set(self.interactions.constraints)
        for choice in choices:
            if choice.label in seen_labels:
                raise WrangleError(f"duplicate choice label {choice.label!r}")
            seen_labels.add(choice.label)
            extended = set(choice.interactions.constraints)
            if not (current < extended and len(extended) == len(current) + 1):
                raise WrangleError(
                    f"choice {choice.label!r} must extend the constraints by exactly one"
                )


def session_init(
    assistant_id: str,
    bindings: Mapping[str, str],
    *,
    registry: Registry | None = None,
    constraints: Sequence[str] = (),
    preview_rows: int = 10,
    **config: Any,
) -> Session:
    """Create a session for a registered assistant with all declared
    input slots bound.  ``constraints`` seeds the interaction set with
    pre-parsed textual constraints (used by the CLI and replay)."""
    if registry is None:
        from .registry import DEFAULT_REGISTRY as registry  # circular at import time
    assistant = registry.create(assistant_id, **config)
    session = Session(assistant, bindings, preview_rows=preview_rows)
    for text in constraints:
        session.interactions = session.interactions.add(assistant.parse_constraint(text))
    return session


def replay(session: Session, labels: Sequence[str]) -> Session:
    """Re-run a recorded sequence of choice labels against a fresh
    session; with identical inputs this reproduces the final expression."""
    for label in labels:
        rec = session.step()
        for index, choice in enumerate(rec.choices):
            if choice.label == label:
                session.select(index)
                break
        else:
            raise WrangleError(f"recorded choice {label!r} is not offered")
    session.step()
    return session
