"""Interactive data-wrangling assistants.

Each assistant recommends a cleaning script for the current
constraints, previews the result and offers ranked one-constraint
refinements; the analyst selects until accepting.  See README.md for
the tour.
"""

from .core import (
    Assistant,
    AssistantDescriptor,
    BindingError,
    Choice,
    ConflictingConstraintsError,
    ConstraintParseError,
    ConstraintsExhaustedError,
    FinalResult,
    InteractionSet,
    NoRecommendationError,
    Output,
    Recommendation,
    Registry,
    Session,
    SessionAcceptedError,
    StaleChoiceError,
    UnknownAssistantError,
    WrangleError,
    replay,
    session_init,
)
from .registry import DEFAULT_REGISTRY, default_registry
from .table import Column, Preview, Table, read_csv, write_csv

__all__ = [
    "Assistant",
    "AssistantDescriptor",
    "BindingError",
    "Choice",
    "Column",
    "ConflictingConstraintsError",
    "ConstraintParseError",
    "ConstraintsExhaustedError",
    "DEFAULT_REGISTRY",
    "FinalResult",
    "InteractionSet",
    "NoRecommendationError",
    "Output",
    "Preview",
    "Recommendation",
    "Registry",
    "Session",
    "SessionAcceptedError",
    "StaleChoiceError",
    "Table",
    "UnknownAssistantError",
    "WrangleError",
    "default_registry",
    "read_csv",
    "replay",
    "session_init",
    "write_csv",
]

__version__ = "0.1.0"
