"""Default registry wiring every shipped assistant to its id."""

from __future__ import annotations

from .core import Registry
from .datadiff import DatadiffAssistant
from .dialect import DialectAssistant
from .outlier import OutlierRowsAssistant, OutlierValuesAssistant
from .semantic import SemanticAssistant
from .typeinfer import TypeInferAssistant

ASSISTANT_CLASSES = (
    DatadiffAssistant,
    DialectAssistant,
    TypeInferAssistant,
    SemanticAssistant,
    OutlierValuesAssistant,
    OutlierRowsAssistant,
)


def default_registry() -> Registry:
    registry = Registry()
    for cls in ASSISTANT_CLASSES:
        registry.register(cls.descriptor, cls)
    return registry


DEFAULT_REGISTRY = default_registry()
