"""Queryable mental models of AI systems with a why/how explanation dialogue.

The package splits into the generic engine (core, document, search, dialogue,
service) and two adapters that turn concrete predictions into mental models
(`nn` for feed-forward networks, `prolog` for restricted ground Prolog).
"""

from .core import (
    AttributePattern,
    Entity,
    FREE,
    Kind,
    MODIFIED,
    MentalModel,
    MentalModelBuilder,
    Model,
    RelationInstance,
    RelationTemplate,
    UNSET,
)
from .dialogue import Session, ask, start_session
from .document import deserialize, serialize
from .search import (
    EXHAUSTED,
    EntityQuestion,
    PresentedSet,
    RelationQuestion,
    explain_entity,
    explain_relation,
    match_models,
)

__all__ = [
    "AttributePattern",
    "Entity",
    "EntityQuestion",
    "EXHAUSTED",
    "FREE",
    "Kind",
    "MentalModel",
    "MentalModelBuilder",
    "Model",
    "MODIFIED",
    "PresentedSet",
    "RelationInstance",
    "RelationQuestion",
    "RelationTemplate",
    "Session",
    "UNSET",
    "ask",
    "deserialize",
    "explain_entity",
    "explain_relation",
    "match_models",
    "serialize",
    "start_session",
]

__version__ = "0.1.0"
