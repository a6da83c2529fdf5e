"""Semi-supervised ontology population with word embeddings."""

from ._ontopop import *  # noqa: F401,F403
from ._ontopop import (  # noqa: F401
    ConfigError,
    DegenerateInputError,
    IoError,
    OntopopError,
    ParseError,
    ValidationError,
)

__version__ = "0.1.0"
