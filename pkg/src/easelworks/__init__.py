"""Orchestration engine for canvas-driven generative media creation.

Stores imported and generated media as first-class assets, compiles easel
specifications into backend-executable workflow graphs, tracks provenance
of every canvas item, and serves organization/sensemaking queries to a
companion canvas UI.
"""

from .blobstore import BlobStore
from .compiler import Compiler, map_details, map_preserve, map_structure_end
from .config import EngineConfig
from .document import Document
from .easelspec import EaselSpec, Reference, Structure, validate
from .engine import Engine
from .gateway import Gateway, MockDriver
from .workflow import TemplateSet, WorkflowGraph, parse_graph

__version__ = "0.1.0"

__all__ = [
    "BlobStore",
    "Compiler",
    "Document",
    "EaselSpec",
    "Engine",
    "EngineConfig",
    "Gateway",
    "MockDriver",
    "Reference",
    "Structure",
    "TemplateSet",
    "WorkflowGraph",
    "map_details",
    "map_preserve",
    "map_structure_end",
    "parse_graph",
    "validate",
    "__version__",
]
