"""Workflow graph IR and its canonical wire form.

A graph is a mapping of string node ids to (class_type, inputs) plus the
list of output node ids. Input values are either literals (str, int, float,
bool) or edges, encoded as the two-element array [node_id, output_index] --
the same convention the backend's prompt-submission JSON uses, so
`to_prompt` is just the node mapping.

Serialization is canonical (sorted keys, shortest-repr floats, no
whitespace); byte equality of `canonical()` is the graph identity used by
golden files, provenance round-trips and the mock backend.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

from .canonical import canonical_bytes, sha256_hex
from .errors import InvalidGraph, UnknownTemplate


def is_edge(value: Any) -> bool:
    return (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and isinstance(value[0], str)
        and isinstance(value[1], int)
        and not isinstance(value[1], bool)
    )


@dataclass
class WorkflowGraph:
    nodes: dict[str, dict]  # id -> {"class_type": str, "inputs": {name: literal|edge}}
    outputs: list[str] = field(default_factory=list)

    def to_obj(self) -> dict:
        return {"nodes": self.nodes, "outputs": list(self.outputs)}

    @classmethod
    def from_obj(cls, obj: dict) -> "WorkflowGraph":
        return cls(nodes=obj["nodes"], outputs=list(obj.get("outputs") or []))

    def canonical(self) -> bytes:
        return canonical_bytes(self.to_obj())

    def digest(self) -> str:
        return sha256_hex(self.canonical())

    def to_prompt(self) -> dict:
        """The backend prompt-API node mapping."""
        return {nid: {"class_type": n["class_type"], "inputs": dict(n["inputs"])} for nid, n in self.nodes.items()}

    def validate(self) -> None:
        """Schema check: edges resolve, outputs exist, at least one output."""
        if not self.nodes:
            raise InvalidGraph("graph has no nodes")
        if not self.outputs:
            raise InvalidGraph("graph has no output nodes")
        for out in self.outputs:
            if out not in self.nodes:
                raise InvalidGraph(f"output node {out} missing")
        for nid, node in self.nodes.items():
            if not isinstance(node.get("class_type"), str) or not node["class_type"]:
                raise InvalidGraph(f"node {nid} has no class_type")
            for name, value in node.get("inputs", {}).items():
                if is_edge(value):
                    if value[0] not in self.nodes:
                        raise InvalidGraph(f"node {nid} input {name} references missing node {value[0]}")
                elif isinstance(value, (list, tuple, dict)):
                    raise InvalidGraph(f"node {nid} input {name} has non-scalar literal")

    def node_classes(self) -> dict[str, str]:
        return {nid: n["class_type"] for nid, n in self.nodes.items()}

    def find_nodes(self, class_type: str) -> list[str]:
        return sorted(nid for nid, n in self.nodes.items() if n["class_type"] == class_type)


def parse_graph(data: bytes | str | dict) -> WorkflowGraph:
    if isinstance(data, (bytes, str)):
        data = json.loads(data)
    graph = WorkflowGraph.from_obj(data)
    graph.validate()
    return graph


# ------------------------------------------------------------- templates

_PLACEHOLDER_KEY = "$"


def _is_placeholder(value: Any) -> bool:
    return isinstance(value, dict) and set(value.keys()) == {_PLACEHOLDER_KEY}


class TemplateSet:
    """Versioned workflow templates shipped as package data.

    Templates are full graphs whose parameterized inputs are `{"$": name}`
    markers; instantiation substitutes literals and never adds or removes
    nodes (optional slots flip switch integers instead).
    """

    def __init__(self, package: str = "easelworks.templates"):
        self._package = package
        self._cache: dict[str, dict] = {}

    def names(self) -> list[str]:
        files = resources.files(self._package)
        return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))

    def raw(self, name: str) -> dict:
        if name not in self._cache:
            try:
                text = resources.files(self._package).joinpath(f"{name}.json").read_text("utf-8")
            except (FileNotFoundError, ModuleNotFoundError):
                raise UnknownTemplate(f"no workflow template {name!r}") from None
            self._cache[name] = json.loads(text)
        return self._cache[name]

    def params_of(self, name: str) -> set[str]:
        found: set[str] = set()
        for node in self.raw(name)["nodes"].values():
            for value in node["inputs"].values():
                if _is_placeholder(value):
                    found.add(value[_PLACEHOLDER_KEY])
        return found

    def instantiate(self, name: str, params: dict[str, Any]) -> WorkflowGraph:
        raw = self.raw(name)
        nodes: dict[str, dict] = {}
        for nid, node in raw["nodes"].items():
            inputs = {}
            for key, value in node["inputs"].items():
                if _is_placeholder(value):
                    pname = value[_PLACEHOLDER_KEY]
                    if pname not in params:
                        raise UnknownTemplate(f"template {name} needs parameter {pname!r}")
                    inputs[key] = params[pname]
                else:
                    inputs[key] = value
            nodes[nid] = {"class_type": node["class_type"], "inputs": inputs}
        graph = WorkflowGraph(nodes=nodes, outputs=list(raw["outputs"]))
        graph.validate()
        return graph
