"""JSON model specs: schema, loading and construction of model objects.

Five kinds are accepted::

    {"kind": "perm", "degree": 4, "generators": ["(1 2)", "(1 2 3 4)"], "base": 1,
     "S": ["(1 2)", "(1 3)", "(1 4)"], "normal": ["(1 2)(3 4)", "(1 3)(2 4)"]}
    {"kind": "uf", "degree": 3, "F": ["(1 2 3)"], "depth": 8, "axis": [1, 2, 3], "length": 1}
    {"kind": "oriented", "p": 2, "q": 1, "length": 1}
    {"kind": "lazy", "family": "tree", "d": 3}
    {"kind": "graph", "vertices": [...], "edges": [[a, b], ...]}

The ``graph`` kind is a bare finite graph, optionally with ``"group"``:
cycle-notation generators over the vertex order.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import jsonschema

from . import asymptotics
from .camodel import FinitePermModel, build_ca_construction1, build_ca_construction2
from .errors import SpecError, ValidationError
from .graph import Graph
from .perm import Perm, PermGroup
from .trees import DEFAULT_DEPTH, OrientedTreeModel, TreePortrait, Translation, UFModel, translation

MAX_DEGREE = 16
MAX_DEPTH = DEFAULT_DEPTH

_cycles = {"type": "array", "items": {"type": "string"}}
_label = {"type": ["integer", "string"]}

SPEC_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["kind"],
    "properties": {"kind": {"enum": ["perm", "uf", "oriented", "lazy", "graph"]}},
    "allOf": [
        {
            "if": {"properties": {"kind": {"const": "perm"}}},
            "then": {
                "required": ["degree", "generators"],
                "properties": {
                    "degree": {"type": "integer", "minimum": 1, "maximum": MAX_DEGREE},
                    "generators": _cycles,
                    "base": {"type": "integer", "minimum": 1},
                    "S": _cycles,
                    "K": _cycles,
                    "normal": _cycles,
                    "chain": {"type": "array", "items": _cycles},
                },
            },
        },
        {
            "if": {"properties": {"kind": {"const": "uf"}}},
            "then": {
                "required": ["degree"],
                "properties": {
                    "degree": {"type": "integer", "minimum": 1, "maximum": MAX_DEGREE},
                    "F": _cycles,
                    "full": {"type": "boolean"},
                    "depth": {"type": "integer", "minimum": 0, "maximum": MAX_DEPTH},
                    "axis": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                    "length": {"type": "integer", "minimum": 1},
                    "radius": {"type": "integer", "minimum": 0},
                    "portrait": {"type": "string"},
                },
            },
        },
        {
            "if": {"properties": {"kind": {"const": "oriented"}}},
            "then": {
                "required": ["p", "q"],
                "properties": {
                    "p": {"type": "integer", "minimum": 1},
                    "q": {"type": "integer", "minimum": 1},
                    "depth": {"type": "integer", "minimum": 0, "maximum": MAX_DEPTH},
                    "length": {"type": "integer", "minimum": 1},
                    "radius": {"type": "integer", "minimum": 0},
                    "portrait": {"type": "string"},
                },
            },
        },
        {
            "if": {"properties": {"kind": {"const": "lazy"}}},
            "then": {
                "required": ["family"],
                "properties": {
                    "family": {"enum": ["line", "grid", "tree", "free", "free_abelian",
                                        "free_product", "finite"]},
                },
            },
        },
        {
            "if": {"properties": {"kind": {"const": "graph"}}},
            "then": {
                "required": ["vertices", "edges"],
                "properties": {
                    "vertices": {"type": "array", "items": _label},
                    "edges": {"type": "array", "items": {"type": "array", "items": _label,
                                                         "minItems": 2, "maxItems": 2}},
                    "group": _cycles,
                    "base": _label,
                },
            },
        },
    ],
}


def load_spec(source) -> Dict[str, Any]:
    """Read a spec from a path, JSON text or dict and validate it against the schema."""
    if isinstance(source, dict):
        spec = source
    else:
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as exc:
            raise SpecError(f"cannot read {source}: {exc.strerror}") from None
        try:
            spec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"{source}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    try:
        jsonschema.validate(spec, SPEC_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "spec"
        raise SpecError(f"{where}: {exc.message}") from None
    if spec["kind"] == "oriented" and spec["p"] + spec["q"] > MAX_DEGREE:
        raise SpecError(f"p + q exceeds {MAX_DEGREE}")
    return spec


def _perms(texts, degree) -> List[Perm]:
    return [Perm.parse(t, degree) for t in texts]


def perm_model(spec) -> FinitePermModel:
    n = spec["degree"]
    G = PermGroup(n, _perms(spec["generators"], n))
    base = spec.get("base", 1) - 1
    if base >= n:
        raise SpecError(f"base {base + 1} outside 1..{n}")
    try:
        return FinitePermModel(G, base)
    except ValidationError as exc:
        raise SpecError(str(exc)) from None


def perm_generating_sets(spec) -> Tuple[Optional[List[Perm]], Optional[List[Perm]]]:
    n = spec["degree"]
    S = _perms(spec["S"], n) if "S" in spec else None
    K = _perms(spec["K"], n) if "K" in spec else None
    return S, K


def perm_graph(spec, model: Optional[FinitePermModel] = None) -> Graph:
    """Neighbours ``B S x0`` when ``S`` is given, else ``B K^{+-1} x0 - {x0}`` from ``K``."""
    model = model or perm_model(spec)
    S, K = perm_generating_sets(spec)
    if S is not None:
        return build_ca_construction2(model, S)
    if K is not None:
        return build_ca_construction1(model, K)
    raise SpecError("perm spec needs 'S' or 'K' to build a graph")


def normal_subgroup(spec, texts=None) -> PermGroup:
    n = spec["degree"]
    texts = spec.get("normal") if texts is None else texts
    if texts is None:
        raise SpecError("no normal subgroup given")
    return PermGroup(n, _perms(texts, n))


def tree_model(spec):
    depth = spec.get("depth", DEFAULT_DEPTH)
    if spec["kind"] == "uf":
        d = spec["degree"]
        if spec.get("full") or "F" not in spec:
            F = PermGroup.symmetric(d)
        else:
            F = PermGroup(d, _perms(spec["F"], d))
        return UFModel(F, depth)
    if spec["kind"] == "oriented":
        return OrientedTreeModel(spec["p"], spec["q"], depth)
    raise SpecError(f"kind {spec['kind']!r} is not a tree model")


def tree_translation(spec, model) -> Translation:
    length = spec.get("length", 1)
    if spec["kind"] == "oriented":
        return translation(model, ("F1",), length)
    if "axis" not in spec:
        raise SpecError("uf spec needs an 'axis' colour word")
    return translation(model, tuple(spec["axis"]), length)


def tree_portrait(spec, model, base_dir: Optional[Path] = None) -> TreePortrait:
    text = spec["portrait"]
    if "->" not in text:
        path = Path(text)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        try:
            text = path.read_text()
        except OSError as exc:
            raise SpecError(f"cannot read portrait {path}: {exc.strerror}") from None
    return TreePortrait.from_text(model, text)


def bare_graph(spec) -> Tuple[Graph, Optional[PermGroup]]:
    try:
        g = Graph.build(spec["vertices"], [tuple(e) for e in spec["edges"]])
    except ValidationError as exc:
        raise SpecError(str(exc)) from None
    group = None
    if "group" in spec:
        group = PermGroup(g.num_vertices, _perms(spec["group"], g.num_vertices))
    return g, group


def lazy_graph(spec) -> asymptotics.LazyGraph:
    if spec["kind"] == "lazy":
        return asymptotics.from_spec(spec)
    if spec["kind"] == "graph":
        g, _ = bare_graph(spec)
        return asymptotics.LazyGraph.from_graph(g, spec.get("base"))
    if spec["kind"] == "perm":
        return asymptotics.LazyGraph.from_graph(perm_graph(spec), spec.get("base", 1))
    if spec["kind"] in ("uf", "oriented"):
        return asymptotics.regular_tree(tree_model(spec).degree)
    raise SpecError(f"kind {spec['kind']!r} has no finite-radius graph view; use a lazy spec")
