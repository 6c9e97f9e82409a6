"""Simple graphs with arcs, distances, balls, differences and quotients.

A graph is stored as a symmetric adjacency relation on dense integer ids;
arbitrary hashable vertex labels live in a side table.  The arc involution
is implicit: the reverse of ``(a, b)`` is ``(b, a)``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .errors import SpecError, ValidationError

INFINITE = math.inf


class Graph:
    """Immutable simple graph.

    >>> g = Graph.build("abc", [("a", "b"), ("b", "c"), ("c", "a")])
    >>> g.num_arcs, g.valency("a")
    (6, 2)
    """

    __slots__ = ("_labels", "_index", "_adj")

    def __init__(self, labels: Sequence[Hashable], adjacency: Sequence[Iterable[int]]):
        self._labels = tuple(labels)
        self._index = {lab: i for i, lab in enumerate(self._labels)}
        if len(self._index) != len(self._labels):
            raise ValidationError("duplicate vertex label")
        self._adj = tuple(frozenset(a) for a in adjacency)
        for i, nbrs in enumerate(self._adj):
            for j in nbrs:
                if j == i:
                    raise ValidationError(f"loop at {self._labels[i]!r}")
                if i not in self._adj[j]:
                    raise ValidationError(f"arc {self._labels[i]!r}->{self._labels[j]!r} has no reverse")

    @classmethod
    def build(cls, vertices: Iterable[Hashable], edges: Iterable[Tuple[Hashable, Hashable]]) -> "Graph":
        """Build from vertices and undirected edges; loops and repeated edges are rejected."""
        labels = list(dict.fromkeys(vertices))
        index = {lab: i for i, lab in enumerate(labels)}
        adj: List[set] = [set() for _ in labels]
        for a, b in edges:
            if a not in index or b not in index:
                missing = a if a not in index else b
                raise ValidationError(f"edge ({a!r}, {b!r}) uses undeclared vertex {missing!r}")
            if a == b:
                raise ValidationError(f"loop ({a!r}, {b!r}) not allowed")
            i, j = index[a], index[b]
            if j in adj[i]:
                raise ValidationError(f"duplicate edge ({a!r}, {b!r})")
            adj[i].add(j)
            adj[j].add(i)
        return cls(labels, adj)

    @classmethod
    def from_arcs(cls, vertices: Iterable[Hashable], arcs: Iterable[Tuple[Hashable, Hashable]]) -> "Graph":
        """Build from an arc relation; both orientations must be present."""
        labels = list(dict.fromkeys(vertices))
        index = {lab: i for i, lab in enumerate(labels)}
        adj: List[set] = [set() for _ in labels]
        for a, b in arcs:
            if a not in index or b not in index:
                raise ValidationError(f"arc ({a!r}, {b!r}) uses undeclared vertex")
            adj[index[a]].add(index[b])
        return cls(labels, adj)

    # -- basic accessors ----------------------------------------------------

    @property
    def vertices(self) -> Tuple[Hashable, ...]:
        return self._labels

    @property
    def num_vertices(self) -> int:
        return len(self._labels)

    @property
    def num_arcs(self) -> int:
        return sum(len(a) for a in self._adj)

    @property
    def num_edges(self) -> int:
        return self.num_arcs // 2

    def __len__(self) -> int:
        return len(self._labels)

    def __contains__(self, v) -> bool:
        return v in self._index

    def id_of(self, v: Hashable) -> int:
        try:
            return self._index[v]
        except (KeyError, TypeError):
            raise ValidationError(f"unknown vertex {v!r}") from None

    def label(self, i: int) -> Hashable:
        return self._labels[i]

    def neighbours(self, v: Hashable) -> List[Hashable]:
        return [self._labels[j] for j in sorted(self._adj[self.id_of(v)])]

    def neighbour_ids(self, i: int) -> frozenset:
        return self._adj[i]

    def valency(self, v: Hashable) -> int:
        return len(self._adj[self.id_of(v)])

    def max_valency(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def is_regular(self) -> bool:
        return len({len(a) for a in self._adj}) <= 1

    def has_arc(self, a: Hashable, b: Hashable) -> bool:
        if a not in self._index or b not in self._index:
            return False
        return self._index[b] in self._adj[self._index[a]]

    def arcs(self) -> Iterator[Tuple[Hashable, Hashable]]:
        for i, nbrs in enumerate(self._adj):
            for j in sorted(nbrs):
                yield self._labels[i], self._labels[j]

    def edges(self) -> Iterator[Tuple[Hashable, Hashable]]:
        """Each undirected edge once, as ``(a, b)`` with id(a) < id(b)."""
        for i, nbrs in enumerate(self._adj):
            for j in sorted(nbrs):
                if i < j:
                    yield self._labels[i], self._labels[j]

    def arc_set(self) -> frozenset:
        return frozenset(self.arcs())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return set(self._labels) == set(other._labels) and self.arc_set() == other.arc_set()

    def __hash__(self):
        return hash((frozenset(self._labels), self.arc_set()))

    def __repr__(self) -> str:
        return f"Graph({self.num_vertices} vertices, {self.num_edges} edges)"

    # -- metric -------------------------------------------------------------

    def bfs_ids(self, start: int, radius: Optional[int] = None) -> Dict[int, int]:
        dist = {start: 0}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            if radius is not None and dist[x] >= radius:
                continue
            for y in sorted(self._adj[x]):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    def distances_from(self, v: Hashable, radius: Optional[int] = None) -> Dict[Hashable, int]:
        return {self._labels[i]: d for i, d in self.bfs_ids(self.id_of(v), radius).items()}

    def distance(self, a: Hashable, b: Hashable):
        """BFS distance; ``math.inf`` between different components."""
        j = self.id_of(b)
        return self.bfs_ids(self.id_of(a)).get(j, INFINITE)

    def is_connected(self) -> bool:
        if not self._labels:
            return True
        return len(self.bfs_ids(0)) == len(self._labels)

    def components(self) -> List[List[Hashable]]:
        seen = set()
        out = []
        for i in range(len(self._labels)):
            if i not in seen:
                comp = sorted(self.bfs_ids(i))
                seen.update(comp)
                out.append([self._labels[j] for j in comp])
        return out

    def induced_subgraph(self, vertices: Iterable[Hashable]) -> "Graph":
        ids = sorted({self.id_of(v) for v in vertices})
        keep = set(ids)
        pos = {i: k for k, i in enumerate(ids)}
        return Graph(
            [self._labels[i] for i in ids],
            [[pos[j] for j in self._adj[i] if j in keep] for i in ids],
        )

    def ball(self, v: Hashable, r: int) -> "Graph":
        """Largest subgraph on the vertices within distance ``r`` of ``v``."""
        if r < 0:
            raise ValidationError("radius must be non-negative")
        return self.induced_subgraph(self._labels[i] for i in self.bfs_ids(self.id_of(v), r))

    def sphere(self, v: Hashable, r: int) -> List[Hashable]:
        return [self._labels[i] for i, d in self.bfs_ids(self.id_of(v), r).items() if d == r]

    def is_subgraph_of(self, other: "Graph") -> bool:
        return all(v in other for v in self._labels) and all(other.has_arc(a, b) for a, b in self.arcs())

    def is_path(self, seq: Sequence[Hashable]) -> bool:
        """Vertex sequence with distinct vertices and consecutive adjacency."""
        if not seq or len(set(seq)) != len(seq) or any(v not in self for v in seq):
            return False
        return all(self.has_arc(a, b) for a, b in zip(seq, seq[1:]))

    def relabel(self, mapping: Mapping[Hashable, Hashable]) -> "Graph":
        return Graph([mapping[v] for v in self._labels], self._adj)

    # -- text formats -------------------------------------------------------

    def to_dot(self, name: str = "G", label=None) -> str:
        label = label or str
        lines = [f"graph {name} {{"]
        for i, v in enumerate(self._labels):
            lines.append(f'  n{i} [label="{_dot_escape(label(v))}"];')
        for i, nbrs in enumerate(self._adj):
            for j in sorted(nbrs):
                if i < j:
                    lines.append(f"  n{i} -- n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_adjacency_text(self) -> str:
        return "".join(
            f"{v}:" + "".join(f" {w}" for w in self.neighbours(v)) + "\n" for v in self._labels
        )

    @classmethod
    def from_adjacency_text(cls, text: str) -> "Graph":
        """Parse lines ``v: w1 w2 ...``; labels are strings, ints when numeric."""
        vertices = []
        arcs = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if ":" not in line:
                raise SpecError(f"line {lineno}: expected 'v: w1 w2 ...'")
            head, tail = line.split(":", 1)
            v = _parse_label(head.strip())
            vertices.append(v)
            for tok in tail.split():
                arcs.append((v, _parse_label(tok)))
        for a, b in arcs:
            if b not in vertices:
                vertices.append(b)
        try:
            return cls.from_arcs(vertices, arcs + [(b, a) for a, b in arcs])
        except ValidationError as exc:
            raise SpecError(str(exc)) from None


def _parse_label(tok: str):
    try:
        return int(tok)
    except ValueError:
        return tok


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def build_graph(vertices, edges) -> Graph:
    return Graph.build(vertices, edges)


def distance(g: Graph, a, b):
    return g.distance(a, b)


def ball(g: Graph, v, r: int) -> Graph:
    return g.ball(v, r)


def graph_difference(gamma: Graph, delta: Graph) -> Graph:
    """Arcs of ``gamma`` not in ``delta``; vertices are the origins of surviving
    arcs together with the vertices of ``gamma`` not in ``delta``."""
    if not delta.is_subgraph_of(gamma):
        raise ValidationError("second argument is not a subgraph of the first")
    removed = delta.arc_set()
    arcs = [a for a in gamma.arcs() if a not in removed]
    keep = {a for a, _ in arcs} | {v for v in gamma.vertices if v not in delta}
    return Graph.from_arcs([v for v in gamma.vertices if v in keep], arcs)


@dataclass(frozen=True)
class GraphMorphism:
    source: Graph
    target: Graph
    vmap: Mapping[Hashable, Hashable]

    def __call__(self, v):
        return self.vmap[v]

    def is_morphism(self) -> bool:
        return check_morphism(self.source, self.target, self.vmap)

    def is_isomorphism(self) -> bool:
        return is_isomorphism(self.source, self.target, self.vmap)

    def compose(self, first: "GraphMorphism") -> "GraphMorphism":
        """``self`` after ``first``."""
        return GraphMorphism(first.source, self.target, {v: self.vmap[w] for v, w in first.vmap.items()})

    def inverse(self) -> "GraphMorphism":
        inv = {w: v for v, w in self.vmap.items()}
        if len(inv) != len(self.vmap):
            raise ValidationError("vertex map is not injective")
        return GraphMorphism(self.target, self.source, inv)


def check_morphism(source: Graph, target: Graph, vmap: Mapping) -> bool:
    """True iff ``vmap`` is total on ``source`` and sends every arc to an arc."""
    if any(v not in vmap or vmap[v] not in target for v in source.vertices):
        return False
    return all(target.has_arc(vmap[a], vmap[b]) for a, b in source.arcs())


def is_isomorphism(source: Graph, target: Graph, vmap: Mapping) -> bool:
    if not check_morphism(source, target, vmap):
        return False
    images = [vmap[v] for v in source.vertices]
    if len(set(images)) != len(images) or len(images) != target.num_vertices:
        return False
    inv = {vmap[v]: v for v in source.vertices}
    return check_morphism(target, source, inv)


def compose(second: GraphMorphism, first: GraphMorphism) -> GraphMorphism:
    return second.compose(first)


def invert(m: GraphMorphism) -> GraphMorphism:
    return m.inverse()


def quotient_graph(gamma: Graph, partition: Iterable[Iterable[Hashable]]) -> Tuple[Graph, GraphMorphism]:
    """Quotient by a partition of the vertex set.

    Classes become vertices (labelled by frozensets).  Two distinct classes are
    adjacent when some members are.  The projection only sends arcs to arcs
    when no class contains an edge; ``projection.is_morphism()`` reports this.
    """
    classes = [frozenset(c) for c in partition]
    cls_of: Dict[Hashable, frozenset] = {}
    for c in classes:
        if not c:
            raise ValidationError("empty class in partition")
        for v in c:
            if v not in gamma:
                raise ValidationError(f"partition mentions unknown vertex {v!r}")
            if v in cls_of:
                raise ValidationError(f"vertex {v!r} lies in two classes")
            cls_of[v] = c
    missing = [v for v in gamma.vertices if v not in cls_of]
    if missing:
        raise ValidationError(f"partition does not cover vertex {missing[0]!r}")
    order = sorted(classes, key=lambda c: min(gamma.id_of(v) for v in c))
    arcs = {(cls_of[a], cls_of[b]) for a, b in gamma.arcs() if cls_of[a] != cls_of[b]}
    q = Graph.from_arcs(order, arcs)
    return q, GraphMorphism(gamma, q, dict(cls_of))
