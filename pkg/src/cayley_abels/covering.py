"""Truncated universal covers of finite graphs and lifts of automorphisms.

Cover vertices are non-backtracking walks from the base vertex, stored as
vertex tuples ``(a, v1, ..., vk)``; the projection takes the last entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Mapping, Tuple

import numpy as np

from .errors import DepthExceeded, ValidationError
from .graph import Graph
from .perm import Perm, PermGroup

Walk = Tuple[Hashable, ...]


@dataclass(frozen=True)
class TruncatedCover:
    base_graph: Graph = field(compare=False)
    base: Hashable
    depth: int
    tree: Graph = field(compare=False)

    @property
    def root(self) -> Walk:
        return (self.base,)

    def project(self, walk: Walk) -> Hashable:
        return walk[-1]

    def walks(self) -> Tuple[Walk, ...]:
        return self.tree.vertices

    def to_dot(self) -> str:
        return self.tree.to_dot("cover", label=lambda w: ".".join(map(str, w)) + "|" + str(w[-1]))


def universal_cover(gamma: Graph, base, R: int) -> TruncatedCover:
    """Tree of non-backtracking walks from ``base`` of length at most ``R``."""
    if not gamma.is_connected():
        raise ValidationError("graph must be connected")
    if base not in gamma:
        raise ValidationError(f"unknown vertex {base!r}")
    if R < 0:
        raise ValidationError("depth must be non-negative")
    layer = [(base,)]
    walks = list(layer)
    edges = []
    for _ in range(R):
        nxt = []
        for w in layer:
            for v in gamma.neighbours(w[-1]):
                if len(w) >= 2 and v == w[-2]:
                    continue
                c = w + (v,)
                nxt.append(c)
                edges.append((w, c))
        walks.extend(nxt)
        layer = nxt
    return TruncatedCover(gamma, base, R, Graph.build(walks, edges))


def _tree_geodesic(x: Walk, y: Walk) -> List[Walk]:
    k = 0
    while k < len(x) and k < len(y) and x[k] == y[k]:
        k += 1
    up = [x[:i] for i in range(len(x), k - 1, -1)]
    down = [y[:i] for i in range(k + 1, len(y) + 1)]
    return up + down


def _tree_distance(x: Walk, y: Walk) -> int:
    return len(_tree_geodesic(x, y)) - 1


@dataclass(frozen=True)
class Lift:
    g: Mapping = field(compare=False)
    base_choice: Walk
    mapping: Dict[Walk, Walk] = field(compare=False)

    def __call__(self, w: Walk) -> Walk:
        return self.mapping[w]

    def commutes(self, cover: TruncatedCover) -> bool:
        """``project(lift(x)) == g(project(x))`` on the whole domain."""
        return all(cover.project(y) == self.g[cover.project(x)] for x, y in self.mapping.items())

    def fixed_points(self) -> List[Walk]:
        return [x for x, y in self.mapping.items() if x == y]

    def is_identity(self) -> bool:
        return all(x == y for x, y in self.mapping.items())


def lift_automorphism(cover: TruncatedCover, g: Mapping, base_choice: Walk) -> Lift:
    """The unique lift sending ``base_choice`` to the root.

    A cover vertex ``x`` is sent to the image under ``g`` of the projected
    geodesic from ``base_choice`` to ``x``; the domain is the set of cover
    vertices within ``depth`` of ``base_choice``.
    """
    gamma = cover.base_graph
    if base_choice not in cover.tree:
        raise ValidationError(f"{base_choice!r} is not a cover vertex")
    if any(v not in g for v in gamma.vertices) or not all(gamma.has_arc(g[a], g[b]) for a, b in gamma.arcs()):
        raise ValidationError("g is not an automorphism of the base graph")
    if g[cover.project(base_choice)] != cover.base:
        raise ValidationError("base choice is not in the fibre over g^-1(base)")
    mapping = {}
    for x in cover.walks():
        if _tree_distance(base_choice, x) > cover.depth:
            continue
        mapping[x] = tuple(g[w[-1]] for w in _tree_geodesic(base_choice, x))
    return Lift(dict(g), base_choice, mapping)


def compose_lifts(outer: Lift, inner: Lift, cover: TruncatedCover) -> Dict[Walk, Walk]:
    """``outer`` after ``inner`` where defined."""
    return {x: outer.mapping[y] for x, y in inner.mapping.items() if y in outer.mapping}


def closed_walks(cover: TruncatedCover, bound: int) -> List[Walk]:
    if bound > cover.depth:
        raise DepthExceeded(f"bound {bound} exceeds cover depth {cover.depth}", cover.depth)
    return [w for w in cover.walks() if w[-1] == cover.base and len(w) - 1 <= bound]


def deck_transformations(cover: TruncatedCover, bound: int) -> List[Lift]:
    """Lifts of the identity, one per closed walk of length ``<= bound``,
    deduplicated by their action on the common domain."""
    ident = {v: v for v in cover.base_graph.vertices}
    out: List[Lift] = []
    for w in closed_walks(cover, bound):
        lift = lift_automorphism(cover, ident, w)
        if not any(_same_action(lift, other) for other in out):
            out.append(lift)
    return out


def _same_action(a: Lift, b: Lift) -> bool:
    common = set(a.mapping) & set(b.mapping)
    return all(a.mapping[x] == b.mapping[x] for x in common)


def cycle_rank(gamma: Graph) -> int:
    return gamma.num_edges - gamma.num_vertices + len(gamma.components())


def deck_rank(cover: TruncatedCover, bound: int) -> int:
    """Rank of the signed edge-count vectors of the closed walks up to ``bound``."""
    edges = {e: i for i, e in enumerate(cover.base_graph.edges())}
    rows = []
    for w in closed_walks(cover, bound):
        vec = [0] * len(edges)
        for a, b in zip(w, w[1:]):
            if (a, b) in edges:
                vec[edges[(a, b)]] += 1
            else:
                vec[edges[(b, a)]] -= 1
        rows.append(vec)
    if not rows or not edges:
        return 0
    return int(np.linalg.matrix_rank(np.array(rows, dtype=float)))


def perm_to_vertex_map(gamma: Graph, g: Perm) -> Dict:
    """Point ``i`` of a permutation is the ``i``-th vertex of ``gamma``."""
    vs = gamma.vertices
    return {vs[i]: vs[g(i)] for i in range(len(vs))}


@dataclass(frozen=True)
class LocalActionComparison:
    downstairs: PermGroup
    upstairs: PermGroup

    @property
    def preserved(self) -> bool:
        return self.downstairs.same_group(self.upstairs)


def check_local_action_preserved(cover: TruncatedCover, G: PermGroup) -> LocalActionComparison:
    """Compare the local action of ``G_a`` at the base with that of the lifted
    stabilizer generators at the root, identified through the projection."""
    gamma = cover.base_graph
    if cover.depth < 1:
        raise DepthExceeded("cover depth must be at least 1", 0)
    a = cover.base
    ai = gamma.id_of(a)
    nbrs = gamma.neighbours(a)
    pos = {v: i for i, v in enumerate(nbrs)}
    stab = G.stabilizer(ai)
    down = []
    up = []
    for h in stab.gens:
        hv = perm_to_vertex_map(gamma, h)
        down.append(Perm(tuple(pos[hv[v]] for v in nbrs)))
        lift = lift_automorphism(cover, hv, cover.root)
        up.append(Perm(tuple(pos[cover.project(lift((a, v)))] for v in nbrs)))
    return LocalActionComparison(PermGroup(len(nbrs), down), PermGroup(len(nbrs), up))
