"""Finite permutation models of a group with a compact open subgroup.

A model is a transitive permutation group ``G`` on ``X = {0..n-1}`` with a
base point ``x0``; the point stabilizer ``B = G_{x0}`` stands in for the
compact open subgroup and ``X`` for the coset space ``G/B``.  Graph vertices
are the 1-based point labels ``1..n`` so they match cycle notation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import ValidationError
from .graph import Graph, GraphMorphism, quotient_graph
from .perm import Perm, PermGroup


@dataclass(frozen=True)
class FinitePermModel:
    group: PermGroup
    base: int = 0

    def __post_init__(self):
        if not 0 <= self.base < self.group.degree:
            raise ValidationError(f"base point {self.base + 1} outside 1..{self.group.degree}")
        if not self.group.is_transitive():
            raise ValidationError("model group must act transitively")

    @property
    def degree(self) -> int:
        return self.group.degree

    @property
    def B(self) -> PermGroup:
        return self.group.stabilizer(self.base)

    @property
    def base_vertex(self) -> int:
        return self.base + 1

    def vertices(self) -> List[int]:
        return list(range(1, self.degree + 1))

    def act(self, g: Perm, v: int) -> int:
        """Action on 1-based vertex labels."""
        return g(v - 1) + 1

    def require_members(self, elements: Iterable[Perm], what: str) -> None:
        for g in elements:
            if g not in self.group:
                raise ValidationError(f"{what} element {g} is not in G")

    def transversal(self) -> Dict[int, Perm]:
        """For each vertex ``v`` an element sending the base vertex to ``v``."""
        return {x + 1: t for x, t in self.group.orbit_transversal(self.base).items()}


@dataclass(frozen=True)
class Condition:
    name: str
    holds: bool
    witness: Optional[str] = None


@dataclass(frozen=True)
class ConditionReport:
    conditions: Tuple[Condition, ...]

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.conditions)

    def failed(self) -> List[Condition]:
        return [c for c in self.conditions if not c.holds]

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "conditions": [
                {"name": c.name, "holds": c.holds, "witness": c.witness} for c in self.conditions
            ],
        }


def _invariance_witness(model: FinitePermModel, points: set, elements: Sequence[Perm]) -> Optional[str]:
    # B-invariance of a point set, checked on generators of B
    for b in model.B.gens:
        for s in elements:
            y = b(s(model.base))
            if y not in points:
                return f"b={b}, s={s}: b*s sends {model.base_vertex} to {y + 1}, outside {_fmt_points(points)}"
    return None


def _fmt_points(points) -> str:
    return "{" + ",".join(str(p + 1) for p in sorted(points)) + "}"


def validate_construction2(model: FinitePermModel, S: Sequence[Perm]) -> ConditionReport:
    """Check the four conditions on a generating set ``S`` (explicit permutations)."""
    S = list(S)
    model.require_members(S, "S")
    x0 = model.base
    conds = []

    missing = next((s for s in S if s.inverse() not in S), None)
    conds.append(Condition("symmetric", missing is None,
                           None if missing is None else f"inverse of {missing} not in S"))

    fixer = next((s for s in S if s(x0) == x0), None)
    conds.append(Condition("disjoint_from_B", fixer is None,
                           None if fixer is None else f"{fixer} fixes {model.base_vertex}"))

    # BSB = SB iff B(S x0) is contained in S x0; BSB = BS likewise for S^-1.
    w1 = _invariance_witness(model, {s(x0) for s in S}, S)
    inv = [s.inverse() for s in S]
    w2 = _invariance_witness(model, {s(x0) for s in inv}, inv)
    conds.append(Condition("double_coset", w1 is None and w2 is None, w1 or w2))

    if S:
        reach = set(PermGroup(model.degree, S).orbit(x0))
    else:
        reach = {x0}
    outside = sorted(set(range(model.degree)) - reach)
    conds.append(Condition("generates", not outside,
                           None if not outside else f"<S> does not reach {outside[0] + 1}"))
    return ConditionReport(tuple(conds))


def _graph_from_base_neighbours(model: FinitePermModel, nbrs0: set) -> Graph:
    trans = model.transversal()
    arcs = []
    for v, t in sorted(trans.items()):
        for y in sorted(nbrs0):
            arcs.append((v, t(y) + 1))
    return Graph.from_arcs(model.vertices(), arcs)


def build_ca_construction1(model: FinitePermModel, K: Sequence[Perm]) -> Graph:
    """Cayley-Abels graph from a subset ``K`` with ``<K u B> = G``.

    The neighbours of the base vertex are ``B K^{+-1} x0`` minus ``x0``; the rest
    of the graph is its translate under a transversal.
    """
    K = list(K)
    model.require_members(K, "K")
    x0 = model.base
    if not PermGroup(model.degree, list(K) + list(model.B.gens)).is_transitive():
        raise ValidationError("not generating: <K u B> is a proper subgroup of G")
    B = model.B
    seeds = {k(x0) for k in K} | {k.inverse()(x0) for k in K}
    nbrs = set()
    for y in seeds:
        nbrs.update(B.orbit(y))
    nbrs.discard(x0)
    return _graph_from_base_neighbours(model, nbrs)


def build_ca_construction2(model: FinitePermModel, S: Sequence[Perm]) -> Graph:
    """Arcs ``(g x0, g s x0)`` for ``g`` in G and ``s`` in S."""
    report = validate_construction2(model, S)
    if not report.ok:
        names = ", ".join(f"{c.name} ({c.witness})" for c in report.failed())
        raise ValidationError(f"construction conditions fail: {names}")
    nbrs = set()
    for s in S:
        nbrs.update(model.B.orbit(s(model.base)))
    return _graph_from_base_neighbours(model, nbrs)


def product_set(S: Sequence[Perm], B: PermGroup) -> List[Perm]:
    """The set ``S B`` as explicit permutations (deduplicated, deterministic)."""
    elems = list(B.elements())
    return list(dict.fromkeys(s * b for s in S for b in elems))


def check_ca(graph: Graph, model: FinitePermModel) -> bool:
    """Connected, G acts by automorphisms and transitively on vertices."""
    if sorted(graph.vertices) != model.vertices():
        return False
    if not graph.is_connected():
        return False
    for g in model.group.gens:
        for a, b in graph.arcs():
            if not graph.has_arc(model.act(g, a), model.act(g, b)):
                return False
    return model.group.is_transitive()


@dataclass(frozen=True)
class NotIsomorphic:
    reason: str
    witness: Optional[Tuple] = None

    def __bool__(self):
        return False


def equivariant_iso(g1: Graph, g2: Graph, model: FinitePermModel) -> Union[GraphMorphism, NotIsomorphic]:
    """A G-equivariant isomorphism ``g1 -> g2`` or a certificate that none exists.

    Candidate images of the base vertex are the vertices with the same
    stabilizer; each candidate fixes the map on all of X.
    """
    B = model.B
    candidates = [y for y in range(model.degree) if model.group.stabilizer(y).same_group(B)]
    if not candidates:
        raise ValidationError("no vertex has the base stabilizer")
    if g1.num_vertices != g2.num_vertices or g1.num_arcs != g2.num_arcs:
        return NotIsomorphic("valency", (g1.num_arcs, g2.num_arcs))
    trans = model.transversal()
    last = None
    for y in candidates:
        vmap = {v: t(y) + 1 for v, t in trans.items()}
        bad = next(((a, b) for a, b in g1.arcs() if not g2.has_arc(vmap[a], vmap[b])), None)
        if bad is None:
            return GraphMorphism(g1, g2, vmap)
        last = (y + 1, bad)
    return NotIsomorphic("arc not preserved", last)


@dataclass(frozen=True)
class LocalAction:
    vertex: int
    neighbours: Tuple[int, ...]
    image: PermGroup = field(compare=False)
    kernel: PermGroup = field(compare=False)

    def as_dict(self) -> dict:
        return {
            "vertex": self.vertex,
            "neighbours": list(self.neighbours),
            "order": self.image.order(),
            "generators": [str(g) for g in self.image.gens] or ["()"],
            "kernel_order": self.kernel.order(),
        }


def local_action(model: FinitePermModel, graph: Graph, vertex: int,
                 subgroup: Optional[PermGroup] = None) -> LocalAction:
    """Induced action of the stabilizer of ``vertex`` on its neighbours.

    Neighbours are relabelled ``1..d`` in increasing order.  With ``subgroup``
    the stabilizer is taken inside that subgroup instead of G.
    """
    grp = model.group if subgroup is None else subgroup
    stab = grp.stabilizer(vertex - 1)
    nbrs = graph.neighbours(vertex)
    ia = stab.induced_action([v - 1 for v in nbrs])
    return LocalAction(vertex, tuple(nbrs), ia.image, ia.kernel)


def local_actions_conjugate(model: FinitePermModel, graph: Graph, vertex: int, g: Perm) -> bool:
    """Check that ``g`` conjugates the local action at ``vertex`` onto the one at ``g vertex``."""
    la = local_action(model, graph, vertex)
    lb = local_action(model, graph, model.act(g, vertex))
    pos_b = {v: i for i, v in enumerate(lb.neighbours)}
    # bijection N(vertex) -> N(g vertex) induced by g, in local indices
    phi = Perm(tuple(pos_b[model.act(g, v)] for v in la.neighbours))
    moved = [phi * h * phi.inverse() for h in la.image.gens]
    return PermGroup(len(lb.neighbours), moved).same_group(lb.image)


def check_normal(model: FinitePermModel, N: PermGroup) -> None:
    if not N.is_subgroup_of(model.group):
        raise ValidationError("N is not a subgroup of G")
    ok, wit = N.is_normal_in(model.group)
    if not ok:
        n, g = wit
        raise ValidationError(f"N is not normal: {g} conjugates {n} outside N")


def quotient_valency(model: FinitePermModel, graph: Graph, N: PermGroup) -> int:
    q, proj = quotient_graph(graph, _orbit_partition(N))
    return q.valency(proj(model.base_vertex))


def _orbit_partition(N: PermGroup) -> List[List[int]]:
    return [[x + 1 for x in orb] for orb in N.orbits()]


def _orbit_of_base(model: FinitePermModel, N: PermGroup) -> set:
    return {x + 1 for x in N.orbit(model.base)}


def ball2_criterion(model: FinitePermModel, graph: Graph, N: PermGroup, H: PermGroup) -> bool:
    """``N a`` and ``H a`` meet the radius-2 ball around ``a`` in the same set."""
    ball = set(graph.distances_from(model.base_vertex, 2))
    return (_orbit_of_base(model, N) & ball) == (_orbit_of_base(model, H) & ball)


def ball1_criterion(model: FinitePermModel, graph: Graph, N: PermGroup) -> bool:
    """Every vertex ``b`` of the radius-1 ball meets its own N-orbit there only in ``b``."""
    ball = set(graph.distances_from(model.base_vertex, 1))
    return all({y + 1 for y in N.orbit(b - 1)} & ball == {b} for b in ball)


@dataclass(frozen=True)
class QuotientReport:
    graph: Graph
    class_action: PermGroup
    valency: int
    quotient_valency: int
    equality_predicted: bool
    ball2_predicted: bool

    @property
    def valency_equal(self) -> bool:
        return self.valency == self.quotient_valency

    def as_dict(self) -> dict:
        return {
            "quotient_vertices": self.graph.num_vertices,
            "quotient_edges": self.graph.num_edges,
            "class_action_order": self.class_action.order(),
            "valency": self.valency,
            "quotient_valency": self.quotient_valency,
            "valency_equal": self.valency_equal,
            "ball1_criterion": self.equality_predicted,
            "ball2_criterion": self.ball2_predicted,
        }


def quotient_by_normal(model: FinitePermModel, graph: Graph, N: PermGroup) -> QuotientReport:
    """Quotient by the N-orbit partition, with the valency comparison."""
    check_normal(model, N)
    classes = _orbit_partition(N)
    q, proj = quotient_graph(graph, classes)
    index = {frozenset(c): i for i, c in enumerate(q.vertices)}
    images = []
    for g in model.group.gens:
        images.append(Perm(tuple(index[frozenset(model.act(g, v) for v in c)] for c in q.vertices)))
    action = PermGroup(q.num_vertices, images)
    trivial = PermGroup(model.degree)
    return QuotientReport(
        graph=q,
        class_action=action,
        valency=graph.valency(model.base_vertex),
        quotient_valency=q.valency(proj(model.base_vertex)),
        equality_predicted=ball1_criterion(model, graph, N),
        ball2_predicted=ball2_criterion(model, graph, trivial, N),
    )


@dataclass(frozen=True)
class ChainReport:
    valencies: Tuple[int, ...]
    minimum: int
    maximum: int
    join_valency: int
    meet_valency: int
    criterion_agrees: Tuple[bool, ...]

    @property
    def ok(self) -> bool:
        return (self.join_valency == self.minimum and self.meet_valency == self.maximum
                and all(self.criterion_agrees))


def chain_valency_extremes(model: FinitePermModel, graph: Graph, chain: Sequence[PermGroup]) -> ChainReport:
    """Quotient valencies along a chain of normal subgroups.

    The chain is sorted by order and must be totally ordered by inclusion.
    ``criterion_agrees[i]`` compares members ``i`` and ``i+1`` against the
    radius-2 orbit criterion.
    """
    if not chain:
        raise ValidationError("empty chain")
    for N in chain:
        check_normal(model, N)
    chain = sorted(chain, key=lambda N: N.order())
    for a, b in zip(chain, chain[1:]):
        if not a.is_subgroup_of(b):
            raise ValidationError("subgroups do not form a chain")
    vals = tuple(quotient_valency(model, graph, N) for N in chain)
    join = PermGroup(model.degree, [g for N in chain for g in N.gens])
    meet = chain[0]
    for N in chain[1:]:
        meet = _intersection(meet, N)
    agrees = tuple(
        (vals[i] == vals[i + 1]) == ball2_criterion(model, graph, chain[i], chain[i + 1])
        for i in range(len(chain) - 1)
    )
    return ChainReport(vals, min(vals), max(vals), quotient_valency(model, graph, join),
                       quotient_valency(model, graph, meet), agrees)


def _intersection(a: PermGroup, b: PermGroup) -> PermGroup:
    return PermGroup(a.degree, [g for g in a.elements() if g in b])


def normal_closure(G: PermGroup, elements: Iterable[Perm]) -> PermGroup:
    gens = [g for g in elements if not g.is_identity]
    N = PermGroup(G.degree, gens)
    queue = list(gens)
    while queue:
        n = queue.pop()
        for g in G.gens:
            c = g * n * g.inverse()
            if c not in N:
                gens.append(c)
                queue.append(c)
                N = PermGroup(G.degree, gens)
    return N


def normal_subgroups(G: PermGroup) -> List[PermGroup]:
    """All normal subgroups, by joining normal closures of single elements."""
    found: List[PermGroup] = []

    def known(H: PermGroup) -> bool:
        return any(H.order() == K.order() and H.same_group(K) for K in found)

    minimal = []
    for g in G.elements():
        H = normal_closure(G, [g])
        if not known(H):
            found.append(H)
            minimal.append(H)
    frontier = list(found)
    while frontier:
        new = []
        for H in frontier:
            for K in minimal:
                J = PermGroup(G.degree, list(H.gens) + list(K.gens))
                if not known(J):
                    found.append(J)
                    new.append(J)
        frontier = new
    return sorted(found, key=lambda H: H.order())
