"""Lazily expanded locally finite graphs: growth, ends and separators.

A :class:`LazyGraph` is a neighbour rule on canonical keys plus a base key.
Expansion is memoized inside an :class:`Explorer`, one per computation, so
concurrent computations never share caches.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .errors import SpecError, ValidationError
from .graph import Graph

# Fixed constants of the heuristics below.
STABLE_RADII = 3
GROWTH_MARGIN = 4.0
MIN_GROWTH_LENGTH = 8
MAX_VERTICES = 300_000


class BudgetExceeded(Exception):
    """Exploration would exceed the vertex budget."""


@dataclass(frozen=True)
class LazyGraph:
    neighbours: Callable[[Hashable], Sequence[Hashable]] = field(compare=False)
    base: Hashable
    name: str = "lazy"

    def explorer(self) -> "Explorer":
        return Explorer(self)

    @classmethod
    def from_graph(cls, g: Graph, base=None, name: str = "finite") -> "LazyGraph":
        if g.num_vertices == 0:
            raise ValidationError("empty graph")
        return cls(g.neighbours, g.vertices[0] if base is None else base, name)


class Explorer:
    """Memoized expansion with a symmetry check on every expanded vertex."""

    def __init__(self, lazy: LazyGraph):
        self.lazy = lazy
        self._raw: Dict[Hashable, Tuple] = {}
        self._checked: Dict[Hashable, Tuple] = {}

    def _expand(self, v) -> Tuple:
        if v not in self._raw:
            nb = tuple(self.lazy.neighbours(v))
            if len(set(nb)) != len(nb):
                raise ValidationError(f"repeated neighbour at {v!r}")
            if v in nb:
                raise ValidationError(f"loop at {v!r}")
            self._raw[v] = nb
        return self._raw[v]

    def neighbours(self, v) -> Tuple:
        if v not in self._checked:
            nb = self._expand(v)
            for w in nb:
                if v not in self._expand(w):
                    raise ValidationError(f"asymmetric expansion: {w!r} in N({v!r}) but not conversely")
            self._checked[v] = nb
        return self._checked[v]

    def distances(self, radius: int, max_vertices: Optional[int] = None) -> Dict[Hashable, int]:
        base = self.lazy.base
        dist = {base: 0}
        queue = deque([base])
        while queue:
            x = queue.popleft()
            if dist[x] >= radius:
                continue
            for y in self.neighbours(x):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
            if max_vertices is not None and len(dist) > max_vertices:
                raise BudgetExceeded(radius)
        return dist

    def exhausted_within(self, dist: Dict[Hashable, int], radius: int) -> bool:
        """True iff no vertex at distance ``radius`` has been reached, i.e. the
        component was explored completely."""
        return all(d < radius for d in dist.values())


def ball_sizes(lazy: LazyGraph, n_max: int) -> List[int]:
    if n_max < 0:
        raise ValidationError("n_max must be non-negative")
    dist = lazy.explorer().distances(n_max)
    counts = [0] * (n_max + 1)
    for d in dist.values():
        counts[d] += 1
    out = []
    total = 0
    for c in counts:
        total += c
        out.append(total)
    return out


# -- growth -------------------------------------------------------------------------


@dataclass(frozen=True)
class GrowthResult:
    kind: str  # "polynomial", "exponential" or "inconclusive"
    degree: Optional[float]
    rate: Optional[float]
    residual_polynomial: Optional[float]
    residual_exponential: Optional[float]

    def as_dict(self) -> dict:
        return {
            "class": self.kind,
            "degree": self.degree,
            "rate": self.rate,
            "residual_polynomial": self.residual_polynomial,
            "residual_exponential": self.residual_exponential,
            "margin": GROWTH_MARGIN,
        }


def _fit(x: np.ndarray, y: np.ndarray) -> Tuple[float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sum((y - (slope * x + intercept)) ** 2))
    return float(slope), resid


def growth_class(seq: Sequence[float]) -> GrowthResult:
    """Compare least-squares fits of ``log s(n)`` against ``log n`` and ``n``.

    Only the second half of the sequence is used.  The fit whose residual is
    smaller by the factor ``GROWTH_MARGIN`` wins; otherwise the result is
    inconclusive.  A constant tail is polynomial of degree 0.
    """
    if len(seq) < MIN_GROWTH_LENGTH:
        return GrowthResult("inconclusive", None, None, None, None)
    if any(s <= 0 for s in seq):
        raise ValidationError("growth sequence must be positive")
    start = max(1, len(seq) // 2)
    n = np.arange(start, len(seq), dtype=float)
    y = np.log(np.asarray(seq[start:], dtype=float))
    if np.allclose(y, y[0], rtol=0, atol=1e-12):
        return GrowthResult("polynomial", 0.0, 0.0, 0.0, 0.0)
    degree, rp = _fit(np.log(n), y)
    rate, re = _fit(n, y)
    # a tiny floor keeps exact fits comparable
    floor = 1e-15 * len(n)
    if (rp + floor) * GROWTH_MARGIN <= re + floor:
        return GrowthResult("polynomial", degree, rate, rp, re)
    if (re + floor) * GROWTH_MARGIN <= rp + floor:
        return GrowthResult("exponential", degree, rate, rp, re)
    return GrowthResult("inconclusive", degree, rate, rp, re)


# -- ends -------------------------------------------------------------------------------


@dataclass(frozen=True)
class EndReport:
    classification: str  # "zero", "one", "two", "cantor" or "inconclusive"
    radius: Optional[int]
    counts: Tuple[int, ...]
    r_checked: int = 0

    def as_dict(self) -> dict:
        return {
            "classification": self.classification,
            "radius": self.radius,
            "r_checked": self.r_checked,
            "counts": [{"r": r + 1, "components": c} for r, c in enumerate(self.counts)],
        }


def annulus_components(explorer: Explorer, r: int, max_vertices: Optional[int] = None) -> Tuple[Optional[int], Dict]:
    """Components of ``B(2r)`` minus ``B(r)`` (as graphs) that reach the sphere
    of radius ``2r``; None when the graph was exhausted."""
    dist = explorer.distances(2 * r, max_vertices)
    if explorer.exhausted_within(dist, 2 * r):
        return None, dist
    parent: Dict[Hashable, Hashable] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v, d in dist.items():
        if d > r:
            parent.setdefault(v, v)
            for w in explorer.neighbours(v):
                if w in dist:
                    parent.setdefault(w, w)
                    a, b = find(v), find(w)
                    if a != b:
                        parent[a] = b
    roots = {find(v) for v, d in dist.items() if d == 2 * r}
    return len(roots), dist


def end_classification(lazy: LazyGraph, r_max: int = 8, max_vertices: int = MAX_VERTICES) -> EndReport:
    """Heuristic end count from annulus components for ``r = 1..r_max``.

    Exhaustion gives ``zero``.  Counts stable at 1 or 2 over the last
    ``STABLE_RADII`` radii give ``one`` or ``two``; counts strictly increasing
    over those radii give ``cantor``.  Anything else is inconclusive.  The
    rule presumes a vertex-transitive graph.

    If the ball of radius ``2r`` would exceed ``max_vertices`` the scan stops
    and the rule is applied to the radii done so far (``r_checked``).
    """
    if r_max < 2:
        raise ValidationError("r_max must be at least 2")
    ex = lazy.explorer()
    counts: List[int] = []
    for r in range(1, r_max + 1):
        try:
            c, _ = annulus_components(ex, r, max_vertices)
        except BudgetExceeded:
            break
        if c is None:
            return EndReport("zero", r, tuple(counts), r)
        counts.append(c)
    k = STABLE_RADII
    done = len(counts)
    if done < k:
        return EndReport("inconclusive", None, tuple(counts), done)
    tail = counts[-k:]
    if len(set(tail)) == 1 and tail[0] in (1, 2):
        r0 = done
        while r0 > 1 and counts[r0 - 2] == tail[0]:
            r0 -= 1
        return EndReport("one" if tail[0] == 1 else "two", r0, tuple(counts), done)
    if all(a < b for a, b in zip(tail, tail[1:])):
        r0 = done - k + 1
        while r0 > 1 and counts[r0 - 2] < counts[r0 - 1]:
            r0 -= 1
        return EndReport("cantor", r0, tuple(counts), done)
    return EndReport("inconclusive", None, tuple(counts), done)


def min_separator(lazy: LazyGraph, r: int) -> int:
    """Minimum number of edges separating ``B(r)`` from the sphere of radius ``2r``."""
    if r < 1:
        raise ValidationError("r must be at least 1")
    ex = lazy.explorer()
    dist = ex.distances(2 * r)
    if ex.exhausted_within(dist, 2 * r):
        return 0
    g = nx.Graph()
    src, snk = ("source",), ("sink",)
    for v, d in dist.items():
        if d == r:
            g.add_edge(src, ("v", v))
        if d == 2 * r:
            g.add_edge(("v", v), snk)
        for w in ex.neighbours(v):
            if w in dist and (d > r or dist[w] > r):
                g.add_edge(("v", v), ("v", w), capacity=1)
    return int(nx.minimum_cut_value(g, src, snk))


# -- built-in families ----------------------------------------------------------------


def line() -> LazyGraph:
    return LazyGraph(lambda n: (n - 1, n + 1), 0, "line")


def grid() -> LazyGraph:
    return free_abelian(2)


def free_abelian(k: int) -> LazyGraph:
    if k < 1:
        raise ValidationError("rank must be positive")

    def nb(v):
        out = []
        for i in range(k):
            for e in (1, -1):
                w = list(v)
                w[i] += e
                out.append(tuple(w))
        return out

    return LazyGraph(nb, (0,) * k, f"free_abelian({k})")


def regular_tree(d: int) -> LazyGraph:
    """Colour-string keys; the d-regular tree."""
    if d < 1:
        raise ValidationError("d must be positive")

    def nb(v):
        out = []
        for c in range(1, d + 1):
            out.append(v[:-1] if v and v[-1] == c else v + (c,))
        return out

    return LazyGraph(nb, (), f"tree({d})")


def free_group(k: int) -> LazyGraph:
    """Cayley graph of the free group on ``k`` generators; keys are reduced words
    of nonzero integers (``-i`` is the inverse of generator ``i``)."""
    if k < 1:
        raise ValidationError("rank must be positive")
    letters = [i for j in range(1, k + 1) for i in (j, -j)]

    def nb(v):
        return [v[:-1] if v and v[-1] == -a else v + (a,) for a in letters]

    return LazyGraph(nb, (), f"free({k})")


def free_product(orders: Sequence[int]) -> LazyGraph:
    """Cayley graph of the free product of cyclic groups ``Z/m_i`` with respect
    to the standard generators.  Keys are syllable tuples ``(i, e)`` with
    ``0 < e < m_i`` and no two adjacent syllables from the same factor."""
    orders = list(orders)
    if not orders or any(m < 2 for m in orders):
        raise ValidationError("factor orders must be at least 2")

    def nb(v):
        out = []
        for i, m in enumerate(orders):
            steps = (1,) if m == 2 else (1, -1)
            for s in steps:
                if v and v[-1][0] == i:
                    e = (v[-1][1] + s) % m
                    out.append(v[:-1] + ((i, e),) if e else v[:-1])
                else:
                    out.append(v + ((i, s % m),))
        return out

    return LazyGraph(nb, (), f"free_product({orders})")


def from_spec(spec: dict) -> LazyGraph:
    family = spec.get("family")
    try:
        if family == "line":
            return line()
        if family == "grid":
            return grid()
        if family == "tree":
            return regular_tree(int(spec["d"]))
        if family == "free":
            return free_group(int(spec["rank"]))
        if family == "free_abelian":
            return free_abelian(int(spec["rank"]))
        if family == "free_product":
            return free_product([int(m) for m in spec["orders"]])
        if family == "finite":
            g = Graph.build(spec["vertices"], [tuple(e) for e in spec["edges"]])
            return LazyGraph.from_graph(g, spec.get("base"))
    except (KeyError, TypeError) as exc:
        raise SpecError(f"lazy family {family!r}: missing or bad parameter {exc}") from None
    except ValidationError as exc:
        raise SpecError(str(exc)) from None
    raise SpecError(f"unknown lazy family {family!r}")
