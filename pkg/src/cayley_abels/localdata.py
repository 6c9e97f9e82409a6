"""Edge-indexed data of a vertex-transitive action and what follows from it.

For an arc ``(a, b)`` the pair ``(m_out, m_in) = (|G_a(b)|, |G_b(a)|)``
depends only on the arc orbit.  Products of ``D = m_out / m_in`` along a
path from ``a`` to ``g a`` compute the modular function at ``g``.  All
arithmetic is exact (``fractions.Fraction``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Hashable, List, Optional, Sequence, Tuple, Union

from .camodel import FinitePermModel, check_ca
from .errors import Inconclusive, ValidationError
from .graph import Graph
from .perm import PermGroup
from .trees import TreeModel


@dataclass(frozen=True)
class ArcOrbit:
    arc: Tuple[Hashable, Hashable]
    m_out: int
    m_in: int
    reverse: int

    @property
    def d_value(self) -> Fraction:
        return Fraction(self.m_out, self.m_in)


@dataclass(frozen=True)
class LocalData:
    orbits: Tuple[ArcOrbit, ...]

    @property
    def valency(self) -> int:
        return sum(o.m_out for o in self.orbits)

    def d_values(self) -> List[Fraction]:
        return [o.d_value for o in self.orbits]

    @property
    def unimodular(self) -> bool:
        return all(v == 1 for v in self.d_values())

    def check(self) -> None:
        for i, o in enumerate(self.orbits):
            r = self.orbits[o.reverse]
            if r.reverse != i:
                raise ValidationError("reversal pairing is not an involution")
            if r.m_out != o.m_in or r.m_in != o.m_out:
                raise ValidationError(f"orbit {i} and its reverse have mismatched counts")

    def as_dict(self) -> dict:
        return {
            "orbits": [
                {"arc": [_jsonable(o.arc[0]), _jsonable(o.arc[1])], "m_out": o.m_out,
                 "m_in": o.m_in, "D": fmt_fraction(o.d_value), "reverse": o.reverse}
                for o in self.orbits
            ],
            "valency": self.valency,
            "unimodular": self.unimodular,
        }


def _jsonable(v):
    if isinstance(v, tuple):
        return ".".join(str(c) for c in v) if v else "-"
    return v


def fmt_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def d_value(ld: LocalData, orbit: int) -> Fraction:
    return ld.orbits[orbit].d_value


Source = Union[TreeModel, Tuple[FinitePermModel, Graph]]


def extract_local_data(source: Source) -> LocalData:
    """Arc orbits at the base vertex with their ``(m_out, m_in)`` pairs."""
    if isinstance(source, TreeModel):
        return _tree_local_data(source)
    model, graph = source
    return _perm_local_data(model, graph)


def _tree_local_data(m: TreeModel) -> LocalData:
    orbit_of = {}
    reps = []
    for L in m.letters:
        if L in orbit_of:
            continue
        for x in m.local_orbit(L):
            orbit_of[x] = len(reps)
        reps.append(L)
    orbits = []
    for L in reps:
        back = m.reserved(L)
        orbits.append(ArcOrbit(((), (L,)), m.local_orbit_size(L), m.local_orbit_size(back), orbit_of[back]))
    ld = LocalData(tuple(orbits))
    ld.check()
    return ld


def _perm_local_data(model: FinitePermModel, graph: Graph) -> LocalData:
    if not check_ca(graph, model):
        raise ValidationError("graph is not a Cayley-Abels graph for the model (not vertex-transitive)")
    a = model.base_vertex
    B = model.B
    trans = model.transversal()
    nbrs = graph.neighbours(a)
    orbit_of: Dict[int, int] = {}
    reps = []
    for b in nbrs:
        if b in orbit_of:
            continue
        for y in B.orbit(b - 1):
            orbit_of[y + 1] = len(reps)
        reps.append(b)
    orbits = []
    for b in reps:
        m_out = len(B.orbit(b - 1))
        m_in = len(model.group.stabilizer(b - 1).orbit(a - 1))
        # translate the reversed arc (b, a) back to the base
        t = trans[b].inverse()
        orbits.append(ArcOrbit((a, b), m_out, m_in, orbit_of[model.act(t, a)]))
    ld = LocalData(tuple(orbits))
    ld.check()
    return ld


def arc_d_value(source: Source, u, v) -> Fraction:
    """``|G_u(v)| / |G_v(u)|`` for an arc ``(u, v)``."""
    if isinstance(source, TreeModel):
        return Fraction(source.local_orbit_size(source.letter_to(u, v)),
                        source.local_orbit_size(source.letter_to(v, u)))
    model, graph = source
    if not graph.has_arc(u, v):
        raise ValidationError(f"({u!r}, {v!r}) is not an arc")
    G = model.group
    return Fraction(len(G.stabilizer(u - 1).orbit(v - 1)), len(G.stabilizer(v - 1).orbit(u - 1)))


def modular_along_path(source: Source, path: Sequence, allow_walk: bool = False) -> Fraction:
    """Product of ``D`` over consecutive arcs of a path.

    By default the sequence must be a path (distinct vertices); ``allow_walk``
    accepts any walk, including backtracking ones.
    """
    path = list(path)
    if not path:
        raise ValidationError("empty path")
    if not allow_walk and len(set(path)) != len(path):
        raise ValidationError("path repeats a vertex")
    if isinstance(source, TreeModel):
        for k in path:
            source.check_key(k)
    else:
        for v in path:
            if v not in source[1]:
                raise ValidationError(f"unknown vertex {v!r}")
    total = Fraction(1)
    for u, v in zip(path, path[1:]):
        total *= arc_d_value(source, u, v)
    return total


def orbit_ratio(source: Source, u, v) -> Fraction:
    """``|G_u(v)| / |G_v(u)|`` for arbitrary vertices (index form of the modular function)."""
    if isinstance(source, TreeModel):
        return Fraction(source.fixator_index([u], source.geodesic(u, v)),
                        source.fixator_index([v], source.geodesic(v, u)))
    model, _ = source
    G = model.group
    return Fraction(len(G.stabilizer(u - 1).orbit(v - 1)), len(G.stabilizer(v - 1).orbit(u - 1)))


# -- subgroups of the positive rationals ------------------------------------------


def prime_factors(n: int) -> Dict[int, int]:
    """Trial division; inputs here are small orbit counts."""
    if n < 1:
        raise ValueError("positive integer required")
    out: Dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _exponents(x: Fraction) -> Dict[int, int]:
    e = dict(prime_factors(x.numerator))
    for p, k in prime_factors(x.denominator).items():
        e[p] = e.get(p, 0) - k
    return {p: k for p, k in e.items() if k}


@dataclass(frozen=True)
class RationalSubgroup:
    """Subgroup of the positive rationals given by generators (normalized to > 1)."""

    generators: Tuple[Fraction, ...]

    @classmethod
    def generated_by(cls, values) -> "RationalSubgroup":
        gens = []
        for v in values:
            v = Fraction(v)
            if v <= 0:
                raise ValidationError("values must be positive")
            if v == 1:
                continue
            v = v if v > 1 else 1 / v
            if v not in gens:
                gens.append(v)
        return cls(tuple(sorted(gens)))

    @property
    def primes(self) -> List[int]:
        return sorted({p for g in self.generators for p in _exponents(g)})

    def exponent_vectors(self) -> List[Tuple[int, ...]]:
        ps = self.primes
        return [tuple(_exponents(g).get(p, 0) for p in ps) for g in self.generators]

    @property
    def is_trivial(self) -> bool:
        return not self.generators

    @property
    def rank(self) -> int:
        """Rank of the exponent lattice (at most 1 or at least 2 is all we need)."""
        vecs = self.exponent_vectors()
        if not vecs:
            return 0
        v0 = vecs[0]
        for v in vecs[1:]:
            for i in range(len(v0)):
                for j in range(i + 1, len(v0)):
                    if v0[i] * v[j] != v0[j] * v[i]:
                        return 2
        return 1

    @property
    def is_cyclic(self) -> bool:
        return self.rank <= 1

    def generator(self) -> Optional[Fraction]:
        """Generator > 1 of a cyclic subgroup (1 for the trivial group), else None."""
        if self.is_trivial:
            return Fraction(1)
        if not self.is_cyclic:
            return None
        vecs = self.exponent_vectors()
        v0 = vecs[0]
        g0 = 0
        for x in v0:
            g0 = gcd(g0, x)
        prim = tuple(x // g0 for x in v0)
        i = next(k for k, x in enumerate(prim) if x)
        mult = 0
        for v in vecs:
            mult = gcd(mult, v[i] // prim[i])
        value = Fraction(1)
        for p, e in zip(self.primes, prim):
            value *= Fraction(p) ** (e * mult)
        return value if value > 1 else 1 / value

    def as_dict(self) -> dict:
        gen = self.generator()
        return {
            "generators": [fmt_fraction(g) for g in self.generators],
            "trivial": self.is_trivial,
            "cyclic": self.is_cyclic,
            "generator": None if gen is None else fmt_fraction(gen),
        }


def modular_image(ld: LocalData) -> RationalSubgroup:
    return RationalSubgroup.generated_by(ld.d_values())


def min_valency_bound(image: RationalSubgroup) -> Optional[int]:
    """``p + q`` for a nontrivial cyclic image generated by ``p/q``; None otherwise."""
    if image.is_trivial or not image.is_cyclic:
        return None
    g = image.generator()
    return g.numerator + g.denominator


# -- local prime content -------------------------------------------------------------


def local_prime_content_bound(L: PermGroup) -> List[int]:
    """Primes dividing the order of some point stabilizer of ``L``."""
    primes = set()
    for orb in L.orbits():
        primes.update(prime_factors(L.stabilizer(orb[0]).order()))
    return sorted(primes)


@dataclass(frozen=True)
class PrimeContent:
    primes: Tuple[int, ...]
    indices: Tuple[int, ...]
    period: int

    def as_dict(self) -> dict:
        return {
            "primes": list(self.primes),
            "indices": [str(i) for i in self.indices],
            "period": self.period,
        }


def _ball_fixator_indices(source: Source, depth: int) -> List[int]:
    if isinstance(source, TreeModel):
        return [source.ball_index(n) for n in range(1, depth + 1)]
    model, graph = source
    a = model.base_vertex
    G = model.group
    out = []
    prev = None
    for n in range(1, depth + 2):
        ball = [v - 1 for v in graph.distances_from(a, n)]
        U = G.pointwise_stabilizer(ball)
        if prev is not None:
            out.append(prev.order() // U.order())
        prev = U
    return out


def local_prime_content_exact(source: Source, depth: int) -> PrimeContent:
    """Primes dividing ``[U_n : U_{n+1}]`` over an eventually periodic tail.

    The prime sets for ``n = 1..depth`` must end in three repetitions of a
    block; the answer is the union over that block.
    """
    indices = _ball_fixator_indices(source, depth)
    sets = [frozenset(prime_factors(i)) for i in indices]
    for t in range(1, len(sets) // 3 + 1):
        tail = sets[len(sets) - 3 * t:]
        block = tail[:t]
        if tail == block * 3:
            primes = sorted(set().union(*block))
            return PrimeContent(tuple(primes), tuple(indices), t)
    raise Inconclusive(f"index prime sets not periodic within depth {depth}")


def random_key_pairs(model: TreeModel, radius: int, count: int, seed: int = 0):
    rng = random.Random(seed)
    keys = model.ball_keys((), radius)
    return [(rng.choice(keys), rng.choice(keys)) for _ in range(count)]
