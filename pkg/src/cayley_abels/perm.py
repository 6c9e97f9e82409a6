"""Finite permutation groups given by generators.

Points are 0-based in the Python API.  Cycle notation (parsing and printing)
is 1-based, so ``Perm.parse("(1 2 3)", 3)`` maps point 0 to point 1.

Products compose right to left: ``(g * h)(x) == g(h(x))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import SpecError, ValidationError

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class Perm:
    images: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValidationError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Perm":
        """Build from 0-based cycles."""
        images = list(range(degree))
        seen = set()
        for cyc in cycles:
            for x in cyc:
                if not 0 <= x < degree:
                    raise ValidationError(f"point {x + 1} outside 1..{degree}")
                if x in seen:
                    raise ValidationError(f"point {x + 1} repeated in cycles")
                seen.add(x)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                images[a] = b
        return cls(tuple(images))

    @classmethod
    def parse(cls, text: str, degree: int) -> "Perm":
        """Parse 1-based cycle notation like ``(1 2 3)(4 5)``; ``()`` is the identity."""
        stripped = re.sub(r"\s+", " ", text).strip()
        if _CYCLE_RE.sub("", stripped).strip():
            raise SpecError(f"could not parse permutation {text!r}")
        cycles = []
        for body in _CYCLE_RE.findall(stripped):
            tokens = body.replace(",", " ").split()
            try:
                cyc = [int(t) - 1 for t in tokens]
            except ValueError:
                raise SpecError(f"could not parse permutation {text!r}") from None
            if cyc:
                cycles.append(cyc)
        try:
            return cls.from_cycles(cycles, degree)
        except ValidationError as exc:
            raise SpecError(f"{text!r}: {exc}") from None

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Perm") -> "Perm":
        return Perm(tuple(self.images[i] for i in other.images))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def __pow__(self, n: int) -> "Perm":
        base = self if n >= 0 else self.inverse()
        result = Perm.identity(self.degree)
        for _ in range(abs(n)):
            result = base * result
        return result

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def first_moved(self) -> Optional[int]:
        for i, j in enumerate(self.images):
            if i != j:
                return i
        return None

    def cycles(self) -> List[Tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Perm({self})"


@dataclass
class _Level:
    point: int
    gens: List[Perm]
    transversal: Dict[int, Perm]


def _orbit_transversal(point: int, gens: Sequence[Perm], degree: int) -> Dict[int, Perm]:
    # BFS in generator order; the dict's insertion order is the BFS order.
    trans = {point: Perm.identity(degree)}
    queue = [point]
    for x in queue:
        for g in gens:
            y = g(x)
            if y not in trans:
                trans[y] = g * trans[x]
                queue.append(y)
    return trans


class _Chain:
    """Base and strong generating set, built by deterministic Schreier-Sims."""

    def __init__(self, degree: int, gens: Sequence[Perm], base_prefix: Sequence[int] = ()):
        self.degree = degree
        strong = [g for g in gens if not g.is_identity]
        base = list(base_prefix)
        for g in strong:
            if all(g(b) == b for b in base):
                base.append(g.first_moved())
        self.base = base
        self.strong = strong
        self.levels: List[Optional[_Level]] = [None] * len(base)
        self._run()

    def _level_gens(self, i: int) -> List[Perm]:
        fixed = self.base[:i]
        return [g for g in self.strong if all(g(b) == b for b in fixed)]

    def _compute_level(self, i: int) -> None:
        gens = self._level_gens(i)
        self.levels[i] = _Level(self.base[i], gens, _orbit_transversal(self.base[i], gens, self.degree))

    def sift(self, g: Perm, start: int = 0) -> Tuple[Perm, int]:
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            y = g(lv.point)
            if y not in lv.transversal:
                return g, i
            g = lv.transversal[y].inverse() * g
        return g, len(self.levels)

    def _run(self) -> None:
        i = len(self.base) - 1
        while i >= 0:
            self._compute_level(i)
            lv = self.levels[i]
            restart = None
            for x, ux in list(lv.transversal.items()):
                for s in lv.gens:
                    h = lv.transversal[s(x)].inverse() * s * ux
                    residue, j = self.sift(h, i + 1)
                    if residue.is_identity:
                        continue
                    self.strong.append(residue)
                    if j == len(self.base):
                        self.base.append(residue.first_moved())
                        self.levels.append(None)
                    restart = j
                    break
                if restart is not None:
                    break
            if restart is None:
                i -= 1
            else:
                for k in range(i + 1, restart + 1):
                    self._compute_level(k)
                i = restart

    def order(self) -> int:
        n = 1
        for lv in self.levels:
            n *= len(lv.transversal)
        return n

    def contains(self, g: Perm) -> bool:
        residue, _ = self.sift(g)
        return residue.is_identity


class PermGroup:
    """A permutation group on ``{0, ..., degree-1}`` given by generators.

    The stabilizer chain is computed eagerly, so instances are read-only
    after construction.
    """

    def __init__(self, degree: int, gens: Iterable[Perm] = ()):
        gens = tuple(gens)
        for g in gens:
            if g.degree != degree:
                raise ValidationError(f"generator {g} has degree {g.degree}, expected {degree}")
        self.degree = degree
        self.gens = tuple(dict.fromkeys(g for g in gens if not g.is_identity))
        self._chain = _Chain(degree, self.gens)
        self._stabilizers: Dict[int, "PermGroup"] = {}

    @classmethod
    def parse(cls, degree: int, gens: Iterable[str]) -> "PermGroup":
        return cls(degree, [Perm.parse(s, degree) for s in gens])

    @classmethod
    def symmetric(cls, degree: int) -> "PermGroup":
        gens = []
        if degree >= 2:
            gens.append(Perm.from_cycles([(0, 1)], degree))
        if degree >= 3:
            gens.append(Perm.from_cycles([tuple(range(degree))], degree))
        return cls(degree, gens)

    @classmethod
    def cyclic(cls, degree: int) -> "PermGroup":
        if degree < 2:
            return cls(degree)
        return cls(degree, [Perm.from_cycles([tuple(range(degree))], degree)])

    @classmethod
    def dihedral(cls, degree: int) -> "PermGroup":
        if degree < 3:
            return cls.symmetric(degree)
        rot = Perm.from_cycles([tuple(range(degree))], degree)
        refl = Perm(tuple((-i) % degree for i in range(degree)))
        return cls(degree, [rot, refl])

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls(degree)

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.gens) or "()"
        return f"PermGroup({self.degree}, [{gens}])"

    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def order(self) -> int:
        return self._chain.order()

    def __contains__(self, g: Perm) -> bool:
        return g.degree == self.degree and self._chain.contains(g)

    contains = __contains__

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return all(g in other for g in self.gens)

    def same_group(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and self.is_subgroup_of(other) and other.is_subgroup_of(self)

    @property
    def is_trivial(self) -> bool:
        return not self.gens

    def _check_point(self, point: int) -> None:
        if not 0 <= point < self.degree:
            raise ValidationError(f"point {point} outside domain of degree {self.degree}")

    def orbit_transversal(self, point: int) -> Dict[int, Perm]:
        """Map each orbit point ``y`` to a group element sending ``point`` to ``y``."""
        self._check_point(point)
        return _orbit_transversal(point, self.gens, self.degree)

    def orbit(self, point: int) -> List[int]:
        return sorted(self.orbit_transversal(point))

    def orbits(self) -> List[List[int]]:
        seen = set()
        out = []
        for x in range(self.degree):
            if x not in seen:
                orb = self.orbit(x)
                seen.update(orb)
                out.append(orb)
        return out

    def is_transitive(self, points: Optional[Iterable[int]] = None) -> bool:
        pts = set(range(self.degree)) if points is None else set(points)
        if not pts:
            return True
        return set(self.orbit(min(pts))) == pts

    def pointwise_stabilizer(self, points: Iterable[int]) -> "PermGroup":
        points = sorted(set(points))
        for x in points:
            self._check_point(x)
        if not points:
            return self
        chain = _Chain(self.degree, self.gens, base_prefix=points)
        gens = [g for g in chain.strong if all(g(x) == x for x in points)]
        return PermGroup(self.degree, _reduce_generators(self.degree, gens))

    def stabilizer(self, point: int) -> "PermGroup":
        """Stabilizer of one point; its index equals the orbit length."""
        if point not in self._stabilizers:
            self._stabilizers[point] = self.pointwise_stabilizer([point])
        return self._stabilizers[point]

    def setwise_stabilizer(self, points: Iterable[int]) -> "PermGroup":
        target = frozenset(points)
        for x in target:
            self._check_point(x)
        if not target or len(target) == self.degree:
            return self
        return self.action_stabilizer(target, lambda g, s: frozenset(g(x) for x in s))

    def setwise_and_pointwise_stabilizer(self, points: Iterable[int]) -> Tuple["PermGroup", "PermGroup"]:
        points = list(points)
        return self.setwise_stabilizer(points), self.pointwise_stabilizer(points)

    def action_stabilizer(self, obj, act) -> "PermGroup":
        """Stabilizer of ``obj`` under an arbitrary action ``act(g, obj)``.

        Orbit with transversal, then Schreier generators filtered by sifting so
        that only generators enlarging the group are kept.
        """
        trans = {obj: self.identity()}
        queue = [obj]
        for x in queue:
            for g in self.gens:
                y = act(g, x)
                if y not in trans:
                    trans[y] = g * trans[x]
                    queue.append(y)
        schreier = []
        for x in queue:
            for g in self.gens:
                h = trans[act(g, x)].inverse() * g * trans[x]
                if not h.is_identity:
                    schreier.append(h)
        return PermGroup(self.degree, _reduce_generators(self.degree, schreier))

    def element_mapping(self, mapping: Dict[int, int]) -> Optional[Perm]:
        """Some element ``g`` with ``g(x) == mapping[x]`` for all keys, or None."""
        if not mapping:
            return self.identity()
        items = sorted(mapping.items())
        x, y = items[0]
        trans = self.orbit_transversal(x)
        if y not in trans:
            return None
        t = trans[y]
        tinv = t.inverse()
        rest = {a: tinv(b) for a, b in items[1:]}
        k = self.stabilizer(x).element_mapping(rest)
        return None if k is None else t * k

    def induced_action(self, points: Iterable[int]) -> "InducedAction":
        """Action on an invariant set, relabelled to ``0..len(points)-1``."""
        pts = sorted(set(points))
        index = {x: i for i, x in enumerate(pts)}
        for g in self.gens:
            for x in pts:
                if g(x) not in index:
                    raise ValidationError(f"set is not invariant: {g} maps {x + 1} to {g(x) + 1}")
        images = [Perm(tuple(index[g(x)] for x in pts)) for g in self.gens]
        return InducedAction(
            points=tuple(pts),
            image=PermGroup(len(pts), images),
            kernel=self.pointwise_stabilizer(pts),
        )

    def restrict(self, g: Perm, points: Sequence[int]) -> Perm:
        index = {x: i for i, x in enumerate(points)}
        return Perm(tuple(index[g(x)] for x in points))

    def elements(self) -> Iterator[Perm]:
        """Enumerate all elements via the stabilizer chain (deterministic order)."""
        levels = self._chain.levels

        def rec(i: int, acc: Perm) -> Iterator[Perm]:
            if i == len(levels):
                yield acc
                return
            for u in levels[i].transversal.values():
                yield from rec(i + 1, acc * u)

        yield from rec(0, self.identity())

    def conjugate(self, g: Perm, by: Perm) -> Perm:
        return by * g * by.inverse()

    def is_normal_in(self, other: "PermGroup") -> Tuple[bool, Optional[Tuple[Perm, Perm]]]:
        """Normality test by conjugating generators; returns a witness pair on failure."""
        for n in self.gens:
            for g in other.gens:
                c = g * n * g.inverse()
                if c not in self:
                    return False, (n, g)
        return True, None

    def random_element(self, rng) -> Perm:
        acc = self.identity()
        for lv in self._chain.levels:
            acc = acc * rng.choice(list(lv.transversal.values()))
        return acc


@dataclass(frozen=True)
class InducedAction:
    points: Tuple[int, ...]
    image: PermGroup = field(compare=False)
    kernel: PermGroup = field(compare=False)


def _reduce_generators(degree: int, gens: Iterable[Perm]) -> List[Perm]:
    """Keep a generator only if it is not already in the group of those kept."""
    kept: List[Perm] = []
    chain = _Chain(degree, [])
    for g in dict.fromkeys(gens):
        if g.is_identity or chain.contains(g):
            continue
        kept.append(g)
        chain = _Chain(degree, kept)
    return kept


def parse_perm_list(texts: Iterable[str], degree: int) -> List[Perm]:
    return [Perm.parse(t, degree) for t in texts]
