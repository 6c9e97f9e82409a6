"""Regular trees with letter-labelled arcs, universal groups and portraits.

Every vertex of a d-regular tree sees its d arcs labelled by the same d
letters.  A vertex is addressed by the reduced letter string of the geodesic
from the base vertex ``()``.  When a vertex is entered through letter ``L``,
the arc back is labelled ``model.reserved(L)``; stepping along that letter
pops the last entry instead of appending.

Two labelling schemes are provided:

* :class:`UFModel` -- letters are colours ``1..d`` with ``reserved(c) == c``
  (a legal colouring); the acting group is the universal group ``U(F)``.
* :class:`OrientedTreeModel` -- letters ``F1..Fp`` (out-arcs) and ``B1..Bq``
  (in-arcs); the acting group is the automorphism group of the oriented tree.

Both groups have independent local actions, so stabilizer indices factor
into orbit sizes of the local group at single vertices.  All counts below
rely on that property.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import ceil, gcd
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from .errors import DepthExceeded, HypothesisUnmet, Inconclusive, SpecError, ValidationError
from .graph import Graph
from .perm import Perm, PermGroup

Key = Tuple

DEFAULT_DEPTH = 12


class TreeModel:
    """Common machinery; subclasses set ``letters``, ``local_group`` and ``reserved``."""

    letters: Tuple
    local_group: PermGroup
    depth: int

    def reserved(self, letter) -> Hashable:
        raise NotImplementedError

    # -- keys ----------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.letters)

    def letter_index(self, letter) -> int:
        try:
            return self._index[letter]
        except KeyError:
            raise ValidationError(f"unknown letter {letter!r}") from None

    def step(self, key: Key, letter) -> Key:
        self.letter_index(letter)
        if key and letter == self.reserved(key[-1]):
            return key[:-1]
        return key + (letter,)

    def walk(self, start: Key, letters: Iterable) -> Key:
        key = start
        for L in letters:
            key = self.step(key, L)
        return key

    def is_key(self, key) -> bool:
        if not isinstance(key, tuple) or any(L not in self._index for L in key):
            return False
        return all(b != self.reserved(a) for a, b in zip(key, key[1:]))

    def check_key(self, key) -> Key:
        if not self.is_key(key):
            raise ValidationError(f"{key!r} is not a reduced vertex key")
        return key

    def neighbours(self, key: Key) -> List[Key]:
        return [self.step(key, L) for L in self.letters]

    def letter_to(self, u: Key, v: Key):
        """The letter labelling the arc ``u -> v`` at ``u``."""
        if len(v) == len(u) + 1 and v[:-1] == u:
            return v[-1]
        if len(u) == len(v) + 1 and u[:-1] == v:
            return self.reserved(u[-1])
        raise ValidationError(f"{u!r} and {v!r} are not adjacent")

    @staticmethod
    def distance(x: Key, y: Key) -> int:
        k = 0
        while k < len(x) and k < len(y) and x[k] == y[k]:
            k += 1
        return len(x) + len(y) - 2 * k

    @staticmethod
    def geodesic(x: Key, y: Key) -> List[Key]:
        k = 0
        while k < len(x) and k < len(y) and x[k] == y[k]:
            k += 1
        up = [x[:i] for i in range(len(x), k - 1, -1)]
        down = [y[:i] for i in range(k + 1, len(y) + 1)]
        return up + down

    def ball_keys(self, center: Key = (), r: int = 0) -> List[Key]:
        """Vertices within distance ``r`` of ``center`` in BFS order."""
        seen = {center: 0}
        queue = deque([center])
        while queue:
            x = queue.popleft()
            if seen[x] == r:
                continue
            for y in self.neighbours(x):
                if y not in seen:
                    seen[y] = seen[x] + 1
                    queue.append(y)
        return list(seen)

    def ball_graph(self, r: int, center: Key = ()) -> Graph:
        keys = self.ball_keys(center, r)
        inside = set(keys)
        edges = []
        for x in keys:
            for y in self.neighbours(x):
                if y in inside and (len(y), y) > (len(x), x):
                    edges.append((x, y))
        return Graph.build(keys, edges)

    def hull(self, keys: Iterable[Key]) -> List[Key]:
        keys = list(keys)
        out = dict.fromkeys(keys)
        for k in keys[1:]:
            for v in self.geodesic(keys[0], k):
                out.setdefault(v)
        return list(out)

    # -- local group helpers -------------------------------------------------

    def _fixing(self, fixed: frozenset) -> PermGroup:
        cache = self.__dict__.setdefault("_stab_cache", {})
        if fixed not in cache:
            cache[fixed] = self.local_group.pointwise_stabilizer([self.letter_index(L) for L in fixed])
        return cache[fixed]

    def local_orbit_size(self, letter, fixed: Iterable = ()) -> int:
        """Size of the orbit of ``letter`` under the local stabilizer of ``fixed`` letters."""
        return len(self._fixing(frozenset(fixed)).orbit(self.letter_index(letter)))

    def local_orbit(self, letter, fixed: Iterable = ()) -> List:
        return [self.letters[i] for i in self._fixing(frozenset(fixed)).orbit(self.letter_index(letter))]

    # -- stabilizer indices ----------------------------------------------------

    def fixator_index(self, X: Iterable[Key], Y: Iterable[Key]) -> int:
        """``[fix(X) : fix(Y)]`` for finite subtrees ``X`` inside ``Y``.

        The vertices of ``Y`` outside ``X`` are added one at a time, breadth
        first from ``X``; each contributes the orbit size of its letter under
        the local stabilizer of the letters already fixed at its neighbour.
        """
        X = list(dict.fromkeys(X))
        Yset = set(Y)
        if not X:
            raise ValidationError("the fixed set must be non-empty")
        if not set(X) <= Yset:
            raise ValidationError("X is not contained in Y")
        seen = set(X)
        queue = deque(X)
        index = 1
        while queue:
            u = queue.popleft()
            for v in self.neighbours(u):
                if v in Yset and v not in seen:
                    fixed = [self.letter_to(u, w) for w in self.neighbours(u) if w in seen]
                    index *= self.local_orbit_size(self.letter_to(u, v), fixed)
                    seen.add(v)
                    queue.append(v)
        if seen != Yset:
            raise ValidationError("Y is not a connected extension of X")
        return index

    def stabilizer_orbit_size(self, letters: Sequence) -> int:
        """Size of the orbit of ``walk((), letters)`` under the base stabilizer.

        Equals the orbit size of the first letter under the local group times,
        for each later letter, its orbit size under the stabilizer of the
        letter leading back.
        """
        letters = tuple(letters)
        self.check_key(letters)
        size = 1
        prev = None
        for L in letters:
            size *= self.local_orbit_size(L, () if prev is None else (self.reserved(prev),))
            prev = L
        return size

    def truncated_stabilizer_order(self, n: int) -> int:
        """Order of the base stabilizer restricted to the radius-n ball."""
        self._check_depth(n)
        return self.fixator_index([()], self.ball_keys((), n))

    def ball_index(self, n: int) -> int:
        """``[U_n : U_{n+1}]`` where ``U_n`` fixes the radius-n ball pointwise."""
        self._check_depth(n + 1)
        return self.fixator_index(self.ball_keys((), n), self.ball_keys((), n + 1))

    def _check_depth(self, n: int, checked=None) -> None:
        if n > self.depth:
            raise DepthExceeded(f"radius {n} exceeds model depth {self.depth}", checked)

    # -- one-vertex generators ---------------------------------------------------

    def vertex_generators(self, v: Key) -> List[Perm]:
        """Generators of the local stabilizer of the letter leading back to the base."""
        if not v:
            return list(self.local_group.gens)
        back = self.letter_index(self.reserved(v[-1]))
        return list(self.local_group.stabilizer(back).gens)

    def apply_vertex_generator(self, v: Key, f: Perm, key: Key) -> Key:
        raise NotImplementedError

    def generator_orbit(self, start: Key, radius: int) -> set:
        """Orbit of ``start`` under the one-vertex generators at vertices of the
        radius-``radius`` ball; these all fix the base vertex."""
        gens = [(v, f) for v in self.ball_keys((), radius) for f in self.vertex_generators(v)]
        orbit = {start}
        queue = [start]
        for x in queue:
            for v, f in gens:
                y = self.apply_vertex_generator(v, f, x)
                if y not in orbit:
                    orbit.add(y)
                    queue.append(y)
        return orbit


class UFModel(TreeModel):
    """``U(F)`` on the d-regular tree with colours ``1..d``."""

    def __init__(self, F: PermGroup, depth: int = DEFAULT_DEPTH):
        if F.degree < 1:
            raise ValidationError("degree must be at least 1")
        self.local_group = F
        self.letters = tuple(range(1, F.degree + 1))
        self._index = {c: c - 1 for c in self.letters}
        self.depth = depth

    @classmethod
    def full(cls, d: int, depth: int = DEFAULT_DEPTH) -> "UFModel":
        return cls(PermGroup.symmetric(d), depth)

    def reserved(self, letter):
        return letter

    def __repr__(self):
        return f"UFModel(d={self.degree}, |F|={self.local_group.order()})"

    def rigid(self, f: Perm, key: Key) -> Key:
        return tuple(f(c - 1) + 1 for c in key)

    def apply_vertex_generator(self, v: Key, f: Perm, key: Key) -> Key:
        # acts by f on every colour below v; identity outside v's subtree
        if key[: len(v)] != v:
            return key
        return v + self.rigid(f, key[len(v):])


class OrientedTreeModel(TreeModel):
    """Automorphisms of the (p+q)-regular tree with out-valency p and in-valency q."""

    def __init__(self, p: int, q: int, depth: int = DEFAULT_DEPTH):
        if p < 1 or q < 1:
            raise ValidationError("in- and out-valency must be positive")
        self.p, self.q = p, q
        self.letters = tuple([f"F{i}" for i in range(1, p + 1)] + [f"B{j}" for j in range(1, q + 1)])
        self._index = {L: i for i, L in enumerate(self.letters)}
        gens = []
        for lo, n in ((0, p), (p, q)):
            if n >= 2:
                gens.append(Perm.from_cycles([(lo, lo + 1)], p + q))
            if n >= 3:
                gens.append(Perm.from_cycles([tuple(range(lo, lo + n))], p + q))
        self.local_group = PermGroup(p + q, gens)
        self.depth = depth

    def reserved(self, letter):
        self.letter_index(letter)
        return "B1" if letter.startswith("F") else "F1"

    def __repr__(self):
        return f"OrientedTreeModel(p={self.p}, q={self.q})"

    @staticmethod
    def is_forward(letter) -> bool:
        return letter.startswith("F")

    def apply_vertex_generator(self, v: Key, f: Perm, key: Key) -> Key:
        # permutes the letter right after v, keeping the rest of the string
        if key[: len(v)] != v or len(key) == len(v):
            return key
        L = key[len(v)]
        return v + (self.letters[f(self.letter_index(L))],) + key[len(v) + 1:]

    def oriented_paths(self, n: int) -> List[Key]:
        """Endpoints of the oriented paths of length ``n`` starting at the base."""
        out = [()]
        for _ in range(n):
            out = [k + (L,) for k in out for L in self.letters if self.is_forward(L)]
        return out


# -- coloured trees ----------------------------------------------------------------


@dataclass(frozen=True)
class ColoredTree:
    degree: int
    depth: int
    graph: Graph = field(compare=False)
    coloring: Dict = field(compare=False)


def make_colored_tree(d: int, R: int) -> ColoredTree:
    """Radius-R ball of the d-regular tree with its canonical legal colouring."""
    if d < 1 or R < 0:
        raise ValidationError("need d >= 1 and R >= 0")
    model = UFModel.full(d, depth=max(R, DEFAULT_DEPTH))
    g = model.ball_graph(R)
    coloring = {(a, b): model.letter_to(a, b) for a, b in g.arcs()}
    tree = ColoredTree(d, R, g, coloring)
    validate_coloring(g, coloring, d)
    return tree


def validate_coloring(g: Graph, coloring: Dict, d: int) -> None:
    """Raise unless the colouring is symmetric and injective at every vertex
    (and bijective onto ``1..d`` at vertices of full valency)."""
    for a, b in g.arcs():
        if (a, b) not in coloring:
            raise ValidationError(f"arc {(a, b)!r} has no colour")
        if coloring[(a, b)] != coloring[(b, a)]:
            raise ValidationError(f"arc {(a, b)!r} and its reverse differ in colour")
    for v in g.vertices:
        cols = [coloring[(v, w)] for w in g.neighbours(v)]
        if len(set(cols)) != len(cols):
            raise ValidationError(f"repeated colour at vertex {v!r}")
        if any(c not in range(1, d + 1) for c in cols):
            raise ValidationError(f"colour outside 1..{d} at vertex {v!r}")
        if len(cols) == d and set(cols) != set(range(1, d + 1)):
            raise ValidationError(f"colours at {v!r} are not 1..{d}")


# -- portraits ---------------------------------------------------------------------


@dataclass(frozen=True)
class TreePortrait:
    """A tree automorphism known on the radius-``depth`` ball around the base."""

    model: TreeModel = field(compare=False)
    depth: int
    mapping: Dict[Key, Key] = field(compare=False)

    def __post_init__(self):
        if self.depth < 0:
            raise ValidationError("portrait depth must be non-negative")

    def __call__(self, key: Key) -> Key:
        try:
            return self.mapping[key]
        except KeyError:
            raise ValidationError(f"{key!r} outside the portrait domain") from None

    @property
    def displacement(self) -> int:
        """Distance moved by the base vertex."""
        return len(self.mapping[()])

    def domain(self) -> List[Key]:
        return list(self.mapping)

    @classmethod
    def identity(cls, model: TreeModel, depth: int) -> "TreePortrait":
        return cls(model, depth, {k: k for k in model.ball_keys((), depth)})

    @classmethod
    def from_function(cls, model: TreeModel, depth: int, fn) -> "TreePortrait":
        return cls(model, depth, {k: fn(k) for k in model.ball_keys((), depth)})

    def check(self) -> None:
        """Injective, adjacency preserving, and images are reduced keys."""
        m = self.model
        if set(self.mapping) != set(m.ball_keys((), self.depth)):
            raise ValidationError("portrait domain is not the full ball")
        images = list(self.mapping.values())
        if len(set(images)) != len(images):
            raise ValidationError("portrait is not injective")
        for k, v in self.mapping.items():
            m.check_key(v)
            if k and m.distance(self.mapping[k[:-1]], v) != 1:
                raise ValidationError(f"arc at {k!r} not sent to an arc")

    def local_permutation(self, key: Key) -> Perm:
        """Letter permutation induced at ``key`` (needs its neighbours in the domain)."""
        m = self.model
        if len(key) >= self.depth:
            raise DepthExceeded(f"{key!r} is too close to the portrait boundary", self.depth - 1)
        gk = self.mapping[key]
        images = []
        for L in m.letters:
            w = self.mapping[m.step(key, L)]
            images.append(m.letter_index(m.letter_to(gk, w)))
        return Perm(tuple(images))

    def in_local_group(self, F: Optional[PermGroup] = None) -> bool:
        """True iff every computable local permutation lies in ``F``.

        This is a necessary condition for membership in the universal group;
        it certifies nothing beyond the truncation depth.
        """
        F = self.model.local_group if F is None else F
        return all(self.local_permutation(k) in F for k in self.model.ball_keys((), self.depth - 1))

    def compose(self, inner: "TreePortrait") -> "TreePortrait":
        """``self`` after ``inner`` on the largest ball where both are known."""
        R = min(inner.depth, self.depth - inner.displacement)
        if R < 0:
            raise DepthExceeded("portraits have no common domain", None)
        keys = self.model.ball_keys((), R)
        return TreePortrait(self.model, R, {k: self.mapping[inner.mapping[k]] for k in keys})

    __mul__ = compose

    def inverse(self) -> "TreePortrait":
        R = self.depth - self.displacement
        if R < 0:
            raise DepthExceeded("inverse has an empty domain", None)
        back = {v: k for k, v in self.mapping.items()}
        return TreePortrait(self.model, R, {k: back[k] for k in self.model.ball_keys((), R)})

    def restrict(self, R: int) -> "TreePortrait":
        if R > self.depth:
            raise DepthExceeded("cannot extend a portrait", self.depth)
        return TreePortrait(self.model, R, {k: self.mapping[k] for k in self.model.ball_keys((), R)})

    def same_on_common_domain(self, other: "TreePortrait") -> bool:
        R = min(self.depth, other.depth)
        return all(self.mapping[k] == other.mapping[k] for k in self.model.ball_keys((), R))

    def to_text(self) -> str:
        lines = [f"depth {self.depth}"]
        for k, v in self.mapping.items():
            lines.append(f"{format_key(k)} -> {format_key(v)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, model: TreeModel, text: str) -> "TreePortrait":
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines or not lines[0].startswith("depth"):
            raise SpecError("portrait text must start with 'depth R'")
        try:
            depth = int(lines[0].split()[1])
        except (IndexError, ValueError):
            raise SpecError("bad depth line") from None
        mapping = {}
        for ln in lines[1:]:
            if "->" not in ln:
                raise SpecError(f"bad portrait line {ln!r}")
            a, b = (s.strip() for s in ln.split("->", 1))
            mapping[parse_key(a, model)] = parse_key(b, model)
        p = cls(model, depth, mapping)
        try:
            p.check()
        except ValidationError as exc:
            raise SpecError(str(exc)) from None
        return p


def format_key(key: Key) -> str:
    return ".".join(str(c) for c in key) if key else "-"


def parse_key(text: str, model: TreeModel) -> Key:
    if text == "-":
        return ()
    key = tuple(int(t) if t.isdigit() else t for t in text.split("."))
    if not model.is_key(key):
        raise SpecError(f"{text!r} is not a reduced vertex key")
    return key


def rigid_portrait(model: UFModel, f: Perm, depth: int) -> TreePortrait:
    """The automorphism fixing the base and applying ``f`` to every colour."""
    return TreePortrait.from_function(model, depth, lambda k: model.rigid(f, k))


def vertex_generator_portrait(model: TreeModel, v: Key, f: Perm, depth: int) -> TreePortrait:
    return TreePortrait.from_function(model, depth, lambda k: model.apply_vertex_generator(v, f, k))


# -- translations -------------------------------------------------------------------


@dataclass(frozen=True)
class Translation:
    """Element ``x -> walk(a, pi(x))`` translating along a periodic axis.

    ``word`` is one period of the axis read forward from the base;
    ``length`` is the translation length.
    """

    model: TreeModel = field(compare=False)
    word: Tuple
    length: int
    pi: Optional[Perm] = None

    def apply(self, key: Key) -> Key:
        m = self.model
        if self.pi is not None:
            key = m.rigid(self.pi, key)
        return m.walk(self.axis_point(self.length), key)

    def axis_point(self, n: int) -> Key:
        """Axis vertex at signed position ``n``; ``g^n`` sends the base there."""
        w = self.word
        if n >= 0:
            return tuple(w[i % len(w)] for i in range(n))
        back = self.backward_word()
        return tuple(back[i % len(back)] for i in range(-n))

    def backward_word(self) -> Tuple:
        m = self.model
        if isinstance(m, OrientedTreeModel):
            return (m.reserved(self.word[0]),)
        return tuple(reversed(self.word))

    def portrait(self, depth: int) -> TreePortrait:
        return TreePortrait.from_function(self.model, depth, self.apply)


def translation(model: TreeModel, word: Sequence, length: int) -> Translation:
    """Synthesize the translation of the given length along the periodic axis ``word``.

    For universal groups ``U(F)`` the element is left multiplication by the
    first ``length`` letters composed with a colour permutation ``pi`` in F
    satisfying ``pi(w_i) = w_{i+length}``.  For oriented trees only the
    forward axis ``F1 F1 ...`` is supported.
    """
    word = tuple(word)
    if length < 1:
        raise ValidationError("translation length must be positive")
    if isinstance(model, OrientedTreeModel):
        if word != ("F1",):
            raise SpecError("oriented models support only the axis word ['F1']")
        return Translation(model, word, length)
    if not isinstance(model, UFModel):
        raise SpecError("unsupported model")
    if not word or not model.is_key(word + word[:1]) or len(word) < 2:
        raise ValidationError("axis word must be cyclically reduced with at least two letters")
    k = len(word)
    mapping = {}
    for i in range(k):
        a, b = word[i] - 1, word[(i + length) % k] - 1
        if mapping.setdefault(a, b) != b:
            raise HypothesisUnmet(f"no colour permutation shifts the axis word by {length}")
    if len(set(mapping.values())) != len(mapping):
        raise HypothesisUnmet(f"no colour permutation shifts the axis word by {length}")
    pi = model.local_group.element_mapping(mapping)
    if pi is None:
        raise HypothesisUnmet("the required colour permutation is not in the local group")
    return Translation(model, word, length, pi)


# -- classification ---------------------------------------------------------------


@dataclass(frozen=True)
class Elliptic:
    fixed_vertex: Key
    kind: str = "elliptic"


@dataclass(frozen=True)
class Inversion:
    edge: Tuple[Key, Key]
    kind: str = "inversion"


@dataclass(frozen=True)
class Hyperbolic:
    length: int
    axis: Tuple[Key, ...]
    kind: str = "hyperbolic"


def classify_element(p: TreePortrait):
    """Elliptic, inversion or hyperbolic, decided from the minimal displacement.

    The minimum of the displacement function is attained within distance
    ``ceil(d0 / 2)`` of the base, where ``d0`` is the base displacement, so a
    portrait of depth at least ``ceil(d0 / 2) + 1`` suffices.
    """
    m = p.model
    d0 = p.displacement
    need = ceil(d0 / 2) + 1
    if p.depth < need:
        raise Inconclusive(f"portrait depth {p.depth} < {need} needed to certify the type")
    disp = {k: m.distance(k, v) for k, v in p.mapping.items()}
    best = min(disp.values())
    argmin = sorted((k for k, v in disp.items() if v == best), key=lambda k: (len(k), k))
    if best == 0:
        return Elliptic(argmin[0])
    if best == 1:
        for k in argmin:
            gk = p.mapping[k]
            if gk in p.mapping and p.mapping[gk] == k:
                return Inversion(tuple(sorted((k, gk), key=lambda x: (len(x), x))))
    return Hyperbolic(best, _order_as_path(m, argmin))


def _order_as_path(m: TreeModel, keys: List[Key]) -> Tuple[Key, ...]:
    keyset = set(keys)
    if len(keys) == 1:
        return tuple(keys)
    ends = [k for k in keys if sum(1 for w in m.neighbours(k) if w in keyset) <= 1]
    start = min(ends, key=lambda k: (len(k), k)) if ends else keys[0]
    path = [start]
    seen = {start}
    while True:
        nxt = [w for w in m.neighbours(path[-1]) if w in keyset and w not in seen]
        if not nxt:
            break
        path.append(nxt[0])
        seen.add(nxt[0])
    return tuple(path)


# -- Willis theory ----------------------------------------------------------------------


def index_power(model: TreeModel, g: Translation, n: int) -> int:
    """``[U : U n g^n U g^-n]`` for ``U`` the stabilizer of the base vertex."""
    if n < 0:
        raise ValidationError("n must be non-negative")
    if n * g.length > model.depth:
        raise DepthExceeded(f"n*length = {n * g.length} exceeds depth {model.depth}",
                            model.depth // g.length)
    return model.stabilizer_orbit_size(g.axis_point(n))


def subgroup_index(model: TreeModel, g: Translation, n: int, radius: Optional[int] = None) -> int:
    """Index for ``U`` the stabilizer of the base (``radius`` None) or the
    pointwise fixator of the radius-``radius`` ball."""
    if radius is None:
        return index_power(model, g, n)
    if n * g.length + radius > model.depth:
        raise DepthExceeded(f"n*length + radius exceeds depth {model.depth}",
                            max(0, (model.depth - radius) // g.length))
    X = model.ball_keys((), radius)
    far = model.ball_keys(g.axis_point(n), radius)
    return model.fixator_index(X, model.hull(X + far))


@dataclass(frozen=True)
class TidyResult:
    verified: bool
    n: int
    indices: Tuple[int, ...]

    def as_dict(self) -> dict:
        return {
            "status": "verified" if self.verified else "refuted",
            "n": self.n,
            "indices": [str(i) for i in self.indices],
        }


def is_tidy_up_to(model: TreeModel, g: Translation, n_max: int, radius: Optional[int] = None) -> TidyResult:
    """Check ``[U : U n g^n U g^-n] = [U : U n g U g^-1]^n`` for ``n = 1..n_max``.

    ``Verified`` is a bounded certificate only.  ``Refuted`` carries the first
    failing ``n``.
    """
    indices = []
    for n in range(1, n_max + 1):
        try:
            idx = subgroup_index(model, g, n, radius)
        except DepthExceeded as exc:
            raise DepthExceeded(f"depth exhausted before n={n}", n - 1) from exc
        indices.append(idx)
        if idx != indices[0] ** n:
            return TidyResult(False, n, tuple(indices))
    return TidyResult(True, n_max, tuple(indices))


@dataclass(frozen=True)
class ScaleResult:
    scale: int
    forward_orbit: int
    backward_orbit: int
    tidy: TidyResult


def scale_coprime(model: TreeModel, g: Translation, n_check: int = 5) -> ScaleResult:
    """Scale of a length-1 translation when the forward and backward orbit sizes
    of the base stabilizer are coprime; the base stabilizer is then tidy."""
    if g.length != 1:
        raise ValidationError("g must move the base vertex to a neighbour")
    m1 = model.stabilizer_orbit_size(g.axis_point(1))
    m2 = model.stabilizer_orbit_size(g.axis_point(-1))
    if gcd(m1, m2) != 1:
        raise HypothesisUnmet(f"orbit sizes {m1} and {m2} are not coprime")
    tidy = is_tidy_up_to(model, g, n_check)
    return ScaleResult(m1, m1, m2, tidy)


@dataclass(frozen=True)
class OrientedPathReport:
    n: int
    paths: int
    orbits: int
    descendants: int
    descendant_edges: int

    @property
    def transitive(self) -> bool:
        return self.orbits == 1

    @property
    def descendants_form_tree(self) -> bool:
        return self.descendant_edges == self.descendants - 1


def oriented_path_transitivity(model: OrientedTreeModel, n: int) -> OrientedPathReport:
    """Count stabilizer orbits on oriented paths of length ``n`` from the base and
    check that the descendants span a tree."""
    if gcd(model.p, model.q) != 1:
        raise HypothesisUnmet(f"in- and out-valencies {model.q}, {model.p} are not coprime")
    model._check_depth(n)
    ends = model.oriented_paths(n)
    remaining = set(ends)
    orbits = 0
    while remaining:
        x = min(remaining)
        remaining -= model.generator_orbit(x, max(n - 1, 0))
        orbits += 1
    desc = [k for m in range(n + 1) for k in model.oriented_paths(m)]
    dset = set(desc)
    edges = sum(1 for k in desc for w in model.neighbours(k) if w in dset) // 2
    return OrientedPathReport(n, len(ends), orbits, len(desc), edges)


def end_stabilizer(d: int, depth: int = DEFAULT_DEPTH) -> OrientedTreeModel:
    """Stabilizer of an end in ``Aut(T_d)``: each vertex has one arc towards the end."""
    return OrientedTreeModel(1, d - 1, depth)
