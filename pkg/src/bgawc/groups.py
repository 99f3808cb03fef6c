"""Finite permutation groups with fully materialized element sets.

Everything is desk-scale: groups are held as explicit sets of permutations
behind an order guard (default 360), with hash-based lookup and breadth-first
generator words for every element.  No stabilizer chains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce

from .errors import AmbientMismatch, GuardExceeded, NotNormal
from .gf import is_prime

DEFAULT_ORDER_GUARD = 360


class Perm:
    """Permutation of {0..degree-1}, stored as a tuple of images."""

    __slots__ = ("images", "_hash")

    def __init__(self, images):
        self.images = tuple(images)
        self._hash = hash(self.images)

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, cycles, degree: int) -> "Perm":
        images = list(range(degree))
        for cyc in cycles:
            for i, a in enumerate(cyc):
                images[a] = cyc[(i + 1) % len(cyc)]
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: "Perm") -> "Perm":
        # (a*b)(x) = a(b(x)): apply b first
        a, b = self.images, other.images
        return Perm(a[b[x]] for x in range(len(a)))

    def __call__(self, x: int) -> int:
        return self.images[x]

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, img in enumerate(self.images):
            inv[img] = i
        return Perm(inv)

    def conj(self, g: "Perm") -> "Perm":
        """g * self * g^-1."""
        return g * self * g.inverse()

    def is_identity(self) -> bool:
        return all(i == img for i, img in enumerate(self.images))

    def order(self) -> int:
        return reduce(math.lcm, (len(c) for c in self.cycles()), 1)

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(len(self.images)):
            if start in seen or self.images[start] == start:
                seen.add(start)
                continue
            cyc = [start]
            seen.add(start)
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.images < other.images

    def __repr__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cyc)


class PermGroup:
    """Permutation group from generators, with lazily materialized element set."""

    def __init__(self, degree: int, generators, name: str | None = None,
                 order_guard: int = DEFAULT_ORDER_GUARD):
        self.degree = degree
        self.generators = tuple(g if isinstance(g, Perm) else Perm(g) for g in generators)
        for g in self.generators:
            if g.degree != degree:
                raise ValueError("generator degree mismatch")
        self.name = name or f"group(deg {degree})"
        self.order_guard = order_guard
        self._elements_list: list[Perm] | None = None
        self._index: dict[Perm, int] | None = None
        self._bfs_parent: list[tuple[int, int] | None] | None = None
        self._inverse_cache: dict[Perm, Perm] = {}

    # -- materialization --

    def materialize(self) -> frozenset[Perm]:
        """Full element set by closure from the generators (cached)."""
        if self._elements_list is None:
            ident = Perm.identity(self.degree)
            elements = [ident]
            index = {ident: 0}
            parent: list[tuple[int, int] | None] = [None]
            head = 0
            while head < len(elements):
                cur = elements[head]
                for gi, g in enumerate(self.generators):
                    nxt = g * cur
                    if nxt not in index:
                        if len(elements) >= self.order_guard:
                            raise GuardExceeded(
                                f"group order exceeds guard {self.order_guard}")
                        index[nxt] = len(elements)
                        elements.append(nxt)
                        parent.append((gi, head))
                head += 1
            self._elements_list = elements
            self._index = index
            self._bfs_parent = parent
        return frozenset(self._elements_list)

    @property
    def elements(self) -> list[Perm]:
        """Elements in deterministic BFS discovery order."""
        self.materialize()
        return self._elements_list

    @property
    def order(self) -> int:
        return len(self.elements)

    def element_index(self, g: Perm) -> int:
        self.materialize()
        return self._index[g]

    def __contains__(self, g: Perm) -> bool:
        self.materialize()
        return g in self._index

    def bfs_word(self, g: Perm) -> list[int]:
        """Generator indices w with g = gens[w[0]] * gens[w[1]] * ... (left to right)."""
        self.materialize()
        word = []
        i = self._index[g]
        while self._bfs_parent[i] is not None:
            gi, pi = self._bfs_parent[i]
            word.append(gi)
            i = pi
        return word

    def bfs_parents(self) -> list[tuple[int, int] | None]:
        self.materialize()
        return self._bfs_parent

    def inv(self, g: Perm) -> Perm:
        cached = self._inverse_cache.get(g)
        if cached is None:
            cached = g.inverse()
            self._inverse_cache[g] = cached
        return cached

    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def exponent(self) -> int:
        return reduce(math.lcm, (g.order() for g in self.elements), 1)

    def canonical_key(self) -> tuple:
        return tuple(sorted(g.images for g in self.elements))

    def __repr__(self):
        return f"PermGroup({self.name})"


class Subgroup:
    """Subgroup of an ambient PermGroup, held as an explicit element set."""

    def __init__(self, ambient: PermGroup, elements):
        self.ambient = ambient
        self.elements = frozenset(elements)
        ident = ambient.identity()
        if ident not in self.elements:
            raise ValueError("subgroup must contain the identity")
        if ambient.order % len(self.elements) != 0:
            raise ValueError("Lagrange violation: subgroup size does not divide group order")
        self._gens: tuple[Perm, ...] | None = None
        self._sorted: tuple[Perm, ...] | None = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def sorted_elements(self) -> tuple[Perm, ...]:
        if self._sorted is None:
            self._sorted = tuple(sorted(self.elements))
        return self._sorted

    def canonical_key(self) -> tuple:
        return tuple(g.images for g in self.sorted_elements())

    def generating_set(self) -> tuple[Perm, ...]:
        """Small deterministic generating set by greedy closure."""
        if self._gens is None:
            gens: list[Perm] = []
            closed = {self.ambient.identity()}
            for cand in self.sorted_elements():
                if cand in closed:
                    continue
                gens.append(cand)
                closed = _closure(closed | {cand})
                if len(closed) == self.order:
                    break
            self._gens = tuple(gens)
        return self._gens

    def as_group(self, name: str | None = None) -> PermGroup:
        g = PermGroup(self.ambient.degree, self.generating_set() or (),
                      name=name, order_guard=max(self.ambient.order_guard, self.order))
        g.materialize()
        assert g.order == self.order
        return g

    def conjugate(self, g: Perm) -> "Subgroup":
        ginv = g.inverse()
        return Subgroup(self.ambient, frozenset(g * h * ginv for h in self.elements))

    def is_normal_in(self, other: "Subgroup") -> bool:
        return all(g * h * g.inverse() in self.elements
                   for g in other.generating_set() for h in self.generating_set())

    def __contains__(self, g: Perm) -> bool:
        return g in self.elements

    def __le__(self, other: "Subgroup") -> bool:
        return self.elements <= other.elements

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"Subgroup(order {self.order} of {self.ambient.name})"


def _closure(seed: set[Perm]) -> set[Perm]:
    elements = set(seed)
    frontier = list(seed)
    gens = list(seed)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = a * g
                if c not in elements:
                    elements.add(c)
                    nxt.append(c)
        frontier = nxt
    return elements


def closure_of(ambient: PermGroup, perms) -> Subgroup:
    seed = set(perms) | {ambient.identity()}
    return Subgroup(ambient, _closure(seed))


def whole_subgroup(G: PermGroup) -> Subgroup:
    return Subgroup(G, G.elements)


def trivial_subgroup(G: PermGroup) -> Subgroup:
    return Subgroup(G, [G.identity()])


@dataclass(frozen=True)
class ConjClass:
    """Conjugacy class annotated with the active prime's defect v_p(|C_G(x)|)."""

    representative: Perm
    members: frozenset[Perm]
    size: int
    element_order: int
    p_defect: int

    def is_p_regular(self, p: int) -> bool:
        return self.element_order % p != 0


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def conjugacy_classes(G: PermGroup, p: int) -> list[ConjClass]:
    """Conjugation-orbit partition, sorted by (element order, size, minimal representative)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    seen: set[Perm] = set()
    raw: list[ConjClass] = []
    vpg = _vp(G.order, p)
    gen_pairs = [(s, G.inv(s)) for s in G.generators]
    for g in G.elements:
        if g in seen:
            continue
        orbit = {g}
        frontier = [g]
        while frontier:
            nxt = []
            for x in frontier:
                for s, si in gen_pairs:
                    y = s * x * si
                    if y not in orbit:
                        orbit.add(y)
                        nxt.append(y)
            frontier = nxt
        seen |= orbit
        rep = min(orbit)
        raw.append(ConjClass(rep, frozenset(orbit), len(orbit), rep.order(),
                             vpg - _vp(len(orbit), p)))
    raw.sort(key=lambda c: (c.element_order, c.size, c.representative.images))
    return raw


def centralizer(G: PermGroup, g) -> Subgroup:
    if isinstance(g, Perm):
        targets = [g]
    else:
        targets = list(g.generating_set() if isinstance(g, Subgroup) else g)
    for t in targets:
        if t not in G:
            raise AmbientMismatch("element not in the group")
    return Subgroup(G, [x for x in G.elements
                        if all(x * t == t * x for t in targets)])


def normalizer(G: PermGroup, H: Subgroup) -> Subgroup:
    if H.ambient is not G and not all(h in G for h in H.elements):
        raise AmbientMismatch("subgroup not inside the group")
    gens = H.generating_set()
    members = []
    for x in G.elements:
        xi = G.inv(x)
        if all(x * h * xi in H.elements for h in gens):
            members.append(x)
    return Subgroup(G, members)


def sylow(G: PermGroup, p: int) -> Subgroup:
    """A Sylow p-subgroup by iterative normalizing p-element extension."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    target = p ** _vp(G.order, p)
    current = trivial_subgroup(G)
    while current.order < target:
        N = normalizer(G, current)
        extended = None
        for y in sorted(N.elements):
            op = p ** _vp(y.order(), p)
            if op == 1:
                continue
            yp = _power(y, y.order() // op)  # the p-part of y, a p-element of N
            if yp in current.elements:
                continue
            cand = closure_of(G, set(current.elements) | {yp})
            if _is_p_power(cand.order, p):
                extended = cand
                break
        assert extended is not None, "Sylow extension failed"
        current = extended
    assert current.order == target
    return current


def _power(g: Perm, k: int) -> Perm:
    out = Perm.identity(g.degree)
    base = g
    while k:
        if k & 1:
            out = out * base
        base = base * base
        k >>= 1
    return out


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def quotient_group(N: Subgroup, P: Subgroup) -> tuple[PermGroup, dict[Perm, Perm]]:
    """Permutation group on the cosets N/P plus the element-level projection map.

    The coset action is faithful because P is normal in N.
    """
    if not P.elements <= N.elements:
        raise AmbientMismatch("P is not contained in N")
    if not P.is_normal_in(N):
        raise NotNormal("P is not normal in N")
    # cosets keyed by frozenset, ordered by canonical (minimal-element) key
    coset_of: dict[Perm, int] = {}
    cosets: list[frozenset[Perm]] = []
    for g in sorted(N.elements):
        if g in coset_of:
            continue
        cs = frozenset(g * h for h in P.elements)
        idx = len(cosets)
        cosets.append(cs)
        for x in cs:
            coset_of[x] = idx
    nq = len(cosets)
    reps = [min(cs) for cs in cosets]
    projection: dict[Perm, Perm] = {}
    for g in N.elements:
        images = [coset_of[g * reps[j]] for j in range(nq)]
        projection[g] = Perm(images)
    gens = N.generating_set()
    Q = PermGroup(nq, [projection[g] for g in gens] or [Perm.identity(nq)],
                  name=f"{N.ambient.name}-quotient(order {N.order // P.order})",
                  order_guard=max(N.ambient.order_guard, nq + 1))
    Q.materialize()
    assert Q.order * P.order == N.order
    return Q, projection


def p_regular_classes(classes: list[ConjClass], p: int) -> list[int]:
    return [i for i, c in enumerate(classes) if c.is_p_regular(p)]


def p_power_class_map(G: PermGroup, p: int, m: int,
                      classes: list[ConjClass] | None = None) -> dict[int, int]:
    """Map on p-regular class indices sending the class of g to the class of g^(p^m)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if classes is None:
        classes = conjugacy_classes(G, p)
    member_class: dict[Perm, int] = {}
    for i, c in enumerate(classes):
        for g in c.members:
            member_class[g] = i
    e = p**m
    out: dict[int, int] = {}
    for i in p_regular_classes(classes, p):
        out[i] = member_class[_power(classes[i].representative, e)]
    return out


def exp_p_prime(G: PermGroup, p: int) -> int:
    """p'-part of the exponent of G."""
    e = G.exponent()
    while e % p == 0:
        e //= p
    return e
