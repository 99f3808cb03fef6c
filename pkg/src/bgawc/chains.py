"""The p-subgroup poset and the two chain families with G-orbit representatives.

Chains are strictly ascending sequences of p-subgroups starting at the trivial
group; the normal family keeps only chains whose every term is normal in the
top term.  Orbit fusion uses canonical keys (sorted element lists per term),
so representatives are deterministic regardless of enumeration order.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache

from .errors import GuardExceeded
from .gf import is_prime
from .groups import (PermGroup, Perm, Subgroup, closure_of, normalizer, sylow,
                     trivial_subgroup, _vp)

DEFAULT_POSET_GUARD = 5000
DEFAULT_CHAIN_GUARD = 200000


class PSubgroupPoset:
    """All p-subgroups of the ambient group, with conjugation orbits."""

    def __init__(self, ambient: PermGroup, prime: int, subgroups: list[Subgroup]):
        self.ambient = ambient
        self.prime = prime
        self.subgroups = subgroups
        self.key_index = {H.canonical_key(): i for i, H in enumerate(subgroups)}
        self._orbit_reps: list[int] | None = None
        self._orbit_of: dict[int, int] | None = None
        self._conj_cache: dict[tuple[int, int], int] = {}

    def index_of(self, H: Subgroup) -> int:
        return self.key_index[H.canonical_key()]

    def conj_index(self, i: int, gi: int) -> int:
        """Index of the conjugate of subgroup i by generator gi of the ambient group."""
        got = self._conj_cache.get((i, gi))
        if got is None:
            g = self.ambient.generators[gi]
            got = self.key_index[self.subgroups[i].conjugate(g).canonical_key()]
            self._conj_cache[(i, gi)] = got
        return got

    def contains_pair(self, i: int, j: int) -> bool:
        """True when subgroup i is a proper subgroup of subgroup j."""
        a, b = self.subgroups[i], self.subgroups[j]
        return a.order < b.order and a.elements < b.elements

    def _compute_orbits(self):
        if self._orbit_reps is not None:
            return
        orbit_of: dict[int, int] = {}
        reps: list[int] = []
        for i in range(len(self.subgroups)):
            if i in orbit_of:
                continue
            orbit = {i}
            frontier = [i]
            while frontier:
                nxt = []
                for j in frontier:
                    for gi in range(len(self.ambient.generators)):
                        k = self.conj_index(j, gi)
                        if k not in orbit:
                            orbit.add(k)
                            nxt.append(k)
                frontier = nxt
            rep = min(orbit, key=lambda k: self.subgroups[k].canonical_key())
            reps.append(rep)
            for j in orbit:
                orbit_of[j] = rep
        reps.sort(key=lambda k: (self.subgroups[k].order, self.subgroups[k].canonical_key()))
        self._orbit_reps = reps
        self._orbit_of = orbit_of

    @property
    def orbit_reps(self) -> list[int]:
        self._compute_orbits()
        return self._orbit_reps

    def orbit_rep_of(self, i: int) -> int:
        self._compute_orbits()
        return self._orbit_of[i]

    @property
    def trivial_index(self) -> int:
        return self.key_index[trivial_subgroup(self.ambient).canonical_key()]


def enumerate_p_subgroups(G: PermGroup, p: int,
                          poset_guard: int = DEFAULT_POSET_GUARD) -> PSubgroupPoset:
    """All p-subgroups: subgroups of one Sylow by cyclic extension, closed under conjugation."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    G.materialize()
    S = sylow(G, p)
    # bottom-up cyclic extension inside the Sylow subgroup
    levels: list[list[Subgroup]] = [[trivial_subgroup(G)]]
    seen_keys = {levels[0][0].canonical_key()}
    order = 1
    while order < S.order:
        order *= p
        nxt: list[Subgroup] = []
        for H in levels[-1]:
            NH = [g for g in S.elements
                  if all(g * h * g.inverse() in H.elements for h in H.generating_set())]
            for y in sorted(NH):
                if y in H.elements:
                    continue
                cand = closure_of(G, set(H.elements) | {y})
                if cand.order != order:
                    continue
                key = cand.canonical_key()
                if key not in seen_keys:
                    seen_keys.add(key)
                    nxt.append(cand)
        levels.append(nxt)
    base = [H for lev in levels for H in lev]
    # close under G-conjugation
    all_subs: dict[tuple, Subgroup] = {H.canonical_key(): H for H in base}
    frontier = list(base)
    while frontier:
        nxt = []
        for H in frontier:
            for g in G.generators:
                Hg = H.conjugate(g)
                key = Hg.canonical_key()
                if key not in all_subs:
                    if len(all_subs) >= poset_guard:
                        raise GuardExceeded(f"p-subgroup poset exceeds guard {poset_guard}")
                    all_subs[key] = Hg
                    nxt.append(Hg)
        frontier = nxt
    subgroups = sorted(all_subs.values(), key=lambda H: (H.order, H.canonical_key()))
    return PSubgroupPoset(G, p, subgroups)


@dataclass(frozen=True)
class Chain:
    """A chain 1 = P_0 < P_1 < ... < P_n given by poset indices, with its stabilizer."""

    poset: PSubgroupPoset
    terms: tuple[int, ...]          # indices into poset.subgroups, ascending, terms[0] trivial
    normal_flag: bool
    stabilizer: Subgroup

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    @property
    def top(self) -> Subgroup:
        return self.poset.subgroups[self.terms[-1]]

    def term_subgroups(self) -> list[Subgroup]:
        return [self.poset.subgroups[i] for i in self.terms]

    def canonical_key(self) -> tuple:
        return tuple(self.poset.subgroups[i].canonical_key() for i in self.terms)

    def short_label(self) -> str:
        orders = "<".join(str(self.poset.subgroups[i].order) for i in self.terms)
        h = hashlib.sha256(repr(self.canonical_key()).encode()).hexdigest()[:6]
        return f"{orders}#{h}"


def chain_stabilizer(poset: PSubgroupPoset, terms: tuple[int, ...]) -> Subgroup:
    """Intersection of the normalizers of all chain terms."""
    G = poset.ambient
    members = set(G.elements)
    for i in reversed(terms):  # small top terms usually cut fastest
        H = poset.subgroups[i]
        gens = H.generating_set()
        members = {g for g in members
                   if all(g * h * G.inv(g) in H.elements for h in gens)}
    return Subgroup(G, members)


def _conjugate_terms(poset: PSubgroupPoset, terms: tuple[int, ...], gi: int) -> tuple[int, ...]:
    return tuple(poset.conj_index(i, gi) for i in terms)


def enumerate_chains(poset: PSubgroupPoset, family: str,
                     chain_guard: int = DEFAULT_CHAIN_GUARD) -> list[Chain]:
    """G-orbit representatives of the chain family ('all' or 'normal').

    Returns representatives sorted by (length, canonical key); each carries its
    exact stabilizer.  The trivial chain (1) is always present.
    """
    if family not in ("all", "normal"):
        raise ValueError("family must be 'all' or 'normal'")
    G = poset.ambient
    triv = poset.trivial_index
    nontrivial = [i for i in range(len(poset.subgroups)) if i != triv]

    # descending enumeration from each top term
    all_chains: list[tuple[int, ...]] = [(triv,)]
    for top in nontrivial:
        if family == "normal":
            topsub = poset.subgroups[top]
            candidates = [i for i in nontrivial
                          if poset.contains_pair(i, top)
                          and poset.subgroups[i].is_normal_in(topsub)]
        else:
            candidates = [i for i in nontrivial if poset.contains_pair(i, top)]

        ending_at: dict[int, list[tuple[int, ...]]] = {}

        def chains_ending(s: int) -> list[tuple[int, ...]]:
            got = ending_at.get(s)
            if got is None:
                got = [(s,)]
                for r in candidates:
                    if poset.contains_pair(r, s):
                        got.extend(ch + (s,) for ch in chains_ending(r))
                ending_at[s] = got
            return got

        below = [()]
        for r in candidates:
            below.extend(chains_ending(r))
        for ch in below:
            all_chains.append((triv,) + ch + (top,))
            if len(all_chains) > chain_guard:
                raise GuardExceeded(f"chain count exceeds guard {chain_guard}")

    # orbit fusion by BFS over generator conjugation
    orbit_of: dict[tuple[int, ...], int] = {}
    orbits: list[list[tuple[int, ...]]] = []
    for ch in all_chains:
        if ch in orbit_of:
            continue
        orbit = {ch}
        frontier = [ch]
        while frontier:
            nxt = []
            for cur in frontier:
                for gi in range(len(G.generators)):
                    conj = _conjugate_terms(poset, cur, gi)
                    if conj not in orbit:
                        orbit.add(conj)
                        nxt.append(conj)
            frontier = nxt
        oid = len(orbits)
        orbits.append(sorted(orbit))
        for c in orbit:
            orbit_of[c] = oid

    reps: list[Chain] = []
    total = 0
    for orbit in orbits:
        rep_terms = min(orbit, key=lambda ch: tuple(poset.subgroups[i].canonical_key()
                                                    for i in ch))
        stab = chain_stabilizer(poset, rep_terms)
        # orbit-counting consistency: orbit size equals the normalizer index
        assert len(orbit) == G.order // stab.order, "orbit/stabilizer mismatch"
        total += len(orbit)
        reps.append(Chain(poset, rep_terms, family == "normal", stab))
    assert total == len(all_chains)
    reps.sort(key=lambda c: (c.length, c.canonical_key()))
    return reps
