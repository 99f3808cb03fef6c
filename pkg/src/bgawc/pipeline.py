"""Per-group block/module databases and the chain-level plumbing shared by all checks.

A `GroupData` bundles, for one permutation group over the case's splitting
field: the class algebra, the block decomposition with invariants, and the
simple-module census (dimensions, block membership, Brauer-character
fingerprints, Frobenius-twist behaviour).  A `World` extends that with the
p-subgroup poset, chain families, stabilizer databases, and quotient worlds,
all cached by canonical keys so results never depend on evaluation order.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .blocks import (BlockIdempotent, ClassAlgebra, IdempotentDecomposition,
                     brauer_hom_coords, central_character_oracle,
                     central_primitive_idempotents, decompose_idempotent,
                     galois_conjugate, is_fixed_by, match_characters_to_blocks,
                     minimal_field_degree, weights_fixed_count)
from .chains import (Chain, DEFAULT_CHAIN_GUARD, DEFAULT_POSET_GUARD,
                     PSubgroupPoset, chain_stabilizer, enumerate_chains,
                     enumerate_p_subgroups)
from .errors import NotIdempotent, OracleMismatch, TNotStabilizing
from .gf import FqField, splitting_field
from .groups import (PermGroup, Perm, Subgroup, centralizer, exp_p_prime,
                     normalizer, quotient_group, whole_subgroup)
from .modrep import MatRep, chop_matrices, regular_representation

USE_FAST_PATHS = True

DEFAULT_CHOP_BUDGET = 200


def derive_seed(base: int, *tags) -> int:
    h = hashlib.sha256(repr((base,) + tags).encode()).digest()
    return int.from_bytes(h[:8], "big")


@dataclass
class SimpleModuleClass:
    """Isomorphism class of an absolutely irreducible module over the splitting field."""

    canonical_rep: MatRep
    dimension: int
    block_index: int
    fingerprint: tuple[int, ...]  # trace indices over the p-regular classes, in class order


class GroupData:
    """Blocks and simple modules of one group over the case splitting field."""

    def __init__(self, group: PermGroup, prime: int, field: FqField, seed: int,
                 chop_budget: int = DEFAULT_CHOP_BUDGET):
        self.group = group
        self.prime = prime
        self.field = field
        self.seed = seed
        self.chop_budget = chop_budget
        self.algebra = ClassAlgebra(group, field, prime)
        self.decomposition = central_primitive_idempotents(self.algebra)
        chars = central_character_oracle(self.algebra)
        match_characters_to_blocks(self.algebra, self.decomposition, chars)
        self.blocks: list[BlockIdempotent] = self.decomposition.parts
        self.p_regular = self.algebra.p_regular_indices()
        self.simples: list[SimpleModuleClass] = self._build_simples()
        if len(self.simples) != len(self.p_regular):
            raise OracleMismatch(
                f"{len(self.simples)} simples vs {len(self.p_regular)} p-regular classes "
                f"for {group.name} at p={prime}")
        self._fp_index = {s.fingerprint: i for i, s in enumerate(self.simples)}
        self._twist_cache: dict[int, tuple[int, ...]] = {}
        self._subset_cache: dict[tuple, list[int]] = {}

    # -- simple-module census --

    def _build_simples(self) -> list[SimpleModuleClass]:
        G, F = self.group, self.field
        if USE_FAST_PATHS and _is_p_power(G.order, self.prime):
            # local algebra: the unique simple is the trivial module
            mats = [la.eye(F, 1) for _ in G.generators]
            rep = MatRep(G, F, mats, 1)
            fp = self._fingerprint_from_matrices(mats, 1)
            return [SimpleModuleClass(rep, 1, 0, fp)]
        if USE_FAST_PATHS and G.order == self.algebra.r:
            # abelian: one 1-dimensional simple per block, acting by the central character
            out = []
            for bi, b in enumerate(self.blocks):
                mats = [b.central_character[self.algebra.class_of[g]][None, None, :]
                        for g in G.generators]
                mats = [np.ascontiguousarray(m) for m in mats]
                rep = MatRep(G, F, mats, 1)
                fp = tuple(int(la.to_index(F, b.central_character[ci])) for ci in self.p_regular)
                out.append(SimpleModuleClass(rep, 1, bi, fp))
            out.sort(key=lambda s: (s.dimension, s.fingerprint))
            return out
        rng = np.random.default_rng(self.seed)
        out = []
        for bi, b in enumerate(self.blocks):
            rep = regular_representation(G, b.coords, self.algebra)
            factors = chop_matrices(F, rep.matrices, rep.dimension, rng, self.chop_budget)
            assert sum(d for _, d in factors) == rep.dimension
            seen: dict[tuple, SimpleModuleClass] = {}
            for mats, dim in factors:
                fp = self._fingerprint_from_matrices(mats, dim)
                key = (dim, fp)
                if key not in seen:
                    seen[key] = SimpleModuleClass(MatRep(G, F, mats, dim), dim, bi, fp)
            for s in seen.values():
                self._verify_block_membership(s, b)
                out.append(s)
        out.sort(key=lambda s: (s.dimension, s.fingerprint))
        fps = [s.fingerprint for s in out]
        if len(set(fps)) != len(fps):
            raise OracleMismatch("fingerprint collision across blocks")
        return out

    def _fingerprint_from_matrices(self, mats, dim) -> tuple[int, ...]:
        F = self.field
        out = []
        for ci in self.p_regular:
            rep_el = self.algebra.classes[ci].representative
            M = la.eye(F, dim)
            for gi in self.group.bfs_word(rep_el):
                M = la.matmul(F, M, mats[gi])
            tr = M[np.arange(dim), np.arange(dim)].sum(axis=0) % F.p
            out.append(int(tr @ F.PACK))
        return tuple(out)

    def _verify_block_membership(self, s: SimpleModuleClass, b: BlockIdempotent):
        """The class sums must act by the block's central character on the simple."""
        F = self.field
        ems = s.canonical_rep.element_matrices()
        idx = {g: i for i, g in enumerate(self.group.elements)}
        for ci, cls in enumerate(self.algebra.classes):
            acc = la.zeros(F, s.dimension, s.dimension)
            for g in cls.members:
                acc = (acc + ems[idx[g]]) % F.p
            lam = b.central_character[ci]
            expect = la.zeros(F, s.dimension, s.dimension)
            expect[np.arange(s.dimension), np.arange(s.dimension)] = lam
            if not np.array_equal(acc, expect):
                raise OracleMismatch("class sum does not act by the block's central character")

    # -- Galois twists --

    def twist_perm(self, m: int) -> tuple[int, ...]:
        """Permutation of simple indices induced by the entry-wise p^m twist."""
        mm = m % self.field.degree
        got = self._twist_cache.get(mm)
        if got is None:
            F = self.field
            perm = []
            for s in self.simples:
                fp = tuple(F.frob_idx(v, mm) for v in s.fingerprint)
                perm.append(self._fp_index[fp])
            got = tuple(perm)
            self._twist_cache[mm] = got
        return got

    # -- counting interface --

    def blocks_of(self, coords: np.ndarray) -> list[int]:
        key = tuple(int(i) for i in la.to_index(self.field, coords))
        got = self._subset_cache.get(key)
        if got is None:
            got = decompose_idempotent(self.algebra, self.decomposition, coords)
            self._subset_cache[key] = got
        return got

    def ibr_indices(self, coords: np.ndarray) -> list[int]:
        inside = set(self.blocks_of(coords))
        return [i for i, s in enumerate(self.simples) if s.block_index in inside]

    def ibr(self, coords: np.ndarray) -> list[SimpleModuleClass]:
        return [self.simples[i] for i in self.ibr_indices(coords)]

    def count_fixed_ibr(self, coords: np.ndarray, m: int) -> int:
        """|IBr(G, b)^T| for T = <Frob^m>; T must fix the idempotent."""
        if not is_fixed_by(self.algebra, coords, m):
            raise TNotStabilizing("Galois subgroup moves the idempotent")
        tw = self.twist_perm(m)
        return sum(1 for i in self.ibr_indices(coords) if tw[i] == i)

    def weights_fixed(self, coords: np.ndarray, m: int) -> tuple[int, list[int]]:
        return weights_fixed_count(self.algebra, self.decomposition, coords, m)

    def block_minimal_degree(self, coords: np.ndarray) -> int:
        return minimal_field_degree(self.algebra, coords)


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


class World:
    """One group with its chain machinery, stabilizer databases and quotient worlds."""

    def __init__(self, group: PermGroup, prime: int, field: FqField | None = None,
                 seed: int = 0, poset_guard: int = DEFAULT_POSET_GUARD,
                 chain_guard: int = DEFAULT_CHAIN_GUARD,
                 chop_budget: int = DEFAULT_CHOP_BUDGET):
        group.materialize()
        self.group = group
        self.prime = prime
        self.field = field if field is not None else splitting_field(
            prime, exp_p_prime(group, prime))
        self.seed = seed
        self.poset_guard = poset_guard
        self.chain_guard = chain_guard
        self.chop_budget = chop_budget
        self.data = GroupData(group, prime, self.field,
                              derive_seed(seed, "root", group.canonical_key()), chop_budget)
        self._poset: PSubgroupPoset | None = None
        self._chains: dict[str, list[Chain]] = {}
        self._stab_cache: dict[tuple, GroupData] = {}
        self._quotients: dict[int, QuotientWorld] = {}

    @property
    def degree_d(self) -> int:
        return self.field.degree

    def poset(self) -> PSubgroupPoset:
        if self._poset is None:
            self._poset = enumerate_p_subgroups(self.group, self.prime, self.poset_guard)
        return self._poset

    def chains(self, family: str) -> list[Chain]:
        if family not in self._chains:
            self._chains[family] = enumerate_chains(self.poset(), family, self.chain_guard)
        return self._chains[family]

    def stab_data(self, sub: Subgroup) -> GroupData:
        if sub.order == self.group.order:
            return self.data
        key = sub.canonical_key()
        got = self._stab_cache.get(key)
        if got is None:
            H = sub.as_group(name=f"{self.group.name}-stab{sub.order}")
            got = GroupData(H, self.prime, self.field,
                            derive_seed(self.seed, "stab", key), self.chop_budget)
            self._stab_cache[key] = got
        return got

    def chain_idempotent(self, coords: np.ndarray, chain: Chain) -> tuple[GroupData, np.ndarray]:
        """br_{top}(b) viewed in the group algebra of the chain stabilizer."""
        sd = self.stab_data(chain.stabilizer)
        top_gens = chain.top.generating_set()
        cc = brauer_hom_coords(self.data.algebra, coords, top_gens, sd.algebra)
        if not sd.algebra.is_idempotent(cc):
            raise NotIdempotent("chain idempotent fails the idempotency check")
        return sd, cc

    def chain_count(self, coords: np.ndarray, chain: Chain, m: int) -> int:
        sd, cc = self.chain_idempotent(coords, chain)
        return sd.count_fixed_ibr(cc, m)

    def quotient_world(self, poset_index: int) -> "QuotientWorld":
        got = self._quotients.get(poset_index)
        if got is None:
            got = QuotientWorld(self, poset_index)
            self._quotients[poset_index] = got
        return got

    def admissible_exponents(self, coords: np.ndarray) -> list[int]:
        """Generator exponents m with m0 | m | d, m0 the minimal field degree of b."""
        m0 = self.data.block_minimal_degree(coords)
        d = self.field.degree
        return [m for m in range(1, d + 1) if d % m == 0 and m % m0 == 0]


class QuotientWorld:
    """The world of N_G(P)/P for a p-subgroup P, with the idempotent pushforward."""

    def __init__(self, parent: World, poset_index: int):
        self.parent = parent
        self.P = parent.poset().subgroups[poset_index]
        G = parent.group
        self.N = normalizer(G, self.P)
        Q, projection = quotient_group(self.N, self.P)
        Q.name = f"{G.name}-N{self.P.order}q{Q.order}"
        self.quotient_group = Q
        self.projection = projection
        self.world = World(Q, parent.prime, parent.field,
                           seed=derive_seed(parent.seed, "quot", self.P.canonical_key()),
                           poset_guard=parent.poset_guard,
                           chain_guard=parent.chain_guard,
                           chop_budget=parent.chop_budget)
        self._fibers: dict[Perm, list[Perm]] = {}
        for n, q in projection.items():
            self._fibers.setdefault(q, []).append(n)
        self._push_cache: dict[tuple, np.ndarray] = {}
        self._pgens = self.P.generating_set()

    def pushed_idempotent(self, coords_g: np.ndarray) -> np.ndarray:
        """Image of br_P(b) under kN_G(P) -> k[N_G(P)/P], in quotient class coordinates."""
        F = self.parent.field
        key = tuple(int(i) for i in la.to_index(F, coords_g))
        got = self._push_cache.get(key)
        if got is not None:
            return got
        src = self.parent.data.algebra
        qalg = self.world.data.algebra
        out = la.zeros(F, qalg.r)
        for j in range(qalg.r):
            rep = qalg.classes[j].representative
            acc = np.zeros(F.degree, dtype=np.int64)
            for n in self._fibers[rep]:
                if all(n * t == t * n for t in self._pgens):
                    acc = (acc + coords_g[src.class_of[n]]) % F.p
            out[j] = acc
        if not qalg.is_idempotent(out):
            raise NotIdempotent("pushforward of a central idempotent is not idempotent")
        self._push_cache[key] = out
        return out

    def subgroup_image(self, elements) -> Subgroup:
        return Subgroup(self.quotient_group, {self.projection[x] for x in elements})
