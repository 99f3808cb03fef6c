"""Group-algebra centers, primitive central idempotents, and block invariants.

All idempotent computations run in the class-sum basis (dimension = number of
conjugacy classes).  The splitting pipeline is: nilradical by iterated kernels
of the semilinear p-power map, Berlekamp-style splitting of the semisimple
quotient through its Frobenius-fixed subalgebra, then exact idempotent lifting
through the radical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from . import polyfq as pf
from .errors import NotIdempotent, NotSplit, OracleMismatch, TNotStabilizing
from .gf import FqField
from .groups import ConjClass, PermGroup, Perm, Subgroup, conjugacy_classes


class ClassAlgebra:
    """Z(kG) in the class-sum basis, with exact integer structure constants."""

    def __init__(self, group: PermGroup, field: FqField, prime: int,
                 classes: list[ConjClass] | None = None):
        self.group = group
        self.field = field
        self.prime = prime
        self.classes = classes if classes is not None else conjugacy_classes(group, prime)
        self.r = len(self.classes)
        self.class_of: dict[Perm, int] = {}
        for i, c in enumerate(self.classes):
            for g in c.members:
                self.class_of[g] = i
        ident = group.identity()
        self.identity_class = self.class_of[ident]
        self.constants = self._structure_constants()
        self.constants_mod = (self.constants % field.p).astype(np.int64)

    def _structure_constants(self) -> np.ndarray:
        r = self.r
        a = np.zeros((r, r, r), dtype=np.int64)
        G = self.group
        for k in range(r):
            zk = self.classes[k].representative
            for i in range(r):
                for x in self.classes[i].members:
                    y = G.inv(x) * zk
                    a[i, self.class_of[y], k] += 1
        return a

    def one(self) -> np.ndarray:
        e = la.zeros(self.field, self.r)
        e[self.identity_class, 0] = 1
        return e

    def zero(self) -> np.ndarray:
        return la.zeros(self.field, self.r)

    def mul(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Product of central elements given by class-sum coordinates."""
        F = self.field
        d = F.degree
        X = np.tensordot(self.constants_mod, v, axes=(1, 0))  # (i, k, b)
        conv = np.zeros((self.r, 2 * d - 1), dtype=np.int64)
        for c in range(d):
            conv[:, c:c + d] += np.tensordot(u[:, c], X, axes=(0, 0))
        return la._reduce(F, conv)

    def power(self, u: np.ndarray, e: int) -> np.ndarray:
        out = self.one()
        base = np.array(u)
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def is_idempotent(self, u: np.ndarray) -> bool:
        return np.array_equal(self.mul(u, u), u % self.field.p)

    def mult_matrix(self, i: int) -> np.ndarray:
        """Matrix of multiplication by the i-th class sum, acting on coordinate columns."""
        M = la.zeros(self.field, self.r, self.r)
        M[:, :, 0] = self.constants_mod[i].T
        return M

    def p_regular_indices(self) -> list[int]:
        return [i for i, c in enumerate(self.classes) if c.is_p_regular(self.prime)]


@dataclass
class BlockIdempotent:
    """A central idempotent in class-sum coordinates, with its block invariants.

    `primitive` marks genuine blocks; sums of blocks (including 0 and 1) share
    the carrier.  Invariants are filled by the decomposition pipeline.
    """

    algebra: ClassAlgebra
    coords: np.ndarray
    primitive: bool = False
    defect: int | None = None
    minimal_field_degree: int | None = None
    central_character: np.ndarray | None = None  # (r, d) values on class sums
    index: int | None = None

    def is_zero(self) -> bool:
        return not np.any(self.coords)

    def support_size(self) -> int:
        return int(np.count_nonzero(np.any(self.coords != 0, axis=1)))

    def key(self) -> tuple:
        return tuple(int(i) for i in la.to_index(self.algebra.field, self.coords))

    def __repr__(self):
        tag = "block" if self.primitive else "central idempotent"
        return f"<{tag} support {self.support_size()} of {self.algebra.group.name}>"


@dataclass
class IdempotentDecomposition:
    parent: BlockIdempotent
    parts: list[BlockIdempotent]

    def verify(self):
        """Orthogonality, completeness, idempotence; raises on failure."""
        alg = self.parent.algebra
        total = alg.zero()
        for i, e in enumerate(self.parts):
            if not alg.is_idempotent(e.coords):
                raise NotIdempotent(f"part {i} is not idempotent")
            total = la.add(alg.field, total, e.coords)
            for j in range(i):
                if np.any(alg.mul(e.coords, self.parts[j].coords)):
                    raise NotIdempotent(f"parts {i},{j} are not orthogonal")
        if not np.array_equal(total, self.parent.coords % alg.field.p):
            raise NotIdempotent("parts do not sum to the parent")


def nilradical(alg: ClassAlgebra) -> np.ndarray:
    """Basis rows of the nilradical of Z(kG), via iterated semilinear p-power kernels."""
    F = alg.field
    r = alg.r
    # column i = coordinates of (i-th class sum)^p
    M = la.zeros(F, r, r)
    for i in range(r):
        e = la.zeros(F, r)
        e[i, 0] = 1
        M[:, i, :] = alg.power(e, F.p)

    def frob_inv_rows(rows):
        return la.frob_entrywise(F, rows, F.degree - 1)

    current = frob_inv_rows(la.nullspace(F, M))
    current, _ = la.rref(F, current)
    while current.shape[0] < r:
        ann = la.nullspace(F, current) if current.shape[0] else la.eye(F, r)
        if ann.shape[0] == 0:
            break
        QM = la.matmul(F, ann, M)
        nxt = frob_inv_rows(la.nullspace(F, QM))
        nxt, _ = la.rref(F, nxt)
        if nxt.shape[0] == current.shape[0]:
            break
        current = nxt
    return current


class _QuotientAlgebra:
    """A/J for J the nilradical: complement coordinates and induced multiplication."""

    def __init__(self, alg: ClassAlgebra, jbasis: np.ndarray):
        F = alg.field
        self.alg = alg
        self.F = F
        J, pivots = la.rref(F, jbasis) if jbasis.shape[0] else (jbasis, [])
        self.J = J
        self.jpivots = list(pivots)
        self.positions = [c for c in range(alg.r) if c not in self.jpivots]
        self.dim = len(self.positions)

    def project(self, v: np.ndarray) -> np.ndarray:
        """Coordinates of v + J in the complement basis."""
        if self.J.shape[0]:
            c = v[self.jpivots, :][None, :, :]
            v = (v - la.matmul(self.F, c, self.J)[0]) % self.F.p
        return np.ascontiguousarray(v[self.positions, :])

    def embed(self, vq: np.ndarray) -> np.ndarray:
        out = la.zeros(self.F, self.alg.r)
        out[self.positions, :] = vq
        return out

    def mul(self, uq: np.ndarray, vq: np.ndarray) -> np.ndarray:
        return self.project(self.alg.mul(self.embed(uq), self.embed(vq)))

    def power(self, uq: np.ndarray, e: int) -> np.ndarray:
        out = self.project(self.alg.one())
        base = np.array(uq)
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def one(self) -> np.ndarray:
        return self.project(self.alg.one())


def _split_semisimple(quot: _QuotientAlgebra, expect_split: bool) -> list[np.ndarray]:
    """Primitive idempotents of the (semisimple) quotient algebra.

    Splitting elements come from the Frobenius-fixed subalgebra {x : x^q = x},
    whose elements have all eigenvalues in the base field, so minimal
    polynomials factor into distinct linear factors and Lagrange interpolation
    yields the component idempotents.
    """
    F = quot.F
    worklist = [quot.one()]
    finished: list[np.ndarray] = []
    while worklist:
        e = worklist.pop()
        # basis of the ideal e * A-bar
        ideal = la.RowBasis(F, quot.dim)
        gens = []
        for i in range(quot.dim):
            b = la.zeros(F, quot.dim)
            b[i, 0] = 1
            x = quot.mul(e, b)
            if ideal.insert(np.array(x)):
                gens.append(x)
        m = ideal.dim
        if m == 1:
            finished.append(e)
            continue
        V = ideal.matrix()
        # Frobenius-fixed subalgebra of the ideal: solve v^q = v in ideal coordinates
        P = la.zeros(F, m, m)
        for i in range(m):
            img = quot.power(V[i], F.q)
            P[i] = la.coords_in_rref(F, V, ideal.pivots, img[None, :, :])[0]
        fixed = la.nullspace(F, la.sub(F, la.transpose(P), la.eye(F, m)))
        if fixed.shape[0] == 1:
            if expect_split:
                raise NotSplit("component does not split over the working field")
            finished.append(e)
            continue
        # pick a fixed element independent of e
        e_coords = la.coords_in_rref(F, V, ideal.pivots, e[None, :, :])[0]
        span_e = la.RowBasis(F, m)
        span_e.insert(np.array(e_coords))
        x_ideal = None
        for i in range(fixed.shape[0]):
            if not span_e.contains(fixed[i]):
                x_ideal = fixed[i]
                break
        assert x_ideal is not None
        x = la.matmul(F, x_ideal[None, :, :], V)[0]

        def mulx(v, x=x):
            return quot.mul(x, v)

        rel = la.annihilator_poly(F, mulx, np.array(e), m)
        deg = len(rel) - 1
        roots = pf.roots(F, rel)
        if len(roots) != deg:
            raise NotSplit("fixed-subalgebra element has a nonlinear factor")
        for lam in roots:
            # Lagrange projector: prod_{mu != lam} (x - mu e)/(lam - mu), applied to e
            part = np.array(e)
            for mu in roots:
                if mu == lam:
                    continue
                scale_idx = F.inv_idx(F.add_idx(lam, F.neg_idx(mu)))
                term = la.sub(F, quot.mul(x, part),
                              la.scale(F, F.COEFFS[mu], part))
                part = la.scale(F, F.COEFFS[scale_idx], term)
            worklist.append(part)
    return finished


def _lift_idempotent(alg: ClassAlgebra, e0: np.ndarray) -> np.ndarray:
    """Lift an idempotent modulo the nilradical to an exact idempotent (3e^2 - 2e^3)."""
    F = alg.field
    e = np.array(e0)
    for _ in range(alg.r + 4):
        e2 = alg.mul(e, e)
        if np.array_equal(e2, e):
            return e
        e3 = alg.mul(e2, e)
        e = (3 * e2 - 2 * e3) % F.p
    raise NotIdempotent("idempotent lifting did not terminate")


def central_primitive_idempotents(alg: ClassAlgebra,
                                  expect_split: bool = True) -> IdempotentDecomposition:
    """The full set of primitive idempotents of Z(kG), as a decomposition of 1.

    With expect_split the field is required to split the center (always true
    over the designated splitting field); otherwise coarser rational blocks
    are returned.
    """
    F = alg.field
    J = nilradical(alg)
    quot = _QuotientAlgebra(alg, J)
    parts_q = _split_semisimple(quot, expect_split)
    lifted = [_lift_idempotent(alg, quot.embed(pq)) for pq in parts_q]
    lifted.sort(key=lambda c: tuple(int(i) for i in la.to_index(F, c)))
    one = BlockIdempotent(alg, alg.one(), primitive=(len(lifted) == 1))
    parts = [BlockIdempotent(alg, c, primitive=True, index=i)
             for i, c in enumerate(lifted)]
    decomp = IdempotentDecomposition(one, parts)
    decomp.verify()
    for part in parts:
        # Osima support: blocks live on p-regular classes
        for i, c in enumerate(alg.classes):
            if not c.is_p_regular(alg.prime) and np.any(part.coords[i]):
                raise NotIdempotent("block idempotent supported on a p-singular class")
        # primitivity certificate: the ideal e * (A/J) is one-dimensional
        ideal_dim = _ideal_dim(quot, quot.project(part.coords))
        if expect_split and ideal_dim != 1:
            raise NotSplit("lifted idempotent is not primitive over the working field")
    return decomp


def _ideal_dim(quot: _QuotientAlgebra, eq: np.ndarray) -> int:
    basis = la.RowBasis(quot.F, quot.dim)
    for i in range(quot.dim):
        b = la.zeros(quot.F, quot.dim)
        b[i, 0] = 1
        basis.insert(quot.mul(eq, b))
    return basis.dim


def central_character_oracle(alg: ClassAlgebra) -> list[np.ndarray]:
    """All algebra homomorphisms Z(kG) -> k, by simultaneous generalized eigenspaces.

    Independent of the idempotent splitter: works directly with the
    multiplication operators of the class sums.
    """
    F = alg.field
    r = alg.r
    spaces = [la.eye(F, r)]
    for i in range(r):
        Mi = alg.mult_matrix(i)
        MiT = la.transpose(Mi)
        refined = []
        for V in spaces:
            k = V.shape[0]
            if k == 0:
                continue
            Vr, piv = la.rref(F, V)
            images = la.matmul(F, Vr, MiT)
            C = la.coords_in_rref(F, Vr, piv, images)
            Rmat = la.transpose(C)  # restriction of M_i to V, on coordinate columns
            minp = _operator_minpoly(F, Rmat)
            eigs = pf.roots(F, minp)
            covered = 0
            for lam in eigs:
                shifted = np.array(Rmat)
                shifted[np.arange(k), np.arange(k)] = la.sub(
                    F, Rmat[np.arange(k), np.arange(k)], la.from_index(F, np.full(k, lam)))
                powered = _matrix_power(F, shifted, k)
                kern = la.nullspace(F, powered)
                if kern.shape[0] == 0:
                    continue
                sub = la.matmul(F, kern, Vr)
                sub, _ = la.rref(F, sub)
                covered += sub.shape[0]
                refined.append(sub)
            if covered != k:
                raise OracleMismatch("eigenvalues do not exhaust a joint eigenspace")
        spaces = refined
    chars = []
    for V in spaces:
        Vr, piv = la.rref(F, V)
        vals = la.zeros(F, r)
        for i in range(r):
            Mi = alg.mult_matrix(i)
            images = la.matmul(F, Vr, la.transpose(Mi))
            C = la.coords_in_rref(F, Vr, piv, images)
            minp = _operator_minpoly(F, la.transpose(C))
            eigs = pf.roots(F, minp)
            if len(eigs) != 1:
                raise OracleMismatch("class-sum operator not single-valued on a final space")
            vals[i] = F.COEFFS[eigs[0]]
        chars.append(vals)
    chars.sort(key=lambda v: tuple(int(i) for i in la.to_index(F, v)))
    return chars


def _operator_minpoly(F: FqField, M: np.ndarray) -> list[int]:
    n = M.shape[0]

    def apply(v):
        return la.matvec(F, M, v)

    minp = [1]
    for i in range(n):
        v = la.zeros(F, n)
        v[i, 0] = 1
        ann = la.annihilator_poly(F, apply, v, n)
        g = pf.poly_gcd(F, minp, ann)
        quo, _ = pf.poly_divmod(F, ann, g)
        minp = pf.poly_mul(F, minp, quo)
        if len(minp) - 1 == n:
            break
    return minp


def _matrix_power(F: FqField, M: np.ndarray, e: int) -> np.ndarray:
    out = la.eye(F, M.shape[0])
    base = np.array(M)
    while e:
        if e & 1:
            out = la.matmul(F, out, base)
        base = la.matmul(F, base, base)
        e >>= 1
    return out


def match_characters_to_blocks(alg: ClassAlgebra, decomp: IdempotentDecomposition,
                               chars: list[np.ndarray]) -> None:
    """Pair each block with the unique central character sending it to 1; fills fields."""
    F = alg.field
    if len(chars) != len(decomp.parts):
        raise OracleMismatch(
            f"{len(decomp.parts)} idempotents vs {len(chars)} central characters")
    used = set()
    for e in decomp.parts:
        hits = []
        for ci, ch in enumerate(chars):
            # omega(e) = sum_i e_i * omega(C_i)
            val = la.mul_pointwise(F, e.coords, ch).sum(axis=0) % F.p
            vidx = int(val @ F.PACK)
            if vidx == 1:
                hits.append(ci)
        if len(hits) != 1 or hits[0] in used:
            raise OracleMismatch("character/block pairing is not a bijection")
        used.add(hits[0])
        e.central_character = chars[hits[0]]
        e.defect = _block_defect(alg, chars[hits[0]])
        e.minimal_field_degree = minimal_field_degree(alg, e.coords)


def _block_defect(alg: ClassAlgebra, char_vals: np.ndarray) -> int:
    """Defect from the defect-class characterization: the least class defect on the
    support of the central character."""
    ds = [alg.classes[i].p_defect for i in range(alg.r) if np.any(char_vals[i])]
    return min(ds)


def minimal_field_degree(alg: ClassAlgebra, coords: np.ndarray) -> int:
    """Degree of the subfield generated by the coefficients: least m0 | d fixed by Frob^m0."""
    F = alg.field
    for m0 in range(1, F.degree + 1):
        if F.degree % m0 == 0 and np.array_equal(
                la.frob_entrywise(F, coords, m0), coords % F.p):
            return m0
    return F.degree


def galois_conjugate(alg: ClassAlgebra, coords: np.ndarray, m: int) -> np.ndarray:
    """Coefficient-wise p^m power; permutes the block set."""
    return la.frob_entrywise(alg.field, coords, m)


def is_fixed_by(alg: ClassAlgebra, coords: np.ndarray, m: int) -> bool:
    return np.array_equal(galois_conjugate(alg, coords, m), coords % alg.field.p)


def decompose_idempotent(alg: ClassAlgebra, decomp: IdempotentDecomposition,
                         coords: np.ndarray) -> list[int]:
    """Indices of the blocks whose sum is the given central idempotent."""
    if not alg.is_idempotent(coords):
        raise NotIdempotent("input is not a central idempotent")
    out = []
    total = alg.zero()
    for i, e in enumerate(decomp.parts):
        prod = alg.mul(e.coords, coords)
        if np.array_equal(prod, e.coords):
            out.append(i)
            total = la.add(alg.field, total, e.coords)
        elif np.any(prod):
            raise NotIdempotent("idempotent is not a subset sum of blocks")
    if not np.array_equal(total, coords % alg.field.p):
        raise NotIdempotent("block subset does not reconstruct the idempotent")
    return out


def weights_fixed_count(alg: ClassAlgebra, decomp: IdempotentDecomposition,
                        coords: np.ndarray, m: int) -> tuple[int, list[int]]:
    """|W(G, b)^T| for T = <Frob^m>: T-fixed defect-zero blocks inside b.

    Returns (count, indices of the defect-zero weight blocks in b fixed by T).
    The zero idempotent yields the empty weight set.
    """
    if not is_fixed_by(alg, coords, m):
        raise TNotStabilizing("the Galois subgroup moves the idempotent")
    subset = decompose_idempotent(alg, decomp, coords)
    weights = [i for i in subset
               if decomp.parts[i].defect == 0
               and is_fixed_by(alg, decomp.parts[i].coords, m)]
    return len(weights), weights


def brauer_hom_coords(source: ClassAlgebra, coords: np.ndarray,
                      top_generators, target: ClassAlgebra) -> np.ndarray:
    """br_P applied to a central element, re-expressed over a subgroup containing C_G(P).

    `target` must be the class algebra of a subgroup of the source group whose
    elements all normalize P; entries of the result pick up the source-class
    coefficient when the target class representative centralizes every
    generator of P, and 0 otherwise.
    """
    F = source.field
    out = la.zeros(F, target.r)
    tops = list(top_generators)
    for j in range(target.r):
        x = target.classes[j].representative
        if all(x * t == t * x for t in tops):
            out[j] = coords[source.class_of[x]]
    return out


def quotient_pushforward(source: ClassAlgebra, coords: np.ndarray,
                         projection: dict[Perm, Perm],
                         target: ClassAlgebra) -> np.ndarray:
    """Image of a central element under kN -> k[N/P]: sum coefficients over cosets."""
    F = source.field
    fibers: dict[Perm, list[Perm]] = {}
    for n, q in projection.items():
        fibers.setdefault(q, []).append(n)
    out = la.zeros(F, target.r)
    for j in range(target.r):
        q = target.classes[j].representative
        acc = la.zeros(F, 1)[0]
        for n in fibers[q]:
            acc = (acc + coords[source.class_of[n]]) % F.p
        out[j] = acc
    return out
