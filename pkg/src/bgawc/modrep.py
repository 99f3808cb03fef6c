"""Matrix representations over the splitting field: regular modules, MeatAxe
chopping into composition factors, isomorphism testing, and Frobenius twists.

Chopping is Las Vegas: random algebra elements come from an explicit generator
stream, eigenvalues from annihilator polynomials, splits from kernel-vector
spins with the transpose trick, and irreducibility from the nullity-one
criterion.  Final factors are certified absolutely irreducible by an exact
endomorphism-algebra computation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from . import polyfq as pf
from .errors import ChopBudgetExceeded
from .gf import FqField
from .groups import PermGroup, Perm
from .blocks import ClassAlgebra


@dataclass
class MatRep:
    """Module given by one invertible matrix per group generator (column action)."""

    group: PermGroup
    field: FqField
    matrices: list[np.ndarray]  # each (n, n, d)
    dimension: int

    def element_matrices(self) -> list[np.ndarray]:
        """Matrix of every group element, in BFS element order."""
        F = self.field
        out = [la.eye(F, self.dimension)]
        for node in self.group.bfs_parents()[1:]:
            gi, parent = node
            out.append(la.matmul(F, self.matrices[gi], out[parent]))
        return out

    def element_matrix(self, g: Perm) -> np.ndarray:
        F = self.field
        out = la.eye(F, self.dimension)
        for gi in self.group.bfs_word(g):
            out = la.matmul(F, out, self.matrices[gi])
        return out

    def verify_relations(self, rng, trials: int = 50) -> bool:
        """Spot-check that the matrices define a homomorphism on random element pairs."""
        els = self.group.elements
        mats = {g: self.element_matrix(g) for g in els} if len(els) <= 64 else None
        for _ in range(trials):
            a = els[int(rng.integers(0, len(els)))]
            b = els[int(rng.integers(0, len(els)))]
            ma = mats[a] if mats else self.element_matrix(a)
            mb = mats[b] if mats else self.element_matrix(b)
            mab = mats[a * b] if mats else self.element_matrix(a * b)
            if not np.array_equal(la.matmul(self.field, ma, mb), mab):
                return False
        return True


def permutation_action_matrices(G: PermGroup, F: FqField) -> list[np.ndarray]:
    """Left-translation permutation matrices of the generators on the element basis."""
    n = G.order
    idx = {g: i for i, g in enumerate(G.elements)}
    out = []
    for g in G.generators:
        M = la.zeros(F, n, n)
        for h, j in idx.items():
            M[idx[g * h], j, 0] = 1
        out.append(M)
    return out


def regular_representation(G: PermGroup, e_coords: np.ndarray | None,
                           alg: ClassAlgebra) -> MatRep:
    """The module kG.e with G acting by left translation (e = None means the whole algebra)."""
    F = alg.field
    n = G.order
    perm_mats = permutation_action_matrices(G, F)
    if e_coords is None or np.array_equal(e_coords % F.p, alg.one()):
        return MatRep(G, F, perm_mats, n)
    elements = G.elements
    rows = la.zeros(F, n, n)
    for hi, h in enumerate(elements):
        hinv = G.inv(h)
        for xi, x in enumerate(elements):
            rows[hi, xi] = e_coords[alg.class_of[hinv * x]]
    basis, pivots = la.rref(F, rows)
    m = basis.shape[0]
    mats = []
    for A in perm_mats:
        images = la.matmul(F, basis, la.transpose(A))
        C = la.coords_in_rref(F, basis, pivots, images)
        mats.append(la.transpose(C))
    return MatRep(G, F, mats, m)


# -- spinning and splitting --

def spin(F: FqField, mats: list[np.ndarray], seeds) -> la.RowBasis:
    """Row basis of the submodule generated by the seed vectors under the matrices."""
    n = seeds[0].shape[0]
    basis = la.RowBasis(F, n)
    pending = []
    for s in seeds:
        r = basis.insert_get(np.array(s) % F.p)
        if r is not None:
            pending.append(r)
    while pending and basis.dim < n:
        v = pending.pop()
        for A in mats:
            w = la.matvec(F, A, v)
            r = basis.insert_get(w)
            if r is not None:
                pending.append(r)
                if basis.dim == n:
                    return basis
    return basis


def _random_word(rng, ngens: int, q: int) -> list[tuple[int, tuple[int, ...]]]:
    terms = []
    nterms = int(rng.integers(2, 5))
    for _ in range(nterms):
        coeff = int(rng.integers(1, q))
        length = int(rng.integers(1, 4))
        word = tuple(int(rng.integers(0, ngens)) for _ in range(length))
        terms.append((coeff, word))
    return terms


def evaluate_word(F: FqField, mats: list[np.ndarray], terms, dim: int) -> np.ndarray:
    out = la.zeros(F, dim, dim)
    for coeff, word in terms:
        prod = la.eye(F, dim)
        for gi in word:
            prod = la.matmul(F, prod, mats[gi])
        out = la.add(F, out, la.scale(F, F.COEFFS[coeff], prod))
    return out


def _shift_diag(F: FqField, M: np.ndarray, lam: int) -> np.ndarray:
    out = np.array(M)
    n = M.shape[0]
    diag = out[np.arange(n), np.arange(n)]
    out[np.arange(n), np.arange(n)] = la.sub(F, diag, la.from_index(F, np.full(n, lam)))
    return out


def _split_step(F: FqField, mats, dim: int, rng, budget: int):
    """One resolution step: ('irr', None) or ('sub', rref rows of a proper submodule)."""
    if dim == 1:
        return "irr", None
    if not mats:
        sub = la.zeros(F, 1, dim)
        sub[0, 0, 0] = 1
        return "sub", sub
    matsT = [la.transpose(A) for A in mats]
    for _trial in range(budget):
        theta = evaluate_word(F, mats, _random_word(rng, len(mats), F.q), dim)
        v = la.random_matrix(F, rng, (dim,))
        if not np.any(v):
            continue
        rel = la.annihilator_poly(F, lambda u: la.matvec(F, theta, u), v, dim)
        for lam in pf.roots(F, rel):
            shifted = _shift_diag(F, theta, lam)
            kern = la.nullspace(F, shifted)
            k = kern.shape[0]
            if k == 0:
                continue
            candidates = [kern[i] for i in range(min(k, 3))]
            if k > 3:
                mix = la.random_matrix(F, rng, (2, k))
                candidates.extend(la.matmul(F, mix, kern))
            split_rows = None
            all_full = True
            for w in candidates:
                if not np.any(w):
                    continue
                sp = spin(F, mats, [w])
                if sp.dim < dim:
                    split_rows = sp.matrix()
                    all_full = False
                    break
            if split_rows is not None:
                return "sub", split_rows
            kernT = la.nullspace(F, la.transpose(shifted))
            for i in range(min(kernT.shape[0], 3)):
                spt = spin(F, matsT, [kernT[i]])
                if spt.dim < dim:
                    # the perp of a transpose-invariant subspace is a submodule
                    perp = la.nullspace(F, spt.matrix())
                    return "sub", perp
            if k == 1 and all_full:
                # nullity-one criterion: both spins full certifies irreducibility
                return "irr", None
    raise ChopBudgetExceeded(f"no resolution after {budget} trials at dimension {dim}")


def restrict_to_submodule(F: FqField, mats, rows: np.ndarray,
                          pivots: list[int]) -> list[np.ndarray]:
    out = []
    for A in mats:
        images = la.matmul(F, rows, la.transpose(A))
        C = la.coords_in_rref(F, rows, pivots, images)
        out.append(la.transpose(C))
    return out


def quotient_module(F: FqField, mats, rows: np.ndarray, pivots: list[int],
                    dim: int) -> list[np.ndarray]:
    npiv = [c for c in range(dim) if c not in pivots]
    out = []
    for A in mats:
        U = la.transpose(A)[npiv]  # rows = images of the complement basis vectors
        CU = np.ascontiguousarray(U[:, pivots, :])
        R = (U - la.matmul(F, CU, rows)) % F.p
        out.append(np.ascontiguousarray(R[:, npiv, :].swapaxes(0, 1)))
    return out


def chop_matrices(F: FqField, mats, dim: int, rng,
                  budget: int = 200) -> list[tuple[list[np.ndarray], int]]:
    """Composition factors (with repetition) of the module given by the matrices."""
    if dim == 0:
        return []
    stack = [(mats, dim)]
    factors = []
    while stack:
        cur_mats, cur_dim = stack.pop()
        verdict, rows = _split_step(F, cur_mats, cur_dim, rng, budget)
        if verdict == "irr":
            factors.append((cur_mats, cur_dim))
            continue
        rows, pivots = la.rref(F, rows)
        sub = restrict_to_submodule(F, cur_mats, rows, pivots)
        quo = quotient_module(F, cur_mats, rows, pivots, cur_dim)
        stack.append((sub, rows.shape[0]))
        stack.append((quo, cur_dim - rows.shape[0]))
    return factors


def endomorphism_dim(F: FqField, mats, dim: int) -> int:
    """Dimension of the algebra of matrices commuting with all generator matrices."""
    if not mats:
        return dim * dim
    m2 = dim * dim
    big = la.zeros(F, len(mats) * m2, m2)
    for gidx, A in enumerate(mats):
        base = gidx * m2
        for i in range(dim):
            for j in range(dim):
                ridx = base + i * dim + j
                for k in range(dim):
                    # coefficient of X[i,k] in (XA)_{ij}: A[k,j]
                    big[ridx, i * dim + k] = la.add(F, big[ridx, i * dim + k], A[k, j])
                    # coefficient of X[k,j] in (AX)_{ij}: A[i,k], subtracted
                    big[ridx, k * dim + j] = la.sub(F, big[ridx, k * dim + j], A[i, k])
    return la.nullspace(F, big).shape[0]


# -- twists and isomorphism --

def frobenius_twist(rep: MatRep, m: int) -> MatRep:
    """Entry-wise p^m power of all generator matrices (the Galois twist)."""
    F = rep.field
    return MatRep(rep.group, F, [la.frob_entrywise(F, A, m) for A in rep.matrices],
                  rep.dimension)


def _standard_basis(F: FqField, mats, seed: np.ndarray) -> np.ndarray | None:
    """Deterministic spanning procedure: seed first, then generator images in order.

    Returns the ordered basis rows, or None if the seed does not generate.
    """
    n = seed.shape[0]
    echelon = la.RowBasis(F, n)
    ordered = []
    echelon.insert(np.array(seed))
    ordered.append(np.array(seed) % F.p)
    head = 0
    while head < len(ordered) and echelon.dim < n:
        v = ordered[head]
        head += 1
        for A in mats:
            w = la.matvec(F, A, v)
            if echelon.insert(np.array(w)):
                ordered.append(w)
    if echelon.dim != n:
        return None
    return np.stack(ordered)


def is_isomorphic(M: MatRep, N: MatRep, rng=None, trials: int = 100,
                  fingerprints: tuple | None = None) -> bool:
    """Isomorphism test for absolutely irreducible modules over the same field.

    Dimension and trace fingerprints decide; a standard-basis intertwiner
    confirms positives exactly.
    """
    if M.dimension != N.dimension or M.field != N.field:
        return False
    if fingerprints is not None and fingerprints[0] != fingerprints[1]:
        return False
    F = M.field
    if rng is None:
        rng = np.random.default_rng(0)
    n = M.dimension
    if n == 1 and not M.matrices:
        return True
    for _ in range(trials):
        word = _random_word(rng, len(M.matrices), F.q)
        thM = evaluate_word(F, M.matrices, word, n)
        v = la.random_matrix(F, rng, (n,))
        if not np.any(v):
            continue
        rel = la.annihilator_poly(F, lambda u: la.matvec(F, thM, u), v, n)
        for lam in pf.roots(F, rel):
            kM = la.nullspace(F, _shift_diag(F, thM, lam))
            if kM.shape[0] != 1:
                continue
            thN = evaluate_word(F, N.matrices, word, n)
            kN = la.nullspace(F, _shift_diag(F, thN, lam))
            if kN.shape[0] != 1:
                return False
            bM = _standard_basis(F, M.matrices, kM[0])
            bN = _standard_basis(F, N.matrices, kN[0])
            if bM is None or bN is None:
                continue
            # express both modules in their standard bases and compare actions
            cM = _action_in_basis(F, M.matrices, bM)
            cN = _action_in_basis(F, N.matrices, bN)
            return all(np.array_equal(a, b) for a, b in zip(cM, cN))
    raise ChopBudgetExceeded("no separating element found for the isomorphism test")


def _action_in_basis(F: FqField, mats, basis: np.ndarray) -> list[np.ndarray]:
    inv = la.invert(F, la.transpose(basis))  # columns are basis vectors
    out = []
    for A in mats:
        out.append(la.matmul(F, inv, la.matmul(F, A, la.transpose(basis))))
    return out


def class_count_oracle(G: PermGroup, p: int, m: int,
                       classes=None) -> int:
    """Number of p-regular conjugacy classes fixed by g -> g^(p^m) (computed directly)."""
    from .groups import conjugacy_classes, _power
    if classes is None:
        classes = conjugacy_classes(G, p)
    e = p**m
    count = 0
    for c in classes:
        if c.element_order % p == 0:
            continue
        if _power(c.representative, e) in c.members:
            count += 1
    return count
