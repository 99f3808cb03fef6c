"""Dense exact linear algebra over F_{p^m}.

Matrices are numpy int64 tensors of shape (..., d) where d is the field degree
and the last axis holds polynomial-residue coefficients in [0, p).  Products
are computed as d small integer contractions followed by one reduction against
the defining polynomial, so everything stays vectorized and exact.
"""

from __future__ import annotations

import numpy as np

from .gf import FqField


def zeros(F: FqField, *shape) -> np.ndarray:
    return np.zeros(shape + (F.degree,), dtype=np.int64)


def eye(F: FqField, n: int) -> np.ndarray:
    out = zeros(F, n, n)
    out[np.arange(n), np.arange(n), 0] = 1
    return out


def from_int(F: FqField, M) -> np.ndarray:
    """Integer array (prime-field entries) -> coefficient tensor."""
    M = np.asarray(M, dtype=np.int64) % F.p
    out = np.zeros(M.shape + (F.degree,), dtype=np.int64)
    out[..., 0] = M
    return out


def from_index(F: FqField, I) -> np.ndarray:
    """Index array -> coefficient tensor."""
    I = np.asarray(I, dtype=np.int64)
    return F.COEFFS[I].astype(np.int64)


def to_index(F: FqField, A: np.ndarray) -> np.ndarray:
    """Coefficient tensor -> index array (for hashing / serialization / tables)."""
    return (np.asarray(A, dtype=np.int64) @ F.PACK).astype(np.int64)


def is_zero(A: np.ndarray) -> bool:
    return not np.any(A)


def add(F: FqField, A, B) -> np.ndarray:
    return (A + B) % F.p


def sub(F: FqField, A, B) -> np.ndarray:
    return (A - B) % F.p


def neg(F: FqField, A) -> np.ndarray:
    return (-np.asarray(A)) % F.p


def _reduce(F: FqField, conv: np.ndarray) -> np.ndarray:
    """Reduce (..., 2d-1) raw convolution coefficients mod (defining poly, p)."""
    lead = conv.shape[:-1]
    flat = conv.reshape(-1, conv.shape[-1])
    return ((flat @ F.RED) % F.p).reshape(lead + (F.degree,))


def mul_pointwise(F: FqField, X, Y) -> np.ndarray:
    """Broadcasted entrywise field product of coefficient tensors."""
    X = np.asarray(X)
    Y = np.asarray(Y)
    d = F.degree
    shape = np.broadcast_shapes(X.shape[:-1], Y.shape[:-1])
    conv = np.zeros(shape + (2 * d - 1,), dtype=np.int64)
    for a in range(d):
        conv[..., a:a + d] += X[..., a:a + 1] * Y
    return _reduce(F, conv)


def scale(F: FqField, c, A) -> np.ndarray:
    """Scalar (coeff vector of shape (d,)) times tensor."""
    return mul_pointwise(F, np.asarray(c).reshape((1,) * (np.asarray(A).ndim - 1) + (F.degree,)), A)


def matmul(F: FqField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """(n,m,d) @ (m,k,d) -> (n,k,d)."""
    d = F.degree
    n, m = A.shape[0], A.shape[1]
    k = B.shape[1]
    conv = np.zeros((n, k, 2 * d - 1), dtype=np.int64)
    for a in range(d):
        conv[:, :, a:a + d] += np.tensordot(A[:, :, a], B, axes=(1, 0))
    return _reduce(F, conv)


def matvec(F: FqField, A: np.ndarray, v: np.ndarray) -> np.ndarray:
    """(n,m,d) applied to vector (m,d) -> (n,d)."""
    d = F.degree
    conv = np.zeros((A.shape[0], 2 * d - 1), dtype=np.int64)
    for a in range(d):
        conv[:, a:a + d] += A[:, :, a] @ v
    return _reduce(F, conv)


def apply_rows(F: FqField, A: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Apply the operator A to each row of V (rows are module vectors): rows of A@V^T, as rows."""
    return matmul(F, V, A.swapaxes(0, 1))


def transpose(A: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(A.swapaxes(0, 1))


def inv_scalar(F: FqField, c) -> np.ndarray:
    idx = int(np.asarray(c, dtype=np.int64) @ F.PACK)
    return F.COEFFS[F.inv_idx(idx)].astype(np.int64)


def frob_entrywise(F: FqField, A: np.ndarray, m: int = 1) -> np.ndarray:
    """Entrywise x -> x^(p^m)."""
    if m % F.degree == 0:
        return np.array(A, dtype=np.int64)
    idx = to_index(F, A)
    e = pow(F.p, m, F.q - 1)
    out = np.zeros_like(idx)
    nz = idx != 0
    out[nz] = F.EXP[(F.LOG[idx[nz]] * e) % (F.q - 1)]
    return from_index(F, out)


def random_matrix(F: FqField, rng, shape) -> np.ndarray:
    return np.asarray(rng.integers(0, F.p, size=tuple(shape) + (F.degree,)), dtype=np.int64)


def rref(F: FqField, M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns (R, pivot column list)."""
    R = np.array(M, dtype=np.int64) % F.p
    rows, cols = R.shape[0], R.shape[1]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(np.any(R[r:, c, :] != 0, axis=1))[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            R[[r, pr]] = R[[pr, r]]
        inv = inv_scalar(F, R[r, c])
        R[r] = mul_pointwise(F, inv.reshape(1, -1), R[r])
        others = np.nonzero(np.any(R[:, c, :] != 0, axis=1))[0]
        others = others[others != r]
        if others.size:
            factors = R[others, c, :]  # (k, d)
            prod = mul_pointwise(F, factors[:, None, :], R[r][None, :, :])
            R[others] = (R[others] - prod) % F.p
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(F: FqField, M: np.ndarray) -> int:
    return len(rref(F, M)[1])


def nullspace(F: FqField, M: np.ndarray) -> np.ndarray:
    """Right nullspace: rows of the result are vectors v with M v = 0; rows in rref."""
    n = M.shape[1]
    R, pivots = rref(F, M)
    free = [c for c in range(n) if c not in pivots]
    basis = zeros(F, len(free), n)
    for bi, fc in enumerate(free):
        basis[bi, fc, 0] = 1
        for ri, pc in enumerate(pivots):
            basis[bi, pc] = (-R[ri, fc]) % F.p
    return basis


def coords_in_rref(F: FqField, B: np.ndarray, pivots: list[int], V: np.ndarray,
                   check: bool = True) -> np.ndarray:
    """Coordinates of the rows of V with respect to the rref basis rows B.

    Valid only when every row of V lies in the row space of B; with `check`
    the residual is verified to be zero.
    """
    C = np.ascontiguousarray(V[:, pivots, :])
    if check:
        resid = (V - matmul(F, C, B)) % F.p
        if np.any(resid):
            raise ValueError("vector not in the row space")
    return C


def invert(F: FqField, M: np.ndarray) -> np.ndarray:
    n = M.shape[0]
    aug = np.concatenate([M, eye(F, n)], axis=1)
    R, pivots = rref(F, aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return np.ascontiguousarray(R[:, n:, :])


def annihilator_poly(F: FqField, apply_fn, v: np.ndarray, maxdim: int) -> list[int]:
    """Monic minimal polynomial f (as index list, ascending) with f(T) v = 0.

    apply_fn is the linear operator T on vectors of shape (n, d); the Krylov
    sequence v, Tv, T^2 v, ... is tracked with augmented coordinates so the
    first dependency yields the annihilator exactly.
    """
    n = v.shape[0]
    width = n + maxdim + 1
    basis = RowBasis(F, width)
    cur = np.array(v) % F.p
    for k in range(maxdim + 1):
        aug = zeros(F, width)  # (width, d)
        aug[:n] = cur
        aug[n + k, 0] = 1
        r = basis.reduce(aug)
        if not np.any(r[:n]):
            tail = r[n:n + k + 1]
            idxs = to_index(F, tail)
            lead = int(idxs[k])
            inv = F.inv_idx(lead)
            return [F.mul_idx(inv, int(i)) for i in idxs]
        basis.insert(aug)
        cur = apply_fn(cur)
    raise RuntimeError("no annihilator found within the dimension bound")  # unreachable


class RowBasis:
    """Incrementally maintained rref basis of row vectors (spin/echelon workhorse).

    Rows are kept fully reduced, so expressing a new vector needs a single
    matrix product rather than sequential elimination.
    """

    def __init__(self, F: FqField, n: int):
        self.F = F
        self.n = n
        self.rows = zeros(F, 0, n)
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        """Residual of v after reduction against the basis."""
        if not self.pivots:
            return v % self.F.p
        c = v[self.pivots, :][None, :, :]
        prod = matmul(self.F, c, self.rows)[0]
        return (v - prod) % self.F.p

    def insert(self, v: np.ndarray) -> bool:
        """Reduce v and insert the residual if nonzero.  Returns True if the basis grew."""
        return self.insert_get(v) is not None

    def insert_get(self, v: np.ndarray) -> np.ndarray | None:
        """Like insert, but returns the normalized residual row that was added (or None)."""
        F = self.F
        r = self.reduce(v)
        nzcols = np.nonzero(np.any(r != 0, axis=1))[0]
        if nzcols.size == 0:
            return None
        pc = int(nzcols[0])
        r = mul_pointwise(F, inv_scalar(F, r[pc]).reshape(1, -1), r)
        if self.dim:
            facs = self.rows[:, pc, :]
            if np.any(facs):
                self.rows = (self.rows - mul_pointwise(F, facs[:, None, :], r[None, :, :])) % F.p
        pos = int(np.searchsorted(np.asarray(self.pivots, dtype=np.int64), pc))
        self.rows = np.concatenate([self.rows[:pos], r[None], self.rows[pos:]], axis=0)
        self.pivots.insert(pos, pc)
        return r

    def contains(self, v: np.ndarray) -> bool:
        return not np.any(self.reduce(v))

    def matrix(self) -> np.ndarray:
        return np.array(self.rows)
