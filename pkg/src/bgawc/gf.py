"""Exact arithmetic in F_{p^m}: field construction, Frobenius maps, Galois subgroups.

Elements are carried as integer indices 0..q-1 whose base-p digits are the
coefficients of the polynomial residue.  Matrix-level arithmetic lives in
:mod:`bgawc.linalg` and uses the coefficient-tensor layout; both views share
the tables built here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import FieldMismatch, GuardExceeded

# Primitive polynomials in the standard compatible-tower normalization, coefficient
# tuples in ascending degree, monic.  Entries are checked by the test suite
# (irreducibility and primitivity of x).
CONWAY_POLYNOMIALS = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (11, 1): (9, 1),
    (13, 1): (11, 1),
}

DEFAULT_FIELD_SIZE_GUARD = 4096


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(math.isqrt(n)) + 1):
        if n % d == 0:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def multiplicative_order(a: int, n: int) -> int:
    """Order of a modulo n; requires gcd(a, n) = 1."""
    if n == 1:
        return 1
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not invertible mod {n}")
    o = 1
    x = a % n
    while x != 1:
        x = x * a % n
        o += 1
    return o


# -- prime-field polynomial helpers used only during field construction --

def _pf_mulmod(a, b, f, p):
    m = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for s in range(len(prod) - 1, m - 1, -1):
        c = prod[s]
        if c:
            prod[s] = 0
            for t in range(m):
                prod[s - m + t] = (prod[s - m + t] - c * f[t]) % p
    out = (prod + [0] * m)[:m]
    return [v % p for v in out]


def _pf_powmod(a, e, f, p):
    m = len(f) - 1
    r = [1] + [0] * (m - 1)
    base = list(a) + [0] * (m - len(a))
    while e:
        if e & 1:
            r = _pf_mulmod(r, base, f, p)
        base = _pf_mulmod(base, base, f, p)
        e >>= 1
    return r


def _pf_gcd(a, b, p):
    a, b = list(a), list(b)

    def deg(u):
        d = len(u) - 1
        while d >= 0 and u[d] == 0:
            d -= 1
        return d

    while deg(b) >= 0:
        da, db = deg(a), deg(b)
        if da < db:
            a, b = b, a
            continue
        inv = pow(b[deg(b)], p - 2, p)
        while deg(a) >= deg(b) >= 0:
            sh = deg(a) - deg(b)
            c = a[deg(a)] * inv % p
            for i in range(deg(b) + 1):
                a[sh + i] = (a[sh + i] - c * b[i]) % p
        a, b = b, a
    d = deg(a)
    return [v % p for v in a[: d + 1]]


def _pf_irreducible(f, p) -> bool:
    m = len(f) - 1
    if m == 1:
        return True
    x = [0, 1] + [0] * (m - 2)
    if _pf_powmod(x, p**m, f, p) != (x + [0] * m)[:m]:
        return False
    for ell in prime_factors(m):
        xq = _pf_powmod(x, p ** (m // ell), f, p)
        g = [(a - b) % p for a, b in zip(xq, (x + [0] * m)[:m])]
        if len(_pf_gcd(list(f), g, p)) - 1 > 0:
            return False
    return True


def _least_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree m over F_p (fallback)."""
    for code in range(p**m):
        coeffs = []
        c = code
        for _ in range(m):
            coeffs.append(c % p)
            c //= p
        f = coeffs + [1]
        if f[0] != 0 and _pf_irreducible(f, p):
            return tuple(f)
    raise RuntimeError("no irreducible polynomial found")  # unreachable


def defining_polynomial(p: int, m: int) -> tuple[int, ...]:
    try:
        return CONWAY_POLYNOMIALS[(p, m)]
    except KeyError:
        return _least_irreducible(p, m)


class FqField:
    """The finite field F_{p^m} with an explicit monic irreducible defining polynomial.

    Immutable after construction; all tables are plain numpy constants, so
    instances are safe for concurrent reads.
    """

    def __init__(self, p: int, degree: int, poly: tuple[int, ...] | None = None,
                 size_guard: int = DEFAULT_FIELD_SIZE_GUARD):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if degree < 1:
            raise ValueError("degree must be positive")
        q = p**degree
        if q > size_guard:
            raise GuardExceeded(f"field size {q} exceeds guard {size_guard}")
        self.p = p
        self.degree = degree
        self.q = q
        self.poly = tuple(poly) if poly is not None else defining_polynomial(p, degree)
        if len(self.poly) != degree + 1 or self.poly[-1] != 1:
            raise ValueError("defining polynomial must be monic of the right degree")
        if not _pf_irreducible(list(self.poly), p):
            raise ValueError("defining polynomial is not irreducible")
        self._build_tables()
        self.t_root_index: int | None = None  # set by splitting_field
        self.t_root_order: int | None = None

    def _build_tables(self):
        p, d, q = self.p, self.degree, self.q
        # index <-> coefficient digit tables
        coeffs = np.zeros((q, d), dtype=np.int64)
        for idx in range(q):
            c = idx
            for i in range(d):
                coeffs[idx, i] = c % p
                c //= p
        self.COEFFS = coeffs
        self.PACK = np.array([p**i for i in range(d)], dtype=np.int64)
        # reduction matrix: row s gives x^s mod poly for s in 0..2d-2
        red = np.zeros((2 * d - 1, d), dtype=np.int64)
        for s in range(d):
            red[s, s] = 1
        cur = [0] * d  # x^{d} onward, start from x^{d-1} shifted
        cur = list(red[d - 1])
        for s in range(d, 2 * d - 1):
            nxt = [0] + cur[: d - 1]
            carry = cur[d - 1]
            if carry:
                for t in range(d):
                    nxt[t] = (nxt[t] - carry * self.poly[t]) % p
            cur = [v % p for v in nxt]
            red[s] = cur
        self.RED = red
        # discrete-log tables from a multiplicative generator
        gen = self._find_generator()
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        acc = [1] + [0] * (d - 1)
        for i in range(q - 1):
            idx = sum(int(acc[j]) * p**j for j in range(d))
            exp[i] = idx
            exp[i + q - 1] = idx
            log[idx] = i
            acc = _pf_mulmod(acc, gen, list(self.poly), p)
        self.EXP = exp
        self.LOG = log
        self.generator_index = int(exp[1]) if q > 2 else 1
        # Frobenius x -> x^p on indices
        frob = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            frob[a] = exp[(log[a] * p) % (q - 1)]
        self.FROB = frob

    def _find_generator(self):
        p, d, q = self.p, self.degree, self.q
        fac = prime_factors(q - 1)
        if d == 1:
            candidates = ([2, 3, 5, 7, 11, 13] + list(range(2, p)))
        else:
            candidates = None  # polynomial residue candidates below
        one = [1] + [0] * (d - 1)

        def order_ok(el):
            for ell in fac:
                if _pf_powmod(el, (q - 1) // ell, list(self.poly), p) == one:
                    return False
            return True

        if d >= 2:
            x = [0, 1] + [0] * (d - 2)
            if order_ok(x):
                return x
            for idx in range(2, q):
                el = [(idx // p**i) % p for i in range(d)]
                if order_ok(el):
                    return el
        else:
            for c in candidates:
                if c % p and order_ok([c % p]):
                    return [c % p]
        if q == 2:
            return [1]
        raise RuntimeError("no generator found")  # unreachable for a field

    # -- scalar arithmetic on indices --

    def add_idx(self, a: int, b: int) -> int:
        s = (self.COEFFS[a] + self.COEFFS[b]) % self.p
        return int(s @ self.PACK)

    def neg_idx(self, a: int) -> int:
        s = (-self.COEFFS[a]) % self.p
        return int(s @ self.PACK)

    def mul_idx(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.EXP[self.LOG[a] + self.LOG[b]])

    def inv_idx(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + str(self))
        return int(self.EXP[(self.q - 1 - self.LOG[a]) % (self.q - 1)])

    def pow_idx(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        return int(self.EXP[(self.LOG[a] * e) % (self.q - 1)])

    def frob_idx(self, a: int, m: int = 1) -> int:
        """a^(p^m) on indices."""
        if a == 0:
            return 0
        return int(self.EXP[(self.LOG[a] * pow(self.p, m, self.q - 1)) % (self.q - 1)])

    # -- element constructors --

    def element(self, value) -> "FqElement":
        """Coerce an int (reduced mod p, a prime-field value) or a coefficient sequence."""
        if isinstance(value, FqElement):
            if value.field != self:
                raise FieldMismatch("element from a different field")
            return value
        if isinstance(value, (int, np.integer)):
            return FqElement(self, int(value) % self.p)
        coeffs = [int(v) % self.p for v in value]
        if len(coeffs) > self.degree:
            raise ValueError("too many coefficients")
        coeffs += [0] * (self.degree - len(coeffs))
        return FqElement(self, int(np.dot(coeffs, self.PACK)))

    def from_prime_field(self, c: int) -> "FqElement":
        return FqElement(self, c % self.p)

    @property
    def zero(self) -> "FqElement":
        return FqElement(self, 0)

    @property
    def one(self) -> "FqElement":
        return FqElement(self, 1)

    @property
    def x(self) -> "FqElement":
        """The residue class of the defining variable."""
        if self.degree == 1:
            raise ValueError("prime field has no defining variable")
        return FqElement(self, self.p)

    def elements(self):
        return (FqElement(self, i) for i in range(self.q))

    def __repr__(self):
        return f"GF({self.p}^{self.degree})" if self.degree > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return (isinstance(other, FqField) and other.p == self.p
                and other.degree == self.degree and other.poly == self.poly)

    def __hash__(self):
        return hash((self.p, self.degree, self.poly))


@dataclass(frozen=True)
class FqElement:
    """A residue-class element of an FqField, stored as table index."""

    field: FqField
    idx: int

    def _check(self, other):
        if not isinstance(other, FqElement):
            other = self.field.element(other)
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FqElement(self.field, self.field.add_idx(self.idx, other.idx))

    __radd__ = __add__

    def __neg__(self):
        return FqElement(self.field, self.field.neg_idx(self.idx))

    def __sub__(self, other):
        other = self._check(other)
        return self + (-other)

    def __mul__(self, other):
        other = self._check(other)
        return FqElement(self.field, self.field.mul_idx(self.idx, other.idx))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.inverse()

    def __pow__(self, e: int):
        return FqElement(self.field, self.field.pow_idx(self.idx, e))

    def inverse(self):
        return FqElement(self.field, self.field.inv_idx(self.idx))

    def __bool__(self):
        return self.idx != 0

    def coeffs(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.field.COEFFS[self.idx])

    def __repr__(self):
        return f"Fq({self.field.p}^{self.field.degree}:{self.idx})"


def frobenius(x: FqElement, m: int = 1) -> FqElement:
    """x^(p^m), the m-fold Frobenius power."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return FqElement(x.field, x.field.frob_idx(x.idx, m))


@lru_cache(maxsize=None)
def _field_cached(p: int, degree: int) -> FqField:
    return FqField(p, degree)


def get_field(p: int, degree: int) -> FqField:
    return _field_cached(p, degree)


def splitting_field(p: int, t: int) -> FqField:
    """F_{p^d} with d = ord_t(p), carrying a distinguished primitive t-th root of unity.

    Every irreducible module and every central idempotent of a group algebra
    whose p'-exponent divides t is realizable over this field.
    """
    if t < 1:
        raise ValueError("t must be positive")
    if math.gcd(p, t) != 1:
        raise ValueError(f"t = {t} must be coprime to p = {p}")
    d = multiplicative_order(p, t)
    F = get_field(p, d)
    if F.t_root_order != t:
        # distinguished root: power of the table generator of exact order t
        xi = F.pow_idx(F.generator_index, (F.q - 1) // t) if t > 1 else 1
        F.t_root_index = xi
        F.t_root_order = t
    return F


@dataclass(frozen=True)
class GaloisSubgroup:
    """Subgroup <Frob^m> of the cyclic group Gal(F_{p^d}/F_p), given by a generator exponent."""

    ambient_degree: int
    generator_exponent: int

    def __post_init__(self):
        if self.ambient_degree % self.generator_exponent != 0:
            raise ValueError("generator exponent must divide the ambient degree")

    @property
    def is_trivial(self) -> bool:
        return self.generator_exponent == self.ambient_degree

    @property
    def order(self) -> int:
        return self.ambient_degree // self.generator_exponent


def galois_subgroups(d: int, m0: int = 1) -> list[GaloisSubgroup]:
    """All subgroups of <Frob^{m0}> inside Gal(F_{p^d}/F_p): one per m with m0 | m | d."""
    if d % m0 != 0:
        raise ValueError("m0 must divide d")
    return [GaloisSubgroup(d, m) for m in range(1, d + 1) if d % m == 0 and m % m0 == 0]
