"""Univariate polynomial arithmetic over an FqField.

Polynomials are lists of element indices in ascending degree with no trailing
zeros (the zero polynomial is the empty list).  Degrees stay tiny here
(bounded by class counts or module dimensions), so plain list arithmetic is
the right tool.
"""

from __future__ import annotations

from .gf import FqField


def trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f: list[int]) -> int:
    return len(f) - 1


def poly_add(F: FqField, f, g):
    n = max(len(f), len(g))
    out = [0] * n
    for i in range(n):
        a = f[i] if i < len(f) else 0
        b = g[i] if i < len(g) else 0
        out[i] = F.add_idx(a, b)
    return trim(out)


def poly_neg(F: FqField, f):
    return [F.neg_idx(a) for a in f]


def poly_sub(F: FqField, f, g):
    return poly_add(F, f, poly_neg(F, g))


def poly_mul(F: FqField, f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = F.add_idx(out[i + j], F.mul_idx(a, b))
    return trim(out)


def poly_scale(F: FqField, c: int, f):
    return trim([F.mul_idx(c, a) for a in f])


def poly_divmod(F: FqField, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    q = [0] * max(len(f) - len(g) + 1, 0)
    inv = F.inv_idx(g[-1])
    while len(f) >= len(g) and trim(f):
        sh = len(f) - len(g)
        c = F.mul_idx(f[-1], inv)
        q[sh] = c
        for i, b in enumerate(g):
            f[sh + i] = F.add_idx(f[sh + i], F.neg_idx(F.mul_idx(c, b)))
        trim(f)
    return trim(q), trim(f)


def poly_mod(F: FqField, f, g):
    return poly_divmod(F, f, g)[1]


def poly_gcd(F: FqField, f, g):
    f, g = list(f), list(g)
    while g:
        f, g = g, poly_mod(F, f, g)
    if f:
        f = poly_scale(F, F.inv_idx(f[-1]), f)
    return f


def poly_extgcd(F: FqField, f, g):
    """Returns (d, u, v) with u*f + v*g = d = monic gcd."""
    r0, r1 = list(f), list(g)
    u0, u1 = [1], []
    v0, v1 = [], [1]
    while r1:
        q, r = poly_divmod(F, r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, poly_sub(F, u0, poly_mul(F, q, u1))
        v0, v1 = v1, poly_sub(F, v0, poly_mul(F, q, v1))
    if r0:
        c = F.inv_idx(r0[-1])
        r0 = poly_scale(F, c, r0)
        u0 = poly_scale(F, c, u0)
        v0 = poly_scale(F, c, v0)
    return r0, u0, v0


def poly_eval(F: FqField, f, a: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = F.add_idx(F.mul_idx(acc, a), c)
    return acc


def poly_pow_mod(F: FqField, f, e: int, mod):
    r = [1]
    base = poly_mod(F, f, mod)
    while e:
        if e & 1:
            r = poly_mod(F, poly_mul(F, r, base), mod)
        base = poly_mod(F, poly_mul(F, base, base), mod)
        e >>= 1
    return r


def poly_derivative(F: FqField, f):
    out = []
    for i in range(1, len(f)):
        c = f[i]
        k = i % F.p
        acc = 0
        for _ in range(k):
            acc = F.add_idx(acc, c)
        out.append(acc)
    return trim(out)


def roots(F: FqField, f) -> list[int]:
    """All roots in the field, as element indices in increasing order."""
    return [a for a in range(F.q) if poly_eval(F, f, a) == 0]


def squarefree_part(F: FqField, f):
    d = poly_derivative(F, f)
    if not d:
        # f is a p-th power: take the p-th root and recurse
        root = []
        for i in range(0, len(f), F.p):
            # coefficient (f_i)^(1/p) = f_i^(p^(degree-1))
            root.append(F.frob_idx(f[i], F.degree - 1) if F.degree > 1 else f[i])
        return squarefree_part(F, trim(root))
    g = poly_gcd(F, f, d)
    sf, _ = poly_divmod(F, f, g)
    if degree(g) > 0:
        rest = squarefree_part(F, g)
        extra, _ = poly_divmod(F, rest, poly_gcd(F, sf, rest))
        sf = poly_mul(F, sf, extra)
    if sf:
        sf = poly_scale(F, F.inv_idx(sf[-1]), sf)
    return sf


def factor_squarefree(F: FqField, f, rng) -> list[list[int]]:
    """Irreducible factors of a monic squarefree polynomial (distinct/equal-degree splitting)."""
    out: list[list[int]] = []
    x = [0, 1]
    h = list(x)
    rest = list(f)
    k = 0
    while degree(rest) > 0:
        k += 1
        if 2 * k > degree(rest):
            out.append(rest)
            break
        h = poly_pow_mod(F, h, F.q, rest)
        g = poly_gcd(F, poly_sub(F, h, x), rest)
        if degree(g) > 0:
            out.extend(_equal_degree_split(F, g, k, rng))
            rest, _ = poly_divmod(F, rest, g)
            h = poly_mod(F, h, rest)
    return sorted(out, key=lambda p: (len(p), p))


def _equal_degree_split(F: FqField, f, k: int, rng) -> list[list[int]]:
    n = degree(f)
    if n == k:
        return [f]
    while True:
        a = [int(rng.integers(0, F.q)) for _ in range(n)]
        a = trim(a)
        if degree(a) < 1:
            continue
        if F.p == 2:
            # trace map sum_{i<k*degree(F)} a^(2^i)
            t = list(a)
            acc = list(a)
            for _ in range(k * F.degree - 1):
                acc = poly_mod(F, poly_mul(F, acc, acc), f)
                t = poly_add(F, t, acc)
            g = poly_gcd(F, t, f)
        else:
            e = (F.q**k - 1) // 2
            b = poly_pow_mod(F, a, e, f)
            g = poly_gcd(F, poly_sub(F, b, [1]), f)
        if 0 < degree(g) < n:
            h, _ = poly_divmod(F, f, g)
            return _equal_degree_split(F, g, k, rng) + _equal_degree_split(F, h, k, rng)


def factor(F: FqField, f, rng) -> list[list[int]]:
    """Irreducible factors of the squarefree part of f (multiplicities dropped)."""
    sf = squarefree_part(F, f)
    return factor_squarefree(F, sf, rng)
