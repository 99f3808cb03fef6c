"""Builtin group constructions, group-file ingestion, and the default corpus."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass

from .errors import ParseError
from .gf import is_prime
from .groups import DEFAULT_ORDER_GUARD, Perm, PermGroup


def cyclic(n: int) -> PermGroup:
    if n < 1:
        raise ParseError("cyclic group order must be positive")
    if n == 1:
        return PermGroup(1, [], name="C1")
    return PermGroup(n, [Perm([(i + 1) % n for i in range(n)])], name=f"C{n}")


def dihedral(n: int) -> PermGroup:
    """Dihedral group of order 2n acting on n points."""
    if n < 3:
        raise ParseError("dihedral parameter must be at least 3")
    rot = Perm([(i + 1) % n for i in range(n)])
    ref = Perm([(n - i) % n for i in range(n)])
    return PermGroup(n, [rot, ref], name=f"D{2 * n}")


def symmetric(n: int) -> PermGroup:
    if n < 1:
        raise ParseError("symmetric group degree must be positive")
    if n == 1:
        return PermGroup(1, [], name="S1")
    gens = [Perm([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(Perm([(i + 1) % n for i in range(n)]))
    return PermGroup(n, gens, name=f"S{n}")


def alternating(n: int) -> PermGroup:
    if n < 3:
        return PermGroup(max(n, 1), [], name=f"A{n}")
    three = Perm([1, 2, 0] + list(range(3, n)))
    if n == 3:
        return PermGroup(3, [three], name="A3")
    if n % 2 == 1:
        big = Perm([(i + 1) % n for i in range(n)])
    else:
        big = Perm([0] + [1 + (i % (n - 1)) for i in range(1, n)])
    return PermGroup(n, [three, big], name=f"A{n}")


def klein4() -> PermGroup:
    return PermGroup(4, [Perm([1, 0, 3, 2]), Perm([2, 3, 0, 1])], name="V4")


def quaternion8() -> PermGroup:
    """Q8 in its regular action (elements ordered 1, a, a^2, a^3, b, ab, a^2b, a^3b)."""
    a = Perm([1, 2, 3, 0, 5, 6, 7, 4])
    b = Perm([4, 7, 6, 5, 2, 1, 0, 3])
    return PermGroup(8, [a, b], name="Q8")


def sl_2_3() -> PermGroup:
    """SL(2,3) acting on the 8 nonzero vectors of F_3^2."""
    vectors = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]
    index = {v: i for i, v in enumerate(vectors)}

    def act(mat):
        images = []
        for (a, b) in vectors:
            images.append(index[((mat[0][0] * a + mat[0][1] * b) % 3,
                                 (mat[1][0] * a + mat[1][1] * b) % 3)])
        return Perm(images)

    g1 = act([[1, 1], [0, 1]])
    g2 = act([[0, 2], [1, 0]])
    return PermGroup(8, [g1, g2], name="SL(2,3)")


def direct_product(G: PermGroup, H: PermGroup, name: str | None = None) -> PermGroup:
    dg, dh = G.degree, H.degree
    gens = []
    for g in G.generators:
        gens.append(Perm(list(g.images) + list(range(dg, dg + dh))))
    for h in H.generators:
        gens.append(Perm(list(range(dg)) + [dg + x for x in h.images]))
    return PermGroup(dg + dh, gens, name=name or f"{G.name}x{H.name}")


_ALIASES = {
    "klein4": klein4,
    "v4": klein4,
    "quaternion8": quaternion8,
    "q8": quaternion8,
    "sl(2,3)": sl_2_3,
    "sl23": sl_2_3,
}

_FAMILY = {
    "cyclic": cyclic,
    "dihedral": dihedral,
    "symmetric": symmetric,
    "alternating": alternating,
}

_SHORT = {"c": cyclic, "s": symmetric, "a": alternating}


def _parse_atom(token: str) -> PermGroup:
    t = token.strip().lower()
    if t in _ALIASES:
        return _ALIASES[t]()
    m = re.fullmatch(r"([a-z]+)\s+(\d+)", t)
    if m and m.group(1) in _FAMILY:
        return _FAMILY[m.group(1)](int(m.group(2)))
    m = re.fullmatch(r"([csa])(\d+)", t)
    if m:
        return _SHORT[m.group(1)](int(m.group(2)))
    m = re.fullmatch(r"d(\d+)", t)
    if m:
        order = int(m.group(1))
        if order % 2 != 0:
            raise ParseError(f"dihedral order must be even: {token!r}")
        return dihedral(order // 2)
    raise ParseError(f"unknown builtin group {token!r}")


def parse_builtin(spec: str) -> PermGroup:
    """Builtin expression, with 'x' separating direct factors."""
    parts = re.split(r"\s+x\s+|(?<=\w)x(?=[A-Za-z])|×", spec.strip())
    groups = [_parse_atom(p) for p in parts if p.strip()]
    if not groups:
        raise ParseError(f"empty group expression {spec!r}")
    out = groups[0]
    for extra in groups[1:]:
        out = direct_product(out, extra)
    if len(groups) > 1:
        out.name = "x".join(g.name for g in groups)
    return out


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_group_text(text: str, source_name: str = "<group file>",
                     order_guard: int = DEFAULT_ORDER_GUARD) -> PermGroup:
    """Group file: line 1 = degree, then one generator per nonempty line in cycle notation."""
    lines = text.splitlines()
    degree = None
    gens = []
    lineno = 0
    for raw in lines:
        lineno += 1
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if degree is None:
            try:
                degree = int(line)
            except ValueError:
                raise ParseError(f"expected the degree on the first line of {source_name}",
                                 line=lineno)
            if degree < 1:
                raise ParseError("degree must be positive", line=lineno)
            continue
        stripped = re.sub(r"\s+", " ", line)
        cycles = []
        rest = re.sub(_CYCLE_RE, "", stripped).strip()
        if rest:
            raise ParseError(f"unexpected text {rest!r} in generator", line=lineno,
                             column=raw.find(rest.split()[0]) + 1 if rest.split() else None)
        for m in _CYCLE_RE.finditer(stripped):
            body = m.group(1).strip()
            if not body:
                continue
            try:
                pts = [int(tok) for tok in re.split(r"[,\s]+", body) if tok]
            except ValueError:
                raise ParseError(f"bad cycle {m.group(0)!r}", line=lineno,
                                 column=m.start() + 1)
            if any(pt < 1 or pt > degree for pt in pts):
                raise ParseError(f"point out of range in {m.group(0)!r}", line=lineno,
                                 column=m.start() + 1)
            if len(set(pts)) != len(pts):
                raise ParseError(f"repeated point in cycle {m.group(0)!r}", line=lineno,
                                 column=m.start() + 1)
            cycles.append([pt - 1 for pt in pts])
        seen: set[int] = set()
        for cyc in cycles:
            if seen & set(cyc):
                raise ParseError("cycles are not disjoint", line=lineno)
            seen |= set(cyc)
        gens.append(Perm.from_cycles(cycles, degree))
    if degree is None:
        raise ParseError(f"{source_name} contains no degree line")
    name = os.path.splitext(os.path.basename(source_name))[0]
    return PermGroup(degree, gens or [Perm.identity(degree)], name=name,
                     order_guard=order_guard)


def parse_group(source: str, order_guard: int = DEFAULT_ORDER_GUARD) -> PermGroup:
    """Builtin name (e.g. 'symmetric 4', 'C7', 'cyclic 3 x symmetric 3') or a group file path."""
    if os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            return parse_group_text(fh.read(), source_name=source, order_guard=order_guard)
    G = parse_builtin(source)
    G.order_guard = order_guard
    return G


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    construction: str
    primes: tuple[int, ...] | None = None  # None: all primes dividing the order

    def resolve(self, order_guard: int = DEFAULT_ORDER_GUARD) -> PermGroup:
        G = parse_group(self.construction, order_guard=order_guard)
        G.name = self.name
        return G

    def primes_for(self, G: PermGroup) -> list[int]:
        if self.primes is not None:
            return list(self.primes)
        n = G.order
        return [p for p in range(2, n + 1) if is_prime(p) and n % p == 0]


def default_corpus() -> list[CorpusEntry]:
    """Small groups covering p-groups, p'-groups, nontrivial Galois action on
    blocks, mixed defects, and nonsolvable cases."""
    return [
        CorpusEntry("C2", "cyclic 2"),
        CorpusEntry("C3", "cyclic 3"),
        CorpusEntry("C7", "cyclic 7", primes=(2, 7)),
        CorpusEntry("S3", "symmetric 3"),
        CorpusEntry("D8", "dihedral 4"),
        CorpusEntry("Q8", "quaternion8"),
        CorpusEntry("A4", "alternating 4"),
        CorpusEntry("SL(2,3)", "sl(2,3)"),
        CorpusEntry("S4", "symmetric 4"),
        CorpusEntry("C3xS3", "cyclic 3 x symmetric 3"),
        CorpusEntry("A5", "alternating 5"),
        CorpusEntry("S5", "symmetric 5"),
    ]
