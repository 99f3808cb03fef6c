import random

import numpy as np
import pytest

from bgawc import linalg as la
from bgawc.blocks import (ClassAlgebra, brauer_hom_coords,
                          central_character_oracle,
                          central_primitive_idempotents, decompose_idempotent,
                          galois_conjugate, is_fixed_by,
                          match_characters_to_blocks, minimal_field_degree,
                          nilradical, quotient_pushforward, weights_fixed_count)
from bgawc.errors import NotIdempotent, NotSplit, TNotStabilizing
from bgawc.gf import get_field, splitting_field
from bgawc.groups import (Perm, PermGroup, centralizer, closure_of,
                          exp_p_prime, normalizer, quotient_group,
                          whole_subgroup)


def C(n):
    return PermGroup(n, [Perm([(i + 1) % n for i in range(n)])], name=f"C{n}")


def S3():
    return PermGroup(3, [Perm([1, 0, 2]), Perm([1, 2, 0])], name="S3")


def full_block_data(G, p, field=None, expect_split=True):
    F = field or splitting_field(p, exp_p_prime(G, p))
    alg = ClassAlgebra(G, F, p)
    dec = central_primitive_idempotents(alg, expect_split=expect_split)
    if expect_split:
        chars = central_character_oracle(alg)
        match_characters_to_blocks(alg, dec, chars)
    return alg, dec


def test_structure_constants_c2():
    alg = ClassAlgebra(C(2), get_field(3, 1), 3)
    # C_g * C_g = C_1
    assert alg.constants[1, 1, 0] == 1 and alg.constants[1, 1, 1] == 0


def test_structure_constants_s3():
    alg = ClassAlgebra(S3(), get_field(3, 1), 3)
    # transposition class squared: 3*C_1 + 3*C_{3-cycles}
    assert alg.constants[1, 1, 0] == 3
    assert alg.constants[1, 1, 2] == 3
    assert alg.constants[1, 1, 1] == 0


def test_structure_constants_symmetry_and_identity():
    G = PermGroup(4, [Perm([1, 0, 2, 3]), Perm([1, 2, 3, 0])], name="S4")
    alg = ClassAlgebra(G, get_field(2, 2), 2)
    a = alg.constants
    r = alg.r
    assert np.array_equal(a, a.swapaxes(0, 1))
    for j in range(r):
        for k in range(r):
            assert a[alg.identity_class, j, k] == (1 if j == k else 0)
    sizes = np.array([c.size for c in alg.classes])
    for i in range(r):
        for j in range(r):
            assert int(a[i, j] @ sizes) == alg.classes[i].size * alg.classes[j].size
            assert (a[i, j] <= alg.classes[i].size * alg.classes[j].size).all()


def test_f3c2_block_idempotents():
    alg, dec = full_block_data(C(2), 3)
    keys = sorted(e.key() for e in dec.parts)
    assert keys == [(2, 1), (2, 2)]  # 2 + g and 2 + 2g
    assert all(e.defect == 0 for e in dec.parts)


def test_p_group_local():
    for G in [C(4), PermGroup(8, [Perm([1, 2, 3, 0, 5, 6, 7, 4]),
                                  Perm([4, 7, 6, 5, 2, 1, 0, 3])], name="Q8")]:
        alg, dec = full_block_data(G, 2)
        assert len(dec.parts) == 1
        assert np.array_equal(dec.parts[0].coords, alg.one())
        assert dec.parts[0].defect == (2 if G.order == 4 else 3)


def test_f8c7_seven_blocks_and_character_formula():
    F8 = splitting_field(2, 7)
    alg, dec = full_block_data(C(7), 2, field=F8)
    assert len(dec.parts) == 7
    # independent construction: e_j = sum_k xi^{-jk} g^k (1/7 = 1 in char 2)
    xi = F8.t_root_index
    expected = set()
    for j in range(7):
        coords = []
        for k in range(7):
            coords.append(F8.pow_idx(xi, (-j * k) % 7))
        # class order: sorted by (element order, size, min rep): identity first,
        # then g, ..., g^6 ordered by representative images
        expected.add(tuple(coords))
    got = set()
    for e in dec.parts:
        idx = la.to_index(F8, e.coords)
        # map back to exponent order: class of g^k
        key = []
        for k in range(7):
            rep = Perm([(i + k) % 7 for i in range(7)])
            key.append(int(idx[alg.class_of[rep]]))
        got.add(tuple(key))
    assert got == expected


def test_f2c7_three_rational_blocks():
    F2 = get_field(2, 1)
    alg, dec = full_block_data(C(7), 2, field=F2, expect_split=False)
    assert len(dec.parts) == 3
    with pytest.raises(NotSplit):
        full_block_data(C(7), 2, field=F2, expect_split=True)
    # brute force: all 128 vectors, idempotents form a lattice with 3 atoms
    import itertools
    idems = []
    for bits in itertools.product([0, 1], repeat=7):
        v = la.from_int(F2, np.array(bits))
        if alg.is_idempotent(v):
            idems.append(v)
    assert len(idems) == 8
    atoms = []
    for e in idems:
        if not np.any(e):
            continue
        proper = [f for f in idems if np.any(f) and not np.array_equal(f, e)
                  and np.array_equal(alg.mul(e, f), f)]
        if not proper:
            atoms.append(e)
    assert len(atoms) == 3
    atom_keys = {tuple(int(i) for i in la.to_index(F2, a)) for a in atoms}
    assert atom_keys == {e.key() for e in dec.parts}


def test_s3_mod3_single_block_omega():
    alg, dec = full_block_data(S3(), 3)
    assert len(dec.parts) == 1
    om = la.to_index(alg.field, dec.parts[0].central_character)
    assert list(om) == [1, 0, 2]
    assert dec.parts[0].defect == 1


def test_s3_mod2_two_blocks_defects():
    alg, dec = full_block_data(S3(), 2)
    assert len(dec.parts) == 2
    assert sorted(e.defect for e in dec.parts) == [0, 1]
    chars = central_character_oracle(alg)
    assert len(chars) == 2


def test_nilradical_dimensions():
    # Z(kP) for a p-group P: radical has codimension 1
    alg = ClassAlgebra(C(4), get_field(2, 1), 2)
    J = nilradical(alg)
    assert J.shape[0] == alg.r - 1
    # semisimple case: p coprime to the order
    alg2 = ClassAlgebra(C(5), get_field(2, 2) if False else splitting_field(2, 5), 2)
    assert nilradical(alg2).shape[0] == 0
    # the nilradical is an ideal: products with class sums stay inside
    algs3 = ClassAlgebra(S3(), splitting_field(2, 3), 2)
    J3 = nilradical(algs3)
    if J3.shape[0]:
        basis = la.RowBasis(algs3.field, algs3.r)
        for i in range(J3.shape[0]):
            basis.insert(np.array(J3[i]))
        for i in range(J3.shape[0]):
            for j in range(algs3.r):
                e = la.zeros(algs3.field, algs3.r)
                e[j, 0] = 1
                assert basis.contains(algs3.mul(J3[i], e))


def test_decomposition_axioms_and_osima():
    for G, p in [(S3(), 2), (S3(), 3), (C(7), 2),
                 (PermGroup(4, [Perm([1, 0, 2, 3]), Perm([1, 2, 3, 0])], name="S4"), 3)]:
        alg, dec = full_block_data(G, p)
        dec.verify()
        for e in dec.parts:
            for ci, cls in enumerate(alg.classes):
                if cls.element_order % p == 0:
                    assert not np.any(e.coords[ci])


def test_oracle_count_matches_blocks():
    for G, p in [(S3(), 2), (C(7), 2), (S3(), 3)]:
        alg, dec = full_block_data(G, p)
        assert len(central_character_oracle(alg)) == len(dec.parts)


def test_brauer_hom_basics():
    G = S3()
    p = 3
    alg, dec = full_block_data(G, p)
    A3 = closure_of(G, [Perm([1, 2, 0])])
    CG = centralizer(G, A3)
    target = ClassAlgebra(CG.as_group("C_G(A3)"), alg.field, p)
    # br_{A3}(1) = 1 over C_G(A3) = A3
    img = brauer_hom_coords(alg, alg.one(), A3.generating_set(), target)
    assert np.array_equal(img, target.one())
    # P = 1: identity map
    triv = closure_of(G, [])
    whole = ClassAlgebra(G, alg.field, p)
    img2 = brauer_hom_coords(alg, dec.parts[0].coords, triv.generating_set(), whole)
    assert np.array_equal(img2, dec.parts[0].coords)


def test_brauer_hom_kills_defect_zero():
    G = S3()
    alg, dec = full_block_data(G, 2)
    b0 = [e for e in dec.parts if e.defect == 0][0]
    P = closure_of(G, [Perm([1, 0, 2])])  # a 2-subgroup
    CG = centralizer(G, P)
    target = ClassAlgebra(CG.as_group("cent"), alg.field, 2)
    img = brauer_hom_coords(alg, b0.coords, P.generating_set(), target)
    assert not np.any(img)


def test_brauer_hom_multiplicative_on_fixed_points():
    """br_P(xy) = br_P(x) br_P(y) for P-conjugation-invariant elements (element level)."""
    G = PermGroup(4, [Perm([1, 0, 2, 3]), Perm([1, 2, 3, 0])], name="S4")
    G.materialize()
    p = 2
    P = closure_of(G, [Perm([1, 0, 3, 2]), Perm([2, 3, 0, 1])])
    Cg = centralizer(G, P)
    F = splitting_field(p, exp_p_prime(G, p))
    rnd = random.Random(42)
    els = sorted(G.elements)
    # P-orbit sums form a basis of the fixed points
    orbits = []
    seen = set()
    for g in els:
        if g in seen:
            continue
        orb = {x * g * x.inverse() for x in P.elements}
        seen |= orb
        orbits.append(sorted(orb))

    def rand_fixed_elt():
        out = {}
        for orb in orbits:
            if rnd.random() < 0.4:
                c = rnd.randrange(F.q)
                for g in orb:
                    out[g] = c
        return out

    def mul_elt(x, y):
        out = {}
        for g, cg in x.items():
            for h, ch in y.items():
                k = g * h
                out[k] = F.add_idx(out.get(k, 0), F.mul_idx(cg, ch))
        return {g: c for g, c in out.items() if c}

    def br(x):
        return {g: c for g, c in x.items() if g in Cg.elements}

    for _ in range(200):
        x, y = rand_fixed_elt(), rand_fixed_elt()
        assert br(mul_elt(x, y)) == mul_elt(br(x), br(y))


def test_brauer_image_invariant_under_normalizer():
    G = PermGroup(4, [Perm([1, 0, 2, 3]), Perm([1, 2, 3, 0])], name="S4")
    alg, dec = full_block_data(G, 2)
    P = closure_of(G, [Perm([1, 0, 3, 2])])
    N = normalizer(G, P)
    # element-level coefficient function of br_P(b): invariant under N-conjugation
    b = dec.parts[0].coords
    Cg = centralizer(G, P)

    def coeff(g):
        if g not in Cg.elements:
            return 0
        return int(la.to_index(alg.field, b[alg.class_of[g]]))

    for n in N.generating_set():
        for g in Cg.elements:
            assert coeff(g) == coeff(n * g * n.inverse())


def test_quotient_pushforward_s3():
    G = S3()
    p = 3
    alg, dec = full_block_data(G, p)
    A3 = closure_of(G, [Perm([1, 2, 0])])
    Q, proj = quotient_group(whole_subgroup(G), A3)
    qalg = ClassAlgebra(Q, alg.field, p)
    img = quotient_pushforward(alg, alg.one(), proj, qalg)
    assert np.array_equal(img, qalg.one())
    qdec = central_primitive_idempotents(qalg)
    chars = central_character_oracle(qalg)
    match_characters_to_blocks(qalg, qdec, chars)
    assert len(qdec.parts) == 2
    assert all(e.defect == 0 for e in qdec.parts)


def test_minimal_field_and_conjugates_c7():
    F8 = splitting_field(2, 7)
    alg, dec = full_block_data(C(7), 2, field=F8)
    m0s = sorted(e.minimal_field_degree for e in dec.parts)
    assert m0s == [1, 3, 3, 3, 3, 3, 3]
    keymap = {e.key(): i for i, e in enumerate(dec.parts)}
    perm = {}
    for i, e in enumerate(dec.parts):
        cc = galois_conjugate(alg, e.coords, 1)
        perm[i] = keymap[tuple(int(v) for v in la.to_index(F8, cc))]
    sizes = []
    seen = set()
    for s in perm:
        if s in seen:
            continue
        c, x = 1, perm[s]
        seen.add(s)
        while x != s:
            seen.add(x)
            x = perm[x]
            c += 1
        sizes.append(c)
    assert sorted(sizes) == [1, 3, 3]
    # orbit size equals the minimal field degree
    for i, e in enumerate(dec.parts):
        orbit = {i}
        x = perm[i]
        while x != i:
            orbit.add(x)
            x = perm[x]
        assert len(orbit) == e.minimal_field_degree


def test_frobenius_orbit_sum_has_degree_one():
    F8 = splitting_field(2, 7)
    alg, dec = full_block_data(C(7), 2, field=F8)
    nonprincipal = [e for e in dec.parts if e.minimal_field_degree == 3]
    total = alg.zero()
    e = nonprincipal[0]
    cur = e.coords
    for _ in range(3):
        total = la.add(alg.field, total, cur)
        cur = galois_conjugate(alg, cur, 1)
    assert minimal_field_degree(alg, total) == 1


def test_weights_fixed_count():
    # whole idempotent of F4 S3: one defect-zero summand, rational
    alg, dec = full_block_data(S3(), 2)
    n, idxs = weights_fixed_count(alg, dec, alg.one(), 1)
    assert n == 1
    # p-group: no defect-zero blocks
    algq, decq = full_block_data(C(4), 2)
    n, _ = weights_fixed_count(algq, decq, algq.one(), 1)
    assert n == 0
    # F3 C2: both blocks defect zero and rational
    algc, decc = full_block_data(C(2), 3)
    n, _ = weights_fixed_count(algc, decc, algc.one(), 1)
    assert n == 2
    # zero idempotent: empty weight set
    n, _ = weights_fixed_count(algc, decc, algc.zero(), 1)
    assert n == 0
    # a moved idempotent raises
    F8 = splitting_field(2, 7)
    alg7, dec7 = full_block_data(C(7), 2, field=F8)
    moved = [e for e in dec7.parts if e.minimal_field_degree == 3][0]
    with pytest.raises(TNotStabilizing):
        weights_fixed_count(alg7, dec7, moved.coords, 1)


def test_decompose_idempotent_errors():
    alg, dec = full_block_data(S3(), 2)
    bad = la.from_int(alg.field, np.array([1, 1, 1]))
    if not alg.is_idempotent(bad):
        with pytest.raises(NotIdempotent):
            decompose_idempotent(alg, dec, bad)
    assert decompose_idempotent(alg, dec, alg.one()) == [0, 1]
    assert decompose_idempotent(alg, dec, alg.zero()) == []


def test_is_fixed_by():
    F8 = splitting_field(2, 7)
    alg, dec = full_block_data(C(7), 2, field=F8)
    principal = [e for e in dec.parts if e.minimal_field_degree == 1][0]
    assert is_fixed_by(alg, principal.coords, 1)
    moved = [e for e in dec.parts if e.minimal_field_degree == 3][0]
    assert not is_fixed_by(alg, moved.coords, 1)
    assert is_fixed_by(alg, moved.coords, 3)
