import numpy as np
import pytest

import bgawc.pipeline as pipeline
from bgawc import linalg as la
from bgawc.blocks import (ClassAlgebra, central_character_oracle,
                          central_primitive_idempotents,
                          match_characters_to_blocks)
from bgawc.gf import get_field, splitting_field
from bgawc.groups import Perm, PermGroup, exp_p_prime
from bgawc.modrep import (MatRep, chop_matrices, class_count_oracle,
                          endomorphism_dim, frobenius_twist, is_isomorphic,
                          regular_representation, spin)
from bgawc.pipeline import GroupData


def C(n):
    return PermGroup(n, [Perm([(i + 1) % n for i in range(n)])], name=f"C{n}")


def S3():
    return PermGroup(3, [Perm([1, 0, 2]), Perm([1, 2, 0])], name="S3")


def S4():
    return PermGroup(4, [Perm([1, 0, 2, 3]), Perm([1, 2, 3, 0])], name="S4")


def algebra_of(G, p):
    return ClassAlgebra(G, splitting_field(p, exp_p_prime(G, p)), p)


def test_regular_representation_trivial_group():
    T = PermGroup(1, [], name="1")
    alg = algebra_of(T, 2)
    rep = regular_representation(T, None, alg)
    assert rep.dimension == 1 and rep.matrices == []


def test_regular_representation_c2_f3():
    G = C(2)
    alg = ClassAlgebra(G, get_field(3, 1), 3)
    rep = regular_representation(G, None, alg)
    assert rep.dimension == 2
    assert np.array_equal(la.to_index(alg.field, rep.matrices[0]),
                          np.array([[0, 1], [1, 0]]))


def test_regular_rep_block_dimensions_s3():
    G = S3()
    alg = algebra_of(G, 2)
    dec = central_primitive_idempotents(alg)
    chars = central_character_oracle(alg)
    match_characters_to_blocks(alg, dec, chars)
    dims = {}
    for e in dec.parts:
        rep = regular_representation(G, e.coords, alg)
        dims[e.defect] = rep.dimension
        assert rep.verify_relations(np.random.default_rng(0))
    assert dims == {0: 4, 1: 2}  # matrix algebra M_2 and the 2-dim principal part


def test_chop_dimension_bookkeeping():
    rng = np.random.default_rng(0)
    for G, p in [(S3(), 3), (S4(), 2), (C(7), 2)]:
        alg = algebra_of(G, p)
        rep = regular_representation(G, None, alg)
        facs = chop_matrices(alg.field, rep.matrices, rep.dimension, rng)
        assert sum(d for _, d in facs) == rep.dimension
        for mats, d in facs:
            assert endomorphism_dim(alg.field, mats, d) == 1


def test_chop_regular_cp_all_trivial():
    rng = np.random.default_rng(1)
    G = C(3)
    alg = ClassAlgebra(G, get_field(3, 1), 3)
    rep = regular_representation(G, None, alg)
    facs = chop_matrices(alg.field, rep.matrices, 3, rng)
    assert len(facs) == 3
    for mats, d in facs:
        assert d == 1 and np.array_equal(mats[0], la.eye(alg.field, 1))


def test_chop_s3_splitting_field_two_simples():
    rng = np.random.default_rng(2)
    G = S3()
    F9 = get_field(3, 2)
    alg = ClassAlgebra(G, F9, 3)
    rep = regular_representation(G, None, alg)
    facs = chop_matrices(F9, rep.matrices, 6, rng)
    vals = {tuple(la.to_index(F9, m[0]).ravel().tolist()) for m, _ in facs}
    assert len(vals) == 2  # trivial and sign


def test_spin_generates_submodule():
    rng = np.random.default_rng(3)
    G = S4()
    alg = algebra_of(G, 2)
    rep = regular_representation(G, None, alg)
    v = la.random_matrix(alg.field, rng, (24,))
    basis = spin(alg.field, rep.matrices, [v])
    rows = basis.matrix()
    for A in rep.matrices:
        images = la.matmul(alg.field, rows, la.transpose(A))
        for i in range(rows.shape[0]):
            assert basis.contains(images[i])


def test_is_isomorphic_reflexive_and_conjugate():
    rng = np.random.default_rng(4)
    G = S3()
    F4 = splitting_field(2, 3)
    alg = ClassAlgebra(G, F4, 2)
    dec = central_primitive_idempotents(alg)
    chars = central_character_oracle(alg)
    match_characters_to_blocks(alg, dec, chars)
    b0 = [e for e in dec.parts if e.defect == 0][0]
    rep = regular_representation(G, b0.coords, alg)
    facs = chop_matrices(F4, rep.matrices, rep.dimension, rng)
    M = MatRep(G, F4, facs[0][0], facs[0][1])
    assert is_isomorphic(M, M, np.random.default_rng(5))
    while True:
        P = la.random_matrix(F4, rng, (2, 2))
        if la.rank(F4, P) == 2:
            break
    Pi = la.invert(F4, P)
    conj = MatRep(G, F4, [la.matmul(F4, Pi, la.matmul(F4, A, P)) for A in M.matrices], 2)
    assert is_isomorphic(M, conj, np.random.default_rng(6))


def test_is_isomorphic_distinguishes():
    G = S3()
    F9 = get_field(3, 2)
    triv = MatRep(G, F9, [la.eye(F9, 1), la.eye(F9, 1)], 1)
    sign = MatRep(G, F9, [la.neg(F9, la.eye(F9, 1)), la.eye(F9, 1)], 1)
    assert not is_isomorphic(triv, sign, np.random.default_rng(7))


def test_is_isomorphic_equivalence_on_sample():
    rng = np.random.default_rng(8)
    G = S3()
    F9 = get_field(3, 2)
    mods = [MatRep(G, F9, [la.eye(F9, 1), la.eye(F9, 1)], 1),
            MatRep(G, F9, [la.neg(F9, la.eye(F9, 1)), la.eye(F9, 1)], 1)]
    import random
    rnd = random.Random(0)
    for _ in range(50):
        a, b = rnd.choice(mods), rnd.choice(mods)
        ab = is_isomorphic(a, b, np.random.default_rng(9))
        ba = is_isomorphic(b, a, np.random.default_rng(10))
        assert ab == ba
        assert is_isomorphic(a, a, np.random.default_rng(11))


def test_frobenius_twist_character_coherence():
    """The trace fingerprint of the twist is the entrywise p-power of the fingerprint."""
    G = C(7)
    F8 = splitting_field(2, 7)
    gd = GroupData(G, 2, F8, seed=0)
    for s in gd.simples:
        tw = frobenius_twist(s.canonical_rep, 1)
        fp_tw = gd._fingerprint_from_matrices(tw.matrices, tw.dimension)
        assert fp_tw == tuple(F8.frob_idx(v, 1) for v in s.fingerprint)


def test_twist_orbits_c7():
    G = C(7)
    F8 = splitting_field(2, 7)
    gd = GroupData(G, 2, F8, seed=0)
    tw = gd.twist_perm(1)
    sizes = []
    seen = set()
    for i in range(7):
        if i in seen:
            continue
        c, x = 1, tw[i]
        seen.add(i)
        while x != i:
            seen.add(x)
            c += 1
            x = tw[x]
        sizes.append(c)
    assert sorted(sizes) == [1, 3, 3]
    assert gd.twist_perm(3) == tuple(range(7))
    assert gd.twist_perm(0) == tuple(range(7))


def test_twist_fixed_module_defined_over_prime_field():
    G = S3()
    F4 = splitting_field(2, 3)
    gd = GroupData(G, 2, F4, seed=0)
    for s in gd.simples:
        tw = frobenius_twist(s.canonical_rep, 1)
        assert is_isomorphic(s.canonical_rep, tw, np.random.default_rng(12),
                             ) == (gd.twist_perm(1)[gd.simples.index(s)] == gd.simples.index(s))


def test_ibr_counts():
    G = S3()
    gd3 = GroupData(G, 3, splitting_field(3, 2), seed=0)
    assert len(gd3.simples) == 2
    assert gd3.count_fixed_ibr(gd3.algebra.one(), 1) == 2
    assert gd3.ibr(gd3.algebra.zero()) == []
    # p-group: only the trivial module
    Q8 = PermGroup(8, [Perm([1, 2, 3, 0, 5, 6, 7, 4]), Perm([4, 7, 6, 5, 2, 1, 0, 3])],
                   name="Q8")
    gdq = GroupData(Q8, 2, get_field(2, 1), seed=0)
    assert len(gdq.simples) == 1 and gdq.simples[0].dimension == 1


def test_block_partition_of_simples():
    for G, p in [(S4(), 3), (S3(), 2), (C(7), 2)]:
        F = splitting_field(p, exp_p_prime(G, p))
        gd = GroupData(G, p, F, seed=0)
        total = sum(len(gd.ibr_indices(b.coords)) for b in gd.blocks)
        assert total == len(gd.simples) == len(gd.p_regular)
        for s in gd.simples:
            owners = [b for b in gd.blocks
                      if s.block_index == b.index]
            assert len(owners) == 1


def test_class_count_oracle():
    C7 = C(7)
    assert class_count_oracle(C7, 2, 0) == 7
    assert class_count_oracle(C7, 2, 1) == 1
    assert class_count_oracle(C7, 2, 3) == 7
    G = S4()
    assert class_count_oracle(G, 2, 0) == 2
    assert class_count_oracle(G, 3, 0) == 4


def test_galois_count_oracle_agreement():
    for G, p in [(C(7), 2), (S4(), 3), (S3(), 2)]:
        F = splitting_field(p, exp_p_prime(G, p))
        gd = GroupData(G, p, F, seed=0)
        d = F.degree
        for m in range(1, d + 1):
            if d % m:
                continue
            tw = gd.twist_perm(m)
            fixed = sum(1 for i in range(len(gd.simples)) if tw[i] == i)
            assert fixed == class_count_oracle(G, p, m)


def test_fast_paths_match_generic():
    cases = [
        (PermGroup(4, [Perm([1, 2, 3, 0]), Perm([1, 0, 3, 2])], name="D8"), 2,
         get_field(2, 1)),
        (PermGroup(8, [Perm([1, 2, 3, 0, 5, 6, 7, 4]), Perm([4, 7, 6, 5, 2, 1, 0, 3])],
                   name="Q8"), 2, get_field(2, 1)),
        (C(6), 2, splitting_field(2, 3)),
        (C(12), 2, splitting_field(2, 3)),
    ]
    for G, p, F in cases:
        fast = GroupData(G, p, F, seed=1)
        pipeline.USE_FAST_PATHS = False
        try:
            slow = GroupData(G, p, F, seed=1)
        finally:
            pipeline.USE_FAST_PATHS = True
        assert [(s.dimension, s.fingerprint, s.block_index) for s in fast.simples] == \
               [(s.dimension, s.fingerprint, s.block_index) for s in slow.simples]


def test_chop_deterministic_given_seed():
    G = S4()
    alg = algebra_of(G, 2)
    rep = regular_representation(G, None, alg)
    f1 = chop_matrices(alg.field, rep.matrices, 24, np.random.default_rng(42))
    f2 = chop_matrices(alg.field, rep.matrices, 24, np.random.default_rng(42))
    assert len(f1) == len(f2)
    for (m1, d1), (m2, d2) in zip(f1, f2):
        assert d1 == d2
        assert all(np.array_equal(a, b) for a, b in zip(m1, m2))
