import random

import pytest

from bgawc.chains import (Chain, chain_stabilizer, enumerate_chains,
                          enumerate_p_subgroups)
from bgawc.errors import GuardExceeded
from bgawc.groups import Perm, PermGroup, closure_of


def C(n):
    return PermGroup(n, [Perm([(i + 1) % n for i in range(n)])], name=f"C{n}")


def S3():
    return PermGroup(3, [Perm([1, 0, 2]), Perm([1, 2, 0])], name="S3")


def S4():
    return PermGroup(4, [Perm([1, 0, 2, 3]), Perm([1, 2, 3, 0])], name="S4")


def naive_chain_count(poset, family):
    """Independent recursive enumerator counting all chains in the family."""
    subs = poset.subgroups
    triv = poset.trivial_index
    idxs = [i for i in range(len(subs)) if i != triv]

    def count_below(i, top):
        total = 1
        for j in idxs:
            if poset.contains_pair(j, i):
                if family == "normal" and not subs[j].is_normal_in(subs[top]):
                    continue
                total += count_below(j, top)
        return total

    return 1 + sum(count_below(i, i) for i in idxs)


def test_poset_p_not_dividing():
    pos = enumerate_p_subgroups(C(3), 5)
    assert len(pos.subgroups) == 1
    reps = enumerate_chains(pos, "all")
    assert len(reps) == 1 and reps[0].length == 0
    assert reps[0].stabilizer.order == 3


def test_poset_cp():
    pos = enumerate_p_subgroups(C(5), 5)
    assert len(pos.subgroups) == 2
    assert len(pos.orbit_reps) == 2
    for fam in ("all", "normal"):
        reps = enumerate_chains(pos, fam)
        assert [c.length for c in reps] == [0, 1]
        assert all(c.stabilizer.order == 5 for c in reps)


def test_poset_s3():
    pos2 = enumerate_p_subgroups(S3(), 2)
    assert len(pos2.subgroups) == 4  # 1 + three conjugate C2
    assert len(pos2.orbit_reps) == 2
    pos3 = enumerate_p_subgroups(S3(), 3)
    assert len(pos3.subgroups) == 2
    assert len(pos3.orbit_reps) == 2
    repsN = enumerate_chains(pos2, "normal")
    assert len(repsN) == 2
    assert repsN[0].stabilizer.order == 6
    assert repsN[1].stabilizer.order == 2


def test_poset_every_subgroup_p_power_and_closed():
    G = S4()
    pos = enumerate_p_subgroups(G, 2)
    assert len(pos.subgroups) == 20
    for H in pos.subgroups:
        assert H.order in (1, 2, 4, 8)
    # closed under conjugation
    for i in range(len(pos.subgroups)):
        for gi in range(len(G.generators)):
            assert 0 <= pos.conj_index(i, gi) < len(pos.subgroups)
    # trivial subgroup present
    assert pos.subgroups[pos.trivial_index].order == 1


def test_chain_stabilizer_example():
    G = S4()
    pos = enumerate_p_subgroups(G, 2)
    sub1 = closure_of(G, [Perm([1, 0, 3, 2])])
    V4 = closure_of(G, [Perm([1, 0, 3, 2]), Perm([2, 3, 0, 1])])
    terms = (pos.trivial_index, pos.index_of(sub1), pos.index_of(V4))
    stab = chain_stabilizer(pos, terms)
    assert stab.order == 8


def test_trivial_chain_stabilizer_is_group():
    pos = enumerate_p_subgroups(S4(), 3)
    stab = chain_stabilizer(pos, (pos.trivial_index,))
    assert stab.order == 24


@pytest.mark.parametrize("builder,p", [(S3, 2), (S3, 3), (S4, 2), (S4, 3),
                                       (lambda: C(12), 2)])
def test_orbit_counting_vs_naive(builder, p):
    G = builder()
    pos = enumerate_p_subgroups(G, p)
    for fam in ("all", "normal"):
        reps = enumerate_chains(pos, fam)
        total = sum(G.order // c.stabilizer.order for c in reps)
        assert total == naive_chain_count(pos, fam)


def test_normal_family_subset_of_all():
    for G, p in [(S4(), 2), (S3(), 2)]:
        pos = enumerate_p_subgroups(G, p)
        keys_all = {c.canonical_key() for c in enumerate_chains(pos, "all")}
        for c in enumerate_chains(pos, "normal"):
            assert c.canonical_key() in keys_all


def test_conjugated_rep_maps_back():
    G = S4()
    pos = enumerate_p_subgroups(G, 2)
    reps = enumerate_chains(pos, "all")
    rep_keys = {c.canonical_key() for c in reps}
    rnd = random.Random(5)
    els = sorted(G.elements)
    for c in reps:
        g = rnd.choice(els)
        conj_terms = tuple(pos.index_of(pos.subgroups[i].conjugate(g)) for i in c.terms)
        # the orbit of the conjugate contains a representative key
        orbit = {conj_terms}
        frontier = [conj_terms]
        while frontier:
            nxt = []
            for cur in frontier:
                for gi in range(len(G.generators)):
                    t2 = tuple(pos.conj_index(i, gi) for i in cur)
                    if t2 not in orbit:
                        orbit.add(t2)
                        nxt.append(t2)
            frontier = nxt
        keys = {tuple(pos.subgroups[i].canonical_key() for i in t) for t in orbit}
        assert keys & rep_keys


def test_length_zero_chain_present_once():
    for fam in ("all", "normal"):
        pos = enumerate_p_subgroups(S4(), 2)
        reps = enumerate_chains(pos, fam)
        zero = [c for c in reps if c.length == 0]
        assert len(zero) == 1
        assert zero[0].stabilizer.order == 24


def test_chain_guard():
    pos = enumerate_p_subgroups(S4(), 2)
    with pytest.raises(GuardExceeded):
        enumerate_chains(pos, "all", chain_guard=3)


def test_strict_ascent_and_normal_flag():
    pos = enumerate_p_subgroups(S4(), 2)
    for c in enumerate_chains(pos, "normal"):
        orders = [pos.subgroups[i].order for i in c.terms]
        assert orders[0] == 1
        assert all(a < b for a, b in zip(orders, orders[1:]))
        top = pos.subgroups[c.terms[-1]]
        for i in c.terms:
            assert pos.subgroups[i].is_normal_in(top)
