import random

import pytest

from predlearn import (
    FamilyError,
    GuardExceeded,
    Representative,
    TableFamily,
    all_imm_de,
    build_critical_points,
    build_hasse,
    closure,
    evaluate_set,
    find_witness,
    gcd_rep,
    get_imm_de,
    is_representative,
    lca,
    ray22_family,
    set_equal,
    z_set,
)
from conftest import (
    brute_hasse_edges,
    brute_imm_descendants,
    brute_representatives,
    random_table_family,
    truth_vector,
)

MODES = ("or", "and")


class TestClosure:
    def test_matches_bruteforce_on_random_families(self):
        rng = random.Random(11)
        for _ in range(60):
            fam = random_table_family(rng)
            for mode in MODES:
                reps = brute_representatives(fam, mode)
                for _ in range(8):
                    s = tuple(
                        i for i in range(fam.size) if rng.random() < 0.5
                    )
                    expect = reps[truth_vector(fam, s, mode)]
                    assert closure(fam, s, mode).members == expect

    def test_closure_of_empty_may_be_nonempty(self):
        # a constant-0 predicate joins the empty disjunction silently
        fam = TableFamily([(0,), (1,)], [[0, 0], [1, 0]])
        assert closure(fam, (), "or").members == (0,)

    def test_is_representative(self):
        fam = ray22_family()
        assert is_representative(fam, (1, 3), "or")
        assert not is_representative(fam, (0,), "or")  # f11 is the top alone


class TestLcaGcd:
    def test_ray22(self):
        fam = ray22_family()
        g1 = closure(fam, (1,), "or")
        g2 = closure(fam, (3,), "or")
        assert lca(fam, g1, g2).members == (1, 3)
        assert gcd_rep(fam, g1, g2).members == ()

    def test_lca_is_least_upper_bound_bruteforce(self):
        rng = random.Random(5)
        for _ in range(30):
            fam = random_table_family(rng, max_preds=4, max_points=6)
            for mode in MODES:
                a = closure(fam, tuple(i for i in range(fam.size) if rng.random() < 0.5), mode)
                b = closure(fam, tuple(i for i in range(fam.size) if rng.random() < 0.5), mode)
                up = lca(fam, a, b)
                # an upper bound: both joins imply the lca join
                for p in fam.points:
                    va = evaluate_set(fam, a.members, p, mode)
                    vb = evaluate_set(fam, b.members, p, mode)
                    vu = evaluate_set(fam, up.members, p, mode)
                    if mode == "or":
                        assert vu >= max(va, vb)
                    else:
                        assert vu <= min(va, vb)

    def test_mode_mismatch_rejected(self):
        fam = ray22_family()
        g1 = closure(fam, (1,), "or")
        g2 = closure(fam, (1,), "and")
        with pytest.raises(FamilyError):
            lca(fam, g1, g2)


class TestImmediateDescendants:
    def test_ray22_chain(self):
        fam = ray22_family()
        top = closure(fam, (0, 1, 2, 3), "or")
        kids = all_imm_de(fam, top, "or")
        assert [k.members for k in kids] == [(1, 3)]
        kids2 = all_imm_de(fam, kids[0], "or")
        assert sorted(k.members for k in kids2) == [(1,), (3,)]
        kids3 = all_imm_de(fam, closure(fam, (1,), "or"), "or")
        assert [k.members for k in kids3] == [()]

    def test_matches_bruteforce_on_random_families(self):
        rng = random.Random(23)
        for _ in range(40):
            fam = random_table_family(rng)
            for mode in MODES:
                reps = brute_representatives(fam, mode)
                for rep in set(reps.values()):
                    got = sorted(
                        k.members
                        for k in all_imm_de(fam, Representative(rep, mode), mode)
                    )
                    assert got == brute_imm_descendants(fam, rep, mode)

    def test_soundness_invariants(self):
        rng = random.Random(7)
        for _ in range(25):
            fam = random_table_family(rng, max_preds=4, max_points=6)
            for mode in MODES:
                top = closure(fam, tuple(range(fam.size)), mode)
                for child in all_imm_de(fam, top, mode):
                    assert set(child.members) < set(top.members)
                    assert not set_equal(fam, child.members, top.members, mode)
                    # one step up restores the parent
                    for f in set(top.members) - set(child.members):
                        assert set_equal(
                            fam, tuple(sorted(set(child.members) | {f})), top.members, mode
                        )


class TestWitness:
    def test_ray22_examples(self):
        fam = ray22_family()
        top = closure(fam, (0, 1, 2, 3), "or")
        child = closure(fam, (1, 3), "or")
        assert find_witness(fam, top, child, "or") == ((1, 1))
        leaf = closure(fam, (1,), "or")
        bottom = closure(fam, (), "or")
        a = find_witness(fam, leaf, bottom, "or")
        assert fam.evaluate(1, a) == 1

    def test_witness_separates_and_spares_siblings(self):
        rng = random.Random(31)
        for _ in range(30):
            fam = random_table_family(rng)
            for mode in MODES:
                parent = closure(fam, tuple(range(fam.size)), mode)
                kids = all_imm_de(fam, parent, mode)
                act = 1 if mode == "or" else 0
                for child in kids:
                    a = find_witness(fam, parent, child, mode)
                    assert evaluate_set(fam, parent.members, a, mode) == act
                    assert evaluate_set(fam, child.members, a, mode) == 1 - act
                    # uniqueness: every sibling still evaluates like the parent
                    for other in kids:
                        if other.members != child.members:
                            assert evaluate_set(fam, other.members, a, mode) == act


class TestZSet:
    def test_intersection_identity(self):
        rng = random.Random(43)
        for _ in range(30):
            fam = random_table_family(rng)
            mode = rng.choice(MODES)
            g = closure(fam, tuple(range(fam.size)), mode)
            act = 1 if mode == "or" else 0
            pts = [p for p in fam.points if evaluate_set(fam, g.members, p, mode) == act]
            if len(pts) < 2:
                continue
            a, b = pts[0], pts[1]
            joint = z_set(fam, g, [a, b])
            assert set(joint) == set(z_set(fam, g, [a])) & set(z_set(fam, g, [b]))

    def test_rejects_empty_point_list(self):
        fam = ray22_family()
        g = closure(fam, (0, 1, 2, 3), "or")
        with pytest.raises(FamilyError):
            z_set(fam, g, [])


class TestGetImmDe:
    def test_climbs_to_cover(self):
        fam = ray22_family()
        top = closure(fam, (0, 1, 2, 3), "or")
        child = get_imm_de(fam, top, (), "or")
        assert child.members == (1, 3)


class TestBuildHasse:
    def test_ray22_diagram(self):
        fam = ray22_family()
        diagram = build_hasse(fam, "or")
        assert sorted(r.members for r in diagram.nodes) == [
            (),
            (0, 1, 2, 3),
            (1,),
            (1, 3),
            (3,),
        ]
        assert len(diagram.edges) == 5

    def test_single_predicate_two_nodes(self):
        fam = TableFamily([(0,), (1,)], [[0, 1]])
        diagram = build_hasse(fam, "or")
        assert len(diagram.nodes) == 2

    def test_matches_bruteforce(self):
        rng = random.Random(3)
        for _ in range(25):
            fam = random_table_family(rng)
            for mode in MODES:
                reps, edges = brute_hasse_edges(fam, mode)
                diagram = build_hasse(fam, mode)
                assert sorted(r.members for r in diagram.nodes) == sorted(set(reps.values()))
                got = sorted((p, c) for p, c in diagram.edges)
                assert got == sorted(edges)

    def test_edges_are_strict_subsets(self):
        fam = ray22_family()
        for mode in MODES:
            for parent, child in build_hasse(fam, mode).edges:
                assert set(child) < set(parent)

    def test_cap(self):
        with pytest.raises(GuardExceeded):
            build_hasse(ray22_family(), "or", cap=2)

    def test_dot_export(self):
        dot = build_hasse(ray22_family(), "or").to_dot()
        assert dot.startswith("digraph")
        assert "->" in dot


class TestCriticalPoints:
    def test_table_scan(self):
        fam = ray22_family()
        cps = build_critical_points(fam)
        # every realizable signature appears exactly once
        sigs = {tuple(fam.evaluate(i, p) for i in range(fam.size)) for p in fam.points}
        assert set(cps.signatures) == sigs
        assert len(cps.signatures) == len(set(cps.signatures))

    def test_signatures_match_points(self):
        fam = ray22_family()
        cps = build_critical_points(fam)
        for p, sig in zip(cps.points, cps.signatures):
            assert tuple(fam.evaluate(i, p) for i in range(fam.size)) == sig
