import pytest

from hurewicz_kit import alphabet as al
from hurewicz_kit import departure as dep
from hurewicz_kit import prime_coding as pc
from hurewicz_kit.base import DomainError, HorizonError, Tri

from oracles import codes_in_order, j_code


def branch(s, t):
    return dep.BranchIndex(tuple(s), tuple(t))


def test_branch_index_validation():
    with pytest.raises(ValueError):
        dep.BranchIndex((0,), (0,))
    with pytest.raises(ValueError):
        dep.BranchIndex((), (-1,))


def test_constraints_examples():
    c = dep.constraints(branch((), (0,)))
    assert c.ones == (2,) and c.non_ones == ()
    c = dep.constraints(branch((), (1,)))
    assert c.ones == (4,) and c.non_ones == (2,)
    c = dep.constraints(branch((0,), (0, 0)))
    assert c.ones == (2, 30) and c.non_ones == ()
    assert branch((0,), (0, 0)).top_index() == 30 == j_code((0, 0, 0))


def test_constraint_indices_increase_and_stay_disjoint():
    for b in dep.branches_within(2000):
        c = dep.constraints(b)
        assert all(x < y for x, y in zip(c.ones, c.ones[1:]))
        assert not set(c.ones) & set(c.non_ones)
        assert b.top_index() == c.ones[-1]


def test_in_domain_examples():
    assert dep.in_domain(al.ALL_ONES, branch((), (0,))) is Tri.YES
    assert dep.in_domain(al.ALL_ONES, branch((), (1,))) is Tri.NO
    short = al.PointPrefix.from_entries((1,))
    assert dep.in_domain(short, branch((), (0,))) is Tri.UNKNOWN


def test_apply_example():
    y = dep.apply(branch((), (0,)), al.ALL_ONES)
    assert y.coord(2) == 900 == j_code((1, 1, 1))
    assert y.coord(0) == 1 and y.coord(1) == 1 and y.coord(3) == 1
    fd = al.first_disagreement(al.ALL_ONES, y)
    assert fd == 2 and al.member_cmp(2, 1, y.coord(2)) == -1


def test_apply_errors():
    with pytest.raises(DomainError):
        dep.apply(branch((), (1,)), al.ALL_ONES)
    with pytest.raises(HorizonError):
        dep.apply(branch((), (0,)), al.PointPrefix.from_entries((1,)))


def test_apply_rewrite_reads_the_input_not_the_partial_image():
    b = branch((0,), (0, 0))  # rewrites 2 then 30; the value at 30 codes the
    y = dep.apply(b, al.ALL_ONES)  # original prefix, whose coordinate 2 is 1
    assert y.coord(2) == 900
    assert y.coord(30) == pc.make_code_value_sparse(31, ())
    assert pc.decode(y.coord(30)) == (1,) * 31


def test_find_branch_examples():
    outcome, t = dep.find_branch((), al.ALL_ONES)
    assert outcome is Tri.YES and t == (0,)
    x = al.PointPrefix(5, ((2, 4),), tail_ones=True)  # coordinate 2 reads 4
    outcome, t = dep.find_branch((), x)
    assert outcome is Tri.YES and t == (1,)
    assert dep.in_domain(x, branch((), t)) is Tri.YES
    bare = al.PointPrefix.from_entries((1, 1))
    assert dep.find_branch((0,), bare) == (Tri.UNKNOWN, None)


def test_find_branch_unique_among_enumerated():
    x = al.point_from_node((1, 1, 900))
    for s in [(), (0,), (1,), (0, 0)]:
        outcome, t = dep.find_branch(s, x)
        assert outcome is Tri.YES
        hits = [
            b
            for b in dep.branches_within(5000)
            if b.s == s and dep.in_domain(x, b) is Tri.YES
        ]
        found = dep.BranchIndex(s, t)
        if found.top_index() < 5000:
            assert hits == [found]
        else:
            assert hits == []


def test_enumeration_examples():
    assert dep.e(0) == ()
    assert dep.e(1) == (0,)
    assert dep.e(3) == (0, 0)


def test_enumeration_matches_brute_force():
    expected = codes_in_order(5000)
    got = [dep.e(n) for n in range(len(expected))]
    assert got == expected
    for n, s in enumerate(expected):
        assert dep.e_inv(s) == n


def test_enumeration_prefix_monotone():
    for s in codes_in_order(300):
        for n in range(4):
            assert dep.e_inv(s) < dep.e_inv(s + (n,))


def test_apply_fn():
    outcome, y = dep.apply_fn(0, al.ALL_ONES)
    assert outcome is Tri.YES
    assert y.coord(2) == 900
    # the glued map for slot 1 discovers its branch greedily
    outcome, y = dep.apply_fn(1, al.ALL_ONES)
    assert outcome is Tri.YES
    assert dep.e(1) == (0,)
    assert y.coord(2) == 900 and pc.decode(y.coord(30)) == (1,) * 31
    # a bare prefix cannot decide membership: unknown, never a definite no
    outcome, y = dep.apply_fn(0, al.PointPrefix.from_entries((1,)))
    assert outcome is Tri.UNKNOWN and y is None


def test_alphabet_closure_exhaustive_small():
    branches = dep.branches_within(64)
    assert len(branches) >= 6
    for p in range(5):
        for node in al.enumerate_nodes(p):
            x = al.point_from_node(node)
            for b in branches:
                if dep.in_domain(x, b) is not Tri.YES:
                    continue
                y = dep.apply(b, x)
                for q in dep.constraints(b).ones:
                    v = y.coord(q)
                    assert v != 1 and al.member_valid(q, v)


def test_injectivity_on_domain_points():
    b = branch((), (0,))
    images = {}
    for node in al.enumerate_nodes(3):
        x = al.point_from_node(node)
        if dep.in_domain(x, b) is not Tri.YES:
            continue
        y = dep.apply(b, x)
        assert y.key() not in images
        images[y.key()] = x


def test_stability_bound_and_nested_domains():
    child = branch((0,), (0, 0))
    parent = branch((), (0,))
    cc, pc_ = dep.constraints(child), dep.constraints(parent)
    assert set(pc_.ones) <= set(cc.ones) and set(pc_.non_ones) <= set(cc.non_ones)
    x = al.ALL_ONES
    assert dep.in_domain(x, child) is Tri.YES
    fd = al.first_disagreement(dep.apply(child, x), dep.apply(parent, x))
    assert fd == child.top_index() == 30


def test_branch_disjointness_structural():
    bs = dep.branches_within(3000)
    by_stem = {}
    for b in bs:
        by_stem.setdefault(b.s, []).append(b)
    for stem, group in by_stem.items():
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                c1, c2 = dep.constraints(group[i]), dep.constraints(group[j])
                assert set(c1.ones) & set(c2.non_ones) or set(c2.ones) & set(
                    c1.non_ones
                )


def test_apply_inverse_round_trip():
    for b in dep.branches_within(300):
        x = al.ALL_ONES
        if dep.in_domain(x, b) is not Tri.YES:
            x = al.PointPrefix(
                max(dep.constraints(b).non_ones, default=0) + 1,
                tuple(
                    (q, pc.make_code_value_sparse(q + 1, ()))
                    for q in dep.constraints(b).non_ones
                ),
                tail_ones=True,
            )
        if dep.in_domain(x, b) is not Tri.YES:
            continue
        y = dep.apply(b, x)
        outcome, back = dep.apply_inverse(b, y)
        assert outcome is Tri.YES and back == x


def test_apply_inverse_rejects_points_off_the_image():
    outcome, _ = dep.apply_inverse(branch((), (0,)), al.ALL_ONES)
    assert outcome is Tri.NO  # coordinate 2 should carry the rewrite code


def test_branches_within_ordering_and_split():
    bs = dep.branches_within(10_000)
    tops = [b.top_index() for b in bs]
    assert tops == sorted(tops) and all(t < 10_000 for t in tops)
    for b in bs:
        assert len(b.t) == len(b.s) + 1
        assert pc.decode(b.top_index()) == b.s + b.t


def test_find_branch_horizon_cap():
    # a scan that would leave the index horizon reports unknown; the default
    # horizon covers this stem (its level-1 candidate index is 30720)
    outcome, t = dep.find_branch((10,), al.ALL_ONES, horizon=100)
    assert outcome is Tri.UNKNOWN and t is None
    outcome, t = dep.find_branch((10,), al.ALL_ONES)
    assert outcome is Tri.YES and t == (0, 0)


def test_branch_by_rank_and_slot():
    assert dep.branch_by_rank(0, 0) == branch((), (0,))
    assert dep.branch_by_rank(0, 2) == branch((), (2,))
    assert dep.branch_by_rank(1, 0) == branch((0,), (0, 0))
    for n in range(5):
        for p in range(3):
            b = dep.branch_by_rank(n, p)
            assert b.s == dep.e(n) == dep.glued_slot(n)
