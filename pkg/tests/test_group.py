import itertools
import math
import random

import pytest

from mobius_lattice.errors import (
    HypothesisViolated,
    IntervalTooLarge,
    OrderCapExceeded,
    PowersetTooLarge,
    SingularGenerator,
)
from mobius_lattice.gfq import FqField
from mobius_lattice.group import (
    action_from_subspaces,
    as_groupset,
    closure,
    is_irreducible,
    overgroup_interval,
    stabilizer,
    verify_action_subset_sums,
)
from mobius_lattice.linalg import Matrix, Subspace, enumerate_subspaces

F2 = FqField(2)
F3 = FqField(3)


def gl_order(n, q):
    # independent oracle: product formula for |GL(n, q)|
    total = 1
    for i in range(n):
        total *= q ** n - q ** i
    return total


def test_closure_of_identity():
    g = closure([Matrix.identity(F2, 2)])
    assert g.order == 1


def test_closure_gl22():
    g = closure([Matrix.from_rows(F2, [[1, 1], [0, 1]]),
                 Matrix.from_rows(F2, [[0, 1], [1, 0]])])
    assert g.order == gl_order(2, 2) == 6


def test_closure_gl23(gl23):
    assert gl23.order == gl_order(2, 3) == 48


def test_closure_is_closed_exhaustively(gl23, gl32):
    for group in (gl23, gl32):  # orders 48 and 168, both under 500
        members = set(range(group.order))
        for i in range(group.order):
            for j in range(group.order):
                assert group.mul(i, j) in members


def test_closure_contains_identity_and_inverses(gl22):
    ident = gl22.identity_index
    for i in range(gl22.order):
        assert gl22.mul(i, gl22.inv(i)) == ident


def test_singular_generator_rejected():
    with pytest.raises(SingularGenerator):
        closure([Matrix.from_rows(F2, [[1, 1], [1, 1]])])


def test_order_cap():
    with pytest.raises(OrderCapExceeded):
        closure([Matrix.from_rows(F2, [[1, 1], [0, 1]]),
                 Matrix.from_rows(F2, [[0, 1], [1, 0]])], cap=3)


def test_irreducibility(gl22):
    assert is_irreducible(gl22)
    diag = closure([Matrix.from_rows(F3, [[2, 0], [0, 1]])])
    assert not is_irreducible(diag)
    trivial = closure([Matrix.identity(F2, 2)])
    assert not is_irreducible(trivial)


def test_stabilizer_of_full_space(gl22):
    w = Subspace.full(F2, 2)
    assert stabilizer(gl22, w).order == gl22.order


def test_stabilizer_line_gl22(gl22):
    w = Subspace.from_vectors(F2, 2, [[1, 0]])
    stab = stabilizer(gl22, w)
    expected = {Matrix.identity(F2, 2), Matrix.from_rows(F2, [[1, 0], [1, 1]])}
    assert set(stab.matrices()) == expected


def test_stabilizer_line_gl23(gl23):
    w = Subspace.from_vectors(F3, 2, [[1, 0]])
    stab = stabilizer(gl23, w)
    assert stab.order == 12
    for m in stab.matrices():
        assert m.to_lists()[0][1] == 0  # row action fixes <e1>: lower triangular


def test_stabilizer_contains_identity_and_closed(gl23):
    w = Subspace.from_vectors(F3, 2, [[1, 1]])
    stab = stabilizer(gl23, w)
    assert gl23.identity_index in stab.member_ids
    for i in stab.member_ids:
        for j in stab.member_ids:
            assert gl23.mul(i, j) in stab.member_ids


def test_interval_from_group_itself(gl22):
    full = gl22.full_subgroup()
    assert overgroup_interval(gl22, full) == [full]


def test_interval_gl22_from_trivial(gl22):
    subs = overgroup_interval(gl22, gl22.trivial_subgroup())
    assert sorted(s.order for s in subs) == [1, 2, 2, 2, 3, 6]


def test_interval_above_c3(gl22):
    c3 = next(s for s in overgroup_interval(gl22, gl22.trivial_subgroup())
              if s.order == 3)
    assert [s.order for s in overgroup_interval(gl22, c3)] == [3, 6]


def test_interval_independent_of_generator_order():
    a = Matrix.from_rows(F2, [[1, 1], [0, 1]])
    b = Matrix.from_rows(F2, [[0, 1], [1, 0]])
    g1 = closure([a, b])
    g2 = closure([b, a])
    subs1 = overgroup_interval(g1, g1.trivial_subgroup())
    subs2 = overgroup_interval(g2, g2.trivial_subgroup())
    assert [s.ids for s in subs1] == [s.ids for s in subs2]


def test_interval_members_distinct_and_contain_low(gl23):
    torus = gl23.subgroup_closure([
        gl23.index_of(Matrix.from_rows(F3, [[2, 0], [0, 1]])),
        gl23.index_of(Matrix.from_rows(F3, [[1, 0], [0, 2]]))])
    subs = overgroup_interval(gl23, torus)
    ids = [s.member_ids for s in subs]
    assert len(ids) == len(set(ids))
    assert all(torus.member_ids <= s for s in ids)


def test_interval_matches_subset_filter(sl23):
    # closure-based enumeration agrees with filtering a full subgroup list
    all_subs = overgroup_interval(sl23, sl23.trivial_subgroup())
    assert len(all_subs) == 15  # 1 + C2 + 4*C3 + 3*C4 + 4*C6 + Q8 + G
    for low in all_subs:
        direct = overgroup_interval(sl23, low)
        filtered = [s for s in all_subs if low.member_ids <= s.member_ids]
        assert {s.member_ids for s in direct} == {s.member_ids for s in filtered}


def test_interval_cap():
    g = closure(list(
        map(lambda r: Matrix.from_rows(F3, r),
            [[[1, 1], [0, 1]], [[0, 1], [2, 0]], [[2, 0], [0, 1]]])))
    with pytest.raises(IntervalTooLarge):
        overgroup_interval(g, g.trivial_subgroup(), cap=3)


def test_interval_within_top(gl23):
    w = Subspace.from_vectors(F3, 2, [[1, 0]])
    borel = stabilizer(gl23, w)
    h = gl23.subgroup_closure(
        [gl23.index_of(Matrix.from_rows(F3, [[2, 0], [0, 1]]))])
    inside = overgroup_interval(gl23, h, top=borel)
    assert all(s.member_ids <= borel.member_ids for s in inside)
    assert sorted(s.order for s in inside) == [2, 4, 6, 12]


def test_subgroup_validation(gl22):
    order3 = next(i for i in range(gl22.order)
                  if gl22.subgroup_closure([i]).order == 3)
    with pytest.raises(ValueError):
        gl22.subgroup(frozenset({gl22.identity_index, order3}))
    no_identity = frozenset({order3})
    with pytest.raises(ValueError):
        gl22.subgroup(no_identity)
    assert gl22.subgroup(gl22.subgroup_closure([order3]).member_ids).order == 3


def test_as_groupset_round_trip(gl23):
    h = gl23.subgroup_closure(
        [gl23.index_of(Matrix.from_rows(F3, [[2, 0], [0, 1]]))])
    standalone = as_groupset(h)
    assert standalone.order == h.order
    assert set(standalone.elements) == set(h.matrices())


def test_action_on_lines_is_full_symmetric(gl22):
    lines = enumerate_subspaces(F2, 2, 1)
    action = action_from_subspaces(gl22, lines)
    perms = {tuple(row) for row in action.table}
    assert len(perms) == 6  # faithful on 3 points: all of Sym(3)
    assert not action.extended


def test_action_of_trivial_group():
    g = closure([Matrix.identity(F2, 2)])
    lines = enumerate_subspaces(F2, 2, 1)
    action = action_from_subspaces(g, lines)
    assert action.table == (tuple(range(3)),)


def test_action_single_fixed_point(gl22):
    action = action_from_subspaces(gl22, [Subspace.full(F2, 2)])
    assert all(row == (0,) for row in action.table)


def test_action_orbit_closure_flag(gl22):
    one_line = [Subspace.from_vectors(F2, 2, [[1, 0]])]
    action = action_from_subspaces(gl22, one_line)
    assert action.extended
    assert len(action.points) == 3


def test_subset_sums_empty_points(gl22):
    lines = enumerate_subspaces(F2, 2, 1)
    action = action_from_subspaces(gl22, lines)
    report = verify_action_subset_sums(action, gl22.trivial_subgroup(), [])
    assert report.stabilizer_subsets_sum == report.point_subsets_sum == 1


def test_subset_sums_three_lines(gl22):
    lines = enumerate_subspaces(F2, 2, 1)
    action = action_from_subspaces(gl22, lines)
    report = verify_action_subset_sums(action, gl22.trivial_subgroup(),
                                       range(3))
    assert report.stabilizer_subsets_sum == -2
    assert report.point_subsets_sum == -2
    assert report.equal


def test_subset_sums_when_all_stabilizers_equal_base(gl22):
    lines = enumerate_subspaces(F2, 2, 1)
    action = action_from_subspaces(gl22, lines)
    base = action.stabilizer_of(0)
    report = verify_action_subset_sums(action, base, [0])
    assert report.stabilizer_subsets_sum == report.point_subsets_sum == 1


def test_subset_sums_hypothesis_check(gl22):
    lines = enumerate_subspaces(F2, 2, 1)
    action = action_from_subspaces(gl22, lines)
    base = action.stabilizer_of(0)
    with pytest.raises(HypothesisViolated):
        verify_action_subset_sums(action, base, [0, 1])


def test_subset_sums_powerset_cap(gl22):
    lines = enumerate_subspaces(F2, 2, 1)
    action = action_from_subspaces(gl22, lines)
    with pytest.raises(PowersetTooLarge):
        verify_action_subset_sums(action, gl22.trivial_subgroup(), range(3),
                                  max_powerset=2)


def test_subset_sums_random_instances(gl22, gl23, sl23):
    # seeded sweep over actions on all proper subspaces with random bases
    rng = random.Random(20240)
    groups = [gl22, gl23, sl23]
    checked = 0
    while checked < 100:
        group = rng.choice(groups)
        points = enumerate_subspaces(group.field, group.n, 1)
        action = action_from_subspaces(group, points)
        k = rng.randint(0, len(points))
        chosen = sorted(rng.sample(range(len(points)), k))
        inter = frozenset(range(group.order))
        for p in chosen:
            inter &= action.stabilizer_of(p).member_ids
        members = sorted(inter)
        seed_count = rng.randint(0, min(2, len(members)))
        seeds = rng.sample(members, seed_count)
        base = group.subgroup_closure(seeds)
        if not base.member_ids <= inter:
            continue
        report = verify_action_subset_sums(action, base, chosen)
        assert report.equal
        checked += 1


@pytest.mark.parametrize("size", range(13))
def test_alternating_subset_cancellation_bruteforce(size):
    # nonempty ground sets cancel: sum over subsets of (-1)^|S| is zero
    total = 0
    for r in range(size + 1):
        total += sum((-1) ** r for _ in itertools.combinations(range(size), r))
    assert total == (1 if size == 0 else 0)


@pytest.mark.parametrize("size", range(1, 21))
def test_alternating_subset_cancellation_binomial(size):
    assert sum((-1) ** k * math.comb(size, k) for k in range(size + 1)) == 0
