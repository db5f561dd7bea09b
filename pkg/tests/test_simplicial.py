import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mobius_lattice.errors import NotDownwardClosed
from mobius_lattice.poset import (
    FinitePoset,
    adjoin_bounds,
    mobius_row,
    random_poset,
)
from mobius_lattice.simplicial import (
    complex_from_faces,
    euler,
    face_alternating_sum,
    order_complex,
)


def test_empty_face_only_complex():
    c = complex_from_faces([], [()])
    assert c.faces == frozenset({0})
    report = euler(c)
    assert report.chi == 0
    assert report.chi_reduced == -1
    assert face_alternating_sum(c) == 1


def test_truly_empty_complex():
    c = complex_from_faces([], [])
    assert c.is_empty()
    assert euler(c).chi_reduced == 0


def test_full_triangle():
    c = complex_from_faces("abc", [("a", "b", "c")])
    assert len(c.faces) == 8
    report = euler(c)
    assert report.face_counts == (3, 3, 1)
    assert report.chi == 1
    assert report.chi_reduced == 0
    assert face_alternating_sum(c) == 0


def test_strict_mode_rejects_gaps():
    with pytest.raises(NotDownwardClosed):
        complex_from_faces("ab", [("a", "b")], strict=True)


def test_strict_mode_accepts_closed_family():
    family = [(), ("a",), ("b",), ("a", "b")]
    c = complex_from_faces("ab", family, strict=True)
    assert len(c.faces) == 4


def test_three_isolated_vertices():
    c = complex_from_faces("abc", [("a",), ("b",), ("c",)])
    report = euler(c)
    assert report.chi == 3
    assert report.chi_reduced == 2
    assert face_alternating_sum(c) == -2


def test_triangle_boundary():
    c = complex_from_faces("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    report = euler(c)
    assert report.chi == 0
    assert report.chi_reduced == -1


@given(st.integers(min_value=1, max_value=5), st.data())
def test_alternating_sum_plus_chi_is_one(nverts, data):
    vertices = list(range(nverts))
    nfaces = data.draw(st.integers(min_value=1, max_value=6))
    family = [data.draw(st.lists(st.sampled_from(vertices), max_size=nverts))
              for _ in range(nfaces)]
    c = complex_from_faces(vertices, family)
    assert face_alternating_sum(c) + euler(c).chi == 1


def test_downward_closure_holds_for_constructed_complexes():
    rng = random.Random(31)
    for _ in range(50):
        nverts = rng.randint(1, 6)
        family = [rng.sample(range(nverts), rng.randint(0, nverts))
                  for _ in range(rng.randint(1, 5))]
        c = complex_from_faces(range(nverts), family)
        for mask in c.faces:
            sub = mask
            while sub:
                low = sub & -sub
                assert (mask & ~low) in c.faces or mask == low
                sub &= sub - 1
            assert (mask & (mask - 1)) in c.faces or mask.bit_count() <= 1


def test_order_complex_of_antichain():
    p = FinitePoset.from_leq(["a", "b"], lambda a, b: a == b)
    c = order_complex(p)
    assert euler(c).face_counts == (2,)
    assert euler(c).chi_reduced == 1


def test_order_complex_of_two_chain():
    p = FinitePoset.from_leq([0, 1], lambda a, b: a <= b)
    c = order_complex(p)
    assert euler(c).face_counts == (2, 1)
    assert euler(c).chi_reduced == 0


def test_order_complex_of_empty_poset_keeps_empty_face():
    p = FinitePoset.from_leq([], lambda a, b: True)
    c = order_complex(p)
    assert c.faces == frozenset({0})
    assert euler(c).chi_reduced == -1


def test_antichain_mobius_equals_reduced_chi():
    p = FinitePoset.from_leq(["a", "b"], lambda a, b: a == b)
    bounded = adjoin_bounds(p)
    mu = mobius_row(bounded.base, bounded.bottom)[bounded.top]
    assert mu == euler(order_complex(p)).chi_reduced == 1


def test_bounded_mobius_matches_order_complex_on_random_posets():
    rng = random.Random(2718)
    for _ in range(100):
        p = random_poset(rng, 10)
        bounded = adjoin_bounds(p)
        mu = mobius_row(bounded.base, bounded.bottom)[bounded.top]
        assert mu == euler(order_complex(p)).chi_reduced


def test_face_lists_dump():
    c = complex_from_faces("ab", [("a", "b")])
    dump = c.face_lists()
    assert dump == {-1: [[]], 0: [["a"], ["b"]], 1: [["a", "b"]]}


def test_face_sets_sorted():
    c = complex_from_faces("ba", [("b", "a")])
    sets = c.face_sets()
    assert sets[0] == ()
    assert len(sets) == 4
