import itertools

import pytest
from hypothesis import given, strategies as st

from coarsemon.errors import (NoIdentity, NoInverse, NotAnAction, NotAssociative,
                              NotBijective, NotClosed)
from coarsemon.groups import (FiniteSet, IntLine, PairSet, action_check, cyclic_group,
                              diagonal_action, group_check, orbit, orbit_representatives,
                              order_key, sort_points, stabilizer, symmetric_group,
                              trivial_action)


def z2_table():
    return {("e", "e"): "e", ("e", "g"): "g", ("g", "e"): "g", ("g", "g"): "e"}


def test_z2_table_is_a_group():
    G = group_check(["e", "g"], z2_table(), "e", {"e": "e", "g": "g"})
    assert len(G) == 2 and G.mul("g", "g") == "e" and G.inv("g") == "g"


def test_idempotent_non_identity_has_no_inverse():
    mult = z2_table()
    mult[("g", "g")] = "g"
    with pytest.raises(NoInverse):
        group_check(["e", "g"], mult, "e", {"e": "e", "g": "g"})


def test_missing_product_is_not_closed():
    mult = z2_table()
    del mult[("g", "g")]
    with pytest.raises(NotClosed):
        group_check(["e", "g"], mult, "e", {"e": "e", "g": "g"})


def test_wrong_unit():
    with pytest.raises(NoIdentity):
        group_check(["e", "g"], z2_table(), "g", {"e": "e", "g": "g"})


def test_non_associative_loop():
    # a commutative loop of order 5 with two-sided identity and inverses that is not associative
    els = [0, 1, 2, 3, 4]
    rows = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    mult = {(a, b): rows[a][b] for a in els for b in els}
    with pytest.raises(NotAssociative):
        group_check(els, mult, 0, {a: a for a in els})


def test_s3_is_a_group_by_brute_force():
    S3 = symmetric_group(3)
    assert len(S3) == 6
    # independent associativity check by composing permutations as tuples
    perm = {g: tuple(int(c) for c in g) for g in S3}
    for a, b in itertools.product(S3, S3):
        ab = tuple(perm[a][perm[b][i]] for i in range(3))
        assert perm[S3.mul(a, b)] == ab
    assert not all(S3.mul(a, b) == S3.mul(b, a) for a in S3 for b in S3)


def test_negation_on_integer_line():
    G = cyclic_group(2)
    act = action_check(G, IntLine(), {0: (1, 0), 1: (-1, 0)})
    assert act.apply(1, 5) == -5 and act.apply(0, 5) == 5


def test_swap_mismatch_is_not_an_action():
    G = cyclic_group(2)
    X = FiniteSet(("a", "b"))
    # g acts as the identity but g*g = e is fine; the broken one sends both to a
    with pytest.raises(NotBijective):
        action_check(G, X, {0: {"a": "a", "b": "b"}, 1: {"a": "a", "b": "a"}})
    G3 = cyclic_group(3)
    # a transposition cannot represent the generator of Z/3
    with pytest.raises(NotAnAction):
        action_check(G3, X, {0: {"a": "a", "b": "b"}, 1: {"a": "b", "b": "a"}, 2: {"a": "b", "b": "a"}})


def test_cyclic_shift_on_three_points_checked_pointwise():
    G = cyclic_group(3)
    X = FiniteSet((0, 1, 2))
    act = action_check(G, X, {g: {x: (x + g) % 3 for x in range(3)} for g in G})
    for g, h in itertools.product(G, G):
        for x in range(3):
            assert act.apply(g, act.apply(h, x)) == act.apply(G.mul(g, h), x)


def test_orbits():
    G = cyclic_group(2)
    neg = action_check(G, IntLine(), {0: (1, 0), 1: (-1, 0)})
    assert orbit(neg, 3) == {3, -3}
    assert orbit(trivial_action(G, FiniteSet(("a",))), "a") == {"a"}
    G3 = cyclic_group(3)
    shift = action_check(G3, FiniteSet((0, 1, 2)), {g: {x: (x + g) % 3 for x in range(3)} for g in G3})
    assert orbit(shift, 0) == {0, 1, 2}


def test_diagonal_action():
    G = cyclic_group(2)
    neg = action_check(G, IntLine(), {0: (1, 0), 1: (-1, 0)})
    d = diagonal_action(neg)
    assert d.apply(1, (2, -7)) == (-2, 7)
    triv = diagonal_action(trivial_action(G, FiniteSet(("a", "b"))))
    assert triv.is_trivial()
    G3 = cyclic_group(3)
    shift = action_check(G3, FiniteSet((0, 1, 2)), {g: {x: (x + g) % 3 for x in range(3)} for g in G3})
    d3 = diagonal_action(shift)
    for g, h in itertools.product(G3, G3):
        for p in itertools.product(range(3), range(3)):
            assert d3.apply(g, d3.apply(h, p)) == d3.apply(G3.mul(g, h), p)


@given(st.sampled_from([1, 2, 3]), st.integers(-20, 20))
def test_orbit_stabilizer_on_the_line(n, x):
    G = cyclic_group(n)
    coeffs = {g: ((-1) ** g, 0) if n == 2 else (1, 0) for g in G}
    act = action_check(G, IntLine(), coeffs)
    assert len(orbit(act, x)) * len(stabilizer(act, x)) == len(G)


@given(st.lists(st.one_of(st.integers(-5, 5), st.sampled_from("abc"),
                          st.tuples(st.integers(0, 2), st.integers(0, 2))), max_size=8))
def test_order_key_is_a_total_order(points):
    pts = sort_points(set(points))
    assert pts == sorted(set(points), key=order_key)
    assert len(pts) == len(set(points))


def test_orbit_representatives_cover_every_orbit():
    G = cyclic_group(2)
    X = FiniteSet(("a", "b", "c", "d"))
    act = action_check(G, X, {0: {p: p for p in "abcd"}, 1: {"a": "b", "b": "a", "c": "d", "d": "c"}})
    reps = orbit_representatives(act, X.points)
    assert reps == ["a", "c"]


def test_pair_points_validate():
    P = PairSet(FiniteSet(("a",)), IntLine())
    P.check_point(("a", 3))
    with pytest.raises(Exception):
        P.check_point(("b", 3))
