import itertools
import random

import pytest
from hypothesis import given, strategies as st

from coarsemon.coarse import (coarse_member, contains, metric_line, discrete_line,
                              point_space, space_tensor)
from coarsemon.errors import NotControlled, NotEquivariant, NotProper, ShapeError
from coarsemon.generators import Generator, fixture_space
from coarsemon.groups import IntLine, action_check, cyclic_group, trivial_action
from coarsemon.maps import (Affine, Compose, Const, Identity, PairMap, Proj1, Table,
                            apply_term, compose_morphisms, identity_morphism, morphism_check,
                            normal_form, space_constraints, symmetry_morphism,
                            tensor_morphisms)

G1, G2 = cyclic_group(1), cyclic_group(2)
TRIV = trivial_action(G1, IntLine())
NEG = action_check(G2, IntLine(), {0: (1, 0), 1: (-1, 0)})


def test_affine_map_is_controlled_with_slope_two():
    Z = metric_line(TRIV)
    f = morphism_check(Affine(2, 1), Z, Z)
    assert f.control_cert[0] == 2
    # (f x f)(MetricBall(r)) lies in MetricBall(2r) on a window
    for r in range(4):
        for x, y in itertools.product(range(-8, 9), range(-8, 9)):
            if abs(x - y) <= r:
                assert abs(f(x) - f(y)) <= 2 * r
                assert f.control_index(r) >= abs(f(x) - f(y))


def test_projection_from_a_product_of_lines_is_not_proper():
    Z = metric_line(TRIV)
    with pytest.raises(NotProper):
        morphism_check(Proj1(), space_tensor(Z, Z), Z)


def test_constant_map_to_the_point():
    pt = point_space(G1)
    for X in (metric_line(TRIV, "all"), fixture_space("whole4", "trivial")):
        f = morphism_check(Const("*"), X, pt)
        assert f(0 if X.ambient == IntLine() else "a") == "*"
    # with finite bornology the preimage of the point is the whole line
    with pytest.raises(NotProper):
        morphism_check(Const("*"), metric_line(TRIV), pt)


def test_translation_is_not_negation_equivariant():
    Z = metric_line(NEG)
    with pytest.raises(NotEquivariant):
        morphism_check(Affine(1, 1), Z, Z)
    assert morphism_check(Affine(-3, 0), Z, Z).control_cert[0] == 3


def test_metric_into_discrete_is_not_controlled():
    with pytest.raises(NotControlled):
        morphism_check(Identity(), metric_line(TRIV), discrete_line(TRIV))
    # the other direction is fine
    morphism_check(Identity(), discrete_line(TRIV), metric_line(TRIV))


def test_table_must_hit_the_target():
    X = fixture_space("two2", "trivial")
    with pytest.raises(ShapeError):
        morphism_check(Table.from_dict({"p": "zz", "q": "p"}), X, X)


@pytest.mark.parametrize("gname", ["trivial", "Z2", "Z3"])
def test_space_constraints_on_finite_spaces(gname):
    X, Y, W = (fixture_space(n, gname) for n in ("whole4", "two2", "twoclass6"))
    a, u, s = space_constraints(X, Y, W)
    assert a((("a", "p"), 0)) == ("a", ("p", 0))
    assert u(("*", "c")) == "c"
    back = symmetry_morphism(Y, X)
    ss = compose_morphisms(back, s)
    assert ss == identity_morphism(s.src)
    for x, y in itertools.product(X.ambient.points, Y.ambient.points):
        assert back(s((x, y))) == (x, y)


def test_associator_on_metric_lines_keeps_products_of_balls():
    Z = metric_line(TRIV, "all")
    a, _, _ = space_constraints(Z, Z, Z)
    assert a.control_cert == (1, 0)
    for r in range(3):
        V = [(((x, y), z), ((x + dx, y + dy), z + dz))
             for x, y, z in itertools.product(range(-1, 2), repeat=3)
             for dx, dy, dz in itertools.product(range(-r, r + 1), repeat=3)]
        image = {(a(p), a(q)) for p, q in V}
        assert all(contains(a.dst.coarse.cofinal(r), pq) for pq in image)


def test_normal_forms_identify_equal_terms():
    X = fixture_space("zmetric", "trivial")
    ab = normal_form(Compose((Affine(2, 1), Affine(3, -1))), X.ambient)
    assert ab == normal_form(Affine(6, -1), X.ambient)
    assert normal_form(Compose((Identity(), Affine(2, 0))), X.ambient) == normal_form(Affine(2, 0), X.ambient)
    P = space_tensor(X, X).ambient
    assert normal_form(Compose((Proj1(), PairMap(Affine(2, 0), Identity()))), P) == \
        normal_form(Compose((Affine(2, 0), Proj1())), P)


@given(st.integers(0, 10 ** 6), st.sampled_from(["trivial", "Z2", "Z3"]),
       st.sampled_from(["whole4", "twoclass6", "two2", "zmetric", "zdiscrete", "two2*zdiscrete"]))
def test_generated_maps_are_equivariant_and_controlled(seed, gname, shape):
    X = fixture_space(shape, gname)
    gen = Generator(rng=random.Random(seed))
    f = gen.gen_map(X)
    pts = gen.support(X, 3) or []
    pts = list(pts)
    for g in X.group:
        for x in pts:
            assert f(X.action.apply(g, x)) == f.dst.action.apply(g, f(x))
    # controlled: entourages go to entourages
    V = {(x, y) for x in pts for y in pts if X.coarse.pair_index((x, y)) is not None}
    if V and coarse_member(X.coarse, V):
        assert coarse_member(f.dst.coarse, {(f(x), f(y)) for x, y in V})
    # term evaluation agrees with the normal form
    for x in pts:
        assert apply_term(f.term, x) == f(x)


def test_tensor_of_morphisms_acts_componentwise():
    X = fixture_space("two2", "Z2")
    swap = morphism_check(Table.from_dict({"p": "q", "q": "p"}), X, X)
    Z = fixture_space("zmetric", "Z2")
    neg = morphism_check(Affine(-1, 0), Z, Z)
    t = tensor_morphisms(swap, neg)
    assert t(("p", 4)) == ("q", -4)
