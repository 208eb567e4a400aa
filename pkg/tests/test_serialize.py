import json
import random

from hypothesis import given, strategies as st

from coarsemon import serialize as ser
from coarsemon.coarse import FinitePairs, MetricBall, ProductEnt, UnionEnt, Diagonal
from coarsemon.generators import Generator, fixture_space, instances_for
from coarsemon.groth import constraint_symm
from coarsemon.maps import identity_morphism

SHAPES = ["whole4", "twoclass6", "two2", "zmetric", "zdiscrete", "two2*zdiscrete", "whole4*zmetric"]


def roundtrip(v):
    text = json.dumps(ser.value_to_json(v), sort_keys=True)
    return ser.value_from_json(json.loads(text), check=True)


def test_entourage_tags():
    assert ser.entourage_to_json(MetricBall(3)) == {"kind": "metric_ball", "r": 3}
    for U in (Diagonal(), MetricBall(2), FinitePairs({(1, 2), (-1, -2)}),
              ProductEnt(MetricBall(1), Diagonal()), UnionEnt((Diagonal(), FinitePairs({("a", "b")})))):
        assert ser.entourage_from_json(json.loads(json.dumps(ser.entourage_to_json(U)))) == U


def test_points_survive_json():
    for p in ("a", 3, -4, ("p", 2), (("a", 1), "q")):
        assert ser.point_from_json(json.loads(json.dumps(ser.point_to_json(p)))) == p


@given(st.integers(0, 10 ** 6), st.sampled_from(["trivial", "Z2", "Z3"]), st.integers(0, 3),
       st.sampled_from(SHAPES))
def test_values_round_trip(seed, gname, k, shape):
    gen = Generator(rng=random.Random(seed))
    inst = instances_for(gname)[k]
    X = fixture_space(shape, gname)
    assert roundtrip(X) == X
    P, Q = gen.gen_groth_object(X, inst), gen.gen_groth_object(X, inst)
    assert roundtrip(P) == P
    f = gen.gen_map(X)
    assert roundtrip(f) == f
    m = gen.gen_groth_morphism(P, f, gen.gen_groth_object(f.dst, inst))
    assert roundtrip(m) == m
    assert roundtrip(m.phi) == m.phi
    assert roundtrip(constraint_symm(P, Q)) == constraint_symm(P, Q)
    assert roundtrip([P, identity_morphism(X)]) == [P, identity_morphism(X)]
    assert roundtrip(inst) == inst


def test_plain_values_pass_through():
    assert ser.value_from_json(ser.value_to_json(3)) == 3
    assert ser.value_from_json(ser.value_to_json("x")) == "x"
