import random

import pytest
from hypothesis import given, strategies as st

from coarsemon.additive import MatCat
from coarsemon.controlled import _make, pushforward_obj
from coarsemon.generators import Generator, fixture_space, get_group, instances_for
from coarsemon.groth import mor_tensor, groth_from_entries
from coarsemon.maps import Table, identity_morphism, morphism_check
from coarsemon.oracle import (OracleMismatch, check_composition, check_pushforward,
                              check_pushforward_rho, check_tensor, engine_equivariant,
                              functorial_equivariant, subsets)
from coarsemon.rings import Matrix, integers_mod

Z2 = integers_mod(2)
FINITE = ["whole4", "twoclass6", "two2"]


def test_subset_poset_size():
    assert len(list(subsets(["a", "b", "c", "d"]))) == 16


def test_mod_two_table_pushforward():
    gen = Generator(rng=random.Random(0))
    X = fixture_space("whole4", "trivial")
    Y = fixture_space("two2", "trivial")
    # a, c -> p and b, d -> q: "x mod 2" on the labels 0..3
    f = morphism_check(Table.from_dict({"a": "p", "b": "q", "c": "p", "d": "q"}), X, Y)
    inst = MatCat(Z2, get_group("trivial"))
    M, N = gen.gen_object(X, inst, max_points=4), gen.gen_object(X, inst, max_points=4)
    pushed = pushforward_obj(f, M)
    for y, xs in (("p", "ac"), ("q", "bd")):
        assert pushed.fiber(y) == sum(M.fiber(x) for x in xs)
    phi = gen.gen_controlled_morphism(M, N)
    assert check_pushforward(f, phi) == 4          # every subset of {p, q}
    assert check_pushforward_rho(f, M) > 0


@given(st.integers(0, 10 ** 6), st.sampled_from(["trivial", "Z2", "Z3"]), st.integers(0, 3),
       st.sampled_from(FINITE))
def test_engine_agrees_with_oracle(seed, gname, k, shape):
    gen = Generator(rng=random.Random(seed))
    inst = instances_for(gname)[k]
    X = fixture_space(shape, gname)
    A, B, C = (gen.gen_object(X, inst) for _ in range(3))
    phi, psi = gen.gen_controlled_morphism(A, B), gen.gen_controlled_morphism(B, C)
    assert check_composition(phi, psi) == 2 ** len(X.ambient.points)
    f = gen.gen_map(X, targets=["pt", "two2", "whole4"])
    check_pushforward(f, phi)
    check_pushforward_rho(f, A)
    assert functorial_equivariant(phi) and engine_equivariant(phi)


@given(st.integers(0, 10 ** 6), st.sampled_from(["trivial", "Z2"]), st.integers(0, 3))
def test_tensor_agrees_with_oracle(seed, gname, k):
    gen = Generator(rng=random.Random(seed))
    inst = instances_for(gname)[k]
    X = fixture_space("two2", gname)
    P, P2, Q, Q2 = (gen.gen_groth_object(X, inst) for _ in range(4))
    a = gen.gen_groth_morphism(P, identity_morphism(X), P2)
    b = gen.gen_groth_morphism(Q, identity_morphism(X), Q2)
    assert check_tensor(a.phi, b.phi, mor_tensor(a, b).phi) == 16


def test_oracle_rejects_a_perturbed_tensor():
    gen = Generator(rng=random.Random(3))
    X = fixture_space("two2", "trivial")
    inst = MatCat(Z2, get_group("trivial"))
    P, Q = gen.gen_groth_object(X, inst), gen.gen_groth_object(X, inst)
    a = groth_from_entries(P, P, identity_morphism(X), {})
    b = groth_from_entries(Q, Q, identity_morphism(X), {})
    t = mor_tensor(a, b).phi
    assert check_tensor(a.phi, b.phi, t) == 16
    k = t.src.support()[0]
    A = t.src.fiber(k)
    bad = _make(t.src, t.dst, {**t.entry_dict(), (k, k): Matrix.identity(Z2, A)})
    with pytest.raises(OracleMismatch):
        check_tensor(a.phi, b.phi, bad)


def test_equivariance_expansion_matches_functorial_definition():
    """Perturb entries of equivariant morphisms and compare both equivariance tests."""
    rng = random.Random(11)
    gen = Generator(rng=rng)
    agree = broken = 0
    for i in range(60):
        gname = ("Z2", "Z3")[i % 2]
        inst = instances_for(gname)[(i // 2) % 4]
        X = fixture_space(("two2", "whole4")[i % 2], gname)
        M, N = gen.gen_object(X, inst, max_points=2), gen.gen_object(X, inst, max_points=2)
        phi = gen.gen_controlled_morphism(M, N, density=1.0)
        e = phi.entry_dict()
        keys = [(xp, x) for xp in N.support() for x in M.support()]
        xp, x = rng.choice(keys)
        e[(xp, x)] = inst.add(phi.entry(xp, x), inst.random_mor(rng, M.fiber(x), N.fiber(xp)))
        cand = _make(M, N, e)
        fe, ee = functorial_equivariant(cand), engine_equivariant(cand)
        assert fe == ee
        agree += 1
        broken += not ee
    assert agree == 60 and broken > 0
