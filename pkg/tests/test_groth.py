import itertools
import random

import pytest
from hypothesis import given, strategies as st

from coarsemon.additive import MatCat, ShiftCat
from coarsemon.controlled import mor_identity, mor_is_iso, obj_check, zero_object
from coarsemon.errors import NoFactorization
from coarsemon.generators import Generator, fixture_space, get_group, instances_for
from coarsemon.groth import (GrothObject, biadditive_map, check_groth_morphism,
                             cocartesian_lift, cocartesian_verify, constraint_assoc,
                             constraint_symm, constraint_unit, exchange_map,
                             groth_compose, groth_from_entries, groth_identity, mor_tensor,
                             mor_tensor_left, mor_tensor_right, obj_tensor, projection,
                             unit_object)
from coarsemon.maps import (Const, Table, compose_morphisms, identity_morphism,
                            morphism_check, space_constraints, tensor_morphisms)
from coarsemon.rings import INTEGERS, Matrix, integers_mod

TRIV, Z2G = get_group("trivial"), get_group("Z2")


def m(ring, rows):
    return Matrix.from_rows(ring, rows)


def obj(space, gname, ring, table):
    G = get_group(gname)
    inst = MatCat(ring, G)
    rho = {(g, x): Matrix.identity(ring, r) for g in G for x, r in table.items()}
    return GrothObject(space, obj_check(space, inst, table, rho))


def two_point(ring=INTEGERS, ranks=(1, 1)):
    X = fixture_space("two2", "trivial")
    return obj(X, "trivial", ring, dict(zip("pq", ranks)))


def to_point(P):
    pt = fixture_space("pt", P.space.group.name)
    return morphism_check(Const("*"), P.space, pt)


def test_identity_is_neutral():
    gen = Generator(rng=random.Random(0))
    X = fixture_space("whole4", "Z2")
    inst = MatCat(integers_mod(2), Z2G)
    P, Q = gen.gen_groth_object(X, inst), gen.gen_groth_object(X, inst)
    mm = gen.gen_groth_morphism(P, identity_morphism(X), Q)
    assert groth_compose(groth_identity(Q), mm) == mm == groth_compose(mm, groth_identity(P))


def test_composite_over_const_assembles_blocks():
    P = two_point()
    e = {(y, x): m(INTEGERS, [[v]]) for (y, x), v in zip(itertools.product("pq", "pq"), (1, 2, 3, 4))}
    m1 = groth_from_entries(P, P, identity_morphism(P.space), e)
    c = to_point(P)
    Q = obj(c.dst, "trivial", INTEGERS, {"*": 1})
    m2 = groth_from_entries(P, Q, c, {("*", "*"): m(INTEGERS, [[5, 7]])})
    comp = groth_compose(m2, m1)
    # [5 7] . [[1 2] [3 4]] = [26 38]
    assert comp.phi.entry_dict() == {("*", "*"): m(INTEGERS, [[26, 38]])}
    assert comp.f == c


def test_associativity_over_z2():
    ring = integers_mod(2)
    gen = Generator(rng=random.Random(4))
    X = fixture_space("twoclass6", "Z2")
    inst = MatCat(ring, Z2G)
    P = gen.gen_groth_object(X, inst)
    f1 = gen.gen_map(X, targets=["whole4"])
    Q = gen.gen_groth_object(f1.dst, inst)
    f2 = gen.gen_map(f1.dst, targets=["two2"])
    R = gen.gen_groth_object(f2.dst, inst)
    f3 = gen.gen_map(f2.dst, targets=["pt"])
    S = gen.gen_groth_object(f3.dst, inst)
    a, b, c = gen.gen_groth_morphism(P, f1, Q), gen.gen_groth_morphism(Q, f2, R), gen.gen_groth_morphism(R, f3, S)
    assert groth_compose(c, groth_compose(b, a)) == groth_compose(groth_compose(c, b), a)


def test_unit_objects():
    for inst in (MatCat(INTEGERS, Z2G), MatCat(integers_mod(3), Z2G)):
        U = unit_object(Z2G, inst)
        assert U.obj.fiber("*") == 1
        assert all(U.obj.rho_at(g, "*") == inst.identity(1) for g in Z2G)
    sh = ShiftCat(Z2G, INTEGERS)
    U = unit_object(Z2G, sh)
    assert U.obj.fiber("*") == (1, 1)
    assert all(U.obj.rho_at(g, "*") == sh.epsilon(g) for g in Z2G)


def test_tensor_of_objects():
    P = two_point(ranks=(2, 1))
    Q = obj(fixture_space("whole4", "trivial"), "trivial", INTEGERS, {"a": 3, "c": 1})
    T = obj_tensor(P, Q)
    assert set(T.obj.support()) == set(itertools.product("pq", "ac"))
    assert T.obj.fiber(("p", "a")) == 6
    Z = GrothObject(P.space, zero_object(P.space, P.inst))
    assert obj_tensor(Z, Q).obj.support() == []


def test_tensor_of_morphisms():
    P = two_point()
    Q = obj(fixture_space("two2", "trivial"), "trivial", INTEGERS, {"p": 1})
    assert mor_tensor_left(groth_identity(P), Q) == groth_identity(obj_tensor(P, Q))
    single = groth_from_entries(P, P, identity_morphism(P.space), {("q", "p"): m(INTEGERS, [[3]])})
    t = mor_tensor_left(single, Q)
    assert t.phi.entry_dict() == {(("q", "p"), ("p", "p")): m(INTEGERS, [[3]])}


def test_interchange_over_z3():
    ring = integers_mod(3)
    gen = Generator(rng=random.Random(9))
    X = fixture_space("whole4", "trivial")
    inst = MatCat(ring, TRIV)
    for _ in range(10):
        P, P2, Q, Q2 = (gen.gen_groth_object(X, inst) for _ in range(4))
        a = gen.gen_groth_morphism(P, identity_morphism(X), P2)
        b = gen.gen_groth_morphism(Q, identity_morphism(X), Q2)
        full = mor_tensor(a, b)
        assert groth_compose(mor_tensor_left(a, Q2), mor_tensor_right(P, b)) == full
        assert groth_compose(mor_tensor_right(P2, b), mor_tensor_left(a, Q)) == full


def test_constraints_for_matcat():
    P = two_point(ranks=(2, 1))
    Q = two_point(ranks=(1, 3))
    R = two_point(ranks=(1, 1))
    a = constraint_assoc(P, Q, R)
    for ((x, (y, z)), _), e in a.phi.entries:
        assert e == Matrix.identity(INTEGERS, P.obj.fiber(x) * Q.obj.fiber(y) * R.obj.fiber(z))
    s = constraint_symm(P, Q)
    for ((y, x), _), e in s.phi.entries:
        assert e == P.inst.sigma(P.obj.fiber(x), Q.obj.fiber(y))
    for c in (a, s, constraint_unit(P)):
        check_groth_morphism(c)
        assert mor_is_iso(c.phi)[0]
    assert groth_compose(constraint_symm(Q, P), s) == groth_identity(obj_tensor(P, Q))


def test_projection_is_strict():
    P, Q, R = two_point(), two_point(ranks=(2, 0)), two_point(ranks=(1, 2))
    aX, uX, sX = space_constraints(P.space, Q.space, R.space)
    assert projection(constraint_assoc(P, Q, R)) == aX
    assert projection(constraint_symm(P, Q)) == sX
    assert projection(constraint_unit(P)) == uX
    assert projection(obj_tensor(P, Q)) == obj_tensor(P, Q).space
    assert projection(unit_object(TRIV, P.inst)) == fixture_space("pt", "trivial")


def test_exchange_for_identity_and_const():
    P, Q = two_point(ranks=(1, 2)), two_point(ranks=(2, 1))
    idX = identity_morphism(P.space)
    E, ok, _ = exchange_map(idX, idX, P, Q)
    assert ok and E == mor_identity(E.src)
    c = to_point(P)
    E, ok, inv = exchange_map(c, c, P, Q)
    # (1+2) (x) (2+1) = 9, reordered from the four summands m_i n_j
    assert ok and E.src.fiber(("*", "*")) == 9
    big = E.entry_dict()[(("*", "*"), ("*", "*"))]
    assert sorted(big.data) == [0] * 72 + [1] * 9   # a permutation matrix


def test_exchange_for_random_two_to_one_tables():
    gen = Generator(rng=random.Random(5))
    ring = integers_mod(2)
    for gname in ("trivial", "Z2"):
        X = fixture_space("whole4", gname)
        inst = MatCat(ring, get_group(gname))
        for _ in range(10):
            f, g = gen.gen_map(X, targets=["two2"]), gen.gen_map(X, targets=["two2", "pt"])
            E, ok, _ = exchange_map(f, g, gen.gen_groth_object(X, inst), gen.gen_groth_object(X, inst))
            assert ok


def test_biadditivity():
    gen = Generator(rng=random.Random(6))
    X = fixture_space("two2", "Z2")
    for inst in instances_for("Z2"):
        c, ok, _ = biadditive_map(*(gen.gen_groth_object(X, inst) for _ in range(3)))
        assert ok


def test_cocartesian_identity_and_const():
    P = two_point()
    idX = identity_morphism(P.space)
    lift = cocartesian_lift(idX, P)
    assert lift == groth_identity(P)
    test = groth_from_entries(P, P, idX, {("p", "q"): m(INTEGERS, [[4]]), ("q", "q"): m(INTEGERS, [[1]])})
    res = cocartesian_verify(lift, test, idX)
    assert res["fill_in"] == test and res["unique"]
    c = to_point(P)
    Q = obj(c.dst, "trivial", INTEGERS, {"*": 2})
    test = groth_from_entries(P, Q, c, {("*", "*"): m(INTEGERS, [[1, 2], [3, 4]])})
    lift = cocartesian_lift(c, P)
    res = cocartesian_verify(lift, test, identity_morphism(c.dst))
    assert res["fill_in"].phi == test.phi and res["unique"]
    with pytest.raises(NoFactorization):
        cocartesian_verify(lift, test)


def test_cocartesian_over_z6():
    ring = integers_mod(6)
    X = fixture_space("whole4", "trivial")
    Y = fixture_space("two2", "trivial")
    inst = MatCat(ring, TRIV)
    f = morphism_check(Table.from_dict({"a": "p", "b": "q", "c": "p", "d": "q"}), X, Y)
    hp = morphism_check(Const("*"), Y, fixture_space("pt", "trivial"))
    gen = Generator(rng=random.Random(7))
    for _ in range(10):
        P = gen.gen_groth_object(X, inst)
        Q = gen.gen_groth_object(hp.dst, inst)
        test = gen.gen_groth_morphism(P, compose_morphisms(hp, f), Q)
        res = cocartesian_verify(cocartesian_lift(f, P), test, hp)
        assert res["unique"] and groth_compose(res["fill_in"], cocartesian_lift(f, P)) == test
    wrong = morphism_check(Table.from_dict({"p": "q", "q": "p"}), Y, Y)
    P = gen.gen_groth_object(X, inst)
    test = gen.gen_groth_morphism(P, f, gen.gen_groth_object(Y, inst))
    with pytest.raises(NoFactorization):
        cocartesian_verify(cocartesian_lift(f, P), test, wrong)


@given(st.integers(0, 10 ** 6), st.sampled_from(["trivial", "Z2", "Z3"]), st.integers(0, 3),
       st.sampled_from(["whole4", "two2", "zmetric", "two2*zdiscrete"]))
def test_symmetry_squares_to_identity(seed, gname, k, shape):
    gen = Generator(rng=random.Random(seed))
    inst = instances_for(gname)[k]
    X = fixture_space(shape, gname)
    P, Q = gen.gen_groth_object(X, inst), gen.gen_groth_object(X, inst)
    s = constraint_symm(P, Q)
    check_groth_morphism(s)
    assert groth_compose(constraint_symm(Q, P), s) == groth_identity(obj_tensor(P, Q))
    f = tensor_morphisms(identity_morphism(X), identity_morphism(X))
    assert mor_tensor(groth_identity(P), groth_identity(Q)).f == f
