"""Law suites: seeded instance streams, verdict counting and reports.

Every law instance ``i`` draws from its own ``random.Random`` seeded by
``(seed, suite, law, i)``, so instances are independent of each other and
of evaluation order.  A law is a pair of functions: ``make`` builds a case
(a dict of engine values) and ``check`` raises on a violation.  Cases are
serialized with :mod:`coarsemon.serialize`, which is what makes a failing
instance replayable without the generator.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable, Optional

from . import serialize as ser
from .additive import (FakeSigmaMatCat, MatCat, ShiftCat, check_instance_laws,
                       check_strictness)
from .coarse import Bornology, MetricBall, make_space, point_space, space_tensor
from .controlled import (_build_object, _make, check_object, mor_add,
                         mor_check, mor_compose, mor_identity, mor_is_iso,
                         obj_biproduct, pushforward_mor, pushforward_obj,
                         witness_compose_contained)
from .errors import (CoarsemonError, LawViolation, SearchBoundExceeded,
                     UnknownSuite)
from .generators import GROUPS, Generator, fixture_space, get_group, instances_for
from .groth import (GrothMorphism, GrothObject, biadditive_map,
                    check_groth_morphism, cocartesian_lift, cocartesian_verify,
                    constraint_assoc, constraint_right_unit, constraint_symm,
                    constraint_unit, exchange_map, groth_compose,
                    groth_compose_all, groth_identity, mor_tensor,
                    mor_tensor_left, mor_tensor_right, obj_tensor, projection,
                    unit_object)
from .groups import IntLine, action_check, orbit
from .maps import (Proj1, assoc_morphism, compose_morphisms, identity_morphism,
                   morphism_check, symmetry_morphism, tensor_morphisms,
                   unitor_morphism)
from .oracle import (OracleMismatch, check_composition, check_pushforward,
                     check_pushforward_rho, check_tensor, engine_equivariant,
                     functorial_equivariant)
from .rings import parse_ring

DEFAULT_SEED = 0
DEFAULT_INSTANCES = 200

# shapes used by the generic suites; every branch of the fixture matrix shows up
SHAPES = ("whole4", "twoclass6", "two2", "zmetric", "zdiscrete",
          "whole4*zmetric", "two2*zdiscrete")
SMALL_SHAPES = ("whole4", "twoclass6", "two2", "zmetric", "zdiscrete", "two2*zmetric")
FINITE_SHAPES = ("whole4", "twoclass6", "two2")


@dataclass
class Context:
    seed: int = DEFAULT_SEED
    instances: int = DEFAULT_INSTANCES
    ring: Optional[str] = None
    fake_sigma: bool = False
    max_points: int = 3
    max_rank: int = 2
    max_radius: int = 2

    def params(self):
        return {"instances": self.instances, "ring": self.ring, "fake_sigma": self.fake_sigma,
                "max_points": self.max_points, "max_rank": self.max_rank,
                "max_radius": self.max_radius}

    def instance_pool(self, gname):
        pool = instances_for(gname)
        if self.ring is not None:
            R = parse_ring(self.ring)
            pool = [inst for inst in pool if inst.ring == R]
            if not pool:
                pool = [MatCat(R, get_group(gname))]
        if self.fake_sigma:
            pool = [FakeSigmaMatCat(inst.ring, inst.group) if type(inst) is MatCat else inst
                    for inst in pool]
        return pool

    def combo(self, i):
        """Group and additive instance for law instance ``i`` (round robin)."""
        gname = GROUPS[i % len(GROUPS)]
        pool = self.instance_pool(gname)
        return gname, pool[(i // len(GROUPS)) % len(pool)]

    def generator(self, rng, **kw):
        opts = dict(max_points=self.max_points, max_rank=self.max_rank, max_radius=self.max_radius)
        opts.update(kw)
        return Generator(rng=rng, **opts)


@dataclass
class Law:
    name: str
    anchor: str
    make: Callable
    check: Callable
    expect: Optional[str] = None        # error code a planted violation must raise
    budget: Optional[int] = None        # cap on instances for exhaustive laws


@dataclass
class LawResult:
    law: str
    anchor: str
    instances: int = 0
    passed: int = 0
    failed: int = 0
    unknown: int = 0
    counterexample: Optional[dict] = None
    wall_time: float = 0.0

    def to_json(self):
        return {"law": self.law, "anchor": self.anchor, "instances": self.instances,
                "pass": self.passed, "fail": self.failed, "unknown": self.unknown,
                "counterexample": self.counterexample, "wall_time": round(self.wall_time, 4)}


def _expect(law, ok, msg, **witness):
    if not ok:
        raise LawViolation(law, msg, witness=witness or None)


def _rng(seed, suite, law, i):
    return random.Random(f"{seed}:{suite}:{law}:{i}")


# ---------------------------------------------------------------- coherence

def _objects(ctx, rng, i, n, shapes=SHAPES, **kw):
    gname, inst = ctx.combo(i)
    gen = ctx.generator(rng, **kw)
    return [gen.gen_groth_object(fixture_space(rng.choice(shapes), gname), inst) for _ in range(n)]


def _make_objs(n, shapes=SHAPES, **kw):
    names = "PQRS"[:n]
    return lambda ctx, rng, i: dict(zip(names, _objects(ctx, rng, i, n, shapes, **kw)))


def _id(P):
    return groth_identity(P)


def check_pentagon(c):
    P, Q, R, S = c["P"], c["Q"], c["R"], c["S"]
    a = constraint_assoc
    lhs = groth_compose(a(P, Q, obj_tensor(R, S)), a(obj_tensor(P, Q), R, S))
    rhs = groth_compose_all(mor_tensor_right(P, a(Q, R, S)), a(P, obj_tensor(Q, R), S),
                            mor_tensor_left(a(P, Q, R), S))
    _expect("pentagon", lhs == rhs, "the two composites of associators differ")


def check_triangle(c):
    P, Q = c["P"], c["Q"]
    one = unit_object(P.space.group, P.inst)
    lhs = groth_compose(mor_tensor_right(P, constraint_unit(Q)), constraint_assoc(P, one, Q))
    rhs = mor_tensor_left(constraint_right_unit(P), Q)
    _expect("triangle", lhs == rhs, "unitors and associator do not commute")


def check_inverse_relation(c):
    P, Q = c["P"], c["Q"]
    lhs = groth_compose(constraint_symm(Q, P), constraint_symm(P, Q))
    _expect("inverse_relation", lhs == _id(obj_tensor(P, Q)), "symmetry twice is not the identity")


def check_hexagon(c):
    P, Q, R = c["P"], c["Q"], c["R"]
    a, s = constraint_assoc, constraint_symm
    lhs = groth_compose_all(a(Q, R, P), s(P, obj_tensor(Q, R)), a(P, Q, R))
    rhs = groth_compose_all(mor_tensor_right(Q, s(P, R)), a(Q, P, R), mor_tensor_left(s(P, Q), R))
    _expect("hexagon", lhs == rhs, "the two hexagon composites differ")


def make_naturality(ctx, rng, i):
    gname, inst = ctx.combo(i)
    gen = ctx.generator(rng, max_points=2)
    out = {}
    for name in "PQR":
        X = fixture_space(rng.choice(SMALL_SHAPES), gname)
        P = gen.gen_groth_object(X, inst)
        f = gen.gen_map(X)
        P2 = gen.gen_groth_object(f.dst, inst)
        out["m" + name] = gen.gen_groth_morphism(P, f, P2)
    return out


def check_naturality(c):
    m, n, k = c["mP"], c["mQ"], c["mR"]
    lhs = groth_compose(constraint_assoc(m.dst, n.dst, k.dst), mor_tensor(mor_tensor(m, n), k))
    rhs = groth_compose(mor_tensor(m, mor_tensor(n, k)), constraint_assoc(m.src, n.src, k.src))
    _expect("naturality", lhs == rhs, "associator is not natural")
    lhs = groth_compose(constraint_symm(m.dst, n.dst), mor_tensor(m, n))
    rhs = groth_compose(mor_tensor(n, m), constraint_symm(m.src, n.src))
    _expect("naturality", lhs == rhs, "symmetry is not natural")
    one = unit_object(m.src.space.group, m.src.inst)
    lhs = groth_compose(constraint_unit(m.dst), mor_tensor(_id(one), m))
    rhs = groth_compose(m, constraint_unit(m.src))
    _expect("naturality", lhs == rhs, "unitor is not natural")


def check_constraints_valid(c):
    P, Q, R = c["P"], c["Q"], c["R"]
    for m in (constraint_assoc(P, Q, R), constraint_unit(P), constraint_symm(P, Q)):
        check_groth_morphism(m)
        ok, _ = mor_is_iso(m.phi)
        _expect("constraints_valid", ok, "constraint component is not invertible")


# ---------------------------------------------------------------- fibration

def make_strict_projection(ctx, rng, i):
    c = make_naturality(ctx, rng, i)
    return {"m": c["mP"], "n": c["mQ"], "k": c["mR"]}


def check_strict_projection(c):
    m, n, k = c["m"], c["n"], c["k"]
    P, Q, R = m.src, n.src, k.src
    G = P.space.group
    ok = (projection(obj_tensor(P, Q)) == space_tensor(P.space, Q.space)
          and projection(mor_tensor(m, n)) == tensor_morphisms(m.f, n.f)
          and projection(unit_object(G, P.inst)) == point_space(G)
          and projection(constraint_assoc(P, Q, R)) == assoc_morphism(P.space, Q.space, R.space)
          and projection(constraint_unit(P)) == unitor_morphism(P.space)
          and projection(constraint_symm(P, Q)) == symmetry_morphism(P.space, Q.space)
          and projection(groth_identity(P)) == identity_morphism(P.space))
    _expect("strict_projection", ok, "projection does not preserve the monoidal data on the nose")


def make_exchange(ctx, rng, i):
    gname, inst = ctx.combo(i)
    gen = ctx.generator(rng)
    P = gen.gen_groth_object(fixture_space(rng.choice(SMALL_SHAPES), gname), inst)
    Q = gen.gen_groth_object(fixture_space(rng.choice(SMALL_SHAPES), gname), inst)
    return {"f": gen.gen_map(P.space), "g": gen.gen_map(Q.space), "P": P, "Q": Q}


def check_exchange(c):
    f, g, P, Q = c["f"], c["g"], c["P"], c["Q"]
    E, ok, inv = exchange_map(f, g, P, Q)
    _expect("exchange_iso", ok, "exchange morphism is not invertible")
    _expect("exchange_iso", mor_compose(inv, E) == mor_identity(E.src)
            and mor_compose(E, inv) == mor_identity(E.dst), "claimed inverse is wrong")
    # the exchange map is the controlled part of the tensor of the two cocartesian lifts
    lifted = mor_tensor(cocartesian_lift(f, P), cocartesian_lift(g, Q))
    _expect("exchange_iso", lifted.phi == E, "tensor of lifts disagrees with the exchange map")


def make_biadditive(ctx, rng, i):
    gname, inst = ctx.combo(i)
    gen = ctx.generator(rng)
    X = fixture_space(rng.choice(SMALL_SHAPES), gname)
    Y = fixture_space(rng.choice(SMALL_SHAPES), gname)
    return {"M0": gen.gen_groth_object(X, inst), "M1": gen.gen_groth_object(X, inst),
            "N": gen.gen_groth_object(Y, inst)}


def check_biadditive(c):
    cmp_, ok, inv = biadditive_map(c["M0"], c["M1"], c["N"])
    _expect("biadditive", ok, "comparison map is not invertible")
    _expect("biadditive", mor_compose(inv, cmp_) == mor_identity(cmp_.src), "claimed inverse is wrong")


def make_cocartesian(ctx, rng, i):
    gname, inst = ctx.combo(i)
    gen = ctx.generator(rng)
    X = fixture_space(rng.choice(SMALL_SHAPES), gname)
    P = gen.gen_groth_object(X, inst)
    f = gen.gen_map(X)
    h_prime = gen.gen_map(f.dst)
    h = compose_morphisms(h_prime, f)
    target = gen.gen_groth_object(h.dst, inst)
    return {"f": f, "h_prime": h_prime, "test": gen.gen_groth_morphism(P, h, target)}


def check_cocartesian(c):
    lift = cocartesian_lift(c["f"], c["test"].src)
    res = cocartesian_verify(lift, c["test"], c["h_prime"])
    check_groth_morphism(res["fill_in"])
    _expect("cocartesian", res["unique"], "fill-in is not unique")


# ---------------------------------------------------------------- category

def _chain(ctx, rng, i, length):
    gname, inst = ctx.combo(i)
    gen = ctx.generator(rng, max_points=2)
    X = fixture_space(rng.choice(SMALL_SHAPES), gname)
    P = gen.gen_groth_object(X, inst)
    ms = []
    for _ in range(length):
        f = gen.gen_map(P.space)
        Q = gen.gen_groth_object(f.dst, inst)
        ms.append(gen.gen_groth_morphism(P, f, Q))
        P = Q
    return ms


def make_assoc(ctx, rng, i):
    return dict(zip(("m1", "m2", "m3"), _chain(ctx, rng, i, 3)))


def check_assoc(c):
    m1, m2, m3 = c["m1"], c["m2"], c["m3"]
    lhs = groth_compose(groth_compose(m3, m2), m1)
    rhs = groth_compose(m3, groth_compose(m2, m1))
    _expect("groth_associativity", lhs == rhs, "composition is not associative")


def make_identity_law(ctx, rng, i):
    return {"m": _chain(ctx, rng, i, 1)[0]}


def check_identity_law(c):
    m = c["m"]
    ok = groth_compose(groth_identity(m.dst), m) == m and groth_compose(m, groth_identity(m.src)) == m
    _expect("groth_identity", ok, "identity is not neutral")


def _same_space(ctx, rng, i, n_obj, shapes=SMALL_SHAPES):
    gname, inst = ctx.combo(i)
    gen = ctx.generator(rng)
    X = fixture_space(rng.choice(shapes), gname)
    objs = [gen.gen_object(X, inst) for _ in range(n_obj)]
    return gen, objs


def make_bilinear(ctx, rng, i):
    gen, (M, N, K) = _same_space(ctx, rng, i, 3)
    mor = gen.gen_controlled_morphism
    return {"phi": mor(M, N), "phi2": mor(M, N), "psi": mor(N, K), "psi2": mor(N, K)}


def check_bilinear(c):
    phi, phi2, psi, psi2 = c["phi"], c["phi2"], c["psi"], c["psi2"]
    ok = (mor_compose(psi, mor_add(phi, phi2)) == mor_add(mor_compose(psi, phi), mor_compose(psi, phi2))
          and mor_compose(mor_add(psi, psi2), phi) == mor_add(mor_compose(psi, phi), mor_compose(psi2, phi)))
    _expect("bilinearity", ok, "composition is not bilinear")


def make_witness(ctx, rng, i):
    gen, (M, N, K) = _same_space(ctx, rng, i, 3)
    return {"phi": gen.gen_controlled_morphism(M, N), "psi": gen.gen_controlled_morphism(N, K)}


def check_witness(c):
    phi, psi = c["phi"], c["psi"]
    _expect("witness_containment", witness_compose_contained(psi, phi, mor_compose(psi, phi)),
            "composite leaves the composed entourage")


def make_functoriality(ctx, rng, i):
    gen, (M, N) = _same_space(ctx, rng, i, 2)
    f = gen.gen_map(M.space)
    g = gen.gen_map(f.dst)
    return {"f": f, "g": g, "phi": gen.gen_controlled_morphism(M, N)}


def check_functoriality(c):
    f, g, phi = c["f"], c["g"], c["phi"]
    gf = compose_morphisms(g, f)
    M = phi.src
    _expect("pushforward_functoriality",
            pushforward_obj(gf, M) == pushforward_obj(g, pushforward_obj(f, M)),
            "(g o f)_* differs from g_* f_* on objects")
    _expect("pushforward_functoriality",
            pushforward_mor(gf, phi) == pushforward_mor(g, pushforward_mor(f, phi)),
            "(g o f)_* differs from g_* f_* on morphisms")
    _expect("pushforward_functoriality",
            pushforward_mor(f, mor_identity(M)) == mor_identity(pushforward_obj(f, M)),
            "pushforward does not preserve identities")


def make_cocycle(ctx, rng, i):
    gen, (M, N, K) = _same_space(ctx, rng, i, 3)
    Y = fixture_space(rng.choice(SMALL_SHAPES), M.space.group.name)
    return {"phi": gen.gen_controlled_morphism(M, N), "psi": gen.gen_controlled_morphism(N, K),
            "f": gen.gen_map(M.space), "L": gen.gen_object(Y, M.inst)}


def _revalidate_obj(M):
    check_object(_build_object(M.space, M.inst, dict(M.fibers), dict(M.rho)))


def _revalidate_mor(phi):
    _revalidate_obj(phi.src)
    _revalidate_obj(phi.dst)
    mor_check(phi.src, phi.dst, phi.entry_dict())


def check_cocycle(c):
    phi, psi, f, L = c["phi"], c["psi"], c["f"], c["L"]
    M, N = phi.src, phi.dst
    S, injs, projs = obj_biproduct(M, N)
    _revalidate_obj(S)
    for m in injs + projs:
        _revalidate_mor(m)
    _revalidate_obj(pushforward_obj(f, M))
    _revalidate_mor(pushforward_mor(f, phi))
    _revalidate_mor(mor_compose(psi, phi))
    _revalidate_mor(mor_add(phi, phi))
    GM, GL = GrothObject(M.space, M), GrothObject(L.space, L)
    _revalidate_obj(obj_tensor(GM, GL).obj)
    _revalidate_obj(unit_object(M.space.group, M.inst).obj)
    t = mor_tensor(GrothMorphism(GM, GrothObject(N.space, N), identity_morphism(M.space), phi),
                   groth_identity(GL))
    _revalidate_mor(t.phi)


# ---------------------------------------------------------------- oracle

def make_oracle_pair(ctx, rng, i):
    gen, (M, N, K) = _same_space(ctx, rng, i, 3, FINITE_SHAPES)
    return {"phi": gen.gen_controlled_morphism(M, N), "psi": gen.gen_controlled_morphism(N, K)}


def _oracle(fn):
    def run(*args):
        try:
            return fn(*args)
        except OracleMismatch as e:
            raise LawViolation("oracle", str(e)) from None
    return run


def check_oracle_composition(c):
    _oracle(check_composition)(c["phi"], c["psi"])


def make_oracle_pushforward(ctx, rng, i):
    gen, (M, N) = _same_space(ctx, rng, i, 2, FINITE_SHAPES)
    f = gen.gen_map(M.space, targets=list(FINITE_SHAPES) + ["pt"])
    return {"f": f, "phi": gen.gen_controlled_morphism(M, N)}


def check_oracle_pushforward(c):
    _oracle(check_pushforward)(c["f"], c["phi"])
    _oracle(check_pushforward_rho)(c["f"], c["phi"].src)


def make_oracle_tensor(ctx, rng, i):
    gen, (M, N) = _same_space(ctx, rng, i, 2, FINITE_SHAPES)
    Y = fixture_space("two2", M.space.group.name)
    K, L = gen.gen_object(Y, M.inst), gen.gen_object(Y, M.inst)
    return {"phi": gen.gen_controlled_morphism(M, N), "psi": gen.gen_controlled_morphism(K, L)}


def check_oracle_tensor(c):
    phi, psi = c["phi"], c["psi"]
    idX, idY = identity_morphism(phi.space), identity_morphism(psi.space)
    m = GrothMorphism(GrothObject(phi.space, phi.src), GrothObject(phi.space, phi.dst), idX, phi)
    n = GrothMorphism(GrothObject(psi.space, psi.src), GrothObject(psi.space, psi.dst), idY, psi)
    _oracle(check_tensor)(phi, psi, mor_tensor(m, n).phi)


def make_oracle_equivariance(ctx, rng, i):
    gen, (M, N) = _same_space(ctx, rng, i, 2, FINITE_SHAPES)
    entries = gen.gen_entries(M, N)
    if entries and rng.random() < 0.5:
        # perturb one entry; the result is usually not equivariant
        key = rng.choice(sorted(entries, key=repr))
        e = entries[key]
        entries[key] = M.inst.add(e, M.inst.random_mor(rng, M.fiber(key[1]), N.fiber(key[0])))
    return {"phi": _make(M, N, entries)}


def check_oracle_equivariance(c):
    phi = c["phi"]
    a, b = engine_equivariant(phi), functorial_equivariant(phi)
    _expect("oracle_equivariance", a == b, "pointwise and functorial equivariance verdicts differ",
            engine=a, oracle=b)


# ---------------------------------------------------------------- negative

def _planted_group(i):
    return ("Z2", "Z3")[i % 2]


def make_non_proper(ctx, rng, i):
    gname = GROUPS[i % len(GROUPS)]
    L1 = fixture_space(rng.choice(("zmetric", "zdiscrete")), gname)
    L2 = fixture_space(rng.choice(("zmetric", "zdiscrete")), gname)
    return {"term": ser.term_to_json(Proj1()), "src": ser.space_to_json(space_tensor(L1, L2)),
            "dst": ser.space_to_json(L1)}


def check_non_proper(c):
    morphism_check(ser.term_from_json(c["term"]), ser.space_from_json(c["src"]),
                   ser.space_from_json(c["dst"]))


class _Redraw(Exception):
    pass


def _redraw(make):
    """Retry a planted-case builder until its random draw is usable."""
    def run(ctx, rng, i):
        for _ in range(50):
            try:
                return make(ctx, rng, i)
            except _Redraw:
                continue
        raise CoarsemonError(f"{make.__name__}: no usable draw")
    run.__name__ = make.__name__
    return run


@_redraw
def make_off_entourage(ctx, rng, i):
    gname, inst = ctx.combo(i)
    gen = ctx.generator(rng)
    if rng.random() < 0.5:
        X = fixture_space("twoclass6", gname)
        x, xp = rng.choice((0, 1, 2)), rng.choice((3, 4, 5))
    else:
        X = fixture_space("zdiscrete", gname)
        x = rng.randint(-2, 2)
        xp = x + rng.choice((-2, -1, 1, 2))
    M = gen.gen_object(X, inst, support=sorted(orbit(X.action, x)))
    N = gen.gen_object(X, inst, support=sorted(orbit(X.action, xp), key=repr))
    e = _nonzero_mor(inst, rng, M.fiber(x), N.fiber(xp))
    return {"phi": _make(M, N, {(xp, x): e})}


def _nonzero_mor(inst, rng, A, B):
    for _ in range(10):
        e = inst.random_mor(rng, A, B)
        if not inst.is_zero(e):
            return e
    raise _Redraw()


def check_mor(c):
    phi = c["phi"]
    mor_check(phi.src, phi.dst, phi.entry_dict())


def make_broken_cocycle(ctx, rng, i):
    gname = _planted_group(i)
    G = get_group(gname)
    pool = [inst for inst in ctx.instance_pool(gname) if inst.ring.kind != "mod" or inst.ring.n > 2]
    inst = pool[(i // 2) % len(pool)]
    gen = ctx.generator(rng)
    X = fixture_space(rng.choice(("whole4", "twoclass6")), gname)
    M = gen.gen_object(X, inst, support=X.ambient.points)
    g = rng.choice([h for h in G if h != G.unit])
    x = rng.choice([p for p in X.ambient.points if X.action.apply(g, p) != p])
    rho = dict(M.rho)
    rho[(g, x)] = inst.neg(rho[(g, x)])
    return {"object": _build_object(X, inst, dict(M.fibers), rho)}


def check_broken_cocycle(c):
    _revalidate_obj(c["object"])


@_redraw
def make_non_equivariant(ctx, rng, i):
    gname = _planted_group(i)
    inst = ctx.instance_pool(gname)[(i // 2) % len(ctx.instance_pool(gname))]
    gen = ctx.generator(rng)
    X = fixture_space("whole4", gname)
    M = gen.gen_object(X, inst, support=X.ambient.points)
    N = gen.gen_object(X, inst, support=X.ambient.points)
    moved = [p for p in X.ambient.points if len(orbit(X.action, p)) > 1]
    x = rng.choice(moved)
    xp = rng.choice(X.ambient.points)
    e = _nonzero_mor(inst, rng, M.fiber(x), N.fiber(xp))
    return {"phi": _make(M, N, {(xp, x): e})}


def make_fake_sigma(ctx, rng, i):
    gname = GROUPS[i % len(GROUPS)]
    ring = ("Z", "Q", "Z/2", "Z/5")[(i // 3) % 4]
    return {"instance": FakeSigmaMatCat(parse_ring(ring), get_group(gname)),
            "rng_seed": rng.randrange(2 ** 31)}


def check_fake_sigma(c):
    check_instance_laws(c["instance"], random.Random(c["rng_seed"]), samples=20, max_rank=3)


def make_incompatible(ctx, rng, i):
    gname = GROUPS[i % len(GROUPS)]
    pts = sorted(rng.sample(range(-4, 5), rng.randint(1, 3)))
    return {"group": gname, "radius": rng.randint(1, 3),
            "basis": [pts] + ([[rng.randint(-9, 9)]] if rng.random() < 0.5 else [])}


def check_incompatible(c):
    G = get_group(c["group"])
    coeffs = {g: ((-1) ** g, 0) if len(G) == 2 else (1, 0) for g in G}
    amb = IntLine()
    act = action_check(G, amb, coeffs)
    basis = tuple(frozenset(S) for S in c["basis"])
    make_space(amb, act, (MetricBall(c["radius"]),), Bornology("basis", amb, (), basis))


# ---------------------------------------------------------------- strictness and instances

def make_strictness(ctx, rng, i):
    gname = ("Z2", "Z3")[i % 2]
    ring = ("Z", "Q", "Z/2", "Z/3")[(i // 2) % 4]
    inst = ShiftCat(get_group(gname), parse_ring(ring))
    return {"instance": inst, "rng_seed": rng.randrange(2 ** 31)}


def check_strictness_law(c):
    check_strictness(c["instance"], random.Random(c["rng_seed"]), samples=2, max_rank=3)


def make_instance_laws(ctx, rng, i):
    _, inst = ctx.combo(i)
    return {"instance": inst, "rng_seed": rng.randrange(2 ** 31)}


def check_instance_laws_law(c):
    check_instance_laws(c["instance"], random.Random(c["rng_seed"]), samples=2, max_rank=3)


# ---------------------------------------------------------------- registry

SUITES = {
    "coherence": [
        Law("pentagon", "pentagon relation for the associator", _make_objs(4, max_points=2), check_pentagon),
        Law("triangle", "triangle relation for associator and unitors", _make_objs(2), check_triangle),
        Law("inverse_relation", "symmetry is its own inverse", _make_objs(2), check_inverse_relation),
        Law("hexagon", "hexagon relation for associator and symmetry", _make_objs(3, max_points=2),
            check_hexagon),
        Law("naturality", "associator, unitor and symmetry are natural", make_naturality, check_naturality),
        Law("constraints_valid", "constraints are invertible controlled morphisms",
            _make_objs(3, max_points=2), check_constraints_valid),
    ],
    "fibration": [
        Law("strict_projection", "projection to spaces is strict monoidal", make_strict_projection,
            check_strict_projection),
        Law("exchange_iso", "exchange comparison is invertible", make_exchange, check_exchange),
        Law("biadditive", "tensor is additive in each variable", make_biadditive, check_biadditive),
        Law("cocartesian", "pushforward lift is cocartesian", make_cocartesian, check_cocartesian),
    ],
    "category": [
        Law("groth_associativity", "composition is associative", make_assoc, check_assoc),
        Law("groth_identity", "identities are neutral", make_identity_law, check_identity_law),
        Law("bilinearity", "composition is bilinear", make_bilinear, check_bilinear),
        Law("witness_containment", "composite supported in composed entourage", make_witness, check_witness),
        Law("pushforward_functoriality", "pushforward is functorial", make_functoriality, check_functoriality),
        Law("cocycle_preservation", "constructors output valid data", make_cocycle, check_cocycle),
    ],
    "oracle": [
        Law("oracle_composition", "engine composition equals functorial composition",
            make_oracle_pair, check_oracle_composition),
        Law("oracle_pushforward", "engine pushforward equals functorial pushforward",
            make_oracle_pushforward, check_oracle_pushforward),
        Law("oracle_tensor", "engine tensor equals functorial tensor", make_oracle_tensor, check_oracle_tensor),
        Law("oracle_equivariance", "pointwise equivariance equals functorial equivariance",
            make_oracle_equivariance, check_oracle_equivariance),
    ],
    "negative": [
        Law("non_proper_projection", "planted: projection of a product of lines is not proper",
            make_non_proper, check_non_proper, expect="NotProper"),
        Law("off_entourage_entry", "planted: entry outside every entourage",
            make_off_entourage, check_mor, expect="HullNotEntourage"),
        Law("broken_cocycle", "planted: one cocycle component negated",
            make_broken_cocycle, check_broken_cocycle, expect="CocycleViolation"),
        Law("non_equivariant_matrix", "planted: single entry without its orbit",
            make_non_equivariant, check_mor, expect="NotEquivariant"),
        Law("fake_sigma", "planted: identity used as symmetry",
            make_fake_sigma, check_fake_sigma, expect="LawViolation"),
        Law("incompatible_bornology", "planted: bornology not closed under thickening",
            make_incompatible, check_incompatible, expect="NotCompatible"),
    ],
    "strictness": [
        Law("strict_action", "group acts strictly with compatible unit and tensor data",
            make_strictness, check_strictness_law),
    ],
    "instance": [
        Law("instance_axioms", "additive symmetric monoidal axioms of the instance",
            make_instance_laws, check_instance_laws_law),
    ],
}

SUITE_NAMES = tuple(SUITES)


def get_law(suite, law):
    if suite not in SUITES:
        raise UnknownSuite(f"unknown suite {suite!r}", witness={"known": list(SUITE_NAMES)})
    for L in SUITES[suite]:
        if L.name == law:
            return L
    raise UnknownSuite(f"suite {suite!r} has no law {law!r}")


# ---------------------------------------------------------------- running

def run_case(law: Law, case: dict) -> tuple:
    """Run one case: ``("pass" | "fail" | "unknown", error code, message)``."""
    try:
        law.check(case)
    except SearchBoundExceeded as e:
        return "unknown", e.code, str(e)
    except CoarsemonError as e:
        if law.expect is not None:
            if e.code == law.expect:
                return "pass", e.code, str(e)
            return "fail", e.code, str(e)
        return "fail", e.code, str(e)
    if law.expect is not None:
        return "fail", None, f"planted violation not detected (expected {law.expect})"
    return "pass", None, ""


def encode_case(case: dict) -> dict:
    return {k: ser.value_to_json(v) for k, v in sorted(case.items())}


def decode_case(data: dict) -> dict:
    return {k: ser.value_from_json(v, check=False) for k, v in data.items()}


def counterexample(suite, law, ctx, index, case, status, code, message):
    return {"format_version": ser.FORMAT_VERSION, "kind": "counterexample",
            "suite": suite, "law": law.name, "anchor": law.anchor,
            "seed": ctx.seed, "index": index, "verdict": status,
            "error": {"code": code, "message": message},
            "case": encode_case(case)}


def run_law(suite, law: Law, ctx: Context) -> LawResult:
    res = LawResult(law.name, law.anchor)
    t0 = time.perf_counter()
    n = ctx.instances if law.budget is None else min(ctx.instances, law.budget)
    for i in range(n):
        rng = _rng(ctx.seed, suite, law.name, i)
        case = law.make(ctx, rng, i)
        status, code, message = run_case(law, case)
        res.instances += 1
        if status == "pass":
            res.passed += 1
            continue
        if status == "fail":
            res.failed += 1
        else:
            res.unknown += 1
        if res.counterexample is None:
            res.counterexample = counterexample(suite, law, ctx, i, case, status, code, message)
    res.wall_time = time.perf_counter() - t0
    return res


def _verdict(fail, unknown):
    if fail:
        return "fail"
    return "unknown" if unknown else "pass"


def run_suite(name: str, ctx: Optional[Context] = None, laws=None) -> dict:
    ctx = ctx or Context()
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}", witness={"known": list(SUITE_NAMES)})
    t0 = time.perf_counter()
    results = [run_law(name, L, ctx) for L in SUITES[name] if laws is None or L.name in laws]
    fail = sum(r.failed for r in results)
    unknown = sum(r.unknown for r in results)
    return {"suite": name, "verdict": _verdict(fail, unknown),
            "laws": [r.to_json() for r in results],
            "wall_time": round(time.perf_counter() - t0, 4)}


def build_report(names, ctx: Context, seed_source="default") -> dict:
    suites = [run_suite(n, ctx) for n in names]
    verdicts = {s["verdict"] for s in suites}
    overall = "fail" if "fail" in verdicts else ("unknown" if "unknown" in verdicts else "pass")
    return {"format_version": ser.FORMAT_VERSION, "kind": "report",
            "seed": ctx.seed, "seed_source": seed_source, "parameters": ctx.params(),
            "suites": suites, "verdict": overall}


def strip_timing(report):
    """Copy of a report (or any JSON value) with every ``wall_time`` field removed."""
    if isinstance(report, dict):
        return {k: strip_timing(v) for k, v in report.items() if k != "wall_time"}
    if isinstance(report, list):
        return [strip_timing(v) for v in report]
    return report


def replay(cex: dict) -> dict:
    """Re-run a serialized counterexample; reports whether the same outcome recurs."""
    law = get_law(cex["suite"], cex["law"])
    case = decode_case(cex["case"])
    status, code, message = run_case(law, case)
    want = cex.get("error", {}).get("code")
    return {"suite": cex["suite"], "law": law.name, "verdict": status, "code": code,
            "message": message, "reproduced": status == cex.get("verdict") and code == want}


def planted_case(law_name: str, seed: int = 0, index: int = 0, ctx: Optional[Context] = None) -> dict:
    """Serialized planted violation from the negative suite, in counterexample format."""
    ctx = ctx or Context(seed=seed)
    law = get_law("negative", law_name)
    case = law.make(ctx, _rng(ctx.seed, "negative", law.name, index), index)
    status, code, message = run_case(law, case)
    cex = counterexample("negative", law, ctx, index, case, status, code, message)
    return cex
