"""Seeded random generators for spaces, objects, morphisms and maps.

Everything is driven by a single :class:`random.Random`, so identical seeds
and parameters reproduce identical instance streams.  Generated data is
always run through the validators before it is returned.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .additive import MatCat, ShiftCat
from .coarse import (discrete_line, finite_space, metric_line, point_space,
                     space_factors, space_tensor)
from .controlled import mor_check, obj_check
from .errors import CoarsemonError, ShapeError
from .groups import (FiniteSet, IntLine, PairSet, action_check, cyclic_group,
                     orbit, orbit_representatives, sort_points, stabilizer)
from .groth import GrothObject, groth_from_entries, pushforward_obj
from .maps import (Affine, Const, PairMap, Proj1, Proj2, Table,
                   identity_morphism, morphism_check)
from .rings import INTEGERS, RATIONALS, integers_mod, parse_ring

GROUPS = ("trivial", "Z2", "Z3")
FINITE_SPACES = ("whole4", "twoclass6", "two2")
LINE_SPACES = ("zmetric", "zdiscrete")
BASE_SPACES = FINITE_SPACES + LINE_SPACES


_ORDERS = {"trivial": 1, "Z1": 1, "Z2": 2, "Z3": 3}


def group_by_name(name):
    n = _ORDERS.get(name)
    return cyclic_group(n) if n else None


_GROUP_CACHE = {}
_SPACE_CACHE = {}


def get_group(name):
    if name not in _GROUP_CACHE:
        g = group_by_name(name)
        if g is None:
            raise ShapeError(f"unknown group {name!r}")
        _GROUP_CACHE[name] = g
    return _GROUP_CACHE[name]


def _finite_action(G, points, cycles_by_order):
    """Action of a cyclic group whose generator permutes ``points`` by ``cycles``."""
    n = len(G)
    cycles = cycles_by_order.get(n, [])
    step = {p: p for p in points}
    for cyc in cycles:
        for i, p in enumerate(cyc):
            step[p] = cyc[(i + 1) % len(cyc)]
    table = {}
    for k in G:
        m = {p: p for p in points}
        for _ in range(k):
            m = {p: step[m[p]] for p in points}
        table[k] = m
    return action_check(G, FiniteSet(tuple(points)), table)


def fixture_space(name: str, group_name: str):
    """Named fixture spaces; tensors are written ``"a*b"``."""
    key = (name, group_name)
    if key in _SPACE_CACHE:
        return _SPACE_CACHE[key]
    G = get_group(group_name)
    if "*" in name:
        left, right = name.split("*", 1)
        sp = space_tensor(fixture_space(left, group_name), fixture_space(right, group_name), name=name)
    elif name == "pt":
        sp = point_space(G)
    elif name == "whole4":
        act = _finite_action(G, ["a", "b", "c", "d"], {2: [["a", "b"], ["c", "d"]], 3: [["a", "b", "c"]]})
        sp = finite_space(None, act, name="whole4")
    elif name == "twoclass6":
        act = _finite_action(G, [0, 1, 2, 3, 4, 5], {2: [[0, 3], [1, 4], [2, 5]], 3: [[0, 1, 2], [3, 4, 5]]})
        sp = finite_space(None, act, classes=[{0, 1, 2}, {3, 4, 5}], name="twoclass6")
    elif name == "two2":
        act = _finite_action(G, ["p", "q"], {2: [["p", "q"]]})
        sp = finite_space(None, act, name="two2")
    elif name in ("zmetric", "zdiscrete", "zmetric_all"):
        coeffs = {g: ((-1) ** g, 0) if len(G) == 2 else (1, 0) for g in G}
        act = action_check(G, IntLine(), coeffs)
        if name == "zdiscrete":
            sp = discrete_line(act, "finite", name=name)
        else:
            sp = metric_line(act, "all" if name == "zmetric_all" else "finite", name=name)
    else:
        raise ShapeError(f"unknown fixture space {name!r}")
    _SPACE_CACHE[key] = sp
    return sp


def space_name(X):
    return X.name


def instances_for(group_name: str):
    G = get_group(group_name)
    out = [MatCat(integers_mod(2), G), MatCat(INTEGERS, G), MatCat(RATIONALS, G)]
    out.append(ShiftCat(G, INTEGERS))
    return out


def instance_by_spec(spec: dict, group_name: str):
    from .additive import FakeSigmaMatCat
    G = get_group(group_name)
    kind = spec.get("instance", "mat")
    ring = spec.get("ring", {"kind": "int"})
    from .rings import Ring
    ring = parse_ring(ring) if isinstance(ring, str) else Ring.from_json(ring)
    if kind == "mat":
        return MatCat(ring, G)
    if kind == "fake_sigma":
        return FakeSigmaMatCat(ring, G)
    if kind == "shift":
        if spec.get("group", group_name) != G.name and not (G.name == "trivial" and spec.get("group") == "trivial"):
            raise ShapeError("shift instance group must match the space group")
        return ShiftCat(G, ring)
    raise ShapeError(f"unknown instance kind {kind!r}")


# ---------------------------------------------------------------- generator

@dataclass
class Generator:
    seed: int = 0
    max_points: int = 3
    max_rank: int = 2
    max_radius: int = 2
    rng: random.Random = field(default=None, repr=False)

    def __post_init__(self):
        if self.rng is None:
            self.rng = random.Random(self.seed)

    # -- points
    def point_pool(self, ambient, size=4):
        if isinstance(ambient, FiniteSet):
            return list(ambient.points)
        if isinstance(ambient, IntLine):
            return list(range(-size // 2 - 1, size // 2 + 2))
        left = self.point_pool(ambient.left, size)
        right = self.point_pool(ambient.right, size)
        return [(a, b) for a in left for b in right]

    def support(self, space, max_points=None):
        """A random nonempty invariant set of at most ``max_points`` points (whole orbits)."""
        rng = self.rng
        max_points = max_points or self.max_points
        pool = self.point_pool(space.ambient)
        rng.shuffle(pool)
        supp = set()
        target = rng.randint(1, max_points)
        for p in pool:
            orb = orbit(space.action, p)
            if orb <= supp:
                continue
            if supp and len(supp | orb) > max_points:
                continue
            supp |= orb
            if len(supp) >= target:
                break
        return sort_points(supp)

    # -- objects
    def gen_object(self, space, inst, max_points=None, max_rank=None, support=None):
        rng = self.rng
        G = space.group
        act = space.action
        max_rank = max_rank or self.max_rank
        supp = support if support is not None else self.support(space, max_points)
        table, rho0 = {}, {}
        for x in orbit_representatives(act, supp):
            H = stabilizer(act, x)
            A = inst.random_object(rng, max_rank, fixed_by=H)
            sign = {h: 1 for h in H}
            if len(H) == 2 and isinstance(inst, MatCat) and rng.random() < 0.5:
                sign = {h: (1 if h == G.unit else -1) for h in H}
            reps = {}
            for g in G:
                reps.setdefault(act.apply(g, x), g)
            for z, gz in reps.items():
                table[z] = inst.act_obj(gz, A)
            for g in G:
                ginv = G.inv(g)
                for z, gz in reps.items():
                    y = act.apply(ginv, z)
                    h = G.mul(G.inv(gz), G.mul(g, reps[y]))
                    r = inst.identity(A) if sign[h] == 1 else inst.neg(inst.identity(A))
                    rho0[(g, z)] = inst.act_mor(gz, r)
        twist = {z: inst.random_auto(rng, A) for z, A in table.items()}
        rho = {}
        for (g, z), r in rho0.items():
            y = act.apply(G.inv(g), z)
            tinv = inst.inverse(inst.act_mor(g, twist[y]))
            rho[(g, z)] = inst.compose_all(tinv, r, twist[z])
        return obj_check(space, inst, table, rho)

    def gen_groth_object(self, space, inst, **kw):
        return GrothObject(space, self.gen_object(space, inst, **kw))

    # -- morphisms
    def gen_entries(self, src, dst, radius=None, density=0.6):
        """Random equivariant entries ``src -> dst`` supported in a sampled entourage."""
        rng = self.rng
        inst, space, G = src.inst, src.space, src.group
        act = space.action
        radius = self.max_radius if radius is None else radius
        r = rng.randint(0, radius)
        cands = []
        for xp in dst.support():
            for x in src.support():
                k = space.coarse.pair_index((xp, x))
                if k is not None and k <= r:
                    cands.append((xp, x))
        seen, reps = set(), []
        for p in cands:
            if p in seen:
                continue
            reps.append(p)
            seen |= {(act.apply(g, p[0]), act.apply(g, p[1])) for g in G}
        entries = {}
        for xp, x in reps:
            if rng.random() > density:
                continue
            psi = inst.random_mor(rng, src.fiber(x), dst.fiber(xp))
            K = [k for k in G if act.apply(k, x) == x and act.apply(k, xp) == xp]
            phi = None
            for k in K:
                term = inst.compose_all(inst.inverse(dst.rho_at(k, xp)), inst.act_mor(k, psi), src.rho_at(k, x))
                phi = term if phi is None else inst.add(phi, term)
            for g in G:
                gx, gxp = act.apply(g, x), act.apply(g, xp)
                if (gxp, gx) in entries:
                    continue
                entries[(gxp, gx)] = inst.compose_all(inst.inverse(dst.rho_at(g, gxp)),
                                                      inst.act_mor(g, phi), src.rho_at(g, gx))
        return entries

    def gen_controlled_morphism(self, src, dst, radius=None, density=0.6):
        return mor_check(src, dst, self.gen_entries(src, dst, radius, density))

    def gen_groth_morphism(self, P, f, Q, radius=None, density=0.6):
        """Random ``(f, phi): P -> Q`` with ``phi: f_* P -> Q``."""
        pushed = pushforward_obj(f, P.obj)
        phi = mor_check(pushed, Q.obj, self.gen_entries(pushed, Q.obj, radius, density))
        return groth_from_entries(P, Q, f, phi.entry_dict(), check=False)

    # -- space maps
    def gen_map(self, X, targets=None, tries=12):
        """A random certified map out of ``X`` (falls back to the identity)."""
        for _ in range(tries):
            try:
                term, Y = self._map_term(X, targets)
                return morphism_check(term, X, Y)
            except CoarsemonError:
                continue
        return identity_morphism(X)

    def _map_term(self, X, targets=None):
        rng = self.rng
        G = X.group
        amb = X.ambient
        gname = G.name
        if isinstance(amb, PairSet):
            choice = rng.random()
            lx, rx = space_factors(X)
            if choice < 0.15 and rx.born.bounds_everything():
                return Proj1(), lx
            if choice < 0.3 and lx.born.bounds_everything():
                return Proj2(), rx
            t1, Y1 = self._map_term(lx)
            t2, Y2 = self._map_term(rx)
            return PairMap(t1, t2), space_tensor(Y1, Y2)
        if isinstance(amb, IntLine):
            a = rng.choice([1, -1, 2, -2, 3])
            b = 0 if len(G) == 2 else rng.randint(-2, 2)
            Y = X if rng.random() < 0.6 else fixture_space("zmetric", gname)
            return Affine(a, b), Y
        # finite source: random equivariant table into a finite target
        names = targets or ["pt", "two2", "whole4", "twoclass6", X.name]
        Y = fixture_space(rng.choice(names), gname) if names else X
        if not isinstance(Y.ambient, FiniteSet):
            Y = X
        if len(Y.ambient.points) == 1:
            return Const(Y.ambient.points[0]), Y
        mapping = {}
        for x in orbit_representatives(X.action, amb.points):
            Hx = set(stabilizer(X.action, x))
            opts = [y for y in Y.ambient.points if Hx <= set(stabilizer(Y.action, y))]
            if not opts:
                raise ShapeError("no target point with a large enough stabilizer")
            y = rng.choice(opts)
            for g in G:
                mapping[X.action.apply(g, x)] = Y.action.apply(g, y)
        return Table.from_dict(mapping), Y
