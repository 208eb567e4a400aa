"""Equivariant controlled objects and morphisms in matrix form.

A controlled object stores, for each point ``x`` of its finite support, a
list of *atoms* ``(key, A)``; the fiber ``M(x)`` is the chosen biproduct of
the atom objects in key order.  Objects built directly on a space have one
atom per point (the key is the point).  Pushforward keeps atom keys and
re-buckets them by image point, so that ``(g o f)_* = g_* o f_*`` holds on the
nose.  Atom keys are unique across a whole object.

``rho[(g, x)]`` is the component ``M(x) -> g(M(g^-1 x))``.  The cocycle
condition reads ``rho(g g')_x = g(rho(g')_{g^-1 x}) o rho(g)_x`` and a
morphism ``phi`` with entries ``phi[(x', x)]: M(x) -> M'(x')`` is equivariant
when ``rho'(g)_{x'} o phi_{x',x} = g(phi_{g^-1 x', g^-1 x}) o rho(g)_x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .additive import AddInstance
from .coarse import (BornCoarseSpace, Diagonal, FinitePairs, coarse_member,
                     ent_compose, pairs_saturate)
from .errors import (CocycleViolation, HullNotEntourage, NotComposable,
                     NotEquivariant, NotInvertible, ShapeError, ShapeMismatch,
                     SupportNotInvariant)
from .groups import order_key, sort_points


# ---------------------------------------------------------------- atom helpers

_BIPROD_CACHE: dict = {}


def _biprod(inst, objs):
    key = (id(inst), tuple(objs))
    hit = _BIPROD_CACHE.get(key)
    if hit is None or hit[0] is not inst:
        if len(_BIPROD_CACHE) > 20000:
            _BIPROD_CACHE.clear()
        hit = (inst, inst.biproduct(list(objs)))
        _BIPROD_CACHE[key] = hit
    return hit[1]


def atoms_object(inst, atoms):
    return _biprod(inst, tuple(a for _, a in atoms))[0]


_SUB_CACHE: dict = {}


def _cached_sub(kind, build, inst, atoms, positions):
    objs = tuple(a for _, a in atoms)
    key = (kind, id(inst), objs, tuple(positions))
    hit = _SUB_CACHE.get(key)
    if hit is None or hit[0] is not inst:
        if len(_SUB_CACHE) > 20000:
            _SUB_CACHE.clear()
        hit = (inst, build(inst, atoms, positions))
        _SUB_CACHE[key] = hit
    return hit[1]


def sub_inj(inst, atoms, positions):
    """Inclusion of the sub-biproduct on ``positions`` into the biproduct of ``atoms``."""
    return _cached_sub("inj", _sub_inj, inst, atoms, positions)


def sub_proj(inst, atoms, positions):
    return _cached_sub("proj", _sub_proj, inst, atoms, positions)


def _sub_inj(inst, atoms, positions):
    objs = tuple(a for _, a in atoms)
    S, injs, _ = _biprod(inst, objs)
    sub = tuple(objs[p] for p in positions)
    T, _, sprojs = _biprod(inst, sub)
    out = inst.zero(T, S)
    for j, p in enumerate(positions):
        out = inst.add(out, inst.compose(injs[p], sprojs[j]))
    return out


def _sub_proj(inst, atoms, positions):
    objs = tuple(a for _, a in atoms)
    S, _, projs = _biprod(inst, objs)
    sub = tuple(objs[p] for p in positions)
    T, sinjs, _ = _biprod(inst, sub)
    out = inst.zero(S, T)
    for j, p in enumerate(positions):
        out = inst.add(out, inst.compose(sinjs[j], projs[p]))
    return out


def _positions(atoms, keys):
    keys = set(keys)
    return [k for k, (key, _) in enumerate(atoms) if key in keys]


def _sort_atoms(atoms):
    return tuple(sorted(atoms, key=lambda a: order_key(a[0])))


# ---------------------------------------------------------------- objects

@dataclass(frozen=True)
class ControlledObject:
    space: BornCoarseSpace
    inst: AddInstance = field(compare=False)
    fibers: tuple           # ((x, ((key, A), ...)), ...) sorted by point
    rho: tuple              # (((g, x), morphism), ...)

    def __post_init__(self):
        object.__setattr__(self, "_fib", dict(self.fibers))
        object.__setattr__(self, "_rho", dict(self.rho))
        object.__setattr__(self, "_obj", {x: atoms_object(self.inst, a) for x, a in self.fibers})

    def __eq__(self, other):
        return (isinstance(other, ControlledObject) and self.inst == other.inst
                and self.space == other.space and self.fibers == other.fibers and self.rho == other.rho)

    def __hash__(self):
        return hash((self.space, self.fibers))

    @property
    def group(self):
        return self.space.group

    def support(self):
        return [x for x, _ in self.fibers]

    def atoms(self, x):
        return self._fib.get(x, ())

    def fiber(self, x):
        """``M(x)``; the zero object off the support."""
        if x in self._obj:
            return self._obj[x]
        return self.inst.zero_object()

    def rho_at(self, g, x):
        return self._rho[(g, x)]

    def total_keys(self):
        return [k for _, a in self.fibers for k, _ in a]


def _build_object(space, inst, fibers: dict, rho: dict) -> ControlledObject:
    fib = tuple((x, _sort_atoms(fibers[x])) for x in sort_points(fibers))
    G = space.group
    rho_t = tuple(((g, x), rho[(g, x)]) for g in G for x, _ in fib)
    return ControlledObject(space, inst, fib, rho_t)


def obj_check(space: BornCoarseSpace, inst: AddInstance, table: dict, rho: dict) -> ControlledObject:
    """Validate a base object given as ``{x: A}`` and ``{(g, x): rho(g)_x}``."""
    if inst.group != space.group:
        raise ShapeMismatch("instance and space use different groups")
    fibers = {}
    for x, A in table.items():
        space.ambient.check_point(x)
        if not inst.is_object(A):
            raise ShapeMismatch(f"{A!r} is not an object of {inst}", witness=x)
        if A == inst.zero_object():
            continue
        fibers[x] = ((x, A),)
    return check_object(_build_object_partial(space, inst, fibers, rho))


def _build_object_partial(space, inst, fibers, rho):
    for g in space.group:
        for x in fibers:
            if (g, x) not in rho:
                gx = space.action.apply(space.group.inv(g), x)
                if gx not in fibers:
                    raise SupportNotInvariant(f"{x!r} is in the support but g^-1.x={gx!r} is not",
                                              witness={"g": g, "x": x})
                raise ShapeMismatch(f"rho({g!r}) missing at {x!r}", witness={"g": g, "x": x})
    return _build_object(space, inst, fibers, rho)


def check_object(M: ControlledObject) -> ControlledObject:
    """Support invariance, shapes, invertibility, identity and cocycle."""
    space, inst, G = M.space, M.inst, M.group
    supp = set(M.support())
    for x in M.support():
        for g in G:
            gx = space.action.apply(g, x)
            if gx not in supp:
                raise SupportNotInvariant(f"{g!r}.{x!r} = {gx!r} leaves the support",
                                          witness={"g": g, "x": x})
    for g in G:
        ginv = G.inv(g)
        for x in M.support():
            r = M.rho_at(g, x)
            want_dom = M.fiber(x)
            want_cod = inst.act_obj(g, M.fiber(space.action.apply(ginv, x)))
            if inst.dom(r) != want_dom or inst.cod(r) != want_cod:
                raise ShapeMismatch(f"rho({g!r})_{x!r} has the wrong shape", witness={"g": g, "x": x})
            if inst.inverse(r) is None:
                raise NotInvertible(f"rho({g!r})_{x!r} is not invertible", witness={"g": g, "x": x})
    for x in M.support():
        if M.rho_at(G.unit, x) != inst.identity(M.fiber(x)):
            raise CocycleViolation(f"rho(e)_{x!r} is not the identity",
                                   witness={"g": G.unit, "g2": G.unit, "x": x})
    for g in G:
        for g2 in G:
            gg2 = G.mul(g, g2)
            for x in M.support():
                y = space.action.apply(G.inv(g), x)
                rhs = inst.compose(inst.act_mor(g, M.rho_at(g2, y)), M.rho_at(g, x))
                if M.rho_at(gg2, x) != rhs:
                    raise CocycleViolation(f"cocycle fails for ({g!r},{g2!r}) at {x!r}",
                                           witness={"g": g, "g2": g2, "x": x})
    return M


def zero_object(space, inst) -> ControlledObject:
    return _build_object(space, inst, {}, {})


# ---------------------------------------------------------------- morphisms

@dataclass(frozen=True)
class ControlledMorphism:
    src: ControlledObject
    dst: ControlledObject
    entries: tuple          # (((x', x), phi), ...) nonzero only, sorted
    witness: Any = field(compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_ent", dict(self.entries))

    def __hash__(self):
        return hash(tuple(k for k, _ in self.entries))

    @property
    def inst(self):
        return self.src.inst

    @property
    def space(self):
        return self.src.space

    def entry(self, xp, x):
        """``phi_{x', x}``, zero when not stored."""
        e = self._ent.get((xp, x))
        if e is None:
            return self.inst.zero(self.src.fiber(x), self.dst.fiber(xp))
        return e

    def hull(self):
        return [k for k, _ in self.entries]

    def entry_dict(self):
        return dict(self._ent)


def _sorted_entries(inst, entries):
    keep = [(k, v) for k, v in entries.items() if not inst.is_zero(v)]
    return tuple(sorted(keep, key=lambda kv: order_key(kv[0])))


def _hull_witness(space, keys):
    if not keys:
        return Diagonal()
    return FinitePairs(pairs_saturate(space.action, keys))


def _make(src, dst, entries: dict) -> ControlledMorphism:
    ent = _sorted_entries(src.inst, entries)
    return ControlledMorphism(src, dst, ent, _hull_witness(src.space, [k for k, _ in ent]))


def mor_check(src: ControlledObject, dst: ControlledObject, entries: dict) -> ControlledMorphism:
    """Validate ``entries = {(x', x): phi_{x', x}}`` as a morphism ``src -> dst``."""
    if src.space != dst.space or src.inst != dst.inst:
        raise ShapeMismatch("source and target live on different spaces or instances")
    inst, space = src.inst, src.space
    ssupp, dsupp = set(src.support()), set(dst.support())
    for (xp, x), phi in entries.items():
        if inst.is_zero(phi) and inst.dom(phi) == src.fiber(x) and inst.cod(phi) == dst.fiber(xp):
            continue
        if x not in ssupp or xp not in dsupp:
            raise ShapeMismatch(f"entry at {(xp, x)!r} is off the supports", witness=[xp, x])
        if inst.dom(phi) != src.fiber(x) or inst.cod(phi) != dst.fiber(xp):
            raise ShapeMismatch(f"entry at {(xp, x)!r} has the wrong shape", witness=[xp, x])
    phi = _make(src, dst, entries)
    keys = phi.hull()
    if keys:
        sat = pairs_saturate(space.action, keys)
        if not coarse_member(space.coarse, sat):
            bad = next(p for p in sort_points(sat) if space.coarse.pair_index(p) is None)
            raise HullNotEntourage(f"pair {bad!r} lies in no entourage", witness=list(bad))
    _check_equivariance(phi)
    return phi


def _check_equivariance(phi: ControlledMorphism):
    src, dst = phi.src, phi.dst
    inst, space, G = src.inst, src.space, src.group
    keys = phi.hull()
    for g in G:
        ginv = G.inv(g)
        cand = set(keys) | {(space.action.apply(g, a), space.action.apply(g, b)) for a, b in keys}
        for xp, x in sort_points(cand):
            lhs = inst.compose(dst.rho_at(g, xp), phi.entry(xp, x))
            rhs = inst.compose(inst.act_mor(g, phi.entry(space.action.apply(ginv, xp),
                                                         space.action.apply(ginv, x))),
                               src.rho_at(g, x))
            if lhs != rhs:
                raise NotEquivariant(f"equivariance fails for g={g!r} at {(xp, x)!r}",
                                     witness={"g": g, "pair": [xp, x]})


def mor_identity(M: ControlledObject) -> ControlledMorphism:
    return _make(M, M, {(x, x): M.inst.identity(M.fiber(x)) for x in M.support()})


def mor_zero(M, N) -> ControlledMorphism:
    return _make(M, N, {})


def mor_compose(psi: ControlledMorphism, phi: ControlledMorphism) -> ControlledMorphism:
    """``psi o phi``."""
    if phi.dst != psi.src:
        raise NotComposable("target of the first morphism is not the source of the second")
    inst = phi.inst
    by_mid = {}
    for (x2, x1), e in psi.entries:
        by_mid.setdefault(x1, []).append((x2, e))
    out = {}
    for (x1, x), e in phi.entries:
        for x2, f in by_mid.get(x1, ()):
            term = inst.compose(f, e)
            out[(x2, x)] = inst.add(out[(x2, x)], term) if (x2, x) in out else term
    return _make(phi.src, psi.dst, out)


def mor_add(phi: ControlledMorphism, psi: ControlledMorphism) -> ControlledMorphism:
    if phi.src != psi.src or phi.dst != psi.dst:
        raise ShapeMismatch("cannot add morphisms with different source or target")
    inst = phi.inst
    out = dict(phi.entries)
    for k, e in psi.entries:
        out[k] = inst.add(out[k], e) if k in out else e
    return _make(phi.src, phi.dst, out)


def mor_negate(phi: ControlledMorphism) -> ControlledMorphism:
    return _make(phi.src, phi.dst, {k: phi.inst.neg(e) for k, e in phi.entries})


def mor_witness_contained(phi: ControlledMorphism, U) -> bool:
    return all(U.contains(p) for p in phi.witness.pairs) if isinstance(phi.witness, FinitePairs) else True


# ---------------------------------------------------------------- biproducts

def obj_biproduct(M: ControlledObject, N: ControlledObject):
    """``(M + N, [inj_M, inj_N], [proj_M, proj_N])``; atom keys are tagged 0 / 1."""
    if M.space != N.space or M.inst != N.inst:
        raise ShapeMismatch("biproduct of objects on different spaces")
    inst, G, act = M.inst, M.group, M.space.action
    fibers = {}
    for tag, P in ((0, M), (1, N)):
        for x in P.support():
            fibers.setdefault(x, []).extend(((tag, k), A) for k, A in P.atoms(x))
    fibers = {x: _sort_atoms(a) for x, a in fibers.items()}
    rho = {}
    for g in G:
        for x, atoms in fibers.items():
            y = act.apply(G.inv(g), x)
            total = None
            for tag, P in ((0, M), (1, N)):
                if x not in P._fib:
                    continue
                pos_x = [k for k, (key, _) in enumerate(atoms) if key[0] == tag]
                pos_y = [k for k, (key, _) in enumerate(fibers[y]) if key[0] == tag]
                term = inst.compose_all(inst.act_mor(g, sub_inj(inst, fibers[y], pos_y)),
                                        P.rho_at(g, x), sub_proj(inst, atoms, pos_x))
                total = term if total is None else inst.add(total, term)
            rho[(g, x)] = total
    S = _build_object(M.space, inst, fibers, rho)
    injs, projs = [], []
    for tag, P in ((0, M), (1, N)):
        ient, pent = {}, {}
        for x in P.support():
            pos = [k for k, (key, _) in enumerate(S.atoms(x)) if key[0] == tag]
            ient[(x, x)] = sub_inj(inst, S.atoms(x), pos)
            pent[(x, x)] = sub_proj(inst, S.atoms(x), pos)
        injs.append(_make(P, S, ient))
        projs.append(_make(S, P, pent))
    return S, injs, projs


# ---------------------------------------------------------------- isomorphisms

def mor_is_iso(phi: ControlledMorphism):
    """``(True, inverse)`` if ``phi`` is invertible in the controlled category, else ``(False, None)``."""
    inst = phi.inst
    src, dst = phi.src, phi.dst
    # connected components of the bipartite support graph
    parent = {}

    def find(v):
        while parent.setdefault(v, v) != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for x in src.support():
        find(("s", x))
    for x in dst.support():
        find(("d", x))
    for (xp, x), _ in phi.entries:
        a, b = find(("d", xp)), find(("s", x))
        if a != b:
            parent[a] = b
    comps = {}
    for v in list(parent):
        comps.setdefault(find(v), []).append(v)
    inv_entries = {}
    for members in comps.values():
        xs = sort_points([x for t, x in members if t == "s"])
        ys = sort_points([x for t, x in members if t == "d"])
        srcs = [src.fiber(x) for x in xs]
        dsts = [dst.fiber(y) for y in ys]
        S, s_injs, s_projs = inst.biproduct(srcs)
        T, t_injs, t_projs = inst.biproduct(dsts)
        big = inst.zero(S, T)
        for k, y in enumerate(ys):
            for i, x in enumerate(xs):
                e = phi._ent.get((y, x))
                if e is not None:
                    big = inst.add(big, inst.compose_all(t_injs[k], e, s_projs[i]))
        binv = inst.inverse(big)
        if binv is None:
            return False, None
        for i, x in enumerate(xs):
            for k, y in enumerate(ys):
                inv_entries[(x, y)] = inst.compose_all(s_projs[i], binv, t_injs[k])
    try:
        inv = mor_check(dst, src, inv_entries)
    except (HullNotEntourage, NotEquivariant):
        return False, None
    if mor_compose(inv, phi) != mor_identity(src) or mor_compose(phi, inv) != mor_identity(dst):
        return False, None
    return True, inv


# ---------------------------------------------------------------- pushforward

def pushforward_obj(f, M: ControlledObject) -> ControlledObject:
    """``f_* M``: the fiber over ``y`` is the biproduct of all atoms over ``f^-1(y)``."""
    if f.src != M.space:
        raise ShapeError("pushforward along a map with a different source")
    inst, G = M.inst, M.group
    src_act, dst_act = M.space.action, f.dst.action
    image = {x: f(x) for x in M.support()}
    fibers = {}
    for x in M.support():
        fibers.setdefault(image[x], []).extend(M.atoms(x))
    fibers = {y: _sort_atoms(a) for y, a in fibers.items()}
    pre = {}
    for x in M.support():
        pre.setdefault(image[x], []).append(x)
    rho = {}
    for g in G:
        ginv = G.inv(g)
        for y, atoms in fibers.items():
            yy = dst_act.apply(ginv, y)
            if len(pre[y]) == 1 and len(pre[yy]) == 1:
                # a lone preimage keeps its atoms, so rho is carried over unchanged
                rho[(g, y)] = M.rho_at(g, pre[y][0])
                continue
            total = None
            for x in pre[y]:
                xx = src_act.apply(ginv, x)
                pos_x = _positions(atoms, [k for k, _ in M.atoms(x)])
                pos_xx = _positions(fibers[yy], [k for k, _ in M.atoms(xx)])
                term = inst.compose_all(inst.act_mor(g, sub_inj(inst, fibers[yy], pos_xx)),
                                        M.rho_at(g, x), sub_proj(inst, atoms, pos_x))
                total = term if total is None else inst.add(total, term)
            rho[(g, y)] = total
    return _build_object(f.dst, inst, fibers, rho)


def pushforward_mor(f, phi: ControlledMorphism, src=None, dst=None) -> ControlledMorphism:
    """``f_* phi: f_* M -> f_* M'``."""
    inst = phi.inst
    src = src or pushforward_obj(f, phi.src)
    dst = dst or pushforward_obj(f, phi.dst)
    out = {}
    for (xp, x), e in phi.entries:
        y, yp = f(x), f(xp)
        if src.atoms(y) == phi.src.atoms(x) and dst.atoms(yp) == phi.dst.atoms(xp):
            out[(yp, y)] = inst.add(out[(yp, y)], e) if (yp, y) in out else e
            continue
        pos = _positions(src.atoms(y), [k for k, _ in phi.src.atoms(x)])
        posp = _positions(dst.atoms(yp), [k for k, _ in phi.dst.atoms(xp)])
        term = inst.compose_all(sub_inj(inst, dst.atoms(yp), posp), e, sub_proj(inst, src.atoms(y), pos))
        out[(yp, y)] = inst.add(out[(yp, y)], term) if (yp, y) in out else term
    return _make(src, dst, out)


def witness_compose_contained(psi, phi, composite) -> bool:
    """Is the composite's witness inside ``witness(psi) o witness(phi)``?"""
    U = ent_compose(psi.witness, phi.witness)
    return all(U.contains(p) for p in composite.hull())
