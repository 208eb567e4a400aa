"""Brute-force functorial oracle on finite spaces.

The matrix engine stores a controlled object pointwise.  The oracle instead
evaluates it on every subset ``B`` of the (finite) ambient set,
``M(B) = (+)_{x in B} M(x)`` in point order, and a morphism with witness
``U`` as the family ``phi_B: M(B) -> M'(U[B])``.  Composition, pushforward
and tensor products are then computed on these big maps and compared with
the engine's pointwise results.  Nothing here reuses the engine's atom or
sub-biproduct helpers; only the instance's chosen biproducts are shared.
"""

from __future__ import annotations

import itertools

from .coarse import ent_compose, ent_thicken
from .controlled import (ControlledMorphism, ControlledObject,
                         _check_equivariance, mor_compose,
                         pushforward_mor, pushforward_obj)
from .errors import NotEquivariant
from .groups import sort_points


def subsets(points):
    pts = sort_points(points)
    for r in range(len(pts) + 1):
        for c in itertools.combinations(pts, r):
            yield frozenset(c)


class _Eval:
    """``M(B)`` with its injections and projections, per subset."""

    def __init__(self, inst, fiber):
        self.inst = inst
        self.fiber = fiber          # point -> object (zero object off the support)
        self._cache = {}

    def __call__(self, B):
        B = frozenset(B)
        hit = self._cache.get(B)
        if hit is None:
            pts = sort_points(B)
            S, injs, projs = self.inst.biproduct([self.fiber(x) for x in pts])
            hit = (S, dict(zip(pts, injs)), dict(zip(pts, projs)))
            self._cache[B] = hit
        return hit


def functorial_morphism(inst, entry, src_eval, dst_eval, U, B):
    """``phi_B = sum inj_{x'} o phi_{x',x} o proj_x`` over ``x in B``, ``x' in U[B]``."""
    S, _, projs = src_eval(B)
    T, injs, _ = dst_eval(ent_thicken(U, B))
    out = inst.zero(S, T)
    for x in B:
        for xp in injs:
            e = entry(xp, x)
            if e is not None and not inst.is_zero(e):
                out = inst.add(out, inst.compose_all(injs[xp], e, projs[x]))
    return out


def _points(space):
    return list(space.ambient.enumerate())


def _evals(phi):
    inst = phi.inst
    return _Eval(inst, phi.src.fiber), _Eval(inst, phi.dst.fiber)


def check_composition(phi: ControlledMorphism, psi: ControlledMorphism) -> int:
    """``(psi o phi)_B == psi_{U[B]} o phi_B`` for every subset ``B``."""
    inst = phi.inst
    chi = mor_compose(psi, phi)
    U, V = phi.witness, psi.witness
    a, b = _evals(phi)
    c = _Eval(inst, psi.dst.fiber)
    W = ent_compose(V, U)
    checked = 0
    for B in subsets(_points(phi.space)):
        lhs = functorial_morphism(inst, _entry(chi), a, c, W, B)
        UB = ent_thicken(U, B)
        rhs = inst.compose(functorial_morphism(inst, _entry(psi), b, c, V, UB),
                           functorial_morphism(inst, _entry(phi), a, b, U, B))
        # V[U[B]] == (V o U)[B], so both sides land in the same object
        if lhs != rhs:
            return _fail("composition", B)
        checked += 1
    return checked


def _entry(phi):
    d = phi.entry_dict()
    return lambda xp, x: d.get((xp, x))


class OracleMismatch(AssertionError):
    pass


def _fail(what, B):
    raise OracleMismatch(f"{what}: engine and functorial oracle differ on B={sort_points(B)}")


def check_pushforward(f, phi: ControlledMorphism) -> int:
    """Compare ``f_* phi`` (and ``f_* M``, ``f_* rho``) with the functorial definition.

    The functorial value on ``C`` is ``phi_{f^-1 C}``; the engine's value lives on
    ``(+)_{y in C} (+)_{x in f^-1 y} M(x)``.  The two are related by the
    reordering isomorphism built from the instance's biproducts.
    """
    inst = phi.inst
    M, N = phi.src, phi.dst
    fM, fN = pushforward_obj(f, M), pushforward_obj(f, N)
    fphi = pushforward_mor(f, phi)
    X, Y = M.space, f.dst
    a, b = _evals(phi)
    Ufm = _image_entourage(f, phi.witness, X)
    ea, eb = _Eval(inst, fM.fiber), _Eval(inst, fN.fiber)
    checked = 0
    for C in subsets(_points(Y)):
        pre = frozenset(x for x in _points(X) if f(x) in C)
        # the engine fiber over y must be the point-ordered biproduct of M over f^-1(y)
        for y in C:
            fy = frozenset(x for x in pre if f(x) == y)
            if fM.fiber(y) != a(fy)[0]:
                _fail("pushforward object", C)
        R = _reorder(inst, f, a, ea, pre, C)
        UC = ent_thicken(Ufm, C)
        preU = frozenset(x for x in _points(X) if f(x) in UC)
        Rp = _reorder(inst, f, b, eb, preU, UC)
        functorial = functorial_morphism(inst, _entry(phi), a, b, phi.witness, pre)
        # widen the target of phi_{f^-1 C} from M'(U[f^-1 C]) to M'(f^-1 (f x f)(U)[C])
        widen = _inclusion(inst, b, ent_thicken(phi.witness, pre), preU)
        engine = functorial_morphism(inst, _entry(fphi), ea, eb, Ufm, C)
        if inst.compose(engine, R) != inst.compose_all(Rp, widen, functorial):
            _fail("pushforward morphism", C)
        checked += 1
    return checked


def check_pushforward_rho(f, M: ControlledObject) -> int:
    """``(f_* rho)(g)_y`` against ``rho(g)_{f^-1 y}`` through the reordering."""
    inst, G = M.inst, M.group
    fM = pushforward_obj(f, M)
    a, ea = _Eval(inst, M.fiber), _Eval(inst, fM.fiber)
    Y = f.dst
    checked = 0
    for y in fM.support():
        for g in G:
            ginv = G.inv(g)
            yy = Y.action.apply(ginv, y)
            B = frozenset(x for x in M.support() if f(x) == y)
            BB = frozenset(x for x in M.support() if f(x) == yy)
            rho_B = _rho_on(inst, M, g, a, B)
            R = _reorder(inst, f, a, ea, B, {y})
            RR = _reorder(inst, f, a, ea, BB, {yy})
            lhs = inst.compose(fM.rho_at(g, y), R)
            rhs = inst.compose(inst.act_mor(g, RR), rho_B)
            if lhs != rhs:
                _fail("pushforward rho", {y})
            checked += 1
    return checked


def _rho_on(inst, M, g, ev, B):
    """``rho(g)_B: M(B) -> g(M(g^-1 B))`` assembled from the point components."""
    G, act = M.group, M.space.action
    ginv = G.inv(g)
    S, _, projs = ev(B)
    Bg = frozenset(act.apply(ginv, x) for x in B)
    T, injs, _ = ev(Bg)
    out = inst.zero(S, inst.act_obj(g, T))
    for x in B:
        if x not in M._fib:
            continue
        xx = act.apply(ginv, x)
        out = inst.add(out, inst.compose_all(inst.act_mor(g, injs[xx]), M.rho_at(g, x), projs[x]))
    return out


def _inclusion(inst, ev, B, B2):
    S, _, projs = ev(B)
    T, injs, _ = ev(B2)
    out = inst.zero(S, T)
    for x in B:
        out = inst.add(out, inst.compose(injs[x], projs[x]))
    return out


def _reorder(inst, f, ev, ev_target, pre, C):
    """``M(f^-1 C) -> (+)_{y in C} (+)_{x in f^-1 y} M(x)``."""
    S, _, projs = ev(pre)
    T, yinj, _ = ev_target(C)
    out = inst.zero(S, T)
    for y in sort_points(C):
        fy = frozenset(x for x in pre if f(x) == y)
        _, xinj, _ = ev(fy)
        for x in fy:
            out = inst.add(out, inst.compose_all(yinj[y], xinj[x], projs[x]))
    return out


def _image_entourage(f, U, X):
    from .coarse import FinitePairs
    pts = _points(X)
    return FinitePairs(frozenset((f(a), f(b)) for a in pts for b in pts if U.contains((a, b))))


def check_tensor(phi: ControlledMorphism, psi: ControlledMorphism, tensor_phi: ControlledMorphism) -> int:
    """``(phi (x) psi)`` on rectangles ``B x B'`` against ``D' o (phi_B (x) psi_B') o D^-1``.

    ``D`` is the distributivity isomorphism
    ``(+)_{(x,x')} M(x)(x)N(x') -> M(B) (x) N(B')``.
    """
    inst = phi.inst
    a, b = _evals(phi)
    c, d = _evals(psi)
    e, h = _evals(tensor_phi)
    U, V = phi.witness, psi.witness
    from .coarse import ProductEnt
    W = ProductEnt(U, V)
    checked = 0
    for B in subsets(_points(phi.space)):
        for B2 in subsets(_points(psi.space)):
            rect = frozenset(itertools.product(B, B2))
            UB, VB = ent_thicken(U, B), ent_thicken(V, B2)
            D = _distrib(inst, a, c, e, B, B2)
            Dt = _distrib(inst, b, d, h, UB, VB)
            engine = functorial_morphism(inst, _entry(tensor_phi), e, h, W, rect)
            big = inst.tensor_mor(functorial_morphism(inst, _entry(phi), a, b, U, B),
                                  functorial_morphism(inst, _entry(psi), c, d, V, B2))
            if inst.compose(Dt, engine) != inst.compose(big, D):
                _fail("tensor", rect)
            checked += 1
    return checked


def _distrib(inst, ev1, ev2, ev12, B, B2):
    S, _, projs = ev12(frozenset(itertools.product(B, B2)))
    T1, inj1, _ = ev1(B)
    T2, inj2, _ = ev2(B2)
    out = inst.zero(S, inst.tensor_obj(T1, T2))
    for x in B:
        for y in B2:
            if (x, y) in projs:
                out = inst.add(out, inst.compose(inst.tensor_mor(inj1[x], inj2[y]), projs[(x, y)]))
    return out


def functorial_equivariant(phi: ControlledMorphism) -> bool:
    """``rho'(g)_{U[B]} o phi_B == g(phi_{g^-1 B}) o rho(g)_B`` for all ``g`` and ``B``.

    ``U`` must be invariant (it is the saturated hull).
    """
    inst, G = phi.inst, phi.src.group
    act = phi.space.action
    a, b = _evals(phi)
    U = phi.witness
    for B in subsets(_points(phi.space)):
        for g in G:
            ginv = G.inv(g)
            Bg = frozenset(act.apply(ginv, x) for x in B)
            lhs = inst.compose(_rho_on(inst, phi.dst, g, b, ent_thicken(U, B)),
                               functorial_morphism(inst, _entry(phi), a, b, U, B))
            rhs = inst.compose(inst.act_mor(g, functorial_morphism(inst, _entry(phi), a, b, U, Bg)),
                               _rho_on(inst, phi.src, g, a, B))
            if lhs != rhs:
                return False
    return True


def engine_equivariant(phi: ControlledMorphism) -> bool:
    try:
        _check_equivariance(phi)
        return True
    except NotEquivariant:
        return False
