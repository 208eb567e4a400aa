"""The total category of pairs ``(X, M)`` and its symmetric monoidal structure.

A morphism ``(X, M) -> (X', M')`` is a pair ``(f, phi)`` of a space morphism
``f: X -> X'`` and a controlled morphism ``phi: f_* M -> M'`` on ``X'``.
Composition is ``(f', phi') o (f, phi) = (f' o f, phi' o f'_*(phi))``.

For tensor products it is convenient to describe ``phi`` by its *f-entries*
``phi^f_{x1, x0} = phi_{x1, f(x0)} o inj_{x0}: M(x0) -> M'(x1)`` indexed by
source and target points.
"""

from __future__ import annotations

from dataclasses import dataclass

from .additive import AddInstance
from .coarse import BornCoarseSpace, point_space, space_tensor
from .controlled import (ControlledMorphism, ControlledObject, _build_object,
                         _make, _positions, check_object, mor_check,
                         mor_compose, mor_identity, mor_is_iso, obj_biproduct,
                         pushforward_mor, pushforward_obj, sub_inj, sub_proj)
from .errors import NoFactorization, NotComposable, ShapeMismatch
from .maps import (SpaceMorphism, assoc_morphism, compose_morphisms,
                   identity_morphism, symmetry_morphism, tensor_morphisms,
                   unitor_morphism)


@dataclass(frozen=True)
class GrothObject:
    space: BornCoarseSpace
    obj: ControlledObject

    def __post_init__(self):
        if self.obj.space != self.space:
            raise ShapeMismatch("object lives on a different space")

    @property
    def inst(self):
        return self.obj.inst


def groth_object(M: ControlledObject) -> GrothObject:
    return GrothObject(M.space, M)


@dataclass(frozen=True)
class GrothMorphism:
    src: GrothObject
    dst: GrothObject
    f: SpaceMorphism
    phi: ControlledMorphism


def groth_morphism(src: GrothObject, dst: GrothObject, f: SpaceMorphism, phi: ControlledMorphism,
                   check=True) -> GrothMorphism:
    if f.src != src.space or f.dst != dst.space:
        raise ShapeMismatch("underlying map does not connect the two spaces")
    if check:
        pushed = pushforward_obj(f, src.obj)
        if phi.src != pushed or phi.dst != dst.obj:
            raise ShapeMismatch("phi must go from f_* of the source object to the target object")
        phi = mor_check(phi.src, phi.dst, phi.entry_dict())
    return GrothMorphism(src, dst, f, phi)


def groth_from_entries(src: GrothObject, dst: GrothObject, f: SpaceMorphism, entries: dict,
                       check=True) -> GrothMorphism:
    pushed = pushforward_obj(f, src.obj)
    phi = mor_check(pushed, dst.obj, entries) if check else _make(pushed, dst.obj, entries)
    return GrothMorphism(src, dst, f, phi)


def groth_identity(P: GrothObject) -> GrothMorphism:
    return GrothMorphism(P, P, identity_morphism(P.space), mor_identity(P.obj))


def groth_compose(m2: GrothMorphism, m1: GrothMorphism) -> GrothMorphism:
    """``m2 o m1``."""
    if m1.dst != m2.src:
        raise NotComposable("target of the first morphism is not the source of the second")
    f = compose_morphisms(m2.f, m1.f)
    phi = mor_compose(m2.phi, pushforward_mor(m2.f, m1.phi))
    return GrothMorphism(m1.src, m2.dst, f, phi)


def groth_compose_all(*ms):
    out = ms[-1]
    for m in reversed(ms[:-1]):
        out = groth_compose(m, out)
    return out


def f_entries(m: GrothMorphism) -> dict:
    """``{(x1, x0): phi^f_{x1, x0}}``, nonzero only."""
    inst = m.src.inst
    P = m.src.obj
    pushed = m.phi.src
    inj = {}
    for x0 in P.support():
        y = m.f(x0)
        inj[x0] = (y, sub_inj(inst, pushed.atoms(y), _positions(pushed.atoms(y), [k for k, _ in P.atoms(x0)])))
    out = {}
    by_y = {}
    for x0, (y, _) in inj.items():
        by_y.setdefault(y, []).append(x0)
    for (x1, y), e in m.phi.entries:
        for x0 in by_y.get(y, ()):
            v = inst.compose(e, inj[x0][1])
            if not inst.is_zero(v):
                out[(x1, x0)] = v
    return out


# ---------------------------------------------------------------- unit and tensor

def unit_object(group, inst: AddInstance) -> GrothObject:
    pt = point_space(group)
    one = inst.unit()
    rho = {(g, "*"): inst.epsilon(g) for g in group}
    M = check_object(_build_object(pt, inst, {"*": (("*", one),)}, rho))
    return GrothObject(pt, M)


def obj_tensor(P: GrothObject, Q: GrothObject) -> GrothObject:
    inst = P.inst
    if Q.inst != inst:
        raise ShapeMismatch("tensor of objects over different instances")
    X = space_tensor(P.space, Q.space)
    G = X.group
    zero = inst.zero_object()
    fibers = {}
    for x in P.obj.support():
        for xx in Q.obj.support():
            A = inst.tensor_obj(P.obj.fiber(x), Q.obj.fiber(xx))
            if A != zero:
                fibers[(x, xx)] = (((x, xx), A),)
    rho = {}
    for g in G:
        ginv = G.inv(g)
        for (x, xx) in fibers:
            y, yy = P.space.action.apply(ginv, x), Q.space.action.apply(ginv, xx)
            rho[(g, (x, xx))] = inst.compose(
                inst.mu(g, P.obj.fiber(y), Q.obj.fiber(yy)),
                inst.tensor_mor(P.obj.rho_at(g, x), Q.obj.rho_at(g, xx)))
    return GrothObject(X, _build_object(X, inst, fibers, rho))


def mor_tensor(m: GrothMorphism, n: GrothMorphism) -> GrothMorphism:
    """``m (x) n`` assembled from the tensor products of f-entries."""
    inst = m.src.inst
    src, dst = obj_tensor(m.src, n.src), obj_tensor(m.dst, n.dst)
    f = tensor_morphisms(m.f, n.f)
    pushed = pushforward_obj(f, src.obj)
    fm, fn = f_entries(m), f_entries(n)
    out = {}
    for (x1, x0), a in fm.items():
        for (y1, y0), b in fn.items():
            if (x0, y0) not in src.obj._fib or (x1, y1) not in dst.obj._fib:
                continue
            tgt = (m.f(x0), n.f(y0))
            pos = _positions(pushed.atoms(tgt), [(x0, y0)])
            term = inst.compose(inst.tensor_mor(a, b), sub_proj(inst, pushed.atoms(tgt), pos))
            key = ((x1, y1), tgt)
            out[key] = inst.add(out[key], term) if key in out else term
    return GrothMorphism(src, dst, f, _make(pushed, dst.obj, out))


def mor_tensor_left(m: GrothMorphism, Q: GrothObject) -> GrothMorphism:
    return mor_tensor(m, groth_identity(Q))


def mor_tensor_right(P: GrothObject, n: GrothMorphism) -> GrothMorphism:
    return mor_tensor(groth_identity(P), n)


# ---------------------------------------------------------------- constraints

def _diagonal_constraint(src, dst, f, component):
    """Morphism over a bijective map ``f`` with entries ``component(point)`` on the diagonal."""
    pushed = pushforward_obj(f, src.obj)
    out = {}
    for p in src.obj.support():
        q = f(p)
        if q in dst.obj._fib:
            out[(q, q)] = component(p)
    return GrothMorphism(src, dst, f, _make(pushed, dst.obj, out))


def constraint_assoc(P, Q, R) -> GrothMorphism:
    inst = P.inst
    src = obj_tensor(obj_tensor(P, Q), R)
    dst = obj_tensor(P, obj_tensor(Q, R))
    assoc = assoc_morphism(P.space, Q.space, R.space)
    return _diagonal_constraint(src, dst, assoc, lambda p: inst.alpha(
        P.obj.fiber(p[0][0]), Q.obj.fiber(p[0][1]), R.obj.fiber(p[1])))


def constraint_unit(P) -> GrothMorphism:
    inst = P.inst
    one = unit_object(P.space.group, inst)
    src = obj_tensor(one, P)
    unitor = unitor_morphism(P.space)
    return _diagonal_constraint(src, P, unitor, lambda p: inst.eta(P.obj.fiber(p[1])))


def constraint_symm(P, Q) -> GrothMorphism:
    inst = P.inst
    src, dst = obj_tensor(P, Q), obj_tensor(Q, P)
    symm = symmetry_morphism(P.space, Q.space)
    return _diagonal_constraint(src, dst, symm, lambda p: inst.sigma(P.obj.fiber(p[0]), Q.obj.fiber(p[1])))


def constraint_right_unit(P) -> GrothMorphism:
    """``P (x) 1 -> P`` as ``eta o sigma``."""
    one = unit_object(P.space.group, P.inst)
    return groth_compose(constraint_unit(P), constraint_symm(P, one))


def check_groth_morphism(m: GrothMorphism) -> GrothMorphism:
    """Re-validate ``phi`` (hull and equivariance) from scratch."""
    phi = mor_check(m.phi.src, m.phi.dst, m.phi.entry_dict())
    if phi.src != pushforward_obj(m.f, m.src.obj):
        raise ShapeMismatch("phi does not start at f_* of the source object")
    return m


# ---------------------------------------------------------------- fibration data

def projection(x):
    """The projection to spaces: objects go to their space, morphisms to their map."""
    if isinstance(x, GrothObject):
        return x.space
    return x.f


def exchange_map(f: SpaceMorphism, g: SpaceMorphism, P: GrothObject, Q: GrothObject):
    """The comparison ``(f (x) g)_*(P (x) Q) -> f_* P (x) g_* Q``.

    Returns ``(E, is_iso, inverse)``; ``E`` lives on ``X' (x) Y'``.
    """
    inst = P.inst
    PQ = obj_tensor(P, Q)
    fg = tensor_morphisms(f, g)
    left = pushforward_obj(fg, PQ.obj)
    fP = GrothObject(f.dst, pushforward_obj(f, P.obj))
    gQ = GrothObject(g.dst, pushforward_obj(g, Q.obj))
    right = obj_tensor(fP, gQ).obj
    out = {}
    for y in left.support():
        atoms = left.atoms(y)
        total = None
        for k, ((x0, y0), _) in enumerate(atoms):
            a = sub_inj(inst, fP.obj.atoms(y[0]), _positions(fP.obj.atoms(y[0]), [k_ for k_, _ in P.obj.atoms(x0)]))
            b = sub_inj(inst, gQ.obj.atoms(y[1]), _positions(gQ.obj.atoms(y[1]), [k_ for k_, _ in Q.obj.atoms(y0)]))
            term = inst.compose(inst.tensor_mor(a, b), sub_proj(inst, atoms, [k]))
            total = term if total is None else inst.add(total, term)
        out[(y, y)] = total
    E = mor_check(left, right, out)
    ok, inv = mor_is_iso(E)
    return E, ok, inv


def biadditive_map(M0: GrothObject, M1: GrothObject, N: GrothObject):
    """The comparison ``(M0 (x) N) + (M1 (x) N) -> (M0 + M1) (x) N``.

    Returns ``(c, is_iso, inverse)``.
    """
    inst = N.inst
    S, injs, projs = obj_biproduct(M0.obj, M1.obj)
    A0, A1 = obj_tensor(M0, N), obj_tensor(M1, N)
    src, _, src_projs = obj_biproduct(A0.obj, A1.obj)
    dst = obj_tensor(GrothObject(S.space, S), N).obj
    out = {}
    for i, (Mi, Ai) in enumerate(((M0, A0), (M1, A1))):
        ii = GrothMorphism(Mi, GrothObject(S.space, S), identity_morphism(S.space), injs[i])
        t = mor_tensor_left(ii, N)
        step = mor_compose(t.phi, src_projs[i])
        for k, e in step.entries:
            out[k] = inst.add(out[k], e) if k in out else e
    c = mor_check(src, dst, out)
    ok, inv = mor_is_iso(c)
    return c, ok, inv


def cocartesian_lift(f: SpaceMorphism, P: GrothObject) -> GrothMorphism:
    """``(f, id_{f_* P}): P -> (f.dst, f_* P)``."""
    pushed = pushforward_obj(f, P.obj)
    return GrothMorphism(P, GrothObject(f.dst, pushed), f, mor_identity(pushed))


def cocartesian_verify(lift: GrothMorphism, test: GrothMorphism, h_prime=None) -> dict:
    """Fill ``test = (h, chi)`` through ``lift`` along ``h = h_prime o f``.

    Returns ``{"fill_in": m, "unique": bool}``; raises
    :class:`NoFactorization` if ``h_prime`` is missing or does not factor ``h``.
    """
    if h_prime is None:
        raise NoFactorization("no factorization of the test map was supplied")
    if test.src != lift.src:
        raise NoFactorization("test morphism does not start at the lifted object")
    if h_prime.src != lift.f.dst or h_prime.dst != test.f.dst:
        raise NoFactorization("h' does not connect the right spaces")
    if compose_morphisms(h_prime, lift.f) != test.f:
        raise NoFactorization("h is not h' o f", witness={"h": repr(test.f.nf)})
    # h'_*(f_* P) = (h' o f)_* P = h_* P on the nose, so the fill-in matrix is chi itself
    fill_src = pushforward_obj(h_prime, lift.dst.obj)
    if fill_src != test.phi.src:
        raise NoFactorization("h'_* f_* P differs from h_* P")
    fill = GrothMorphism(lift.dst, test.dst, h_prime, test.phi)
    recomposed = groth_compose(fill, lift)
    if recomposed != test:
        raise NoFactorization("recomposition does not reproduce the test morphism")
    # any fill-in (h', psi) recomposes to (h, psi o h'_*(id)); precomposition with
    # h'_*(id) is injective exactly when h'_*(id) is the identity
    unique = pushforward_mor(h_prime, lift.phi) == mor_identity(fill_src)
    return {"fill_in": fill, "unique": unique}
