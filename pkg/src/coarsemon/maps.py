"""Map algebra between spaces and certified space morphisms.

A map term is built from :class:`Identity`, :class:`Table`, :class:`Affine`,
:class:`PairMap`, :class:`Pairing`, :class:`Proj1`, :class:`Proj2`,
:class:`Const` and :class:`Compose`.  Terms are normalized by symbolic
evaluation on a generic point: the normal form describes every leaf of the
output as

* ``Cst(c)``                   a constant,
* ``Aff(a, b, path)``          ``a * x[path] + b`` with ``a != 0``, or
* ``Tab(paths, doms, rows)``   a finite table in the finite leaves it really
  depends on.

Two terms with the same source are equal as maps iff their normal forms are
equal, so equality of morphisms is decidable.  Equivariance, controlledness
and properness are read off the normal form leaf by leaf.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any

from .coarse import BornCoarseSpace, space_tensor
from .errors import NotControlled, NotEquivariant, NotProper, ShapeError
from .groups import IntLine, PairSet, component, order_key


# ---------------------------------------------------------------- terms

class MapTerm:
    pass


@dataclass(frozen=True)
class Identity(MapTerm):
    pass


@dataclass(frozen=True)
class Table(MapTerm):
    """Finite lookup table, ``rows = ((x, f(x)), ...)``."""
    rows: tuple

    def __post_init__(self):
        rows = tuple(sorted((tuple(r) for r in self.rows), key=lambda r: order_key(r[0])))
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_lookup", dict(rows))

    @classmethod
    def from_dict(cls, mapping):
        return cls(tuple(mapping.items()))

    def __call__(self, x):
        try:
            return self._lookup[x]
        except KeyError:
            raise ShapeError(f"table has no value at {x!r}") from None


@dataclass(frozen=True)
class Affine(MapTerm):
    a: int
    b: int


@dataclass(frozen=True)
class PairMap(MapTerm):
    left: MapTerm
    right: MapTerm


@dataclass(frozen=True)
class Pairing(MapTerm):
    left: MapTerm
    right: MapTerm


@dataclass(frozen=True)
class Proj1(MapTerm):
    pass


@dataclass(frozen=True)
class Proj2(MapTerm):
    pass


@dataclass(frozen=True)
class Const(MapTerm):
    point: Any


@dataclass(frozen=True)
class Compose(MapTerm):
    """``Compose((f, g, h))`` is ``f o g o h``."""
    maps: tuple

    def __post_init__(self):
        flat = []
        for m in self.maps:
            flat.extend(m.maps if isinstance(m, Compose) else (m,))
        object.__setattr__(self, "maps", tuple(flat))


def apply_term(term: MapTerm, x):
    """Evaluate a term at a concrete point."""
    if isinstance(term, Identity):
        return x
    if isinstance(term, Table):
        return term(x)
    if isinstance(term, Affine):
        if not isinstance(x, int) or isinstance(x, bool):
            raise ShapeError(f"affine map applied to {x!r}")
        return term.a * x + term.b
    if isinstance(term, PairMap):
        return (apply_term(term.left, x[0]), apply_term(term.right, x[1]))
    if isinstance(term, Pairing):
        return (apply_term(term.left, x), apply_term(term.right, x))
    if isinstance(term, Proj1):
        return x[0]
    if isinstance(term, Proj2):
        return x[1]
    if isinstance(term, Const):
        return term.point
    if isinstance(term, Compose):
        for m in reversed(term.maps):
            x = apply_term(m, x)
        return x
    raise ShapeError(f"unknown map term {term!r}")


# ---------------------------------------------------------------- normal forms

@dataclass(frozen=True)
class Cst:
    value: Any


@dataclass(frozen=True)
class Aff:
    a: int
    b: int
    path: tuple


@dataclass(frozen=True)
class Tab:
    paths: tuple
    doms: tuple
    rows: tuple             # ((assignment, value), ...), assignments in product order

    def __post_init__(self):
        object.__setattr__(self, "_lookup", dict(self.rows))

    def lookup(self, assignment):
        return self._lookup[assignment]


def _make_const(value):
    if isinstance(value, tuple):
        return (_make_const(value[0]), _make_const(value[1]))
    return Cst(value)


def _make_tab(paths, doms, table):
    """Canonical leaf expression for ``table: assignment -> value``."""
    keep = []
    for k in range(len(paths)):
        depends = False
        buckets = {}
        for asg, val in table.items():
            rest = asg[:k] + asg[k + 1:]
            if buckets.setdefault(rest, val) != val:
                depends = True
                break
        if depends:
            keep.append(k)
    if len(keep) < len(paths):
        table = {tuple(asg[k] for k in keep): val for asg, val in table.items()}
        paths = tuple(paths[k] for k in keep)
        doms = tuple(doms[k] for k in keep)
    values = list(table.values())
    if not paths:
        return _make_const(values[0])
    if isinstance(values[0], tuple):
        left = _make_tab(paths, doms, {a: v[0] for a, v in table.items()})
        right = _make_tab(paths, doms, {a: v[1] for a, v in table.items()})
        return (left, right)
    rows = tuple((asg, table[asg]) for asg in itertools.product(*doms))
    return Tab(tuple(paths), tuple(doms), rows)


def symbolic_input(ambient, path=()):
    if isinstance(ambient, PairSet):
        return (symbolic_input(ambient.left, path + (0,)), symbolic_input(ambient.right, path + (1,)))
    if isinstance(ambient, IntLine):
        return Aff(1, 0, path)
    dom = tuple(ambient.points)
    return Tab((path,), (dom,), tuple(((v,), v) for v in dom))


def _split(e):
    if isinstance(e, tuple):
        return e
    if isinstance(e, Cst) and isinstance(e.value, tuple):
        return _make_const(e.value)
    raise ShapeError(f"expected a pair-valued expression, got {e!r}")


def _vars(e, out):
    if isinstance(e, tuple):
        _vars(e[0], out)
        _vars(e[1], out)
    elif isinstance(e, Tab):
        for p, d in zip(e.paths, e.doms):
            out[p] = d
    elif isinstance(e, Aff):
        raise ShapeError("a table map cannot read an integer-line coordinate")
    return out


def _concrete(e, env):
    if isinstance(e, tuple):
        return (_concrete(e[0], env), _concrete(e[1], env))
    if isinstance(e, Cst):
        return e.value
    return e.lookup(tuple(env[p] for p in e.paths))


def _affine(a, b, e):
    if isinstance(e, tuple):
        raise ShapeError("affine map applied to a pair")
    if a == 0:
        return Cst(b)
    if isinstance(e, Cst):
        if not isinstance(e.value, int):
            raise ShapeError(f"affine map applied to {e.value!r}")
        return Cst(a * e.value + b)
    if isinstance(e, Aff):
        return Aff(a * e.a, a * e.b + b, e.path)
    table = {}
    for asg, v in e.rows:
        if not isinstance(v, int) or isinstance(v, bool):
            raise ShapeError(f"affine map applied to {v!r}")
        table[asg] = a * v + b
    return _make_tab(e.paths, e.doms, table)


def _apply_symbolic(term, e):
    if isinstance(term, Identity):
        return e
    if isinstance(term, Proj1):
        return _split(e)[0]
    if isinstance(term, Proj2):
        return _split(e)[1]
    if isinstance(term, Pairing):
        return (_apply_symbolic(term.left, e), _apply_symbolic(term.right, e))
    if isinstance(term, PairMap):
        s = _split(e)
        return (_apply_symbolic(term.left, s[0]), _apply_symbolic(term.right, s[1]))
    if isinstance(term, Const):
        return _make_const(term.point)
    if isinstance(term, Affine):
        return _affine(term.a, term.b, e)
    if isinstance(term, Table):
        vs = _vars(e, {})
        paths = tuple(sorted(vs, key=order_key))
        doms = tuple(vs[p] for p in paths)
        table = {}
        for asg in itertools.product(*doms):
            table[asg] = term(_concrete(e, dict(zip(paths, asg))))
        if not paths:
            return _make_const(table[()])
        return _make_tab(paths, doms, table)
    if isinstance(term, Compose):
        for m in reversed(term.maps):
            e = _apply_symbolic(m, e)
        return e
    raise ShapeError(f"unknown map term {term!r}")


def normal_form(term: MapTerm, src_ambient):
    return _apply_symbolic(term, symbolic_input(src_ambient))


def eval_nf(nf, x):
    if isinstance(nf, tuple):
        return (eval_nf(nf[0], x), eval_nf(nf[1], x))
    if isinstance(nf, Cst):
        return nf.value
    if isinstance(nf, Aff):
        return nf.a * component(x, nf.path) + nf.b
    return nf.lookup(tuple(component(x, p) for p in nf.paths))


def nf_leaves(nf, ambient, path=()):
    """``[(path, leaf_ambient, leaf_expression)]`` following the target shape."""
    if isinstance(ambient, PairSet):
        if not isinstance(nf, tuple):
            nf = _split(nf)
        return nf_leaves(nf[0], ambient.left, path + (0,)) + nf_leaves(nf[1], ambient.right, path + (1,))
    if isinstance(nf, tuple):
        raise ShapeError(f"pair value where {ambient} expects a leaf")
    return [(path, ambient, nf)]


def nf_to_json(nf):
    if isinstance(nf, tuple):
        return {"pair": [nf_to_json(nf[0]), nf_to_json(nf[1])]}
    if isinstance(nf, Cst):
        return {"const": nf.value}
    if isinstance(nf, Aff):
        return {"affine": [nf.a, nf.b], "path": list(nf.path)}
    return {"table": [[list(a), v] for a, v in nf.rows], "paths": [list(p) for p in nf.paths]}


# ---------------------------------------------------------------- space morphisms

@dataclass(frozen=True)
class SpaceMorphism:
    """A certified morphism: equivariant, controlled and proper.

    ``control_cert = (slope, offset)`` means
    ``(f x f)(src.cofinal(i)) <= dst.cofinal(slope*i + offset)``;
    ``proper_cert`` maps each source integer-line leaf with finite bornology
    to the target leaf that pins it down.
    """

    nf: Any
    src: BornCoarseSpace
    dst: BornCoarseSpace
    term: MapTerm = field(compare=False)
    control_cert: tuple = field(compare=False, default=(0, 0))
    proper_cert: tuple = field(compare=False, default=())

    def __call__(self, x):
        return eval_nf(self.nf, x)

    def __hash__(self):
        return hash(repr(self.nf))

    def control_index(self, i):
        slope, offset = self.control_cert
        return slope * i + offset


def _leaf_action_table(action):
    return dict(action.leaf_actions())


def _leaf_structures(space):
    return dict(space.coarse.leaves)


def morphism_check(term: MapTerm, src: BornCoarseSpace, dst: BornCoarseSpace) -> SpaceMorphism:
    if src.group != dst.group:
        raise ShapeError("morphism between spaces over different groups")
    nf = normal_form(term, src.ambient)
    leaves = nf_leaves(nf, dst.ambient)
    G = src.group
    src_acts, dst_acts = _leaf_action_table(src.action), _leaf_action_table(dst.action)
    src_ls, dst_ls = _leaf_structures(src), _leaf_structures(dst)

    # shape
    for q, amb, e in leaves:
        if isinstance(e, Cst):
            amb.check_point(e.value)
        elif isinstance(e, Aff):
            if not isinstance(amb, IntLine):
                raise ShapeError(f"integer-valued coordinate lands in {amb}")
        else:
            for _, v in e.rows:
                amb.check_point(v)

    # equivariance
    for q, amb, e in leaves:
        qa = dst_acts[q]
        for g in G:
            if isinstance(e, Cst):
                if qa.apply(g, e.value) != e.value:
                    raise NotEquivariant(f"constant {e.value!r} is moved by {g!r}", witness=(g, e.value))
            elif isinstance(e, Aff):
                eps, t = src_acts[e.path].coeffs[G.index(g)]
                eps2, t2 = qa.coeffs[G.index(g)]
                if e.a * eps != eps2 * e.a or e.a * t + e.b != eps2 * e.b + t2:
                    raise NotEquivariant(f"affine coordinate {q} fails for {g!r}", witness=(g, q))
            else:
                for asg, val in e.rows:
                    moved = tuple(src_acts[p].apply(g, v) for p, v in zip(e.paths, asg))
                    if e.lookup(moved) != qa.apply(g, val):
                        raise NotEquivariant(f"f(g.x) != g.f(x) for g={g!r}", witness=(g, asg))

    # control
    slope = offset = 0
    for q, amb, e in leaves:
        lq = dst_ls[q]
        if isinstance(e, Cst):
            continue
        if isinstance(e, Aff):
            lp = src_ls[e.path]
            if lp.kind == "metric":
                if lq.kind != "metric":
                    raise NotControlled(f"metric coordinate {e.path} maps into a non-metric leaf",
                                        witness={"index": 1, "src_leaf": list(e.path)})
                slope = max(slope, abs(e.a))
                continue
            for cls in lp.classes:
                for x, y in itertools.product(cls, cls):
                    k = lq.index(e.a * x + e.b, e.a * y + e.b)
                    if k is None:
                        raise NotControlled("glued points are separated", witness=(x, y))
                    offset = max(offset, k)
            continue
        related = []
        for p in e.paths:
            ls = src_ls[p]
            related.append([(x, y) for c in ls.classes for x in c for y in c])
        for combo in itertools.product(*related):
            a1 = tuple(x for x, _ in combo)
            a2 = tuple(y for _, y in combo)
            k = lq.index(e.lookup(a1), e.lookup(a2))
            if k is None:
                raise NotControlled("related points map to unrelated points", witness=(a1, a2))
            offset = max(offset, k)

    # properness
    src_flags = src.born.leaf_flags()
    dst_flags = dst.born.leaf_flags()
    pins = {}
    for q, amb, e in leaves:
        if isinstance(e, Aff) and dst_flags.get(q) == "finite":
            pins.setdefault(e.path, q)
    for p, flag in src_flags.items():
        if flag == "finite" and p not in pins:
            raise NotProper(f"preimages of bounded sets are infinite along source leaf {p}",
                            witness={"free_leaf": list(p)})
    return SpaceMorphism(nf, src, dst, term, (slope, offset), tuple(sorted(pins.items())))


def identity_morphism(X):
    return morphism_check(Identity(), X, X)


def compose_morphisms(f2: SpaceMorphism, f1: SpaceMorphism) -> SpaceMorphism:
    """``f2 o f1``."""
    if f1.dst != f2.src:
        raise ShapeError("morphisms are not composable")
    return morphism_check(Compose((f2.term, f1.term)), f1.src, f2.dst)


def tensor_morphisms(f: SpaceMorphism, g: SpaceMorphism) -> SpaceMorphism:
    return morphism_check(PairMap(f.term, g.term), space_tensor(f.src, g.src), space_tensor(f.dst, g.dst))


ASSOC_TERM = Pairing(Compose((Proj1(), Proj1())), Pairing(Compose((Proj2(), Proj1())), Proj2()))
SYMM_TERM = Pairing(Proj2(), Proj1())
UNITOR_TERM = Proj2()


def assoc_morphism(X, Y, Z):
    """``((x, y), z) -> (x, (y, z))``."""
    return morphism_check(ASSOC_TERM, space_tensor(space_tensor(X, Y), Z),
                          space_tensor(X, space_tensor(Y, Z)))


def unitor_morphism(X):
    """``(*, x) -> x``."""
    from .coarse import point_space
    return morphism_check(UNITOR_TERM, space_tensor(point_space(X.group), X), X)


def symmetry_morphism(X, Y):
    """``(x, y) -> (y, x)``."""
    return morphism_check(SYMM_TERM, space_tensor(X, Y), space_tensor(Y, X))


def space_constraints(X, Y, Z):
    """Associator ``(X*Y)*Z -> X*(Y*Z)``, unitor ``pt*X -> X`` and symmetry ``X*Y -> Y*X``."""
    return assoc_morphism(X, Y, Z), unitor_morphism(X), symmetry_morphism(X, Y)


def preimage(f: SpaceMorphism, y, points):
    return [x for x in points if f(x) == y]
