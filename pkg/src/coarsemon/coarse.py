"""Entourages, coarse structures, bornologies and G-bornological coarse spaces.

Coarse structures are presented leaf by leaf.  Every ambient set is a tree of
pairs whose leaves are finite sets or copies of the integer line, and every
structure we build is a product over the leaves of

* an invariant equivalence relation (finite leaves, and discrete integer
  lines with finitely many glued points), constant in the index, or
* the metric family ``MetricBall(i)`` (integer lines).

``cofinal(i)`` is the product of the leaf entourages at index ``i``.  Since the
family is monotone, a finite set of pairs lies in the structure iff it lies in
``cofinal(i)`` for ``i`` the largest per-pair index; this is how membership is
decided exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import NotCompatible, SearchBoundExceeded, ShapeError
from .groups import (AmbientSet, FiniteSet, GAction, IntLine,
                     PairAction, PairSet, POINT_SET, component, order_key,
                     sort_points, trivial_action)

DEFAULT_SEARCH_BOUND = 256


# ---------------------------------------------------------------- entourages

class Entourage:
    def contains(self, pair) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class FinitePairs(Entourage):
    pairs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(self.pairs))

    def contains(self, pair):
        return tuple(pair) in self.pairs


@dataclass(frozen=True)
class Diagonal(Entourage):

    def contains(self, pair):
        return pair[0] == pair[1]


@dataclass(frozen=True)
class MetricBall(Entourage):
    r: int

    def __post_init__(self):
        if self.r < 0:
            raise ShapeError("metric ball radius must be non-negative")

    def contains(self, pair):
        return abs(pair[0] - pair[1]) <= self.r


@dataclass(frozen=True)
class ProductEnt(Entourage):
    left: Entourage
    right: Entourage

    def contains(self, pair):
        (x, xx), (y, yy) = pair
        return self.left.contains((x, y)) and self.right.contains((xx, yy))


@dataclass(frozen=True)
class UnionEnt(Entourage):
    parts: tuple

    def contains(self, pair):
        return any(p.contains(pair) for p in self.parts)


@dataclass(frozen=True)
class Whole(Entourage):
    ambient: FiniteSet

    def contains(self, pair):
        return self.ambient.contains(pair[0]) and self.ambient.contains(pair[1])

    def materialize(self):
        pts = self.ambient.points
        return FinitePairs(frozenset(itertools.product(pts, pts)))


def contains(U: Entourage, pair) -> bool:
    return U.contains(tuple(pair))


def check_entourage(U: Entourage, ambient: AmbientSet):
    """Reject entourages that do not fit ``ambient`` (MetricBall off Z, Whole off finite sets...)."""
    if isinstance(U, Diagonal):
        return
    if isinstance(U, MetricBall):
        if not isinstance(ambient, IntLine):
            raise ShapeError("MetricBall lives on the integer line only", witness=U)
    elif isinstance(U, Whole):
        if not isinstance(ambient, FiniteSet) or U.ambient != ambient:
            raise ShapeError("Whole lives on its own finite set only", witness=U)
    elif isinstance(U, ProductEnt):
        if not isinstance(ambient, PairSet):
            raise ShapeError("ProductEnt lives on product sets only", witness=U)
        check_entourage(U.left, ambient.left)
        check_entourage(U.right, ambient.right)
    elif isinstance(U, UnionEnt):
        for p in U.parts:
            check_entourage(p, ambient)
    elif isinstance(U, FinitePairs):
        for x, y in U.pairs:
            ambient.check_point(x)
            ambient.check_point(y)
    else:
        raise ShapeError(f"unknown entourage {U!r}")


def union(parts: Iterable[Entourage]) -> Entourage:
    flat = []
    for p in parts:
        for q in (p.parts if isinstance(p, UnionEnt) else (p,)):
            if q not in flat:
                flat.append(q)
    fps = [q for q in flat if isinstance(q, FinitePairs)]
    if len(fps) > 1:
        merged = FinitePairs(frozenset().union(*(q.pairs for q in fps)))
        flat = [q for q in flat if not isinstance(q, FinitePairs)] + [merged]
    if len(flat) == 1:
        return flat[0]
    if not flat:
        return FinitePairs(frozenset())
    return UnionEnt(tuple(flat))


def ent_invert(U: Entourage) -> Entourage:
    if isinstance(U, FinitePairs):
        return FinitePairs(frozenset((y, x) for x, y in U.pairs))
    if isinstance(U, (Diagonal, MetricBall, Whole)):
        return U
    if isinstance(U, ProductEnt):
        return ProductEnt(ent_invert(U.left), ent_invert(U.right))
    if isinstance(U, UnionEnt):
        return union(ent_invert(p) for p in U.parts)
    raise ShapeError(f"unknown entourage {U!r}")


def ent_thicken(U: Entourage, B) -> frozenset:
    """``U[B] = {x | exists y in B with (x, y) in U}``, computed exactly."""
    B = frozenset(B)
    if isinstance(U, FinitePairs):
        return frozenset(x for x, y in U.pairs if y in B)
    if isinstance(U, Diagonal):
        return B
    if isinstance(U, MetricBall):
        return frozenset(x for n in B for x in range(n - U.r, n + U.r + 1))
    if isinstance(U, Whole):
        return frozenset(U.ambient.points) if B else frozenset()
    if isinstance(U, ProductEnt):
        out = set()
        for y, yy in B:
            out.update(itertools.product(ent_thicken(U.left, {y}), ent_thicken(U.right, {yy})))
        return frozenset(out)
    if isinstance(U, UnionEnt):
        return frozenset().union(*(ent_thicken(p, B) for p in U.parts))
    raise ShapeError(f"unknown entourage {U!r}")


def ent_compose(U: Entourage, V: Entourage) -> Entourage:
    """``U o V = {(x, z) | exists y: (x, y) in U and (y, z) in V}``."""
    if isinstance(U, Diagonal):
        return V
    if isinstance(V, Diagonal):
        return U
    if isinstance(U, UnionEnt) or isinstance(V, UnionEnt):
        us = U.parts if isinstance(U, UnionEnt) else (U,)
        vs = V.parts if isinstance(V, UnionEnt) else (V,)
        return union(ent_compose(u, v) for u in us for v in vs)
    if isinstance(U, MetricBall) and isinstance(V, MetricBall):
        return MetricBall(U.r + V.r)
    if isinstance(U, ProductEnt) and isinstance(V, ProductEnt):
        return ProductEnt(ent_compose(U.left, V.left), ent_compose(U.right, V.right))
    if isinstance(U, Whole) and isinstance(V, Whole):
        return U
    if isinstance(U, Whole):
        U = U.materialize()
    if isinstance(V, Whole):
        V = V.materialize()
    if isinstance(V, FinitePairs):
        return FinitePairs(frozenset((x, z) for y, z in V.pairs for x in ent_thicken(U, {y})))
    if isinstance(U, FinitePairs):
        Vinv = ent_invert(V)
        return FinitePairs(frozenset((x, z) for x, y in U.pairs for z in ent_thicken(Vinv, {y})))
    raise ShapeError(f"cannot compose {U!r} with {V!r}")


def ent_translate(action: GAction, g, U: Entourage) -> Entourage:
    """``gU = {(gx, gy) | (x, y) in U}``."""
    if isinstance(U, FinitePairs):
        return FinitePairs(frozenset((action.apply(g, x), action.apply(g, y)) for x, y in U.pairs))
    if isinstance(U, (Diagonal, Whole)):
        return U
    if isinstance(U, MetricBall):
        # affine actions x -> +-x + t are isometries
        return U
    if isinstance(U, ProductEnt):
        if not isinstance(action, PairAction):
            raise ShapeError("ProductEnt needs a componentwise action")
        return ProductEnt(ent_translate(action.left, g, U.left), ent_translate(action.right, g, U.right))
    if isinstance(U, UnionEnt):
        return union(ent_translate(action, g, p) for p in U.parts)
    raise ShapeError(f"unknown entourage {U!r}")


def ent_saturate(action: GAction, U: Entourage) -> Entourage:
    """``GU``, the union of all translates."""
    return union(ent_translate(action, g, U) for g in action.group)


def pairs_saturate(action: GAction, pairs) -> frozenset:
    return frozenset((action.apply(g, x), action.apply(g, y)) for x, y in pairs for g in action.group)


# ---------------------------------------------------------------- coarse structures

def _classes_from_pairs(points, pairs):
    parent = {p: p for p in points}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for x, y in pairs:
        parent.setdefault(x, x)
        parent.setdefault(y, y)
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry, key=order_key)] = min(rx, ry, key=order_key)
    groups = {}
    for p in parent:
        groups.setdefault(find(p), set()).add(p)
    return tuple(sorted((frozenset(c) for c in groups.values()),
                        key=lambda c: order_key(tuple(sort_points(c)))))


@dataclass(frozen=True)
class LeafStructure:
    """Coarse structure on one leaf.

    ``kind`` is ``"metric"`` (integer line, balls of every radius) or
    ``"classes"`` (an invariant equivalence relation; on the integer line
    every point outside ``classes`` is a singleton, i.e. discrete).
    """

    kind: str
    ambient: AmbientSet
    classes: tuple = ()

    def __post_init__(self):
        lookup = {}
        for k, c in enumerate(self.classes):
            for p in c:
                lookup[p] = k
        object.__setattr__(self, "_lookup", lookup)

    def entourage(self, i):
        if self.kind == "metric":
            return MetricBall(i)
        if isinstance(self.ambient, FiniteSet):
            if len(self.classes) == 1:
                return Whole(self.ambient)
            if all(len(c) == 1 for c in self.classes):
                return Diagonal()
            return FinitePairs(frozenset(p for c in self.classes for p in itertools.product(c, c)))
        glued = [c for c in self.classes if len(c) > 1]
        if not glued:
            return Diagonal()
        return union([Diagonal(), FinitePairs(frozenset(p for c in glued for p in itertools.product(c, c)))])

    def index(self, x, y):
        if self.kind == "metric":
            return abs(x - y)
        if x == y:
            return 0
        kx = self._lookup.get(x)
        return 0 if kx is not None and kx == self._lookup.get(y) else None

    def class_of(self, x):
        k = self._lookup.get(x)
        return self.classes[k] if k is not None else frozenset({x})


@dataclass(frozen=True)
class CoarseStructure:
    """A G-coarse structure presented by a monotone cofinal family.

    ``generators`` records what the structure was generated from; the family
    itself is ``cofinal(i)``.  Closure witnesses: ``cofinal(i) o cofinal(j)``
    lies in ``cofinal(i + j)``, inverses and G-saturations of ``cofinal(i)``
    lie in ``cofinal(i)``.
    """

    ambient: AmbientSet
    leaves: tuple           # ((path, LeafStructure), ...) in leaf order
    generators: tuple = field(default=(), compare=False)
    search_bound: int = DEFAULT_SEARCH_BOUND

    def cofinal(self, i: int) -> Entourage:
        table = dict(self.leaves)

        def build(amb, path):
            if isinstance(amb, PairSet):
                return ProductEnt(build(amb.left, path + (0,)), build(amb.right, path + (1,)))
            return table[path].entourage(i)

        return build(self.ambient, ())

    def compose_index(self, i, j):
        return i + j

    def invert_index(self, i):
        return i

    def saturate_index(self, i):
        return i

    def is_metric(self):
        return any(ls.kind == "metric" for _, ls in self.leaves)

    def pair_index(self, pair) -> Optional[int]:
        """Least ``i`` with ``pair`` in ``cofinal(i)``; ``None`` if there is none."""
        x, y = pair
        worst = 0
        for path, ls in self.leaves:
            k = ls.index(component(x, path), component(y, path))
            if k is None:
                return None
            worst = max(worst, k)
        return worst


def coarse_member(C: CoarseStructure, V) -> bool:
    """Decide whether the finite set of pairs ``V`` is an entourage.

    Raises :class:`SearchBoundExceeded` when ``V`` needs an index beyond the
    structure's search bound.
    """
    need = 0
    for pair in V:
        k = C.pair_index(pair)
        if k is None:
            return False
        need = max(need, k)
    if need > C.search_bound:
        raise SearchBoundExceeded(f"needs cofinal index {need} > bound {C.search_bound}",
                                  witness=need)
    return True


def member_index(C: CoarseStructure, V) -> Optional[int]:
    """Like :func:`coarse_member` but returns the cofinal index (or ``None``)."""
    need = 0
    for pair in V:
        k = C.pair_index(pair)
        if k is None:
            return None
        need = max(need, k)
    if need > C.search_bound:
        raise SearchBoundExceeded(f"needs cofinal index {need} > bound {C.search_bound}", witness=need)
    return need


def _mentions_ball(U):
    if isinstance(U, MetricBall):
        return U.r > 0
    if isinstance(U, UnionEnt):
        return any(_mentions_ball(p) for p in U.parts)
    return False


def _pairs_of(U, ambient):
    if isinstance(U, (Diagonal, MetricBall)):
        return set()
    if isinstance(U, FinitePairs):
        return set(U.pairs)
    if isinstance(U, Whole):
        return set(U.materialize().pairs)
    if isinstance(U, UnionEnt):
        return set().union(*(_pairs_of(p, ambient) for p in U.parts))
    raise ShapeError(f"{U!r} cannot generate a structure on {ambient}")


def coarse_structure(ambient: AmbientSet, action: GAction, generators=(),
                     search_bound=DEFAULT_SEARCH_BOUND) -> CoarseStructure:
    """The G-coarse structure generated by ``generators`` on a finite set or Z.

    On a finite set this is the equivalence relation generated by all
    translates of the generators.  On Z any ball of positive radius makes the
    structure metric; otherwise finitely many points are glued.
    """
    generators = tuple(generators)
    for U in generators:
        check_entourage(U, ambient)
    if isinstance(ambient, PairSet):
        raise ShapeError("structures on products come from space_tensor")
    if isinstance(ambient, IntLine) and any(_mentions_ball(U) for U in generators):
        leaf = LeafStructure("metric", ambient)
    else:
        pairs = set()
        for U in generators:
            pairs |= _pairs_of(U, ambient)
        pairs = pairs_saturate(action, pairs)
        points = ambient.points if isinstance(ambient, FiniteSet) else ()
        classes = _classes_from_pairs(points, pairs)
        if isinstance(ambient, IntLine):
            classes = tuple(c for c in classes if len(c) > 1)
        leaf = LeafStructure("classes", ambient, classes)
    return CoarseStructure(ambient, (((), leaf),), generators, search_bound)


def product_structure(C1: CoarseStructure, C2: CoarseStructure) -> CoarseStructure:
    leaves = tuple(((0,) + p, ls) for p, ls in C1.leaves) + tuple(((1,) + p, ls) for p, ls in C2.leaves)
    gens = tuple(ProductEnt(u, v) for u in C1.generators for v in C2.generators)
    return CoarseStructure(PairSet(C1.ambient, C2.ambient), leaves, gens,
                           min(C1.search_bound, C2.search_bound))


# ---------------------------------------------------------------- bornologies

@dataclass(frozen=True)
class Bornology:
    """``"all"`` subsets, ``"finite"`` subsets, a ``"product"`` of two
    bornologies, or (candidates only) the bornology generated by a ``"basis"``
    of finite sets."""

    kind: str
    ambient: AmbientSet
    parts: tuple = ()
    basis: tuple = ()

    def bounds_everything(self):
        if self.ambient.is_finite() and self.kind != "basis":
            return True
        if self.kind == "product":
            return all(p.bounds_everything() for p in self.parts)
        return self.kind == "all"

    def only_finite(self):
        if self.ambient.is_finite() and self.kind != "basis":
            return True
        if self.kind == "product":
            return all(p.only_finite() for p in self.parts)
        return self.kind == "finite"

    def leaf_flags(self):
        """``{path: "all" | "finite"}`` over the integer-line leaves."""
        if self.kind == "product":
            out = {}
            for k, part in enumerate(self.parts):
                out.update({(k,) + p: f for p, f in part.leaf_flags().items()})
            return out
        return {path: self.kind for path, leaf in self.ambient.leaves() if isinstance(leaf, IntLine)}

    def contains_finite(self, S) -> bool:
        """Is the finite set ``S`` bounded?"""
        if self.kind == "basis":
            return frozenset(S) <= frozenset().union(*self.basis) if self.basis else not S
        return True

    @property
    def variant(self):
        if self.bounds_everything():
            return "all"
        if self.only_finite():
            return "finite"
        return self.kind


def bornology(kind: str, ambient: AmbientSet) -> Bornology:
    if kind not in ("all", "finite"):
        raise ShapeError(f"unknown bornology {kind!r}")
    if ambient.is_finite():
        # on a finite set both variants are the power set
        kind = "all"
    return Bornology(kind, ambient)


def bornology_tensor(b1: Bornology, b2: Bornology) -> Bornology:
    amb = PairSet(b1.ambient, b2.ambient)
    if b1.bounds_everything() and b2.bounds_everything():
        return Bornology("all", amb)
    if b1.only_finite() and b2.only_finite():
        return Bornology("finite", amb)
    return Bornology("product", amb, (b1, b2))


# ---------------------------------------------------------------- spaces

@dataclass(frozen=True)
class BornCoarseSpace:
    ambient: AmbientSet
    action: GAction
    coarse: CoarseStructure
    born: Bornology
    name: str = field(default="", compare=False)

    @property
    def group(self):
        return self.action.group

    def __hash__(self):
        return hash((self.ambient, self.coarse.leaves, self.born.kind))

    def __str__(self):
        return self.name or f"Space({self.ambient})"


def compat_check(space, sample_budget: int = 8) -> dict:
    """Check that thickenings of bounded sets by entourages stay bounded.

    Structured bornologies are certified symbolically: every leaf entourage
    thickens finite sets to finite sets and a product of bounded sets thickens
    componentwise.  Basis bornologies are checked on every basic set against
    ``cofinal(0 .. sample_budget-1)``.
    """
    born, C = space.born, space.coarse
    if born.kind != "basis":
        return {"compatible": True, "method": "symbolic", "checked": 0}
    checked = 0
    for i in range(sample_budget):
        U = C.cofinal(i)
        for B in born.basis:
            T = ent_thicken(U, B)
            checked += 1
            if not born.contains_finite(T):
                raise NotCompatible(f"cofinal({i})[{sort_points(B)}] is not bounded",
                                    witness={"index": i, "bounded_set": sort_points(B)})
    return {"compatible": True, "method": "sampled", "checked": checked}


def make_space(ambient, action, generators=(), born="finite", name="",
               search_bound=DEFAULT_SEARCH_BOUND) -> BornCoarseSpace:
    """Build and validate a space on a finite set or the integer line."""
    if action.ambient != ambient:
        raise ShapeError("action lives on a different set")
    C = coarse_structure(ambient, action, generators, search_bound)
    B = born if isinstance(born, Bornology) else bornology(born, ambient)
    space = BornCoarseSpace(ambient, action, C, B, name)
    compat_check(space)
    if B.kind == "basis":
        points = ambient.points if isinstance(ambient, FiniteSet) else None
        if points is None or not B.contains_finite(points):
            raise ShapeError("a bornology must contain every finite subset")
        space = BornCoarseSpace(ambient, action, C, Bornology("all", ambient), name)
    return space


def space_tensor(X: BornCoarseSpace, Y: BornCoarseSpace, name="") -> BornCoarseSpace:
    if X.group != Y.group:
        raise ShapeError("tensor of spaces over different groups")
    amb = PairSet(X.ambient, Y.ambient)
    act = PairAction(X.group, amb, X.action, Y.action)
    return BornCoarseSpace(amb, act, product_structure(X.coarse, Y.coarse),
                           bornology_tensor(X.born, Y.born),
                           name or (f"({X.name}*{Y.name})" if X.name and Y.name else ""))


def space_factors(X: BornCoarseSpace):
    """Recover ``(X1, X2)`` from a tensor space ``X1 (x) X2``."""
    if not isinstance(X.ambient, PairSet):
        raise ShapeError("not a tensor space")
    out = []
    for k, amb in enumerate((X.ambient.left, X.ambient.right)):
        act = X.action.left if k == 0 else X.action.right
        leaves = tuple((p[1:], ls) for p, ls in X.coarse.leaves if p[0] == k)
        C = CoarseStructure(amb, leaves, (), X.coarse.search_bound)
        if X.born.kind == "product":
            B = X.born.parts[k]
        else:
            B = bornology(X.born.kind, amb) if not isinstance(amb, PairSet) else Bornology(
                "all" if X.born.kind == "all" or amb.is_finite() else X.born.kind, amb)
        out.append(BornCoarseSpace(amb, act, C, B))
    return tuple(out)


# -- the fixture spaces

def point_space(group) -> BornCoarseSpace:
    return make_space(POINT_SET, trivial_action(group, POINT_SET), (), "all", name="pt")


def finite_space(points, action, classes=None, name="") -> BornCoarseSpace:
    """Finite space whose coarse structure glues each listed class (default: everything)."""
    amb = action.ambient
    if classes is None:
        gens = (Whole(amb),)
    else:
        gens = (FinitePairs(frozenset(p for c in classes for p in itertools.product(c, c))),)
    return make_space(amb, action, gens, "all", name=name)


def metric_line(action, born="finite", name="") -> BornCoarseSpace:
    return make_space(IntLine(), action, (MetricBall(1),), born, name=name or "Zmetric")


def discrete_line(action, born="finite", name="") -> BornCoarseSpace:
    return make_space(IntLine(), action, (Diagonal(),), born, name=name or "Zdiscrete")
