"""Finite groups, ambient sets and group actions.

Points are plain Python values: ``str``/``int`` labels on finite sets, ``int``
on the integer line and 2-tuples on products.  Finite labels may not be
tuples, so a tuple is always a point of a product set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from .errors import (NoIdentity, NoInverse, NotAnAction, NotAssociative,
                     NotBijective, NotClosed, ShapeError)


def order_key(value):
    """Total order on labels, integers and nested pairs (ints < strs < tuples)."""
    if isinstance(value, bool):
        raise ShapeError(f"booleans are not points: {value!r}")
    if isinstance(value, int):
        return (0, value)
    if isinstance(value, str):
        return (1, value)
    if isinstance(value, tuple):
        return (2, tuple(order_key(v) for v in value))
    raise ShapeError(f"unsupported point value {value!r}")


def sort_points(points: Iterable) -> list:
    return sorted(points, key=order_key)


# ---------------------------------------------------------------- groups

@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by its multiplication table.

    Use :func:`group_check` to build one from raw tables; the constructor
    itself does not validate.
    """

    elements: tuple
    table: tuple            # table[i][j] = index of elements[i] * elements[j]
    unit: Hashable
    inverses: tuple         # inverses[i] = index of elements[i]^-1
    name: str = ""
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {g: i for i, g in enumerate(self.elements)})

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def index(self, g):
        return self._index[g]

    def mul(self, g, h):
        return self.elements[self.table[self._index[g]][self._index[h]]]

    def inv(self, g):
        return self.elements[self.inverses[self._index[g]]]

    def is_trivial(self):
        return len(self.elements) == 1


def group_check(elements, mult, unit, inv, name="") -> FiniteGroup:
    """Validate raw group tables.

    ``mult`` maps ``(g, h)`` to ``g*h``; ``inv`` maps ``g`` to ``g^-1``.
    Checks run in the order closure, identity, inverses, associativity.
    """
    elements = tuple(elements)
    if len(set(elements)) != len(elements):
        raise NotClosed("duplicate group labels", witness=elements)
    members = set(elements)
    for g in elements:
        for h in elements:
            if (g, h) not in mult:
                raise NotClosed(f"product {g!r}*{h!r} missing", witness=(g, h))
            if mult[(g, h)] not in members:
                raise NotClosed(f"product {g!r}*{h!r} leaves the group", witness=(g, h))
        if g not in inv or inv[g] not in members:
            raise NotClosed(f"inverse of {g!r} missing", witness=g)
    if unit not in members:
        raise NoIdentity(f"unit {unit!r} is not an element", witness=unit)
    for g in elements:
        if mult[(unit, g)] != g or mult[(g, unit)] != g:
            raise NoIdentity(f"{unit!r} is not a two-sided identity", witness=g)
    for g in elements:
        if mult[(g, inv[g])] != unit or mult[(inv[g], g)] != unit:
            raise NoInverse(f"{inv[g]!r} is not an inverse of {g!r}", witness=g)
    for a, b, c in itertools.product(elements, repeat=3):
        if mult[(mult[(a, b)], c)] != mult[(a, mult[(b, c)])]:
            raise NotAssociative(f"({a!r}{b!r}){c!r} != {a!r}({b!r}{c!r})", witness=(a, b, c))
    idx = {g: i for i, g in enumerate(elements)}
    table = tuple(tuple(idx[mult[(g, h)]] for h in elements) for g in elements)
    inverses = tuple(idx[inv[g]] for g in elements)
    return FiniteGroup(elements, table, unit, inverses, name)


def cyclic_group(n: int) -> FiniteGroup:
    els = tuple(range(n))
    mult = {(a, b): (a + b) % n for a in els for b in els}
    inv = {a: (-a) % n for a in els}
    return group_check(els, mult, 0, inv, name=f"Z{n}" if n > 1 else "trivial")


def trivial_group() -> FiniteGroup:
    return cyclic_group(1)


def symmetric_group(n: int) -> FiniteGroup:
    """Permutations of ``range(n)`` labelled by strings like ``"102"``."""
    perms = list(itertools.permutations(range(n)))
    label = lambda p: "".join(map(str, p))
    els = tuple(label(p) for p in perms)
    mult, inv = {}, {}
    for p in perms:
        for q in perms:
            # (p*q)(i) = p(q(i))
            mult[(label(p), label(q))] = label(tuple(p[q[i]] for i in range(n)))
        pinv = [0] * n
        for i, pi in enumerate(p):
            pinv[pi] = i
        inv[label(p)] = label(tuple(pinv))
    return group_check(els, mult, label(tuple(range(n))), inv, name=f"S{n}")


# ---------------------------------------------------------------- ambient sets

class AmbientSet:
    """Base class of the three ambient set shapes."""

    def leaves(self, prefix=()):
        """``[(path, leaf_set)]`` for every non-pair component."""
        return [(prefix, self)]

    def is_finite(self):
        return all(isinstance(leaf, FiniteSet) for _, leaf in self.leaves())

    def check_point(self, p):
        if not self.contains(p):
            raise ShapeError(f"{p!r} is not a point of {self}", witness=p)


@dataclass(frozen=True)
class FiniteSet(AmbientSet):
    points: tuple

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if len(set(pts)) != len(pts):
            raise ShapeError("finite set labels must be distinct", witness=pts)
        for p in pts:
            if isinstance(p, (tuple, bool)) or not isinstance(p, (str, int)):
                raise ShapeError(f"finite set labels must be str or int, got {p!r}")

    def contains(self, p):
        return not isinstance(p, (tuple, bool)) and p in self.points

    def enumerate(self):
        return list(self.points)

    def __str__(self):
        return "{" + ",".join(map(str, self.points)) + "}"


@dataclass(frozen=True)
class IntLine(AmbientSet):

    def contains(self, p):
        return isinstance(p, int) and not isinstance(p, bool)

    def enumerate(self):
        raise ShapeError("the integer line is infinite")

    def __str__(self):
        return "Z"


@dataclass(frozen=True)
class PairSet(AmbientSet):
    left: AmbientSet
    right: AmbientSet

    def leaves(self, prefix=()):
        return self.left.leaves(prefix + (0,)) + self.right.leaves(prefix + (1,))

    def contains(self, p):
        return (isinstance(p, tuple) and len(p) == 2
                and self.left.contains(p[0]) and self.right.contains(p[1]))

    def enumerate(self):
        return [(a, b) for a in self.left.enumerate() for b in self.right.enumerate()]

    def __str__(self):
        return f"({self.left} x {self.right})"


POINT_SET = FiniteSet(("*",))


def component(point, path):
    for i in path:
        point = point[i]
    return point


def subset_at(ambient, path):
    for i in path:
        ambient = ambient.left if i == 0 else ambient.right
    return ambient


# ---------------------------------------------------------------- actions

class GAction:
    """Action of a finite group on an ambient set by bijections."""

    group: FiniteGroup
    ambient: AmbientSet

    def apply(self, g, x):
        raise NotImplementedError

    def is_trivial(self):
        raise NotImplementedError

    def leaf_actions(self, prefix=()):
        return [(prefix, self)]

    def translate_points(self, g, points):
        return frozenset(self.apply(g, p) for p in points)


@dataclass(frozen=True)
class TableAction(GAction):
    group: FiniteGroup
    ambient: FiniteSet
    images: tuple           # images[i][k] = act(group.elements[i])(ambient.points[k])

    def apply(self, g, x):
        return self.images[self.group.index(g)][self.ambient.points.index(x)]

    def is_trivial(self):
        return all(row == self.ambient.points for row in self.images)


@dataclass(frozen=True)
class AffineAction(GAction):
    group: FiniteGroup
    ambient: IntLine
    coeffs: tuple           # coeffs[i] = (eps, t): x -> eps*x + t

    def apply(self, g, x):
        eps, t = self.coeffs[self.group.index(g)]
        return eps * x + t

    def is_trivial(self):
        return all(c == (1, 0) for c in self.coeffs)


@dataclass(frozen=True)
class PairAction(GAction):
    group: FiniteGroup
    ambient: PairSet
    left: GAction
    right: GAction

    def apply(self, g, x):
        return (self.left.apply(g, x[0]), self.right.apply(g, x[1]))

    def is_trivial(self):
        return self.left.is_trivial() and self.right.is_trivial()

    def leaf_actions(self, prefix=()):
        return self.left.leaf_actions(prefix + (0,)) + self.right.leaf_actions(prefix + (1,))


def action_check(group: FiniteGroup, ambient: AmbientSet, act) -> GAction:
    """Validate an action given in raw form and return it.

    ``act`` is ``{g: {x: gx}}`` on a finite set, ``{g: (eps, t)}`` on the
    integer line and a pair of already validated actions on a product.
    """
    if isinstance(ambient, FiniteSet):
        rows = []
        for g in group:
            if g not in act:
                raise NotAnAction(f"no table for {g!r}", witness=(g,))
            m = act[g]
            row = tuple(m.get(x) if isinstance(m, Mapping) else m[k]
                        for k, x in enumerate(ambient.points))
            for y in row:
                if not ambient.contains(y):
                    raise NotBijective(f"act({g!r}) leaves the set", witness=(g,))
            if len(set(row)) != len(row):
                raise NotBijective(f"act({g!r}) is not injective", witness=(g,))
            rows.append(row)
        action = TableAction(group, ambient, tuple(rows))
        points = ambient.points
    elif isinstance(ambient, IntLine):
        coeffs = []
        for g in group:
            if g not in act:
                raise NotAnAction(f"no affine map for {g!r}", witness=(g,))
            eps, t = act[g]
            if eps not in (1, -1):
                raise NotBijective(f"x -> {eps}x+{t} is not a bijection of Z", witness=(g,))
            coeffs.append((int(eps), int(t)))
        action = AffineAction(group, ambient, tuple(coeffs))
        # composition is checked on coefficients, so no sample points needed
        for g in group:
            for h in group:
                e1, t1 = action.coeffs[group.index(g)]
                e2, t2 = action.coeffs[group.index(h)]
                if (e1 * e2, e1 * t2 + t1) != action.coeffs[group.index(group.mul(g, h))]:
                    raise NotAnAction(f"act({g!r})act({h!r}) != act({g!r}{h!r})", witness=(g, h, None))
        if action.coeffs[group.index(group.unit)] != (1, 0):
            raise NotAnAction("unit does not act as the identity", witness=(group.unit, group.unit, None))
        return action
    elif isinstance(ambient, PairSet):
        left, right = act
        if left.group != group or right.group != group:
            raise NotAnAction("component actions use a different group")
        if left.ambient != ambient.left or right.ambient != ambient.right:
            raise ShapeError("component actions do not match the product factors")
        return PairAction(group, ambient, left, right)
    else:
        raise ShapeError(f"unknown ambient set {ambient!r}")

    for x in points:
        if action.apply(group.unit, x) != x:
            raise NotAnAction("unit does not act as the identity", witness=(group.unit, group.unit, x))
    for g in group:
        for h in group:
            gh = group.mul(g, h)
            for x in points:
                if action.apply(g, action.apply(h, x)) != action.apply(gh, x):
                    raise NotAnAction(f"act({g!r})act({h!r}) != act({g!r}{h!r})", witness=(g, h, x))
    return action


def trivial_action(group: FiniteGroup, ambient: AmbientSet) -> GAction:
    if isinstance(ambient, FiniteSet):
        return TableAction(group, ambient, tuple(ambient.points for _ in group))
    if isinstance(ambient, IntLine):
        return AffineAction(group, ambient, tuple((1, 0) for _ in group))
    return PairAction(group, ambient, trivial_action(group, ambient.left),
                      trivial_action(group, ambient.right))


def orbit(action: GAction, point) -> frozenset:
    action.ambient.check_point(point)
    return frozenset(action.apply(g, point) for g in action.group)


def stabilizer(action: GAction, point) -> list:
    return [g for g in action.group if action.apply(g, point) == point]


def diagonal_action(action: GAction) -> PairAction:
    return PairAction(action.group, PairSet(action.ambient, action.ambient), action, action)


def orbit_representatives(action: GAction, points) -> list:
    """One point per orbit meeting ``points``, smallest in the point order."""
    seen, reps = set(), []
    for p in sort_points(points):
        if p in seen:
            continue
        reps.append(p)
        seen |= orbit(action, p)
    return reps
