"""JSON encoding of every engine value.

Points become JSON scalars and nested lists (finite labels are never lists,
so lists decode back to pairs unambiguously).  Every encoded value is
self-contained: an object carries its space, a morphism carries its source
and target, so a counterexample file can be replayed without the generator.
"""

from __future__ import annotations

from .additive import FakeSigmaMatCat, MatCat, ShiftCat
from .coarse import (Bornology, BornCoarseSpace, CoarseStructure, Diagonal,
                     FinitePairs, LeafStructure, MetricBall, ProductEnt,
                     UnionEnt, Whole)
from .controlled import (ControlledMorphism, ControlledObject, _build_object,
                         _make, check_object, mor_check)
from .errors import ScenarioError
from .groth import GrothMorphism, GrothObject
from .groups import (AffineAction, FiniteGroup, FiniteSet, IntLine, PairAction,
                     PairSet, TableAction, group_check)
from .maps import (Affine, Compose, Const, Identity, PairMap, Pairing, Proj1,
                   Proj2, Table, morphism_check)
from .rings import Ring

FORMAT_VERSION = 1


# ---------------------------------------------------------------- points

def point_to_json(p):
    if isinstance(p, tuple):
        return [point_to_json(v) for v in p]
    return p


def point_from_json(v):
    if isinstance(v, list):
        if len(v) != 2:
            raise ScenarioError(f"pair points have two components, got {v!r}")
        return (point_from_json(v[0]), point_from_json(v[1]))
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise ScenarioError(f"bad point {v!r}")
    return v


# ---------------------------------------------------------------- groups, sets, actions

def group_to_json(G: FiniteGroup):
    return {"name": G.name, "elements": list(G.elements),
            "table": [list(r) for r in G.table], "unit": G.unit, "inverses": list(G.inverses)}


def group_from_json(d):
    els = [point_from_json(e) for e in d["elements"]]
    mult = {(a, b): els[d["table"][i][j]] for i, a in enumerate(els) for j, b in enumerate(els)}
    inv = {a: els[d["inverses"][i]] for i, a in enumerate(els)}
    return group_check(els, mult, point_from_json(d["unit"]), inv, name=d.get("name", ""))


def ambient_to_json(A):
    if isinstance(A, FiniteSet):
        return {"kind": "finite", "points": list(A.points)}
    if isinstance(A, IntLine):
        return {"kind": "intline"}
    return {"kind": "pair", "left": ambient_to_json(A.left), "right": ambient_to_json(A.right)}


def ambient_from_json(d):
    k = d.get("kind")
    if k == "finite":
        return FiniteSet(tuple(d["points"]))
    if k == "intline":
        return IntLine()
    if k == "pair":
        return PairSet(ambient_from_json(d["left"]), ambient_from_json(d["right"]))
    raise ScenarioError(f"unknown ambient kind {k!r}")


def action_to_json(a):
    if isinstance(a, TableAction):
        return {"kind": "table", "images": [list(r) for r in a.images]}
    if isinstance(a, AffineAction):
        return {"kind": "affine", "coeffs": [list(c) for c in a.coeffs]}
    return {"kind": "pair", "left": action_to_json(a.left), "right": action_to_json(a.right)}


def action_from_json(d, G, amb):
    k = d.get("kind")
    if k == "table":
        return TableAction(G, amb, tuple(tuple(r) for r in d["images"]))
    if k == "affine":
        return AffineAction(G, amb, tuple(tuple(c) for c in d["coeffs"]))
    if k == "pair":
        return PairAction(G, amb, action_from_json(d["left"], G, amb.left),
                          action_from_json(d["right"], G, amb.right))
    raise ScenarioError(f"unknown action kind {k!r}")


# ---------------------------------------------------------------- entourages and spaces

def entourage_to_json(U):
    if isinstance(U, FinitePairs):
        pairs = sorted(([point_to_json(a), point_to_json(b)] for a, b in U.pairs), key=repr)
        return {"kind": "finite_pairs", "pairs": pairs}
    if isinstance(U, Diagonal):
        return {"kind": "diagonal"}
    if isinstance(U, MetricBall):
        return {"kind": "metric_ball", "r": U.r}
    if isinstance(U, ProductEnt):
        return {"kind": "product", "left": entourage_to_json(U.left), "right": entourage_to_json(U.right)}
    if isinstance(U, UnionEnt):
        return {"kind": "union", "parts": [entourage_to_json(p) for p in U.parts]}
    if isinstance(U, Whole):
        return {"kind": "whole", "points": list(U.ambient.points)}
    raise ScenarioError(f"cannot encode entourage {U!r}")


def entourage_from_json(d, ambient=None):
    k = d.get("kind")
    if k == "finite_pairs":
        return FinitePairs(frozenset((point_from_json(a), point_from_json(b)) for a, b in d["pairs"]))
    if k == "diagonal":
        return Diagonal()
    if k == "metric_ball":
        return MetricBall(int(d["r"]))
    if k == "product":
        return ProductEnt(entourage_from_json(d["left"]), entourage_from_json(d["right"]))
    if k == "union":
        return UnionEnt(tuple(entourage_from_json(p) for p in d["parts"]))
    if k == "whole":
        return Whole(FiniteSet(tuple(d["points"])) if "points" in d else ambient)
    raise ScenarioError(f"unknown entourage kind {k!r}")


def bornology_to_json(B):
    d = {"kind": B.kind}
    if B.kind == "product":
        d["parts"] = [bornology_to_json(p) for p in B.parts]
    if B.kind == "basis":
        d["basis"] = [sorted((point_to_json(p) for p in S), key=repr) for S in B.basis]
    return d


def bornology_from_json(d, amb):
    k = d["kind"]
    if k == "product":
        return Bornology(k, amb, (bornology_from_json(d["parts"][0], amb.left),
                                  bornology_from_json(d["parts"][1], amb.right)))
    if k == "basis":
        return Bornology(k, amb, (), tuple(frozenset(point_from_json(p) for p in S) for S in d["basis"]))
    return Bornology(k, amb)


def space_to_json(X: BornCoarseSpace):
    leaves = []
    for path, ls in X.coarse.leaves:
        classes = [sorted((point_to_json(p) for p in c), key=repr) for c in ls.classes]
        leaves.append({"path": list(path), "kind": ls.kind, "classes": classes})
    return {"name": X.name, "group": group_to_json(X.group), "ambient": ambient_to_json(X.ambient),
            "action": action_to_json(X.action), "leaves": leaves,
            "search_bound": X.coarse.search_bound, "bornology": bornology_to_json(X.born)}


def space_from_json(d):
    from .groups import subset_at
    G = group_from_json(d["group"])
    amb = ambient_from_json(d["ambient"])
    act = action_from_json(d["action"], G, amb)
    leaves = []
    for leaf in d["leaves"]:
        path = tuple(leaf["path"])
        lamb = subset_at(amb, path)
        classes = tuple(frozenset(point_from_json(p) for p in c) for c in leaf["classes"])
        leaves.append((path, LeafStructure(leaf["kind"], lamb, classes)))
    C = CoarseStructure(amb, tuple(leaves), (), int(d.get("search_bound", 256)))
    return BornCoarseSpace(amb, act, C, bornology_from_json(d["bornology"], amb), d.get("name", ""))


# ---------------------------------------------------------------- maps

def term_to_json(t):
    if isinstance(t, Identity):
        return {"map": "identity"}
    if isinstance(t, Table):
        return {"map": "table", "rows": [[point_to_json(a), point_to_json(b)] for a, b in t.rows]}
    if isinstance(t, Affine):
        return {"map": "affine", "a": t.a, "b": t.b}
    if isinstance(t, PairMap):
        return {"map": "pair_map", "left": term_to_json(t.left), "right": term_to_json(t.right)}
    if isinstance(t, Pairing):
        return {"map": "pairing", "left": term_to_json(t.left), "right": term_to_json(t.right)}
    if isinstance(t, Proj1):
        return {"map": "proj1"}
    if isinstance(t, Proj2):
        return {"map": "proj2"}
    if isinstance(t, Const):
        return {"map": "const", "point": point_to_json(t.point)}
    if isinstance(t, Compose):
        return {"map": "compose", "maps": [term_to_json(m) for m in t.maps]}
    raise ScenarioError(f"cannot encode map {t!r}")


def term_from_json(d):
    k = d.get("map")
    if k == "identity":
        return Identity()
    if k == "table":
        return Table(tuple((point_from_json(a), point_from_json(b)) for a, b in d["rows"]))
    if k == "affine":
        return Affine(int(d["a"]), int(d["b"]))
    if k == "pair_map":
        return PairMap(term_from_json(d["left"]), term_from_json(d["right"]))
    if k == "pairing":
        return Pairing(term_from_json(d["left"]), term_from_json(d["right"]))
    if k == "proj1":
        return Proj1()
    if k == "proj2":
        return Proj2()
    if k == "const":
        return Const(point_from_json(d["point"]))
    if k == "compose":
        return Compose(tuple(term_from_json(m) for m in d["maps"]))
    raise ScenarioError(f"unknown map kind {k!r}")


def space_map_to_json(f):
    return {"term": term_to_json(f.term), "src": space_to_json(f.src), "dst": space_to_json(f.dst)}


def space_map_from_json(d):
    return morphism_check(term_from_json(d["term"]), space_from_json(d["src"]), space_from_json(d["dst"]))


# ---------------------------------------------------------------- instances

def instance_to_json(inst):
    d = dict(inst.describe())
    d["group_data"] = group_to_json(inst.group)
    return d


def instance_from_json(d, group=None):
    G = group if group is not None else group_from_json(d["group_data"])
    ring = Ring.from_json(d.get("ring", {"kind": "int"}))
    kind = d.get("instance")
    if kind == "mat":
        return MatCat(ring, G)
    if kind == "fake_sigma":
        return FakeSigmaMatCat(ring, G)
    if kind == "shift":
        return ShiftCat(G, ring)
    raise ScenarioError(f"unknown instance kind {kind!r}")


# ---------------------------------------------------------------- controlled data

def object_to_json(M: ControlledObject):
    inst = M.inst
    fibers = [[point_to_json(x), [[point_to_json(k), inst.obj_to_json(A)] for k, A in atoms]]
              for x, atoms in M.fibers]
    rho = [[point_to_json(g), point_to_json(x), inst.mor_to_json(r)] for (g, x), r in M.rho]
    return {"space": space_to_json(M.space), "instance": instance_to_json(inst),
            "fibers": fibers, "rho": rho}


def object_from_json(d, check=True):
    X = space_from_json(d["space"])
    inst = instance_from_json(d["instance"], X.group)
    fibers = {point_from_json(x): tuple((point_from_json(k), inst.obj_from_json(A)) for k, A in atoms)
              for x, atoms in d["fibers"]}
    rho = {(point_from_json(g), point_from_json(x)): inst.mor_from_json(r) for g, x, r in d["rho"]}
    try:
        M = _build_object(X, inst, fibers, rho)
    except KeyError as e:
        raise ScenarioError(f"rho component missing: {e}") from None
    return check_object(M) if check else M


def cmor_to_json(phi: ControlledMorphism):
    inst = phi.inst
    return {"src": object_to_json(phi.src), "dst": object_to_json(phi.dst),
            "entries": [[point_to_json(xp), point_to_json(x), inst.mor_to_json(e)]
                        for (xp, x), e in phi.entries]}


def cmor_from_json(d, check=True):
    src, dst = object_from_json(d["src"], check), object_from_json(d["dst"], check)
    inst = src.inst
    entries = {(point_from_json(xp), point_from_json(x)): inst.mor_from_json(e) for xp, x, e in d["entries"]}
    return mor_check(src, dst, entries) if check else _make(src, dst, entries)


def gobj_to_json(P: GrothObject):
    return {"object": object_to_json(P.obj)}


def gobj_from_json(d, check=True):
    M = object_from_json(d["object"], check)
    return GrothObject(M.space, M)


def gmor_to_json(m: GrothMorphism):
    return {"src": gobj_to_json(m.src), "dst": gobj_to_json(m.dst),
            "f": space_map_to_json(m.f), "phi": cmor_to_json(m.phi)}


def gmor_from_json(d, check=True):
    src, dst = gobj_from_json(d["src"], check), gobj_from_json(d["dst"], check)
    f = space_map_from_json(d["f"])
    phi = cmor_from_json(d["phi"], check)
    return GrothMorphism(src, dst, f, phi)


# ---------------------------------------------------------------- tagged values

_ENCODERS = (
    (GrothMorphism, "groth_morphism", gmor_to_json),
    (GrothObject, "groth_object", gobj_to_json),
    (ControlledMorphism, "controlled_morphism", cmor_to_json),
    (ControlledObject, "controlled_object", object_to_json),
    (BornCoarseSpace, "space", space_to_json),
)


def value_to_json(v):
    from .maps import SpaceMorphism
    from .additive import AddInstance
    for cls, tag, enc in _ENCODERS:
        if isinstance(v, cls):
            return {"type": tag, "value": enc(v)}
    if isinstance(v, SpaceMorphism):
        return {"type": "space_map", "value": space_map_to_json(v)}
    if isinstance(v, AddInstance):
        return {"type": "instance", "value": instance_to_json(v)}
    if isinstance(v, (list, tuple)) and not isinstance(v, str):
        return {"type": "list", "value": [value_to_json(x) for x in v]}
    return {"type": "plain", "value": v}


def value_from_json(d, check=False):
    """Decode a tagged value.  ``check=False`` keeps deliberately broken data intact."""
    t, v = d["type"], d["value"]
    if t == "groth_morphism":
        return gmor_from_json(v, check)
    if t == "groth_object":
        return gobj_from_json(v, check)
    if t == "controlled_morphism":
        return cmor_from_json(v, check)
    if t == "controlled_object":
        return object_from_json(v, check)
    if t == "space":
        return space_from_json(v)
    if t == "space_map":
        return space_map_from_json(v)
    if t == "instance":
        return instance_from_json(v)
    if t == "list":
        return [value_from_json(x, check) for x in v]
    return v
