"""Declarative scenario documents.

A scenario names groups, spaces, additive instances, maps, objects and
morphisms by id and wires them together by reference.  Loading happens in
two stages: schema validation plus reference resolution (failures are
:class:`ScenarioError`), then the ordinary validators on every declared
value (failures keep their own error class).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from importlib import resources

import jsonschema

from .additive import FakeSigmaMatCat, MatCat, ShiftCat
from .coarse import space_tensor
from .controlled import obj_check
from .errors import ScenarioError
from .generators import Generator, fixture_space, get_group
from .groth import GrothObject, groth_from_entries
from .maps import identity_morphism, morphism_check
from .rings import Matrix, Ring
from .serialize import FORMAT_VERSION, point_from_json, term_from_json


def load_schema(name="scenario"):
    text = resources.files("coarsemon").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


@dataclass
class Scenario:
    doc: dict
    groups: dict = field(default_factory=dict)
    spaces: dict = field(default_factory=dict)
    instances: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    objects: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)

    @property
    def seed(self):
        return self.doc.get("seed", 0)

    def summary(self):
        return {k: sorted(getattr(self, k)) for k in
                ("groups", "spaces", "instances", "maps", "objects", "morphisms")}


def _ref(table, key, kind, owner):
    if key not in table:
        raise ScenarioError(f"{owner} refers to unknown {kind} {key!r}", witness={"ref": key})
    return table[key]


def _unique(sc, kind, ident):
    for k in ("groups", "spaces", "instances", "maps", "objects", "morphisms"):
        if ident in getattr(sc, k):
            raise ScenarioError(f"duplicate id {ident!r} ({kind} vs {k})")


def parse_matrix(inst, v):
    """Matrices are given as row lists (or per-element row lists for shift instances)."""
    if isinstance(v, dict):
        return inst.mor_from_json(v)
    if isinstance(inst, ShiftCat):
        return tuple(parse_matrix(inst._base, x) for x in v)
    rows = [list(r) for r in v]
    if not rows:
        raise ScenarioError("empty matrices need the {rows, cols, data} form")
    return Matrix.from_rows(inst.ring, rows)


def _opts(d, allowed, owner):
    extra = set(d) - set(allowed)
    if extra:
        raise ScenarioError(f"{owner}: unknown generator options {sorted(extra)}")
    return d


def _instance(spec, G):
    ring = Ring.from_json(spec.get("ring", "Z"))
    kind = spec["instance"]
    if kind == "mat":
        return MatCat(ring, G)
    if kind == "fake_sigma":
        return FakeSigmaMatCat(ring, G)
    return ShiftCat(G, ring)


def load_scenario(doc: dict) -> Scenario:
    try:
        jsonschema.validate(doc, load_schema())
    except jsonschema.ValidationError as e:
        path = "/".join(str(p) for p in e.absolute_path)
        raise ScenarioError(f"schema: {e.message} at /{path}") from None
    sc = Scenario(doc)
    gen = Generator(rng=random.Random(f"scenario:{sc.seed}"), **doc.get("budgets", {}))

    for g in doc.get("groups", []):
        _unique(sc, "group", g["id"])
        sc.groups[g["id"]] = g["name"]

    for s in doc.get("spaces", []):
        _unique(sc, "space", s["id"])
        gname = _ref(sc.groups, s["group"], "group", f"space {s['id']}")
        if "fixture" in s:
            sc.spaces[s["id"]] = fixture_space(s["fixture"], gname)
        else:
            a, b = (_ref(sc.spaces, r, "space", f"space {s['id']}") for r in s["tensor"])
            if a.group != get_group(gname) or b.group != get_group(gname):
                raise ScenarioError(f"space {s['id']}: tensor factors live over another group")
            sc.spaces[s["id"]] = space_tensor(a, b, name=s["id"])

    for d in doc.get("instances", []):
        _unique(sc, "instance", d["id"])
        gname = _ref(sc.groups, d["group"], "group", f"instance {d['id']}")
        sc.instances[d["id"]] = _instance(d, get_group(gname))

    for m in doc.get("maps", []):
        _unique(sc, "map", m["id"])
        X = _ref(sc.spaces, m["src"], "space", f"map {m['id']}")
        Y = _ref(sc.spaces, m["dst"], "space", f"map {m['id']}")
        sc.maps[m["id"]] = morphism_check(term_from_json(m["term"]), X, Y)

    for o in doc.get("objects", []):
        _unique(sc, "object", o["id"])
        X = _ref(sc.spaces, o["space"], "space", f"object {o['id']}")
        inst = _ref(sc.instances, o["instance"], "instance", f"object {o['id']}")
        if inst.group != X.group:
            raise ScenarioError(f"object {o['id']}: instance and space use different groups")
        if "generate" in o:
            M = gen.gen_object(X, inst, **_opts(o["generate"], ("max_points", "max_rank"), o["id"]))
        else:
            table = {point_from_json(x): inst.obj_from_json(A) for x, A in o["fibers"]}
            rho = {(point_from_json(g), point_from_json(x)): parse_matrix(inst, r) for g, x, r in o["rho"]}
            M = obj_check(X, inst, table, rho)
        sc.objects[o["id"]] = GrothObject(X, M)

    for m in doc.get("morphisms", []):
        _unique(sc, "morphism", m["id"])
        P = _ref(sc.objects, m["src"], "object", f"morphism {m['id']}")
        Q = _ref(sc.objects, m["dst"], "object", f"morphism {m['id']}")
        if "map" in m:
            f = _ref(sc.maps, m["map"], "map", f"morphism {m['id']}")
        else:
            if P.space != Q.space:
                raise ScenarioError(f"morphism {m['id']}: spaces differ and no map is given")
            f = identity_morphism(P.space)
        if f.src != P.space or f.dst != Q.space:
            raise ScenarioError(f"morphism {m['id']}: map does not connect the object spaces")
        if "generate" in m:
            sc.morphisms[m["id"]] = gen.gen_groth_morphism(
                P, f, Q, **_opts(m["generate"], ("radius", "density"), m["id"]))
        else:
            inst = Q.inst
            entries = {(point_from_json(xp), point_from_json(x)): parse_matrix(inst, e)
                       for xp, x, e in m["entries"]}
            sc.morphisms[m["id"]] = groth_from_entries(P, Q, f, entries, check=True)
    return sc


def load_scenario_file(path) -> Scenario:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ScenarioError(f"cannot read scenario: {e}") from None
    if not isinstance(doc, dict) or doc.get("format_version") != FORMAT_VERSION:
        raise ScenarioError(f"unsupported or missing format_version (expected {FORMAT_VERSION})")
    return load_scenario(doc)

