"""Acceptance criteria, each run at its stated size and tolerance.

Every test records one ``criterion N: PASS|FAIL ...`` line; the lines are
printed at the end of the pytest run (see ``conftest.py``) and when this file
is executed directly.
"""

import os
import random
import sys

import pytest

from coarsemon.additive import ShiftCat, check_strictness
from coarsemon.errors import NotProper
from coarsemon.generators import fixture_space, get_group
from coarsemon.maps import Proj1, morphism_check
from coarsemon.coarse import space_tensor
from coarsemon.rings import parse_ring
from coarsemon.suites import (SUITES, Context, _rng, build_report, run_suite, strip_timing)

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
from golden_cases import GOLDEN_CASES, dump  # noqa: E402

INSTANCES = 200
ORACLE_INSTANCES = 100
LAW_SECONDS = 60.0
GOLDEN = os.path.join(os.path.dirname(os.path.abspath(__file__)), "golden")

RESULTS = []


def record(n, ok, text):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}"
    RESULTS.append(line)
    print(line)
    return ok


def _summary(report, laws=None):
    rows = [law for law in report["laws"] if laws is None or law["law"] in laws]
    return ", ".join(f"{r['law']} {r['pass']}/{r['instances']} ({r['wall_time']:.1f}s)" for r in rows), rows


def _clean(rows, n):
    return all(r["instances"] >= n and r["fail"] == 0 and r["unknown"] == 0 for r in rows)


def _coverage(suite, law, ctx):
    """Instance kinds and space shapes drawn by a law's generator."""
    L = next(L for L in SUITES[suite] if L.name == law)
    insts, shapes = set(), set()
    for i in range(ctx.instances):
        case = L.make(ctx, _rng(ctx.seed, suite, law, i), i)
        for v in case.values():
            insts.add(v.inst.name)
            shapes.add(v.space.name)
    return insts, shapes


def test_criterion_1_coherence():
    ctx = Context(seed=0, instances=INSTANCES)
    laws = ("pentagon", "triangle", "inverse_relation", "hexagon")
    rep = run_suite("coherence", ctx, laws=laws)
    text, rows = _summary(rep)
    insts, shapes = set(), set()
    for law in laws:
        a, b = _coverage("coherence", law, ctx)
        insts |= a
        shapes |= b
    required = {"MatCat(Z/2)", "MatCat(Z)", "MatCat(Q)", "ShiftCat(Z2,Z)"}
    has_line = any(s in shapes for s in ("zmetric", "zdiscrete"))
    has_tensor = any("*" in s for s in shapes)
    fast = all(r["wall_time"] <= LAW_SECONDS for r in rows)
    covered = required <= insts and len(shapes) >= 4 and has_line and has_tensor
    ok = _clean(rows, INSTANCES) and covered and fast
    record(1, ok, f"coherence: {text}; {len(insts)} additive instances incl. {sorted(required & insts)}, {len(shapes)} shapes")
    assert _clean(rows, INSTANCES), rows
    assert covered, (sorted(insts), sorted(shapes))
    assert fast, [(r["law"], r["wall_time"]) for r in rows]


def _finite_shape_kinds(f):
    pts = list(f.src.ambient.enumerate()) if f.src.ambient.is_finite() else None
    if pts is None:
        return set()
    image = {f(x) for x in pts}
    kinds = set()
    if len(image) < len(pts):
        kinds.add("non-injective")
    if f.dst.ambient.is_finite() and image != set(f.dst.ambient.enumerate()):
        kinds.add("non-surjective")
    return kinds


def test_criterion_2_fibration():
    ctx = Context(seed=0, instances=INSTANCES)
    rep = run_suite("fibration", ctx)
    text, rows = _summary(rep)
    L = next(L for L in SUITES["fibration"] if L.name == "exchange_iso")
    kinds = set()
    for i in range(INSTANCES):
        case = L.make(ctx, _rng(0, "fibration", "exchange_iso", i), i)
        kinds |= _finite_shape_kinds(case["f"]) | _finite_shape_kinds(case["g"])
    ok = _clean(rows, INSTANCES) and kinds == {"non-injective", "non-surjective"}
    record(2, ok, f"fibration: {text}; exchange maps include {sorted(kinds)}")
    assert _clean(rows, INSTANCES), rows
    assert kinds == {"non-injective", "non-surjective"}


def test_criterion_3_oracle():
    ctx = Context(seed=0, instances=ORACLE_INSTANCES)
    rep = run_suite("oracle", ctx, laws=("oracle_composition", "oracle_pushforward", "oracle_tensor"))
    text, rows = _summary(rep)
    ok = _clean(rows, ORACLE_INSTANCES)
    record(3, ok, f"oracle (exact): {text}")
    assert ok, rows


def test_criterion_4_category():
    ctx = Context(seed=0, instances=INSTANCES)
    rep = run_suite("category", ctx)
    text, rows = _summary(rep)
    ok = _clean(rows, INSTANCES) and len(rows) == 6
    record(4, ok, f"category: {text}")
    assert ok, rows


def test_criterion_5_negative():
    ctx = Context(seed=0, instances=INSTANCES)
    rep = run_suite("negative", ctx)
    text, rows = _summary(rep)
    Z = fixture_space("zmetric", "trivial")
    try:
        morphism_check(Proj1(), space_tensor(Z, Z), Z)
        proj = False
    except NotProper:
        proj = True
    ok = _clean(rows, INSTANCES) and len(rows) == 6 and proj
    record(5, ok, f"negative (each planted violation raises its error class): {text}; "
                  f"Proj1 on Z*Z rejected as NotProper: {proj}")
    assert ok, rows


def test_criterion_6_strictness():
    pairs = 0
    for gname in ("Z2", "Z3"):
        G = get_group(gname)
        for ring in ("Z", "Q", "Z/2", "Z/3"):
            n = check_strictness(ShiftCat(G, parse_ring(ring)), random.Random(0), samples=5, max_rank=3)
            assert n == 5 * len(G) ** 2
            pairs += n
    rep = run_suite("strictness", Context(seed=0, instances=INSTANCES))
    text, rows = _summary(rep)
    ok = _clean(rows, INSTANCES)
    record(6, ok, f"strictness: every (g, h) in Z/2 and Z/3 on ShiftCat, {pairs} direct checks; {text}")
    assert ok, rows


def test_criterion_7_determinism():
    ctx = Context(seed=0, instances=10)
    names = list(SUITES)
    first = strip_timing(build_report(names, ctx))
    second = strip_timing(build_report(names, Context(seed=0, instances=10)))
    same = dump(first) == dump(second)
    other = strip_timing(build_report(["coherence"], Context(seed=1, instances=10)))
    differs = dump(other) != dump(strip_timing(build_report(["coherence"], ctx)))
    golden = {}
    for name, build in GOLDEN_CASES.items():
        with open(os.path.join(GOLDEN, name)) as fh:
            golden[name] = fh.read() == dump(build())
    ok = same and differs and all(golden.values())
    record(7, ok, f"determinism: identical reports for equal seeds: {same}; "
                  f"golden files byte-exact: {sum(golden.values())}/{len(golden)}")
    assert same and differs
    assert all(golden.values()), golden


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
