"""Builders for the seed-0 golden fixtures (shared by the tests and the regeneration script)."""

import json

from coarsemon.additive import MatCat
from coarsemon.generators import Generator, fixture_space, get_group
from coarsemon.rings import integers_mod
from coarsemon.serialize import object_to_json
from coarsemon.suites import SUITE_NAMES, Context, build_report, planted_case, strip_timing


def dump(value):
    return json.dumps(value, indent=2, sort_keys=True) + "\n"


def first_object():
    X = fixture_space("whole4", "Z2")
    inst = MatCat(integers_mod(2), get_group("Z2"))
    return object_to_json(Generator(seed=0).gen_object(X, inst))


def small_report():
    return strip_timing(build_report(list(SUITE_NAMES), Context(seed=0, instances=3)))


def planted_counterexample():
    return planted_case("off_entourage_entry", seed=0, index=0)


GOLDEN_CASES = {
    "object_seed0.json": first_object,
    "report_seed0.json": small_report,
    "counterexample_seed0.json": planted_counterexample,
}
