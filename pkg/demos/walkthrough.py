"""A short tour of the checker, from a hand-written scenario to a replayed failure.

    python3 demos/walkthrough.py
"""

import json
import os
import tempfile

from coarsemon.cli import main
from coarsemon.groth import constraint_symm, groth_compose, groth_identity
from coarsemon.oracle import check_composition, check_pushforward
from coarsemon.scenario import load_scenario_file
from coarsemon.suites import planted_case, replay

HERE = os.path.dirname(os.path.abspath(__file__))
BASIC = os.path.join(HERE, "scenarios", "basic.json")
BROKEN = os.path.join(HERE, "scenarios", "broken.json")


def section(title):
    print()
    print(f"== {title}")


def main_tour():
    section("load a scenario")
    sc = load_scenario_file(BASIC)
    for kind, ids in sc.summary().items():
        print(f"  {kind:10s} {', '.join(ids)}")
    M = sc.objects["M"].obj
    print(f"  M lives on {sorted(M.support())} with fibers {[M.fiber(x) for x in sorted(M.support())]}")

    section("engine against the functorial oracle")
    phi, psi, push = (sc.morphisms[k] for k in ("phi", "psi", "push"))
    print(f"  composition psi o phi: {check_composition(phi.phi, psi.phi)} subsets agree")
    print(f"  pushforward along collapse: {check_pushforward(push.f, phi.phi)} subsets agree")

    section("symmetry squares to the identity")
    P, Q = sc.objects["M"], sc.objects["K"]
    s_pq, s_qp = constraint_symm(P, Q), constraint_symm(Q, P)
    same = groth_compose(s_qp, s_pq) == groth_identity(s_pq.src)
    print(f"  sigma_(Q,P) o sigma_(P,Q) == id: {same}")

    section("command line: check and a short suite run")
    main(["check", BASIC])
    main(["check", BROKEN])
    main(["suite", "coherence", "--seed", "3", "--instances", "5"])

    section("a planted violation, written to disk and replayed")
    cex = planted_case("off_entourage_entry", seed=0, index=0)
    print(f"  error code: {cex['error']['code']}")
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "cex.json")
        with open(path, "w") as fh:
            json.dump(cex, fh, indent=2)
        print(f"  replay in process: {replay(cex)['reproduced']}")
        main(["replay", path])


if __name__ == "__main__":
    main_tour()
