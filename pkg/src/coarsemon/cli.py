"""Command-line interface: ``check``, ``suite``, ``replay`` and ``oracle``.

Exit codes: 0 when everything passes, 1 when a violation was found, 2 for
usage or ingestion errors and for reports containing unknown verdicts.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import CoarsemonError, ScenarioError, UnknownSuite
from .controlled import mor_identity
from .groth import mor_tensor
from .maps import identity_morphism
from .oracle import (OracleMismatch, check_composition, check_pushforward,
                     check_pushforward_rho, check_tensor)
from .scenario import load_scenario_file
from .suites import (DEFAULT_INSTANCES, DEFAULT_SEED, SUITE_NAMES, Context,
                     build_report, replay)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SEED_ENV = "COARSEMON_SEED"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parser():
    p = _Parser(prog="coarsemon", description="Law checker for equivariant controlled objects.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="validate a scenario document")
    c.add_argument("scenario")
    c.add_argument("--report", choices=("text", "json"), default="text")

    s = sub.add_parser("suite", help="run law suites")
    s.add_argument("names", nargs="+", help=f"suite names ({', '.join(SUITE_NAMES)}) or 'all'")
    s.add_argument("--seed", type=int)
    s.add_argument("--instances", type=int)
    s.add_argument("--ring", help="restrict to one ring: Z, Q or Z/n")
    s.add_argument("--report", choices=("text", "json"), default="text")
    s.add_argument("--fake-sigma", action="store_true",
                   help="replace matrix instances by the planted identity-symmetry instance")
    s.add_argument("--scenario", help="take seed, instance count and budgets from a scenario")
    s.add_argument("--out", help="also write the JSON report to this file")
    s.add_argument("--cex-dir", help="write each counterexample to <dir>/<suite>.<law>.json")

    r = sub.add_parser("replay", help="re-run a serialized counterexample")
    r.add_argument("file")
    r.add_argument("--report", choices=("text", "json"), default="text")

    o = sub.add_parser("oracle", help="compare the matrix engine with the functorial oracle")
    o.add_argument("case", help="'random' or a scenario file with finite-space morphisms")
    o.add_argument("--seed", type=int)
    o.add_argument("--instances", type=int, default=100)
    o.add_argument("--report", choices=("text", "json"), default="text")
    return p


def _emit(args, payload, text_lines, out=None):
    out = out or sys.stdout
    if args.report == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        for line in text_lines:
            out.write(line + "\n")


def _resolve_seed(flag, scenario_seed=None):
    if flag is not None:
        return flag, "argument"
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env), f"env:{SEED_ENV}"
        except ValueError:
            raise ScenarioError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    if scenario_seed is not None:
        return scenario_seed, "scenario"
    return DEFAULT_SEED, "default"


def _exit_for(verdict):
    return {"pass": EXIT_PASS, "fail": EXIT_FAIL}.get(verdict, EXIT_USAGE)


def report_lines(report):
    lines = [f"seed {report['seed']} ({report['seed_source']}), "
             f"{report['parameters']['instances']} instances per law"]
    for s in report["suites"]:
        lines.append(f"suite {s['suite']}: {s['verdict'].upper()}")
        for law in s["laws"]:
            lines.append(f"  {law['law']:<28} pass {law['pass']:>4}  fail {law['fail']:>4}  "
                         f"unknown {law['unknown']:>3}  {law['wall_time']:.2f}s  [{law['anchor']}]")
            cex = law["counterexample"]
            if cex:
                lines.append(f"    first counterexample: instance {cex['index']}: "
                             f"{cex['error']['code']}: {cex['error']['message']}")
    lines.append(f"verdict: {report['verdict'].upper()}")
    return lines


# ---------------------------------------------------------------- subcommands

def cmd_check(args):
    sc = load_scenario_file(args.scenario)
    payload = {"format_version": 1, "kind": "check", "verdict": "pass", "declared": sc.summary()}
    counts = ", ".join(f"{len(v)} {k}" for k, v in sc.summary().items())
    _emit(args, payload, [f"{args.scenario}: OK ({counts})"])
    return EXIT_PASS


def cmd_suite(args):
    names = list(SUITE_NAMES) if args.names == ["all"] else args.names
    for n in names:
        if n not in SUITE_NAMES:
            raise UnknownSuite(f"unknown suite {n!r}; known: {', '.join(SUITE_NAMES)}")
    doc = {}
    if args.scenario:
        doc = load_scenario_file(args.scenario).doc
    seed, source = _resolve_seed(args.seed, doc.get("seed"))
    budgets = doc.get("budgets", {})
    instances = args.instances or doc.get("instances_per_law") or DEFAULT_INSTANCES
    if instances < 1:
        raise ScenarioError("--instances must be positive")
    ctx = Context(seed=seed, instances=instances, ring=args.ring, fake_sigma=args.fake_sigma, **budgets)
    report = build_report(names, ctx, seed_source=source)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.cex_dir:
        os.makedirs(args.cex_dir, exist_ok=True)
        for s in report["suites"]:
            for law in s["laws"]:
                if law["counterexample"]:
                    path = os.path.join(args.cex_dir, f"{s['suite']}.{law['law']}.json")
                    with open(path, "w") as fh:
                        json.dump(law["counterexample"], fh, indent=2, sort_keys=True)
                        fh.write("\n")
    _emit(args, report, report_lines(report))
    return _exit_for(report["verdict"])


def cmd_replay(args):
    try:
        with open(args.file) as fh:
            cex = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ScenarioError(f"cannot read counterexample: {e}") from None
    if not isinstance(cex, dict) or cex.get("kind") != "counterexample":
        raise ScenarioError("not a counterexample file")
    try:
        res = replay(cex)
    except (KeyError, TypeError, ValueError) as e:
        raise ScenarioError(f"malformed counterexample: {e}") from None
    res["recorded"] = {"verdict": cex.get("verdict"), "code": cex.get("error", {}).get("code")}
    lines = [f"{res['suite']}/{res['law']}: {res['verdict']} ({res['code']}) {res['message']}",
             f"reproduced: {'yes' if res['reproduced'] else 'no'}"]
    _emit(args, res, lines)
    return _exit_for(res["verdict"])


def _scenario_oracle(sc):
    """Oracle checks on the finite-space morphisms a scenario declares.

    Pushforward is checked along every declared map.  Composition and tensor
    are checked for morphisms over identity maps, whose controlled parts
    live between declared (point-keyed) objects.
    """
    results = []
    finite = {k: m for k, m in sorted(sc.morphisms.items())
              if m.src.space.ambient.is_finite() and m.dst.space.ambient.is_finite()}
    plain = {k: m for k, m in finite.items() if m.f == identity_morphism(m.src.space)}

    def run(name, fn, *a):
        try:
            n = fn(*a)
            results.append({"check": name, "verdict": "pass", "cases": n})
        except OracleMismatch as e:
            results.append({"check": name, "verdict": "fail", "message": str(e)})

    for k, m in finite.items():
        run(f"pushforward:{k}", check_pushforward, m.f, mor_identity(m.src.obj))
        run(f"pushforward_rho:{k}", check_pushforward_rho, m.f, m.src.obj)
    for k, m in plain.items():
        for k2, m2 in plain.items():
            if m.phi.dst == m2.phi.src:
                run(f"composition:{k2}o{k}", check_composition, m.phi, m2.phi)
            if k <= k2:
                run(f"tensor:{k}x{k2}", check_tensor, m.phi, m2.phi, mor_tensor(m, m2).phi)
    return results


def cmd_oracle(args):
    if args.case == "random":
        seed, source = _resolve_seed(args.seed)
        ctx = Context(seed=seed, instances=args.instances)
        report = build_report(["oracle"], ctx, seed_source=source)
        _emit(args, report, report_lines(report))
        return _exit_for(report["verdict"])
    sc = load_scenario_file(args.case)
    results = _scenario_oracle(sc)
    verdict = "fail" if any(r["verdict"] == "fail" for r in results) else "pass"
    payload = {"format_version": 1, "kind": "oracle", "verdict": verdict, "checks": results}
    lines = [f"{r['check']}: {r['verdict']}" + (f" ({r['message']})" if "message" in r else "")
             for r in results] + [f"verdict: {verdict.upper()}"]
    _emit(args, payload, lines)
    return _exit_for(verdict)


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    handlers = {"check": cmd_check, "suite": cmd_suite, "replay": cmd_replay, "oracle": cmd_oracle}
    try:
        return handlers[args.cmd](args)
    except (ScenarioError, UnknownSuite) as e:
        print(f"error: {e.code}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CoarsemonError as e:
        print(f"violation: {e.code}: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
