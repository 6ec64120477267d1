"""Command line runner: load a fixture file, run its check suites, report.

Exit codes keep configuration problems apart from genuine check failures:

    0  every selected check passed
    1  at least one check failed (reports carry the witnesses)
    2  fixture could not be read, parsed, or resolved into runnable checks
"""

from __future__ import annotations

import argparse
import sys
import time

from .dynsys import boundary_subsystem, free_monoid_system, path_space_system
from .errors import ConfigError, FixtureError, KGraphLabError, WitnessError
from .fixtures import SUITE_KINDS, Fixture, build_graph, parse_fixture
from .fock import RELATION_NAMES, verify_identity
from .groupoid import build_semidirect
from .reporting import CheckResult, RunReport, normalize_witness, render
from .shapes import INF, Shape


def _timed(name: str, fn) -> CheckResult:
    # configuration problems are caught before any check runs; once checks
    # are running, anything a check body raises is a failed check, not exit 2
    t0 = time.perf_counter()
    try:
        ok, witness, info = fn()
    except KGraphLabError as err:
        ok, witness, info = False, err, f"check raised {type(err).__name__}"
    return CheckResult(name, bool(ok), normalize_witness(witness),
                       info, time.perf_counter() - t0)


def _resolve_bound(options: dict, fixture: Fixture, rank: int) -> Shape:
    raw = options.get("bound", fixture.bound)
    if raw is None:
        return Shape((1,) * rank)
    if len(raw) != rank:
        raise ConfigError(f"bound {raw} has {len(raw)} coordinates, graph rank is {rank}")
    return Shape(raw)


def _require_graph(graph, suite: str):
    if graph is None:
        raise ConfigError(f"suite {suite!r} needs a graph directive in the fixture")
    return graph


# -- suites ---------------------------------------------------------------------------

def suite_validate(fixture: Fixture, graph, options: dict) -> list[CheckResult]:
    graph = _require_graph(graph, "validate")
    bound = _resolve_bound(options, fixture, graph.rank)
    t0 = time.perf_counter()
    rep = graph.validate(bound)
    elapsed = time.perf_counter() - t0
    results = []
    for check in rep.checks:
        info = ""
        if check.info:
            info = " ".join(f"{k}={v}" for k, v in sorted(check.info.items()))
        results.append(CheckResult(f"validate.{check.name}", check.ok,
                                   normalize_witness(check.witness), info, elapsed=0.0))
    results.append(CheckResult("validate.morphisms", True, None,
                               f"count={rep.morphism_count}", elapsed))
    return results


def suite_counterexample(fixture: Fixture, graph, options: dict) -> list[CheckResult]:
    letters = options.get("letters",
                          fixture.system_options.get("letters", "ab"))
    length = options.get("length",
                         fixture.system_options.get("length", 3))
    system = free_monoid_system(letters, length)

    def dc_fails():
        rep = system.check_dc()
        # this suite passes when the expected defect shows up
        return (not rep.ok) and rep.witness is not None, rep.witness, (
            f"bound={tuple(rep.bound.coords)}")

    def composite_has_no_witness():
        if len(letters) < 2:
            raise ConfigError("two distinct letters needed to stage the composite")
        forced = build_semidirect(system, force=True)
        x, y = letters[0], letters[1]
        gamma = forced.element(x, (len(x), -len(y)), y)
        eta = forced.element(y, (len(y), 0), "")
        try:
            forced.compose(gamma, eta)
        except WitnessError as err:
            return True, (err.attempted, err.search_bound), "composite rejected"
        return False, None, "composite unexpectedly accepted"

    return [
        _timed("counterexample.domain-compat-fails", dc_fails),
        _timed("counterexample.composite-without-witness", composite_has_no_witness),
    ]


def suite_fock(fixture: Fixture, graph, options: dict) -> list[CheckResult]:
    graph = _require_graph(graph, "fock")
    bound = _resolve_bound(options, fixture, graph.rank)
    relations = options.get("relations", RELATION_NAMES)
    for rel in relations:
        if rel not in RELATION_NAMES:
            raise ConfigError(
                f"unknown relation {rel!r} (known: {', '.join(RELATION_NAMES)})")
    results = []
    for rel in relations:
        def one(rel=rel):
            rep = verify_identity(graph, rel, bound)
            witness = None
            if rep.counterexamples:
                label, basis = rep.counterexamples[0][:2]
                witness = (label, repr(basis))
            return rep.ok, witness, f"checked={rep.checked}"
        results.append(_timed(f"fock.{rel}", one))
    return results


def suite_groupoid(fixture: Fixture, graph, options: dict) -> list[CheckResult]:
    graph = _require_graph(graph, "groupoid")
    bound = _resolve_bound(options, fixture, graph.rank)
    system = path_space_system(graph, bound)
    results = []

    t0 = time.perf_counter()
    dc = system.check_dc()
    results.append(CheckResult("groupoid.domain-compat", dc.ok,
                               normalize_witness(dc.witness),
                               f"bound={tuple(dc.bound.coords)}",
                               time.perf_counter() - t0))
    if not dc.ok:
        results.append(CheckResult("groupoid.axioms", False, None,
                                   "skipped: domain compatibility failed"))
        return results

    witness_bound = None
    if "witness" in options:
        witness_bound = Shape(options["witness"])
    t0 = time.perf_counter()
    try:
        G = build_semidirect(system, witness_bound=witness_bound)
        rep = G.check_axioms()
    except WitnessError as err:
        results.append(CheckResult(
            "groupoid.build", False,
            normalize_witness((err.attempted, err.search_bound)),
            "witness search exhausted", time.perf_counter() - t0))
        return results
    elapsed = time.perf_counter() - t0
    for check in rep.checks:
        results.append(CheckResult(f"groupoid.{check.name}", check.ok,
                                   normalize_witness(check.witness), "", elapsed=0.0))
    results.append(CheckResult("groupoid.census", True, None,
                               f"elements={len(G)}", elapsed))
    return results


def suite_boundary(fixture: Fixture, graph, options: dict) -> list[CheckResult]:
    graph = _require_graph(graph, "boundary")
    prefix_cap = Shape(options["prefix"]) if "prefix" in options else None
    cycle_cap = Shape(options["cycle"]) if "cycle" in options else None
    system = boundary_subsystem(graph, prefix_cap=prefix_cap, cycle_cap=cycle_cap)
    dc_bound = Shape((1,) * graph.rank)

    def commuting():
        rep = system.check_commuting()
        return rep.ok, rep.witness, f"points={len(system.carrier)}"

    def dc():
        rep = system.check_dc(dc_bound)
        return rep.ok, rep.witness, f"bound={tuple(dc_bound.coords)}"

    def never_exits():
        stuck = next((x for x in system.carrier
                      if any(c is not INF for c in system.exit_time(x).coords)), None)
        return stuck is None, stuck, f"points={len(system.carrier)}"

    return [
        _timed("boundary.commuting", commuting),
        _timed("boundary.domain-compat", dc),
        _timed("boundary.exit-infinite", never_exits),
    ]


SUITES = {
    "validate": suite_validate,
    "counterexample": suite_counterexample,
    "fock": suite_fock,
    "groupoid": suite_groupoid,
    "boundary": suite_boundary,
}

assert set(SUITES) == set(SUITE_KINDS)


# -- entry point -----------------------------------------------------------------------

def _parse_args(argv):
    parser = argparse.ArgumentParser(
        prog="kgraphlab",
        description="Run the check suites declared in a fixture file.")
    parser.add_argument("fixture", help="path to a fixture file")
    parser.add_argument("--suite", default=None,
                        help="comma separated suite names (default: as declared)")
    parser.add_argument("--bound", default=None,
                        help="override the fixture bound, e.g. 2,2")
    parser.add_argument("--relations", default=None,
                        help="comma separated relation names for the fock suite")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the fixture seed")
    parser.add_argument("--format", default="human",
                        choices=("human", "machine", "both"),
                        help="report rendering (default: human)")
    return parser.parse_args(argv)


def run_fixture(fixture: Fixture, *, suite_names=None, bound=None,
                relations=None, seed=None) -> RunReport:
    """Run the selected suites and collect every check result, in order."""
    graph = build_graph(fixture)
    declared = {s.name: s for s in fixture.suites}

    if suite_names is None:
        selected = [s.name for s in fixture.suites]
    else:
        selected = list(suite_names)
        for name in selected:
            if name not in SUITES:
                raise ConfigError(
                    f"unknown suite {name!r} (known: {', '.join(sorted(SUITES))})")
    if not selected:
        raise ConfigError("fixture declares no suites and none were selected")

    results: list[CheckResult] = []
    for name in selected:
        options = dict(declared[name].options) if name in declared else {}
        if bound is not None:
            options["bound"] = bound
        if relations is not None and name == "fock":
            options["relations"] = relations
        results.extend(SUITES[name](fixture, graph, options))

    return RunReport(fixture=fixture.name,
                     seed=seed if seed is not None else fixture.seed,
                     results=tuple(results))


def main(argv=None) -> int:
    args = _parse_args(argv if argv is not None else sys.argv[1:])
    try:
        fixture = parse_fixture(args.fixture)
        suite_names = args.suite.split(",") if args.suite else None
        bound = None
        if args.bound is not None:
            parts = args.bound.split(",")
            if not all(p.isdigit() for p in parts):
                raise ConfigError(f"malformed --bound {args.bound!r}")
            bound = tuple(int(p) for p in parts)
        relations = tuple(args.relations.split(",")) if args.relations else None
        report = run_fixture(fixture, suite_names=suite_names, bound=bound,
                             relations=relations, seed=args.seed)
    except OSError as err:
        print(f"error: cannot read fixture: {err}", file=sys.stderr)
        return 2
    except (FixtureError, ConfigError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except KGraphLabError as err:
        print(f"error: fixture does not resolve: {err}", file=sys.stderr)
        return 2

    print(render(report, args.format))
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
