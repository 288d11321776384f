"""
Command-line front end.

    crbuild build --geometry A2:p=2 --out building.json
    crbuild subcomplex building.json --generator hull:0,20 --out omega.json
    crbuild classify building.json omega.json --out verdict.json --trace
    crbuild selftest --scope quick
    crbuild export-dot building.json --subcomplex omega.json --out graph.dot

classify exits 0 for a CR verdict, 1 for a centre, 2 for inconclusive;
other errors exit 3.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import suites
from .building import Building, assemble
from .convexity import ConvexChamberSubcomplex, convex_hull, fixed_subcomplex, is_convex
from .coxeter import build_weyl, parse_diagram
from .crengine import classify
from .errors import BuildingError, NotConvex, ParseError
from .families import subcomplex_family
from .geometries import build_geometry
from .gf import parse_matrix
from .persist import (
    building_from_json,
    building_hash,
    building_to_json,
    dumps,
    load_building,
    load_subcomplex,
    subcomplex_to_json,
    to_dot,
)

ERROR_EXIT = 3


@dataclass
class RunConfig:
    command: str
    geometry: str | None = None
    seed: int = 0
    out: str | None = None
    inputs: list[str] = field(default_factory=list)
    generator: str | None = None
    scope: str = "quick"
    exhaustive: bool = False
    trace: bool = False
    inject_fault: bool = False


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# ------------------------------------------------------------------ commands

def cmd_build(cfg: RunConfig) -> int:
    b = build_geometry(cfg.geometry)
    payload = building_to_json(b, cfg.geometry)
    _write(cfg.out, dumps(payload))
    print(f"built {cfg.geometry}: {b.n} chambers, hash {payload['hash'][:12]}", file=sys.stderr)
    return 0


def parse_generator(b: Building, text: str) -> ConvexChamberSubcomplex:
    """hull:<ids> | star:<rep>/<types> | fixed:<matrix>;<matrix>..."""
    kind, _, arg = text.partition(":")
    try:
        if kind == "hull":
            ids = [int(x) for x in arg.split(",") if x.strip()]
            return convex_hull(b, ids)
        if kind == "star":
            rep, _, types = arg.partition("/")
            J = [int(t) for t in types.split(",") if t.strip()]
            return ConvexChamberSubcomplex(b, b.simplex(int(rep), J).chamber_set)
        if kind == "fixed":
            if b.geometry is None:
                raise ParseError("fixed subcomplexes need a flag geometry")
            mats = [parse_matrix(m, b.geometry.p) for m in arg.split(";") if m.strip()]
            return fixed_subcomplex(b, mats)
    except ValueError as exc:
        raise ParseError(f"bad generator {text!r}: {exc}") from exc
    raise ParseError(f"unknown generator {text!r}; use hull:, star: or fixed:")


def cmd_subcomplex(cfg: RunConfig) -> int:
    b = load_building(cfg.inputs[0])
    omega = parse_generator(b, cfg.generator)
    if not is_convex(b, omega.chambers):
        raise NotConvex("generated chamber set is not convex")
    _write(cfg.out, dumps(subcomplex_to_json(omega, building_hash(b), cfg.generator)))
    print(f"subcomplex {cfg.generator}: {len(omega)} chambers", file=sys.stderr)
    return 0


def summarize(verdict, omega: ConvexChamberSubcomplex) -> str:
    b = omega.building
    if verdict.kind == "CR":
        return (f"CR: all {len(verdict.witness)} simplices of Omega ({len(omega)} chambers) "
                f"have verified opposites in Omega")
    if verdict.centre is not None:
        c = verdict.centre
        sub = ""
        if b.geometry is not None:
            sub = " " + ",".join(b.geometry.subspace(c.rep, min(c.type)).serialize())
        fixed = sum(e["fixes_centre"] for e in verdict.evidence)
        scope = "all" if verdict.evidence_exhaustive else "sampled"
        head = "Centre" if verdict.kind == "Centre" else "Inconclusive"
        text = (f"{head}: vertex of type {sorted(c.type)} <{sub.strip()}>, fixed by "
                f"{fixed}/{len(verdict.evidence)} stabilizing automorphisms ({scope})")
        if verdict.reason:
            text += f"; {verdict.reason}"
        return text
    return f"{verdict.kind}: {verdict.reason}"


def cmd_classify(cfg: RunConfig) -> int:
    b = load_building(cfg.inputs[0])
    omega = load_subcomplex(cfg.inputs[1], b)
    verdict = classify(omega, seed=cfg.seed)
    out = {"building_hash": building_hash(b), "omega": omega.sorted_chambers,
           "verdict": verdict.to_json(b, trace=cfg.trace), "summary": summarize(verdict, omega)}
    _write(cfg.out, dumps(out))
    print(out["summary"], file=sys.stderr if cfg.out in (None, "-") else sys.stdout)
    return verdict.exit_code


def cmd_export_dot(cfg: RunConfig) -> int:
    b = load_building(cfg.inputs[0])
    marked = ()
    if len(cfg.inputs) > 1 and cfg.inputs[1]:
        marked = load_subcomplex(cfg.inputs[1], b).chambers
    _write(cfg.out, to_dot(b, marked))
    return 0


# ------------------------------------------------------------------ selftest

def _round_trip(b: Building, name: str) -> suites.SuiteResult:
    r = suites.SuiteResult(f"roundtrip[{name}]")
    payload = building_to_json(b, name)
    again = building_from_json(json.loads(dumps(payload)))
    r.check(again.panels == b.panels, "panel partitions differ after reload")
    r.check(dumps(building_to_json(again, name)) == dumps(payload), "JSON differs after reload")
    sources = b.chambers if b.n <= 400 else b.sample_sources(32)
    for x in sources:
        r.check(np.array_equal(again.delta_row(x), b.delta_row(x)), f"delta row {x} differs")
    return r


def _sampled_axioms(b: Building, spec: str, seed: int) -> suites.SuiteResult:
    r = suites.SuiteResult(f"axioms[{spec}]", notes={"sources": "sampled"})
    try:
        b.validate(b.sample_sources(64, seed))
        r.check(True, "")
    except BuildingError as exc:
        r.check(False, f"{type(exc).__name__}: {exc}")
    return r


def _corrupted(spec: str) -> suites.SuiteResult:
    """Negative control: swap one chamber between two panels of type 1."""
    r = suites.SuiteResult(f"axioms[{spec} corrupted]")
    b = build_geometry(spec)
    panels = {i: [list(block) for block in b.panels[i]] for i in b.types}
    first, second = panels[1][0], panels[1][1]
    first[-1], second[-1] = second[-1], first[-1]
    try:
        assemble(b.weyl, {i: [tuple(x) for x in blocks] for i, blocks in panels.items()})
        r.check(True, "")
    except BuildingError as exc:
        r.check(False, f"{type(exc).__name__}: {exc}")
    return r


def _building_suites(spec: str, seed: int, limit: int | None, family_triples: int = 200,
                     family_cap: int | None = None) -> list[suites.SuiteResult]:
    b = build_geometry(spec)
    out = [suites.axiom_suite(b, spec) if b.n <= 1000 else _sampled_axioms(b, spec, seed)]
    sources = None if limit is None else b.sample_sources(32, seed)
    out.append(suites.metric_suite(b, spec, sources))
    out.append(suites.gate_suite(b, spec, sources))
    out.append(suites.opposition_suite(b, spec))
    out.append(suites.lemma_suite(b, spec, limit=limit, seed=seed))
    out.append(suites.corollary_suite(b, spec, limit=None if limit is None else 10, seed=seed))
    if b.n <= 60:
        out.append(suites.transfer_suite(b, spec))
    whole = ConvexChamberSubcomplex(b, frozenset(b.chambers))
    out.append(suites.construction_suite(b, spec, whole))
    family = subcomplex_family(b, seed=seed, triples=family_triples)
    if family_cap is not None and len(family) > family_cap:
        family = family[:: max(1, len(family) // family_cap)]
    if b.n <= 60:
        out.append(suites.convexity_suite(b, spec, family))
    out.append(suites.theorem_suite(b, spec, family))
    if b.geometry is not None:
        out.append(suites.centre_suite(b, spec, family, seed=seed))
    out.append(_round_trip(b, spec))
    return out


def run_selftest(scope: str = "quick", seed: int = 0, exhaustive: bool = False,
                 inject_fault: bool = False) -> tuple[str, bool]:
    results: list[suites.SuiteResult] = []
    for d in ("A1", "A2", "A3", "B3", "C2", "D4", "I2:5"):
        results.append(suites.coxeter_suite(build_weyl(parse_diagram(d))))
    results += _building_suites("A2:p=2", seed, None)
    for spec in ("thin:A2", "thin:A3", "thin:I2:4"):
        results += _building_suites(spec, seed, None)
    if scope == "full":
        results += _building_suites("C2:p=2", seed, None)
        limit = None if exhaustive else 200
        cap = None if exhaustive else 600
        results += _building_suites("C2:p=3", seed, limit, family_cap=cap)
        results += _building_suites("A3:p=2", seed, limit, family_triples=50, family_cap=cap)
    if inject_fault:
        results.append(_corrupted("A2:p=2"))
    buf = io.StringIO()
    buf.write(f"selftest scope={scope} seed={seed} exhaustive={exhaustive}\n")
    for r in results:
        buf.write(r.line() + "\n")
        for f in r.failures:
            buf.write(f"    {f}\n")
    failed = [r for r in results if not r.ok]
    buf.write(f"{len(results)} suites, {len(failed)} failed\n")
    return buf.getvalue(), not failed


def cmd_selftest(cfg: RunConfig) -> int:
    report, ok = run_selftest(cfg.scope, cfg.seed, cfg.exhaustive, cfg.inject_fault)
    _write(cfg.out, report)
    return 0 if ok else 1


# ---------------------------------------------------------------------- main

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ERROR_EXIT, f"{self.prog}: error: {message}\n")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="crbuild", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="enumerate a geometry and write its building JSON")
    p.add_argument("--geometry", required=True, help="A2:p=2, A3:p=3, C2:p=2, thin:A3, thin:I2:4 ...")
    p.add_argument("--out")

    p = sub.add_parser("subcomplex", help="derive a convex chamber subcomplex")
    p.add_argument("building")
    p.add_argument("--generator", required=True, help="hull:<ids> | star:<rep>/<types> | fixed:<m>;<m>")
    p.add_argument("--out")

    p = sub.add_parser("classify", help="complete reducibility or centre of a subcomplex")
    p.add_argument("building")
    p.add_argument("omega")
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", action="store_true", help="include the opposite-construction trace")

    p = sub.add_parser("selftest", help="run the property suites")
    p.add_argument("--scope", choices=("quick", "full"), default="quick")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true", help="no sampling on the larger buildings")
    p.add_argument("--inject-fault", action="store_true", help="add a corrupted-building negative control")
    p.add_argument("--out")

    p = sub.add_parser("export-dot", help="write the chamber graph in DOT format")
    p.add_argument("building")
    p.add_argument("--subcomplex")
    p.add_argument("--out")
    return parser


def config_from_args(args) -> RunConfig:
    inputs = [getattr(args, k) for k in ("building", "omega", "subcomplex") if getattr(args, k, None)]
    return RunConfig(
        command=args.command,
        geometry=getattr(args, "geometry", None),
        seed=getattr(args, "seed", 0),
        out=getattr(args, "out", None),
        inputs=inputs,
        generator=getattr(args, "generator", None),
        scope=getattr(args, "scope", "quick"),
        exhaustive=getattr(args, "exhaustive", False),
        trace=getattr(args, "trace", False),
        inject_fault=getattr(args, "inject_fault", False),
    )


COMMANDS = {
    "build": cmd_build,
    "subcomplex": cmd_subcomplex,
    "classify": cmd_classify,
    "selftest": cmd_selftest,
    "export-dot": cmd_export_dot,
}


def main(argv=None) -> int:
    cfg = config_from_args(make_parser().parse_args(argv))
    try:
        return COMMANDS[cfg.command](cfg)
    except (BuildingError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return ERROR_EXIT


if __name__ == "__main__":
    sys.exit(main())
