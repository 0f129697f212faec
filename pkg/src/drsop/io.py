"""Text formats: instances, scenarios, assignments and CSV run reports.

Instance grammar (one record per line, ``#`` starts a comment)::

    resources <name1> ... <nameD>
    node <id> <level1> ... <levelD>
    service <id> <initial-node> <migration-cost> <level1> ... <levelD>

Scenario grammar (blocks start with ``scenario``)::

    scenario <name>
    services <first>..<last>
    nodes <id> ...
    budget_ms <int>
    strategies <id> ...
    seeds <int> ...
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, fields, replace
from importlib import resources
from typing import Iterable, Mapping, Optional

from .exceptions import ParseError
from .model import Assignment, NodeSpec, ProblemSpace, ServiceSpec, id_sort_key

__all__ = [
    "ScenarioSpec", "RunReport", "parse_instance", "format_instance",
    "parse_scenario", "parse_scenarios", "format_scenario", "write_report",
    "read_report", "parse_assignment", "format_assignment",
    "load_standard_instance", "load_standard_scenarios", "fixture_path",
]


def _records(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what}: expected an integer, got {tok!r}", lineno) from None


def _levels(toks, d: int, lineno: int, what: str) -> tuple:
    if len(toks) != d:
        raise ParseError(f"{what}: expected {d} resource levels, got {len(toks)}", lineno)
    levels = tuple(_int(t, lineno, what) for t in toks)
    if any(v < 0 for v in levels):
        raise ParseError(f"{what}: negative resource level", lineno)
    return levels


def parse_instance(text: str) -> ProblemSpace:
    kinds = None
    nodes, services = [], []
    node_ids, service_ids = set(), set()
    for lineno, toks in _records(text):
        key = toks[0]
        if kinds is None:
            if key != "resources":
                raise ParseError("first record must be 'resources'", lineno)
            kinds = tuple(toks[1:])
            if not kinds:
                raise ParseError("'resources' needs at least one kind", lineno)
            if len(set(kinds)) != len(kinds):
                raise ParseError("duplicate resource kind", lineno)
            continue
        d = len(kinds)
        if key == "resources":
            raise ParseError("'resources' may appear only once", lineno)
        elif key == "node":
            if len(toks) < 2:
                raise ParseError("node record needs an id", lineno)
            nid = toks[1]
            if nid in node_ids:
                raise ParseError(f"duplicate node id {nid!r}", lineno)
            node_ids.add(nid)
            nodes.append(NodeSpec(nid, _levels(toks[2:], d, lineno, f"node {nid}")))
        elif key == "service":
            if len(toks) < 4:
                raise ParseError("service record needs id, initial node and cost", lineno)
            sid, initial = toks[1], toks[2]
            if sid in service_ids:
                raise ParseError(f"duplicate service id {sid!r}", lineno)
            service_ids.add(sid)
            cost = _int(toks[3], lineno, f"service {sid}")
            if cost < 0:
                raise ParseError(f"service {sid}: negative migration cost", lineno)
            services.append(ServiceSpec(sid, initial, cost,
                                        _levels(toks[4:], d, lineno, f"service {sid}")))
        else:
            raise ParseError(f"unknown record {key!r}", lineno)
    if kinds is None:
        raise ParseError("missing 'resources' record")
    return ProblemSpace(kinds, nodes, services)


def format_instance(space: ProblemSpace) -> str:
    out = ["resources " + " ".join(space.kinds)]
    for n in space.nodes:
        out.append(" ".join(["node", n.id, *map(str, n.available)]))
    for s in space.services:
        out.append(" ".join(["service", s.id, s.initial_node, str(s.migration_cost),
                             *map(str, s.required)]))
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    service_range: tuple  # (first, last), inclusive
    enabled_nodes: tuple
    budget_ms: int
    strategies: tuple = ()
    seeds: tuple = ()

    def service_ids(self, space: ProblemSpace) -> list:
        """Ids of ``space`` services whose numeric value falls inside the range."""
        lo, hi = self.service_range
        return [s for s in space.service_ids if s.isdigit() and lo <= int(s) <= hi]

    def scaled(self, factor: float) -> "ScenarioSpec":
        return replace(self, budget_ms=max(1, round(self.budget_ms * factor)))


_SCENARIO_KEYS = ("services", "nodes", "budget_ms", "strategies", "seeds")


def parse_scenarios(text: str) -> list:
    blocks = []
    current = None
    for lineno, toks in _records(text):
        key, args = toks[0], toks[1:]
        if key == "scenario":
            if len(args) != 1:
                raise ParseError("scenario needs exactly one name", lineno)
            current = {"name": args[0], "_line": lineno}
            blocks.append(current)
            continue
        if current is None:
            raise ParseError("record outside a 'scenario' block", lineno)
        if key not in _SCENARIO_KEYS:
            raise ParseError(f"unknown scenario record {key!r}", lineno)
        if key in current:
            raise ParseError(f"duplicate {key!r} record", lineno)
        if key == "services":
            if len(args) != 1 or ".." not in args[0]:
                raise ParseError("services expects <first>..<last>", lineno)
            a, b = args[0].split("..", 1)
            lo, hi = _int(a, lineno, "services"), _int(b, lineno, "services")
            if lo > hi:
                raise ParseError("empty service range", lineno)
            current[key] = (lo, hi)
        elif key == "nodes":
            if not args:
                raise ParseError("empty node list", lineno)
            if len(set(args)) != len(args):
                raise ParseError("duplicate node in list", lineno)
            current[key] = tuple(args)
        elif key == "budget_ms":
            if len(args) != 1:
                raise ParseError("budget_ms expects one integer", lineno)
            budget = _int(args[0], lineno, "budget_ms")
            if budget <= 0:
                raise ParseError("budget_ms must be positive", lineno)
            current[key] = budget
        elif key == "strategies":
            current[key] = tuple(args)
        else:
            current[key] = tuple(_int(a, lineno, "seeds") for a in args)
    specs = []
    for b in blocks:
        for key in ("services", "nodes", "budget_ms"):
            if key not in b:
                raise ParseError(f"scenario {b['name']!r} lacks {key!r}", b["_line"])
        specs.append(ScenarioSpec(b["name"], b["services"], b["nodes"], b["budget_ms"],
                                  b.get("strategies", ()), b.get("seeds", ())))
    return specs


def parse_scenario(text: str) -> ScenarioSpec:
    specs = parse_scenarios(text)
    if len(specs) != 1:
        raise ParseError(f"expected one scenario, found {len(specs)}")
    return specs[0]


def format_scenario(spec: ScenarioSpec) -> str:
    lo, hi = spec.service_range
    lines = [f"scenario {spec.name}", f"services {lo}..{hi}",
             "nodes " + " ".join(spec.enabled_nodes), f"budget_ms {spec.budget_ms}"]
    if spec.strategies:
        lines.append("strategies " + " ".join(spec.strategies))
    if spec.seeds:
        lines.append("seeds " + " ".join(map(str, spec.seeds)))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RunReport:
    scenario: str
    strategy: str
    seed: int
    best_cost: Optional[int]  # None when no stable assignment was found
    stable: bool
    restarts: int
    candidates_examined: int
    unique_candidates: int
    feasibility_checks: int
    cache_hits: int
    wall_ms: int
    incomplete: bool = False


REPORT_COLUMNS = tuple(f.name for f in fields(RunReport))


def _cell(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "1" if value else "0"
    return str(value)


def write_report(rows: Iterable[RunReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for row in rows:
        writer.writerow([_cell(getattr(row, c)) for c in REPORT_COLUMNS])
    return buf.getvalue()


def read_report(text: str) -> list:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != REPORT_COLUMNS:
        raise ParseError("unexpected report header", 1)
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        if len(rec) != len(REPORT_COLUMNS):
            raise ParseError("wrong number of columns", lineno)
        v = dict(zip(REPORT_COLUMNS, rec))
        try:
            rows.append(RunReport(
                scenario=v["scenario"], strategy=v["strategy"], seed=int(v["seed"]),
                best_cost=None if v["best_cost"] == "none" else int(v["best_cost"]),
                stable=v["stable"] == "1",
                restarts=int(v["restarts"]),
                candidates_examined=int(v["candidates_examined"]),
                unique_candidates=int(v["unique_candidates"]),
                feasibility_checks=int(v["feasibility_checks"]),
                cache_hits=int(v["cache_hits"]), wall_ms=int(v["wall_ms"]),
                incomplete=v["incomplete"] == "1",
            ))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    return rows


def parse_assignment(text: str) -> Assignment:
    placement = {}
    for lineno, toks in _records(text):
        if len(toks) != 2:
            raise ParseError("expected '<service-id> <node-id>'", lineno)
        if toks[0] in placement:
            raise ParseError(f"service {toks[0]!r} assigned twice", lineno)
        placement[toks[0]] = toks[1]
    return Assignment(placement)


def format_assignment(mu: Mapping) -> str:
    return "".join(f"{s} {mu[s]}\n" for s in sorted(mu, key=id_sort_key))


_FIXTURES = {
    "standard": "standard.drsop",
    "standard-augmented": "standard_augmented.drsop",
    "standard-ladder": "standard_ladder.scn",
}


def fixture_path(name: str):
    """Path-like handle of a bundled fixture by name (see ``_FIXTURES``)."""
    try:
        fname = _FIXTURES[name]
    except KeyError:
        raise ParseError(f"unknown fixture {name!r}; known: {', '.join(_FIXTURES)}") from None
    return resources.files("drsop") / "data" / fname


def load_standard_instance(augmented: bool = False) -> ProblemSpace:
    """The bundled 8-node/60-service benchmark instance.

    With ``augmented=True`` the synthetic nodes I-L are included.
    """
    name = "standard-augmented" if augmented else "standard"
    return parse_instance(fixture_path(name).read_text(encoding="utf-8"))


def load_standard_scenarios() -> list:
    return parse_scenarios(fixture_path("standard-ladder").read_text(encoding="utf-8"))
