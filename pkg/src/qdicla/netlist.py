"""Gate-level netlist IR with a line-oriented text format.

A netlist is a flat, acyclic network of library cells over single-driver
nets, plus dual-rail port pairs and named probe points.  The text format
is one directive per line:

    module <name>
    input <label> <rail1-net> <rail0-net>
    probe <label> <net>
    gate <id> <KIND> <out-net> <in-net> ...
    output <label> <rail1-net> <rail0-net>
    end

Identifiers (net ids, labels, gate ids) are drawn from
``[A-Za-z0-9_.]+``.  Files are UTF-8 with newline-terminated lines and
single spaces between tokens; lines starting with ``#`` are ignored.
The emitter is canonical: inputs in port order, probes sorted by label,
gates in topological order (stable by construction order), outputs in
port order.  Parsing an emitted netlist reproduces the same structure.
"""

from __future__ import annotations

import heapq
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

from .cells import CellKind, cell_spec

IDENT_RE = re.compile(r"[A-Za-z0-9_.]+\Z")


class NetlistError(ValueError):
    """Raised when an operation requires a structurally valid netlist."""


class ParseError(ValueError):
    """Raised on malformed netlist text; message carries the line number."""


@dataclass(frozen=True)
class GateInstance:
    gid: str
    kind: CellKind
    output: str
    inputs: tuple[str, ...]


@dataclass(frozen=True)
class PortPair:
    """A dual-rail port: one logical bit carried on two nets."""

    label: str
    rail1: str
    rail0: str

    @property
    def rails(self) -> tuple[str, str]:
        return (self.rail1, self.rail0)


class Severity(Enum):
    ERROR = "error"
    INFO = "info"


@dataclass(frozen=True)
class ValidationIssue:
    severity: Severity
    code: str
    message: str


@dataclass
class ValidationReport:
    issues: list[ValidationIssue] = field(default_factory=list)

    @property
    def errors(self) -> list[ValidationIssue]:
        return [i for i in self.issues if i.severity is Severity.ERROR]

    @property
    def infos(self) -> list[ValidationIssue]:
        return [i for i in self.issues if i.severity is Severity.INFO]

    @property
    def ok(self) -> bool:
        return not self.errors


@dataclass
class Netlist:
    """Immutable-by-convention container; treat fields as read-only."""

    name: str
    input_pairs: tuple[PortPair, ...]
    output_pairs: tuple[PortPair, ...]
    gates: tuple[GateInstance, ...]
    probes: dict[str, str] = field(default_factory=dict)

    def nets(self) -> list[str]:
        """All net ids, input rails first, then gate outputs, then strays."""
        seen: dict[str, None] = {}
        for pair in self.input_pairs:
            seen.setdefault(pair.rail1)
            seen.setdefault(pair.rail0)
        for g in self.gates:
            seen.setdefault(g.output)
        for g in self.gates:
            for n in g.inputs:
                seen.setdefault(n)
        for pair in self.output_pairs:
            seen.setdefault(pair.rail1)
            seen.setdefault(pair.rail0)
        for net in self.probes.values():
            seen.setdefault(net)
        return list(seen)

    def driver_map(self) -> dict[str, Optional[GateInstance]]:
        """net -> driving gate (None for input rails). Last writer wins;
        use validate() to detect conflicts."""
        drivers: dict[str, Optional[GateInstance]] = {}
        for pair in self.input_pairs:
            drivers[pair.rail1] = None
            drivers[pair.rail0] = None
        for g in self.gates:
            drivers[g.output] = g
        return drivers

    def structurally_equal(self, other: "Netlist") -> bool:
        return (
            self.name == other.name
            and self.input_pairs == other.input_pairs
            and self.output_pairs == other.output_pairs
            and self.probes == other.probes
            and sorted(self.gates, key=lambda g: g.gid)
            == sorted(other.gates, key=lambda g: g.gid)
        )


# ---------------------------------------------------------------------------
# validation

def validate(netlist: Netlist) -> ValidationReport:
    """Structural checks. Errors make the netlist unusable for simulation;
    infos flag harmless oddities such as dangling redundant carry rails."""
    report = ValidationReport()
    err = lambda code, msg: report.issues.append(
        ValidationIssue(Severity.ERROR, code, msg))
    info = lambda code, msg: report.issues.append(
        ValidationIssue(Severity.INFO, code, msg))

    for ident in [netlist.name, *(p.label for p in netlist.input_pairs),
                  *(p.label for p in netlist.output_pairs),
                  *(g.gid for g in netlist.gates), *netlist.probes]:
        if not IDENT_RE.match(ident):
            err("bad-identifier", f"illegal identifier {ident!r}")
    for net in netlist.nets():
        if not IDENT_RE.match(net):
            err("bad-identifier", f"illegal net id {net!r}")

    labels = [p.label for p in netlist.input_pairs] + \
             [p.label for p in netlist.output_pairs]
    for label, count in Counter(labels).items():
        if count > 1:
            err("duplicate-label", f"port label {label!r} declared {count} times")
    for gid, count in Counter(g.gid for g in netlist.gates).items():
        if count > 1:
            err("duplicate-gate", f"gate id {gid!r} declared {count} times")

    input_rails = set()
    for pair in netlist.input_pairs:
        for rail in pair.rails:
            if rail in input_rails:
                err("duplicate-driver", f"net {rail!r} appears in two input ports")
            input_rails.add(rail)

    driven = set(input_rails)
    for g in netlist.gates:
        spec = cell_spec(g.kind)
        if len(g.inputs) != spec.arity:
            err("arity", f"gate {g.gid!r}: {g.kind} expects {spec.arity} "
                         f"inputs, got {len(g.inputs)}")
        if g.output in input_rails:
            err("duplicate-driver", f"gate {g.gid!r} drives input rail {g.output!r}")
        elif g.output in driven:
            err("duplicate-driver", f"net {g.output!r} has more than one driver")
        driven.add(g.output)

    referenced = set()
    for g in netlist.gates:
        referenced.update(g.inputs)
    for pair in netlist.output_pairs:
        referenced.update(pair.rails)
    referenced.update(netlist.probes.values())
    for net in sorted(referenced - driven):
        err("undriven", f"net {net!r} is referenced but never driven")

    # cycle check over the gate graph (Kahn)
    by_output = {g.output: g for g in netlist.gates}
    indeg = {g.gid: 0 for g in netlist.gates}
    consumers: dict[str, list[str]] = {}
    for g in netlist.gates:
        for n in g.inputs:
            if n in by_output:
                indeg[g.gid] += 1
                consumers.setdefault(by_output[n].gid, []).append(g.gid)
    ready = [gid for gid, d in indeg.items() if d == 0]
    done = 0
    while ready:
        gid = ready.pop()
        done += 1
        for succ in consumers.get(gid, ()):
            indeg[succ] -= 1
            if indeg[succ] == 0:
                ready.append(succ)
    if done != len(netlist.gates):
        stuck = sorted(gid for gid, d in indeg.items() if d > 0)
        err("cycle", f"combinational cycle through gates: {', '.join(stuck)}")

    if not report.errors:
        # reachability from input rails
        fanout: dict[str, list[GateInstance]] = {}
        for g in netlist.gates:
            for n in g.inputs:
                fanout.setdefault(n, []).append(g)
        reached = set(input_rails)
        frontier = list(input_rails)
        while frontier:
            net = frontier.pop()
            for g in fanout.get(net, ()):
                if g.output not in reached:
                    reached.add(g.output)
                    frontier.append(g.output)
        for net in sorted(driven - reached):
            err("unreachable", f"net {net!r} is not reachable from any input pair")

        endpoints = set(netlist.probes.values())
        for pair in netlist.output_pairs:
            endpoints.update(pair.rails)
        for g in netlist.gates:
            net = g.output
            if net not in fanout and net not in endpoints:
                info("dangling", f"net {net!r} drives no gate and is neither "
                                 "an output nor probed")

    return report


def require_valid(netlist: Netlist) -> None:
    report = validate(netlist)
    if not report.ok:
        first = report.errors[0]
        raise NetlistError(
            f"invalid netlist {netlist.name!r}: {first.message} "
            f"({len(report.errors)} error(s) total)")


# ---------------------------------------------------------------------------
# text format

def emit_netlist(netlist: Netlist) -> str:
    """Render canonical netlist text (topologically ordered gates)."""
    lines = [f"module {netlist.name}"]
    for pair in netlist.input_pairs:
        lines.append(f"input {pair.label} {pair.rail1} {pair.rail0}")
    for label in sorted(netlist.probes):
        lines.append(f"probe {label} {netlist.probes[label]}")
    for g in _topological_gates(netlist):
        ins = " ".join(g.inputs)
        lines.append(f"gate {g.gid} {g.kind} {g.output} {ins}")
    for pair in netlist.output_pairs:
        lines.append(f"output {pair.label} {pair.rail1} {pair.rail0}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def _topological_gates(netlist: Netlist) -> list[GateInstance]:
    by_output = {g.output: g for g in netlist.gates}
    order = {g.gid: i for i, g in enumerate(netlist.gates)}
    indeg = {g.gid: 0 for g in netlist.gates}
    consumers: dict[str, list[GateInstance]] = {}
    for g in netlist.gates:
        for n in g.inputs:
            drv = by_output.get(n)
            if drv is not None and drv.gid != g.gid:
                indeg[g.gid] += 1
                consumers.setdefault(drv.gid, []).append(g)
    gates_by_id = {g.gid: g for g in netlist.gates}
    heap = [(order[gid], gid) for gid, d in indeg.items() if d == 0]
    heapq.heapify(heap)
    out: list[GateInstance] = []
    while heap:
        _, gid = heapq.heappop(heap)
        g = gates_by_id[gid]
        out.append(g)
        for succ in consumers.get(gid, ()):
            indeg[succ.gid] -= 1
            if indeg[succ.gid] == 0:
                heapq.heappush(heap, (order[succ.gid], succ.gid))
    if len(out) != len(netlist.gates):
        raise NetlistError(
            f"netlist {netlist.name!r} has a combinational cycle; "
            "cannot order gates")
    return out


def parse_netlist(text: str) -> Netlist:
    """Parse netlist text. Raises ParseError with a line number on the
    first malformed directive."""
    name: Optional[str] = None
    input_pairs: list[PortPair] = []
    output_pairs: list[PortPair] = []
    gates: list[GateInstance] = []
    probes: dict[str, str] = {}
    ended = False

    def fail(lineno: int, msg: str) -> None:
        raise ParseError(f"line {lineno}: {msg}")

    def check_ident(lineno: int, token: str, what: str) -> str:
        if not IDENT_RE.match(token):
            fail(lineno, f"illegal {what} {token!r}")
        return token

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ended:
            fail(lineno, "content after 'end'")
        tokens = line.split()
        directive = tokens[0]
        if name is None:
            if directive != "module":
                fail(lineno, "expected 'module <name>' as the first directive")
            if len(tokens) != 2:
                fail(lineno, "module takes exactly one name")
            name = check_ident(lineno, tokens[1], "module name")
            continue
        if directive == "module":
            fail(lineno, "duplicate module directive")
        elif directive in ("input", "output"):
            if len(tokens) != 4:
                fail(lineno, f"{directive} takes a label and two rail nets")
            label = check_ident(lineno, tokens[1], "port label")
            r1 = check_ident(lineno, tokens[2], "net id")
            r0 = check_ident(lineno, tokens[3], "net id")
            pair = PortPair(label, r1, r0)
            (input_pairs if directive == "input" else output_pairs).append(pair)
        elif directive == "probe":
            if len(tokens) != 3:
                fail(lineno, "probe takes a label and a net")
            label = check_ident(lineno, tokens[1], "probe label")
            if label in probes:
                fail(lineno, f"duplicate probe label {label!r}")
            probes[label] = check_ident(lineno, tokens[2], "net id")
        elif directive == "gate":
            if len(tokens) < 4:
                fail(lineno, "gate takes an id, a kind, an output net and inputs")
            gid = check_ident(lineno, tokens[1], "gate id")
            try:
                kind = CellKind(tokens[2])
            except ValueError:
                fail(lineno, f"unknown cell kind {tokens[2]!r}")
            out = check_ident(lineno, tokens[3], "net id")
            ins = tuple(check_ident(lineno, t, "net id") for t in tokens[4:])
            arity = cell_spec(kind).arity
            if len(ins) != arity:
                fail(lineno, f"{kind} expects {arity} inputs, got {len(ins)}")
            gates.append(GateInstance(gid, kind, out, ins))
        elif directive == "end":
            if len(tokens) != 1:
                fail(lineno, "end takes no arguments")
            ended = True
        else:
            fail(lineno, f"unknown directive {directive!r}")

    if name is None:
        raise ParseError("line 1: empty netlist text")
    if not ended:
        raise ParseError(f"line {len(text.splitlines())}: missing 'end'")

    # reference check: every referenced net must be declared somewhere
    declared = set()
    for pair in input_pairs:
        declared.update(pair.rails)
    declared.update(g.output for g in gates)
    for lineno_msg, nets in (
        ("gate input", [n for g in gates for n in g.inputs]),
        ("output rail", [n for p in output_pairs for n in p.rails]),
        ("probe target", list(probes.values())),
    ):
        for n in nets:
            if n not in declared:
                raise ParseError(
                    f"{lineno_msg} references undeclared net {n!r}")

    return Netlist(
        name=name,
        input_pairs=tuple(input_pairs),
        output_pairs=tuple(output_pairs),
        gates=tuple(gates),
        probes=probes,
    )


# ---------------------------------------------------------------------------
# static analysis

@dataclass(frozen=True)
class PathReport:
    """Longest register-free input-to-output path under per-kind delays."""

    depth: float
    gates: tuple[CellKind, ...]
    end_net: str

    @property
    def census(self) -> Counter:
        return Counter(self.gates)


def static_longest_path(
    netlist: Netlist,
    delays: Optional[dict[CellKind, float]] = None,
) -> PathReport:
    """Longest path from any input rail to any output rail.

    C-elements are treated as simple nodes with their stated delay; the
    path metric is the sum of gate delays, so with the default table the
    depth equals the gate count along the path.
    """
    require_valid(netlist)
    delay_of = lambda kind: (
        cell_spec(kind).delay if delays is None else delays[kind])

    arrival: dict[str, float] = {}
    pred: dict[str, tuple[GateInstance, str]] = {}
    for pair in netlist.input_pairs:
        arrival[pair.rail1] = 0.0
        arrival[pair.rail0] = 0.0
    for g in _topological_gates(netlist):
        best_net = max(g.inputs, key=lambda n: arrival[n])
        arrival[g.output] = arrival[best_net] + delay_of(g.kind)
        pred[g.output] = (g, best_net)

    out_rails = [r for p in netlist.output_pairs for r in p.rails]
    if not out_rails:
        return PathReport(0.0, (), "")
    end = max(out_rails, key=lambda n: arrival.get(n, 0.0))
    chain: list[CellKind] = []
    net = end
    while net in pred:
        g, net = pred[net]
        chain.append(g.kind)
    chain.reverse()
    return PathReport(arrival.get(end, 0.0), tuple(chain), end)


def gate_census(netlist: Netlist) -> tuple[Counter, int]:
    """Gate-kind census plus the summed transistor count."""
    census: Counter = Counter(g.kind for g in netlist.gates)
    transistors = sum(cell_spec(k).transistors * n for k, n in census.items())
    return census, transistors


def enumerate_paths(
    netlist: Netlist, src_net: str, dst_net: str, limit: int = 1000
) -> list[tuple[GateInstance, ...]]:
    """All gate chains leading from src_net to dst_net (DAG walk)."""
    fanout: dict[str, list[GateInstance]] = {}
    for g in netlist.gates:
        for n in g.inputs:
            lst = fanout.setdefault(n, [])
            if not lst or lst[-1] is not g:  # duplicated pins count once
                lst.append(g)
    paths: list[tuple[GateInstance, ...]] = []

    def walk(net: str, chain: list[GateInstance]) -> None:
        if len(paths) >= limit:
            return
        if net == dst_net and chain:
            paths.append(tuple(chain))
            return
        for g in fanout.get(net, ()):
            chain.append(g)
            walk(g.output, chain)
            chain.pop()

    walk(src_net, [])
    return paths


def hop_census(netlist: Netlist, src_net: str, dst_net: str) -> Counter:
    """Census of the unique gate chain between two nets.

    Raises NetlistError when the connection is absent or ambiguous; used
    for checking carry-hop structure, where exactly one path must exist.
    """
    paths = enumerate_paths(netlist, src_net, dst_net)
    if len(paths) != 1:
        raise NetlistError(
            f"expected exactly one path {src_net!r} -> {dst_net!r}, "
            f"found {len(paths)}")
    return Counter(g.kind for g in paths[0])
