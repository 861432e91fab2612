"""Command line front end for the dual-rail adder workbench.

Subcommands:

* ``gen``     write a canonical netlist, print its gate census
* ``sim``     run four-phase handshake cycles on chosen vectors
* ``verify``  oracle sweeps, alias agreement, random-delay fuzz
* ``bench``   simulated latency table over the 32-bit design matrix
* ``report``  recompute the comparisons from the reference table

Flags win over config-file entries, which win over built-in defaults.
The config file is plain ``key = value`` text, one entry per line,
``#`` starts a comment.  Every command echoes its seed in the output
header, and output bodies carry no timestamps, so a rerun with the
same flags is byte-identical.  Exit status is 0 only when nothing
failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Any, Callable, Optional, Sequence

import numpy as np

from .generators import AdderConfig, generate
from .metrics import (
    PLAIN_ALIAS_RATIO_BAND,
    area_identities,
    design_summary,
    function_block_area,
    group4_overhead,
    group4_reference_ordering,
    load_reference_table,
    percentage_claims,
    plain_alias_latency_ratio,
)
from .netlist import emit_netlist
from .sim import (
    CompiledDesign,
    SimState,
    active_kernel,
    build_delays,
    data_stimulus,
    rtz_stimulus,
    run_handshake_cycles,
    simulate_phase,
)
from .verify import (
    alias_equivalence_check,
    latency_agreement,
    oracle_exhaustive,
    oracle_random,
    qdi_fuzz,
    random_vectors,
)

_ARCH_CHOICES = ("rca", "scbcla", "rcla", "scbclg", "fa", "sol", "cd")
_OVERHEAD_SPREAD_TOL = 0.05


# ---------------------------------------------------------------------------
# option plumbing: flags > config file > defaults

def _cast_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _int0(text: str) -> int:
    return int(text, 0)


def read_config(path: str) -> dict[str, str]:
    """Parse a `key = value` file; keys are normalized to underscores."""
    values: dict[str, str] = {}
    with open(path) as fh:
        for ln, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{ln}: expected key = value")
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def _finish(ns: argparse.Namespace,
            spec: dict[str, tuple[Callable[[str], Any], Any]]) -> None:
    """Fill unset options from the config file, then from defaults.

    Every option is declared with default None (store_true included),
    so absence on the command line is detectable here."""
    config = read_config(ns.config) if ns.config else {}
    for dest, (cast, default) in spec.items():
        if getattr(ns, dest) is not None:
            continue
        if dest in config:
            setattr(ns, dest, cast(config[dest]))
        else:
            setattr(ns, dest, default)


def _header(command: str, fields: dict[str, Any]) -> str:
    parts = " ".join(f"{k}={v}" for k, v in fields.items())
    return f"# qdicla {command} {parts}"


def _deliver(ns: argparse.Namespace, text: str) -> None:
    if ns.out:
        with open(ns.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header: str, columns: Sequence[str],
              rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    buf.write(header + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return buf.getvalue()


def _json_text(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _adder_config(ns: argparse.Namespace) -> AdderConfig:
    hybrid = ns.hybrid_rca or 0
    if hybrid and hybrid != ns.section:
        raise ValueError(
            f"hybrid ripple width {hybrid} must equal the section "
            f"width {ns.section}: the ripple block replaces exactly "
            f"one section")
    return AdderConfig(arch=ns.arch, width=ns.width, section=ns.section,
                       alias=bool(ns.alias), hybrid_rca=bool(hybrid))


def _config_fields(ns: argparse.Namespace) -> dict[str, Any]:
    return {"arch": ns.arch, "width": ns.width, "section": ns.section,
            "alias": int(bool(ns.alias)), "hybrid_rca": ns.hybrid_rca or 0}


# ---------------------------------------------------------------------------
# gen

_GEN_SPEC: dict[str, tuple[Callable[[str], Any], Any]] = {
    "arch": (str, "scbcla"), "width": (int, 32), "section": (int, 4),
    "alias": (_cast_bool, False), "hybrid_rca": (int, 0),
    "seed": (int, 0), "out": (str, None),
}


def cmd_gen(ns: argparse.Namespace) -> int:
    _finish(ns, _GEN_SPEC)
    nl = generate(_adder_config(ns))
    text = emit_netlist(nl)
    s = design_summary(nl)
    fields = _config_fields(ns)
    fields["seed"] = ns.seed
    lines = [_header("gen", fields),
             f"{nl.name}: {s.gates} gates, {s.transistors} transistors, "
             f"depth {s.static_depth:g}"]
    for kind in sorted(s.census):
        lines.append(f"  {kind} x{s.census[kind]}")
    summary = "\n".join(lines) + "\n"
    if ns.out:
        with open(ns.out, "w") as fh:
            fh.write(text)
        sys.stdout.write(summary)
    else:
        # netlist text owns stdout so it stays pipeable
        sys.stdout.write(text)
        sys.stderr.write(summary)
    return 0


# ---------------------------------------------------------------------------
# sim

_SIM_SPEC: dict[str, tuple[Callable[[str], Any], Any]] = {
    "arch": (str, "scbcla"), "width": (int, 32), "section": (int, 4),
    "alias": (_cast_bool, False), "hybrid_rca": (int, 0),
    "a": (_int0, None), "b": (_int0, None), "cin": (_int0, None),
    "vectors": (str, None), "random": (int, None),
    "delays": (str, "unit"), "watch_races": (_cast_bool, False),
    "trace": (_cast_bool, False), "seed": (int, 0),
    "format": (str, "text"), "out": (str, None),
}


def read_vector_file(path: str) -> list[tuple[int, int, int]]:
    """Lines of `a b [cin]`, any integer base python accepts."""
    vectors: list[tuple[int, int, int]] = []
    with open(path) as fh:
        for ln, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise ValueError(f"{path}:{ln}: expected 'a b [cin]'")
            cin = int(parts[2], 0) if len(parts) == 3 else 0
            if cin not in (0, 1):
                raise ValueError(f"{path}:{ln}: cin must be 0 or 1")
            vectors.append((int(parts[0], 0), int(parts[1], 0), cin))
    return vectors


def _sim_vectors(ns: argparse.Namespace,
                 width: int) -> list[tuple[int, int, int]]:
    if ns.a is not None or ns.b is not None:
        if ns.a is None or ns.b is None:
            raise ValueError("--a and --b go together")
        return [(ns.a, ns.b, ns.cin or 0)]
    if ns.vectors:
        vectors = read_vector_file(ns.vectors)
        if not vectors:
            raise ValueError(f"{ns.vectors}: no vectors")
        return vectors
    if ns.random:
        a, b, cin = random_vectors(width, ns.random, ns.seed)
        return list(zip(a.tolist(), b.tolist(), cin.tolist()))
    raise ValueError("no vectors: give --a/--b, --vectors FILE or --random N")


def _print_trace(design: CompiledDesign, vector: tuple[int, int, int],
                 delays: np.ndarray, lines: list[str]) -> None:
    # deterministic rerun of the same cycle, this time recording
    state = SimState.reset(design)
    a, b, cin = vector
    for phase, stim in (("data", data_stimulus(design, a, b, cin)),
                        ("rtz", rtz_stimulus(design))):
        res = simulate_phase(design, state, stim, phase, delays=delays,
                             record_trace=True)
        lines.append(f"# trace {phase}")
        for t, net, val in res.trace or []:
            lines.append(f"{t:g} {net} {val}")


def cmd_sim(ns: argparse.Namespace) -> int:
    _finish(ns, _SIM_SPEC)
    design = CompiledDesign.compile(generate(_adder_config(ns)))
    if design.width is None:
        raise ValueError(f"{design.netlist.name} has no operand ports to "
                         f"drive; sim needs an adder-style design")
    vectors = _sim_vectors(ns, design.width)
    if ns.trace and (len(vectors) != 1 or ns.format != "text"):
        raise ValueError("--trace wants exactly one vector and text output")
    rng = np.random.default_rng(ns.seed)
    delays = build_delays(design, ns.delays,
                          rng if ns.delays == "random" else None)
    report = run_handshake_cycles(design, vectors, delays=delays,
                                  watch_races=ns.watch_races,
                                  stop_on_fail=False)

    fields = _config_fields(ns)
    fields.update(delays=ns.delays, seed=ns.seed, kernel=active_kernel())
    header = _header("sim", fields)
    columns = ("a", "b", "cin", "status", "sum", "cout", "latency",
               "rtz_time", "events")
    rows: list[list[Any]] = []
    for r in report.records:
        total, cout = r.decoded if r.decoded else (None, None)
        events = r.data.events + (r.rtz.events if r.rtz else 0)
        rows.append([r.vector[0], r.vector[1], r.vector[2],
                     "ok" if r.ok else r.fail.name.lower(),
                     total if total is not None else "-",
                     cout if cout is not None else "-",
                     f"{r.latency:g}",
                     f"{r.rtz.final_time:g}" if r.rtz else "-",
                     events])
    n_fail = sum(not r.ok for r in report.records)

    if ns.format == "structured":
        payload = {
            "command": "sim", "design": design.netlist.name,
            "kernel": active_kernel(), "seed": ns.seed, "delays": ns.delays,
            "records": [dict(zip(columns, row)) for row in rows],
            "failures": n_fail, "worst_latency": report.worst_latency,
            "indication_violations": report.indication_violations,
            "benign_alias_fires": report.benign_alias_fires,
        }
        _deliver(ns, _json_text(payload))
    elif ns.format == "csv":
        _deliver(ns, _csv_text(header, columns, rows))
    else:
        lines = [header, " ".join(columns)]
        lines += [" ".join(str(c) for c in row) for row in rows]
        lines.append(f"# {len(vectors)} vectors, {n_fail} failures, "
                     f"worst latency {report.worst_latency:g}")
        if ns.watch_races:
            lines.append(f"# indication violations "
                         f"{report.indication_violations}, benign alias "
                         f"fires {report.benign_alias_fires}")
        if ns.trace:
            _print_trace(design, vectors[0], delays, lines)
        _deliver(ns, "\n".join(lines) + "\n")
    return 0 if n_fail == 0 and report.indication_violations == 0 else 1


# ---------------------------------------------------------------------------
# verify

_VERIFY_SPEC: dict[str, tuple[Callable[[str], Any], Any]] = {
    "arch": (str, "scbcla"), "width": (int, 32), "section": (int, 4),
    "alias": (_cast_bool, False), "hybrid_rca": (int, 0),
    "exhaustive": (_cast_bool, False), "random": (int, None),
    "fuzz": (int, None), "latency": (_cast_bool, False),
    "seed": (int, 0), "format": (str, "text"), "out": (str, None),
}


def cmd_verify(ns: argparse.Namespace) -> int:
    _finish(ns, _VERIFY_SPEC)
    nl = generate(_adder_config(ns))
    design = CompiledDesign.compile(nl)
    if design.width is None:
        raise ValueError(f"{nl.name} has no operand ports; nothing to verify")

    exhaustive = ns.exhaustive
    n_random = ns.random
    if not exhaustive and not n_random and not ns.fuzz and not ns.latency:
        # sensible default: full coverage where affordable
        if design.width <= 8:
            exhaustive = True
        else:
            n_random = 10_000

    has_alias = any(p.label.endswith("_alias") or "alias" in p.label
                    for p in nl.output_pairs) or \
        any("alias" in k for k in nl.probes)
    rows: list[tuple[str, int, int, str]] = []

    if exhaustive:
        res = oracle_exhaustive(nl)
        detail = "" if res.ok else \
            f"first {res.first_fail.name.lower()} at vector " \
            f"{res.first_fail_index}"
        rows.append(("exhaustive", res.n_ok + res.n_fail, res.n_fail, detail))
        if has_alias:
            eq = alias_equivalence_check(nl)
            rows.append(("alias agreement", eq.n_cases,
                         eq.n_cases - eq.n_equal,
                         "" if eq.ok else str(eq.mismatches[0])))
    if n_random:
        res = oracle_random(nl, n_random, ns.seed)
        detail = "" if res.ok else \
            f"first {res.first_fail.name.lower()} at vector " \
            f"{res.first_fail_index}"
        rows.append(("random", res.n_ok + res.n_fail, res.n_fail, detail))
        if has_alias and not exhaustive:
            a, b, cin = random_vectors(design.width, n_random, ns.seed)
            eq = alias_equivalence_check(
                nl, list(zip(a.tolist(), b.tolist(), cin.tolist())))
            rows.append(("alias agreement", eq.n_cases,
                         eq.n_cases - eq.n_equal,
                         "" if eq.ok else str(eq.mismatches[0])))
    if ns.fuzz:
        rep = qdi_fuzz(nl, trials=ns.fuzz, seed=ns.seed)
        bad = len(rep.failures) + rep.indication_violations
        detail = f"{rep.benign_alias_fires} benign alias fires"
        if rep.failures:
            detail = f"first {rep.failures[0][2].name.lower()} " \
                     f"in trial {rep.failures[0][0]}; " + detail
        if rep.indication_violations:
            detail = f"{rep.indication_violations} indication violations; " \
                + detail
        rows.append(("fuzz", rep.cycles, bad, detail))
    if ns.latency:
        try:
            la = latency_agreement(nl, seed=ns.seed,
                                   n_random=n_random or 1000)
            rows.append(("latency agreement", la.n_vectors,
                         0 if la.ok else 1,
                         f"static {la.static_depth:g} simulated "
                         f"{la.simulated_worst:g}"))
        except AssertionError as exc:
            rows.append(("latency agreement", 0, 1, str(exc)))

    n_fail = sum(r[2] for r in rows)
    fields = _config_fields(ns)
    fields.update(seed=ns.seed, kernel=active_kernel())
    header = _header("verify", fields)

    if ns.format == "structured":
        payload = {
            "command": "verify", "design": nl.name,
            "kernel": active_kernel(), "seed": ns.seed,
            "suites": [{"suite": n, "cases": c, "failures": f, "detail": d}
                       for n, c, f, d in rows],
            "ok": n_fail == 0,
        }
        _deliver(ns, _json_text(payload))
    elif ns.format == "csv":
        _deliver(ns, _csv_text(
            header, ("suite", "cases", "failures", "status", "detail"),
            [[n, c, f, "PASS" if f == 0 else "FAIL", d]
             for n, c, f, d in rows]))
    else:
        lines = [header, f"design {nl.name}"]
        for name, cases, fails, detail in rows:
            status = "PASS" if fails == 0 else "FAIL"
            tail = f" ({detail})" if detail else ""
            lines.append(f"{name}: {cases} cases, {fails} failures "
                         f"{status}{tail}")
        _deliver(ns, "\n".join(lines) + "\n")
    return 0 if n_fail == 0 else 1


# ---------------------------------------------------------------------------
# bench

_BENCH_SPEC: dict[str, tuple[Callable[[str], Any], Any]] = {
    "group3": (_cast_bool, False), "group4": (_cast_bool, False),
    "random": (int, 1000), "seed": (int, 0),
    "format": (str, "text"), "out": (str, None),
}

# 32-bit comparison matrix, reference row names
_MATRIX: tuple[tuple[str, str, AdderConfig], ...] = (
    ("group3", "rcla", AdderConfig(arch="rcla")),
    ("group3", "rcla_hybrid", AdderConfig(arch="rcla", hybrid_rca=True)),
    ("group4", "scbcla", AdderConfig(arch="scbcla")),
    ("group4", "scbcla_hybrid", AdderConfig(arch="scbcla", hybrid_rca=True)),
    ("group4", "scbcla_alias", AdderConfig(arch="scbcla", alias=True)),
    ("group4", "scbcla_alias_hybrid",
     AdderConfig(arch="scbcla", alias=True, hybrid_rca=True)),
)


def cmd_bench(ns: argparse.Namespace) -> int:
    _finish(ns, _BENCH_SPEC)
    groups = {g for g, _, _ in _MATRIX}
    if ns.group3 or ns.group4:
        groups = set()
        if ns.group3:
            groups.add("group3")
        if ns.group4:
            groups.add("group4")

    rows: list[list[Any]] = []
    lat_by_name: dict[str, float] = {}
    ok = True
    for group, name, cfg in _MATRIX:
        if group not in groups:
            continue
        nl = generate(cfg)
        s = design_summary(nl)
        try:
            la = latency_agreement(nl, seed=ns.seed, n_random=ns.random)
            latency = la.simulated_worst
            agree = la.ok
        except AssertionError:
            latency, agree = -1.0, False
        ok = ok and agree
        if cfg.arch == "scbcla":
            area = f"{function_block_area(cfg.alias, cfg.hybrid_rca):.2f}"
        else:
            area = "-"
        lat_by_name[name] = latency
        rows.append([group, name, s.gates, s.transistors,
                     f"{s.static_depth:g}", f"{latency:g}", area,
                     "PASS" if agree else "FAIL"])

    ordering_line = None
    if "group4" in groups:
        g4 = [n for g, n, _ in _MATRIX if g == "group4"]
        simulated = tuple(sorted(g4, key=lambda n: lat_by_name[n]))
        match = simulated == group4_reference_ordering()
        ok = ok and match
        ordering_line = (f"latency ordering: {' < '.join(simulated)} "
                         f"{'PASS' if match else 'FAIL'}")

    header = _header("bench", {"random": ns.random, "seed": ns.seed,
                               "kernel": active_kernel()})
    columns = ("group", "design", "gates", "transistors", "depth",
               "latency", "area_um2", "status")
    if ns.format == "structured":
        payload = {
            "command": "bench", "kernel": active_kernel(), "seed": ns.seed,
            "rows": [dict(zip(columns, row)) for row in rows],
            "ok": ok,
        }
        if ordering_line:
            payload["latency_ordering"] = ordering_line
        _deliver(ns, _json_text(payload))
    elif ns.format == "csv":
        _deliver(ns, _csv_text(header, columns, rows))
    else:
        lines = [header, " ".join(columns)]
        lines += [" ".join(str(c) for c in row) for row in rows]
        if ordering_line:
            lines.append(ordering_line)
        _deliver(ns, "\n".join(lines) + "\n")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# report

_REPORT_SPEC: dict[str, tuple[Callable[[str], Any], Any]] = {
    "reference": (str, "bundled"), "seed": (int, 0),
    "format": (str, "text"), "out": (str, None),
}


def cmd_report(ns: argparse.Namespace) -> int:
    _finish(ns, _REPORT_SPEC)
    if ns.reference == "bundled":
        rows = load_reference_table()
    else:
        with open(ns.reference) as fh:
            rows = load_reference_table(fh.read())

    entries: list[tuple[str, str, str, str, bool]] = []
    for ident in area_identities(rows):
        entries.append(("identity", ident.name,
                        f"table {ident.table_delta:.2f}",
                        f"composed {ident.composed_delta:.2f} "
                        f"tol {ident.tolerance:g}", ident.ok))
    for c in percentage_claims(rows):
        entries.append(("claim", c.name, f"{c.claimed:g}%",
                        f"computed {c.computed:.2f}% tol {c.tolerance:g}",
                        c.ok))
    over = group4_overhead(rows)
    spread = max(over.values()) - min(over.values())
    entries.append(("overhead", "constant area overhead",
                    f"{min(over.values()):.2f}..{max(over.values()):.2f}",
                    f"spread {spread:.2f} tol {_OVERHEAD_SPREAD_TOL:g}",
                    spread <= _OVERHEAD_SPREAD_TOL))
    order = group4_reference_ordering(rows)
    entries.append(("ordering", "group4 latency ordering",
                    " < ".join(order), "",
                    order == group4_reference_ordering()))
    ratio = plain_alias_latency_ratio(rows)
    lo, hi = PLAIN_ALIAS_RATIO_BAND
    entries.append(("ratio", "plain/alias latency ratio", f"{ratio:.3f}",
                    f"band [{lo:g}, {hi:g}]", lo <= ratio <= hi))

    all_ok = all(e[4] for e in entries)
    header = _header("report", {"reference": ns.reference, "seed": ns.seed})

    if ns.format == "structured":
        payload = {
            "command": "report", "reference": ns.reference, "seed": ns.seed,
            "entries": [{"kind": k, "name": n, "value": v, "detail": d,
                         "ok": okflag}
                        for k, n, v, d, okflag in entries],
            "ok": all_ok,
        }
        _deliver(ns, _json_text(payload))
    elif ns.format == "csv":
        _deliver(ns, _csv_text(
            header, ("kind", "name", "value", "detail", "status"),
            [[k, n, v, d, "PASS" if okflag else "FAIL"]
             for k, n, v, d, okflag in entries]))
    else:
        lines = [header]
        for kind, name, value, detail, okflag in entries:
            status = "PASS" if okflag else "FAIL"
            tail = f" ({detail})" if detail else ""
            lines.append(f"{name} {value} {status}{tail}")
        _deliver(ns, "\n".join(lines) + "\n")
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# parser

def _arch_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--arch", choices=_ARCH_CHOICES,
                     help="design family (default scbcla)")
    sub.add_argument("--width", type=int, help="operand width in bits")
    sub.add_argument("--section", type=int, help="lookahead section size")
    sub.add_argument("--alias", action="store_true", default=None,
                     help="add the single-gate alias carry path")
    sub.add_argument("--hybrid-rca", type=int, dest="hybrid_rca",
                     metavar="W",
                     help="replace the least significant section with a "
                          "W-bit ripple block (W must equal the section "
                          "width)")


def _io_options(sub: argparse.ArgumentParser,
                formats: bool = True) -> None:
    sub.add_argument("--config", help="key = value defaults file")
    sub.add_argument("--seed", type=int, help="rng seed (default 0)")
    sub.add_argument("--out", help="write output to this file")
    if formats:
        sub.add_argument("--format", choices=("text", "csv", "structured"),
                         help="output layout (default text)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdicla",
        description="dual-rail adder workbench: generate, simulate, "
                    "verify, benchmark")
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("gen", help="emit a canonical netlist")
    _arch_options(gen)
    _io_options(gen, formats=False)
    gen.set_defaults(func=cmd_gen)

    sim = subs.add_parser("sim", help="run handshake cycles")
    _arch_options(sim)
    sim.add_argument("--a", type=_int0, help="operand a")
    sim.add_argument("--b", type=_int0, help="operand b")
    sim.add_argument("--cin", type=_int0, choices=(0, 1), help="carry in")
    sim.add_argument("--vectors", metavar="FILE",
                     help="vector file, lines of 'a b [cin]'")
    sim.add_argument("--random", type=int, metavar="N",
                     help="N seeded random vectors")
    sim.add_argument("--delays", choices=("unit", "random"),
                     help="gate delay model (default unit)")
    sim.add_argument("--watch-races", action="store_true", default=None,
                     dest="watch_races",
                     help="monitor carry acknowledgment during return")
    sim.add_argument("--trace", action="store_true", default=None,
                     help="dump the transition trace (single vector)")
    _io_options(sim)
    sim.set_defaults(func=cmd_sim)

    ver = subs.add_parser("verify", help="run checking suites")
    _arch_options(ver)
    ver.add_argument("--exhaustive", action="store_true", default=None,
                     help="every input combination (width <= 12)")
    ver.add_argument("--random", type=int, metavar="N",
                     help="N seeded random vectors against the oracle")
    ver.add_argument("--fuzz", type=int, metavar="N",
                     help="N random-delay trials")
    ver.add_argument("--latency", action="store_true", default=None,
                     help="compare worst simulated latency to the static "
                          "longest path")
    _io_options(ver)
    ver.set_defaults(func=cmd_verify)

    bench = subs.add_parser("bench",
                            help="latency table for the design matrix")
    bench.add_argument("--group3", action="store_true", default=None,
                       help="only the fully decoded lookahead designs")
    bench.add_argument("--group4", action="store_true", default=None,
                       help="only the sectioned lookahead designs")
    bench.add_argument("--random", type=int, metavar="N",
                       help="random vectors per design (default 1000)")
    _io_options(bench)
    bench.set_defaults(func=cmd_bench)

    rep = subs.add_parser("report",
                          help="recompute reference-table comparisons")
    rep.add_argument("--reference",
                     help="'bundled' or a path to a five-column table")
    _io_options(rep)
    rep.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.func(ns)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
