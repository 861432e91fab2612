"""Verification drivers for the generated designs.

Four layers, each usable on its own:

* oracle sweeps: every vector of a family is run as a full handshake
  cycle and the decoded sum is compared against integer addition;
* alias equivalence: designs that carry the observer carry pair must
  show it bit-identical to the primary pair after every data phase;
* handshake witnesses: input-completion and return-to-zero behavior
  that the oracle sweeps cannot see (withheld and held carry-in);
* delay fuzzing: random per-gate delays with the race monitors armed,
  many trials, state carried through whole cycles.

The mutation helpers at the bottom inject the classic faults (swapped
rails, an acknowledgment gate weakened to AND2, a dropped OR term) so
tests can prove the layers above actually catch them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .cells import CellKind
from .netlist import GateInstance, Netlist, PortPair, static_longest_path
from .sim import (
    CompiledDesign,
    PhaseStatus,
    SimState,
    SweepFail,
    SweepResult,
    build_delays,
    data_stimulus,
    derive_race_watches,
    pair_stimulus,
    run_handshake_cycles,
    simulate_phase,
    sweep_vectors,
)

Vector = tuple[int, int, int]


# ---------------------------------------------------------------------------
# vector families

def exhaustive_vectors(width: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Every (a, b, cin) combination for the given width."""
    if width > 12:
        raise ValueError(f"exhaustive sweep over width {width} is too large")
    n = 1 << width
    a = np.repeat(np.arange(n, dtype=np.uint64), 2 * n)
    b = np.tile(np.repeat(np.arange(n, dtype=np.uint64), 2), n)
    cin = np.tile(np.array([0, 1], dtype=np.int8), n * n)
    return a, b, cin


def random_vectors(width: int, count: int,
                   seed: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 1 << width, size=count, dtype=np.uint64)
    b = rng.integers(0, 1 << width, size=count, dtype=np.uint64)
    cin = rng.integers(0, 2, size=count, dtype=np.int8)
    return a, b, cin


def directed_vectors(width: int) -> list[Vector]:
    """Vectors that pin the worst-case latency.

    All-propagate leaves every carry undecided until the carry-in;
    generate or kill at bit 0 under propagate everywhere else forces
    the decision through the longest chain and then the full ripple.
    """
    mask = (1 << width) - 1
    return [
        (mask, 0, 0),
        (mask, 0, 1),
        (mask, 1, 0),
        (mask ^ 1, 0, 1),
    ]


# ---------------------------------------------------------------------------
# oracle sweeps

def oracle_exhaustive(netlist: Netlist,
                      delays: Optional[np.ndarray] = None,
                      want_latencies: bool = False) -> SweepResult:
    """Full handshake cycle for every input combination."""
    design = CompiledDesign.compile(netlist)
    a, b, cin = exhaustive_vectors(design.width)
    return sweep_vectors(design, a, b, cin, delays=delays,
                         want_latencies=want_latencies)


def oracle_random(netlist: Netlist, count: int, seed: int,
                  delays: Optional[np.ndarray] = None,
                  want_latencies: bool = False) -> SweepResult:
    design = CompiledDesign.compile(netlist)
    a, b, cin = random_vectors(design.width, count, seed)
    return sweep_vectors(design, a, b, cin, delays=delays,
                         want_latencies=want_latencies)


@dataclass
class LatencyAgreement:
    design: str
    static_depth: float
    simulated_worst: float
    n_vectors: int

    @property
    def ok(self) -> bool:
        return self.simulated_worst == self.static_depth


def latency_agreement(netlist: Netlist, seed: int = 0,
                      n_random: int = 10_000) -> LatencyAgreement:
    """Worst observed unit-delay latency against the static longest path.

    Random vectors alone can miss the worst case on carry-lookahead
    shapes, so the directed family is always appended.
    """
    design = CompiledDesign.compile(netlist)
    a, b, cin = random_vectors(design.width, n_random, seed)
    directed = directed_vectors(design.width)
    a = np.concatenate([a, np.array([v[0] for v in directed], dtype=np.uint64)])
    b = np.concatenate([b, np.array([v[1] for v in directed], dtype=np.uint64)])
    cin = np.concatenate([cin, np.array([v[2] for v in directed], dtype=np.int8)])
    res = sweep_vectors(design, a, b, cin)
    if not res.ok:
        raise AssertionError(
            f"{netlist.name}: sweep failed with {res.first_fail.name} "
            f"at vector {res.first_fail_index}")
    static = static_longest_path(netlist).depth
    return LatencyAgreement(design=netlist.name, static_depth=static,
                            simulated_worst=res.worst_latency,
                            n_vectors=len(a))


# ---------------------------------------------------------------------------
# alias equivalence

@dataclass
class AliasEquivalence:
    design: str
    n_cases: int
    n_equal: int
    mismatches: list[tuple[Vector, str]]

    @property
    def ok(self) -> bool:
        return self.n_cases > 0 and self.n_equal == self.n_cases


def alias_equivalence_check(netlist: Netlist,
                            vectors: Optional[Sequence[Vector]] = None
                            ) -> AliasEquivalence:
    """Primary and observer carry pairs must settle to identical states.

    Checked after the data phase and again after the return phase of
    every vector; the default vector set is exhaustive over the width.
    """
    design = CompiledDesign.compile(netlist)
    watches = [w for w in derive_race_watches(design) if w.alias]
    if not watches:
        raise ValueError(f"{netlist.name} has no observer carry pairs")
    if vectors is None:
        a, b, cin = exhaustive_vectors(design.width)
        vectors = list(zip(a.tolist(), b.tolist(), cin.tolist()))

    idx = design.net_index
    state = SimState.reset(design)
    n_equal = 0
    mismatches: list[tuple[Vector, str]] = []

    def pairs_agree() -> Optional[str]:
        for w in watches:
            prim = (int(state.vals[idx[w.primary[0]]]),
                    int(state.vals[idx[w.primary[1]]]))
            ali = (int(state.vals[idx[w.alias[0]]]),
                   int(state.vals[idx[w.alias[1]]]))
            if prim != ali:
                return f"section {w.section or '-'}: {prim} != {ali}"
        return None

    for vec in vectors:
        a_i, b_i, c_i = vec
        res = simulate_phase(design, state,
                             data_stimulus(design, a_i, b_i, c_i), "data")
        if not res.ok:
            mismatches.append((vec, f"data phase {res.status.name}"))
            continue
        diff = pairs_agree()
        rtz = simulate_phase(design, state,
                             [(r, 0) for p in netlist.input_pairs
                              for r in (p.rail1, p.rail0)], "rtz")
        if diff is None and not rtz.ok:
            diff = f"return phase {rtz.status.name}"
        if diff is None:
            diff = pairs_agree()
        if diff is None:
            n_equal += 1
        else:
            mismatches.append((vec, diff))

    return AliasEquivalence(design=netlist.name, n_cases=len(vectors),
                            n_equal=n_equal, mismatches=mismatches)


# ---------------------------------------------------------------------------
# handshake witnesses

@dataclass
class WitnessReport:
    """Input-completion witnesses for one design.

    The data witness withholds the carry-in under an all-generate
    vector: every output that does not arithmetically need the carry
    must still validate, and nothing else.  The return witness then
    drives the operands low while holding the carry-in valid: all
    outputs must return to empty anyway.
    """
    design: str
    withheld_status: PhaseStatus
    withheld_stuck: tuple[str, ...]
    expected_stuck: tuple[str, ...]
    completed_ok: bool
    held_rtz_status: PhaseStatus
    carry_in_still_valid: bool

    @property
    def data_ok(self) -> bool:
        if self.expected_stuck:
            return (self.withheld_status is PhaseStatus.DEADLOCK
                    and self.withheld_stuck == self.expected_stuck)
        return self.withheld_status is PhaseStatus.OK

    @property
    def rtz_ok(self) -> bool:
        return (self.held_rtz_status is PhaseStatus.OK
                and self.carry_in_still_valid)

    @property
    def ok(self) -> bool:
        return self.data_ok and self.completed_ok and self.rtz_ok


def early_output_witness(netlist: Netlist) -> WitnessReport:
    design = CompiledDesign.compile(netlist)
    width = design.width
    if width is None:
        raise ValueError(f"{netlist.name} has no adder-style ports")
    full = (1 << width) - 1

    # only the lowest sum bit is an XOR of the carry-in; under
    # all-generate every carry is decided locally
    expected_stuck = tuple(
        p.label for p in netlist.output_pairs if p.label == "sum0")

    state = SimState.reset(design)
    withheld = simulate_phase(
        design, state, data_stimulus(design, full, full, None), "data")

    finish = simulate_phase(
        design, state, pair_stimulus(design, {"cin": 0}), "data")
    completed_ok = finish.ok

    held = [(r, 0) for p in netlist.input_pairs if p.label != "cin"
            for r in (p.rail1, p.rail0)]
    rtz = simulate_phase(design, state, held, "rtz")

    cin_pair = next(p for p in netlist.input_pairs if p.label == "cin")
    cin_valid = bool(state.vals[design.net_index[cin_pair.rail0]])

    return WitnessReport(
        design=netlist.name,
        withheld_status=withheld.status,
        withheld_stuck=withheld.stuck_pairs,
        expected_stuck=expected_stuck,
        completed_ok=completed_ok,
        held_rtz_status=rtz.status,
        carry_in_still_valid=cin_valid)


# ---------------------------------------------------------------------------
# delay fuzzing

@dataclass
class FuzzReport:
    design: str
    seed: int
    trials: int
    cycles: int
    failures: list[tuple[int, int, SweepFail]]
    indication_violations: int
    benign_alias_fires: int

    @property
    def ok(self) -> bool:
        return not self.failures and self.indication_violations == 0


def qdi_fuzz(netlist: Netlist, trials: int = 1000, seed: int = 0,
             vectors_per_trial: int = 2,
             watch_races: bool = True) -> FuzzReport:
    """Random-delay trials over whole handshake cycles.

    Each trial draws fresh per-gate delays and a couple of operand
    vectors; delay insensitivity means the decoded sums, the handshake,
    and the race monitors must all stay clean no matter the draw.
    """
    design = CompiledDesign.compile(netlist)
    width = design.width
    if width is None:
        raise ValueError(f"{netlist.name} has no adder-style ports")
    rng = np.random.default_rng(seed)

    failures: list[tuple[int, int, SweepFail]] = []
    violations = 0
    benign = 0
    cycles = 0
    for trial in range(trials):
        delays = build_delays(design, mode="random", rng=rng)
        vectors = [(int(rng.integers(0, 1 << width)),
                    int(rng.integers(0, 1 << width)),
                    int(rng.integers(0, 2)))
                   for _ in range(vectors_per_trial)]
        report = run_handshake_cycles(design, vectors, delays=delays,
                                      watch_races=watch_races)
        cycles += len(report.records)
        for i, rec in enumerate(report.records):
            if not rec.ok:
                failures.append((trial, i, rec.fail))
        violations += report.indication_violations
        benign += report.benign_alias_fires

    return FuzzReport(design=netlist.name, seed=seed, trials=trials,
                      cycles=cycles, failures=failures,
                      indication_violations=violations,
                      benign_alias_fires=benign)


# ---------------------------------------------------------------------------
# fault injection

def swap_output_rails(netlist: Netlist, label: str) -> Netlist:
    """Swap the two rails of one output pair."""
    if label not in {p.label for p in netlist.output_pairs}:
        raise ValueError(f"no output pair {label!r} in {netlist.name}")
    pairs = tuple(
        PortPair(p.label, p.rail0, p.rail1) if p.label == label else p
        for p in netlist.output_pairs)
    return Netlist(name=f"{netlist.name}_swapped",
                   input_pairs=netlist.input_pairs, output_pairs=pairs,
                   gates=netlist.gates, probes=dict(netlist.probes))


def celement_to_and2(netlist: Netlist) -> Netlist:
    """Weaken every carry-in acknowledgment C-element to an AND2.

    The AND2 computes the same rising function but releases as soon as
    either input falls, so the carry output can return to empty before
    the section's propagate term does: an indication violation that
    only shows up under adversarial delays.
    """
    hit = False
    gates = []
    for g in netlist.gates:
        stem = g.output.rsplit(".", 1)[-1]
        if g.kind is CellKind.C2 and stem in ("cg", "ck"):
            gates.append(GateInstance(g.gid, CellKind.AND2, g.output,
                                      g.inputs))
            hit = True
        else:
            gates.append(g)
    if not hit:
        raise ValueError(f"no carry acknowledgment gates in {netlist.name}")
    return Netlist(name=f"{netlist.name}_ackless",
                   input_pairs=netlist.input_pairs,
                   output_pairs=netlist.output_pairs,
                   gates=tuple(gates), probes=dict(netlist.probes))


def drop_generate_term(netlist: Netlist) -> Netlist:
    """Drop the top generate term from every section's G sum."""
    hit = False
    gates = []
    for g in netlist.gates:
        stem = g.output.rsplit(".", 1)[-1]
        if g.kind is CellKind.OR4 and stem == "G":
            gates.append(GateInstance(g.gid, CellKind.OR3, g.output,
                                      g.inputs[1:]))
            hit = True
        else:
            gates.append(g)
    if not hit:
        raise ValueError(f"no G sum gates in {netlist.name}")
    return Netlist(name=f"{netlist.name}_dropped",
                   input_pairs=netlist.input_pairs,
                   output_pairs=netlist.output_pairs,
                   gates=tuple(gates), probes=dict(netlist.probes))
