"""Event-driven handshake simulation over compiled netlists.

`CompiledDesign.compile` flattens a netlist into the array form the
event kernels consume; `SimState` owns the mutable net values and the
per-gate projections.  Phases are driven one at a time: a data phase
applies a dual-rail code word to the inputs and runs until the network
is quiescent, a return-to-zero phase drives every input rail low.  The
kernel reports completion against the design's output pairs, so a
quiescent network that never completed is reported as a deadlock, with
the offending pairs listed.

Two kernels implement identical semantics: the compiled extension
(`qdicla._ckernel`) when the build produced it, else the pure fallback
(`qdicla._kernel`).  Set QDICLA_KERNEL=pure or =compiled to force one.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import IntEnum
from typing import Optional, Sequence

import numpy as np

from .cells import KIND_CODES, DualRailValue, cell_spec, classify_pair
from .netlist import Netlist, require_valid

_FORCED = os.environ.get("QDICLA_KERNEL", "").strip().lower()
if _FORCED not in ("", "pure", "compiled"):
    raise ImportError(
        f"QDICLA_KERNEL must be 'pure' or 'compiled', got {_FORCED!r}")
if _FORCED == "pure":
    from . import _kernel as _impl
    _KERNEL_NAME = "pure"
else:
    try:
        from . import _ckernel as _impl  # type: ignore[attr-defined]
        _KERNEL_NAME = "compiled"
    except ImportError:
        if _FORCED == "compiled":
            raise
        from . import _kernel as _impl
        _KERNEL_NAME = "pure"


def active_kernel() -> str:
    """Name of the kernel in use: 'compiled' or 'pure'."""
    return _KERNEL_NAME


class PhaseStatus(IntEnum):
    OK = 0
    DEADLOCK = 1
    INVALID = 2
    NONMONOTONE = 3
    EVENT_CAP = 4


class SweepFail(IntEnum):
    NONE = 0
    MISMATCH = 1
    UNDECODABLE = 2
    DEADLOCK_DATA = 3
    DEADLOCK_RTZ = 4
    INVALID = 5
    NONMONOTONE = 6
    EVENT_CAP = 7


ROLE_COUT = -2
ROLE_COUT_ALIAS = -3
ROLE_CIN = -1


def _input_role(label: str, width: int) -> Optional[int]:
    if label == "cin":
        return ROLE_CIN
    for prefix, base in (("a", 0), ("b", width)):
        if label == prefix:
            return base
        if label.startswith(prefix) and label[len(prefix):].isdigit():
            return base + int(label[len(prefix):])
    return None


def _output_role(label: str) -> Optional[int]:
    if label == "cout":
        return ROLE_COUT
    if label == "cout_alias":
        return ROLE_COUT_ALIAS
    if label == "sum":
        return 0
    if label.startswith("sum") and label[3:].isdigit():
        return int(label[3:])
    return None


@dataclass
class CompiledDesign:
    """Flattened, array-form netlist shared by both kernels."""

    netlist: Netlist
    net_names: tuple[str, ...]
    net_index: dict[str, int]
    kind: np.ndarray
    gout: np.ndarray
    in_off: np.ndarray
    in_idx: np.ndarray
    fan_off: np.ndarray
    fan_idx: np.ndarray
    mate: np.ndarray
    pair_r1: np.ndarray
    pair_r0: np.ndarray
    out_role: Optional[np.ndarray]
    in_r1: np.ndarray
    in_r0: np.ndarray
    in_role: Optional[np.ndarray]
    width: Optional[int]

    @property
    def n_nets(self) -> int:
        return len(self.net_names)

    @property
    def n_gates(self) -> int:
        return len(self.kind)

    @property
    def max_events_default(self) -> int:
        return 64 * self.n_nets + 4096

    def unit_delays(self) -> np.ndarray:
        return np.array([cell_spec(g.kind).delay for g in self.netlist.gates],
                        dtype=np.float64)

    @classmethod
    def compile(cls, netlist: Netlist) -> "CompiledDesign":
        require_valid(netlist)
        names = tuple(netlist.nets())
        index = {n: i for i, n in enumerate(names)}
        gates = netlist.gates
        kind = np.array([KIND_CODES[g.kind] for g in gates], dtype=np.int32)
        gout = np.array([index[g.output] for g in gates], dtype=np.int32)
        in_off = np.zeros(len(gates) + 1, dtype=np.int32)
        pins: list[int] = []
        for i, g in enumerate(gates):
            pins.extend(index[n] for n in g.inputs)
            in_off[i + 1] = len(pins)
        in_idx = np.array(pins, dtype=np.int32)

        per_net: list[list[int]] = [[] for _ in names]
        for gi, g in enumerate(gates):
            seen = set()
            for n in g.inputs:
                ni = index[n]
                if ni not in seen:
                    seen.add(ni)
                    per_net[ni].append(gi)
        fan_off = np.zeros(len(names) + 1, dtype=np.int32)
        flat: list[int] = []
        for ni, lst in enumerate(per_net):
            flat.extend(lst)
            fan_off[ni + 1] = len(flat)
        fan_idx = np.array(flat, dtype=np.int32)

        mate = np.full(len(names), -1, dtype=np.int32)

        def pair_up(r1: str, r0: str) -> None:
            mate[index[r1]] = index[r0]
            mate[index[r0]] = index[r1]

        for p in netlist.input_pairs:
            pair_up(p.rail1, p.rail0)
        for p in netlist.output_pairs:
            pair_up(p.rail1, p.rail0)
        for label, net in netlist.probes.items():
            if label.endswith("1") and (label[:-1] + "0") in netlist.probes:
                pair_up(net, netlist.probes[label[:-1] + "0"])

        pair_r1 = np.array([index[p.rail1] for p in netlist.output_pairs],
                           dtype=np.int32)
        pair_r0 = np.array([index[p.rail0] for p in netlist.output_pairs],
                           dtype=np.int32)
        in_r1 = np.array([index[p.rail1] for p in netlist.input_pairs],
                         dtype=np.int32)
        in_r0 = np.array([index[p.rail0] for p in netlist.input_pairs],
                         dtype=np.int32)

        width = sum(1 for p in netlist.input_pairs
                    if p.label == "a" or
                    (p.label.startswith("a") and p.label[1:].isdigit()))
        in_roles = [_input_role(p.label, width) for p in netlist.input_pairs]
        out_roles = [_output_role(p.label) for p in netlist.output_pairs]
        has_roles = width > 0 and None not in in_roles and \
            None not in out_roles
        return cls(
            netlist=netlist, net_names=names, net_index=index,
            kind=kind, gout=gout, in_off=in_off, in_idx=in_idx,
            fan_off=fan_off, fan_idx=fan_idx, mate=mate,
            pair_r1=pair_r1, pair_r0=pair_r0,
            out_role=np.array(out_roles, dtype=np.int64) if has_roles else None,
            in_r1=in_r1, in_r0=in_r0,
            in_role=np.array(in_roles, dtype=np.int64) if has_roles else None,
            width=width if has_roles else None,
        )


@dataclass
class SimState:
    vals: np.ndarray
    proj: np.ndarray

    @classmethod
    def reset(cls, design: CompiledDesign) -> "SimState":
        return cls(vals=np.zeros(design.n_nets, dtype=np.int8),
                   proj=np.zeros(design.n_gates, dtype=np.int8))


def build_delays(design: CompiledDesign, mode: str = "unit",
                 rng: Optional[np.random.Generator] = None,
                 lo: float = 0.5, hi: float = 2.0,
                 overrides: Optional[dict] = None) -> np.ndarray:
    """Per-gate delay vector: 'unit' uses the catalog values (optionally
    overridden per kind), 'random' draws uniformly from [lo, hi)."""
    if mode == "unit":
        table = {k: cell_spec(k).delay for k in KIND_CODES}
        if overrides:
            table.update(overrides)
        out = np.array([table[g.kind] for g in design.netlist.gates],
                       dtype=np.float64)
    elif mode == "random":
        if rng is None:
            raise ValueError("random delays need an rng")
        if not 0.0 < lo <= hi:
            raise ValueError(f"bad delay range [{lo}, {hi})")
        out = rng.uniform(lo, hi, design.n_gates)
    else:
        raise ValueError(f"unknown delay mode {mode!r}")
    if (out <= 0).any():
        raise ValueError("gate delays must be positive")
    return out


# ---------------------------------------------------------------------------
# stimulus

Stimulus = list[tuple[str, int]]


def data_stimulus(design: CompiledDesign, a: int, b: int,
                  cin: Optional[int] = 0) -> Stimulus:
    """Dual-rail code word for operands a, b and the carry-in.

    `cin=None` withholds the carry-in pair entirely: both rails stay
    where they are, which from the empty state means the pair is absent.
    """
    if design.in_role is None or design.width is None:
        raise ValueError(
            f"design {design.netlist.name!r} has no adder-style ports")
    width = design.width
    if not 0 <= a < (1 << width) or not 0 <= b < (1 << width):
        raise ValueError(f"operands must fit {width} bits")
    out: Stimulus = []
    for i, pair in enumerate(design.netlist.input_pairs):
        role = int(design.in_role[i])
        if role == ROLE_CIN:
            if cin is None:
                continue
            bit = cin
        elif role < width:
            bit = (a >> role) & 1
        else:
            bit = (b >> (role - width)) & 1
        out.append((pair.rail1, bit))
        out.append((pair.rail0, 1 - bit))
    return out


def rtz_stimulus(design: CompiledDesign) -> Stimulus:
    out: Stimulus = []
    for pair in design.netlist.input_pairs:
        out.append((pair.rail1, 0))
        out.append((pair.rail0, 0))
    return out


def pair_stimulus(design: CompiledDesign,
                  bits: dict[str, Optional[int]]) -> Stimulus:
    """Explicit per-label stimulus; a None bit withholds that pair."""
    labels = {p.label: p for p in design.netlist.input_pairs}
    unknown = set(bits) - set(labels)
    if unknown:
        raise ValueError(f"unknown input pairs: {sorted(unknown)}")
    out: Stimulus = []
    for label, bit in bits.items():
        if bit is None:
            continue
        pair = labels[label]
        out.append((pair.rail1, bit))
        out.append((pair.rail0, 1 - bit))
    return out


# ---------------------------------------------------------------------------
# single phases

@dataclass
class PhaseResult:
    status: PhaseStatus
    completion: float
    final_time: float
    events: int
    fail_net: Optional[str]
    stuck_pairs: tuple[str, ...]
    trace: Optional[list[tuple[float, str, int]]]
    rise: dict[str, float]
    fall: dict[str, float]

    @property
    def ok(self) -> bool:
        return self.status is PhaseStatus.OK


def simulate_phase(design: CompiledDesign, state: SimState,
                   stimulus: Stimulus, phase: str,
                   delays: Optional[np.ndarray] = None,
                   monotone: bool = True,
                   watch_nets: Sequence[str] = (),
                   max_events: Optional[int] = None,
                   record_trace: bool = False) -> PhaseResult:
    """Apply `stimulus` at time zero and run the phase to quiescence.

    `phase` is 'data' (completion means every output pair valid, rails
    may only rise when `monotone`) or 'rtz' (completion means every
    pair empty, rails may only fall)."""
    if phase not in ("data", "rtz"):
        raise ValueError(f"phase must be 'data' or 'rtz', got {phase!r}")
    target_data = 1 if phase == "data" else 0
    mono_dir = 0
    if monotone:
        mono_dir = 1 if target_data else -1
    if delays is None:
        delays = design.unit_delays()
    if max_events is None:
        max_events = design.max_events_default

    idx = design.net_index
    src_nets = np.array([idx[n] for n, _ in stimulus], dtype=np.int32)
    src_vals = np.array([v for _, v in stimulus], dtype=np.int8)
    src_times = np.zeros(len(stimulus), dtype=np.float64)

    watch_slot = np.full(design.n_nets, -1, dtype=np.int32)
    for slot, name in enumerate(watch_nets):
        watch_slot[idx[name]] = slot
    watch_rise = np.full(len(watch_nets), -1.0, dtype=np.float64)
    watch_fall = np.full(len(watch_nets), -1.0, dtype=np.float64)

    status, completion, final_time, events, trace, fail_net = _impl.run_phase(
        design.kind, design.gout, design.in_off, design.in_idx,
        design.fan_off, design.fan_idx, delays, design.mate,
        design.pair_r1, design.pair_r0, state.vals, state.proj,
        src_nets, src_vals, src_times, target_data, mono_dir,
        watch_slot, watch_rise, watch_fall, max_events, record_trace)

    stuck: list[str] = []
    if status == PhaseStatus.DEADLOCK:
        for p in design.netlist.output_pairs:
            v1 = state.vals[idx[p.rail1]]
            v0 = state.vals[idx[p.rail0]]
            good = (v1 + v0 == 1) if target_data else (v1 == 0 and v0 == 0)
            if not good:
                stuck.append(p.label)

    named_trace = None
    if record_trace and trace is not None:
        names = design.net_names
        named_trace = [(t, names[n], v) for t, n, v in trace]

    return PhaseResult(
        status=PhaseStatus(status), completion=completion,
        final_time=final_time, events=events,
        fail_net=design.net_names[fail_net] if fail_net >= 0 else None,
        stuck_pairs=tuple(stuck), trace=named_trace,
        rise={n: watch_rise[i] for i, n in enumerate(watch_nets)},
        fall={n: watch_fall[i] for i, n in enumerate(watch_nets)},
    )


def decode_outputs(design: CompiledDesign,
                   state: SimState) -> dict[str, DualRailValue]:
    out = {}
    for p in design.netlist.output_pairs:
        out[p.label] = classify_pair(
            int(state.vals[design.net_index[p.rail1]]),
            int(state.vals[design.net_index[p.rail0]]))
    return out


def decode_sum(design: CompiledDesign,
               state: SimState) -> tuple[int, Optional[int]]:
    """Decode (sum, cout) from the settled output pairs; raises on any
    pair that does not carry a data bit."""
    if design.out_role is None or design.width is None:
        raise ValueError(
            f"design {design.netlist.name!r} has no adder-style ports")
    states = decode_outputs(design, state)
    total = 0
    cout: Optional[int] = None
    for p, role in zip(design.netlist.output_pairs, design.out_role):
        bit = states[p.label].bit
        if bit is None:
            raise ValueError(
                f"pair {p.label!r} is {states[p.label].name}, not data")
        if role >= 0:
            total |= bit << int(role)
        elif role == ROLE_COUT:
            cout = bit
    return total, cout


# ---------------------------------------------------------------------------
# race watches

@dataclass(frozen=True)
class RaceWatch:
    """One section's indication triple: the all-propagate probe, the
    indicated carry pair, and (when present) the alias pair."""

    section: str
    n_net: str
    primary: tuple[str, str]
    alias: Optional[tuple[str, str]]


def derive_race_watches(design: CompiledDesign) -> tuple[RaceWatch, ...]:
    netlist = design.netlist
    probes = netlist.probes
    outputs = {p.label: p for p in netlist.output_pairs}
    watches = []
    for label, net in sorted(probes.items()):
        if label == "N":
            primary = outputs["cout"]
            alias = outputs.get("cout_alias")
            watches.append(RaceWatch(
                section="", n_net=net,
                primary=(primary.rail1, primary.rail0),
                alias=(alias.rail1, alias.rail0) if alias else None))
        elif label.endswith(".N"):
            pfx = label[:-1]
            primary = (probes[f"{pfx}carry1"], probes[f"{pfx}carry0"])
            alias = None
            if f"{pfx}alias1" in probes:
                alias = (probes[f"{pfx}alias1"], probes[f"{pfx}alias0"])
            watches.append(RaceWatch(
                section=label[:-2], n_net=net, primary=primary, alias=alias))
    return tuple(watches)


@dataclass
class RaceReport:
    """Return-phase ordering among carry rails and their N probe.

    An indicated carry rail falling strictly before its section's
    all-propagate probe breaks the indication the C-element is there to
    provide; the alias rail doing so is the expected benign race."""

    indication_violations: tuple[str, ...]
    benign_alias_fires: tuple[str, ...]


def analyze_rtz_races(design: CompiledDesign,
                      watches: Sequence[RaceWatch],
                      pre_vals: np.ndarray,
                      result: PhaseResult) -> RaceReport:
    idx = design.net_index
    violations = []
    fires = []
    for w in watches:
        if not pre_vals[idx[w.n_net]]:
            continue  # section was not all-propagate; nothing to indicate
        n_fall = result.fall[w.n_net]
        if n_fall < 0:
            continue
        for rails, bucket in ((w.primary, violations), (w.alias, fires)):
            if rails is None:
                continue
            high = [r for r in rails if pre_vals[idx[r]]]
            for rail in high:
                t = result.fall[rail]
                if 0 <= t < n_fall:
                    bucket.append(w.section or rail)
    return RaceReport(tuple(violations), tuple(fires))


def watch_nets_for(watches: Sequence[RaceWatch]) -> list[str]:
    nets = []
    for w in watches:
        nets.append(w.n_net)
        nets.extend(w.primary)
        if w.alias:
            nets.extend(w.alias)
    return nets


# ---------------------------------------------------------------------------
# handshake cycles and bulk sweeps

@dataclass
class CycleRecord:
    vector: tuple[int, int, int]
    fail: SweepFail
    data: PhaseResult
    rtz: Optional[PhaseResult]
    decoded: Optional[tuple[int, Optional[int]]]
    races: Optional[RaceReport]

    @property
    def ok(self) -> bool:
        return self.fail is SweepFail.NONE

    @property
    def latency(self) -> float:
        return self.data.completion


@dataclass
class CycleReport:
    records: list[CycleRecord]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.records)

    @property
    def worst_latency(self) -> float:
        lats = [r.latency for r in self.records if r.ok]
        return max(lats) if lats else -1.0

    @property
    def indication_violations(self) -> int:
        return sum(len(r.races.indication_violations)
                   for r in self.records if r.races)

    @property
    def benign_alias_fires(self) -> int:
        return sum(len(r.races.benign_alias_fires)
                   for r in self.records if r.races)


def run_handshake_cycles(design: CompiledDesign,
                         vectors: Sequence[tuple[int, int, int]],
                         delays: Optional[np.ndarray] = None,
                         monotone: bool = True,
                         watch_races: bool = False,
                         max_events: Optional[int] = None,
                         stop_on_fail: bool = True) -> CycleReport:
    """Run full four-phase cycles for a vector sequence.

    Each next phase starts only after the previous one reached
    quiescence, which is how the surrounding handshake environment is
    modeled: completion detection plus settled wires."""
    if delays is None:
        delays = design.unit_delays()
    state = SimState.reset(design)
    watches = derive_race_watches(design) if watch_races else ()
    wnets = watch_nets_for(watches) if watches else []
    records = []
    for a, b, cin in vectors:
        expected = a + b + cin
        fail = SweepFail.NONE
        decoded = None
        races = None
        rtz = None

        data = simulate_phase(design, state, data_stimulus(design, a, b, cin),
                              "data", delays, monotone,
                              max_events=max_events)
        if not data.ok:
            fail = {
                PhaseStatus.DEADLOCK: SweepFail.DEADLOCK_DATA,
                PhaseStatus.INVALID: SweepFail.INVALID,
                PhaseStatus.NONMONOTONE: SweepFail.NONMONOTONE,
                PhaseStatus.EVENT_CAP: SweepFail.EVENT_CAP,
            }[data.status]
        else:
            # mirror the kernel's per-pair decode: only the bits the
            # design produces are compared, in output-pair order
            states = decode_outputs(design, state)
            width = design.width or 0
            total = 0
            cout: Optional[int] = None
            for p, role in zip(design.netlist.output_pairs,
                               design.out_role):
                bit = states[p.label].bit
                if bit is None:
                    fail = SweepFail.UNDECODABLE
                    break
                role = int(role)
                want = (expected >> role) & 1 if role >= 0 else \
                    (expected >> width) & 1
                if bit != want:
                    fail = SweepFail.MISMATCH
                    break
                if role >= 0:
                    total |= bit << role
                elif role == ROLE_COUT:
                    cout = bit
            if fail is SweepFail.NONE:
                decoded = (total, cout)

        if fail is SweepFail.NONE:
            pre_vals = state.vals.copy() if watches else state.vals
            rtz = simulate_phase(design, state, rtz_stimulus(design),
                                 "rtz", delays, monotone,
                                 watch_nets=wnets, max_events=max_events)
            if watches:
                races = analyze_rtz_races(design, watches, pre_vals, rtz)
            if not rtz.ok:
                fail = {
                    PhaseStatus.DEADLOCK: SweepFail.DEADLOCK_RTZ,
                    PhaseStatus.INVALID: SweepFail.INVALID,
                    PhaseStatus.NONMONOTONE: SweepFail.NONMONOTONE,
                    PhaseStatus.EVENT_CAP: SweepFail.EVENT_CAP,
                }[rtz.status]

        records.append(CycleRecord(vector=(a, b, cin), fail=fail,
                                   data=data, rtz=rtz, decoded=decoded,
                                   races=races))
        if fail is not SweepFail.NONE and stop_on_fail:
            break
    return CycleReport(records)


@dataclass
class SweepResult:
    n_ok: int
    n_fail: int
    first_fail_index: int
    first_fail: SweepFail
    worst_latency: float
    worst_index: int
    total_events: int
    latencies: Optional[np.ndarray]

    @property
    def ok(self) -> bool:
        return self.n_fail == 0


def sweep_vectors(design: CompiledDesign,
                  vec_a: Sequence[int], vec_b: Sequence[int],
                  vec_cin: Sequence[int],
                  delays: Optional[np.ndarray] = None,
                  monotone: bool = True,
                  stop_on_fail: bool = True,
                  max_events: Optional[int] = None,
                  want_latencies: bool = False) -> SweepResult:
    """Bulk oracle sweep: every vector runs data + return phases from a
    fresh reset, checked against integer addition inside the kernel."""
    if design.in_role is None or design.out_role is None:
        raise ValueError(
            f"design {design.netlist.name!r} has no adder-style ports")
    if delays is None:
        delays = design.unit_delays()
    if max_events is None:
        max_events = design.max_events_default
    a = np.asarray(vec_a, dtype=np.uint64)
    b = np.asarray(vec_b, dtype=np.uint64)
    cin = np.asarray(vec_cin, dtype=np.int8)
    if not len(a) == len(b) == len(cin):
        raise ValueError("vector arrays must have equal length")
    state = SimState.reset(design)
    lat = np.full(len(a) if want_latencies else 0, -1.0, dtype=np.float64)

    (n_ok, n_fail, first_idx, first_code, worst_lat, worst_idx,
     total_events) = _impl.run_vector_sweep(
        design.kind, design.gout, design.in_off, design.in_idx,
        design.fan_off, design.fan_idx, delays, design.mate,
        design.pair_r1, design.pair_r0, design.out_role,
        design.in_r1, design.in_r0, design.in_role, design.width,
        a, b, cin, state.vals, state.proj,
        1 if monotone else 0, max_events, 1 if stop_on_fail else 0, lat)

    return SweepResult(
        n_ok=n_ok, n_fail=n_fail, first_fail_index=first_idx,
        first_fail=SweepFail(first_code), worst_latency=worst_lat,
        worst_index=worst_idx, total_events=total_events,
        latencies=lat if want_latencies else None)
