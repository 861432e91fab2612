"""Pure-Python event kernel.

This module and `_ckernel.pyx` are twins: same entry points, same event
semantics, bit-identical results.  The compiled twin is picked up by
`qdicla.sim` when it built; this one is the always-available fallback
and the executable reference for the parity tests.

Semantics, shared by both kernels:

* Transport-delay model.  A gate whose projected output changes
  schedules one event at `now + delay[gate]`; `proj` tracks the value
  the output will hold once every pending event commits, so a gate only
  schedules when its settled value actually changes.
* The event heap orders by (time, net).  All events carrying the exact
  same time commit as one batch, in pop order; the gates fed by the
  changed nets are deduplicated with a stamp array and evaluated in
  ascending gate order.  C-elements evaluate against `proj` as their
  held state.
* `completion` is the time the output-pair condition (every pair valid
  for a data phase, every pair empty for a return-to-zero phase) last
  became true, -1.0 while it does not hold, 0.0 if it held before any
  event.  Quiescence without completion is a deadlock.
* Optional monitors: dual-rail invalid states on mated nets, monotone
  direction per phase, and first rise/fall times on watched nets.

Statuses: 0 ok, 1 deadlock, 2 invalid pair, 3 monotonicity violation,
4 event budget exhausted.  Sweep failure codes: 0 none, 1 sum mismatch,
2 undecodable output, 3 data-phase deadlock, 4 return-phase deadlock,
5 invalid pair, 6 monotonicity violation, 7 event budget exhausted.
"""

from __future__ import annotations

import heapq

# cell kind codes, aligned with cells.KIND_CODES (checked by tests)
INV, BUF = 0, 1
AND2, AND3, AND4 = 2, 3, 4
OR2, OR3, OR4 = 5, 6, 7
AO22, ALIAS = 8, 9
C2, C3 = 10, 11

ST_OK, ST_DEADLOCK, ST_INVALID, ST_NONMONO, ST_CAP = 0, 1, 2, 3, 4
FAIL_NONE, FAIL_MISMATCH, FAIL_UNDECODABLE = 0, 1, 2
FAIL_DEADLOCK_DATA, FAIL_DEADLOCK_RTZ = 3, 4
FAIL_INVALID, FAIL_NONMONO, FAIL_CAP = 5, 6, 7


def _phase(kind, gout, in_off, in_idx, fan_off, fan_idx, delay, mate,
           p1, p0, vals, proj, src, target_data, mono, wslot, wrise, wfall,
           max_events, record_trace, stamp, batch_base):
    """Run one phase to quiescence over plain-list state.

    Returns (status, completion, t_final, n_events, trace, fail_net,
    next_batch_base).
    """
    n_pairs = len(p1)

    def pairs_ok():
        if target_data:
            for i in range(n_pairs):
                if vals[p1[i]] + vals[p0[i]] != 1:
                    return False
        else:
            for i in range(n_pairs):
                if vals[p1[i]] or vals[p0[i]]:
                    return False
        return True

    heap = list(src)
    heapq.heapify(heap)
    complete_since = 0.0 if pairs_ok() else -1.0
    trace = [] if record_trace else None
    n_events = 0
    t_final = 0.0
    batch = batch_base

    while heap:
        t = heap[0][0]
        t_final = t
        batch += 1
        touched = []
        while heap and heap[0][0] == t:
            _, net, val = heapq.heappop(heap)
            n_events += 1
            if n_events > max_events:
                return (ST_CAP, -1.0, t, n_events, trace, net, batch)
            old = vals[net]
            if old == val:
                continue
            vals[net] = val
            if record_trace:
                trace.append((t, net, val))
            if val:
                m = mate[net]
                if m >= 0 and vals[m]:
                    return (ST_INVALID, -1.0, t, n_events, trace, net, batch)
                if mono < 0:
                    return (ST_NONMONO, -1.0, t, n_events, trace, net, batch)
            elif mono > 0:
                return (ST_NONMONO, -1.0, t, n_events, trace, net, batch)
            w = wslot[net]
            if w >= 0:
                if val:
                    if wrise[w] < 0.0:
                        wrise[w] = t
                elif wfall[w] < 0.0:
                    wfall[w] = t
            for j in range(fan_off[net], fan_off[net + 1]):
                g = fan_idx[j]
                if stamp[g] != batch:
                    stamp[g] = batch
                    touched.append(g)
        touched.sort()
        for g in touched:
            lo = in_off[g]
            hi = in_off[g + 1]
            code = kind[g]
            if code == AO22 or code == ALIAS:
                new = (vals[in_idx[lo]] & vals[in_idx[lo + 1]]) | \
                      (vals[in_idx[lo + 2]] & vals[in_idx[lo + 3]])
            elif code >= C2:
                s = 0
                for j in range(lo, hi):
                    s += vals[in_idx[j]]
                if s == hi - lo:
                    new = 1
                elif s == 0:
                    new = 0
                else:
                    new = proj[g]
            elif code >= OR2:
                new = 0
                for j in range(lo, hi):
                    if vals[in_idx[j]]:
                        new = 1
                        break
            elif code >= AND2:
                new = 1
                for j in range(lo, hi):
                    if not vals[in_idx[j]]:
                        new = 0
                        break
            elif code == INV:
                new = 1 - vals[in_idx[lo]]
            else:
                new = vals[in_idx[lo]]
            if new != proj[g]:
                proj[g] = new
                heapq.heappush(heap, (t + delay[g], gout[g], new))
        ok = pairs_ok()
        if ok:
            if complete_since < 0.0:
                complete_since = t
        else:
            complete_since = -1.0

    status = ST_OK if complete_since >= 0.0 else ST_DEADLOCK
    return (status, complete_since, t_final, n_events, trace, -1, batch)


def run_phase(kind, gout, in_off, in_idx, fan_off, fan_idx, delay, mate,
              pair_r1, pair_r0, vals, proj,
              src_nets, src_vals, src_times,
              target_data, monotone_dir,
              watch_slot, watch_rise, watch_fall,
              max_events, record_trace):
    """Single-phase entry point over numpy state arrays."""
    kindL = kind.tolist()
    goutL = gout.tolist()
    in_offL = in_off.tolist()
    in_idxL = in_idx.tolist()
    fan_offL = fan_off.tolist()
    fan_idxL = fan_idx.tolist()
    delayL = delay.tolist()
    mateL = mate.tolist()
    p1L = pair_r1.tolist()
    p0L = pair_r0.tolist()
    valsL = vals.tolist()
    projL = proj.tolist()
    wslotL = watch_slot.tolist()
    src = [(float(src_times[i]), int(src_nets[i]), int(src_vals[i]))
           for i in range(len(src_nets))]
    stamp = [0] * len(kindL)

    status, completion, t_final, n_events, trace, fail_net, _ = _phase(
        kindL, goutL, in_offL, in_idxL, fan_offL, fan_idxL, delayL, mateL,
        p1L, p0L, valsL, projL, src, target_data, monotone_dir,
        wslotL, watch_rise, watch_fall, max_events, record_trace, stamp, 0)

    vals[:] = valsL
    proj[:] = projL
    return (status, completion, t_final, n_events, trace, fail_net)


def run_vector_sweep(kind, gout, in_off, in_idx, fan_off, fan_idx, delay,
                     mate, pair_r1, pair_r0, out_role,
                     in_r1, in_r0, in_role, width,
                     vec_a, vec_b, vec_cin,
                     vals, proj, monotone, max_events, stop_on_fail,
                     lat_out):
    """Run whole handshake cycles for a batch of addition vectors.

    Each vector runs a data phase, a decode-and-compare against integer
    addition, and a return-to-zero phase; state carries over between
    vectors as it would in silicon.  Returns (n_ok, n_fail,
    first_fail_index, first_fail_code, worst_latency, worst_index,
    total_events).
    """
    kindL = kind.tolist()
    goutL = gout.tolist()
    in_offL = in_off.tolist()
    in_idxL = in_idx.tolist()
    fan_offL = fan_off.tolist()
    fan_idxL = fan_idx.tolist()
    delayL = delay.tolist()
    mateL = mate.tolist()
    p1L = pair_r1.tolist()
    p0L = pair_r0.tolist()
    roleL = out_role.tolist()
    ir1 = in_r1.tolist()
    ir0 = in_r0.tolist()
    iroleL = in_role.tolist()
    aL = vec_a.tolist()
    bL = vec_b.tolist()
    cinL = vec_cin.tolist()
    valsL = vals.tolist()
    projL = proj.tolist()
    stamp = [0] * len(kindL)
    no_watch = [-1] * len(valsL)
    empty = ()

    n_in = len(ir1)
    n_pairs = len(p1L)
    n_vec = len(aL)
    record_lat = len(lat_out) == n_vec
    n_ok = 0
    n_fail = 0
    first_fail_index = -1
    first_fail_code = FAIL_NONE
    worst_latency = -1.0
    worst_index = -1
    total_events = 0
    batch = 0
    mono_data = 1 if monotone else 0
    mono_rtz = -1 if monotone else 0
    status_map_data = {ST_DEADLOCK: FAIL_DEADLOCK_DATA, ST_INVALID: FAIL_INVALID,
                       ST_NONMONO: FAIL_NONMONO, ST_CAP: FAIL_CAP}
    status_map_rtz = {ST_DEADLOCK: FAIL_DEADLOCK_RTZ, ST_INVALID: FAIL_INVALID,
                      ST_NONMONO: FAIL_NONMONO, ST_CAP: FAIL_CAP}

    for v in range(n_vec):
        a = aL[v]
        b = bL[v]
        cin = cinL[v]
        fail = FAIL_NONE

        src = []
        for j in range(n_in):
            r = iroleL[j]
            if r < 0:
                bit = cin
            elif r < width:
                bit = (a >> r) & 1
            else:
                bit = (b >> (r - width)) & 1
            src.append((0.0, ir1[j], bit))
            src.append((0.0, ir0[j], 1 - bit))
        status, completion, _, n_events, _, _, batch = _phase(
            kindL, goutL, in_offL, in_idxL, fan_offL, fan_idxL, delayL,
            mateL, p1L, p0L, valsL, projL, src, 1, mono_data,
            no_watch, empty, empty, max_events, False, stamp, batch)
        total_events += n_events

        if status != ST_OK:
            fail = status_map_data[status]
        else:
            expected = a + b + cin
            for i in range(n_pairs):
                v1 = valsL[p1L[i]]
                v0 = valsL[p0L[i]]
                if v1 + v0 != 1:
                    fail = FAIL_UNDECODABLE
                    break
                r = roleL[i]
                want = (expected >> r) & 1 if r >= 0 else \
                    (expected >> width) & 1
                if v1 != want:
                    fail = FAIL_MISMATCH
                    break
            if fail == FAIL_NONE:
                if record_lat:
                    lat_out[v] = completion
                if completion > worst_latency:
                    worst_latency = completion
                    worst_index = v

        if fail == FAIL_NONE:
            src = []
            for j in range(n_in):
                src.append((0.0, ir1[j], 0))
                src.append((0.0, ir0[j], 0))
            status, _, _, n_events, _, _, batch = _phase(
                kindL, goutL, in_offL, in_idxL, fan_offL, fan_idxL, delayL,
                mateL, p1L, p0L, valsL, projL, src, 0, mono_rtz,
                no_watch, empty, empty, max_events, False, stamp, batch)
            total_events += n_events
            if status != ST_OK:
                fail = status_map_rtz[status]

        if fail == FAIL_NONE:
            n_ok += 1
        else:
            n_fail += 1
            if record_lat:
                lat_out[v] = -1.0
            if first_fail_index < 0:
                first_fail_index = v
                first_fail_code = fail
            if stop_on_fail:
                break

    vals[:] = valsL
    proj[:] = projL
    return (n_ok, n_fail, first_fail_index, first_fail_code,
            worst_latency, worst_index, total_events)
