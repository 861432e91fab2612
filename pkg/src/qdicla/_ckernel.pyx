# cython: language_level=3, boundscheck=False, wraparound=False
# cython: initializedcheck=False, cdivision=True
"""Compiled event kernel; the twin of `qdicla._kernel`.

Entry points, argument order, event semantics, status codes, and result
tuples match the pure kernel exactly; the parity tests compare whole
transition traces between the two.  See `_kernel.py` for the shared
semantics.
"""

from cpython.mem cimport PyMem_Free, PyMem_Malloc, PyMem_Realloc
from libc.stdlib cimport qsort

INV, BUF = 0, 1
AND2, AND3, AND4 = 2, 3, 4
OR2, OR3, OR4 = 5, 6, 7
AO22, ALIAS = 8, 9
C2, C3 = 10, 11

ST_OK, ST_DEADLOCK, ST_INVALID, ST_NONMONO, ST_CAP = 0, 1, 2, 3, 4
FAIL_NONE, FAIL_MISMATCH, FAIL_UNDECODABLE = 0, 1, 2
FAIL_DEADLOCK_DATA, FAIL_DEADLOCK_RTZ = 3, 4
FAIL_INVALID, FAIL_NONMONO, FAIL_CAP = 5, 6, 7

cdef int K_INV = 0
cdef int K_AND2 = 2
cdef int K_OR2 = 5
cdef int K_AO22 = 8
cdef int K_ALIAS = 9
cdef int K_C2 = 10

cdef int S_OK = 0
cdef int S_DEADLOCK = 1
cdef int S_INVALID = 2
cdef int S_NONMONO = 3
cdef int S_CAP = 4


# binary heap over (time, net, value), ordered like the pure kernel's
# heapq tuples
cdef struct Heap:
    double* t
    int* n
    signed char* v
    Py_ssize_t size
    Py_ssize_t cap


cdef int heap_init(Heap* h, Py_ssize_t cap) except -1:
    if cap < 16:
        cap = 16
    h.t = <double*> PyMem_Malloc(cap * sizeof(double))
    h.n = <int*> PyMem_Malloc(cap * sizeof(int))
    h.v = <signed char*> PyMem_Malloc(cap * sizeof(signed char))
    if h.t == NULL or h.n == NULL or h.v == NULL:
        raise MemoryError()
    h.size = 0
    h.cap = cap
    return 0


cdef void heap_free(Heap* h) noexcept:
    PyMem_Free(h.t)
    PyMem_Free(h.n)
    PyMem_Free(h.v)


cdef inline bint heap_lt(Heap* h, Py_ssize_t a, Py_ssize_t b) noexcept:
    if h.t[a] != h.t[b]:
        return h.t[a] < h.t[b]
    if h.n[a] != h.n[b]:
        return h.n[a] < h.n[b]
    return h.v[a] < h.v[b]


cdef inline void heap_swap(Heap* h, Py_ssize_t a, Py_ssize_t b) noexcept:
    cdef double tt = h.t[a]
    cdef int tn = h.n[a]
    cdef signed char tv = h.v[a]
    h.t[a] = h.t[b]; h.n[a] = h.n[b]; h.v[a] = h.v[b]
    h.t[b] = tt; h.n[b] = tn; h.v[b] = tv


cdef int heap_push(Heap* h, double t, int n, signed char v) except -1:
    cdef Py_ssize_t i, parent
    if h.size == h.cap:
        h.cap *= 2
        h.t = <double*> PyMem_Realloc(h.t, h.cap * sizeof(double))
        h.n = <int*> PyMem_Realloc(h.n, h.cap * sizeof(int))
        h.v = <signed char*> PyMem_Realloc(h.v, h.cap * sizeof(signed char))
        if h.t == NULL or h.n == NULL or h.v == NULL:
            raise MemoryError()
    i = h.size
    h.t[i] = t
    h.n[i] = n
    h.v[i] = v
    h.size += 1
    while i > 0:
        parent = (i - 1) >> 1
        if not heap_lt(h, i, parent):
            break
        heap_swap(h, i, parent)
        i = parent
    return 0


cdef void heap_pop(Heap* h, double* t_out, int* n_out,
                   signed char* v_out) noexcept:
    cdef Py_ssize_t i = 0, child
    cdef Py_ssize_t last = h.size - 1
    t_out[0] = h.t[0]
    n_out[0] = h.n[0]
    v_out[0] = h.v[0]
    h.t[0] = h.t[last]
    h.n[0] = h.n[last]
    h.v[0] = h.v[last]
    h.size = last
    while True:
        child = 2 * i + 1
        if child >= last:
            break
        if child + 1 < last and heap_lt(h, child + 1, child):
            child += 1
        if not heap_lt(h, child, i):
            break
        heap_swap(h, i, child)
        i = child


cdef int _cmp_int(const void* a, const void* b) noexcept nogil:
    cdef int x = (<const int*> a)[0]
    cdef int y = (<const int*> b)[0]
    return (x > y) - (x < y)


cdef inline signed char _eval(int code, int lo, int hi,
                              const int* in_idx,
                              const signed char* vals,
                              signed char prev) noexcept:
    cdef int j, s
    if code == K_AO22 or code == K_ALIAS:
        return (vals[in_idx[lo]] & vals[in_idx[lo + 1]]) | \
               (vals[in_idx[lo + 2]] & vals[in_idx[lo + 3]])
    if code >= K_C2:
        s = 0
        for j in range(lo, hi):
            s += vals[in_idx[j]]
        if s == hi - lo:
            return 1
        if s == 0:
            return 0
        return prev
    if code >= K_OR2:
        for j in range(lo, hi):
            if vals[in_idx[j]]:
                return 1
        return 0
    if code >= K_AND2:
        for j in range(lo, hi):
            if not vals[in_idx[j]]:
                return 0
        return 1
    if code == K_INV:
        return 1 - vals[in_idx[lo]]
    return vals[in_idx[lo]]


def eval_gate(int code, inputs, int prev):
    """Test hook: run the kernel's gate evaluation on explicit inputs."""
    cdef signed char buf[8]
    cdef int idx[8]
    cdef int i, n = len(inputs)
    if n < 1 or n > 8:
        raise ValueError("1 to 8 inputs")
    for i in range(n):
        buf[i] = inputs[i]
        idx[i] = i
    return int(_eval(code, 0, n, idx, buf, <signed char> prev))


cdef int _phase_core(
        const int* kind, const int* gout,
        const int* in_off, const int* in_idx,
        const int* fan_off, const int* fan_idx,
        const double* delay, const int* mate,
        const int* p1, const int* p0, Py_ssize_t n_pairs,
        signed char* vals, signed char* proj,
        Heap* heap, int target_data, int mono,
        const int* wslot, double* wrise, double* wfall,
        long long max_events, int record_trace, list trace,
        long long* stamp, int* touched,
        long long* batch_io, double* completion_out, double* tfinal_out,
        long long* nevents_out, int* failnet_out) except? -9:
    cdef double t, ev_t, complete_since
    cdef long long n_events = 0
    cdef long long batch = batch_io[0]
    cdef Py_ssize_t i
    cdef int net, g, m, w, j, lo, hi, code, n_touched, ok
    cdef signed char val, old, new

    ok = 1
    if target_data:
        for i in range(n_pairs):
            if vals[p1[i]] + vals[p0[i]] != 1:
                ok = 0
                break
    else:
        for i in range(n_pairs):
            if vals[p1[i]] or vals[p0[i]]:
                ok = 0
                break
    complete_since = 0.0 if ok else -1.0
    tfinal_out[0] = 0.0
    failnet_out[0] = -1
    nevents_out[0] = 0

    while heap.size:
        t = heap.t[0]
        tfinal_out[0] = t
        batch += 1
        n_touched = 0
        while heap.size and heap.t[0] == t:
            heap_pop(heap, &ev_t, &net, &val)
            n_events += 1
            if n_events > max_events:
                batch_io[0] = batch
                completion_out[0] = -1.0
                nevents_out[0] = n_events
                failnet_out[0] = net
                return S_CAP
            old = vals[net]
            if old == val:
                continue
            vals[net] = val
            if record_trace:
                trace.append((t, net, int(val)))
            if val:
                m = mate[net]
                if m >= 0 and vals[m]:
                    batch_io[0] = batch
                    completion_out[0] = -1.0
                    nevents_out[0] = n_events
                    failnet_out[0] = net
                    return S_INVALID
                if mono < 0:
                    batch_io[0] = batch
                    completion_out[0] = -1.0
                    nevents_out[0] = n_events
                    failnet_out[0] = net
                    return S_NONMONO
            elif mono > 0:
                batch_io[0] = batch
                completion_out[0] = -1.0
                nevents_out[0] = n_events
                failnet_out[0] = net
                return S_NONMONO
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
                    touched[n_touched] = g
                    n_touched += 1
        if n_touched > 1:
            qsort(touched, n_touched, sizeof(int), _cmp_int)
        for j in range(n_touched):
            g = touched[j]
            lo = in_off[g]
            hi = in_off[g + 1]
            code = kind[g]
            new = _eval(code, lo, hi, in_idx, vals, proj[g])
            if new != proj[g]:
                proj[g] = new
                heap_push(heap, t + delay[g], gout[g], new)
        ok = 1
        if target_data:
            for i in range(n_pairs):
                if vals[p1[i]] + vals[p0[i]] != 1:
                    ok = 0
                    break
        else:
            for i in range(n_pairs):
                if vals[p1[i]] or vals[p0[i]]:
                    ok = 0
                    break
        if ok:
            if complete_since < 0.0:
                complete_since = t
        else:
            complete_since = -1.0

    batch_io[0] = batch
    completion_out[0] = complete_since
    nevents_out[0] = n_events
    return S_OK if complete_since >= 0.0 else S_DEADLOCK


def run_phase(kind, gout, in_off, in_idx, fan_off, fan_idx, delay, mate,
              pair_r1, pair_r0, vals, proj,
              src_nets, src_vals, src_times,
              int target_data, int monotone_dir,
              watch_slot, watch_rise, watch_fall,
              long long max_events, record_trace):
    """Single-phase entry point over numpy state arrays."""
    cdef const int[::1] kind_v = kind
    cdef const int[::1] gout_v = gout
    cdef const int[::1] in_off_v = in_off
    cdef const int[::1] in_idx_v = in_idx
    cdef const int[::1] fan_off_v = fan_off
    cdef const int[::1] fan_idx_v = fan_idx
    cdef const double[::1] delay_v = delay
    cdef const int[::1] mate_v = mate
    cdef const int[::1] p1_v = pair_r1
    cdef const int[::1] p0_v = pair_r0
    cdef signed char[::1] vals_v = vals
    cdef signed char[::1] proj_v = proj
    cdef const int[::1] srcn_v = src_nets
    cdef const signed char[::1] srcv_v = src_vals
    cdef const double[::1] srct_v = src_times
    cdef const int[::1] wslot_v = watch_slot
    cdef double[::1] wrise_v = watch_rise
    cdef double[::1] wfall_v = watch_fall

    cdef Py_ssize_t n_gates = kind_v.shape[0]
    cdef Py_ssize_t n_src = srcn_v.shape[0]
    cdef Py_ssize_t i
    cdef Heap heap
    cdef long long* stamp = NULL
    cdef int* touched = NULL
    cdef long long batch = 0, n_events = 0
    cdef double completion = -1.0, t_final = 0.0
    cdef int status, fail_net = -1
    cdef int do_trace = 1 if record_trace else 0
    cdef list trace = [] if do_trace else None

    cdef const int* kind_p = &kind_v[0] if n_gates else NULL
    cdef const int* gout_p = &gout_v[0] if n_gates else NULL
    cdef const int* in_off_p = &in_off_v[0]
    cdef const int* in_idx_p = &in_idx_v[0] if in_idx_v.shape[0] else NULL
    cdef const int* fan_off_p = &fan_off_v[0]
    cdef const int* fan_idx_p = &fan_idx_v[0] if fan_idx_v.shape[0] else NULL
    cdef const double* delay_p = &delay_v[0] if n_gates else NULL
    cdef const int* mate_p = &mate_v[0]
    cdef const int* p1_p = &p1_v[0] if p1_v.shape[0] else NULL
    cdef const int* p0_p = &p0_v[0] if p0_v.shape[0] else NULL
    cdef signed char* proj_p = &proj_v[0] if n_gates else NULL
    cdef const int* wslot_p = &wslot_v[0]
    cdef double* wrise_p = &wrise_v[0] if wrise_v.shape[0] else NULL
    cdef double* wfall_p = &wfall_v[0] if wfall_v.shape[0] else NULL

    heap_init(&heap, n_src + 16)
    stamp = <long long*> PyMem_Malloc(max(1, n_gates) * sizeof(long long))
    touched = <int*> PyMem_Malloc(max(1, n_gates) * sizeof(int))
    if stamp == NULL or touched == NULL:
        heap_free(&heap)
        PyMem_Free(stamp)
        PyMem_Free(touched)
        raise MemoryError()
    for i in range(n_gates):
        stamp[i] = 0
    try:
        for i in range(n_src):
            heap_push(&heap, srct_v[i], srcn_v[i], srcv_v[i])
        status = _phase_core(
            kind_p, gout_p, in_off_p, in_idx_p, fan_off_p, fan_idx_p,
            delay_p, mate_p, p1_p, p0_p, p1_v.shape[0],
            &vals_v[0], proj_p,
            &heap, target_data, monotone_dir,
            wslot_p, wrise_p, wfall_p,
            max_events, do_trace, trace,
            stamp, touched, &batch, &completion, &t_final,
            &n_events, &fail_net)
    finally:
        heap_free(&heap)
        PyMem_Free(stamp)
        PyMem_Free(touched)
    return (status, completion, t_final, int(n_events), trace, fail_net)


def run_vector_sweep(kind, gout, in_off, in_idx, fan_off, fan_idx, delay,
                     mate, pair_r1, pair_r0, out_role,
                     in_r1, in_r0, in_role, int width,
                     vec_a, vec_b, vec_cin,
                     vals, proj, int monotone, long long max_events,
                     int stop_on_fail, lat_out):
    """Run whole handshake cycles for a batch of addition vectors.

    Same contract as the pure kernel: state carries over between
    vectors, latency is recorded for passing data phases, the first
    failure is reported by index and code.
    """
    cdef const int[::1] kind_v = kind
    cdef const int[::1] gout_v = gout
    cdef const int[::1] in_off_v = in_off
    cdef const int[::1] in_idx_v = in_idx
    cdef const int[::1] fan_off_v = fan_off
    cdef const int[::1] fan_idx_v = fan_idx
    cdef const double[::1] delay_v = delay
    cdef const int[::1] mate_v = mate
    cdef const int[::1] p1_v = pair_r1
    cdef const int[::1] p0_v = pair_r0
    cdef const int[::1] ir1_v = in_r1
    cdef const int[::1] ir0_v = in_r0
    cdef signed char[::1] vals_v = vals
    cdef signed char[::1] proj_v = proj
    cdef double[::1] lat_v = lat_out

    cdef Py_ssize_t n_gates = kind_v.shape[0]
    cdef Py_ssize_t n_nets = vals_v.shape[0]
    cdef Py_ssize_t n_in = ir1_v.shape[0]
    cdef Py_ssize_t n_pairs = p1_v.shape[0]
    cdef Py_ssize_t n_vec = len(vec_a)
    cdef int record_lat = 1 if lat_v.shape[0] == n_vec else 0

    cdef const int* kind_p = &kind_v[0] if n_gates else NULL
    cdef const int* gout_p = &gout_v[0] if n_gates else NULL
    cdef const int* in_off_p = &in_off_v[0]
    cdef const int* in_idx_p = &in_idx_v[0] if in_idx_v.shape[0] else NULL
    cdef const int* fan_off_p = &fan_off_v[0]
    cdef const int* fan_idx_p = &fan_idx_v[0] if fan_idx_v.shape[0] else NULL
    cdef const double* delay_p = &delay_v[0] if n_gates else NULL
    cdef const int* mate_p = &mate_v[0]
    cdef const int* p1_p = &p1_v[0] if n_pairs else NULL
    cdef const int* p0_p = &p0_v[0] if n_pairs else NULL
    cdef signed char* proj_p = &proj_v[0] if n_gates else NULL

    cdef Heap heap
    cdef long long* stamp = NULL
    cdef int* touched = NULL
    cdef long long* roles = NULL
    cdef long long* iroles = NULL
    cdef int* no_watch = NULL
    cdef Py_ssize_t i, v
    cdef long long batch = 0, n_events = 0, total_events = 0
    cdef long long n_ok = 0, n_fail = 0
    cdef long long first_fail_index = -1
    cdef int first_fail_code = FAIL_NONE
    cdef double worst_latency = -1.0
    cdef long long worst_index = -1
    cdef double completion = -1.0, t_final = 0.0
    cdef int status, fail_net, fail, mono_data, mono_rtz
    cdef unsigned long long a, b, expected
    cdef long long role
    cdef int bit, cin, v1, v0, want

    mono_data = 1 if monotone else 0
    mono_rtz = -1 if monotone else 0

    heap_init(&heap, 2 * n_in + 16)
    stamp = <long long*> PyMem_Malloc(max(1, n_gates) * sizeof(long long))
    touched = <int*> PyMem_Malloc(max(1, n_gates) * sizeof(int))
    roles = <long long*> PyMem_Malloc(max(1, n_pairs) * sizeof(long long))
    iroles = <long long*> PyMem_Malloc(max(1, n_in) * sizeof(long long))
    no_watch = <int*> PyMem_Malloc(max(1, n_nets) * sizeof(int))
    if stamp == NULL or touched == NULL or roles == NULL or \
            iroles == NULL or no_watch == NULL:
        heap_free(&heap)
        PyMem_Free(stamp)
        PyMem_Free(touched)
        PyMem_Free(roles)
        PyMem_Free(iroles)
        PyMem_Free(no_watch)
        raise MemoryError()
    for i in range(n_gates):
        stamp[i] = 0
    for i in range(n_pairs):
        roles[i] = out_role[i]
    for i in range(n_in):
        iroles[i] = in_role[i]
    for i in range(n_nets):
        no_watch[i] = -1

    try:
        for v in range(n_vec):
            a = vec_a[v]
            b = vec_b[v]
            cin = vec_cin[v]
            fail = FAIL_NONE

            heap.size = 0
            for i in range(n_in):
                role = iroles[i]
                if role < 0:
                    bit = cin
                elif role < width:
                    bit = <int> ((a >> role) & 1)
                else:
                    bit = <int> ((b >> (role - width)) & 1)
                heap_push(&heap, 0.0, ir1_v[i], <signed char> bit)
                heap_push(&heap, 0.0, ir0_v[i], <signed char> (1 - bit))
            status = _phase_core(
                kind_p, gout_p, in_off_p, in_idx_p, fan_off_p, fan_idx_p,
                delay_p, mate_p, p1_p, p0_p, n_pairs,
                &vals_v[0], proj_p,
                &heap, 1, mono_data, no_watch, NULL, NULL,
                max_events, 0, None, stamp, touched,
                &batch, &completion, &t_final, &n_events, &fail_net)
            total_events += n_events

            if status != S_OK:
                if status == S_DEADLOCK:
                    fail = FAIL_DEADLOCK_DATA
                elif status == S_INVALID:
                    fail = FAIL_INVALID
                elif status == S_NONMONO:
                    fail = FAIL_NONMONO
                else:
                    fail = FAIL_CAP
            else:
                expected = a + b + <unsigned long long> cin
                for i in range(n_pairs):
                    v1 = vals_v[p1_v[i]]
                    v0 = vals_v[p0_v[i]]
                    if v1 + v0 != 1:
                        fail = FAIL_UNDECODABLE
                        break
                    role = roles[i]
                    if role >= 0:
                        want = <int> ((expected >> role) & 1)
                    else:
                        want = <int> ((expected >> width) & 1)
                    if v1 != want:
                        fail = FAIL_MISMATCH
                        break
                if fail == FAIL_NONE:
                    if record_lat:
                        lat_v[v] = completion
                    if completion > worst_latency:
                        worst_latency = completion
                        worst_index = v

            if fail == FAIL_NONE:
                heap.size = 0
                for i in range(n_in):
                    heap_push(&heap, 0.0, ir1_v[i], 0)
                    heap_push(&heap, 0.0, ir0_v[i], 0)
                status = _phase_core(
                    kind_p, gout_p, in_off_p, in_idx_p, fan_off_p,
                    fan_idx_p, delay_p, mate_p, p1_p, p0_p, n_pairs,
                    &vals_v[0], proj_p,
                    &heap, 0, mono_rtz, no_watch, NULL, NULL,
                    max_events, 0, None, stamp, touched,
                    &batch, &completion, &t_final, &n_events, &fail_net)
                total_events += n_events
                if status != S_OK:
                    if status == S_DEADLOCK:
                        fail = FAIL_DEADLOCK_RTZ
                    elif status == S_INVALID:
                        fail = FAIL_INVALID
                    elif status == S_NONMONO:
                        fail = FAIL_NONMONO
                    else:
                        fail = FAIL_CAP

            if fail == FAIL_NONE:
                n_ok += 1
            else:
                n_fail += 1
                if record_lat:
                    lat_v[v] = -1.0
                if first_fail_index < 0:
                    first_fail_index = v
                    first_fail_code = fail
                if stop_on_fail:
                    break
    finally:
        heap_free(&heap)
        PyMem_Free(stamp)
        PyMem_Free(touched)
        PyMem_Free(roles)
        PyMem_Free(iroles)
        PyMem_Free(no_watch)

    return (int(n_ok), int(n_fail), int(first_fail_index),
            int(first_fail_code), worst_latency, int(worst_index),
            int(total_events))
