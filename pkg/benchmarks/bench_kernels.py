"""Timing comparison between the two event kernels.

Runs the same oracle sweeps through the pure-python kernel and the
compiled one, checks that every result field matches, and reports the
wall-clock ratio.  Usage:

    python3 benchmarks/bench_kernels.py [--vectors N] [--seed S]
                                        [--repeats R]
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from qdicla import _kernel
from qdicla.generators import AdderConfig, generate
from qdicla.sim import CompiledDesign, SimState

try:
    from qdicla import _ckernel
except ImportError:
    _ckernel = None

DESIGNS = (
    AdderConfig(arch="rca", width=8),
    AdderConfig(arch="rca", width=32),
    AdderConfig(arch="scbcla", width=32),
    AdderConfig(arch="scbcla", width=32, alias=True),
    AdderConfig(arch="scbcla", width=32, alias=True, hybrid_rca=True),
    AdderConfig(arch="rcla", width=32),
)


def sweep_once(impl, design: CompiledDesign, a, b, cin):
    state = SimState.reset(design)
    lat = np.full(len(a), -1.0, dtype=np.float64)
    res = impl.run_vector_sweep(
        design.kind, design.gout, design.in_off, design.in_idx,
        design.fan_off, design.fan_idx, design.unit_delays(), design.mate,
        design.pair_r1, design.pair_r0, design.out_role,
        design.in_r1, design.in_r0, design.in_role, design.width,
        a, b, cin, state.vals, state.proj,
        1, design.max_events_default, 1, lat)
    return res, lat, state


def timed(impl, design, a, b, cin, repeats: int):
    best = float("inf")
    baseline = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = sweep_once(impl, design, a, b, cin)
        best = min(best, time.perf_counter() - t0)
        baseline = out
    return best, baseline


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--vectors", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if _ckernel is None:
        print("compiled kernel not built; nothing to compare against")
        return 1

    rng = np.random.default_rng(args.seed)
    print(f"{args.vectors} vectors per design, best of {args.repeats}")
    print(f"{'design':<24} {'events':>9} {'pure_s':>9} {'compiled_s':>11} "
          f"{'speedup':>8}")
    for cfg in DESIGNS:
        nl = generate(cfg)
        design = CompiledDesign.compile(nl)
        width = design.width
        a = rng.integers(0, 1 << width, size=args.vectors, dtype=np.uint64)
        b = rng.integers(0, 1 << width, size=args.vectors, dtype=np.uint64)
        cin = rng.integers(0, 2, size=args.vectors, dtype=np.int8)

        t_pure, out_pure = timed(_kernel, design, a, b, cin, args.repeats)
        t_comp, out_comp = timed(_ckernel, design, a, b, cin, args.repeats)

        res_p, lat_p, st_p = out_pure
        res_c, lat_c, st_c = out_comp
        if res_p != res_c or not np.array_equal(lat_p, lat_c) or \
                not np.array_equal(st_p.vals, st_c.vals):
            print(f"{nl.name}: KERNEL DISAGREEMENT {res_p} vs {res_c}")
            return 1
        if res_p[1] != 0:
            print(f"{nl.name}: sweep failed, results untrustworthy")
            return 1

        ratio = t_pure / t_comp if t_comp > 0 else float("inf")
        print(f"{nl.name:<24} {res_p[6]:>9} {t_pure:>9.3f} {t_comp:>11.4f} "
              f"{ratio:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
