#!/usr/bin/env python3
"""Benchmark the compiled propagation kernel against the numpy fallback.

Runs the brute-force time-domain integration (the hot path of the
oracle cross-checks) on three system sizes with both backends and
reports timings, speedups and the worst disagreement.

Usage: python benchmarks/bench_kernels.py [--t-end 200]
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from zeemanprobe import _kernels  # noqa: E402
from zeemanprobe.liouville import (  # noqa: E402
    commutator_superop,
    lindblad_superop,
    transit_feed,
    vectorize,
)
from zeemanprobe.system import (  # noqa: E402
    FieldSpec,
    TransitionSpec,
    build_operator_set,
    build_probe_coupling,
    isotropic_ground_state,
)


def _assemble(fg, fe):
    spec = TransitionSpec(fg=fg, fe=fe, gamma=0.05)
    pump = FieldSpec(rabi=0.3, pol="lin_x")
    probe = FieldSpec(rabi=3e-4, pol="lin_y")
    ops = build_operator_set(spec, pump, probe, bfield=0.01)
    w_half = 0.5 * build_probe_coupling(spec, probe)
    return dict(
        lmat=np.ascontiguousarray(lindblad_superop(ops, spec)),
        const=np.ascontiguousarray(transit_feed(spec)),
        mplus=np.ascontiguousarray(-1j * commutator_superop(w_half)),
        mminus=np.ascontiguousarray(-1j * commutator_superop(w_half.conj().T)),
        y0=np.ascontiguousarray(vectorize(isotropic_ground_state(spec))),
        dim=spec.dim,
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--t-end", type=float, default=200.0,
                        help="integration span in units of 1/Gamma")
    args = parser.parse_args()

    backends = _kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernel not built; run `python setup.py build_ext --inplace`")

    delta, dt = 0.4, 0.01
    n_steps = int(args.t_end / dt)
    n_window = max(1, int(0.25 * n_steps / (2 * np.pi / delta / dt))) * int(
        round(2 * np.pi / delta / dt)
    )

    print(f"{n_steps} RK4 steps, delta={delta}, dt={dt}")
    header = f"{'system':>12s} {'liouville':>10s}"
    for name in backends:
        header += f" {name + ' [s]':>12s}"
    header += f" {'speedup':>8s} {'max diff':>10s}"
    print(header)

    for fg, fe in [(0, 1), (1, 2), (3, 4)]:
        problem = _assemble(fg, fe)
        n = problem["lmat"].shape[0]
        times, results = {}, {}
        for name, fn in backends.items():
            t0 = time.perf_counter()
            results[name] = fn(
                problem["lmat"], problem["const"], problem["mplus"],
                problem["mminus"], delta, dt, n_steps, n_window,
                problem["y0"], problem["dim"],
            )
            times[name] = time.perf_counter() - t0
        line = f"{f'{fg}->{fe}':>12s} {f'{n}x{n}':>10s}"
        for name in backends:
            line += f" {times[name]:12.3f}"
        if len(backends) == 2:
            diff = max(
                float(np.max(np.abs(results["numpy"][k] - results["cython"][k])))
                for k in range(4)
            )
            line += f" {times['numpy'] / times['cython']:7.1f}x {diff:10.2e}"
        print(line)


if __name__ == "__main__":
    main()
