#!/usr/bin/env python3
"""Benchmark the compiled kernel extension against the numpy fallback.

Times the pairwise kernel assemblies (the hot inner loops of operator
assembly) and one full block-operator assembly per backend.

    python benchmarks/bench_kernels.py [--sizes 128,256,512,1024] [--repeat 5]
"""

import argparse
import time

import numpy as np

from npshell.backend import get_backends

KERNELS = ["np_kernel_self", "log_kernel_smooth_self", "cross_directional",
           "cross_hessian_nn", "cross_dlp_normal"]


def sample_data(n):
    t = 2 * np.pi * np.arange(n) / n
    x = np.stack([2 * np.cos(t) + 0.1 * np.cos(3 * t), 1.7 * np.sin(t)],
                 axis=-1).copy()
    nu = np.stack([np.cos(t), np.sin(t)], axis=-1).copy()
    kappa = 0.5 + 0.1 * np.sin(t)
    speed = 2.0 + 0.1 * np.cos(t)
    w = (2 * np.pi / n) * speed
    z = 4.0 * np.stack([np.cos(t), np.sin(t)], axis=-1).copy()
    return {
        "np_kernel_self": (x, nu, kappa, w),
        "log_kernel_smooth_self": (x, t, speed),
        "cross_directional": (z, nu, x, w),
        "cross_hessian_nn": (z, nu, x, w),
        "cross_dlp_normal": (z, nu, x, nu, w),
    }


def best_time(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_block_assembly(repeat):
    import npshell.potentials as pots
    from npshell.geometry import LayeredGeometry, ShapeFunction
    from npshell.spectrum import assemble_block_operator

    g = LayeredGeometry(r1=1.0, r2=2.0, eps1=0.05, eps2=0.05,
                        h1=ShapeFunction(cosine_coeffs=((4, 0.5),)),
                        h2=ShapeFunction(sine_coeffs=((3, -1.0),)),
                        n_nodes=256)
    out = {}
    original = pots.kernels
    try:
        for name, mod in get_backends().items():
            pots.kernels = mod
            best = float("inf")
            for _ in range(repeat):
                t0 = time.perf_counter()
                assemble_block_operator(g, use_perturbed_curves=True)
                best = min(best, time.perf_counter() - t0)
            out[name] = best
    finally:
        pots.kernels = original
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="128,256,512,1024")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    backends = get_backends()
    print(f"backends: {', '.join(backends)}")
    if "compiled" not in backends:
        print("note: compiled extension not built; timing numpy only")

    header = f"{'kernel':<24}{'N':>6}" + "".join(
        f"{name + ' (ms)':>16}" for name in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name in KERNELS:
        for n in sizes:
            data = sample_data(n)[name]
            times = {b: best_time(getattr(mod, name), data, args.repeat)
                     for b, mod in backends.items()}
            row = f"{name:<24}{n:>6}" + "".join(
                f"{1e3 * times[b]:>16.3f}" for b in backends)
            if len(backends) == 2:
                row += f"{times['numpy'] / times['compiled']:>10.2f}"
            print(row)

    print()
    block = bench_block_assembly(args.repeat)
    row = f"{'block assembly N=256':<24}{'':>6}" + "".join(
        f"{1e3 * block[b]:>16.3f}" for b in backends)
    if len(backends) == 2:
        row += f"{block['numpy'] / block['compiled']:>10.2f}"
    print(row)


if __name__ == "__main__":
    main()
