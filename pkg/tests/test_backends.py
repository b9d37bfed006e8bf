"""Parity between the compiled kernel extension and the numpy fallback."""

import subprocess
import sys

import numpy as np
import pytest

from npshell.backend import get_backends

BACKENDS = get_backends()

KERNELS = [
    "np_kernel_self",
    "np_kernel_self_adjoint",
    "log_kernel_smooth_self",
    "cross_log",
    "cross_directional",
    "cross_hessian_nn",
    "cross_dlp_normal",
]


def _sample_args(name, n=96):
    rng = np.random.default_rng(3)
    t = 2 * np.pi * np.arange(n) / n
    x = np.stack([2 * np.cos(t) + 0.1 * np.cos(3 * t), 1.7 * np.sin(t)],
                 axis=-1).copy()
    nu = np.stack([np.cos(t), np.sin(t)], axis=-1).copy()
    kappa = 0.5 + 0.1 * np.sin(t) + 0.01 * rng.standard_normal(n)
    speed = 2.0 + 0.1 * np.cos(t)
    w = (2 * np.pi / n) * speed
    z = 4.0 * np.stack([np.cos(t), np.sin(t)], axis=-1).copy()
    return {
        "np_kernel_self": (x, nu, kappa, w),
        "np_kernel_self_adjoint": (x, nu, kappa, w),
        "log_kernel_smooth_self": (x, t, speed),
        "cross_log": (z, x, w),
        "cross_directional": (z, nu, x, w),
        "cross_hessian_nn": (z, nu, x, w),
        "cross_dlp_normal": (z, nu, x, nu, w),
    }[name]


@pytest.mark.skipif("compiled" not in BACKENDS,
                    reason="compiled kernels not built")
@pytest.mark.parametrize("name", KERNELS)
def test_backend_parity(name):
    args = _sample_args(name)
    ref = getattr(BACKENDS["numpy"], name)(*args)
    got = getattr(BACKENDS["compiled"], name)(*args)
    assert got.shape == ref.shape
    assert np.max(np.abs(got - ref)) < 1e-14


def test_forced_python_fallback():
    code = ("import npshell.backend as b; "
            "assert b.BACKEND == 'numpy', b.BACKEND; print('ok')")
    out = subprocess.run(
        [sys.executable, "-c", code],
        env={"NPSHELL_FORCE_PYTHON": "1", "PATH": "/usr/bin:/bin"},
        capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert "ok" in out.stdout


def test_full_pipeline_same_result_on_both_backends():
    # the disk spectrum must not depend on the kernel backend
    if "compiled" not in BACKENDS:
        pytest.skip("compiled kernels not built")
    import npshell.potentials as pots
    from npshell.geometry import LayeredGeometry
    from npshell.spectrum import assemble_block_operator, assemble_gram, spectrum

    g = LayeredGeometry(r1=1, r2=2, n_nodes=64)
    results = {}
    original = pots.kernels
    try:
        for name, mod in BACKENDS.items():
            pots.kernels = mod
            modes = spectrum(assemble_block_operator(g), assemble_gram(g),
                             n_max=8)
            results[name] = np.sort([m.eigenvalue for m in modes])
    finally:
        pots.kernels = original
    assert np.max(np.abs(results["numpy"] - results["compiled"])) < 1e-13
