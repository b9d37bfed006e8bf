"""Vectorized numpy implementations of the pairwise kernel assemblies.

These are the hot inner loops of every operator assembly.  A compiled twin
with identical signatures lives in ``_kernels.pyx``; ``backend.py`` picks
one at import time.  All functions return dense (n_target, n_source)
matrices with the source quadrature weights already folded in, so that
``matrix @ density_samples`` approximates the boundary integral.

Conventions: ``x``/``z`` are target points, ``y`` source points, shapes
(n, 2); normals are unit outward; ``w`` are arclength quadrature weights.
The 1/(2*pi) of the log fundamental solution is included here.
"""

import numpy as np

TWO_PI = 2.0 * np.pi


def np_kernel_self(x, nu, kappa, w):
    """Neumann-Poincare kernel <x_i - x_j, nu_i> / |x_i - x_j|^2 on one curve.

    Continuous (C^2 curve) diagonal limit kappa_i / 2; the 1/(2*pi) factor
    and weights give matrix entries K*_ij = w_j/(2*pi) * kernel.
    """
    d = x[:, None, :] - x[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", d, d)
    np.fill_diagonal(r2, 1.0)
    num = np.einsum("ijk,ik->ij", d, nu)
    ker = num / r2
    np.fill_diagonal(ker, 0.5 * kappa)
    return ker * (w / TWO_PI)


def np_kernel_self_adjoint(x, nu, kappa, w):
    """Adjoint NP kernel <x_j - x_i, nu_j> / |x_i - x_j|^2 (normal at source)."""
    d = x[None, :, :] - x[:, None, :]
    r2 = np.einsum("ijk,ijk->ij", d, d)
    np.fill_diagonal(r2, 1.0)
    num = np.einsum("ijk,jk->ij", d, nu)
    ker = num / r2
    np.fill_diagonal(ker, 0.5 * kappa)
    return ker * (w / TWO_PI)


def log_kernel_smooth_self(x, t, speed):
    """Smooth remainder ln(|x_i - x_j| / (2 |sin((t_i - t_j)/2)|)) of the log kernel.

    Diagonal limit is ln(speed_i).  The singular half ln(4 sin^2(.)/ ...) is
    handled by the trigonometric product quadrature, not here.
    """
    d = x[:, None, :] - x[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", d, d)
    s = 2.0 * np.sin(0.5 * (t[:, None] - t[None, :]))
    s2 = s * s
    np.fill_diagonal(r2, 1.0)
    np.fill_diagonal(s2, 1.0)
    out = 0.5 * np.log(r2 / s2)
    np.fill_diagonal(out, np.log(speed))
    return out


def cross_log(z, y, w):
    """Single-layer kernel ln|z_i - y_j| * w_j / (2*pi) at off-curve targets."""
    d = z[:, None, :] - y[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", d, d)
    return (0.5 * np.log(r2)) * (w / TWO_PI)


def cross_directional(z, direction, y, w):
    """Directional derivative kernel <z_i - y_j, dir_i> / |z_i - y_j|^2 * w_j/(2*pi)."""
    d = z[:, None, :] - y[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", d, d)
    num = np.einsum("ijk,ik->ij", d, direction)
    return (num / r2) * (w / TWO_PI)


def cross_hessian_nn(z, nu_t, y, w):
    """Normal-normal Hessian kernel (1/|d|^2 - 2<d,n>^2/|d|^4) * w_j/(2*pi)."""
    d = z[:, None, :] - y[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", d, d)
    dn = np.einsum("ijk,ik->ij", d, nu_t)
    return (1.0 / r2 - 2.0 * dn * dn / (r2 * r2)) * (w / TWO_PI)


def cross_dlp_normal(z, nu_t, y, nu_s, w):
    """Normal derivative of the double-layer kernel at off-curve targets.

    Kernel (2 <nu_s, d><nu_t, d>/|d|^2 - <nu_t, nu_s>) / |d|^2 with d = z - y.
    """
    d = z[:, None, :] - y[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", d, d)
    dt = np.einsum("ijk,ik->ij", d, nu_t)
    ds = np.einsum("ijk,jk->ij", d, nu_s)
    nn = nu_t @ nu_s.T
    return ((2.0 * dt * ds / r2 - nn) / r2) * (w / TWO_PI)
