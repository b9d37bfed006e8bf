"""Nystrom discretization of the 2D Laplace layer potentials.

Smooth kernels (NP operator and all cross-curve evaluations) use the
trapezoid rule, which is spectrally accurate on analytic closed curves.
The logarithmic self-interaction of the single layer is split into
ln(2|sin((t-s)/2)|) handled by the trigonometric product quadrature plus a
smooth remainder on the trapezoid rule.  The hypersingular operator and the
on-boundary Hessian trace are realized through tangential-derivative
identities, with tangential derivatives taken spectrally.

All assembled matrices act on density samples at the curve nodes and
return function samples at the target nodes (weights folded in).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .backend import kernels
from .errors import AccuracyWarningError, GeometryDegenerateError

__all__ = [
    "DenseOperator",
    "assemble_single_layer_self",
    "assemble_np_self",
    "assemble_np_adjoint_self",
    "assemble_dsdn_cross",
    "assemble_dsdt_cross",
    "assemble_d2s_nn_cross",
    "assemble_dlp_dn_cross",
    "assemble_single_layer_cross",
    "assemble_hypersingular_self",
    "assemble_d2s_nn_self",
    "eval_potentials_offboundary",
    "tangential_derivative_matrix",
    "mean_zero_projector",
]


@dataclass(frozen=True)
class DenseOperator:
    """Dense Nystrom matrix mapping source-node densities to target-node values."""

    entries: np.ndarray
    kind: str
    source: object = None
    target: object = None

    def __matmul__(self, other):
        if isinstance(other, DenseOperator):
            return self.entries @ other.entries
        return self.entries @ other

    @property
    def shape(self):
        return self.entries.shape


@lru_cache(maxsize=32)
def _kress_log_weights(n):
    """Product-quadrature weights R_ij for the kernel ln(4 sin^2((t_i-t_j)/2)).

    Exact for trigonometric polynomials of degree <= N/2 on the N-point
    equispaced grid; circulant in i-j.
    """
    m = np.arange(n)
    k = np.arange(1, n // 2)
    row = np.cos(2.0 * np.pi * np.outer(m, k) / n) @ (1.0 / k)
    row = -(4.0 * np.pi / n) * (row + np.cos(np.pi * m) / n)
    idx = (m[:, None] - m[None, :]) % n
    return row[idx]


@lru_cache(maxsize=32)
def _fourier_diff_matrix(n):
    """Spectral differentiation matrix d/dt on the N-point periodic grid."""
    if n % 2 != 0:
        raise ValueError("even node count required")
    j = np.arange(n)
    diff = j[:, None] - j[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        d = 0.5 * (-1.0) ** diff / np.tan(np.pi * diff / n)
    np.fill_diagonal(d, 0.0)
    return d


def tangential_derivative_matrix(curve):
    """Matrix of d/ds (arclength derivative) acting on node samples."""
    return _fourier_diff_matrix(curve.n_nodes) / curve.speed[:, None]


def mean_zero_projector(curve):
    """Projector onto mean-zero densities in L^2(dsigma) of the curve."""
    w = curve.weights
    return np.eye(curve.n_nodes) - np.outer(np.ones_like(w), w) / np.sum(w)


def assemble_single_layer_self(curve):
    """Single-layer operator S on the curve itself (log-singular kernel).

    Kress splitting: (1/2pi) ln|x-y| = (1/4pi) ln(4 sin^2((t-s)/2)) plus a
    smooth remainder with diagonal ln|x'(t)|; the singular part is
    integrated by the trigonometric product quadrature.
    """
    n = curve.n_nodes
    smooth = kernels.log_kernel_smooth_self(curve.points, curve.t, curve.speed)
    mat = (_kress_log_weights(n) / (4.0 * np.pi) + smooth / n) * curve.speed
    return DenseOperator(mat, "S", curve, curve)


def assemble_np_self(curve):
    """NP operator K* (normal derivative of S at the target, PV on boundary)."""
    mat = kernels.np_kernel_self(curve.points, curve.normal, curve.curvature,
                                 curve.weights)
    return DenseOperator(mat, "K*", curve, curve)


def assemble_np_adjoint_self(curve):
    """Adjoint NP operator K (normal at the source point in the kernel)."""
    mat = kernels.np_kernel_self_adjoint(curve.points, curve.normal,
                                         curve.curvature, curve.weights)
    return DenseOperator(mat, "K", curve, curve)


def _check_separation(z, source):
    spacing = float(np.max(source.weights))
    d = np.linalg.norm(z[:, None, :] - source.points[None, :, :], axis=-1)
    if np.min(d) < 0.25 * spacing:
        raise GeometryDegenerateError(
            "evaluation points touch the source curve; "
            "cross-curve quadrature is invalid")


def assemble_dsdn_cross(source, target, target_scale_arg=1.0):
    """Normal derivative of S_source evaluated at scaled target points.

    Kernel (1/2pi) <s*x - y, nu_target(x)> / |s*x - y|^2 with
    s = target_scale_arg; no chain-rule factor is applied here.
    """
    z = target_scale_arg * target.points
    _check_separation(z, source)
    mat = kernels.cross_directional(z, target.normal, source.points,
                                    source.weights)
    return DenseOperator(mat, "dSdn_cross", source, target)


def assemble_dsdt_cross(source, target, target_scale_arg=1.0):
    """Tangential derivative of S_source at scaled target points."""
    z = target_scale_arg * target.points
    _check_separation(z, source)
    mat = kernels.cross_directional(z, target.tangent, source.points,
                                    source.weights)
    return DenseOperator(mat, "dSdT_cross", source, target)


def assemble_d2s_nn_cross(source, target, target_scale_arg=1.0):
    """Normal-normal Hessian <D^2 S_source nu, nu> at scaled target points."""
    z = target_scale_arg * target.points
    _check_separation(z, source)
    mat = kernels.cross_hessian_nn(z, target.normal, source.points,
                                   source.weights)
    return DenseOperator(mat, "d2S_nn_cross", source, target)


def assemble_dlp_dn_cross(source, target, target_scale_arg=1.0):
    """Normal derivative of the double layer D_source at scaled target points."""
    z = target_scale_arg * target.points
    _check_separation(z, source)
    mat = kernels.cross_dlp_normal(z, target.normal, source.points,
                                   source.normal, source.weights)
    return DenseOperator(mat, "dDdn_cross", source, target)


def assemble_single_layer_cross(source, target, target_scale_arg=1.0):
    """S_source values at scaled target points (smooth log kernel)."""
    z = target_scale_arg * target.points
    _check_separation(z, source)
    mat = kernels.cross_log(z, source.points, source.weights)
    return DenseOperator(mat, "S_cross", source, target)


def assemble_hypersingular_self(curve, single_layer=None):
    """Hypersingular operator d(D[psi])/dnu via the tangential identity.

    On closed curves the normal derivative of the double layer equals
    d/ds o S o d/ds, which reuses the log quadrature and spectral
    differentiation instead of finite-part weights.
    """
    if single_layer is None:
        single_layer = assemble_single_layer_self(curve)
    dt = tangential_derivative_matrix(curve)
    return DenseOperator(dt @ single_layer.entries @ dt, "hypersingular",
                         curve, curve)


def assemble_d2s_nn_self(curve, single_layer=None, np_self=None):
    """Principal-value trace of the normal-normal second derivative of S.

    Harmonicity off the curve gives dnn S = -dss S - kappa * dn S on the
    boundary; the PV convention applies to both normal derivatives, so the
    dn term is kappa * K*.
    """
    if single_layer is None:
        single_layer = assemble_single_layer_self(curve)
    if np_self is None:
        np_self = assemble_np_self(curve)
    dt = tangential_derivative_matrix(curve)
    mat = -dt @ (dt @ single_layer.entries) \
        - curve.curvature[:, None] * np_self.entries
    return DenseOperator(mat, "d2S_nn", curve, curve)


def eval_potentials_offboundary(curves, densities, points):
    """Sum of single-layer potentials of the given curves at exterior points.

    Plain trapezoid accuracy requires the points to stay at least three
    node spacings away from every curve.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    total = None
    for curve, dens in zip(curves, densities):
        d = np.linalg.norm(points[:, None, :] - curve.points[None, :, :],
                           axis=-1)
        if np.min(d) < 3.0 * float(np.max(curve.weights)):
            raise AccuracyWarningError(
                "evaluation point within three node spacings of a curve; "
                "refine the grid or move the point")
        mat = kernels.cross_log(points, curve.points, curve.weights)
        val = mat @ np.asarray(dens)
        total = val if total is None else total + val
    return total
