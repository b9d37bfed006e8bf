"""Incident-field excitation, transmission solve, and intensity spectra.

The transmission system (z(omega) I + K)[Phi] = f is solved on the
mean-zero subspace, either directly (dense LU per frequency) or through
the truncated eigen-expansion Phi = sum <f, Psi_n>/(lambda_n + z) Psi_n.
Scattered fields are single-layer potentials of the solved densities over
the physical (delta-scaled, perturbed) interfaces.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import ResonanceSingularError
from .potentials import eval_potentials_offboundary
from .resonance import DrudeModel, contrast_z, drude_permittivity
from .spectrum import assemble_block_operator, assemble_gram, gram_pairing, spectrum

__all__ = [
    "IncidentField",
    "SpectrumCurve",
    "assemble_rhs",
    "solve_densities",
    "intensity_spectrum",
    "find_peaks",
]


@dataclass(frozen=True)
class IncidentField:
    """Uniform incident field H(x) = amplitude * <direction, x>."""

    direction: tuple = (1.0, 0.0)
    amplitude: float = 1.0

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float)
        norm = np.linalg.norm(d)
        if norm == 0.0:
            raise ValueError("incident direction must be nonzero")
        object.__setattr__(self, "direction", tuple(d / norm))


def assemble_rhs(inc, geometry, include_corrections=True, on_perturbed=False):
    """Block right-hand side of the transmission system, mean-zero projected.

    On the base circles the epsilon_i correction of a uniform field is
    -h_i'(t) <d, T_i> per boundary (the Hessian term vanishes for linear
    H).  With ``on_perturbed`` the exact normal of the perturbed curve is
    used instead and no correction applies.  The delta_i prefactors cancel
    for a uniform field.
    """
    d = np.asarray(inc.direction)
    amp = inc.amplitude
    if on_perturbed:
        c1, c2 = geometry.perturbed_curves()
        f1 = amp * (c1.normal @ d)
        f2 = -amp * (c2.normal @ d)
    else:
        c1, c2 = geometry.base_curves()
        f1 = amp * (c1.normal @ d)
        f2 = -amp * (c2.normal @ d)
        if include_corrections:
            h1t = geometry.h1.derivative(c1.t, 1) / c1.speed
            h2t = geometry.h2.derivative(c2.t, 1) / c2.speed
            f1 = f1 - geometry.eps1 * amp * h1t * (c1.tangent @ d)
            f2 = f2 + geometry.eps2 * amp * h2t * (c2.tangent @ d)
    f1 = f1 - (c1.weights @ f1) / np.sum(c1.weights)
    f2 = f2 - (c2.weights @ f2) / np.sum(c2.weights)
    return np.concatenate([f1, f2])


def solve_densities(block_op, gram, z, f, method="direct", modes=None,
                    n_max=32):
    """Solve (z I + K)[Phi] = f on the mean-zero subspace.

    ``modes`` (from ``spectrum``) are required for the spectral method and
    used for the near-resonance guard when provided for the direct one.
    """
    if modes is None and method == "spectral":
        modes = spectrum(block_op, gram, n_max=n_max)
    if modes is not None:
        lams = np.array([m.eigenvalue for m in modes])
        if np.min(np.abs(z + lams)) < 1e-12:
            raise ResonanceSingularError(
                "z(omega) hits an eigenvalue exactly; add loss (gamma > 0)")
    if abs(z) < 1e-12:
        # accumulation point of the spectrum (omega = omega_p/sqrt 2); the
        # projected system is singular there
        raise ResonanceSingularError(
            "z(omega) = 0 lies at the spectrum's accumulation point; "
            "add loss (gamma > 0)")
    proj = gram.projector
    fp = proj @ f
    if method == "direct":
        n = block_op.matrix.shape[0]
        dtype = complex if np.iscomplexobj(np.asarray(z)) else float
        mat = z * np.eye(n, dtype=dtype) + proj @ block_op.matrix @ proj
        return sla.solve(mat, fp.astype(dtype))
    if method == "spectral":
        out = np.zeros(f.shape, dtype=complex if np.iscomplexobj(np.asarray(z))
                       else float)
        for m in modes:
            coef = gram_pairing(gram, fp, m.vector) / (m.eigenvalue + z)
            out = out + coef * m.vector
        return out
    raise ValueError(f"unknown method {method!r}; use 'direct' or 'spectral'")


@dataclass(frozen=True)
class SpectrumCurve:
    """Frequency-swept scattering intensity |u_s|^2 averaged over a probe circle."""

    omega: np.ndarray
    intensity: np.ndarray
    metadata: dict = field(default_factory=dict)


def default_omega_grid(omega_p, points=600):
    return np.linspace(0.05 * omega_p, 0.999 * omega_p, points)


def intensity_spectrum(geometry, inc, model, omega_grid=None,
                       probe_radius_factor=2.0, n_probe=64, method="direct",
                       gamma=None, n_max=32):
    """Scattering intensity spectrum of the layered structure.

    Operators are assembled once on the (perturbed) interfaces; only
    z(omega) changes along the sweep.  Lossless poles make the lossless
    response grid-dependent, so gamma defaults to 0.02*omega_p unless the
    model already carries loss or an override is given.
    """
    if gamma is None:
        gamma = model.gamma if model.gamma > 0.0 else 0.02 * model.omega_p
    model = DrudeModel(omega_p=model.omega_p, gamma=gamma, eps_m=model.eps_m)
    if omega_grid is None:
        omega_grid = default_omega_grid(model.omega_p)
    omega_grid = np.asarray(omega_grid, dtype=float)

    perturbed = geometry.eps1 > 0.0 or geometry.eps2 > 0.0
    block_op = assemble_block_operator(geometry, use_perturbed_curves=perturbed)
    gram = assemble_gram(geometry, use_perturbed_curves=perturbed)
    f = assemble_rhs(inc, geometry, on_perturbed=perturbed)
    modes = spectrum(block_op, gram, n_max=n_max)

    phys1, phys2 = geometry.physical_curves()
    t = 2.0 * np.pi * np.arange(n_probe) / n_probe
    r_probe = probe_radius_factor * geometry.delta2 * np.max(
        geometry.r2 + geometry.eps2 * geometry.h2(t))
    probe = r_probe * np.stack([np.cos(t), np.sin(t)], axis=-1)

    n = block_op.n_per_boundary
    intensity = np.empty_like(omega_grid)
    for i, om in enumerate(omega_grid):
        eps_s = drude_permittivity(model, om)
        z = contrast_z(model.eps_m, eps_s)
        phi = solve_densities(block_op, gram, z, f, method=method, modes=modes)
        us = eval_potentials_offboundary((phys1, phys2), (phi[:n], phi[n:]),
                                         probe)
        intensity[i] = float(np.mean(np.abs(us)**2))
    meta = {"gamma": gamma, "omega_p": model.omega_p,
            "probe_radius": float(r_probe), "method": method,
            "amplitude": inc.amplitude}
    return SpectrumCurve(omega=omega_grid, intensity=intensity, metadata=meta)


def find_peaks(curve, rel_height=0.0):
    """Indices of strict local maxima above rel_height * global maximum."""
    y = curve.intensity
    interior = (y[1:-1] > y[:-2]) & (y[1:-1] > y[2:])
    idx = np.flatnonzero(interior) + 1
    if idx.size == 0:
        return idx
    return idx[y[idx] >= rel_height * np.max(y)]
