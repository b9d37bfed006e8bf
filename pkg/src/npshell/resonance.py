"""Drude dielectric model, contrast parameter, and resonance frequencies.

Frequencies are reported in eV throughout.  The branch label of a
ResonanceRow refers to the frequency split: "+" is the high-energy
(antibonding) branch omega_+ = (omega_p/sqrt2) sqrt(1 + rho^n), which
comes from the negative eigenvalue branch of the block operator.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ContrastSingularError, ExcludedModeError

__all__ = [
    "DrudeModel",
    "ResonanceRow",
    "ResonanceTable",
    "drude_permittivity",
    "contrast_z",
    "frequencies_from_eigenvalues",
    "disk_closed_form_frequencies",
    "resonance_scan",
    "bandwidth",
]


@dataclass(frozen=True)
class DrudeModel:
    """Lossy-metal permittivity eps(omega) = 1 - omega_p^2/(omega^2 + i gamma omega)."""

    omega_p: float = 9.06
    gamma: float = 0.0
    eps_m: float = 1.0

    def __post_init__(self):
        if self.omega_p <= 0.0:
            raise ValueError("omega_p must be positive")
        if self.gamma < 0.0:
            raise ValueError("gamma must be >= 0")
        if self.eps_m <= 0.0:
            raise ValueError("eps_m must be positive")


def drude_permittivity(model, omega):
    """Shell permittivity at omega (> 0); real when gamma = 0."""
    omega = np.asarray(omega)
    if np.any(omega <= 0.0):
        raise ValueError("omega must be positive")
    val = 1.0 - model.omega_p**2 / (omega**2 + 1j * model.gamma * omega)
    if model.gamma == 0.0:
        val = val.real
    return val[()] if np.ndim(val) == 0 else val


def contrast_z(eps_m, eps_s):
    """Contrast parameter z = (eps_m + eps_s) / (2 (eps_m - eps_s))."""
    denom = eps_m - eps_s
    if np.any(np.abs(denom) == 0.0):
        raise ContrastSingularError("eps_m equals eps_s; contrast undefined")
    return (eps_m + eps_s) / (2.0 * denom)


def frequencies_from_eigenvalues(lams, omega_p):
    """omega = (omega_p/sqrt 2) sqrt(1 - 2 lambda) for each lambda < 1/2."""
    lams = np.asarray(lams, dtype=float)
    if np.any(lams >= 0.5):
        raise ExcludedModeError("eigenvalues >= 1/2 have no resonance frequency")
    return omega_p / np.sqrt(2.0) * np.sqrt(1.0 - 2.0 * lams)


@dataclass(frozen=True)
class ResonanceRow:
    n: int
    branch: str            # "+": high-energy antibonding, "-": bonding
    lam: float
    lam_tilde: float
    omega: float
    omega_tilde: float


@dataclass(frozen=True)
class ResonanceTable:
    rows: tuple
    metadata: dict = field(default_factory=dict)

    def omegas(self, corrected=False):
        return np.array([r.omega_tilde if corrected else r.omega
                         for r in self.rows])


def disk_closed_form_frequencies(r1, r2, delta1, delta2, omega_p, n_max=8):
    """Closed-form resonance table for concentric disks.

    omega_{n,+-} = (omega_p/sqrt 2) sqrt(1 +- rho^n) with
    rho = (delta1 r1)/(delta2 r2); each n satisfies
    omega_+^2 + omega_-^2 = omega_p^2 exactly.
    """
    rho = (delta1 * r1) / (delta2 * r2)
    if not 0.0 < rho < 1.0:
        raise ValueError(f"core must be strictly inside the shell (rho={rho:g})")
    base = omega_p / np.sqrt(2.0)
    rows = []
    for n in range(1, n_max + 1):
        lam = 0.5 * rho**n
        # "+" frequency branch belongs to the negative eigenvalue
        rows.append(ResonanceRow(n, "+", -lam, -lam,
                                 base * np.sqrt(1.0 + rho**n),
                                 base * np.sqrt(1.0 + rho**n)))
        rows.append(ResonanceRow(n, "-", lam, lam,
                                 base * np.sqrt(1.0 - rho**n),
                                 base * np.sqrt(1.0 - rho**n)))
    meta = {"r1": r1, "r2": r2, "delta1": delta1, "delta2": delta2,
            "omega_p": omega_p, "rho": rho}
    return ResonanceTable(rows=tuple(rows), metadata=meta)


def resonance_scan(lams, model, omega_grid, threshold=1e-2):
    """min_n |z(omega) + lambda_n| over the grid; local minima flag resonances.

    A resonance is declared at a local minimum of the scan curve whose
    value falls below ``threshold``.  With an empty eigenvalue list the
    scan reduces to |z(omega)| itself, whose zero sits at omega_p/sqrt 2.
    """
    omega_grid = np.asarray(omega_grid, dtype=float)
    eps_s = drude_permittivity(model, omega_grid)
    z = contrast_z(model.eps_m, eps_s)
    lams = np.asarray(list(lams), dtype=float)
    if lams.size == 0:
        dist = np.abs(z)
    else:
        dist = np.min(np.abs(z[:, None] + lams[None, :]), axis=1)
    interior = (dist[1:-1] < dist[:-2]) & (dist[1:-1] < dist[2:])
    minima = np.flatnonzero(interior) + 1
    return dist, minima[dist[minima] < threshold]


def bandwidth(table):
    """Resonance bandwidth: spread max omega - min omega of the table."""
    if not table.rows:
        raise ValueError("empty resonance table")
    om = table.omegas()
    return float(np.max(om) - np.min(om))
