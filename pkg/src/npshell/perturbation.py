"""First-order shape-perturbation blocks and eigenvalue corrections.

The epsilon_i coefficients of the block operator expansion are assembled
from the base (unperturbed) curves; Rayleigh quotients in the H^2 inner
product give the first-order eigenvalue corrections, with standard
degenerate perturbation theory on the cos/sin doublets of circular
boundaries.  Corrected resonance frequencies follow from the first-order
expansion of omega = (omega_p/sqrt(2)) sqrt(1 - 2 lambda).

Sign conventions: ``kappa`` is the standard curvature (+1/r on circles),
which is the negative of the curvature defined through x'' = tau * nu with
an outward normal; the perturbation formulas are written accordingly.
Scaled-argument cross operators carry one chain-rule factor of the scale
per derivative order, so that composing them with the printed block
prefactors yields the exact pullback of the physical operator.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyResolutionError, ExcludedModeError
from .potentials import (
    DenseOperator,
    assemble_d2s_nn_cross,
    assemble_d2s_nn_self,
    assemble_dlp_dn_cross,
    assemble_dsdn_cross,
    assemble_dsdt_cross,
    assemble_hypersingular_self,
    assemble_np_self,
    assemble_single_layer_self,
    tangential_derivative_matrix,
)
from .spectrum import CLUSTER_TOL, gram_pairing

__all__ = [
    "PerturbationBlocks",
    "CorrectedMode",
    "assemble_k1_self",
    "assemble_cross_L",
    "assemble_cross_R",
    "assemble_perturbation_blocks",
    "first_order_corrections",
    "corrected_frequencies",
]


@dataclass(frozen=True)
class PerturbationBlocks:
    """2N x 2N coefficient matrices of epsilon_1 and epsilon_2."""

    k1: np.ndarray
    k2: np.ndarray
    geometry: object


@dataclass(frozen=True)
class CorrectedMode:
    """Eigenmode with its first-order corrections.

    lam_tilde = lambda + eps1*lam1 + eps2*lam2.  For degenerate doublets
    the reported values come from diagonalizing the combined correction on
    the cluster, and ``vector`` is the corresponding adapted basis vector.
    """

    n: int
    eigenvalue: float
    lam1: float
    lam2: float
    eps1: float
    eps2: float
    vector: np.ndarray

    @property
    def lam_tilde(self):
        return self.eigenvalue + self.eps1 * self.lam1 + self.eps2 * self.lam2


def assemble_k1_self(curve, h):
    """First-order self correction of the NP operator under x -> x + eps*h*nu.

    Four terms: K* composed with multiplication by kappa*h, the
    normal-normal Hessian trace premultiplied by h, the hypersingular
    operator applied to h*phi, and minus the tangential S derivative times
    the tangential derivative of h.
    """
    h_val = h(curve.t)
    h_tan = h.derivative(curve.t, 1) / curve.speed
    single = assemble_single_layer_self(curve)
    np_self = assemble_np_self(curve)
    d2snn = assemble_d2s_nn_self(curve, single_layer=single, np_self=np_self)
    hyper = assemble_hypersingular_self(curve, single_layer=single)
    dt = tangential_derivative_matrix(curve)
    mat = (np_self.entries * (curve.curvature * h_val)[None, :]
           + h_val[:, None] * d2snn.entries
           + hyper.entries * h_val[None, :]
           - h_tan[:, None] * (dt @ single.entries))
    return DenseOperator(mat, "K1_self", curve, curve)


def assemble_cross_L(source, source_h, target, scale_arg=1.0):
    """Source-perturbation cross term: d/dnu_t of D_s[h phi] + S_s[kappa h phi].

    Evaluated at scale_arg * target points; the single chain-rule factor of
    the scaled argument is included.
    """
    h_val = source_h(source.t)
    dlp = assemble_dlp_dn_cross(source, target, scale_arg).entries
    dsn = assemble_dsdn_cross(source, target, scale_arg).entries
    mat = scale_arg * (dlp * h_val[None, :]
                       + dsn * (source.curvature * h_val)[None, :])
    return DenseOperator(mat, "L_cross", source, target)


def assemble_cross_R(source, target, target_h, scale_arg=1.0):
    """Target-perturbation cross term: -h' dS/dT + h <D^2 S nu, nu>.

    Evaluated at scale_arg * target points with chain-rule factors
    scale_arg and scale_arg^2 on the first and second derivatives.
    """
    h_val = target_h(target.t)
    h_tan = target_h.derivative(target.t, 1) / target.speed
    dst = assemble_dsdt_cross(source, target, scale_arg).entries
    hess = assemble_d2s_nn_cross(source, target, scale_arg).entries
    mat = (-h_tan[:, None] * (scale_arg * dst)
           + h_val[:, None] * (scale_arg * scale_arg * hess))
    return DenseOperator(mat, "R_cross", source, target)


def assemble_perturbation_blocks(geometry):
    """Assemble both first-order block matrices on the base circles.

    K1 = [[-K1_self(D1), -(d2/d1) R_{D1<-D2}], [(d1/d2) L_{D2<-D1}, 0]] and
    K2 = [[0, -(d2/d1) L_{D1<-D2}], [(d1/d2) R_{D2<-D1}, K1_self(D2)]].
    """
    g = geometry
    c1, c2 = g.base_curves()
    s12 = g.delta1 / g.delta2
    pre12 = g.delta2 / g.delta1
    pre21 = g.delta1 / g.delta2
    n = c1.n_nodes
    zero = np.zeros((n, n))

    k1_self_1 = assemble_k1_self(c1, g.h1).entries
    r_12 = assemble_cross_R(c2, c1, g.h1, s12).entries
    l_21 = assemble_cross_L(c1, g.h1, c2, 1.0 / s12).entries
    k1 = np.block([[-k1_self_1, -pre12 * r_12], [pre21 * l_21, zero]])

    k1_self_2 = assemble_k1_self(c2, g.h2).entries
    l_12 = assemble_cross_L(c2, g.h2, c1, s12).entries
    r_21 = assemble_cross_R(c1, c2, g.h2, 1.0 / s12).entries
    k2 = np.block([[zero, -pre12 * l_12], [pre21 * r_21, k1_self_2]])

    return PerturbationBlocks(k1=k1, k2=k2, geometry=g)


def _clusters_by_eigenvalue(modes):
    """Group consecutive modes whose eigenvalues agree to CLUSTER_TOL."""
    groups = []
    current = [0]
    for i in range(1, len(modes)):
        if abs(modes[i].eigenvalue - modes[current[-1]].eigenvalue) <= CLUSTER_TOL:
            current.append(i)
        else:
            groups.append(current)
            current = [i]
    groups.append(current)
    return groups


def first_order_corrections(modes, blocks, gram):
    """First-order eigenvalue corrections for H^2-normalized modes.

    Simple eigenvalues get Rayleigh quotients <Kk Phi, Phi>_{H^2}.  Each
    degenerate doublet is handled by diagonalizing the combined correction
    eps1*K1 + eps2*K2 restricted to the cluster; the reported lam1/lam2 are
    Rayleigh quotients in the adapted basis, so that
    eps1*lam1 + eps2*lam2 equals the cluster correction eigenvalue.
    """
    g = blocks.geometry
    eps1, eps2 = g.eps1, g.eps2
    out = []
    for group in _clusters_by_eigenvalue(modes):
        if len(group) > 2:
            raise DegeneracyResolutionError(
                f"correction cluster of size {len(group)}; eigenvalue "
                "families are not separated")
        basis = np.stack([modes[i].vector for i in group], axis=1)
        if len(group) == 2 and (eps1 != 0.0 or eps2 != 0.0):
            m1 = _pair_matrix(gram, blocks.k1, basis)
            m2 = _pair_matrix(gram, blocks.k2, basis)
            comb = eps1 * m1 + eps2 * m2
            comb = 0.5 * (comb + comb.T)
            mu, rot = np.linalg.eigh(comb)
            order = np.argsort(mu)[::-1]
            basis = basis @ rot[:, order]
        for k, i in enumerate(group):
            v = basis[:, k]
            lam1 = gram_pairing(gram, blocks.k1 @ v, v)
            lam2 = gram_pairing(gram, blocks.k2 @ v, v)
            out.append(CorrectedMode(n=modes[i].n,
                                     eigenvalue=modes[i].eigenvalue,
                                     lam1=float(lam1), lam2=float(lam2),
                                     eps1=eps1, eps2=eps2, vector=v))
    return out


def _pair_matrix(gram, block, basis):
    kb = block @ basis
    return np.array([[gram_pairing(gram, kb[:, j], basis[:, i])
                      for j in range(basis.shape[1])]
                     for i in range(basis.shape[1])])


@dataclass(frozen=True)
class CorrectedFrequency:
    """Resonance frequency of one mode with its first-order correction.

    omega_tilde is the first-order product form
    omega * [1 - (1 - 2 lambda)^{-1} (eps1 lam1 + eps2 lam2)];
    omega_tilde_sqrt evaluates (omega_p/sqrt 2) sqrt(1 - 2 lam_tilde)
    directly.  The two agree to O(eps^2).
    """

    n: int
    eigenvalue: float
    lam_tilde: float
    omega: float
    omega_tilde: float
    omega_tilde_sqrt: float


def corrected_frequencies(corrected, omega_p):
    """Map corrected eigenvalues to resonance frequencies (in eV)."""
    out = []
    base = omega_p / np.sqrt(2.0)
    for mode in corrected:
        lam = mode.eigenvalue
        if lam >= 0.5:
            raise ExcludedModeError(
                f"eigenvalue {lam:.6g} >= 1/2 has no resonance frequency")
        omega = base * np.sqrt(1.0 - 2.0 * lam)
        corr = mode.eps1 * mode.lam1 + mode.eps2 * mode.lam2
        omega_tilde = omega * (1.0 - corr / (1.0 - 2.0 * lam))
        omega_tilde_sqrt = base * np.sqrt(max(1.0 - 2.0 * mode.lam_tilde, 0.0))
        out.append(CorrectedFrequency(n=mode.n, eigenvalue=lam,
                                      lam_tilde=mode.lam_tilde,
                                      omega=float(omega),
                                      omega_tilde=float(omega_tilde),
                                      omega_tilde_sqrt=float(omega_tilde_sqrt)))
    return out
