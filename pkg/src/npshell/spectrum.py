"""Block NP-type operator of the core-shell system and its spectrum.

The two-boundary transmission problem reduces, after pulling the
delta_i-scaled interfaces back to unit scale, to a 2x2 block operator with
self NP blocks and scaled-argument cross terms.  On mean-zero densities the
pullback is exact, and the operator is self-adjoint in the inner product
<Phi, -S[Psi]> of the physical problem, whose pullback carries delta_i
prefactors and the same scaled arguments.  Modes are normalized in that
inner product.

Note on the scaled-argument notation: a derivative of S_j[.]((d_i/d_j) x)
with respect to x carries a chain-rule factor d_i/d_j, which cancels the
printed d_j/d_i block prefactor; the net cross blocks below reflect that.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneracyResolutionError, SelfAdjointnessError
from .potentials import (
    assemble_dsdn_cross,
    assemble_np_self,
    assemble_single_layer_cross,
    assemble_single_layer_self,
    mean_zero_projector,
)

__all__ = [
    "BlockOperator",
    "GramMatrix",
    "EigenMode",
    "assemble_block_operator",
    "assemble_gram",
    "spectrum",
    "disk_oracle_eigs",
    "gram_pairing",
]

# Eigenvalues closer than this are treated as one degenerate cluster
# (circle doublets are equal to rounding; distinct families sit much
# further apart for any usable contrast ratio).
CLUSTER_TOL = 1e-9

# Eigenvalues below this magnitude cannot be separated into families at
# double precision (the disk families decay geometrically, so at extreme
# contrast the tail is numerically zero); they are dropped from the mode
# list rather than reported.
RESOLVABLE_FLOOR = 1e-8


@dataclass(frozen=True)
class BlockOperator:
    """2N x 2N discretization of the scaled two-boundary NP-type operator."""

    matrix: np.ndarray
    geometry: object
    curves: tuple = field(repr=False, default=None)
    perturbed: bool = False

    @property
    def n_per_boundary(self):
        return self.matrix.shape[0] // 2


@dataclass(frozen=True)
class GramMatrix:
    """Symmetrized matrix of the <Phi, -S[Psi]> inner product (weights folded).

    Positive semidefinite on the mean-zero subspace; the two per-boundary
    constants span its kernel and are projected out by ``projector``.
    """

    matrix: np.ndarray
    projector: np.ndarray = field(repr=False, default=None)
    curves: tuple = field(repr=False, default=None)


@dataclass(frozen=True)
class EigenMode:
    """One eigenpair: family ordinal n (1-based over |lambda| clusters),
    eigenvalue, and the H^2-normalized block eigenvector samples."""

    n: int
    eigenvalue: float
    vector: np.ndarray


def _curves_for(geometry, use_perturbed_curves):
    if use_perturbed_curves:
        return geometry.perturbed_curves()
    return geometry.base_curves()


def assemble_block_operator(geometry, use_perturbed_curves=False):
    """Assemble the scaled block operator on base circles or perturbed curves.

    Blocks: diag(-K*_1, +K*_2); cross terms are normal derivatives of the
    other boundary's single layer at arguments scaled by delta1/delta2
    (resp. its inverse).  The printed delta2/delta1 prefactor times the
    chain-rule factor of the scaled argument is identically one.
    """
    g = geometry
    c1, c2 = _curves_for(g, use_perturbed_curves)
    s12 = g.delta1 / g.delta2
    k1 = assemble_np_self(c1).entries
    k2 = assemble_np_self(c2).entries
    # block prefactor (delta2/delta1) times the chain-rule factor
    # (delta1/delta2) of the scaled-argument derivative is exactly one
    cross12 = assemble_dsdn_cross(c2, c1, s12).entries
    cross21 = assemble_dsdn_cross(c1, c2, 1.0 / s12).entries
    mat = np.block([[-k1, -cross12], [cross21, k2]])
    return BlockOperator(mat, g, curves=(c1, c2),
                         perturbed=bool(use_perturbed_curves))


def assemble_gram(geometry, use_perturbed_curves=False):
    """Gram matrix of the pulled-back H^2 inner product.

    G = -sym[ delta_i delta_j W_i S_ij ] with scaled-argument cross blocks;
    this is the quadrature of the physical <Phi, -S[Psi]> and makes the
    scaled block operator self-adjoint on mean-zero densities.
    """
    g = geometry
    c1, c2 = _curves_for(g, use_perturbed_curves)
    s12 = g.delta1 / g.delta2
    s11 = assemble_single_layer_self(c1).entries
    s22 = assemble_single_layer_self(c2).entries
    s12m = assemble_single_layer_cross(c2, c1, s12).entries
    s21m = assemble_single_layer_cross(c1, c2, 1.0 / s12).entries
    w1 = c1.weights[:, None]
    w2 = c2.weights[:, None]
    d1, d2 = g.delta1, g.delta2
    raw = -np.block([[d1 * d1 * w1 * s11, d1 * d2 * w1 * s12m],
                     [d1 * d2 * w2 * s21m, d2 * d2 * w2 * s22]])
    sym = 0.5 * (raw + raw.T)
    p1 = mean_zero_projector(c1)
    p2 = mean_zero_projector(c2)
    proj = np.block([[p1, np.zeros_like(p1)], [np.zeros_like(p2), p2]])
    return GramMatrix(sym, projector=proj, curves=(c1, c2))


def gram_pairing(gram, a, b):
    """Bilinear H^2 pairing a^T G b of block sample vectors."""
    return a @ (gram.matrix @ b)


def _cluster_starts(lams):
    """Split a sorted eigenvalue list into clusters of near-equal values."""
    starts = [0]
    for i in range(1, len(lams)):
        if abs(lams[i] - lams[i - 1]) > CLUSTER_TOL:
            starts.append(i)
    starts.append(len(lams))
    return starts


def spectrum(block_op, gram, n_max=16, sym_tol=1e-6):
    """Leading eigenmodes of the block operator on the mean-zero subspace.

    The operator is self-adjoint in the G inner product, so it is reduced
    to an ordinary symmetric eigenproblem in the G half-metric: with
    G = Q L Q^T (restricted to its positive part, which excludes the two
    per-boundary constants), C = L^{1/2} Q^T K Q L^{-1/2} is symmetric up
    to discretization error and its orthonormal eigenvectors pull back to
    an exactly G-orthonormal mode basis.  A symmetry residual above
    ``sym_tol`` signals an assembly inconsistency; the symmetrized part is
    then diagonalized, so all reported eigenvalues are real.

    Eigenvalues are sorted by |lambda| descending (+ branch first within a
    family); the largest-magnitude component of each eigenvector is made
    positive.  Modes below the double-precision resolvability floor are
    omitted, so fewer than n_max modes may return at extreme contrast.
    """
    proj = gram.projector
    kp = proj @ block_op.matrix @ proj
    gp = proj.T @ gram.matrix @ proj
    gp = 0.5 * (gp + gp.T)
    gl, gq = np.linalg.eigh(gp)
    keep = gl > 1e-13 * gl.max()
    gl, gq = gl[keep], gq[:, keep]
    root = np.sqrt(gl)

    core = gq.T @ kp @ gq
    sym = core * (root[:, None] / root[None, :])
    skew = np.linalg.norm(sym - sym.T, 2)
    scale = max(np.linalg.norm(sym, 2), 1.0)
    if skew > sym_tol * scale:
        raise SelfAdjointnessError(
            f"block operator is not H^2-self-adjoint (symmetry residual "
            f"{skew / scale:.3e}); assembly is inconsistent")
    lams, uvecs = np.linalg.eigh(0.5 * (sym + sym.T))

    order = np.argsort(np.abs(lams))[::-1]
    lams, uvecs = lams[order], uvecs[:, order]
    take = min(n_max, int(np.sum(np.abs(lams) > RESOLVABLE_FLOOR)))
    # never split a degenerate |lambda| family at the cut: a half doublet
    # would make the perturbation corrections basis-dependent
    while 0 < take < len(lams) and (
            abs(abs(lams[take]) - abs(lams[take - 1])) <= CLUSTER_TOL
            and abs(lams[take]) > RESOLVABLE_FLOOR):
        take += 1
    lams, uvecs = lams[:take], uvecs[:, :take]
    vecs = gq @ (uvecs / root[:, None])   # G-orthonormal by construction

    # |lambda|-families (tolerance CLUSTER_TOL), + branch before - branch
    # inside a family; same-lambda doublets end up adjacent.
    fam_starts = _cluster_starts(np.abs(lams))
    modes = []
    for fi in range(len(fam_starts) - 1):
        lo, hi = fam_starts[fi], fam_starts[fi + 1]
        sub = np.argsort(-lams[lo:hi], kind="stable") + lo
        starts = _cluster_starts(lams[sub])
        for clo, chi in zip(starts[:-1], starts[1:]):
            if chi - clo > 2:
                raise DegeneracyResolutionError(
                    f"eigenvalue cluster of size {chi - clo} at lambda = "
                    f"{lams[sub[clo]]:.6g}; distinct families are not "
                    "separated")
            for k in range(clo, chi):
                v = vecs[:, sub[k]]
                if v[np.argmax(np.abs(v))] < 0.0:
                    v = -v
                modes.append(EigenMode(n=fi + 1,
                                       eigenvalue=float(lams[sub[k]]),
                                       vector=v))
    return modes


def disk_oracle_eigs(r1, r2, delta1, delta2, n_max=8):
    """Closed-form spectrum for concentric disks.

    Returns (n, branch, lambda, vector_ratio) with lambda = +-(1/2) rho^n,
    rho = (delta1 r1)/(delta2 r2), and eigenvector block ratio +-rho.
    """
    if min(r1, r2, delta1, delta2) <= 0.0:
        raise ValueError("radii and scale factors must be positive")
    rho = (delta1 * r1) / (delta2 * r2)
    if not rho < 1.0:
        raise ValueError("core must be strictly inside the shell "
                         f"(contrast ratio {rho:g} >= 1)")
    out = []
    for n in range(1, n_max + 1):
        lam = 0.5 * rho**n
        ratio = (delta1 / delta2) * (r1 / r2)
        out.append((n, "+", lam, ratio))
        out.append((n, "-", -lam, -ratio))
    return out
