"""Quasi-static plasmon resonances of 2D core-shell structures.

Boundary-integral solver for the spectrum of the two-boundary NP-type
block operator of a scaled, normally perturbed core-shell geometry, the
derived Drude-model resonance frequencies with first-order shape
corrections, and frequency-swept scattering intensities.
"""

from .backend import BACKEND
from .errors import (
    AccuracyWarningError,
    ConfigError,
    ContrastSingularError,
    DegeneracyResolutionError,
    ExcludedModeError,
    GeometryDegenerateError,
    NPShellError,
    ResonanceSingularError,
    SelfAdjointnessError,
)
from .geometry import (
    Curve,
    LayeredGeometry,
    ShapeFunction,
    length_element_expansion,
    make_circle,
    perturb_curve,
    scaled_curve,
)
from .perturbation import (
    CorrectedMode,
    PerturbationBlocks,
    assemble_cross_L,
    assemble_cross_R,
    assemble_k1_self,
    assemble_perturbation_blocks,
    corrected_frequencies,
    first_order_corrections,
)
from .potentials import (
    DenseOperator,
    assemble_dsdn_cross,
    assemble_hypersingular_self,
    assemble_np_adjoint_self,
    assemble_np_self,
    assemble_single_layer_self,
    eval_potentials_offboundary,
)
from .resonance import (
    DrudeModel,
    ResonanceTable,
    bandwidth,
    contrast_z,
    disk_closed_form_frequencies,
    drude_permittivity,
    frequencies_from_eigenvalues,
    resonance_scan,
)
from .scattering import (
    IncidentField,
    SpectrumCurve,
    assemble_rhs,
    find_peaks,
    intensity_spectrum,
    solve_densities,
)
from .spectrum import (
    BlockOperator,
    EigenMode,
    GramMatrix,
    assemble_block_operator,
    assemble_gram,
    disk_oracle_eigs,
    gram_pairing,
    spectrum,
)

__version__ = "0.1.0"
