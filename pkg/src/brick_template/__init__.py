"""Stiffness template for the 8-node rectangular assumed-stress brick."""

from .bending import aspect_sweep, beam_reference_energy, bending_case, bending_displacements, energy_ratio
from .decomposition import (
    Decomposition,
    RankReport,
    basic_modes,
    basic_stiffness,
    decompose,
    extract_ho_kernel,
    higher_order_projector,
    higher_order_stiffness,
    lumping_matrix,
    numeric_rank,
    weight_matrix,
)
from .geometry import (
    BrickGeometry,
    FaceId,
    IsotropicMaterial,
    NaturalPoint,
    compliance_matrix,
    elasticity_matrix,
    make_brick,
    shape_function,
)
from .stress import (
    ElementMatrices,
    divergence_residual,
    element_matrices,
    equilibrium_matrix,
    face_force_block,
    flexibility_matrix,
    generalized_stiffness,
    physical_stiffness,
    stress_interpolation,
)
from .template import BendingObjective, OptimizationReport, optimize, ratio_objective, templated_stiffness

__version__ = "0.1.0"
