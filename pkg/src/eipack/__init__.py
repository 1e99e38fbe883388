"""Equi-isoclinic subspaces and equi-isoclinic tight fusion frames (EITFFs)
over R and C: constructions, certificates, coherence bounds, corner matrix
spaces and Radon-Hurwitz families."""
from .errors import *  # noqa: F401,F403
from .numerics import DEFAULT_TOL, Field, Tolerances, dim_herm
from .subspaces import (
    SubspaceSequence,
    block_coherence,
    construct_ei3,
    eitff_2rplus1_exists,
    is_equi_isoclinic,
    normalize_ei,
    principal_angles,
)
from .fusion import certify, direct_sum, fusion_gram, hoggar_c_to_r, naimark_complement, trivial_eitff
from .bounds import (
    ParamTriple,
    classify_spark_vs_welch,
    counting_bounds,
    nonexistence_table,
    radon_hurwitz,
    spark_bound,
    welch_bound,
)
from .corner import certify_dim_Kn_eq_n, corner_space, dim_L, dims_K_prefix
from .rho import build_rho, build_rho_complex, build_rho_real, c0_space, eitff_from_simplex, random_simplex

__version__ = "0.1.0"
