"""Irreducible-spectrum cross-validation for duals of twisted group algebras.

The pipeline: build a finite group G with a subgroup H carrying a minimal
twist, verify the twist axioms exactly, decompose the dual of the twisted
group algebra into double-coset blocks, and compute every block's
irreducible spectrum by three independent routes — direct splitting, the
stabilizer-invariant subalgebra, and the projective-representation
prediction from the stabilizer 2-cocycle — then check the multisets agree
along with the supporting trace, multiplicity, and divisibility laws.
"""

from .correspondence import (Config, CosetSpectrum, Report, SymplecticConstruction,
                             TableConstruction, build_instance, coset_report,
                             f_g_map, full_report, invariant_algebra_Ug,
                             predicted_spectrum, render_json, render_table)
from .dual_algebras import (GroupAction, SCAlgebra, a2_to_a1op_iso, build_A1_A2_star,
                            build_block_algebra, dual_product_delta)
from .errors import AuditError, CotwistError, SeedRetryError
from .exactlin import CycArray, cyc_rank
from .groups import (Bicharacter, DoubleCoset, FiniteGroup, Subgroup,
                     build_elementary_abelian_symplectic, build_semidirect,
                     double_cosets, stabilizer_Kg)
from .projective import (ProjectiveRep, multiplicity_law_check,
                         projective_rep_from_action, pullback_and_tensor_cocycle,
                         skolem_noether, trace_vanishing_check, twisted_group_algebra)
from .scalars import Cyclotomic
from .semisimple import (WedderburnSpectrum, split_simple_retrying,
                         wedderburn_dims_retrying)
from .twist import (TriangularStructure, TwistAudit, TwistData, assemble_twist,
                    load_twist_matrix, make_twist, q_element_and_antipode_check,
                    save_twist_file, square_dimension_check, symplectic_twist,
                    triangular_structure, verify_twist_axioms)

__version__ = "0.1.0"

__all__ = [
    "AuditError", "Bicharacter", "Config", "CosetSpectrum", "CotwistError",
    "CycArray", "Cyclotomic", "DoubleCoset", "FiniteGroup", "GroupAction",
    "ProjectiveRep", "Report", "SCAlgebra", "SeedRetryError", "Subgroup",
    "SymplecticConstruction", "TableConstruction", "TriangularStructure",
    "TwistAudit", "TwistData", "WedderburnSpectrum", "a2_to_a1op_iso",
    "assemble_twist", "build_A1_A2_star", "build_block_algebra",
    "build_elementary_abelian_symplectic", "build_instance", "build_semidirect",
    "coset_report", "cyc_rank", "double_cosets", "dual_product_delta", "f_g_map",
    "full_report", "invariant_algebra_Ug", "load_twist_matrix", "make_twist",
    "multiplicity_law_check", "predicted_spectrum", "projective_rep_from_action",
    "pullback_and_tensor_cocycle", "q_element_and_antipode_check", "render_json",
    "render_table", "save_twist_file", "skolem_noether", "split_simple_retrying",
    "square_dimension_check", "stabilizer_Kg", "symplectic_twist",
    "trace_vanishing_check", "triangular_structure", "twisted_group_algebra",
    "verify_twist_axioms", "wedderburn_dims_retrying",
]
