"""Exact computations with matrix factorizations, Koszul modules and singularity categories."""
from .errors import (ContextMismatch, ContractionInvalid, IdentityViolation, LGError, NotClosed,
                     ParseError, PeriodicityNotReached, ResourceCapExceeded, VariableCollision,
                     WindowTooSmall)
from .koszul import (AuModule, KoszulModule, act_point, convolve_ext, forget, koszul_algebra,
                     new_koszul, pull_push, residue_representative, rhom_trivial_dims, shift_koszul,
                     telescope, trivial_module, twisted_E, u_cone_check)
from .mf import (GradedHom, LGPair, MatrixFactorization, StableDims, box_product, cone_mf,
                 hom_cohomology_dims, is_null_homotopic, new_mf, shift_mf)
from .orlov import contraction_witness, fold, fold_monoidality_check, stabilize
from .poly import INFINITE, Field, Poly, PolyMatrix, RingCtx, parse_poly
from .sing import (SingReport, is_perfect, milnor_number, point_case_report, stable_hom_dims,
                   thom_sebastiani_check, u_torsion_order_point)

__version__ = "0.1.0"

__all__ = [
    "AuModule", "ContextMismatch", "ContractionInvalid", "Field", "GradedHom", "INFINITE",
    "IdentityViolation", "KoszulModule", "LGError", "LGPair", "MatrixFactorization", "NotClosed",
    "ParseError", "PeriodicityNotReached", "Poly", "PolyMatrix", "ResourceCapExceeded", "RingCtx",
    "SingReport", "StableDims", "VariableCollision", "WindowTooSmall", "act_point", "box_product",
    "cone_mf", "contraction_witness", "convolve_ext", "fold", "fold_monoidality_check", "forget",
    "hom_cohomology_dims", "is_null_homotopic", "is_perfect", "koszul_algebra", "milnor_number",
    "new_koszul", "new_mf", "parse_poly", "point_case_report", "pull_push",
    "residue_representative", "rhom_trivial_dims", "shift_koszul", "shift_mf", "stabilize",
    "stable_hom_dims", "telescope", "thom_sebastiani_check", "trivial_module", "twisted_E",
    "u_cone_check", "u_torsion_order_point",
]
