"""Exact polynomial arithmetic, parsing and Groebner-basis linear algebra."""
from .groebner import (
    INFINITE,
    Caps,
    GroebnerBasis,
    ImageSolver,
    current_caps,
    groebner_module,
    homology_dim,
    homology_presentation,
    normal_form,
    quotient_k_dim,
    resource_caps,
    solve_linear,
    syzygies,
)
from .matrix import PolyMatrix
from .polynomial import Poly, parse_poly
from .ring import QQ, Field, RingCtx


def substitute(p: Poly, images: dict, target: RingCtx | None = None) -> Poly:
    """Ring-homomorphism evaluation of ``p`` under ``var -> image``."""
    return p.substitute(images, target)


__all__ = [
    "INFINITE", "Caps", "Field", "GroebnerBasis", "ImageSolver", "Poly", "PolyMatrix",
    "QQ", "RingCtx", "current_caps", "groebner_module", "homology_dim",
    "homology_presentation", "normal_form", "parse_poly", "quotient_k_dim",
    "resource_caps", "solve_linear", "substitute", "syzygies",
]
