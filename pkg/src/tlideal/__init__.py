"""Exact Temperley-Lieb category computations: diagrams, idempotents, root-of-unity structure and tensor ideals."""
from .diagram import Diagram, catalan, enumerate_diagrams, hom_dimension
from .exactscalar import GENERIC, Cyclo, CycloScalar, LaurentPoly, Scalar, quantum_integer, specialize
from .ideal import (
    GramMatrix,
    constancy_check,
    gram_matrix,
    ideal_truncation,
    negligible_basis,
    verify_even_subcategory,
    verify_main_theorem,
)
from .linalg import Subspace, exact_rank, kernel_basis
from .morphism import Morphism, compose, cond_expect, pad_embed, pad_retract, tensor, trace
from .rootspec import critical_geometry, evaluate_morphism, z_left, z_reg_nil
from .tower import (
    BratteliPath,
    YoungDiagram,
    bratteli_graph,
    central_idempotent,
    count_tableaux,
    jones_wenzl,
    path_idempotent,
    young_successors,
)

__version__ = "0.1.0"

__all__ = [
    "BratteliPath",
    "Cyclo",
    "CycloScalar",
    "Diagram",
    "GENERIC",
    "GramMatrix",
    "LaurentPoly",
    "Morphism",
    "Scalar",
    "Subspace",
    "YoungDiagram",
    "bratteli_graph",
    "catalan",
    "central_idempotent",
    "compose",
    "cond_expect",
    "constancy_check",
    "count_tableaux",
    "critical_geometry",
    "enumerate_diagrams",
    "evaluate_morphism",
    "exact_rank",
    "gram_matrix",
    "hom_dimension",
    "ideal_truncation",
    "jones_wenzl",
    "kernel_basis",
    "negligible_basis",
    "pad_embed",
    "pad_retract",
    "path_idempotent",
    "quantum_integer",
    "specialize",
    "tensor",
    "trace",
    "verify_even_subcategory",
    "verify_main_theorem",
    "young_successors",
    "z_left",
    "z_reg_nil",
]
