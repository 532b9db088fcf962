"""Exact computations for partial configuration spaces of Riemann surfaces."""
from .admissible import AdmissibleMap, enumerate_admissible, image_h1
from .graphs import Graph, complete_graph, cycle_graph, edgeless_graph, parse_graph, read_graph
from .holonomy import Formality, formality_classify, lie_hom_check, raw_presentation, reduced_presentation
from .lie import GradedRanks, LieElement, LiePresentation, lcs_ranks
from .linalg import QMatrix, Subspace, kernel_basis, rref, subspace_membership
from .model import OSModel, betti1, build_curve_model, build_model, h1_basis
from .resonance import h1_rank_at, resonance_components, verify_decomposition

__all__ = [
    "AdmissibleMap", "Formality", "Graph", "GradedRanks", "LieElement", "LiePresentation", "OSModel", "QMatrix",
    "Subspace", "betti1", "build_curve_model", "build_model", "complete_graph", "cycle_graph", "edgeless_graph",
    "enumerate_admissible", "formality_classify", "h1_basis", "h1_rank_at", "image_h1", "kernel_basis",
    "lcs_ranks", "lie_hom_check", "parse_graph", "raw_presentation", "read_graph", "reduced_presentation",
    "resonance_components", "rref", "subspace_membership", "verify_decomposition",
]
