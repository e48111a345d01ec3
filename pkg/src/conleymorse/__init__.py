"""Conley-Morse persistence barcodes for sequences of combinatorial multivector fields."""

from .complex import SimplicialComplex, build_complex, closure, is_convex, mouth
from .conley import (
    ConleyIndex,
    ConleyMorseGraph,
    IndexPair,
    MorseDecomposition,
    closure_pair,
    conley_index,
    conley_morse_graph,
    index_pair_pf,
    intersect_index_pairs,
    minimal_morse_decomposition,
    restrict_index_pair,
    thicken_index_pair,
    validate_index_pair,
)
from .dynamics import (
    build_digraph,
    direct_connection,
    essential_sccs,
    invariant_part,
    is_isolated,
    isolated_completion,
    oracle_invariant_part,
    push_forward,
    strongly_connected_components,
)
from .errors import ConleyError
from .linalg import Homology, betti_by_rank, induced_inclusion_map, induced_simplicial_map, relative_homology
from .mvf import MultivectorField, build_field, fv, intersect_fields, is_critical, is_refinement
from .pipeline import (
    Bundle,
    CombinedBarcode,
    FiltrationSequence,
    RelevantCMGraph,
    changing_n_sequences,
    eliminate_redundancies,
    find_conley_morse_filtrations,
    full_barcode,
    graph_filtration,
    relevant_cm_graph,
)
from .zigzag import Bar, ZigzagModule, audit_barcode, build_graph_zigzag, build_relative_zigzag, interval_decompose

__version__ = "0.1.0"
