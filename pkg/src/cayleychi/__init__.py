"""Cayley graphs over SL_n of finite fields and rings: spectra, chromatic
bounds and explicit colourings."""

from .cayley import (
    AdditiveGroup,
    CayleyGraph,
    Coloring,
    Graph,
    MatrixGroup,
    cayley_build,
    connectivity_bipartiteness,
    find_monochromatic_edge,
    induced_subgraph,
    lift_coloring,
    read_dimacs,
    sing_graph,
    write_dimacs,
)
from .chromatic import (
    ChromaticResult,
    clique_number,
    coset_coloring,
    exact_chromatic,
    greedy_dsatur,
    theta_coloring,
    verify_coloring,
)
from .counting import CountReport, count_rank_variety, gowers_mixing_check, multiplication_table
from .errors import *  # noqa: F401,F403
from .estimators import AdjacencySpectrum, DSaturColoring, ExactColoring, MaxClique, check_adjacency
from .kloosterman import (
    KloostermanValue,
    embedding_check,
    hyperbola_graph,
    hyperbola_spectrum,
    klo_sl_bound,
    kloosterman,
    kloosterman_table,
    weil_check,
    weil_sweep,
)
from .matrices import (
    GroupMatrix,
    SymmetricSet,
    embed_a,
    matrix_rank,
    rank_le_set,
    sing_set,
    sl_enumerate,
    sl_order,
    unipotent_class_of,
)
from .rings import RingElement, RingSpec, multiplicative_generator, ring_inverse, square_class
from .spectral import (
    CharacterRow,
    QuadraticSurd,
    Spectrum,
    eig_dense,
    hoffman_bound,
    jacobi_eigenvalues,
    quasirandom_bound,
    sarnak_bound,
    sing2_spectrum_exact,
    sl2_character_table,
)

__version__ = "0.1.0"
