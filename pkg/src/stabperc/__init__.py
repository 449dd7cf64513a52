"""Combinatorial machinery for stabilizer/CSS codes on the erasure channel.

Subpackages by responsibility:

- ``f2la``: bit-packed linear algebra over GF(2) (compiled core with a
  pure-Python fallback, selected at import time).
- ``stabilizer``: Pauli operators, stabilizer matrices, erasure
  correctability, covered-operator enumeration, entropy rate bound.
- ``css_graph``: CSS code pairs, their incidence graphs, distances,
  erasure correctability, and randomized augmentation.
- ``rank_profile``: mean-rank profiles of randomly masked matrices and
  the rate bounds built from them (exact or Monte-Carlo expectation).
- ``series_bounds``: tree generating functions, closed-form rate bounds,
  threshold solving, and percolation bound tables.
- ``percolation``: edge-percolation sampling, cluster decomposition,
  problematic-cluster detection, and erasure failure rates.
- ``verify``: brute-force oracle suites cross-checking the above.
- ``cli``: the ``stabperc`` command line.
"""

__version__ = "0.1.0"

from .f2la import BitMatrix, BitVector, backend_name, kernel_basis, rank, rank_masked
from .stabilizer import (
    ErasureAnalysis,
    PauliOperator,
    StabilizerMatrix,
    analyze_erasure,
    enumerate_covered,
    fano_lower_bound,
    num_logical,
    parse_stabilizer_text,
)
from .css_graph import (
    CssCode,
    IncidenceGraph,
    augment_css,
    css_dimension,
    example_code_2_5,
    girth,
    graph_from_2m,
    is_correctable_css,
    min_distance_bounded,
    parse_css_text,
)
from .rank_profile import ExpectationMode, MatrixView, delta, empirical_rate_bound, phi
from .series_bounds import (
    BoundSpec,
    css2m_bound,
    easy_bounds,
    percolation_upper,
    stab_bound,
    threshold_solve,
)
from .percolation import PercolationInstance, erasure_failure_rate, estimate_fr_gr

__all__ = [
    "__version__",
    "BitMatrix",
    "BitVector",
    "backend_name",
    "kernel_basis",
    "rank",
    "rank_masked",
    "ErasureAnalysis",
    "PauliOperator",
    "StabilizerMatrix",
    "analyze_erasure",
    "enumerate_covered",
    "fano_lower_bound",
    "num_logical",
    "parse_stabilizer_text",
    "CssCode",
    "IncidenceGraph",
    "augment_css",
    "css_dimension",
    "example_code_2_5",
    "girth",
    "graph_from_2m",
    "is_correctable_css",
    "min_distance_bounded",
    "parse_css_text",
    "ExpectationMode",
    "MatrixView",
    "delta",
    "empirical_rate_bound",
    "phi",
    "BoundSpec",
    "css2m_bound",
    "easy_bounds",
    "percolation_upper",
    "stab_bound",
    "threshold_solve",
    "PercolationInstance",
    "erasure_failure_rate",
    "estimate_fr_gr",
]
