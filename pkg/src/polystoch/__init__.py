"""Exact permanents, Latin hypercubes and polytopes of polystochastic matrices."""

from .constructions import (
    ScanResult,
    ZeroFamilySpec,
    a6,
    a6_certificate,
    count_zero_species,
    hull_witness,
    independent_zero_set,
    mols_pair,
    perturbation_scan,
    zero_family,
)
from .errors import CapExceeded
from .latin import (
    Cell,
    LatinHypercube,
    cyclic,
    delta,
    detect_linear,
    h_of_p,
    interchange_hyperplanes,
    lab_square,
    lift,
    linear_hypercube,
    p_of_h,
    switch_row_cycle,
)
from .permanent import (
    Diagonal,
    PermanentResult,
    count_transversals,
    delta_sum_check,
    has_positive_diagonal,
    mixed_transversal_exists,
    permanent1,
    permanent_s,
)
from .polytope import (
    HullCertificate,
    VertexReport,
    birkhoff_decompose,
    is_vertex,
    rank_independent,
    transversal_cover,
)
from .species import canonical_form, species_equivalent
from .tensor import (
    ConvexCombination,
    PlaneSpec,
    Tensor,
    combine,
    is_permutation_matrix,
    is_polystochastic,
    plane_sum,
    product,
    uniform,
)

__version__ = "0.1.0"
