"""rfrskit: exact certificates for nilpotent groups and graph groups.

Pure-Python, arbitrary-precision toolkit covering integer lattice algebra
(Hermite/Smith normal forms), power-commutator presentations of finitely
generated torsion-free nilpotent groups, their finite-index subgroup
lattices, verification of descending-chain (RFRS) conditions with bounded
obstruction certificates, and graph-group word problems with truncated
power-series embeddings.

All values are immutable and all functions pure, so everything is safe
for concurrent use.
"""

from .errors import ResourceLimitExceeded
from .intlinalg import (
    INFINITE,
    AbelianGroupStructure,
    AbelianQuotient,
    IntMatrix,
    MatrixOrderReport,
    SmithDecomposition,
    abelian_group_from_relations,
    abelian_quotient,
    det,
    finite_order_semisimple_check,
    hnf,
    hnf_basis,
    is_unimodular,
    is_unipotent,
    lattice_index,
    lattice_member,
    left_kernel,
    matrix_from_text,
    matrix_to_text,
    saturate,
    snf,
    xgcd,
)
from .pcgroups import (
    Element,
    PcPresentation,
    abelianization,
    build_standard,
    direct_product,
    free_abelian,
    heisenberg,
    presentation_from_text,
    presentation_to_text,
    rational_ab_kernel_member,
    unitriangular,
)
from .raags import (
    Graph,
    RaagPresentation,
    RaagWord,
    RtfnWitnessReport,
    TruncatedSeries,
    graph_from_text,
    graph_to_text,
    magnus_image,
    normal_form,
    raag_from_graph,
    rtfn_witness,
    series_multiply,
    word_from_tokens,
)
from .rfrs import (
    Filtration,
    ObstructionCertificate,
    RfrsReport,
    RfrsStep,
    SubgroupRecord,
    obstruction_certificate,
    rational_kernel_subgroup,
    restrict_chain,
    trapped_central_witness,
    verify_rfrs_chain,
)
from .subgroups import (
    CenterAbReport,
    InducedPresentation,
    Subgroup,
    center,
    center_ab_report,
    chain_from_text,
    chain_to_text,
    enumerate_normal_subgroups,
    express_in_basis,
    hirsch_rank,
    induced_presentation,
    isolator,
    lower_central_series,
    map_into_ambient,
    subgroup_closure,
    verify_inclusion_homomorphism,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianGroupStructure",
    "AbelianQuotient",
    "CenterAbReport",
    "Element",
    "Filtration",
    "Graph",
    "INFINITE",
    "IntMatrix",
    "InducedPresentation",
    "MatrixOrderReport",
    "ObstructionCertificate",
    "PcPresentation",
    "RaagPresentation",
    "RaagWord",
    "ResourceLimitExceeded",
    "RfrsReport",
    "RfrsStep",
    "RtfnWitnessReport",
    "SmithDecomposition",
    "Subgroup",
    "SubgroupRecord",
    "TruncatedSeries",
    "abelian_group_from_relations",
    "abelian_quotient",
    "abelianization",
    "build_standard",
    "center",
    "center_ab_report",
    "chain_from_text",
    "chain_to_text",
    "det",
    "direct_product",
    "enumerate_normal_subgroups",
    "express_in_basis",
    "finite_order_semisimple_check",
    "free_abelian",
    "graph_from_text",
    "graph_to_text",
    "heisenberg",
    "hirsch_rank",
    "hnf",
    "hnf_basis",
    "induced_presentation",
    "is_unimodular",
    "is_unipotent",
    "isolator",
    "lattice_index",
    "lattice_member",
    "left_kernel",
    "lower_central_series",
    "magnus_image",
    "map_into_ambient",
    "matrix_from_text",
    "matrix_to_text",
    "normal_form",
    "obstruction_certificate",
    "presentation_from_text",
    "presentation_to_text",
    "raag_from_graph",
    "rational_ab_kernel_member",
    "rational_kernel_subgroup",
    "restrict_chain",
    "rtfn_witness",
    "saturate",
    "series_multiply",
    "snf",
    "subgroup_closure",
    "trapped_central_witness",
    "unitriangular",
    "verify_inclusion_homomorphism",
    "verify_rfrs_chain",
    "word_from_tokens",
    "xgcd",
]
