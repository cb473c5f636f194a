"""Separating-triangle structure and hamiltonian-connectedness of plane triangulations."""

__version__ = "0.1.0"

from .plane import (  # noqa: E402
    PlanarCodeError,
    PlaneGraph,
    Triangulation,
    TriangulationError,
    canonical_code,
    contract_edge,
    decode_planar_code,
    delete_edge_add_edge,
    encode_planar_code,
    subdivide_face,
    subdivide_shared_edge,
)
from .structure import (  # noqa: E402
    ScatteringWitness,
    SeparatingTriangle,
    chordless_separating_quadrangles,
    find_common_separating_edge,
    is_4_connected,
    is_reducible_edge,
    scattering_certificate_not_hc,
    scattering_lower_bound,
    separating_triangles,
)
from .decomposition import DecompositionTree, TreeShape, decomposition_tree, split_at, tree_shape  # noqa: E402
from .hamsearch import (  # noqa: E402
    HCReport,
    PairStatus,
    PremiseLedger,
    RuleConfig,
    check_hc,
    check_hc_apex_oracle,
    ham_cycle_through,
    ham_path,
    rotation_closure,
    two_edge_hc_check,
)
from .constructions import (  # noqa: E402
    TreeSpec,
    counterexample_from_tree,
    double_wheel,
    enumerate_triangulations,
    fixtures,
    wheel,
)
