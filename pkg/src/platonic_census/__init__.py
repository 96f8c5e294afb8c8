"""Census machinery for hyperbolic Platonic tessellations."""

from .solids import SchlafliType, CENSUS_TYPES, solid_size
from .triangulation import (
    Triangulation, LinkSurface, add_platonic_solid, glue_faces, vertex_links,
    is_orientable, serialize_triangulation, parse_triangulation,
)
from .canonical import (
    SpecializedIsoSig, AutomorphismReport, canonical_reindex, specialized_iso_sig,
    automorphisms, dual, is_self_dual, serialize_sig, parse_sig, triangulation_from_sig,
    dual_classes,
)
from .search import (
    SearchConfig, SeenSet, MemoryBudgetExceeded, fix_edges, search,
    enumerate_tessellations, enumerate_parallel, tally, write_census, read_census,
)
from .general import (
    GeneralTriangulation, ValidityReport, validate_general, serialize_general,
    parse_general, barycentric_subdivision,
)
from .homology import (
    AbelianGroup, Presentation, fundamental_group_presentation, simplify_presentation,
    smith_form, first_homology,
)
from .covers import CoverRecord, covers, transitive_actions, cyclic_actions
from .invariants import (
    InvariantProfile, profile, group_by_profile, is_homology_link, num_cusps,
    provisional_names,
)
from .cubulation import (
    CubeComplex, FaceCycleDecomposition, DiagonalChoice, face_cycles, choose_diagonals,
    subdivide_appendix, subdivide_two_coloring, two_coloring_signatures,
)
from .augktg import (
    FatGraph, FatGraphSig, k4, a_move, u_move, x_move, simplify_r1, fatgraph_sig,
    pd_export, enumerate_augktg,
)

__version__ = "0.1.0"
