"""Unoriented grid homology over F2[U] with link-cobordism chain maps."""

from .algebra import (
    COMMON_VARIABLE,
    ChainMap,
    ExponentVector,
    GradedBasis,
    GradedModuleSummary,
    HomologyGenerator,
    HomologyPresentation,
    MonomialComplex,
    ONE,
    PolyF2U,
    SmithResult,
    U,
    ZERO,
    add_chain_maps,
    boundary_squared,
    boundary_squares_to_zero,
    chain_map_degree,
    chain_maps_equal,
    compose_chain_maps,
    homology,
    identity_chain_map,
    induced_map,
    is_chain_map,
    is_homogeneous,
    maps_equal_on_homology,
    poly_divmod,
    present_homology,
    scale_chain_map,
    smith_reduce,
    solve_linear,
    specialize,
    u_power,
)
from .cobordism import (
    BandMapChoice,
    BandSwitch,
    DiskDestab,
    DiskStab,
    Movie,
    MovieResult,
    QuasiDestab,
    QuasiStab,
    Renumber,
    StabModel,
    band_map,
    band_map_raw,
    band_map_sum,
    compose_movie,
    derived_stab_offsets,
    disk_destab_map,
    disk_stab_map,
    move_map,
    parse_movie,
    quasi_destab_map,
    quasi_stab_map,
    renumber_map,
    serialize_movie,
    verify_commutation,
)
from .complexes import (
    DEFAULT_STATE_CAP,
    Rectangle,
    build_complex,
    build_gc_prime,
    candidate_rectangles,
    delta_grading,
    dump_complex,
    enumerate_states,
    expected_curvature,
    lehmer_rank,
    lehmer_unrank,
    rectangles,
    verify_curvature,
)
from .corpus import corpus_grid, corpus_grids, corpus_names, corpus_text
from .errors import (
    AnchorMismatch,
    BadPermutation,
    BadPolicy,
    CapExceeded,
    ChainMapViolation,
    GridFloerError,
    InvalidSite,
    MarkingCollision,
    MoveSequenceInvalid,
    NonHomogeneousEntry,
    NonPermutation,
    NotAComplex,
    NotChainMap,
    NotHomogeneous,
    ParseError,
    SitesNotDisjoint,
    SizeTooSmall,
    UnknownSuite,
)
from .grids import (
    BandClass,
    GridDiagram,
    LinkTopology,
    MIN_GRID_SIZE,
    SwitchSite,
    alternating_colorings,
    apply_switch,
    classify_band,
    find_switch_sites,
    link_topology,
    marking_successor,
    parse_grid,
    random_grid,
    same_letter_neighbors,
    scan_diagonal_blocks,
    serialize_grid,
    site_diagonal,
    site_exists,
    site_markings,
    validate,
)

__version__ = "0.1.0"
