"""Colourful selection for contact pairs and witness points for translative coverings."""
from .contact import (
    ContactSystem,
    InscribedHomothet,
    check_symmetric_condition,
    check_uu_form,
    check_w_hatw_form,
    extract_contact_pairs,
    max_inscribed_homothet,
)
from .cover import (
    CoveringInstance,
    Piece,
    Refusal,
    WitnessReport,
    construct_witness,
    k_inradius,
    regular_simplex,
    relative_width,
    simplex_negative_homothet,
    sumset_witness,
    verify_cover_sample,
)
from .geom import (
    HalfSpace,
    PairedVector,
    Polytope,
    contains_point,
    hat,
    min_width_2d,
    minkowski_sum_vertices,
    origin_in_hull,
    support,
    width_in_direction,
)
from .select import (
    BACKEND,
    ColourClass,
    SelectionInstance,
    SelectionResult,
    coordinate_ascent,
    objective,
    select_bang,
    select_colourful,
    select_kadets,
    verify_guarantee,
)

__version__ = "0.1.0"
