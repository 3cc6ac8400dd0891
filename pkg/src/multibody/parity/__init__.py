from .embed import (
    DecodedState,
    EmbeddingMap,
    LogicalProblem,
    Plaquette,
    RoundTripReport,
    compile_problem,
    decode,
    default_constraint,
    encode,
    gauge_fixed,
    physical_labels,
    plaquettes,
    roundtrip_validate,
    valid_sector,
    violations,
)
from .layout import (
    DEFAULT_LAYOUT,
    GridIndex,
    LayoutOptions,
    LayoutResult,
    Point,
    UnitCell,
    UnitCellLayout,
    cell_spec,
    unit_cell_layout,
)
