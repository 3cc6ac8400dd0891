from .build import (
    KINDS,
    N_LOCAL,
    STRICT_GUARD,
    SYMMETRIC,
    THREE_LOCAL,
    GadgetSpec,
    ancilla_biases,
    ancilla_fields,
    build_n_local,
    build_symmetric,
    build_three_local,
    counting_pattern,
    gadget_from_spec,
    target_energy,
)
from .verify import (
    GadgetReport,
    SectorRow,
    spectral_margin,
    thermal_reliability,
    validity_margin,
    verify_gadget,
)
