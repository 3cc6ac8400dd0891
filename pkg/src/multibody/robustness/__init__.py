from .mismatch import (
    MismatchSample,
    build_error_hamiltonian,
    correct_ancilla_fields,
    mismatch_sample,
    sector_error_means,
)
from .failure import FailureVerdict, critical_sigma, failure_check, landscape
from .threebody import (
    ALL_TRIPLES,
    CONVENTIONS,
    DEFAULT_THREE_BODY,
    NO_ANCILLA_INTERNAL,
    ThreeBodyOptions,
    three_body_term,
    three_body_tolerance,
)
from .montecarlo import (
    J_N_SMALL,
    THREADS_ENV,
    YieldPoint,
    correctability_bound,
    critical_sigmas,
    default_threads,
    minimum_critical_sigma,
    yield_curve,
)
