from .params import DEFAULT_CIRCUIT, CircuitParams, CouplingMatrix, three_local_circuit
from .inductance import EXACT, M2, build_inductance_matrix, truncated_inverse
from .potential import bias_fluxes, circuit_potential, potential_gradient
from .couplings import (
    DEFAULT_DELTA,
    BornOppenheimerSurface,
    balance_inner_flux,
    coupling_prefactor,
    double_loop_couplings,
    extract_effective_couplings,
    second_order_couplings,
    solve_coupler_phase,
    truncation_spurious_scale,
)
