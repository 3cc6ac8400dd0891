import math

import numpy as np
import pytest

from multibody.circuit import (
    DEFAULT_CIRCUIT,
    EXACT,
    M2,
    BornOppenheimerSurface,
    CircuitParams,
    CouplingMatrix,
    balance_inner_flux,
    bias_fluxes,
    build_inductance_matrix,
    circuit_potential,
    coupling_prefactor,
    double_loop_couplings,
    extract_effective_couplings,
    potential_gradient,
    second_order_couplings,
    solve_coupler_phase,
    three_local_circuit,
    truncated_inverse,
    truncation_spurious_scale,
)
from multibody.errors import (
    BistableCouplerError,
    DimensionMismatchError,
    PassivityError,
    SingularMatrixError,
)


def test_uniform_preset() -> None:
    assert DEFAULT_CIRCUIT.n == 8
    assert DEFAULT_CIRCUIT.M == (0.1,) * 8
    assert three_local_circuit().M == (0.1, 0.1, 0.1, 0.2)


@pytest.mark.parametrize("n,kwargs", [(2, {"M": 1.0}), (2, {"L": -1.0}), (8, {"M": 0.5})])
def test_passivity(n: int, kwargs) -> None:
    with pytest.raises(PassivityError):
        CircuitParams.uniform(n, **kwargs)


def test_shape_validation() -> None:
    with pytest.raises(ValueError):
        CircuitParams(1.0, (1.0,), (0.1,), 1.0, (1.0,))
    with pytest.raises(ValueError):
        CircuitParams(1.0, (1.0, 1.0), (0.1,), 1.0, (1.0, 1.0))


def test_restricted_and_mutual_edits() -> None:
    p = DEFAULT_CIRCUIT.with_mutual(2, 0.05)
    assert p.M[2] == 0.05
    assert p.restricted((1, 2)).M == (0.1, 0.05)
    assert p.scaled_mutuals(2.0).M[0] == pytest.approx(0.2)


def test_inductance_matrix_layout() -> None:
    lmat = build_inductance_matrix(CircuitParams.uniform(2, L=2.0, M=0.3, L_c=1.5))
    assert lmat.tolist() == [[1.5, -0.3, -0.3], [-0.3, 2.0, 0.0], [-0.3, 0.0, 2.0]]


def test_exact_inverse() -> None:
    lmat = build_inductance_matrix(DEFAULT_CIRCUIT)
    assert truncated_inverse(lmat, EXACT) @ lmat == pytest.approx(np.eye(9), abs=1e-12)
    # Schur complement of the star: 1 / (L_c - sum M^2 / L).
    assert truncated_inverse(lmat)[0, 0] == pytest.approx(1 / 0.92)


def test_truncated_inverse_error_is_third_order() -> None:
    def error(M: float) -> float:
        lmat = build_inductance_matrix(CircuitParams.uniform(8, M=M))
        return float(np.max(np.abs(truncated_inverse(lmat, M2) - truncated_inverse(lmat, EXACT))))

    grid = [0.1, 0.05, 0.025]
    slope = np.polyfit(np.log(grid), np.log([error(M) for M in grid]), 1)[0]
    assert slope == pytest.approx(3.0, abs=0.3)


def test_truncated_inverse_errors() -> None:
    with pytest.raises(SingularMatrixError):
        truncated_inverse(np.ones((2, 2)))
    with pytest.raises(ValueError):
        truncated_inverse(np.eye(2), "M4")
    with pytest.raises(ValueError):
        truncated_inverse(np.ones((3, 3)), M2)


def test_potential_matches_gradient() -> None:
    p = CircuitParams.uniform(3, phi_cx=0.3)
    phix = np.array([0.3, 3.0, 3.2, 3.1])
    phi = np.array([0.1, 2.9, 3.3, 3.0])
    eps = 1e-6
    numeric = [(circuit_potential(p, phi + eps * e, phix) - circuit_potential(p, phi - eps * e, phix)) / (2 * eps)
               for e in np.eye(4)]
    assert potential_gradient(p, phi, phix) == pytest.approx(numeric, abs=1e-7)


def test_potential_dimension_mismatch() -> None:
    with pytest.raises(DimensionMismatchError):
        circuit_potential(DEFAULT_CIRCUIT, np.zeros(3), np.zeros(9))


def test_coupler_phase_and_bias() -> None:
    assert solve_coupler_phase(DEFAULT_CIRCUIT) == pytest.approx(0.0, abs=1e-12)
    p = CircuitParams.uniform(4, phi_cx=0.5)
    phi_c0 = solve_coupler_phase(p)
    assert 0.0 < phi_c0 < 0.5
    fluxes = bias_fluxes(p, phi_c0)
    assert fluxes[0] == 0.5
    assert fluxes[1:] == pytest.approx(np.pi + 0.1 * (phi_c0 - 0.5))


def test_bistable_coupler_rejected() -> None:
    with pytest.raises(BistableCouplerError):
        solve_coupler_phase(CircuitParams.uniform(2, E_c=3.0, phi_cx=math.pi))


def test_prefactor() -> None:
    assert coupling_prefactor(DEFAULT_CIRCUIT) == pytest.approx(0.5)
    assert coupling_prefactor(CircuitParams.uniform(2, E_c=0.0)) == pytest.approx(0.0)
    # Flux bias at π inverts the coupler curvature and the coupling sign.
    assert coupling_prefactor(CircuitParams.uniform(2, E_c=0.5, phi_cx=math.pi)) < 0


def test_second_order_couplings() -> None:
    K = second_order_couplings(DEFAULT_CIRCUIT)
    assert K.n == 8
    assert K[0, 1] == pytest.approx(0.005)
    assert K[3, 3] == 0.0
    assert K.off_diagonal() == pytest.approx([0.005] * 56)


def test_extracted_couplings_track_second_order() -> None:
    extracted = extract_effective_couplings(DEFAULT_CIRCUIT)
    second = second_order_couplings(DEFAULT_CIRCUIT)
    assert extracted.values == pytest.approx(extracted.values.T)
    assert extracted.off_diagonal() == pytest.approx(second.off_diagonal(), rel=0.1)
    # Uniform circuits couple uniformly.
    assert np.ptp(extracted.off_diagonal()) == pytest.approx(0.0, abs=1e-9)


def test_extracted_couplings_are_separable() -> None:
    p = CircuitParams(1.0, (1.0,) * 4, (0.05, 0.1, 0.15, 0.2), 1.0, (1.0,) * 4)
    K = extract_effective_couplings(p)
    assert K[0, 1] * K[2, 3] == pytest.approx(K[0, 2] * K[1, 3], rel=1e-3)


def test_doubled_mutual_doubles_ancilla_couplings() -> None:
    K = extract_effective_couplings(three_local_circuit())
    assert K[0, 3] / K[0, 1] == pytest.approx(2.0, rel=1e-3)
    assert K[1, 3] / K[1, 2] == pytest.approx(2.0, rel=1e-3)


def test_extract_needs_positive_delta() -> None:
    with pytest.raises(ValueError):
        extract_effective_couplings(DEFAULT_CIRCUIT, delta=0.0)


def test_surface_energy_is_minimal_in_coupler_phase() -> None:
    surface = BornOppenheimerSurface(CircuitParams.uniform(3, phi_cx=0.4))
    qubits = np.array([3.0, 3.3, 3.1])
    phi_c = surface.coupler_phase(qubits)
    best = surface.energy(qubits)
    for shift in (-1e-3, 1e-3):
        phi = np.concatenate(([phi_c + shift], qubits))
        assert circuit_potential(surface.params, phi, surface.phix) > best


def test_spurious_scale_without_mutuals() -> None:
    e2, e3 = truncation_spurious_scale(CircuitParams.uniform(4, M=0.0))
    assert e2 == 0.0
    assert e3 == pytest.approx(0.0, abs=1e-10)


def test_three_body_term_vanishes_at_zero_flux() -> None:
    _, e3 = truncation_spurious_scale(CircuitParams.uniform(4))
    assert e3 == pytest.approx(0.0, abs=1e-10)


def test_three_body_term_is_third_order() -> None:
    def e3(M: float) -> float:
        return truncation_spurious_scale(CircuitParams.uniform(4, M=M, phi_cx=0.5))[1]

    assert abs(e3(0.02)) > 0
    assert math.log2(e3(0.02) / e3(0.01)) == pytest.approx(3.0, abs=0.1)


def test_three_body_ratio_grows_linearly_in_M() -> None:
    def ratio(M: float) -> float:
        e2, e3 = truncation_spurious_scale(CircuitParams.uniform(4, M=M, phi_cx=0.5))
        return abs(e3 / e2)

    assert ratio(0.01) <= 0.05
    assert math.log2(ratio(0.02) / ratio(0.01)) == pytest.approx(1.0, abs=0.2)


def test_pair_scale_is_second_order() -> None:
    e2 = [truncation_spurious_scale(CircuitParams.uniform(4, M=M))[0] for M in (0.1, 0.05)]
    assert e2[0] / e2[1] == pytest.approx(4.0)


def test_no_three_body_term_with_two_circuits() -> None:
    e2, e3 = truncation_spurious_scale(CircuitParams.uniform(2))
    assert e2 > 0
    assert e3 == 0.0


def test_double_loop_scatter() -> None:
    outer = DEFAULT_CIRCUIT
    inner = CircuitParams.uniform(4, E_c=0.5)
    total = double_loop_couplings(outer, inner, (4, 5, 6, 7))
    outer_only = extract_effective_couplings(outer)
    assert total[0, 1] == pytest.approx(outer_only[0, 1])
    assert total[4, 5] == pytest.approx(outer_only[4, 5] + extract_effective_couplings(inner)[0, 1])
    with pytest.raises(ValueError):
        double_loop_couplings(outer, inner, (4, 5))


def test_inner_flux_cancels_ancilla_couplings() -> None:
    outer = DEFAULT_CIRCUIT
    inner = CircuitParams.uniform(4, E_c=0.5)
    ancillae = (4, 5, 6, 7)
    phi = balance_inner_flux(outer, inner, ancillae)
    assert 0.0 < phi < math.pi
    balanced = CircuitParams(inner.L_c, inner.L, inner.M, inner.E_c, inner.E, phi)
    total = double_loop_couplings(outer, balanced, ancillae)
    ancilla_pairs = [total[i, j] for i in ancillae for j in ancillae if i < j]
    assert np.mean(ancilla_pairs) == pytest.approx(0.0, abs=1e-8)
    # Logical couplings are untouched by the inner loop.
    assert total[0, 1] > 0


def test_inner_flux_without_bracket() -> None:
    with pytest.raises(ValueError):
        balance_inner_flux(DEFAULT_CIRCUIT, CircuitParams.uniform(4, E_c=0.0), (4, 5, 6, 7))


def test_coupling_matrix_frame() -> None:
    matrix = CouplingMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
    frame = matrix.to_frame()
    assert list(frame.columns) == ["0", "1"]
    assert frame.iloc[0, 1] == 1.0
    with pytest.raises(ValueError):
        matrix.values[0, 0] = 2.0
    with pytest.raises(ValueError):
        CouplingMatrix(np.zeros((2, 3)))
