import numpy as np
import pytest

from multibody.errors import DimensionMismatchError, EnumerationLimitError, IndexSetError, UsageError
from multibody.spin import (
    AnnealSchedule,
    IsingHamiltonian,
    SpinConfig,
    dumps,
    effective_logical_spectrum,
    enumerate_spectrum,
    geometric_ladder,
    ground_states,
    loads,
    magnetization,
    read_hamiltonian,
    simulated_anneal,
    write_hamiltonian,
)
from multibody.spin.enumerate import check_size


def four_body() -> IsingHamiltonian:
    return IsingHamiltonian(4, (((0, 1, 2, 3), 1.0),))


def test_config_bits_and_arrows() -> None:
    c = SpinConfig.from_arrows("↓↑↑↑")
    assert c.bits == 0b1110
    assert c.spin(0) == -1
    assert str(c) == "↓↑↑↑"
    assert c.flipped() == SpinConfig.from_arrows("↑↓↓↓")
    assert magnetization(c, range(4)) == 2


@pytest.mark.parametrize("bits,n", [(4, 2), (-1, 3)])
def test_config_rejects_bits_outside_range(bits: int, n: int) -> None:
    with pytest.raises(DimensionMismatchError):
        SpinConfig(bits, n)


def test_config_spin_out_of_range() -> None:
    with pytest.raises(IndexSetError):
        SpinConfig(0, 2).spin(2)


@pytest.mark.parametrize("arrows,expected", [("↑↑↑↑", 1.0), ("↓↑↑↑", -1.0), ("↓↓↑↑", 1.0)])
def test_four_body_energy(arrows: str, expected: float) -> None:
    assert four_body().energy(SpinConfig.from_arrows(arrows)) == expected


def test_terms_are_canonical() -> None:
    h = IsingHamiltonian(3, (((2, 0), 0.5), ((0, 2), 0.25), ((1,), 0.0), ((), 2.0)))
    assert h.terms == (((0, 2), 0.75),)
    assert h.constant == 2.0
    assert h.weight((2, 0)) == 0.75
    assert h.order == 2


def test_terms_reject_bad_supports() -> None:
    with pytest.raises(IndexSetError):
        IsingHamiltonian(2, (((0, 0), 1.0),))
    with pytest.raises(IndexSetError):
        IsingHamiltonian(2, (((0, 2), 1.0),))
    with pytest.raises(ValueError):
        IsingHamiltonian(2, (((0,), float("nan")),))


def test_energy_dimension_mismatch() -> None:
    with pytest.raises(DimensionMismatchError):
        four_body().energy(SpinConfig(0, 3))
    with pytest.raises(DimensionMismatchError):
        four_body() + IsingHamiltonian(3)


def test_fields_couplings_and_scaling() -> None:
    h = IsingHamiltonian.from_fields_and_couplings(3, {0: 1.0, 2: -0.5}, {(0, 1): 2.0}, constant=1.0)
    assert h.fields().tolist() == [1.0, 0.0, -0.5]
    assert h.couplings() == {(0, 1): 2.0}
    assert h.max_abs_weight == 2.0
    doubled = h.scaled(2.0)
    assert doubled.constant == 2.0
    assert doubled.weight((0, 1)) == 4.0
    c = SpinConfig(0b101, 3)
    assert (h + h).energy(c) == pytest.approx(2 * h.energy(c))


def test_single_field_spectrum() -> None:
    spectrum = enumerate_spectrum(IsingHamiltonian(1, (((0,), 1.0),)))
    assert [(str(c), e) for c, e in spectrum] == [("↓", -1.0), ("↑", 1.0)]
    assert spectrum.minimum == -1.0


def test_spectrum_orders_ties_by_bits() -> None:
    spectrum = enumerate_spectrum(IsingHamiltonian(2, (((0, 1), 1.0),)))
    assert spectrum.bits.tolist() == [1, 2, 0, 3]
    assert spectrum.energies.tolist() == [-1.0, -1.0, 1.0, 1.0]


def test_antiferromagnetic_pair_ground_states() -> None:
    ground = ground_states(IsingHamiltonian(2, (((0, 1), 1.0),)))
    assert ground == {SpinConfig.from_arrows("↑↓"), SpinConfig.from_arrows("↓↑")}


def test_ground_states_tolerance() -> None:
    h = IsingHamiltonian(2, (((0,), 0.001), ((0, 1), 1.0)))
    assert len(ground_states(h)) == 1
    assert len(ground_states(h, tol=0.01)) == 2
    with pytest.raises(ValueError):
        ground_states(h, tol=-1.0)


def test_enumeration_limit() -> None:
    check_size(28)
    with pytest.raises(EnumerationLimitError):
        check_size(29)
    with pytest.raises(EnumerationLimitError):
        enumerate_spectrum(IsingHamiltonian(30))


def test_effective_spectrum_minimizes_over_ancilla() -> None:
    # Ancilla 2 follows the sign of spin 0 through a ferromagnetic bond.
    h = IsingHamiltonian(3, (((0, 2), -1.0), ((1,), 0.5)))
    effective = effective_logical_spectrum(h, [0, 1], [2])
    assert list(effective) == [SpinConfig(b, 2) for b in range(4)]
    assert effective[SpinConfig(0b00, 2)] == (-1.5, SpinConfig(0, 1))
    assert effective[SpinConfig(0b11, 2)] == (-0.5, SpinConfig(1, 1))


@pytest.mark.parametrize("logical,ancilla", [([0, 1], [1, 2]), ([0], [1]), ([0, 0, 1], [2])])
def test_effective_spectrum_rejects_bad_index_sets(logical, ancilla) -> None:
    with pytest.raises(IndexSetError):
        effective_logical_spectrum(IsingHamiltonian(3), logical, ancilla)


def test_energies_vectorized_matches_single() -> None:
    rng = np.random.default_rng(7)
    terms = tuple(((i, j), float(w)) for (i, j), w in zip([(0, 1), (1, 2), (0, 3)], rng.normal(size=3)))
    h = IsingHamiltonian(4, terms + (((0, 1, 2), 0.3),), constant=0.5)
    energies = h.energies(np.arange(16))
    assert energies == pytest.approx([h.energy(SpinConfig(b, 4)) for b in range(16)])


def test_text_format_reads_back_exactly(tmp_path) -> None:
    h = IsingHamiltonian(3, (((0,), 0.1), ((0, 1), -1.0 / 3.0), ((0, 1, 2), 2.5)), constant=0.7)
    path = tmp_path / "h.txt"
    write_hamiltonian(h, path, comment="three spins")
    assert path.read_text().startswith("# three spins\nn 3\n")
    assert read_hamiltonian(path) == h


def test_text_format_errors() -> None:
    with pytest.raises(UsageError) as missing:
        loads("t 1.0 0\n")
    assert missing.value.field == "n"
    with pytest.raises(UsageError) as unknown:
        loads("n 2\nx 1\n")
    assert unknown.value.field == "line 2"
    with pytest.raises(UsageError) as malformed:
        loads("# header\nn 2\nt abc 0\n")
    assert malformed.value.field == "line 3"


def test_text_format_skips_comments_and_blank_lines() -> None:
    h = loads("# c\n\nn 2\nc 1.5\nt -1.0 0 1\n")
    assert h == IsingHamiltonian(2, (((0, 1), -1.0),), 1.5)
    assert dumps(h) == "n 2\nc 1.5\nt -1.0 0 1\n"


def test_anneal_finds_ferromagnetic_ground_state() -> None:
    h = IsingHamiltonian(6, tuple(((i, i + 1), -1.0) for i in range(5)))
    config, energy = simulated_anneal(h, AnnealSchedule(seed=11))
    assert energy == -5.0
    assert config.bits in (0, 0b111111)


def test_anneal_is_deterministic_in_seed() -> None:
    h = IsingHamiltonian(5, tuple(((i, j), (-1.0) ** (i + j)) for i in range(5) for j in range(i + 1, 5)))
    schedule = AnnealSchedule(sweeps=3, temperatures=geometric_ladder(2.0, 0.1, 5), seed=4)
    first = simulated_anneal(h, schedule)
    assert simulated_anneal(h, schedule) == first
    assert first[1] == h.energy(first[0])
    assert first[1] >= enumerate_spectrum(h).minimum


@pytest.mark.parametrize("kwargs", [
    {"sweeps": 0},
    {"temperatures": (1.0, 2.0)},
    {"temperatures": (1.0, 0.0)},
    {"temperatures": ()},
    {"seed": -1},
])
def test_anneal_schedule_validation(kwargs) -> None:
    with pytest.raises(ValueError):
        AnnealSchedule(**kwargs)
