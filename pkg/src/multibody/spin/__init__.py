from .config import SpinConfig, magnetization
from .hamiltonian import IsingHamiltonian, energy
from .enumerate import (
    ANCILLA_LIMIT,
    ENUMERATION_LIMIT,
    Spectrum,
    effective_logical_spectrum,
    enumerate_spectrum,
    ground_states,
)
from .anneal import DEFAULT_SCHEDULE, AnnealSchedule, geometric_ladder, simulated_anneal
from .textio import dumps, loads, read_hamiltonian, write_hamiltonian
