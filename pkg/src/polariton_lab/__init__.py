"""Polariton states, decay rates and EIT/ATS spectra of a driven qubit-cavity system."""
from .version import __version__
from .errors import (
    ConvergenceError,
    DegenerateKernelError,
    NonlinearResponseError,
    NotHermitianError,
    NumericalError,
    RegimeError,
    SingularMatrixError,
)
from .model import HilbertSpace, SystemParams, build_rotating_hamiltonian, nesting_boundaries
from .numerics import Eigensystem, hermitian_eigendecompose, solve_linear
from .polariton import PolaritonBasis, polariton_basis_analytic, polariton_basis_exact
from .transitions import (
    TransitionTable,
    TransitionType,
    classify_transition_type,
    decay_rates,
    impedance_match_drive,
    transition_table,
)
from .spectroscopy import (
    Regime,
    ThreeLevelRates,
    absorption_spectrum_pipeline,
    classify_regime,
    pole_decomposition,
    susceptibility,
)
from .lindblad import DecayRates, linear_response_chi
from .config import RunConfig, load_config
from .dataset import Dataset

__all__ = [
    "__version__",
    "ConvergenceError", "DegenerateKernelError", "NonlinearResponseError", "NotHermitianError",
    "NumericalError", "RegimeError", "SingularMatrixError",
    "HilbertSpace", "SystemParams", "build_rotating_hamiltonian", "nesting_boundaries",
    "Eigensystem", "hermitian_eigendecompose", "solve_linear",
    "PolaritonBasis", "polariton_basis_analytic", "polariton_basis_exact",
    "TransitionTable", "TransitionType", "classify_transition_type", "decay_rates",
    "impedance_match_drive", "transition_table",
    "Regime", "ThreeLevelRates", "absorption_spectrum_pipeline", "classify_regime",
    "pole_decomposition", "susceptibility",
    "DecayRates", "linear_response_chi",
    "RunConfig", "load_config", "Dataset",
]
