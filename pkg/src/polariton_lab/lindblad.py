"""Three-level Lindblad master equation as an independent check of the probe susceptibility.

Levels are indexed 0, 1, 2 for |1>, |2>, |3>. Density matrices are
column-stacked, vec(rho)[i + 3 j] = rho[i, j], so that
vec(A X B) = (B^T (x) A) vec(X).

Both fields act on disjoint transitions (probe on 3-1, control on 3-2), so
in the frame rotating at omega_p on |3> and at omega_p - omega_c on |2> the
Hamiltonian is static:

    H = (Delta_1 - Delta_2)|2><2| + Delta_1 |3><3|
        - (Omega_p/2)(|3><1| + h.c.) - (Omega_c/2)(|3><2| + h.c.)

with Delta_1 = delta + Delta_2. The probe response therefore follows from
ordinary steady states, with no Floquet treatment needed. The steady state
is not linearized around rho_11 = 1, so comparing against the closed-form
susceptibility tests that approximation too.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateKernelError, NonlinearResponseError
from .numerics import kronecker, solve_linear
from .spectroscopy import ThreeLevelRates

DIM = 3
KERNEL_GAP = 1e6
NONLINEARITY_RTOL = 1e-4


@dataclass(frozen=True)
class DecayRates:
    """Spontaneous decay 3->1, 3->2, 2->1 and optional pure dephasing of |3>, |2> (MHz)."""

    gamma_31: float
    gamma_32: float
    gamma_21: float
    gamma_3deph: float = 0.0
    gamma_2deph: float = 0.0

    def __post_init__(self):
        for name, value in vars(self).items():
            if value < 0:
                raise ValueError(f"{name} must be >= 0, got {value!r}")

    @classmethod
    def from_three_level(cls, r: ThreeLevelRates, branching: float = 0.5) -> "DecayRates":
        """Split Gamma_31 into gamma_31 = branching * Gamma_31 and the remainder.

        The probe response to first order depends only on the sum.
        """
        if r.dephasing_mode:
            return cls(branching * r.Gamma_31, (1 - branching) * r.Gamma_31, 0.0, r.gamma_3deph, r.gamma_2deph)
        return cls(branching * r.Gamma_31, (1 - branching) * r.Gamma_31, r.gamma_21)


def _proj(i: int, j: int) -> np.ndarray:
    m = np.zeros((DIM, DIM), dtype=complex)
    m[i, j] = 1.0
    return m


def _dissipator(op: np.ndarray) -> np.ndarray:
    eye = np.eye(DIM)
    ldl = op.conj().T @ op
    return kronecker(op.conj(), op) - 0.5 * kronecker(eye, ldl) - 0.5 * kronecker(ldl.T, eye)


def frame_hamiltonian(Omega_c: float, Delta_1: float, Delta_2: float, Omega_p: float = 0.0) -> np.ndarray:
    H = np.diag([0.0, Delta_1 - Delta_2, Delta_1]).astype(complex)
    H[2, 0] = H[0, 2] = -0.5 * Omega_p
    H[2, 1] = H[1, 2] = -0.5 * Omega_c
    return H


def build_liouvillian(
    rates: DecayRates,
    Omega_c: float,
    Delta_1: float,
    Delta_2: float,
    Omega_p: float = 0.0,
) -> np.ndarray:
    """9x9 generator acting on vec(rho)."""
    H = frame_hamiltonian(Omega_c, Delta_1, Delta_2, Omega_p)
    eye = np.eye(DIM)
    L = -1j * (kronecker(eye, H) - kronecker(H.T, eye))
    channels = [
        (rates.gamma_31, _proj(0, 2)),
        (rates.gamma_32, _proj(1, 2)),
        (rates.gamma_21, _proj(0, 1)),
        (rates.gamma_3deph, _proj(2, 2)),
        (rates.gamma_2deph, _proj(1, 1)),
    ]
    for rate, op in channels:
        if rate:
            L = L + rate * _dissipator(op)
    return L


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    return np.asarray(v).reshape(DIM, DIM, order="F")


def trace_functional() -> np.ndarray:
    return vec(np.eye(DIM)).real


def steady_state(L: np.ndarray) -> np.ndarray:
    """Unique unit-trace fixed point of ``L``.

    The kernel must be one-dimensional: the two smallest singular values have
    to differ by more than a factor 1e6, else :class:`DegenerateKernelError`.
    """
    s = np.linalg.svd(L, compute_uv=False)
    floor = np.finfo(float).eps * s[0]
    if s[-2] <= KERNEL_GAP * max(s[-1], floor):
        raise DegenerateKernelError(
            f"steady state is not unique: smallest singular values {s[-2]:.3e}, {s[-1]:.3e}; "
            "check that every level can decay or is driven"
        )
    A = np.array(L, dtype=complex)
    A[0, :] = trace_functional()
    b = np.zeros(DIM * DIM, dtype=complex)
    b[0] = 1.0
    rho = unvec(solve_linear(A, b))
    return 0.5 * (rho + rho.conj().T)


@dataclass(frozen=True)
class LinearResponse:
    chi: complex
    chi_half: complex  # same estimate with half the probe amplitude
    nonlinearity: float  # relative difference between the two


def _probe_chi(rates, Omega_c, Delta_2, delta, eps):
    Delta_1 = delta + Delta_2
    up = steady_state(build_liouvillian(rates, Omega_c, Delta_1, Delta_2, eps))
    down = steady_state(build_liouvillian(rates, Omega_c, Delta_1, Delta_2, -eps))
    # central difference of rho_31; chi = 2 rho_31 / Omega_p to first order
    return complex((up[2, 0] - down[2, 0]) / eps)


def default_epsilon(rates: DecayRates, Omega_c: float) -> float:
    scale = max(rates.gamma_31 + rates.gamma_32 + rates.gamma_3deph, abs(Omega_c), rates.gamma_21, 1e-12)
    return 1e-4 * scale


def linear_response(
    rates: DecayRates,
    Omega_c: float,
    Delta_2: float,
    delta: float,
    epsilon: float | None = None,
) -> LinearResponse:
    eps = default_epsilon(rates, Omega_c) if epsilon is None else epsilon
    chi = _probe_chi(rates, Omega_c, Delta_2, delta, eps)
    chi_half = _probe_chi(rates, Omega_c, Delta_2, delta, eps / 2)
    Gamma = rates.gamma_31 + rates.gamma_32 + rates.gamma_3deph
    size = max(abs(chi), abs(chi_half), 1e-6 * 2.0 / max(Gamma, abs(Omega_c), 1e-12))
    diff = abs(chi - chi_half) / size
    if diff > NONLINEARITY_RTOL:
        raise NonlinearResponseError(
            f"probe response not linear at epsilon={eps:g}: results at epsilon and epsilon/2 differ by "
            f"{diff:.2e} (relative); use a smaller probe amplitude"
        )
    return LinearResponse(chi, chi_half, diff)


def linear_response_chi(rates: DecayRates, Omega_c: float, Delta_2: float, delta: float,
                        epsilon: float | None = None) -> complex:
    """Probe susceptibility from full steady states, in the closed-form units."""
    return linear_response(rates, Omega_c, Delta_2, delta, epsilon).chi
