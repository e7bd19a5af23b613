"""Driven qubit-cavity system: parameters, truncated basis, rotating-frame Hamiltonian.

All frequencies and rates are ordinary frequencies (omega / 2 pi) in MHz.
The drive is removed by going to the frame rotating at ``omega_d`` for both
qubit and cavity, which leaves

    H = (w_q~ / 2) sz + w_r~ (a^dag a + 1/2) + g (a^dag sm + a sp) + Omega (sm + sp)

with w_q~ = omega_q - omega_d and w_r~ = omega_r - omega_d.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

DEFAULT_N_MAX = 4


@dataclass(frozen=True)
class SystemParams:
    omega_q: float = 5000.0
    omega_r: float = 10000.0
    g: float = 500.0
    omega_d: float = 4900.0
    Omega: float = 0.0
    gamma_q: float = 1.0
    gamma_c: float = 20.0

    def __post_init__(self):
        for name in ("omega_q", "omega_r", "g", "omega_d", "Omega", "gamma_q", "gamma_c"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        for name in ("g", "Omega", "gamma_q", "gamma_c"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)!r}")

    @property
    def tilde_omega_q(self) -> float:
        return self.omega_q - self.omega_d

    @property
    def tilde_omega_r(self) -> float:
        return self.omega_r - self.omega_d

    @property
    def Delta(self) -> float:
        # identical to omega_r - omega_q; the drive frequency cancels
        return self.tilde_omega_r - self.tilde_omega_q

    @property
    def chi(self) -> float:
        if self.Delta == 0:
            raise ZeroDivisionError("dispersive shift chi = g^2/Delta undefined at Delta = 0")
        return self.g ** 2 / self.Delta

    def replace(self, **changes) -> "SystemParams":
        from dataclasses import replace

        return replace(self, **changes)


@dataclass(frozen=True)
class HilbertSpace:
    """Qubit (x) Fock space truncated at ``n_max`` photons.

    Basis order is |g,0>, |e,0>, |g,1>, |e,1>, ..., |g,n_max>, |e,n_max>.
    """

    n_max: int = DEFAULT_N_MAX

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 2:
            raise ValueError(f"n_max must be an integer >= 2, got {self.n_max!r}")

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)

    def index(self, qubit: str, n: int) -> int:
        if qubit not in ("g", "e"):
            raise ValueError(f"qubit level must be 'g' or 'e', got {qubit!r}")
        if not 0 <= n <= self.n_max:
            raise IndexError(f"photon number {n} outside 0..{self.n_max}")
        return 2 * n + (qubit == "e")

    def label(self, index: int) -> tuple[str, int]:
        if not 0 <= index < self.dim:
            raise IndexError(f"basis index {index} outside 0..{self.dim - 1}")
        return ("e" if index % 2 else "g"), index // 2

    def ket(self, qubit: str, n: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(qubit, n)] = 1.0
        return v

    def annihilation(self) -> np.ndarray:
        """Cavity lowering operator ``a`` on the truncated space."""
        a = np.zeros((self.dim, self.dim), dtype=complex)
        for n in range(1, self.n_max + 1):
            for q in ("g", "e"):
                a[self.index(q, n - 1), self.index(q, n)] = math.sqrt(n)
        return a

    def sigma_minus(self) -> np.ndarray:
        """Qubit lowering operator |g><e| (x) 1."""
        s = np.zeros((self.dim, self.dim), dtype=complex)
        for n in range(self.n_max + 1):
            s[self.index("g", n), self.index("e", n)] = 1.0
        return s


def build_rotating_hamiltonian(p: SystemParams, h: HilbertSpace = HilbertSpace()) -> np.ndarray:
    wq, wr = p.tilde_omega_q, p.tilde_omega_r
    H = np.zeros((h.dim, h.dim), dtype=complex)
    for n in range(h.n_max + 1):
        ig, ie = h.index("g", n), h.index("e", n)
        H[ig, ig] = -0.5 * wq + wr * (n + 0.5)
        H[ie, ie] = 0.5 * wq + wr * (n + 0.5)
        H[ig, ie] = H[ie, ig] = p.Omega
        if n < h.n_max:
            j = h.index("g", n + 1)
            H[ie, j] = H[j, ie] = p.g * math.sqrt(n + 1)
    return H


@dataclass(frozen=True)
class DressedState:
    """One branch of the Jaynes-Cummings doublet spanned by |e,n> and |g,n+1>.

    ``amplitudes`` holds the (|e,n>, |g,n+1>) coefficients.
    """

    branch: str
    n: int
    theta_n: float
    energy: float
    amplitudes: tuple[float, float]


def mixing_angle(p: SystemParams, n: int) -> float:
    """theta_n with tan(theta_n) = -2 g sqrt(n+1) / Delta, taken in [0, pi].

    The branch is the one for which |+,n> is the upper eigenvector; at
    Delta = 0 this gives pi/2 (equal mixing).
    """
    return math.atan2(2.0 * p.g * math.sqrt(n + 1), -p.Delta)


def dressed_states_analytic(p: SystemParams, n: int) -> tuple[DressedState, DressedState]:
    theta = mixing_angle(p, n)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    split = 0.5 * math.sqrt(p.Delta ** 2 + 4 * p.g ** 2 * (n + 1))
    # doublet centre: mean of (w_q~/2 + w_r~(n+1/2)) and (-w_q~/2 + w_r~(n+3/2))
    centre = p.tilde_omega_r * (n + 1)
    plus = DressedState("+", n, theta, centre + split, (c, s))
    minus = DressedState("-", n, theta, centre - split, (-s, c))
    return plus, minus


def dressed_state_vector(state: DressedState, h: HilbertSpace) -> np.ndarray:
    v = np.zeros(h.dim, dtype=complex)
    v[h.index("e", state.n)] = state.amplitudes[0]
    v[h.index("g", state.n + 1)] = state.amplitudes[1]
    return v


def dispersive_frequencies(p: SystemParams, n: int) -> tuple[float, float]:
    """Dispersive-limit level frequencies (omega_|g,n>, omega_|e,n>).

    First order in g/Delta; warns when |g/Delta| >= 0.3.
    """
    if p.Delta == 0:
        raise ValueError("dispersive frequencies undefined at Delta = 0 (chi diverges)")
    if abs(p.g / p.Delta) >= 0.3:
        warnings.warn(f"|g/Delta| = {abs(p.g / p.Delta):.3g} is not small; dispersive formula unreliable",
                      stacklevel=2)
    chi = p.chi
    half = p.Delta / 2
    w_g = n * (p.tilde_omega_r + chi) + half
    w_e = p.tilde_omega_q - chi + n * (p.tilde_omega_r - chi) + half
    return w_g, w_e


@dataclass(frozen=True)
class NestingWindow:
    """Drive-frequency window omega_q - 3 chi < omega_d < omega_q - chi."""

    low: float
    high: float

    def contains(self, omega_d: float) -> bool:
        return self.low < omega_d < self.high


def nesting_boundaries(p: SystemParams) -> NestingWindow:
    if p.Delta == 0:
        raise ValueError("nesting regime undefined at Delta = 0")
    chi = p.chi
    lo, hi = p.omega_q - 3 * chi, p.omega_q - chi
    return NestingWindow(min(lo, hi), max(lo, hi))
