"""The four lowest polariton states |1>..|4> of the driven circuit-QED system.

Exact states come from diagonalizing the rotating-frame Hamiltonian; the
analytic large-detuning forms mix |g,0>/|e,0> (lower doublet) and
|g,1>/|e,1> (upper doublet) with angles theta_l and theta_u.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import HilbertSpace, SystemParams, build_rotating_hamiltonian, dispersive_frequencies
from .numerics import DEGENERACY_GAP, fix_phase, hermitian_eigendecompose

N_POLARITONS = 4
TRACKING_MIN_OVERLAP = 0.5


@dataclass(frozen=True)
class PolaritonBasis:
    """Labeled polariton states.

    ``states[:, k]`` is state |k+1> expanded over the bare basis of ``space``.
    With ``labeling == "energy"`` the energies are ascending; a basis produced
    by :func:`track_labels_across_sweep` may carry ``labeling == "tracked"``.
    """

    states: np.ndarray
    energies: np.ndarray
    provenance: str
    space: HilbertSpace
    labeling: str = "energy"
    permutation: tuple[int, ...] = field(default=(0, 1, 2, 3))

    def state(self, label: int) -> np.ndarray:
        return self.states[:, label - 1]

    def overlaps(self, other: "PolaritonBasis") -> np.ndarray:
        """|<self_i|other_j>| for labels i, j (0-based array indices)."""
        return np.abs(self.states.conj().T @ other.states)


@dataclass(frozen=True)
class MixingAngles:
    theta_l: float
    theta_u: float


def _dominant_index(v: np.ndarray) -> int:
    return int(np.argmax(np.abs(v)))


def polariton_basis_exact(p: SystemParams, h: HilbertSpace = HilbertSpace()) -> PolaritonBasis:
    eig = hermitian_eigendecompose(build_rotating_hamiltonian(p, h))
    order = list(range(N_POLARITONS))
    # break exact ties by dominant bare state (|g,n> sorts before |e,n>)
    k = 0
    while k < N_POLARITONS:
        end = k + 1
        while end < N_POLARITONS and eig.values[end] - eig.values[end - 1] < DEGENERACY_GAP:
            end += 1
        order[k:end] = sorted(order[k:end], key=lambda i: _dominant_index(eig.vectors[:, i]))
        k = end
    states = np.array(eig.vectors[:, order])
    energies = np.array(eig.values[order])
    return PolaritonBasis(states, energies, "exact", h)


def mixing_angles(p: SystemParams) -> MixingAngles:
    chi = p.chi
    return MixingAngles(
        theta_l=math.atan2(2 * p.Omega, p.tilde_omega_q - chi),
        theta_u=math.atan2(2 * p.Omega, -p.tilde_omega_q + 3 * chi),
    )


def polariton_basis_analytic(p: SystemParams, h: HilbertSpace = HilbertSpace()) -> tuple[PolaritonBasis, MixingAngles]:
    """Large-detuning polariton states built from the bare doublets.

    Energies are the doublet centres (dispersive level positions) split by
    omega_21 = sqrt((w_q~ - chi)^2 + 4 Omega^2) and
    omega_43 = sqrt((w_q~ - 3 chi)^2 + 4 Omega^2).
    """
    ang = mixing_angles(p)
    cl, sl = math.cos(ang.theta_l / 2), math.sin(ang.theta_l / 2)
    cu, su = math.cos(ang.theta_u / 2), math.sin(ang.theta_u / 2)

    states = np.zeros((h.dim, N_POLARITONS), dtype=complex)
    g0, e0, g1, e1 = h.index("g", 0), h.index("e", 0), h.index("g", 1), h.index("e", 1)
    states[[e0, g0], 0] = -sl, cl
    states[[e0, g0], 1] = cl, sl
    states[[g1, e1], 2] = -su, cu
    states[[g1, e1], 3] = cu, su

    w_g0, w_e0 = dispersive_frequencies(p, 0)
    w_g1, w_e1 = dispersive_frequencies(p, 1)
    w21 = math.hypot(p.tilde_omega_q - p.chi, 2 * p.Omega)
    w43 = math.hypot(p.tilde_omega_q - 3 * p.chi, 2 * p.Omega)
    lower, upper = 0.5 * (w_g0 + w_e0), 0.5 * (w_g1 + w_e1)
    energies = np.array([lower - w21 / 2, lower + w21 / 2, upper - w43 / 2, upper + w43 / 2])
    return PolaritonBasis(fix_phase(states), energies, "analytic", h), ang


def transition_frequencies(b: PolaritonBasis) -> dict[tuple[int, int], float]:
    """omega_ij = E_i - E_j for every label pair i > j."""
    e = b.energies
    return {(i, j): float(e[i - 1] - e[j - 1])
            for i in range(2, N_POLARITONS + 1) for j in range(1, i)}


def omega31_closed_form(p: SystemParams, omega_21: float, omega_43: float) -> float:
    """omega_31 = w_r~ - (omega_43 + omega_21) / 2.

    Disagrees with exact diagonalization by tens of MHz at the standard
    parameters (5036 vs ~5102 MHz at Omega = 20); kept for reference only,
    use :func:`transition_frequencies` for real work.
    """
    return p.tilde_omega_r - 0.5 * (omega_43 + omega_21)


def track_labels_across_sweep(previous: PolaritonBasis, current: PolaritonBasis) -> PolaritonBasis:
    """Relabel ``current`` so each state continues the most-overlapping previous one.

    Greedy assignment on the 4x4 overlap matrix, largest overlap first. If any
    matched overlap is below 0.5 the continuation is ambiguous and ``current``
    is returned in plain energy order.
    """
    if previous.states.shape != current.states.shape:
        raise ValueError(
            f"cannot track labels between bases of shape {previous.states.shape} and {current.states.shape}"
        )
    ov = previous.overlaps(current)
    assign = [-1] * N_POLARITONS
    work = ov.copy()
    for _ in range(N_POLARITONS):
        i, j = np.unravel_index(np.argmax(work), work.shape)
        if work[i, j] < TRACKING_MIN_OVERLAP:
            return current
        assign[i] = j
        work[i, :] = -1.0
        work[:, j] = -1.0
    perm = tuple(int(current.permutation[j]) for j in assign)
    return PolaritonBasis(
        states=current.states[:, assign],
        energies=current.energies[assign],
        provenance=current.provenance,
        space=current.space,
        labeling="tracked" if assign != [0, 1, 2, 3] else current.labeling,
        permutation=perm,
    )
