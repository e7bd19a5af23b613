"""Transition matrix elements, decay rates and three-level transition types.

Matrix elements are taken in the emission direction: for an upper label i
and lower label j,

    Q_ij = |<j| sigma_- |i>|,   C_ij = |<j| a |i>|,

so that gamma_ij = gamma_c C_ij^2 + gamma_q Q_ij^2 is the rate of i -> j.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import RegimeError
from .model import HilbertSpace, SystemParams
from .polariton import (
    N_POLARITONS,
    MixingAngles,
    PolaritonBasis,
    mixing_angles,
    polariton_basis_exact,
    transition_frequencies,
)

Pair = tuple[int, int]
PAIRS: tuple[Pair, ...] = tuple((i, j) for i in range(2, N_POLARITONS + 1) for j in range(1, i))
DEFAULT_TYPE_THRESHOLD = 0.15


@dataclass(frozen=True)
class TransitionTable:
    """Pairwise quantities keyed by (i, j) with i > j (labels 1..4).

    ``gamma`` stays empty until :func:`decay_rates` fills it.
    """

    Q: dict[Pair, float]
    C: dict[Pair, float]
    omega: dict[Pair, float] = field(default_factory=dict)
    gamma: dict[Pair, float] = field(default_factory=dict)

    @property
    def Gamma_31(self) -> float:
        return self.gamma[(3, 1)] + self.gamma[(3, 2)]


def matrix_elements_exact(b: PolaritonBasis, h: HilbertSpace | None = None) -> TransitionTable:
    h = h or b.space
    a = h.annihilation()
    sm = h.sigma_minus()
    psi = b.states
    a_pol = psi.conj().T @ a @ psi  # a_pol[j, i] = <j|a|i>
    sm_pol = psi.conj().T @ sm @ psi
    Q = {(i, j): float(abs(sm_pol[j - 1, i - 1])) for i, j in PAIRS}
    C = {(i, j): float(abs(a_pol[j - 1, i - 1])) for i, j in PAIRS}
    return TransitionTable(Q=Q, C=C, omega=transition_frequencies(b))


def matrix_elements_analytic(angles: MixingAngles) -> TransitionTable:
    """Three-level elements from the mixing angles; qubit/cavity leakage set to zero."""
    half_sum = 0.5 * (angles.theta_u + angles.theta_l)
    C = {(3, 2): abs(math.cos(half_sum)), (3, 1): abs(math.sin(half_sum)), (2, 1): 0.0}
    Q = {(2, 1): math.cos(angles.theta_l / 2) ** 2, (3, 1): 0.0, (3, 2): 0.0}
    return TransitionTable(Q=Q, C=C)


def decay_rates(t: TransitionTable, gamma_c: float, gamma_q: float) -> TransitionTable:
    if gamma_c < 0 or gamma_q < 0:
        raise ValueError("decay rates must be non-negative")
    gamma = {k: gamma_c * t.C[k] ** 2 + gamma_q * t.Q[k] ** 2 for k in t.C}
    return replace(t, gamma=gamma)


def transition_table(p: SystemParams, h: HilbertSpace = HilbertSpace()) -> TransitionTable:
    """Exact pipeline: diagonalize, take matrix elements, fill decay rates."""
    b = polariton_basis_exact(p, h)
    return decay_rates(matrix_elements_exact(b, h), p.gamma_c, p.gamma_q)


def _rate_difference(p: SystemParams, Omega: float, model: str, h: HilbertSpace) -> float:
    q = p.replace(Omega=Omega)
    if model == "exact":
        t = transition_table(q, h)
    elif model == "analytic":
        t = decay_rates(matrix_elements_analytic(mixing_angles(q)), q.gamma_c, q.gamma_q)
    else:
        raise ValueError(f"model must be 'exact' or 'analytic', got {model!r}")
    return t.gamma[(3, 1)] - t.gamma[(3, 2)]


def impedance_match_drive(
    p: SystemParams,
    omega_range: tuple[float, float] = (0.0, 40.0),
    model: str = "exact",
    h: HilbertSpace = HilbertSpace(),
    tol: float = 1e-3,
) -> float:
    """Drive strength Omega* where gamma_31 = gamma_32, by bisection."""
    lo, hi = omega_range
    f_lo = _rate_difference(p, lo, model, h)
    f_hi = _rate_difference(p, hi, model, h)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        raise RegimeError(
            f"gamma_31 - gamma_32 does not change sign on Omega in [{lo}, {hi}] MHz: "
            f"{f_lo:.4g} at {lo}, {f_hi:.4g} at {hi}"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = _rate_difference(p, mid, model, h)
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TransitionType(str, enum.Enum):
    XI = "Ξ"
    LAMBDA = "Λ"
    V = "V"
    DELTA = "Δ"
    NONE = "none"


def classify_transition_type(t: TransitionTable, threshold: float = DEFAULT_TYPE_THRESHOLD) -> tuple[TransitionType, ...]:
    """Which three-level configurations the legs 2-1 (qubit), 3-1 and 3-2 (cavity) support.

    Returns e.g. ``(LAMBDA, DELTA)`` when both cavity legs and the qubit leg
    are all above ``threshold``: a Lambda system that becomes cyclic once the
    qubit port is driven too.
    """
    c31 = t.C[(3, 1)] > threshold
    c32 = t.C[(3, 2)] > threshold
    q21 = t.Q[(2, 1)] > threshold
    if c31 and c32:
        return (TransitionType.LAMBDA, TransitionType.DELTA) if q21 else (TransitionType.LAMBDA,)
    if c32 and q21:
        return (TransitionType.XI,)
    if c31 and q21:
        return (TransitionType.V,)
    return (TransitionType.NONE,)


def format_types(types: tuple[TransitionType, ...]) -> str:
    return ",".join(t.value for t in types)


def drive_monotonicity_violations(Omegas, tables: list[TransitionTable]) -> list[str]:
    """Where C_31 fails to rise or C_32 fails to fall along increasing Omega.

    An empty list means both trends hold on the whole slice.
    """
    order = np.argsort(np.asarray(Omegas, dtype=float))
    out = []
    for a, b in zip(order[:-1], order[1:]):
        ta, tb = tables[a], tables[b]
        if tb.C[(3, 1)] <= ta.C[(3, 1)]:
            out.append(f"C_31 not increasing between Omega={Omegas[a]:g} and {Omegas[b]:g}")
        if tb.C[(3, 2)] >= ta.C[(3, 2)]:
            out.append(f"C_32 not decreasing between Omega={Omegas[a]:g} and {Omegas[b]:g}")
    return out
