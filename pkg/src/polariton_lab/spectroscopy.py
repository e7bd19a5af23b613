"""Probe susceptibility of the polariton Lambda system and the EIT/ATS distinction.

The reduced three-level system is |1>, |2> (lower) and |3> (upper). A control
field of Rabi frequency Omega_c drives 3-2 with detuning Delta_2 = omega_32 -
omega_c and a weak probe drives 3-1; delta is the two-photon detuning.
Spectra are in arbitrary units with unit numerator coefficient.

Two closed forms are provided. :func:`susceptibility` is the first-order
steady-state solution of the three-level master equation,

    chi = (delta - i g21/2) / ((delta + Delta_2 - i G31/2)(delta - i g21/2) - Omega_c^2/4),

which :mod:`polariton_lab.lindblad` reproduces numerically. A variant that
attaches Delta_2 to the 2-1 factor instead is available through
``swapped=True``; it coincides with the former whenever Delta_2 = 0 and
departs from the master equation otherwise.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import RegimeError
from .model import HilbertSpace, SystemParams
from .transitions import TransitionTable, TransitionType, classify_transition_type, transition_table

RESONANCE_TOL = 1e-6  # MHz, |Delta_2| below which the control counts as resonant
DOUBLE_POLE_TOL = 1e-9  # MHz


@dataclass(frozen=True)
class ThreeLevelRates:
    """Rates (MHz) entering the probe susceptibility.

    With ``dephasing_mode`` on, the 2 -> 1 spontaneous decay is dropped and
    pure dephasing sets the coherence rates instead:
    Gamma_31 -> Gamma_31 + gamma_3deph and gamma_21 -> gamma_2deph.
    """

    Gamma_31: float
    gamma_21: float
    Omega_c: float
    Delta_2: float = 0.0
    gamma_3deph: float = 0.0
    gamma_2deph: float = 0.0
    dephasing_mode: bool = False

    def __post_init__(self):
        for name in ("Gamma_31", "gamma_21", "gamma_3deph", "gamma_2deph"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)!r}")

    @property
    def effective_Gamma_31(self) -> float:
        return self.Gamma_31 + self.gamma_3deph if self.dephasing_mode else self.Gamma_31

    @property
    def effective_gamma_21(self) -> float:
        return self.gamma_2deph if self.dephasing_mode else self.gamma_21


def susceptibility(r: ThreeLevelRates, delta, swapped: bool = False):
    """Linear probe susceptibility at two-photon detuning ``delta`` (scalar or array)."""
    G = r.effective_Gamma_31
    g = r.effective_gamma_21
    d = np.asarray(delta, dtype=float)
    num = d - 0.5j * g
    if r.Omega_c == 0 and (not swapped or r.Delta_2 == 0):
        # the 2-1 factor cancels; dividing it out avoids 0/0 at delta = 0 when g21 = 0
        num, den = np.ones_like(num), d + r.Delta_2 - 0.5j * G
    elif swapped:
        den = (d - 0.5j * G) * (d + r.Delta_2 - 0.5j * g) - 0.25 * r.Omega_c ** 2
    else:
        den = (d + r.Delta_2 - 0.5j * G) * (d - 0.5j * g) - 0.25 * r.Omega_c ** 2
    if np.any(den == 0):
        raise ZeroDivisionError("susceptibility denominator vanishes (all rates zero on resonance?)")
    chi = num / den
    return complex(chi) if chi.ndim == 0 else chi


@dataclass(frozen=True)
class SusceptibilitySpectrum:
    delta_grid: np.ndarray
    chi: np.ndarray


class Regime(str, enum.Enum):
    EIT = "EIT"
    ATS = "ATS"
    AT_THRESHOLD = "AT_THRESHOLD"


def eit_ats_threshold(Gamma_31: float, gamma_21: float) -> float:
    """Control Rabi frequency |Gamma_31 - gamma_21| / 2 separating EIT from ATS."""
    if Gamma_31 < 0 or gamma_21 < 0:
        raise ValueError("rates must be non-negative")
    return 0.5 * abs(Gamma_31 - gamma_21)


def classify_regime(Omega_c: float, Gamma_31: float, gamma_21: float) -> Regime:
    disc = Omega_c ** 2 - 0.25 * (Gamma_31 - gamma_21) ** 2
    if disc > 0:
        return Regime.ATS
    if disc < 0:
        return Regime.EIT
    return Regime.AT_THRESHOLD


@dataclass(frozen=True)
class LorentzianDecomposition:
    """chi(delta) = chi_plus/(delta - delta_plus) + chi_minus/(delta - delta_minus).

    At the threshold the poles merge; then ``double_pole`` is set and the
    residues are ``None``.
    """

    delta_plus: complex
    delta_minus: complex
    chi_plus: complex | None
    chi_minus: complex | None
    regime: Regime
    double_pole: bool = False

    def branches(self, delta):
        """The two Lorentzian terms evaluated on ``delta``."""
        if self.double_pole:
            raise ValueError("no two-Lorentzian split at the double pole")
        d = np.asarray(delta, dtype=float)
        return _lorentzian(self.chi_plus, self.delta_plus, d), _lorentzian(self.chi_minus, self.delta_minus, d)

    def evaluate(self, delta):
        plus, minus = self.branches(delta)
        return plus + minus


def _lorentzian(residue: complex, pole: complex, d: np.ndarray):
    if residue == 0:  # the pole may sit on the real axis; its term vanishes identically
        return np.zeros_like(d, dtype=complex)
    return residue / (d - pole)


def _numerator(pole: complex, G: float, g: float, Omega_c: float) -> complex:
    # at a root (d - iG/2)(d - ig/2) = Omega_c^2/4, so either factor gives d - ig/2
    near = pole - 0.5j * g
    far = pole - 0.5j * G
    if abs(far) > abs(near):
        return 0.25 * Omega_c ** 2 / far
    return near


def pole_decomposition(r: ThreeLevelRates) -> LorentzianDecomposition:
    if r.Delta_2 != 0:
        raise ValueError(f"pole decomposition assumes a resonant control (Delta_2 = 0), got {r.Delta_2}")
    G = r.effective_Gamma_31
    g = r.effective_gamma_21
    root = 0.5 * np.sqrt(complex(r.Omega_c ** 2 - 0.25 * (G - g) ** 2))
    centre = 0.25j * (G + g)
    d_plus, d_minus = centre + root, centre - root
    # the smaller root loses digits to cancellation; recover it from the product of roots
    regime = classify_regime(r.Omega_c, G, g)
    if regime is Regime.EIT:
        prod = -0.25 * (G * g + r.Omega_c ** 2)
        if abs(d_plus) >= abs(d_minus):
            d_minus = prod / d_plus
        else:
            d_plus = prod / d_minus
    if abs(d_plus - d_minus) < DOUBLE_POLE_TOL:
        return LorentzianDecomposition(complex(d_plus), complex(d_minus), None, None, Regime.AT_THRESHOLD, True)
    split = d_plus - d_minus
    chi_plus = _numerator(d_plus, G, g, r.Omega_c) / split
    chi_minus = -_numerator(d_minus, G, g, r.Omega_c) / split
    return LorentzianDecomposition(complex(d_plus), complex(d_minus), complex(chi_plus), complex(chi_minus), regime)


def effective_rabi(A_c: float, A_p: float, t: TransitionTable) -> tuple[float, float]:
    """Control and probe Rabi frequencies for fields entering through the cavity."""
    return A_c * t.C[(3, 2)], A_p * t.C[(3, 1)]


def eit_condition_check(Omega_c: float, gamma_c: float) -> bool:
    """|Omega_c| < gamma_c / 2: the threshold with Gamma_31 ~ gamma_c and gamma_21 ~ 0."""
    return abs(Omega_c) < gamma_c / 2


@dataclass(frozen=True)
class SpectrumResult:
    spectrum: SusceptibilitySpectrum
    decomposition: LorentzianDecomposition | None
    regime: Regime
    rates: ThreeLevelRates
    table: TransitionTable
    Omega_c: float
    Omega_p: float
    threshold: float


def three_level_rates(t: TransitionTable, Omega_c: float, omega_c: float) -> ThreeLevelRates:
    return ThreeLevelRates(
        Gamma_31=t.Gamma_31,
        gamma_21=t.gamma[(2, 1)],
        Omega_c=Omega_c,
        Delta_2=t.omega[(3, 2)] - omega_c,
    )


def absorption_spectrum_pipeline(
    p: SystemParams,
    A_c: float,
    A_p: float,
    omega_c: float | None,
    delta_grid,
    h: HilbertSpace = HilbertSpace(),
    type_threshold: float | None = None,
    swapped: bool = False,
) -> SpectrumResult:
    """Exact polariton states -> decay rates -> three-level susceptibility.

    ``omega_c`` is the control frequency in the frame rotating at omega_d
    (add omega_d for the lab value); ``None`` puts it on resonance with
    omega_32.
    """
    t = transition_table(p, h)
    kwargs = {} if type_threshold is None else {"threshold": type_threshold}
    types = classify_transition_type(t, **kwargs)
    if TransitionType.LAMBDA not in types:
        raise RegimeError(
            f"polariton levels 1-2-3 do not form a Lambda system here "
            f"(C_31={t.C[(3, 1)]:.3f}, C_32={t.C[(3, 2)]:.3f}, type {'/'.join(x.value for x in types)}); "
            "move omega_d into the nesting window and use a non-zero drive Omega"
        )
    Omega_c, Omega_p = effective_rabi(A_c, A_p, t)
    if omega_c is None:
        omega_c = t.omega[(3, 2)]
    rates = three_level_rates(t, Omega_c, omega_c)
    if abs(rates.Delta_2) < RESONANCE_TOL:
        rates = ThreeLevelRates(rates.Gamma_31, rates.gamma_21, rates.Omega_c, 0.0)
    grid = np.asarray(delta_grid, dtype=float)
    spec = SusceptibilitySpectrum(grid, susceptibility(rates, grid, swapped=swapped))
    decomposition = pole_decomposition(rates) if rates.Delta_2 == 0.0 else None
    return SpectrumResult(
        spectrum=spec,
        decomposition=decomposition,
        regime=classify_regime(Omega_c, rates.Gamma_31, rates.gamma_21),
        rates=rates,
        table=t,
        Omega_c=Omega_c,
        Omega_p=Omega_p,
        threshold=eit_ats_threshold(rates.Gamma_31, rates.gamma_21),
    )
