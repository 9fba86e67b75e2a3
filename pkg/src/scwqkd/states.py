"""Multimode coherent states along the modulator -> fiber -> demodulator -> filter chain."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import wigner
from .errors import InvalidParameterError

B92_PHASES = (0.0, math.pi)
BB84_PHASES = (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)


def db_to_transmittance(loss_db: float) -> float:
    return 10.0 ** (-loss_db / 10.0)


@dataclass(frozen=True)
class SystemParams:
    """Full link description. Defaults are the SNSPD/APD operating regime of the model.

    ``carrier_suppression`` is the residual carrier transmission of Bob's
    spectral filter. ``asymptotic`` switches every d-function to its Bessel
    limit. ``theta1``, ``theta3`` and ``phi0`` are construction phases of the
    modulators; they never change a photon number or a key rate.
    """

    mu0: float = 4.0
    m: float = 0.319
    S: int = 1024
    T: float = 10e-9
    nu_S: float | None = None
    delta_phi: float = math.radians(5.0)
    eta_B: float = 10.0 ** (-0.64)
    carrier_suppression: float = 1e-3
    xi: float = 0.18
    theta1: float = 0.0
    theta3: float = 0.0
    phi0: float = 0.0
    asymptotic: bool = True

    def __post_init__(self):
        if not (math.isfinite(self.T) and self.T > 0):
            raise InvalidParameterError("T must be > 0")
        if self.nu_S is None:
            object.__setattr__(self, "nu_S", 1.0 / self.T)
        checks = [
            (math.isfinite(self.mu0) and self.mu0 >= 0, "mu0 must be >= 0"),
            (math.isfinite(self.m) and self.m >= 0, "m must be >= 0"),
            (int(self.S) == self.S and self.S >= 1, "S must be a positive integer"),
            (abs(self.nu_S * self.T - 1.0) <= 1e-9, "nu_S * T must equal 1"),
            (0.0 <= self.delta_phi < math.pi / 2, "delta_phi must lie in [0, pi/2)"),
            (0.0 < self.eta_B <= 1.0, "eta_B must lie in (0, 1]"),
            (0.0 <= self.carrier_suppression <= 1.0, "carrier_suppression must lie in [0, 1]"),
            (math.isfinite(self.xi) and self.xi >= 0, "xi must be >= 0"),
        ]
        for ok, msg in checks:
            if not ok:
                raise InvalidParameterError(msg)

    @property
    def beta(self) -> float:
        return wigner.beta_from_modulation(self.m, self.S)

    def d_row(self, beta: float) -> wigner.DFunctionRow:
        if self.asymptotic:
            return wigner.d_row_asymptotic(self.S, beta)
        return wigner.d_row(self.S, beta)

    def d00(self, beta):
        return wigner.d00(self.S, beta, asymptotic=self.asymptotic)


@dataclass(frozen=True)
class SidebandState:
    """Coherent amplitudes of modes ``omega + k Omega``, stored at index ``k + S``."""

    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex)
        if a.ndim != 1 or a.size % 2 == 0:
            raise InvalidParameterError("amplitude vector must have odd length 2S+1")
        if not np.all(np.isfinite(a)):
            raise InvalidParameterError("amplitudes must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def S(self) -> int:
        return (self.amplitudes.size - 1) // 2

    @property
    def carrier(self) -> complex:
        return complex(self.amplitudes[self.S])

    def photons(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def total_photons(self) -> float:
        return float(self.photons().sum())

    def sideband_photons(self) -> float:
        n = self.photons()
        return float(n.sum() - n[self.S])

    def upper_photons(self) -> float:
        return float(self.photons()[self.S + 1 :].sum())

    def lower_photons(self) -> float:
        return float(self.photons()[: self.S].sum())


def vacuum(S: int) -> SidebandState:
    return SidebandState(np.zeros(2 * S + 1))


def _phase_ramp(S: int, phase: float) -> np.ndarray:
    k = np.arange(-S, S + 1)
    return np.exp(-1j * phase * k)


def alice_state(p: SystemParams, phi_A: float) -> SidebandState:
    """State leaving Alice's modulator for microwave phase ``phi_A``."""
    row = p.d_row(p.beta).values
    return SidebandState(math.sqrt(p.mu0) * row * _phase_ramp(p.S, p.theta1 + phi_A))


def channel_transmittance(xi: float, L: float) -> float:
    if not (math.isfinite(L) and L >= 0):
        raise InvalidParameterError(f"fiber length must be >= 0, got {L!r}")
    return 10.0 ** (-xi * L / 10.0)


def attenuate(s: SidebandState, eta: float) -> SidebandState:
    if not (0.0 <= eta <= 1.0):
        raise InvalidParameterError(f"transmittance must lie in [0, 1], got {eta!r}")
    return SidebandState(math.sqrt(eta) * s.amplitudes)


def beta_prime(beta, psi, small_angle: bool = False):
    """Demodulated rotation angle for compensated phase difference ``psi``.

    Same angle as ``arccos(cos^2 b - sin^2 b cos psi)``, written through
    ``1 - cos beta' = 2 sin^2 b cos^2(psi/2)`` so that the near-null case
    (psi close to pi) keeps full relative precision. ``small_angle`` gives the
    Bessel-limit composition ``2 b |cos(psi/2)|``, under which the central
    amplitude becomes ``J0(2 m cos(psi/2))``.
    """
    c = np.abs(np.cos(np.asarray(psi, dtype=float) / 2.0))
    if small_angle:
        out = 2.0 * np.asarray(beta, dtype=float) * c
    else:
        out = 2.0 * np.arcsin(np.minimum(np.abs(np.sin(beta)) * c, 1.0))
    return float(out) if np.ndim(out) == 0 else out


def demodulated_state(p: SystemParams, phi_A: float, phi_B: float, L: float) -> SidebandState:
    """State right after Bob's modulator, before his internal losses and the filter."""
    eta = channel_transmittance(p.xi, L)
    bp = beta_prime(p.beta, phi_A - phi_B, p.asymptotic)
    row = p.d_row(bp).values
    return SidebandState(
        math.sqrt(p.mu0 * eta) * row * _phase_ramp(p.S, p.theta3 + phi_A + phi_B)
    )


def bob_state(p: SystemParams, phi_A: float, phi_B: float, L: float) -> SidebandState:
    """State reaching Bob's detector: demodulated, attenuated by eta_B, carrier filtered."""
    amps = math.sqrt(p.eta_B) * demodulated_state(p, phi_A, phi_B, L).amplitudes
    amps[p.S] *= math.sqrt(p.carrier_suppression)
    return SidebandState(amps)


def mean_photons_at_detector(p: SystemParams, phi_A, phi_B, L: float):
    """Mean photon number at the detector in one window (closed form)."""
    eta = channel_transmittance(p.xi, L)
    bp = beta_prime(p.beta, np.asarray(phi_A, dtype=float) - phi_B, p.asymptotic)
    d = p.d00(bp)
    return p.mu0 * eta * p.eta_B * (1.0 - (1.0 - p.carrier_suppression) * d * d)


def overlap(a: SidebandState, b: SidebandState) -> complex:
    """Scalar product of two multimode coherent states, mode by mode."""
    if a.amplitudes.size != b.amplitudes.size:
        raise InvalidParameterError("states have different numbers of modes")
    x, y = a.amplitudes, b.amplitudes
    expo = np.sum(-0.5 * (np.abs(x) ** 2 + np.abs(y) ** 2) + np.conj(x) * y)
    return complex(np.exp(expo))
