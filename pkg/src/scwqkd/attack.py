"""Collective beam-splitting attack: Eve's states, their overlap and the Holevo bound."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bsee import binary_entropy
from .states import (
    SidebandState,
    SystemParams,
    alice_state,
    attenuate,
    channel_transmittance,
)


@dataclass(frozen=True)
class HolevoBound:
    """Eve's Holevo information per sifted bit and the overlap it derives from."""

    chi: float
    overlap: float

    @property
    def eigenvalues(self) -> tuple[float, float]:
        return 0.5 * (1.0 + self.overlap), 0.5 * (1.0 - self.overlap)


def eve_state(p: SystemParams, phi_A: float, L: float) -> SidebandState:
    """Part of Alice's state reflected by a beam splitter of transmission eta(L) at L = 0."""
    eta_bar = 1.0 - channel_transmittance(p.xi, L)
    return attenuate(alice_state(p, phi_A), eta_bar)


def rotate_basis(s: SidebandState) -> SidebandState:
    """Phase shift of ``pi k / 2`` on the k-th mode."""
    k = np.arange(-s.S, s.S + 1)
    return SidebandState(s.amplitudes * np.exp(0.5j * math.pi * k))


def beta_minus(beta, dphi, small_angle: bool = False):
    """Angle with ``cos b_ = cos^2 b + sin^2 b cos(dphi)``, in a cancellation-free form.

    ``small_angle`` gives ``2 b |sin(dphi/2)|``, matching the Bessel addition
    theorem ``sum_k J_k(m)^2 e^{ik dphi} = J0(2 m sin(dphi/2))``.
    """
    s = np.abs(np.sin(np.asarray(dphi, dtype=float) / 2.0))
    if small_angle:
        out = 2.0 * np.asarray(beta, dtype=float) * s
    else:
        out = 2.0 * np.arcsin(np.minimum(np.abs(np.sin(beta)) * s, 1.0))
    return float(out) if np.ndim(out) == 0 else out


def eta_bar(p: SystemParams, L):
    """Beam-splitter reflectivity ``1 - eta(L)``, accurate for short fibers."""
    L = np.asarray(L, dtype=float)
    out = -np.expm1(-p.xi * L * math.log(10.0) / 10.0)
    return float(out) if out.ndim == 0 else out


def eve_overlap(p: SystemParams, phi1: float, phi2: float, L) -> float:
    """Closed-form ``<psi_E(phi1)|psi_E(phi2)>``; real and non-negative."""
    d = p.d00(beta_minus(p.beta, phi1 - phi2, p.asymptotic))
    return np.exp(-p.mu0 * eta_bar(p, L) * (1.0 - d))


def holevo_from_overlap(overlap):
    """Holevo information of an equal mixture of two pure states with overlap ``|psi|``."""
    lam = 0.5 * (1.0 - np.asarray(overlap, dtype=float))
    return binary_entropy(np.clip(lam, 0.0, 1.0))


def holevo_cbs(p: SystemParams, L: float) -> HolevoBound:
    """Eve's Holevo information for B92 and BB84-OSD alike."""
    ov = float(eve_overlap(p, 0.0, math.pi, L))
    return HolevoBound(chi=float(holevo_from_overlap(ov)), overlap=ov)
