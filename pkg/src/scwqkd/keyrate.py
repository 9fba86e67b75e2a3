"""Devetak-Winter key rate per protocol, optimal modulation depth, BB84 vs BB84-OSD."""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass

import numpy as np

from . import wigner
from .attack import eta_bar, beta_minus, holevo_cbs, holevo_from_overlap
from .bsee import binary_entropy, channel_from_system, qber
from .detection import DetectorModel, click_probability
from .errors import InvalidParameterError
from .states import SystemParams, beta_prime, channel_transmittance, demodulated_state

__all__ = [
    "Protocol",
    "ECModel",
    "KeyRatePoint",
    "OptimalMu",
    "BB84Comparison",
    "binary_entropy",
    "secure_rate",
    "sideband_mu",
    "optimal_mu",
    "bb84_two_detector_mu",
    "compare_bb84_variants",
    "cutoff_loss",
    "rate_over_modulation",
]

M_GRID = (1e-3, 1.5, 200)
GOLDEN_RTOL = 1e-4


class Protocol(enum.Enum):
    B92 = "b92"
    BB84_OSD = "bb84-osd"
    BB84_TWO_DETECTOR = "bb84"

    @property
    def sifting(self) -> float:
        """Fraction of windows in which Bob's basis matches Alice's."""
        return 1.0 if self is Protocol.B92 else 0.5

    @classmethod
    def parse(cls, name: str) -> "Protocol":
        key = name.strip().lower().replace("_", "-")
        for proto in cls:
            if proto.value == key:
                return proto
        raise InvalidParameterError(f"unknown protocol {name!r}")


@dataclass(frozen=True)
class ECModel:
    """Error-correction leakage ``f_EC * h(Q)``; ``f_EC = 1`` is the Shannon limit."""

    f_EC: float = 1.0

    def __post_init__(self):
        if not self.f_EC >= 1.0:
            raise InvalidParameterError("f_EC must be >= 1")

    def leak(self, Q: float) -> float:
        return self.f_EC * binary_entropy(Q)


@dataclass(frozen=True)
class KeyRatePoint:
    """One sweep sample. ``status`` is ``ok``, ``floored`` (negative bracket) or ``no-clicks``."""

    L: float
    loss_dB: float
    Q: float
    G: float
    chi: float
    P_B: float
    K: float
    status: str = "ok"


def secure_rate(
    p: SystemParams,
    d: DetectorModel,
    proto: Protocol,
    ec: ECModel,
    L: float,
) -> KeyRatePoint:
    """Secure key rate in bits/s at fiber length ``L`` (km)."""
    if proto is Protocol.BB84_TWO_DETECTOR:
        raise InvalidParameterError(
            "the two-detector BB84 variant is analysis-only; use compare_bb84_variants"
        )
    c = channel_from_system(p, d, L)
    chi = holevo_cbs(p, L).chi
    P_B = (1.0 - c.G) * proto.sifting
    loss = p.xi * L
    if c.G >= 1.0:
        return KeyRatePoint(L, loss, math.nan, c.G, chi, P_B, 0.0, "no-clicks")
    Q = qber(c)
    bracket = 1.0 - ec.leak(Q) - chi
    if bracket <= 0:
        return KeyRatePoint(L, loss, Q, c.G, chi, P_B, 0.0, "floored")
    return KeyRatePoint(L, loss, Q, c.G, chi, P_B, p.nu_S * P_B * bracket)


def sideband_mu(p: SystemParams) -> float:
    """Mean photon number carried by all sidebands leaving Alice."""
    d = p.d00(p.beta)
    return p.mu0 * (1.0 - d * d)


@dataclass(frozen=True)
class OptimalMu:
    mu: float
    m: float
    K: float
    found: bool


def optimal_mu(
    p: SystemParams,
    d: DetectorModel,
    proto: Protocol,
    ec: ECModel,
    L: float,
    grid: tuple[float, float, int] = M_GRID,
) -> OptimalMu:
    """Maximise the key rate over the modulation index.

    A logarithmic grid in m locates the mode, golden-section search refines it
    inside the bracketing grid cells. ``found`` is False when no grid point
    gives a positive rate.
    """
    lo, hi, n = grid
    if not (0 < lo < hi):
        raise InvalidParameterError("modulation search bounds must satisfy 0 < lo < hi")

    def rate(m: float) -> float:
        return secure_rate(dataclasses.replace(p, m=m), d, proto, ec, L).K

    ms = np.geomspace(lo, hi, n)
    ks = rate_over_modulation(p, d, proto, ec, L, ms)
    i = int(np.argmax(ks))
    if ks[i] <= 0:
        return OptimalMu(mu=math.nan, m=math.nan, K=0.0, found=False)
    a, b = ms[max(i - 1, 0)], ms[min(i + 1, n - 1)]
    m_best, k_best = _golden_max(rate, a, b, GOLDEN_RTOL)
    if k_best < ks[i]:
        m_best, k_best = float(ms[i]), float(ks[i])
    mu = sideband_mu(dataclasses.replace(p, m=m_best))
    return OptimalMu(mu=float(mu), m=float(m_best), K=float(k_best), found=True)


def rate_over_modulation(p, d, proto, ec, L, ms) -> np.ndarray:
    """Key rate for every modulation index in ``ms`` (vectorised :func:`secure_rate`)."""
    ms = np.asarray(ms, dtype=float)
    beta = 2.0 * ms / (2 * p.S + 1)
    scale = p.mu0 * channel_transmittance(p.xi, L) * p.eta_B
    keep = 1.0 - p.carrier_suppression

    def photons(psi):
        dd = wigner.d00(p.S, beta_prime(beta, psi, p.asymptotic), asymptotic=p.asymptotic)
        return scale * (1.0 - keep * dd * dd)

    E = click_probability(photons(math.pi + p.delta_phi), d, p.T)
    ok = click_probability(photons(p.delta_phi), d, p.T)
    overlap = np.exp(-p.mu0 * eta_bar(p, L) * (1.0 - wigner.d00(p.S, beta_minus(beta, math.pi, p.asymptotic), asymptotic=p.asymptotic)))
    chi = holevo_from_overlap(overlap)
    conclusive = E + ok
    with np.errstate(invalid="ignore", divide="ignore"):
        Q = np.where(conclusive > 0, E / np.where(conclusive > 0, conclusive, 1.0), 0.0)
    bracket = 1.0 - ec.f_EC * binary_entropy(Q) - chi
    K = p.nu_S * conclusive * proto.sifting * bracket
    return np.where((conclusive > 0) & (bracket > 0), K, 0.0)


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, a: float, b: float, rtol: float):
    c = b - _INVPHI * (b - a)
    e = a + _INVPHI * (b - a)
    fc, fe = f(c), f(e)
    while (b - a) > rtol * 0.5 * (a + b):
        if fc >= fe:
            b, e, fe = e, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + _INVPHI * (b - a)
            fe = f(e)
    return (c, fc) if fc >= fe else (e, fe)


def bb84_two_detector_mu(mu_s: float, mu_bar: float) -> float:
    """Photons per sideband group when Bob routes each state to its own detector."""
    if not (mu_s >= 0 and mu_bar >= 0 and 2.0 * mu_s <= mu_bar):
        raise InvalidParameterError("need 0 <= 2*mu_s <= mu_bar")
    if mu_s == 0:
        return 0.0
    # sqrt(a) - sqrt(a - 2s) = 2s / (sqrt(a) + sqrt(a - 2s)), free of cancellation
    diff = 2.0 * mu_s / (math.sqrt(mu_bar) + math.sqrt(mu_bar - 2.0 * mu_s))
    return mu_s + 0.5 * diff * diff


@dataclass(frozen=True)
class BB84Comparison:
    mu_s: float
    mu_s_lower: float
    mu_bar_c: float
    mu_bar: float
    conservation_residual: float
    mu_s_prime: float
    rate_bb84: float
    rate_osd: float
    relative_difference: float
    low_modulation: bool


def compare_bb84_variants(p: SystemParams, L: float) -> BB84Comparison:
    """Count rates of two-detector BB84 and single-detector BB84-OSD in the matching basis.

    Rates are mean photons per window at the detectors, with a perfect carrier
    filter, before detector efficiency.
    """
    same = demodulated_state(p, 0.0, 0.0, L)
    opposite = demodulated_state(p, math.pi, 0.0, L)
    mu_s = same.upper_photons()
    mu_bar_c = abs(same.carrier) ** 2
    mu_bar = abs(opposite.carrier) ** 2
    mu_s_prime = bb84_two_detector_mu(mu_s, mu_bar)
    rate_bb84 = 2.0 * p.eta_B * mu_s_prime
    rate_osd = 2.0 * p.eta_B * mu_s
    rel = mu_s_prime / mu_s - 1.0 if mu_s > 0 else 0.0
    return BB84Comparison(
        mu_s=mu_s,
        mu_s_lower=same.lower_photons(),
        mu_bar_c=mu_bar_c,
        mu_bar=mu_bar,
        conservation_residual=mu_bar - (mu_bar_c + 2.0 * mu_s),
        mu_s_prime=mu_s_prime,
        rate_bb84=rate_bb84,
        rate_osd=rate_osd,
        relative_difference=rel,
        low_modulation=(mu_s / mu_bar <= 0.05) if mu_bar > 0 else True,
    )


def cutoff_loss(
    p: SystemParams,
    d: DetectorModel,
    proto: Protocol = Protocol.BB84_OSD,
    ec: ECModel = ECModel(),
    hi_db: float = 80.0,
    tol_db: float = 1e-3,
) -> float:
    """Smallest loss (dB) at which the key rate reaches zero, by bisection."""

    def positive(loss_db: float) -> bool:
        return secure_rate(p, d, proto, ec, loss_db / p.xi).K > 0

    lo, hi = 0.0, hi_db
    if not positive(lo):
        return 0.0
    if positive(hi):
        return math.inf
    while hi - lo > tol_db:
        mid = 0.5 * (lo + hi)
        if positive(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)

