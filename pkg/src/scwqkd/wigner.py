"""Wigner d-function rows d^S_{0k}(beta) and Bessel functions of the first kind.

Convention: ``d^S_{0k}(beta) = <S k| exp(-i beta J_y) |S 0>``, so that
``d^S_{0k}(m/S) -> J_{-k}(m)`` for large S and ``d^S_{0,-k} = (-1)^k d^S_{0k}``.
Every downstream formula uses these values squared or through sums that are
insensitive to the odd-k sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError

BESSEL_X_MAX = 50.0
_BIG = 1e100
_TINY_X = 1e-6


def beta_from_modulation(m: float, S: int) -> float:
    """Rotation angle of the modulator for modulation index ``m`` and ``S`` sidebands."""
    if not math.isfinite(m) or m < 0:
        raise InvalidParameterError(f"modulation index must be finite and >= 0, got {m!r}")
    _check_S(S)
    return 2.0 * m / (2 * S + 1)


def modulation_from_beta(beta, S: int):
    """Inverse of :func:`beta_from_modulation`; the effective index seen by the Bessel limit."""
    return (S + 0.5) * np.asarray(beta, dtype=float)


def _check_S(S: int) -> None:
    if int(S) != S or S < 1:
        raise InvalidParameterError(f"sideband count S must be a positive integer, got {S!r}")


def _check_beta(beta: float) -> None:
    if not (0.0 <= beta <= math.pi):
        raise InvalidParameterError(f"beta must lie in [0, pi], got {beta!r}")


@dataclass(frozen=True)
class DFunctionRow:
    """Values ``d^S_{0k}(beta)`` stored at index ``k + S`` for ``k = -S..S``."""

    S: int
    beta: float
    values: np.ndarray

    @property
    def k(self) -> np.ndarray:
        return np.arange(-self.S, self.S + 1)

    def at(self, k: int) -> float:
        if abs(k) > self.S:
            raise InvalidParameterError(f"|k| must be <= S={self.S}, got {k}")
        return float(self.values[k + self.S])


def _half_row(S: int, beta: float) -> np.ndarray:
    # Downward three-term recurrence in k from the exact boundary d_{0,S+1} = 0.
    # Going down, the solution grows through the classically forbidden region, so
    # the recurrence is stable; periodic rescaling prevents overflow and the
    # unitarity sum fixes the scale at the end.
    sin, cos = math.sin(beta), math.cos(beta)
    if abs(cos) > _BIG * abs(sin):
        return _half_row_small(S, sin, cos)
    cot = cos / sin
    y = np.zeros(S + 2)
    y[S] = -1.0 if S % 2 else 1.0
    for m in range(S, 0, -1):
        a = math.sqrt((S + m + 1) * (S - m))
        b = math.sqrt((S + m) * (S - m + 1))
        y[m - 1] = -(2.0 * m * cot * y[m] + a * y[m + 1]) / b
        if abs(y[m - 1]) > _BIG:
            y[m - 1 :] /= _BIG
    half = y[: S + 1]
    half = half / np.max(np.abs(half))
    norm = math.sqrt(half[0] ** 2 + 2.0 * float(np.dot(half[1:], half[1:])))
    return half / norm


def _half_row_small(S: int, sin: float, cos: float) -> np.ndarray:
    # cot(beta) would overflow the recurrence; iterate the ratios
    # y_m / y_{m-1} instead, all of which are tiny here.
    s = np.zeros(S + 2)
    for m in range(S, 0, -1):
        a = math.sqrt((S + m + 1) * (S - m))
        b = math.sqrt((S + m) * (S - m + 1))
        s[m] = -b * sin / (2.0 * m * cos + a * s[m + 1] * sin)
    half = np.cumprod(np.concatenate(([1.0], s[1 : S + 1])))
    norm = math.sqrt(half[0] ** 2 + 2.0 * float(np.dot(half[1:], half[1:])))
    return half / norm


def d_row(S: int, beta: float) -> DFunctionRow:
    """Exact row ``d^S_{0k}(beta)``, ``k = -S..S``, for ``0 <= beta <= pi``."""
    _check_S(S)
    beta = float(beta)
    _check_beta(beta)
    values = np.zeros(2 * S + 1)
    if beta == 0.0:
        values[S] = 1.0
        return DFunctionRow(S, beta, values)
    if beta == math.pi:
        values[S] = -1.0 if S % 2 else 1.0
        return DFunctionRow(S, beta, values)
    half = _half_row(S, beta)
    k = np.arange(1, S + 1)
    values[S:] = half
    values[:S] = (np.where(k % 2, -1.0, 1.0) * half[1:])[::-1]
    return DFunctionRow(S, beta, values)


def _legendre_cos(S: int, beta: np.ndarray) -> np.ndarray:
    # P_S(cos beta) via the difference form of the recurrence, driven by
    # u = 1 - cos beta = 2 sin^2(beta/2). Feeding cos(beta) directly loses
    # ~S^2 eps near beta = 0, where P_S'(1) = S(S+1)/2.
    flip = beta > math.pi / 2
    b = np.where(flip, math.pi - beta, beta)
    u = 2.0 * np.sin(b / 2.0) ** 2
    p = 1.0 - u
    dp = -u
    for n in range(1, S):
        dp = (n * dp - (2 * n + 1) * u * p) / (n + 1)
        p = p + dp
    return np.where(flip & (S % 2 == 1), -p, p)


def d00(S: int, beta, asymptotic: bool = False):
    """Central element ``d^S_{00}(beta) = P_S(cos beta)``.

    With ``asymptotic=True`` the Bessel limit ``J_0((S + 1/2) beta)`` is returned
    instead. Accepts scalars or arrays of ``beta``.
    """
    _check_S(S)
    b = np.asarray(beta, dtype=float)
    if np.any((b < 0) | (b > math.pi)):
        raise InvalidParameterError("beta must lie in [0, pi]")
    if asymptotic:
        out = bessel_j(0, modulation_from_beta(b, S))
    else:
        out = _legendre_cos(S, b)
    return float(out) if np.ndim(out) == 0 else out


def _miller(nmax: int, x: np.ndarray) -> np.ndarray:
    """J_0..J_nmax at every x (x != 0), via Miller's backward recurrence."""
    xm = float(np.max(np.abs(x)))
    top = max(nmax, int(xm)) + 30 + int(math.sqrt(40.0 * max(nmax, xm)))
    top += top % 2
    out = np.zeros((top + 2, x.size))
    out[top] = 1e-30
    for k in range(top, 0, -1):
        out[k - 1] = (2.0 * k / x) * out[k] - out[k + 1]
        big = np.abs(out[k - 1]) > _BIG
        if np.any(big):
            out[k - 1 :, big] /= _BIG
    norm = out[0] + 2.0 * out[2 : top + 1 : 2].sum(axis=0)
    return out[: nmax + 1] / norm


def bessel_j(n: int, x):
    """Bessel function of the first kind ``J_n(x)`` for ``n >= 0`` and ``|x| <= 50``."""
    if int(n) != n or n < 0:
        raise InvalidParameterError(f"order must be a non-negative integer, got {n!r}")
    n = int(n)
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)) or np.any(np.abs(xa) > BESSEL_X_MAX):
        raise InvalidParameterError(f"|x| must be <= {BESSEL_X_MAX}")
    flat = xa.ravel()
    res = np.full(flat.shape, 1.0 if n == 0 else 0.0)
    nz = flat != 0.0
    if np.any(nz):
        ax = np.abs(flat[nz])
        vals = np.empty_like(ax)
        tiny = ax < _TINY_X
        if np.any(tiny):
            # two-term power series; next term is O(x^4) relative
            h = ax[tiny] / 2.0
            vals[tiny] = h**n / math.factorial(n) * (1.0 - h * h / (n + 1))
        if np.any(~tiny):
            vals[~tiny] = _miller(n, ax[~tiny])[n]
        if n % 2:
            vals = np.where(flat[nz] < 0, -vals, vals)
        res[nz] = vals
    res = res.reshape(xa.shape)
    return float(res) if res.ndim == 0 else res


def bessel_row(S: int, m: float) -> np.ndarray:
    """``J_{-k}(m)`` for ``k = -S..S``: the large-S limit of :func:`d_row`."""
    _check_S(S)
    if not math.isfinite(m) or abs(m) > BESSEL_X_MAX:
        raise InvalidParameterError(f"|m| must be <= {BESSEL_X_MAX}")
    row = np.zeros(2 * S + 1)
    if m == 0:
        row[S] = 1.0
        return row
    pos = _miller(S, np.array([abs(m)]))[:, 0]  # J_k(|m|), k = 0..S
    k = np.arange(S + 1)
    if m < 0:
        pos = np.where(k % 2, -pos, pos)
    # J_{-k} = (-1)^k J_k
    row[S:] = np.where(k % 2, -pos, pos)
    row[:S] = pos[1:][::-1]
    return row


def d_row_asymptotic(S: int, beta: float) -> DFunctionRow:
    """Bessel-limit replacement for :func:`d_row` at the same angle."""
    beta = float(beta)
    _check_beta(beta)
    return DFunctionRow(S, beta, bessel_row(S, float(modulation_from_beta(beta, S))))
