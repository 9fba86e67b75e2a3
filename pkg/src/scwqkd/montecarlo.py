"""Window-by-window Monte Carlo of the protocols, used as an oracle for the analytic channel.

Random numbers come from NumPy's PCG64 generator. Windows are processed in
fixed-size blocks; block ``i`` draws from the ``i``-th child of
``SeedSequence(seed)``, so results depend only on the seed and the window
count, never on how blocks are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bsee import channel_from_system, qber
from .detection import DetectorModel, click_probability
from .errors import InvalidParameterError
from .keyrate import Protocol
from .states import B92_PHASES, BB84_PHASES, SystemParams, mean_photons_at_detector

BLOCK = 1 << 18


@dataclass(frozen=True)
class SessionConfig:
    params: SystemParams
    detector: DetectorModel
    protocol: Protocol
    L: float
    n_windows: int = 1_000_000
    seed: int = 0

    def __post_init__(self):
        if int(self.n_windows) != self.n_windows or self.n_windows < 1:
            raise InvalidParameterError("n_windows must be a positive integer")
        if self.L < 0:
            raise InvalidParameterError("fiber length must be >= 0")
        if self.protocol is Protocol.BB84_TWO_DETECTOR:
            raise InvalidParameterError("Monte Carlo supports b92 and bb84-osd only")
        if not 0 <= self.seed < 2**64:
            raise InvalidParameterError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float


@dataclass(frozen=True)
class SessionStats:
    """Counts and estimates from one simulated session.

    ``same``/``opposite`` count sifted windows where Bob's phase equals Alice's
    or differs by pi. ``E_hat`` is the click rate in opposite windows,
    ``1 - E_hat - G_hat`` the click rate in same windows, ``Q_hat`` the error
    fraction among conclusive windows.
    """

    n_windows: int
    sifted: int
    same: int
    opposite: int
    conclusive: int
    correct: int
    errors: int
    E_hat: Estimate
    G_hat: Estimate
    Q_hat: Estimate

    @property
    def sifted_fraction(self) -> float:
        return self.sifted / self.n_windows


def _phase_set(proto: Protocol) -> np.ndarray:
    return np.array(B92_PHASES if proto is Protocol.B92 else BB84_PHASES)


def _click_table(cfg: SessionConfig, phases: np.ndarray) -> np.ndarray:
    p = cfg.params
    table = np.empty((phases.size, phases.size))
    for i, a in enumerate(phases):
        for j, b in enumerate(phases):
            n = mean_photons_at_detector(p, a, b + p.delta_phi, cfg.L)
            table[i, j] = click_probability(n, cfg.detector, p.T)
    return table


def _binom_se(x: float, n: int) -> float:
    return math.sqrt(max(x * (1.0 - x), 0.0) / n) if n else math.nan


def simulate_session(cfg: SessionConfig) -> SessionStats:
    phases = _phase_set(cfg.protocol)
    n_ph = phases.size
    table = _click_table(cfg, phases)
    # index -> (basis, bit): B92 {0: bit0, pi: bit1}; BB84 {0, pi} basis 0, {pi/2, 3pi/2} basis 1
    if n_ph == 2:
        basis, bit = np.array([0, 0]), np.array([0, 1])
    else:
        basis, bit = np.array([0, 1, 0, 1]), np.array([0, 0, 1, 1])

    n_blocks = -(-cfg.n_windows // BLOCK)
    seeds = np.random.SeedSequence(cfg.seed).spawn(n_blocks)
    sifted = same = opposite = correct = errors = 0
    for b, ss in enumerate(seeds):
        size = min(BLOCK, cfg.n_windows - b * BLOCK)
        rng = np.random.Generator(np.random.PCG64(ss))
        ia = rng.integers(n_ph, size=size)
        ib = rng.integers(n_ph, size=size)
        u = rng.random(size)
        click = u < table[ia, ib]
        keep = basis[ia] == basis[ib]
        match = keep & (ia == ib)
        flip = keep & (bit[ia] != bit[ib])
        sifted += int(keep.sum())
        same += int(match.sum())
        opposite += int(flip.sum())
        correct += int((click & match).sum())
        errors += int((click & flip).sum())

    conclusive = correct + errors
    e = errors / opposite if opposite else math.nan
    ok = correct / same if same else math.nan
    se_e, se_ok = _binom_se(e, opposite), _binom_se(ok, same)
    q = errors / conclusive if conclusive else math.nan
    return SessionStats(
        n_windows=cfg.n_windows,
        sifted=sifted,
        same=same,
        opposite=opposite,
        conclusive=conclusive,
        correct=correct,
        errors=errors,
        E_hat=Estimate(e, se_e),
        G_hat=Estimate(1.0 - e - ok, math.hypot(se_e, se_ok)),
        Q_hat=Estimate(q, _binom_se(q, conclusive)),
    )


@dataclass(frozen=True)
class ValidationRow:
    name: str
    empirical: float
    analytic: float
    stderr: float
    z: float
    passed: bool
    skipped: bool = False


@dataclass(frozen=True)
class ValidationReport:
    stats: SessionStats
    rows: tuple[ValidationRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_text(self) -> str:
        lines = [
            f"windows={self.stats.n_windows} sifted={self.stats.sifted} "
            f"conclusive={self.stats.conclusive} errors={self.stats.errors}"
        ]
        for r in self.rows:
            lines.append(
                f"{r.name}: empirical={r.empirical:.9g} analytic={r.analytic:.9g} "
                f"stderr={r.stderr:.3g} z={r.z:+.3f} {'SKIP' if r.skipped else 'PASS' if r.passed else 'FAIL'}"
            )
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def validate_against_analytic(cfg: SessionConfig, z_max: float = 3.0) -> ValidationReport:
    """Compare simulated E, G, Q with the analytic channel; z-scores use null standard errors."""
    stats = simulate_session(cfg)
    c = channel_from_system(cfg.params, cfg.detector, cfg.L)
    ok = 1.0 - c.E - c.G
    q = qber(c)
    se = {
        "E": _binom_se(c.E, stats.opposite),
        "G": math.hypot(_binom_se(c.E, stats.opposite), _binom_se(ok, stats.same)),
        "Q": _binom_se(q, stats.conclusive),
    }
    rows = []
    for name, emp, ana in (
        ("E", stats.E_hat.value, c.E),
        ("G", stats.G_hat.value, c.G),
        ("Q", stats.Q_hat.value, q),
    ):
        s = se[name]
        if math.isnan(emp):
            # no events to estimate from (e.g. zero conclusive windows)
            rows.append(ValidationRow(name, emp, ana, s, math.nan, True, skipped=True))
            continue
        if s > 0:
            z = (emp - ana) / s
        else:
            z = 0.0 if emp == ana else math.inf
        rows.append(ValidationRow(name, emp, ana, s, z, abs(z) < z_max))
    return ValidationReport(stats, tuple(rows))
