"""Run configuration: INI-style ``key = value`` sections.

Sections and keys::

    [system]    mu0, m, S, T, nu_S, delta_phi_deg, eta_B_dB, carrier_suppression,
                xi, theta1, theta3, phi0
    [detector]  preset (snspd | apd | custom), eta_D, gamma_dark, gate
    [protocol]  names (comma separated: b92, bb84-osd)
    [ec]        f_EC
    [sweep]     variable (loss_dB | L_km), start, stop, steps
    [run]       mode (exact | asymptotic), seed, n_windows, L_km, output

``eta_B_dB`` is Bob's internal loss in dB (positive number) and
``delta_phi_deg`` the phase instability in degrees.
"""

from __future__ import annotations

import configparser
import dataclasses
import io
import math
from dataclasses import dataclass, field

from .detection import PRESETS, DetectorModel, preset
from .errors import InvalidParameterError
from .keyrate import ECModel, Protocol
from .states import SystemParams


@dataclass(frozen=True)
class Sweep:
    variable: str = "loss_dB"
    start: float = 0.0
    stop: float = 50.0
    steps: int = 101

    def __post_init__(self):
        if self.variable not in ("loss_dB", "L_km"):
            raise InvalidParameterError(f"sweep variable must be loss_dB or L_km, got {self.variable!r}")
        if not self.start < self.stop:
            raise InvalidParameterError("sweep start must be < stop")
        if int(self.steps) != self.steps or self.steps < 2:
            raise InvalidParameterError("sweep steps must be an integer >= 2")
        if self.start < 0:
            raise InvalidParameterError("sweep start must be >= 0")

    def lengths_km(self, xi: float):
        """Fiber lengths for every sweep point."""
        vals = [self.start + (self.stop - self.start) * i / (self.steps - 1) for i in range(self.steps)]
        if self.variable == "L_km":
            return vals
        if xi <= 0:
            raise InvalidParameterError("a loss_dB sweep needs xi > 0")
        return [v / xi for v in vals]


@dataclass(frozen=True)
class RunConfig:
    system: SystemParams = field(default_factory=SystemParams)
    detector: DetectorModel = field(default_factory=lambda: preset("snspd"))
    protocols: tuple[Protocol, ...] = (Protocol.B92, Protocol.BB84_OSD)
    ec: ECModel = field(default_factory=ECModel)
    sweep: Sweep = field(default_factory=Sweep)
    seed: int = 0
    n_windows: int = 1_000_000
    L_km: float = 0.0
    output: str | None = None

    @property
    def mode(self) -> str:
        return "asymptotic" if self.system.asymptotic else "exact"

    def replace(self, **kw) -> "RunConfig":
        return dataclasses.replace(self, **kw)


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def to_ini(cfg: RunConfig) -> str:
    s = cfg.system
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    cp["system"] = {
        "mu0": _fmt(s.mu0),
        "m": _fmt(s.m),
        "S": _fmt(s.S),
        "T": _fmt(s.T),
        "nu_S": _fmt(s.nu_S),
        "delta_phi_deg": _fmt(math.degrees(s.delta_phi)),
        "eta_B_dB": _fmt(-10.0 * math.log10(s.eta_B)),
        "carrier_suppression": _fmt(s.carrier_suppression),
        "xi": _fmt(s.xi),
        "theta1": _fmt(s.theta1),
        "theta3": _fmt(s.theta3),
        "phi0": _fmt(s.phi0),
    }
    d = cfg.detector
    det = {"preset": d.name if PRESETS.get(d.name) == d else "custom"}
    if det["preset"] == "custom":
        det.update(eta_D=_fmt(d.eta_D), gamma_dark=_fmt(d.gamma_dark),
                   gate="continuous" if d.gate is None else _fmt(d.gate))
    cp["detector"] = det
    cp["protocol"] = {"names": ", ".join(p.value for p in cfg.protocols)}
    cp["ec"] = {"f_EC": _fmt(cfg.ec.f_EC)}
    w = cfg.sweep
    cp["sweep"] = {"variable": w.variable, "start": _fmt(w.start), "stop": _fmt(w.stop), "steps": _fmt(w.steps)}
    run = {"mode": cfg.mode, "seed": _fmt(cfg.seed), "n_windows": _fmt(cfg.n_windows), "L_km": _fmt(cfg.L_km)}
    if cfg.output:
        run["output"] = cfg.output
    cp["run"] = run
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


_SYSTEM_FLOAT = ("mu0", "m", "T", "nu_S", "carrier_suppression", "xi", "theta1", "theta3", "phi0")
_KNOWN = {
    "system": set(_SYSTEM_FLOAT) | {"S", "delta_phi_deg", "eta_B_dB"},
    "detector": {"preset", "eta_D", "gamma_dark", "gate"},
    "protocol": {"names"},
    "ec": {"f_EC"},
    "sweep": {"variable", "start", "stop", "steps"},
    "run": {"mode", "seed", "n_windows", "L_km", "output"},
}


def from_ini(text: str) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise InvalidParameterError(f"malformed config: {exc}") from None
    for section in cp.sections():
        if section not in _KNOWN:
            raise InvalidParameterError(f"unknown config section [{section}]")
        unknown = set(cp[section]) - _KNOWN[section]
        if unknown:
            raise InvalidParameterError(f"unknown keys in [{section}]: {sorted(unknown)}")
    try:
        return _build(cp)
    except ValueError as exc:
        if isinstance(exc, InvalidParameterError):
            raise
        raise InvalidParameterError(f"bad config value: {exc}") from None


def _build(cp: configparser.ConfigParser) -> RunConfig:
    base = RunConfig()
    sysd = dict(cp["system"]) if cp.has_section("system") else {}
    run = dict(cp["run"]) if cp.has_section("run") else {}
    kw = {k: float(sysd[k]) for k in _SYSTEM_FLOAT if k in sysd}
    if "S" in sysd:
        kw["S"] = int(sysd["S"])
    if "delta_phi_deg" in sysd:
        kw["delta_phi"] = math.radians(float(sysd["delta_phi_deg"]))
    if "eta_B_dB" in sysd:
        kw["eta_B"] = 10.0 ** (-float(sysd["eta_B_dB"]) / 10.0)
    mode = run.get("mode", "asymptotic").strip().lower()
    if mode not in ("exact", "asymptotic"):
        raise InvalidParameterError(f"mode must be exact or asymptotic, got {mode!r}")
    kw["asymptotic"] = mode == "asymptotic"
    system = SystemParams(**kw)

    detector = base.detector
    if cp.has_section("detector"):
        dd = cp["detector"]
        name = dd.get("preset", "snspd").strip().lower()
        if name == "custom":
            gate = dd.get("gate", "continuous").strip().lower()
            detector = DetectorModel(
                eta_D=float(dd["eta_D"]),
                gamma_dark=float(dd["gamma_dark"]),
                gate=None if gate == "continuous" else float(gate),
            )
        else:
            detector = preset(name)

    protocols = base.protocols
    if cp.has_section("protocol"):
        names = [n for n in cp["protocol"].get("names", "").split(",") if n.strip()]
        protocols = tuple(Protocol.parse(n) for n in names)

    ec = ECModel(float(cp["ec"]["f_EC"])) if cp.has_section("ec") and "f_EC" in cp["ec"] else base.ec

    sweep = base.sweep
    if cp.has_section("sweep"):
        sw = cp["sweep"]
        sweep = Sweep(
            variable=sw.get("variable", sweep.variable).strip(),
            start=float(sw.get("start", sweep.start)),
            stop=float(sw.get("stop", sweep.stop)),
            steps=int(sw.get("steps", sweep.steps)),
        )
    return RunConfig(
        system=system,
        detector=detector,
        protocols=protocols,
        ec=ec,
        sweep=sweep,
        seed=int(run.get("seed", base.seed)),
        n_windows=int(run.get("n_windows", base.n_windows)),
        L_km=float(run.get("L_km", base.L_km)),
        output=run.get("output") or None,
    )


def load(path: str) -> RunConfig:
    with open(path) as fh:
        return from_ini(fh.read())
