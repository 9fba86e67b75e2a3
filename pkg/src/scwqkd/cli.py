"""Command-line front end: ``scwqkd <subcommand> [options]``.

Every subcommand writes CSV (or a text report) to ``--out`` or stdout. Errors
produce one machine-readable line ``error: code=<code> message=<text>`` on
stderr and a nonzero exit status.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import sys
from typing import Sequence

from . import __version__
from .bsee import UndefinedQBERError, channel_from_system, qber
from .config import RunConfig, load
from .detection import preset
from .errors import InvalidParameterError
from .keyrate import Protocol, compare_bb84_variants, optimal_mu, secure_rate
from .montecarlo import SessionConfig, validate_against_analytic

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_ERROR = 2


def num(x) -> str:
    """Serialise a number with 12 significant digits."""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    return f"{x:.12g}"


def _write_csv(header: Sequence[str], rows, out: io.TextIOBase) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([v if isinstance(v, str) else num(v) for v in r])


def qber_rows(cfg: RunConfig):
    p = cfg.system
    for L in cfg.sweep.lengths_km(p.xi):
        c = channel_from_system(p, cfg.detector, L)
        try:
            q = qber(c)
        except UndefinedQBERError:
            q = float("nan")
        yield (p.xi * L, L, c.E, c.G, q)


def keyrate_rows(cfg: RunConfig):
    p = cfg.system
    for L in cfg.sweep.lengths_km(p.xi):
        pts = [secure_rate(p, cfg.detector, proto, cfg.ec, L) for proto in cfg.protocols]
        first = pts[0]
        yield (first.loss_dB, L, first.Q, first.G, first.chi, *[pt.K for pt in pts])


def optimal_rows(cfg: RunConfig):
    p = cfg.system
    proto = cfg.protocols[0]
    for L in cfg.sweep.lengths_km(p.xi):
        best = optimal_mu(p, cfg.detector, proto, cfg.ec, L)
        fixed = secure_rate(p, cfg.detector, proto, cfg.ec, L).K
        yield (p.xi * L, L, best.mu, best.m, best.K, fixed, int(best.found))


def cmd_qber_curve(cfg: RunConfig, out) -> int:
    _write_csv(("loss_dB", "L_km", "E", "G", "Q"), qber_rows(cfg), out)
    return EXIT_OK


def cmd_keyrate_curve(cfg: RunConfig, out) -> int:
    header = ["loss_dB", "L_km", "Q", "G", "chi"]
    header += ["K_" + proto.value.replace("-", "_") for proto in cfg.protocols]
    _write_csv(header, keyrate_rows(cfg), out)
    return EXIT_OK


def cmd_optimal_mu(cfg: RunConfig, out) -> int:
    header = ("loss_dB", "L_km", "mu_star", "m_star", "K_star", "K_fixed_m", "found")
    _write_csv(header, optimal_rows(cfg), out)
    return EXIT_OK


def cmd_validate(cfg: RunConfig, out) -> int:
    code = EXIT_OK
    for proto in cfg.protocols:
        sc = SessionConfig(cfg.system, cfg.detector, proto, cfg.L_km, cfg.n_windows, cfg.seed)
        rep = validate_against_analytic(sc)
        print(f"# protocol={proto.value} L_km={num(cfg.L_km)} seed={cfg.seed}", file=sys.stderr)
        print(rep.to_text(), file=sys.stderr)
        if not rep.passed:
            code = EXIT_VALIDATION_FAILED
        rows = [
            (proto.value, r.name, r.empirical, r.analytic, r.stderr, r.z, "skip" if r.skipped else "pass" if r.passed else "fail")
            for r in rep.rows
        ]
        rows.append((proto.value, "sifted_fraction", rep.stats.sifted_fraction, proto.sifting, "", "", ""))
        if proto is cfg.protocols[0]:
            _write_csv(("protocol", "quantity", "empirical", "analytic", "stderr", "z", "result"), rows, out)
        else:
            w = csv.writer(out, lineterminator="\n")
            for r in rows:
                w.writerow([v if isinstance(v, str) else num(v) for v in r])
    return code


def cmd_compare_bb84(cfg: RunConfig, out) -> int:
    rep = compare_bb84_variants(cfg.system, cfg.L_km)
    rows = [(k, v) for k, v in dataclasses.asdict(rep).items()]
    _write_csv(("quantity", "value"), rows, out)
    if not rep.low_modulation:
        print("# note: mu_s/mu_bar > 0.05, outside the low-modulation regime", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "qber-curve": cmd_qber_curve,
    "keyrate-curve": cmd_keyrate_curve,
    "optimal-mu": cmd_optimal_mu,
    "validate": cmd_validate,
    "compare-bb84": cmd_compare_bb84,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="scwqkd", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="INI run configuration")
    common.add_argument("--detector", choices=("snspd", "apd"))
    common.add_argument("--protocol", action="append", choices=("b92", "bb84-osd"),
                        help="repeat to request several protocols")
    common.add_argument("--mode", choices=("exact", "asymptotic"))
    common.add_argument("--seed", type=int)
    common.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name in ("validate", "compare-bb84"):
            sp.add_argument("--length", type=float, metavar="KM", help="fiber length in km")
        if name == "validate":
            sp.add_argument("--windows", type=int, help="number of simulated windows")
    return ap


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = load(args.config) if args.config else RunConfig()
    if args.detector:
        cfg = cfg.replace(detector=preset(args.detector))
    if args.protocol:
        cfg = cfg.replace(protocols=tuple(Protocol.parse(p) for p in dict.fromkeys(args.protocol)))
    if args.mode:
        cfg = cfg.replace(system=dataclasses.replace(cfg.system, asymptotic=args.mode == "asymptotic"))
    if args.seed is not None:
        cfg = cfg.replace(seed=args.seed)
    if getattr(args, "length", None) is not None:
        cfg = cfg.replace(L_km=args.length)
    if getattr(args, "windows", None) is not None:
        cfg = cfg.replace(n_windows=args.windows)
    if args.out:
        cfg = cfg.replace(output=args.out)
    if not cfg.protocols:
        raise InvalidParameterError("no protocol selected")
    return cfg


def _error(code: str, message: str) -> int:
    message = " ".join(str(message).split())
    print(f"error: code={code} message={message}", file=sys.stderr)
    return EXIT_ERROR


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        buf = io.StringIO()
        code = COMMANDS[args.command](cfg, buf)
        if cfg.output:
            with open(cfg.output, "w", newline="") as fh:
                fh.write(buf.getvalue())
        else:
            sys.stdout.write(buf.getvalue())
        return code
    except (InvalidParameterError, UndefinedQBERError) as exc:
        return _error(exc.code, exc)
    except OSError as exc:
        return _error("io", exc)


if __name__ == "__main__":
    sys.exit(main())
