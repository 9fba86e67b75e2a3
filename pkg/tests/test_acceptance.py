"""Acceptance criteria, one test each. Every test prints a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` to see the lines in context.
"""

import dataclasses
import math
import time

import numpy as np
import pytest

from oracles import bessel_series, entropy, wigner_sum
from scwqkd.attack import eve_overlap, eve_state, holevo_cbs
from scwqkd.bsee import BseeChannel, capacity, channel_from_system, qber
from scwqkd.cli import keyrate_rows, optimal_rows
from scwqkd.config import RunConfig, Sweep
from scwqkd.detection import APD, SNSPD
from scwqkd.keyrate import ECModel, Protocol, compare_bb84_variants, cutoff_loss, secure_rate, sideband_mu
from scwqkd.montecarlo import SessionConfig, simulate_session, validate_against_analytic
from scwqkd.states import BB84_PHASES, SystemParams, alice_state, bob_state, mean_photons_at_detector, overlap
from scwqkd.wigner import beta_from_modulation, d00, d_row

XI = 0.18


@pytest.fixture
def report(capsys):
    def _report(n, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {n:>2}] {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return _report


def test_c01_optimal_mu(report):
    cfg = RunConfig(sweep=Sweep(start=20.0, stop=35.0, steps=16), protocols=(Protocol.BB84_OSD,))
    t0 = time.perf_counter()
    rows = list(optimal_rows(cfg))
    dt = time.perf_counter() - t0
    mus = np.array([r[2] for r in rows])
    ok = bool(np.all(np.abs(mus - 0.2) <= 0.05)) and all(r[6] for r in rows) and dt < 60
    assert report(1, ok, f"mu* in [{mus.min():.4f}, {mus.max():.4f}] over 20-35 dB (target 0.2 +- 0.05), {dt:.2f} s")


@pytest.mark.xfail(strict=True, reason="mu* falls below 0.15 within ~3 dB of the zero-rate cutoff")
def test_c01_optimal_mu_near_cutoff(capsys):
    cut = cutoff_loss(SystemParams(), SNSPD, Protocol.BB84_OSD, tol_db=1e-2)
    cfg = RunConfig(sweep=Sweep(start=35.0, stop=cut - 0.5, steps=8), protocols=(Protocol.BB84_OSD,))
    mus = np.array([r[2] for r in optimal_rows(cfg)])
    ok = bool(np.all(np.abs(mus - 0.2) <= 0.05))
    with capsys.disabled():
        print(f"\n[info criterion 1 tail] mu* down to {mus.min():.4f} between 35 dB and {cut - 0.5:.1f} dB "
              f"(expected outside +-0.05; zero-rate cutoff {cut:.2f} dB)")
    assert ok


def test_c02_sideband_mu(report):
    exact = sideband_mu(SystemParams(S=1000, asymptotic=False))
    asym = sideband_mu(SystemParams(S=1000, asymptotic=True))
    oracle = 4.0 * (1.0 - bessel_series(0, 0.319) ** 2)
    ok = abs(exact - 0.20) <= 0.01 and abs(asym - 0.20) <= 0.01 and abs(exact - asym) < 1e-3
    ok = ok and abs(asym - oracle) < 1e-12
    assert report(2, ok, f"exact={exact:.10f} asymptotic={asym:.10f} diff={abs(exact - asym):.2e}")


def test_c03_protocol_doubling(report):
    worst = 0.0
    for det in (SNSPD, APD):
        cfg = RunConfig(detector=det, sweep=Sweep(start=0.0, stop=50.0, steps=101))
        for r in keyrate_rows(cfg):
            k_b92, k_osd = r[5], r[6]
            worst = max(worst, abs(k_b92 - 2.0 * k_osd) / max(k_b92, 1e-300))
    ok = worst <= 2.0 * np.finfo(float).eps
    assert report(3, ok, f"max relative |K_B92 - 2 K_BB84-OSD| = {worst:.2e} over 202 points")


def test_c04_photon_conservation(report):
    residuals = [abs(compare_bb84_variants(SystemParams(S=1000, asymptotic=a), 0.0).conservation_residual)
                 for a in (False, True)]
    totals = [abs(alice_state(SystemParams(asymptotic=a), phi).total_photons() - 4.0)
              for a in (False, True) for phi in BB84_PHASES]
    ok = max(residuals) < 1e-12 and max(totals) < 1e-9
    assert report(4, ok, f"conservation residual {max(residuals):.1e}, alice total error {max(totals):.1e}")


def test_c05_d_function_suite(report):
    unit = max(
        abs(float(np.dot(v, v)) - 1.0)
        for S in (8, 64, 512, 2048)
        for b in (0.01, 0.1, 0.5, 1.0)
        for v in [d_row(S, b).values]
    )
    brute = max(
        abs(d_row(S, b).at(k) - wigner_sum(S, k, b))
        for S in range(1, 9)
        for b in (0.01, 0.1, 0.5, 1.0, 2.5)
        for k in range(-S, S + 1)
    )
    limit = max(abs(d00(1000, beta_from_modulation(m, 1000)) - bessel_series(0, m))
                for m in np.linspace(0.0, 1.0, 21))
    ok = unit < 1e-10 and brute < 1e-9 and limit < 1e-3
    assert report(5, ok, f"unitarity {unit:.1e}, brute force {brute:.1e}, Bessel limit {limit:.1e}")


def test_c06_closed_form_vs_mode_sum(report):
    rng = np.random.default_rng(2024)
    worst_eve = worst_bob = 0.0
    for _ in range(50):
        p = SystemParams(
            mu0=rng.uniform(0.1, 8.0),
            m=rng.uniform(0.01, 1.5),
            S=int(rng.integers(16, 1025)),
            delta_phi=rng.uniform(0.0, 0.3),
            carrier_suppression=10 ** rng.uniform(-4, -1),
            asymptotic=bool(rng.integers(2)),
        )
        a, b = rng.uniform(0, 2 * math.pi, size=2)
        L = rng.uniform(0, 200)
        direct = overlap(eve_state(p, a, L), eve_state(p, b, L))
        worst_eve = max(worst_eve, abs(direct - eve_overlap(p, a, b, L)))
        worst_bob = max(worst_bob, abs(bob_state(p, a, b, L).total_photons() - mean_photons_at_detector(p, a, b, L)))
    ok = worst_eve < 1e-10 and worst_bob < 1e-10
    assert report(6, ok, f"eve_overlap {worst_eve:.1e}, mean_photons {worst_bob:.1e} over 50 random points")


def test_c07_capacity_factorisation(report):
    worst = 0.0
    for G in np.linspace(0.0, 0.99, 10):
        for frac in np.linspace(0.0, 1.0, 10):
            E = frac * (1.0 - G)
            expected = (1.0 - entropy(E / (1.0 - G))) * (1.0 - G)
            worst = max(worst, abs(capacity(BseeChannel(E, G)) - expected))
    ok = worst < 1e-12
    assert report(7, ok, f"max deviation {worst:.1e} on a 100-point grid")


def test_c08_monte_carlo(report):
    t0 = time.perf_counter()
    lines, ok = [], True
    for proto in (Protocol.B92, Protocol.BB84_OSD):
        cfg = SessionConfig(SystemParams(), SNSPD, proto, 0.0, n_windows=1_000_000, seed=12345)
        rep = validate_against_analytic(cfg)
        again = simulate_session(cfg)
        ok = ok and rep.passed and again == rep.stats
        lines.append(proto.value + " " + " ".join(f"{r.name}:z={r.z:+.2f}" for r in rep.rows))
    dt = time.perf_counter() - t0
    ok = ok and dt < 60
    assert report(8, ok, "; ".join(lines) + f"; deterministic; {dt:.2f} s")


def test_c09_curve_shapes(report):
    p = SystemParams()
    ec = ECModel()

    def q_at(loss, det):
        return qber(channel_from_system(p, det, loss / XI))

    checks = {}
    for det in (SNSPD, APD):
        q0 = q_at(0.0, det)
        lo, hi = 0.0, 80.0  # bisection for Q = 2 Q0
        while hi - lo > 1e-6:
            mid = 0.5 * (lo + hi)
            lo, hi = (mid, hi) if q_at(mid, det) < 2 * q0 else (lo, mid)
        knee = 0.5 * (lo + hi)
        dark = det.gamma_dark * det.window(p.T)
        signal_err = channel_from_system(p, det, knee / XI).E - dark
        # flat: Q grows < 15% up to 10 dB before the knee; steep: above the knee
        # Q approaches one decade per 10 dB of loss (dark-count dominated)
        flat = q_at(knee - 10.0, det) / q0 < 1.15
        slope = 2.0 * math.log10(q_at(knee + 10.0, det) / q_at(knee + 5.0, det))
        steep = slope > 0.7
        balance = 0.5 < signal_err / dark < 2.0
        k0 = secure_rate(p, det, Protocol.BB84_OSD, ec, 0.0).K
        cut = cutoff_loss(p, det, Protocol.BB84_OSD, ec)
        checks[det.name] = dict(knee=knee, flat=flat, steep=steep, slope=slope, ratio=signal_err / dark,
                                k0=k0 > 0, cut=cut)
    apd18 = secure_rate(p, APD, Protocol.BB84_OSD, ec, 18.0 / XI).K
    s, a = checks["snspd"], checks["apd"]
    ok = all(c["flat"] and c["steep"] and 0.5 < c["ratio"] < 2 and c["k0"] and math.isfinite(c["cut"])
             for c in checks.values())
    ok = ok and s["cut"] > a["cut"] and apd18 > 0
    assert report(9, ok, (
        f"knee SNSPD {s['knee']:.2f} dB (err/dark {s['ratio']:.2f}, slope {s['slope']:.2f}), "
        f"APD {a['knee']:.2f} dB (err/dark {a['ratio']:.2f}, slope {a['slope']:.2f}); cutoff SNSPD {s['cut']:.2f} dB > APD {a['cut']:.2f} dB; "
        f"K_APD(18 dB) = {apd18:.3g} b/s"))


def test_c10_holevo_limits(report):
    p = SystemParams()
    chi0 = holevo_cbs(p, 0.0).chi
    chis = np.array([holevo_cbs(p, L).chi for L in np.linspace(0.0, 300.0, 151)])
    monotone = bool(np.all(np.diff(chis) > 0))
    full = holevo_cbs(dataclasses.replace(p, xi=1.0), 4000.0).chi  # eta underflows to 0
    oracle = entropy(0.5 * (1.0 - math.exp(-4.0 * (1.0 - bessel_series(0, 0.638)))))
    ok = chi0 == 0.0 and monotone and abs(full - 0.643) <= 0.002 and abs(full - oracle) < 1e-12
    assert report(10, ok, f"chi(0)={chi0}, monotone={monotone}, chi(eta_bar=1)={full:.6f} (oracle {oracle:.6f})")
