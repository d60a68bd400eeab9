"""Exit criteria. Each test prints one [PASS]/[FAIL] line (also collected in
the pytest terminal summary)."""

import math
import time

import pytest

import frozen
import oracles
from qwalk2d import engine, herald, timebin
from qwalk2d.engine import NONLOCALIZED_GROVER_COIN, Alternate, Grover, run, run_mixture
from qwalk2d.metrics import classical_distribution, max_abs_difference, similarity, variance
from qwalk2d.state import named_coin, total_norm
from qwalk2d.timebin import DEFAULT_DELAYS, DelayConfig, arrival_time, audit, build_grid

ALT = Alternate()
LABELS = "HVDALR"


def test_ac01_classical_agreement_small_n(criterion):
    with criterion("AC1 alternate |L> equals classical walk at n=1,2 (1e-12, <1 s)") as c:
        t0 = time.perf_counter()
        _, hist = run(ALT, "L", 2)
        worst = max(max_abs_difference(hist[n], classical_distribution(n)) for n in (1, 2))
        dt = time.perf_counter() - t0
        c.detail = f"max site diff {worst:.2e}, {dt:.3f} s"
        assert worst <= 1e-12
        assert dt < 1.0


def test_ac02_classical_variance(criterion):
    with criterion("AC2 variance of classical walk at n=4 is exactly 8") as c:
        v = variance(classical_distribution(4))
        c.detail = f"v = {v!r}"
        assert v == 8.0


def test_ac03_quantum_spreading(criterion):
    with criterion("AC3 variance of |L> walk at n=4 exceeds 8, equals oracle value (<1 s)") as c:
        t0 = time.perf_counter()
        _, hist = run(ALT, "L", 4)
        v = variance(hist[4])
        dt = time.perf_counter() - t0
        _, v_oracle = oracles.mean_var(oracles.alternate_path_sum(tuple(named_coin("L")), 4))
        c.detail = f"v = {v:.12f} (oracle {v_oracle:.12f}, frozen {frozen.VARIANCE_L4}), {dt:.3f} s"
        assert v > 8
        assert v == pytest.approx(frozen.VARIANCE_L4, abs=1e-10)
        assert v == pytest.approx(v_oracle, abs=1e-10)
        assert dt < 1.0


def test_ac04_grover_equivalence(criterion):
    with criterion("AC4 alternate (|0>-i|1>)/sqrt2 == Grover (1,-1,-1,1)/2 for n<=10 (1e-10, <10 s)") as c:
        t0 = time.perf_counter()
        _, alt = run(ALT, [1 / math.sqrt(2), -1j / math.sqrt(2)], 10)
        _, gro = run(Grover(), NONLOCALIZED_GROVER_COIN, 10)
        worst = max(max_abs_difference(a, g.mapped(frozen.EQUIVALENCE_MAP)) for a, g in zip(alt, gro))
        dt = time.perf_counter() - t0
        c.detail = f"max site diff {worst:.2e} over n=0..10, {dt:.3f} s"
        assert worst <= 1e-10
        assert dt < 10.0


def test_ac05_delayed_choice_commutation(criterion):
    with criterion("AC5 walk-then-project == project-then-walk, n<=6, six projectors, |Phi+> and Werner(0.8) (1e-12, <30 s)") as c:
        t0 = time.perf_counter()
        worst = 0.0
        for source in (herald.bell_phi_plus(), herald.werner(0.8)):
            history = engine.run_joint_history(source, 6)
            for label in LABELS:
                proj = named_coin(label)
                outcome = herald.herald_coin(source, proj)
                first = run_mixture(outcome.coin, 6)
                for n in range(7):
                    prob, after = engine.heralded_distribution([(w, s[n]) for w, s in history], proj)
                    assert prob == pytest.approx(outcome.probability, abs=1e-12)
                    worst = max(worst, max_abs_difference(after, first[n]))
        dt = time.perf_counter() - t0
        c.detail = f"max site diff {worst:.2e}, {dt:.3f} s"
        assert worst <= 1e-12
        assert dt < 30.0


def test_ac06_mixed_coin_identity(criterion):
    with criterion("AC6 maximally mixed coin == |L> == |R> at n=4 (1e-12)") as c:
        mix = run_mixture([(0.5, named_coin("H")), (0.5, named_coin("V"))], 4)[4]
        lw = run(ALT, "L", 4)[1][4]
        rw = run(ALT, "R", 4)[1][4]
        worst = max(max_abs_difference(mix, lw), max_abs_difference(mix, rw), max_abs_difference(lw, rw))
        c.detail = f"max site diff {worst:.2e}"
        assert worst <= 1e-12


def test_ac07_grover_localization(criterion):
    with criterion("AC7 Grover P(0,0) at n=20: coin |0> exceeds non-localised coin by the oracle factor") as c:
        p_loc = run(Grover(), [1, 0, 0, 0], 20)[1][20][(0, 0)]
        p_non = run(Grover(), NONLOCALIZED_GROVER_COIN, 20)[1][20][(0, 0)]
        ratio = p_loc / p_non
        c.detail = f"P_loc={p_loc:.12f} P_non={p_non:.3e} ratio={ratio:.6f} (frozen {frozen.GROVER_LOCALIZATION_RATIO_N20:.6f})"
        assert p_loc == pytest.approx(frozen.GROVER_P00_COIN0_N20, abs=1e-12)
        assert p_non == pytest.approx(frozen.GROVER_P00_NONLOCAL_N20, abs=1e-12)
        assert ratio == pytest.approx(frozen.GROVER_LOCALIZATION_RATIO_N20, rel=1e-9)
        assert ratio > 1


def test_ac08_time_grid_fidelity(criterion):
    with criterion("AC8 time grid: (n+1)^2 bins, 20.6/4.1 ns spacings, n=4 latest ~535.4 ns, audit N=4 pass / N=6 fail (<1 s)") as c:
        t0 = time.perf_counter()
        g6 = build_grid(DEFAULT_DELAYS, 6)
        counts = [g6.step_count(n) for n in range(7)]
        assert counts == [(n + 1) ** 2 for n in range(7)]
        dx = arrival_time(DEFAULT_DELAYS, 3, 1, -1) - arrival_time(DEFAULT_DELAYS, 3, -1, -1)
        dy = arrival_time(DEFAULT_DELAYS, 3, 1, 1) - arrival_time(DEFAULT_DELAYS, 3, 1, -1)
        assert dx == pytest.approx(20.6, abs=1e-9)
        assert dy == pytest.approx(4.1, abs=1e-9)
        latest = build_grid(DEFAULT_DELAYS, 4).times.max()
        assert abs(latest - 535.4) <= 0.5
        pass4 = audit(build_grid(DEFAULT_DELAYS, 4), 4.1).passed
        pass6 = audit(g6, 4.1).passed
        dt = time.perf_counter() - t0
        c.detail = f"dx={dx:.6f} dy={dy:.6f} latest={latest:.4f} ns audit4={pass4} audit6={pass6}, {dt:.3f} s"
        assert pass4 and not pass6
        assert dt < 1.0


def test_ac09_detection_pipeline(criterion):
    with criterion("AC9 1e6 photons: reconstructed S >= 0.98 for n<=4, log-count slope within 5% of ln 0.207 (<60 s)") as c:
        cfg = DelayConfig(eta_cycle=0.207, eta_det=0.5, jitter_fwhm_ns=0.6, window_ns=2.0, accidental_rate=0.0)
        t0 = time.perf_counter()
        theory = run(ALT, "L", 4)[1]
        sim = timebin.detect_sim(cfg, theory, 1_000_000, seed=20140101)
        rec = timebin.reconstruct(sim.histogram, build_grid(cfg, 4), cfg)
        sims = [similarity(theory[n], rec.distributions[n]) for n in range(5)]
        slope = timebin.loss_slope(rec.corrected_counts, (1, 2, 3, 4))
        dt = time.perf_counter() - t0
        target = math.log(0.207)
        c.detail = f"S={[round(s, 5) for s in sims]} slope={slope:.5f} vs {target:.5f}, {dt:.2f} s"
        assert min(sims) >= 0.98
        assert abs(slope - target) <= 0.05 * abs(target)
        assert dt < 60.0


def test_ac10_unitarity_and_normalisation(criterion):
    with criterion("AC10 norm drift <= 1e-12 over 50 steps; every Distribution sums to 1 within 1e-9") as c:
        drift = 0.0
        sums = []
        for kind, coin in ((ALT, "L"), (ALT, "D"), (Grover(), NONLOCALIZED_GROVER_COIN), (Grover(), [1, 0, 0, 0])):
            final, hist = run(kind, coin, 50)
            drift = max(drift, abs(total_norm(final) - 1.0))
            sums += [d.total() for d in hist]
        sums += [d.total() for d in run_mixture(herald.reduced_coin(herald.werner(0.8)), 20)]
        joint = engine.run_joint(herald.werner(0.8), 20)
        sums.append(engine.heralded_distribution(joint, named_coin("D"))[1].total())
        sums.append(engine.marginal_distribution(joint).total())
        sim = timebin.detect_sim(DEFAULT_DELAYS, run(ALT, "L", 4)[1], 100_000, seed=3)
        rec = timebin.reconstruct(sim.histogram, build_grid(DEFAULT_DELAYS, 4), DEFAULT_DELAYS)
        sums += [d.total() for d in rec.distributions.values()]
        worst_sum = max(abs(s - 1.0) for s in sums)
        c.detail = f"norm drift {drift:.2e}, worst |sum-1| {worst_sum:.2e} over {len(sums)} distributions"
        assert drift <= 1e-12
        assert worst_sum <= 1e-9
