import math

import numpy as np
import pytest

from conftest import random_config
from tpami import config as config_mod
from tpami import engine, oracle, spectrum
from tpami.config import InterferometerConfig, PolarizerBank, ScanSpec, SourceSpec
from tpami.errors import DegenerateNormalization

FS = 1e-15


def test_requires_minimum_realizations(presets):
    with pytest.raises(ValueError):
        oracle.mc_g2(presets["fig3a"], 0.0, 99, 1)


def test_deterministic_for_fixed_seed(presets):
    cfg = presets["fig5"]
    a = oracle.mc_g2(cfg, 10 * FS, 5000, master_seed=7)
    b = oracle.mc_g2(cfg, 10 * FS, 5000, master_seed=7)
    assert a == b
    c = oracle.mc_g2(cfg, 10 * FS, 5000, master_seed=8)
    assert a != c


def test_worker_split_reproduces_full_trace(presets):
    # per-delay keyed streams: any partition of the grid gives the same numbers
    cfg = presets["fig6"]
    grid = np.linspace(-60 * FS, 60 * FS, 16)
    full = oracle.mc_trace(cfg, grid, 4000, master_seed=42)
    pieces = []
    for lo, hi in ((0, 5), (5, 11), (11, 16)):
        pieces.extend(
            oracle.mc_g2(cfg, float(grid[i]), 4000, 42, delay_index=i)[0]
            for i in range(lo, hi)
        )
    assert np.array_equal(np.array(pieces), full.means)


def test_chunked_accumulation_deterministic(presets):
    cfg = presets["fig3a"]
    n = oracle.CHUNK_SIZE + 1234
    assert oracle.mc_g2(cfg, 0.0, n, 3) == oracle.mc_g2(cfg, 0.0, n, 3)


def test_orthogonal_scheme_reads_unity(presets):
    for tau in (0.0, 7 * FS, -33 * FS):
        mean, se = oracle.mc_g2(presets["fig3b"], tau, 100_000, master_seed=12)
        assert abs(mean - 1.0) <= 3 * max(se, oracle.SE_FLOOR)


def test_no_polarizer_baseline_matches_direct(presets):
    cfg = presets["fig3a"]
    tau = 3e-12  # far outside the coherence envelope
    mean, se = oracle.mc_g2(cfg, tau, 100_000, master_seed=13)
    assert abs(mean - engine.g2_direct(cfg, tau)) <= 3 * se


def test_single_frequency_limit_matches_hand_formula():
    # zero bandwidth, no polarizers: g2 = [6 + 8 cos(w0 t) + 2 cos(2 w0 t)] / 4
    cfg = InterferometerConfig(SourceSpec(1550.0, 0.0), PolarizerBank(), ScanSpec())
    w0 = spectrum.SpectralModel.from_nm(1550.0, 0.0).center_omega
    for index, tau in enumerate(np.linspace(-5 * FS, 5 * FS, 7)):
        expected = (6 + 8 * math.cos(w0 * tau) + 2 * math.cos(2 * w0 * tau)) / 4.0
        mean, se = oracle.mc_g2(cfg, float(tau), 10_000, 77, delay_index=index)
        assert abs(mean - expected) <= 3 * max(se, oracle.SE_FLOOR) + 1e-12
        assert engine.g2_direct(cfg, float(tau)) == pytest.approx(expected, abs=1e-12)


def test_standard_error_scales_inverse_sqrt(presets):
    cfg = presets["fig5"]
    se_small = oracle.mc_g2(cfg, 10 * FS, 1_000, 5)[1]
    se_large = oracle.mc_g2(cfg, 10 * FS, 10_000, 5)[1]
    assert se_small / se_large == pytest.approx(math.sqrt(10.0), rel=0.2)


def test_unbiased_over_seed_ensemble():
    # exact answer 1 for the orthogonal-arm schemes
    for cfg in (
        config_mod.load_config("fig3b"),
        config_mod.make_config(p1=45.0, p2=135.0, angle_convention="effective"),
    ):
        means, variances = [], []
        for seed in range(50):
            mean, se = oracle.mc_g2(cfg, 12 * FS, 2_000, master_seed=1000 + seed)
            means.append(mean)
            variances.append(se * se)
        combined_se = math.sqrt(sum(variances)) / len(means)
        assert abs(np.mean(means) - 1.0) <= max(combined_se, oracle.SE_FLOOR)


def test_compare_trace_passes_on_presets(presets):
    grid = np.linspace(-60 * FS, 60 * FS, 16)
    for name in ("fig3a", "fig5", "fig6"):
        report = oracle.compare_trace(presets[name], grid, 20_000, master_seed=777)
        assert report.passed, f"{name}: max|z| = {report.max_abs_z}"


def test_compare_trace_flags_corrupted_gamma(presets):
    # sensitivity self-test: a 1 percent error on gamma must be caught.
    # fig5 has g2 = 1 + |gamma|^2 / 2, so corrupting gamma -> 1.01 gamma
    # shifts the center of the trace by about 0.01.
    cfg = presets["fig5"]
    model = engine._spectral_model(cfg)
    grid = np.linspace(-20 * FS, 20 * FS, 16)
    run = oracle.mc_trace(cfg, grid, 400_000, master_seed=14)
    corrupted = 1.0 + 0.5 * (1.01 * np.abs(spectrum.gamma(model, grid))) ** 2
    z = (run.means - corrupted) / np.maximum(run.std_errors, oracle.SE_FLOOR)
    assert np.abs(z).max() > oracle.Z_FLAG_THRESHOLD
    # and the uncorrupted curve is accepted on the same draws
    direct = engine.g2_direct(cfg, grid)
    z_ok = (run.means - direct) / np.maximum(run.std_errors, oracle.SE_FLOOR)
    assert np.abs(z_ok).max() <= oracle.Z_FLAG_THRESHOLD


def test_compare_trace_small_sample_wide_errors(presets):
    grid = np.linspace(-60 * FS, 60 * FS, 8)
    report = oracle.compare_trace(presets["fig3a"], grid, 100, master_seed=15)
    assert report.passed
    assert report.run.std_errors.min() > 0


def test_compare_report_serialization(presets):
    grid = np.linspace(-10 * FS, 10 * FS, 4)
    report = oracle.compare_trace(presets["fig3b"], grid, 500, master_seed=16)
    payload = report.to_dict()
    assert payload["passed"] is True
    assert len(payload["rows"]) == 4
    assert set(payload["rows"][0]) == {"delay_fs", "mc_g2", "std_error", "direct_g2", "z"}


def test_config_digest_distinguishes_configs(presets):
    h1 = oracle.config_digest(presets["fig3a"])
    h2 = oracle.config_digest(presets["fig5"])
    assert h1 != h2
    assert h1 == oracle.config_digest(config_mod.load_config("fig3a"))


def test_oracle_degenerate_normalization():
    cfg = config_mod.make_config(p0=0.0, p1=90.0)
    with pytest.raises(DegenerateNormalization):
        oracle.mc_g2(cfg, 0.0, 1000, 1)


def test_oracle_agrees_on_random_configs():
    rng = np.random.default_rng(26)
    grid = np.linspace(-60 * FS, 60 * FS, 8)
    for _ in range(5):
        cfg = random_config(rng, min_norm=1e-3)
        report = oracle.compare_trace(cfg, grid, 20_000, master_seed=20240901)
        assert report.passed, f"max|z| = {report.max_abs_z} for {cfg}"
