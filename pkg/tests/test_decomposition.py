import math

import numpy as np
import pytest

from tpami import config as config_mod
from tpami import decomposition as dec
from tpami import engine, scan, spectrum
from tpami.errors import InsufficientSpan

FS = 1e-15


def _bar_counts(breakdown, threshold):
    counts = {"background": 0, "hbt": 0, "omega": 0, "two_omega": 0}
    for bar in breakdown.per_term_bars:
        if abs(bar.value) > threshold:
            counts[bar.component] += 1
    return counts


def test_class_cell_counts():
    assert len(dec.BACKGROUND_CELLS) == 2
    assert len(dec.HBT_CELLS) == 4
    assert len(dec.OMEGA_CELLS) == 8
    assert len(dec.TWO_OMEGA_CELLS) == 2


def test_fig3a_bar_multiplicities(presets):
    breakdown = dec.classify(presets["fig3a"], 0.0)
    total = abs(breakdown.total)
    counts = _bar_counts(breakdown, 1e-10 * total)
    assert counts == {"background": 2, "hbt": 4, "omega": 8, "two_omega": 2}
    for value in (breakdown.background, breakdown.hbt, breakdown.omega,
                  breakdown.two_omega):
        assert abs(value) > 1e-6 * total


def test_fig5_only_hbt_and_background(presets):
    cfg = presets["fig5"]
    total = abs(dec.classify(cfg, 0.0).total)
    for tau in np.linspace(-60 * FS, 60 * FS, 33):
        breakdown = dec.classify(cfg, tau)
        assert abs(breakdown.omega) < 1e-10 * total
        assert abs(breakdown.two_omega) < 1e-10 * total
    assert dec.classify(cfg, 0.0).hbt > 0


def test_fig6_two_omega_without_omega(presets):
    cfg = presets["fig6"]
    traces = dec.class_traces(cfg, np.linspace(-60 * FS, 60 * FS, 257))
    total = abs(traces["background"]).max() + abs(traces["hbt"]).max()
    assert np.abs(traces["omega"]).max() < 1e-10 * total
    assert np.abs(traces["two_omega"]).max() > 1e-3 * total


def test_classes_reconstruct_trace(presets):
    for name in ("fig3a", "fig5", "fig6", "fig7"):
        cfg = presets[name]
        delays = np.linspace(-60 * FS, 60 * FS, 65)
        norm = engine.normalization(cfg)
        g2 = engine.g2_direct(cfg, delays)
        traces = dec.class_traces(cfg, delays)
        reconstructed = sum(traces.values())
        assert np.allclose(reconstructed, g2 * norm, rtol=1e-9, atol=1e-15)


def test_background_is_delay_independent(presets):
    for name in ("fig3a", "fig6", "fig7"):
        traces = dec.class_traces(presets[name], np.linspace(-60 * FS, 60 * FS, 65))
        bg = traces["background"]
        assert np.abs(bg - bg[0]).max() < 1e-9 * abs(bg[0])


def test_no_polarizer_bars_all_equal(presets):
    breakdown = dec.classify(presets["fig3a"], 0.0)
    values = np.array([bar.value for bar in breakdown.per_term_bars])
    assert values.max() - values.min() < 1e-12 * abs(values.max())


def test_orthogonal_scheme_bars_diagonal_only(presets):
    eff = config_mod.make_config(p1=45.0, p2=135.0, angle_convention="effective")
    for cfg in (presets["fig3b"], eff):
        breakdown = dec.classify(cfg, 0.0)
        values = np.array([bar.value for bar in breakdown.per_term_bars]).reshape(4, 4)
        scale = np.abs(values).max()
        off_diagonal = values - np.diag(np.diag(values))
        assert np.abs(off_diagonal).max() < 1e-12 * scale
        assert np.all(np.diag(values) > 0)


def test_background_removed_bars(presets):
    breakdown = dec.classify(presets["fig3a"], 0.0)
    detrended = breakdown.per_term_bars_background_removed
    values = np.array([bar.value for bar in detrended]).reshape(4, 4)
    assert np.all(np.diag(values) == 0)
    raw = np.array([bar.value for bar in breakdown.per_term_bars]).reshape(4, 4)
    off = ~np.eye(4, dtype=bool)
    assert np.array_equal(values[off], raw[off])


def test_dominant_oscillation_fig4_omega_wins(presets):
    report = dec.dominant_oscillation(scan.run_scan(presets["fig4"]))
    assert report.dominant == "omega"
    assert report.amplitude_ratio > 1.0


def test_dominant_oscillation_fig6_two_omega(presets):
    cfg = presets["fig6"]
    report = dec.dominant_oscillation(scan.run_scan(cfg))
    assert report.dominant == "two_omega"
    nu0 = engine._spectral_model(cfg).center_omega / (2 * math.pi)
    assert abs(report.peak_frequency_hz - 2 * nu0) <= report.frequency_resolution_hz


def test_dominant_oscillation_flat_trace_none(presets):
    report = dec.dominant_oscillation(scan.run_scan(presets["fig3b"]))
    assert report.dominant == "none"


def test_dominant_oscillation_insufficient_span(presets):
    short = config_mod.make_config(delay_min_fs=-8.0, delay_max_fs=8.0, points=256)
    with pytest.raises(InsufficientSpan):
        dec.dominant_oscillation(scan.run_scan(short))
    coarse = config_mod.make_config(delay_min_fs=-60.0, delay_max_fs=60.0, points=64)
    with pytest.raises(InsufficientSpan):
        dec.dominant_oscillation(scan.run_scan(coarse))


def test_eraser_extremum(presets):
    assert dec.eraser_extremum(presets["fig7"]) == "maximum"
    assert dec.eraser_extremum(presets["fig8"]) == "minimum"
    with pytest.raises(ValueError):
        dec.eraser_extremum(presets["fig5"])  # P3 absent


def test_fig5_trace_peaks_at_balance(presets):
    # without the eraser the trace is the bunching envelope: maximal at 0
    cfg = presets["fig5"]
    values = engine.g2_direct(cfg, cfg.scan.delays_s())
    assert engine.g2_direct(cfg, 0.0) >= values.max() - 1e-12


def test_classify_labels(presets):
    breakdown = dec.classify(presets["fig3a"], 0.0)
    labels = [bar.label for bar in breakdown.per_term_bars]
    assert labels[0] == "AI*xAI"
    assert labels[6] == "AII*xAIII"
    assert len(set(labels)) == 16
