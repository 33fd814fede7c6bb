import math

import numpy as np
import pytest

from tpami import config as config_mod
from tpami import polarization as pol
from tpami.errors import DegenerateChain


def test_polarizer_axis_aligned():
    assert np.allclose(np.asarray(pol.polarizer(0.0)), [[1, 0], [0, 0]], atol=0)
    assert np.allclose(np.asarray(pol.polarizer(math.pi / 2)), [[0, 0], [0, 1]], atol=1e-15)
    assert np.allclose(np.asarray(pol.polarizer(math.pi / 4)), [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)


def test_polarizer_is_idempotent_hermitian_projector():
    rng = np.random.default_rng(3)
    for angle in rng.uniform(-10.0, 10.0, size=100):
        m = np.asarray(pol.polarizer(angle))
        assert np.allclose(m @ m, m, atol=1e-15)
        assert np.allclose(m, m.conj().T, atol=0)
        assert np.allclose(np.sort(np.linalg.eigvalsh(m)), [0.0, 1.0], atol=1e-14)
        assert pol.polarizer(angle).max_singular_value() <= 1.0 + 1e-12


def test_polarizer_wraps_modulo_pi():
    rng = np.random.default_rng(4)
    for angle in rng.uniform(0.0, math.pi, size=20):
        a = np.asarray(pol.polarizer(angle))
        b = np.asarray(pol.polarizer(angle + math.pi))
        assert np.allclose(a, b, atol=1e-14)


def test_crossed_polarizers_annihilate():
    rng = np.random.default_rng(5)
    for angle in rng.uniform(0.0, math.pi, size=50):
        prod = np.asarray(pol.polarizer(angle)) @ np.asarray(pol.polarizer(angle + math.pi / 2))
        assert np.abs(prod).max() < 1e-15


def test_beamsplitter_ports():
    t_mat, t_amp = pol.beamsplitter_port("transmit")
    r_mat, r_amp = pol.beamsplitter_port("reflect")
    assert np.allclose(np.asarray(t_mat), np.eye(2), atol=0)
    assert np.allclose(np.asarray(r_mat), [[1, 0], [0, -1]], atol=0)
    assert t_amp == r_amp == pytest.approx(1 / math.sqrt(2), abs=0)
    # the handedness flip is an involution
    assert np.allclose(np.asarray(r_mat) @ np.asarray(r_mat), np.eye(2), atol=0)
    with pytest.raises(ValueError):
        pol.beamsplitter_port("up")


def test_chain_without_polarizers_is_half_flip():
    cfg = config_mod.load_config("fig3a")
    for arm in (1, 2):
        chain = pol.build_arm_chain(cfg, arm)
        assert np.allclose(np.asarray(chain.transform), 0.5 * np.diag([1.0, -1.0]), atol=0)


def test_chain_projector_absorbs():
    cfg = config_mod.make_config(p1=0.0)
    chain = np.asarray(pol.build_arm_chain(cfg, 1).transform)
    rng = np.random.default_rng(6)
    for _ in range(10):
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        out = chain @ v
        # output lies along the x axis
        assert abs(out[1]) < 1e-15 * max(1.0, abs(out[0]))


def test_effective_axes_paper_mapping():
    # physical 135/135 realizes the effective 45/135 scheme
    cfg = config_mod.make_config(p1=135.0, p2=135.0)
    axis1, axis2 = pol.effective_axes(cfg)
    assert axis1 == pytest.approx(math.radians(45.0), abs=1e-12)
    assert axis2 == pytest.approx(math.radians(135.0), abs=1e-12)
    # 0/90 is a fixed point of the flip
    cfg = config_mod.make_config(p1=0.0, p2=90.0)
    axis1, axis2 = pol.effective_axes(cfg)
    assert axis1 == pytest.approx(0.0, abs=1e-12)
    assert axis2 == pytest.approx(math.pi / 2, abs=1e-12)
    # no polarizers
    assert pol.effective_axes(config_mod.load_config("fig3a")) == (None, None)


def test_effective_map_is_involution():
    rng = np.random.default_rng(7)
    for angle in rng.uniform(0.0, 180.0, size=25):
        cfg = config_mod.make_config(p1=angle)
        eff1, _ = pol.effective_axes(cfg)
        cfg2 = config_mod.make_config(p1=math.degrees(eff1))
        eff2, _ = pol.effective_axes(cfg2)
        assert eff2 == pytest.approx(math.radians(angle) % math.pi, abs=1e-9)


def test_chain_build_is_reproducible():
    cfg = config_mod.load_config("fig7")
    for arm in (1, 2):
        first = pol.build_arm_chain(cfg, arm)
        second = pol.build_arm_chain(cfg, arm)
        assert np.array_equal(np.asarray(first.transform), np.asarray(second.transform))
        assert np.array_equal(first.rederive(), np.asarray(first.transform))


def test_degenerate_chain_raises():
    cfg = config_mod.make_config(p1=0.0, p3=90.0)
    with pytest.raises(DegenerateChain):
        pol.build_arm_chain(cfg, 1)


def test_chain_singular_values_passive():
    rng = np.random.default_rng(8)
    for _ in range(25):
        cfg = config_mod.make_config(
            p1=float(rng.uniform(0, 180)),
            p2=float(rng.uniform(0, 180)),
            p3=float(rng.uniform(0, 180)) if rng.random() < 0.5 else None,
        )
        for arm in (1, 2):
            try:
                chain = pol.build_arm_chain(cfg, arm)
            except DegenerateChain:
                continue
            assert chain.transform.max_singular_value() <= 0.5 + 1e-12


def test_input_polarization_mixtures():
    unpol = pol.InputPolarization.unpolarized()
    assert len(unpol.mixture) == 2
    assert np.allclose(unpol.coherency(), 0.5 * np.eye(2), atol=0)
    lin = pol.InputPolarization.linear(math.radians(45.0))
    assert len(lin.mixture) == 1
    assert np.allclose(lin.coherency(), [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)
    with pytest.raises(ValueError):
        pol.InputPolarization(((np.array([1.0, 1.0]), 1.0),))  # not unit length
    with pytest.raises(ValueError):
        pol.InputPolarization(((np.array([1.0, 0.0]), 0.5),))  # weights != 1
