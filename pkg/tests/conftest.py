import numpy as np
import pytest

from tpami import config as config_mod
from tpami import engine
from tpami.errors import DegenerateChain, DegenerateNormalization


def random_config(rng, *, allow_p0=True, allow_p3=True, min_norm=0.0,
                  vary_source=False):
    """Draw a random valid interferometer configuration.

    Resamples when the geometry is degenerate (zero chain or zero arm
    intensity) or when the normalization falls below `min_norm`, which
    keeps Monte-Carlo z-statistics well behaved for comparison runs.
    """
    while True:
        def maybe(prob):
            return float(rng.uniform(0.0, 180.0)) if rng.random() < prob else None

        if vary_source:
            center = float(rng.uniform(800.0, 2000.0))
            bandwidth = float(rng.uniform(5.0, 60.0))
        else:
            center, bandwidth = 1550.0, 30.0
        cfg = config_mod.make_config(
            center_wavelength_nm=center,
            bandwidth_nm=bandwidth,
            p0=maybe(0.5) if allow_p0 else None,
            p1=maybe(0.7),
            p2=maybe(0.7),
            p3=maybe(0.4) if allow_p3 else None,
        )
        try:
            norm = engine.normalization(cfg)
        except (DegenerateChain, DegenerateNormalization):
            continue
        if norm >= min_norm:
            return cfg


@pytest.fixture
def presets():
    return {name: config_mod.load_config(name) for name in config_mod.PRESET_NAMES}
