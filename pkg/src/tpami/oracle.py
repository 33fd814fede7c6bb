"""Monte-Carlo photon-ensemble estimator of the detected pair rate.

The oracle samples the same statistical model the closed form
integrates: per realization it draws a polarization mode for each
photon from the input mixture and a frequency for each photon from the
spectrum, propagates both photons through the arm chains, and
accumulates the unordered-pair detection sum.  No coherence-function
closed forms enter anywhere, so agreement with `engine.g2_direct`
validates the matrix recipe, the pairing bookkeeping and the
beam-splitter conventions end to end.  It does *not* re-decide the
physical model: a full Gaussian-field simulation of <I^2> would contain
extra same-arm bunching terms and is out of scope by design.

Streams are counter-based (Philox) and keyed by (master seed, delay
index, realization-chunk index), so results are bit-identical for a
fixed seed no matter how the work is split across workers.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from . import engine, polarization

CHUNK_SIZE = 1 << 16

# Absolute floor on the standard error used for z-scores, in g2 units.
# Configurations whose estimator is exactly constant (flat schemes)
# would otherwise divide float noise by float noise.
SE_FLOOR = 1e-12

Z_FLAG_THRESHOLD = 4.0


def config_digest(config) -> str:
    """Stable hex digest of a configuration."""
    payload = json.dumps(config.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()


def _stream(master_seed: int, delay_index: int, chunk_index: int) -> np.random.Generator:
    # 128-bit Philox key: seed in one word, (delay, chunk) packed in the other.
    second = (np.uint64(delay_index) << np.uint64(32)) | np.uint64(chunk_index)
    key = np.array([np.uint64(master_seed & (2**64 - 1)), second], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class OracleRun:
    """Result of a Monte-Carlo trace estimate over a delay grid."""

    config_hash: str
    master_seed: int
    realizations: int
    delays_s: np.ndarray
    means: np.ndarray
    std_errors: np.ndarray


def _draw_sums(config, tau_d: float, realizations: int, master_seed: int,
               delay_index: int) -> tuple[float, float]:
    """Accumulate (sum, sum of squares) of the normalized detection sum."""
    chains, _, _ = engine._parts(config)
    model = engine._spectral_model(config)
    mixture = polarization.input_polarization(config).mixture
    norm = engine.normalization(config)

    vectors = np.stack([vec for vec, _ in mixture])          # (K, 2)
    weights = np.array([w for _, w in mixture])
    cum_weights = np.cumsum(weights)
    # Per-component detector fields for each arm: (K, 2 pol).
    via1 = vectors @ chains[0].T
    via2 = vectors @ chains[1].T

    total = 0.0
    total_sq = 0.0
    done = 0
    chunk_index = 0
    while done < realizations:
        n = min(CHUNK_SIZE, realizations - done)
        rng = _stream(master_seed, delay_index, chunk_index)
        idx_a = np.searchsorted(cum_weights, rng.random(n), side="right")
        idx_b = np.searchsorted(cum_weights, rng.random(n), side="right")
        omega_a = rng.normal(model.center_omega, model.sigma_omega, size=n)
        omega_b = rng.normal(model.center_omega, model.sigma_omega, size=n)

        phase_a = np.exp(-1j * omega_a * tau_d)
        phase_b = np.exp(-1j * omega_b * tau_d)
        a_field = via1[idx_a] + via2[idx_a] * phase_a[:, None]
        b_field = via1[idx_b] + via2[idx_b] * phase_b[:, None]

        g_vals = (
            np.abs(a_field[:, 0] * b_field[:, 0]) ** 2
            + np.abs(a_field[:, 1] * b_field[:, 1]) ** 2
            + np.abs(a_field[:, 0] * b_field[:, 1] + a_field[:, 1] * b_field[:, 0]) ** 2
        ) / norm
        total += float(g_vals.sum())
        total_sq += float((g_vals * g_vals).sum())
        done += n
        chunk_index += 1
    return total, total_sq


def mc_g2(config, tau_d: float, realizations: int, master_seed: int,
          delay_index: int = 0) -> tuple[float, float]:
    """Monte-Carlo estimate (mean, standard error) of g2 at one delay.

    Requires at least 100 realizations.  Normalization is the same
    analytic denominator `g2_direct` uses, so the estimator is unbiased
    for the closed form.
    """
    if realizations < 100:
        raise ValueError("mc_g2 requires at least 100 realizations")
    total, total_sq = _draw_sums(config, tau_d, realizations, master_seed, delay_index)
    n = realizations
    mean = total / n
    var = max(total_sq - n * mean * mean, 0.0) / (n - 1)
    return mean, math.sqrt(var / n)


def mc_trace(config, delays, realizations: int, master_seed: int) -> OracleRun:
    """Monte-Carlo estimates over a delay grid, one keyed stream per delay."""
    delays = np.asarray(delays, dtype=float)
    means = np.empty(delays.shape)
    errors = np.empty(delays.shape)
    for index, tau_d in enumerate(delays):
        means[index], errors[index] = mc_g2(
            config, float(tau_d), realizations, master_seed, delay_index=index
        )
    return OracleRun(
        config_hash=config_digest(config),
        master_seed=master_seed,
        realizations=realizations,
        delays_s=delays,
        means=means,
        std_errors=errors,
    )


@dataclass(frozen=True)
class CompareReport:
    """Per-delay z-scores between the Monte-Carlo and closed-form traces."""

    run: OracleRun
    direct: np.ndarray
    z_scores: np.ndarray
    flagged: tuple[int, ...]
    max_abs_z: float

    @property
    def passed(self) -> bool:
        return not self.flagged

    def to_dict(self) -> dict:
        rows = [
            {
                "delay_fs": float(d * 1e15),
                "mc_g2": float(m),
                "std_error": float(s),
                "direct_g2": float(g),
                "z": float(z),
            }
            for d, m, s, g, z in zip(
                self.run.delays_s, self.run.means, self.run.std_errors,
                self.direct, self.z_scores,
            )
        ]
        return {
            "config_hash": self.run.config_hash,
            "master_seed": self.run.master_seed,
            "realizations": self.run.realizations,
            "z_threshold": Z_FLAG_THRESHOLD,
            "max_abs_z": self.max_abs_z,
            "flagged_delays": list(self.flagged),
            "passed": self.passed,
            "rows": rows,
        }


def compare_trace(config, delays, realizations: int, master_seed: int) -> CompareReport:
    """Run the oracle over a grid and z-test it against the closed form.

    A delay is flagged when |z| exceeds 4; standard errors are floored
    at a tiny absolute value so exactly-flat schemes do not divide
    rounding noise by rounding noise.
    """
    run = mc_trace(config, delays, realizations, master_seed)
    direct = np.atleast_1d(engine.g2_direct(config, run.delays_s))
    z = (run.means - direct) / np.maximum(run.std_errors, SE_FLOOR)
    flagged = tuple(int(i) for i in np.nonzero(np.abs(z) > Z_FLAG_THRESHOLD)[0])
    return CompareReport(
        run=run,
        direct=direct,
        z_scores=z,
        flagged=flagged,
        max_abs_z=float(np.abs(z).max()),
    )
