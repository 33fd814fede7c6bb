"""Chaotic-source spectral model and its first-order coherence function.

The source is specified by its center wavelength and the FWHM of the
wavelength spectrum (the "30 nm bandwidth" convention).  The bandwidth
is converted to an angular-frequency standard deviation via the
first-order dispersion relation d(omega) = 2 pi c d(lambda) / lambda^2,
valid in the narrowband regime the model assumes.

For the gaussian shape the normalized coherence function is closed
form: gamma(tau) = exp(-i w0 tau) * exp(-tau^2 / (2 tau_c^2)) with
tau_c = 1 / sigma_omega, so |gamma(tau_c)| = e^(-1/2).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

C_LIGHT = 299_792_458.0
FWHM_TO_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))


@dataclass(frozen=True)
class SpectralModel:
    """Gaussian chaotic-source spectrum.

    center_wavelength and bandwidth_fwhm are in meters.  A zero
    bandwidth is accepted as the single-frequency limit (used by the
    Monte-Carlo cross-checks); the coherence envelope is then flat.
    """

    center_wavelength: float
    bandwidth_fwhm: float
    shape: str = "gaussian"

    def __post_init__(self):
        if self.shape != "gaussian":
            raise ValueError(f"unsupported spectral shape: {self.shape!r}")
        if not (self.center_wavelength > 0):
            raise ValueError("center_wavelength must be positive")
        if self.bandwidth_fwhm < 0:
            raise ValueError("bandwidth_fwhm must be nonnegative")
        if self.bandwidth_fwhm > 0.2 * self.center_wavelength:
            warnings.warn(
                "bandwidth is not small against the center wavelength; "
                "the narrowband envelope assumption is violated",
                stacklevel=2,
            )

    @classmethod
    def from_nm(cls, center_nm: float, bandwidth_nm: float, shape: str = "gaussian"):
        return cls(center_nm * 1e-9, bandwidth_nm * 1e-9, shape)

    @property
    def center_omega(self) -> float:
        """Carrier angular frequency w0 (rad/s)."""
        return 2.0 * math.pi * C_LIGHT / self.center_wavelength

    @property
    def sigma_omega(self) -> float:
        """Standard deviation of the angular-frequency spectrum."""
        fwhm_omega = (
            2.0 * math.pi * C_LIGHT * self.bandwidth_fwhm / self.center_wavelength**2
        )
        return fwhm_omega / FWHM_TO_SIGMA


@dataclass(frozen=True)
class CoherenceSample:
    """One evaluated point of the coherence function; |gamma| <= 1."""

    tau: float
    gamma: complex


def gamma(model: SpectralModel, tau):
    """Normalized first-order coherence gamma(tau) = <exp(-i w tau)>.

    Accepts a scalar or array of delays (seconds) and returns complex
    values with gamma(0) = 1 and gamma(-tau) = conj(gamma(tau)).
    """
    tau = np.asarray(tau, dtype=float)
    sigma = model.sigma_omega
    out = np.exp(-1j * model.center_omega * tau - 0.5 * (sigma * tau) ** 2)
    if out.ndim == 0:
        return complex(out)
    return out


def spectral_density(model: SpectralModel, omega):
    """Normalized spectral density S(w); the Fourier partner of gamma."""
    sigma = model.sigma_omega
    if sigma == 0:
        raise ValueError("spectral density is a delta function at zero bandwidth")
    omega = np.asarray(omega, dtype=float)
    z = (omega - model.center_omega) / sigma
    return np.exp(-0.5 * z * z) / (sigma * math.sqrt(2.0 * math.pi))


def coherence_sample(model: SpectralModel, tau: float) -> CoherenceSample:
    """Evaluate gamma at one delay, packaged with its abscissa."""
    return CoherenceSample(tau=float(tau), gamma=complex(gamma(model, tau)))


def coherence_time(model: SpectralModel) -> float:
    """Delay tau_c with |gamma(tau_c)| = e^(-1/2); inf at zero bandwidth."""
    sigma = model.sigma_omega
    return math.inf if sigma == 0 else 1.0 / sigma


def sample_frequency(model: SpectralModel, rng: np.random.Generator, size=None):
    """Draw angular frequencies from the spectral density.

    Deterministic for a given generator state; callers own the stream
    so parallel sampling stays reproducible.
    """
    return rng.normal(model.center_omega, model.sigma_omega, size=size)
