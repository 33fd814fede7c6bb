"""Four-class decomposition of the detected signal and fringe analysis.

The 16 cells of the assembled matrix fall into four families, following
the amplitude pairs that generate them:

* background: the (I, I) and (IV, IV) diagonal cells (2 bars), constant
  in the scan delay;
* hbt: the II/III block (4 bars) whose off-diagonal pair carries the
  |gamma|^2 bunching envelope;
* omega: the 8 cells mixing (I or IV) with (II or III), linear in gamma
  and oscillating at the carrier frequency;
* two_omega: the (I, IV) pair (2 bars), quadratic in gamma and
  oscillating at twice the carrier (the sub-wavelength fringe).

Bar heights are the real parts of the matrix entries; class totals are
real up to numerical noise, which is asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import engine, spectrum
from .errors import InsufficientSpan

BACKGROUND_CELLS = ((0, 0), (3, 3))
HBT_CELLS = ((1, 1), (2, 2), (1, 2), (2, 1))
TWO_OMEGA_CELLS = ((0, 3), (3, 0))
OMEGA_CELLS = tuple(
    (m, n)
    for m in range(4)
    for n in range(4)
    if (m, n) not in BACKGROUND_CELLS + HBT_CELLS + TWO_OMEGA_CELLS
)

_CLASS_OF_CELL = {}
for _cells, _name in (
    (BACKGROUND_CELLS, "background"),
    (HBT_CELLS, "hbt"),
    (OMEGA_CELLS, "omega"),
    (TWO_OMEGA_CELLS, "two_omega"),
):
    for _cell in _cells:
        _CLASS_OF_CELL[_cell] = _name

_LABELS = tuple(
    f"A{engine.AMPLITUDES[m].label}*xA{engine.AMPLITUDES[n].label}"
    for m in range(4)
    for n in range(4)
)


@dataclass(frozen=True)
class BarEntry:
    """One bar of the 16-term chart: label, class and real height."""

    label: str
    component: str
    value: float


@dataclass(frozen=True)
class ComponentBreakdown:
    """Class totals and per-term bars of the detected signal at one delay.

    Values are unnormalized (they sum to g2 times the normalization).
    `per_term_bars_background_removed` zeroes the four constant diagonal
    bars, the view used when comparing only the oscillating parts.
    """

    tau_d: float
    background: float
    hbt: float
    omega: float
    two_omega: float
    per_term_bars: tuple[BarEntry, ...]

    @property
    def total(self) -> float:
        return self.background + self.hbt + self.omega + self.two_omega

    @property
    def per_term_bars_background_removed(self) -> tuple[BarEntry, ...]:
        return tuple(
            BarEntry(b.label, b.component, 0.0 if i % 5 == 0 else b.value)
            for i, b in enumerate(self.per_term_bars)
        )


def classify(config, tau_d: float) -> ComponentBreakdown:
    """Split the assembled matrix at tau_d into the four classes."""
    coeffs = engine.coefficient_matrix(config)
    scalar = engine.scalar_matrix(config, tau_d)
    v = engine.assemble_vtpa(coeffs, scalar).entries

    sums = {"background": 0.0 + 0.0j, "hbt": 0.0 + 0.0j,
            "omega": 0.0 + 0.0j, "two_omega": 0.0 + 0.0j}
    bars = []
    for m in range(4):
        for n in range(4):
            name = _CLASS_OF_CELL[(m, n)]
            sums[name] += v[m, n]
            bars.append(BarEntry(_LABELS[4 * m + n], name, float(v[m, n].real)))

    scale = max(1.0, abs(complex(v.sum())))
    for name, value in sums.items():
        if abs(value.imag) > 1e-9 * scale:
            raise AssertionError(f"{name} class total has imaginary residual {value.imag}")
    return ComponentBreakdown(
        tau_d=float(tau_d),
        background=float(sums["background"].real),
        hbt=float(sums["hbt"].real),
        omega=float(sums["omega"].real),
        two_omega=float(sums["two_omega"].real),
        per_term_bars=tuple(bars),
    )


def class_traces(config, delays) -> dict[str, np.ndarray]:
    """Vectorized class totals over a delay grid (unnormalized)."""
    coeffs = engine.coefficient_matrix(config).entries
    model = engine._spectral_model(config)
    delays = np.asarray(delays, dtype=float)
    g = np.atleast_1d(spectrum.gamma(model, delays))
    by_step = {0: np.ones_like(g), 1: g, -1: np.conj(g)}
    paths = tuple((a.path_a - 1, a.path_b - 1) for a in engine.AMPLITUDES)
    out = {name: np.zeros(delays.shape, dtype=float)
           for name in ("background", "hbt", "omega", "two_omega")}
    for m, (i, j) in enumerate(paths):
        for n, (k, l) in enumerate(paths):
            cell = (coeffs[m, n] * by_step[k - i] * by_step[l - j]).real
            out[_CLASS_OF_CELL[(m, n)]] += cell
    return out


@dataclass(frozen=True)
class OscillationReport:
    """Spectral summary of a scan trace near the carrier and its double."""

    dominant: str
    omega_amplitude: float
    two_omega_amplitude: float
    amplitude_ratio: float
    peak_frequency_hz: float
    frequency_resolution_hz: float


def dominant_oscillation(trace) -> OscillationReport:
    """Fourier analysis of a scan trace: carrier vs double-carrier peak.

    Uses a Hann window and 4x zero-padding on the mean-subtracted g2
    column.  Raises InsufficientSpan when the grid is too short (< 4
    carrier periods) or too coarse to resolve the 2w0 component.
    """
    delays = np.asarray(trace.delays_s, dtype=float)
    values = np.asarray(trace.g2, dtype=float)
    model = trace.spectral_model()
    nu0 = model.center_omega / (2.0 * math.pi)
    period = 1.0 / nu0
    if delays.size < 2:
        raise InsufficientSpan("need at least two delay samples")
    span = float(delays[-1] - delays[0])
    dt = span / (delays.size - 1)
    if span < 4.0 * period:
        raise InsufficientSpan(
            f"scan span {span:.3e} s covers fewer than 4 carrier periods"
        )
    if dt > period / 4.0:
        raise InsufficientSpan(
            f"grid step {dt:.3e} s cannot resolve the 2x carrier frequency"
        )

    windowed = (values - values.mean()) * np.hanning(values.size)
    padded = 4 * values.size
    amp = np.abs(np.fft.rfft(windowed, n=padded))
    freqs = np.fft.rfftfreq(padded, d=dt)

    def _peak(lo: float, hi: float) -> tuple[float, float]:
        mask = (freqs >= lo) & (freqs <= hi)
        if not mask.any():
            raise InsufficientSpan("frequency window falls outside the grid")
        idx = np.argmax(amp[mask])
        return float(amp[mask][idx]), float(freqs[mask][idx])

    amp_omega, _ = _peak(0.5 * nu0, 1.5 * nu0)
    amp_two, _ = _peak(1.5 * nu0, 2.5 * nu0)
    _, peak_freq = _peak(0.5 * nu0, float(freqs[-1]))

    scale = float(np.abs(windowed).sum()) + 1e-300
    floor = 1e-9 * scale
    if amp_omega < floor and amp_two < floor:
        dominant = "none"
        ratio = math.nan
    else:
        ratio = amp_omega / amp_two if amp_two > 0 else math.inf
        dominant = "omega" if amp_omega > amp_two else "two_omega"
    return OscillationReport(
        dominant=dominant,
        omega_amplitude=amp_omega,
        two_omega_amplitude=amp_two,
        amplitude_ratio=ratio,
        peak_frequency_hz=peak_freq,
        frequency_resolution_hz=1.0 / span,
    )


def eraser_extremum(config) -> str:
    """Whether g2(0) is the global maximum or minimum of the scan trace.

    Requires both P0 and P3 (the which-path eraser pair): parallel
    effective axes give a maximum at the balance position, orthogonal
    ones a minimum.
    """
    if config.polarizers.p0 is None or config.polarizers.p3 is None:
        raise ValueError("eraser_extremum requires both P0 and P3 present")
    delays = config.scan.delays_s()
    values = engine.g2_direct(config, delays)
    center = engine.g2_direct(config, 0.0)
    lo, hi = float(values.min()), float(values.max())
    tol = 1e-9 * max(1.0, hi)
    if center >= hi - tol:
        return "maximum"
    if center <= lo + tol:
        return "minimum"
    raise ValueError("g2(0) is not a global extremum of the trace")
