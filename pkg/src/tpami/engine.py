"""Two-photon detection engine for the polarized Michelson interferometer.

Model
-----
A photon pair (a, b) enters the interferometer.  Each photon carries an
independent frequency drawn from the source spectrum and a polarization
mode drawn from the input mixture; mode phases are fully correlated
within a mode and uncorrelated between orthogonal modes.  Each photon
can take either arm, giving four two-photon path amplitudes:

    I : a->1, b->1      II : a->1, b->2
    III: a->2, b->1     IV : a->2, b->2

The detected rate splits into a polarization part and a temporal part.
With X_ki = T_k rho T_i^dagger (T_i the arm-i round-trip Jones matrix,
rho the input coherency matrix), the polarization weight of the
interference term between conjugated amplitude m = (i, j) and amplitude
n = (k, l) is

    c_ijkl = tr(X_ki) tr(X_lj) + X_ki[y,x] X_lj[x,y] + X_ki[x,y] X_lj[y,x]

which is the sum of the six mode-phase-balanced pairings (the only
polarization moments a polarization-blind pair detector retains).  The
temporal part is the scalar-model matrix

    S[m, n] = gamma(tau_k - tau_i) * gamma(tau_l - tau_j)

built from the first-order coherence function, with tau_1 = 0 and
tau_2 = tau_d (arm-2-minus-arm-1 round-trip delay).  The detected
signal is the entrywise (Hadamard) product summed over all 16 cells,

    G2(tau_d) = sum_mn C[m,n] * S[m,n](tau_d),

normalized by the product of mean per-arm pair intensities so the
orthogonal-arm schemes read exactly 1.  The factorization into C and S
is exact here because the temporal factor of a cell depends only on the
path bookkeeping, never on the polarization pairing; `assemble_vtpa`
still verifies the pairing decomposition cell by cell.

Everything in this module is pure and immutable; scans may be evaluated
by any number of workers with bit-identical results.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import polarization, spectrum
from .errors import DegenerateNormalization

# Intensities below this are treated as "zero mean transmission".
_ZERO_INTENSITY = 1e-30


@dataclass(frozen=True)
class AmplitudeIndex:
    """One of the four two-photon path amplitudes."""

    label: str
    path_a: int
    path_b: int


AMPLITUDES = (
    AmplitudeIndex("I", 1, 1),
    AmplitudeIndex("II", 1, 2),
    AmplitudeIndex("III", 2, 1),
    AmplitudeIndex("IV", 2, 2),
)

# 0-based (arm_a, arm_b) per amplitude, frozen row/column order.
_PATHS = tuple((a.path_a - 1, a.path_b - 1) for a in AMPLITUDES)


class TemporalKind(enum.Enum):
    """Temporal-factor class of a matrix cell."""

    CONSTANT = "constant"
    ABS_GAMMA_SQUARED = "abs_gamma_squared"
    GAMMA_LINEAR = "gamma_linear"
    GAMMA_SQUARED = "gamma_squared"


def temporal_kind(row: int, col: int) -> TemporalKind:
    """Temporal kind of cell (row, col) in the fixed amplitude order."""
    if row == col:
        return TemporalKind.CONSTANT
    pair = {row, col}
    if pair == {1, 2}:
        return TemporalKind.ABS_GAMMA_SQUARED
    if pair == {0, 3}:
        return TemporalKind.GAMMA_SQUARED
    return TemporalKind.GAMMA_LINEAR


@dataclass(frozen=True)
class Pairing:
    """One surviving polarization pairing inside a matrix cell.

    The label names the (a-bra, b-bra, b-ket, a-ket) mode tuple; both
    x phases and y phases cancel between bra and ket in every listed
    pairing.
    """

    label: str
    weight: complex
    kind: TemporalKind


@dataclass(frozen=True)
class PairingLedger:
    """All surviving pairings of one cell; weights sum to the C entry."""

    row: int
    col: int
    pairings: tuple[Pairing, ...]

    def surviving(self, atol: float = 0.0) -> tuple[Pairing, ...]:
        """Pairings with |weight| above atol (trig rounding leaves ~1e-17 dust)."""
        return tuple(p for p in self.pairings if abs(p.weight) > atol)

    def total_weight(self) -> complex:
        return complex(sum(p.weight for p in self.pairings))


@dataclass(frozen=True)
class TermMatrix:
    """4x4 complex matrix over amplitude pairs (row = conjugated index).

    Instances of this shape carry the scalar matrix S, the coefficient
    matrix C and the assembled V; all are Hermitian by construction.
    """

    entries: np.ndarray
    name: str = ""
    ledgers: tuple[PairingLedger, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        scale = max(1.0, float(np.abs(self.entries).max()))
        return bool(np.abs(self.entries - self.entries.conj().T).max() <= tol * scale)

    def total(self) -> complex:
        return complex(self.entries.sum())


# Row/column index order of the two-photon covariance matrix: the row is
# the (a-bra, b-bra) mode pair, the column the (b-ket, a-ket) pair, both
# in the order xx, xy, yx, yy.  The six positions below are the only
# ones a polarization-blind pair detection retains (bra and ket leave
# the same unordered mode pair).
RED_POSITIONS = ((0, 0), (1, 1), (1, 2), (2, 1), (2, 2), (3, 3))

_MODE = ("x", "y")


@dataclass(frozen=True)
class TwoPhotonCovariance:
    """4x4 fourth-order polarization moment matrix for one path tuple.

    Index layout follows the frozen convention: subindices are
    (a-bra, b-bra, b-ket, a-ket); rows run over the first two, columns
    over the last two, each in xx, xy, yx, yy order.
    """

    entries: np.ndarray
    paths: tuple[int, int, int, int] | None = None

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    def as_tensor(self) -> np.ndarray:
        """The same data as a 2x2x2x2 tensor indexed [alpha, beta, gamma, delta]."""
        return self.entries.reshape(2, 2, 2, 2)

    def red_sum(self) -> complex:
        """Sum of the six detection-surviving positions."""
        return complex(sum(self.entries[r, c] for r, c in RED_POSITIONS))


# ---------------------------------------------------------------------------
# Per-config building blocks


@lru_cache(maxsize=512)
def _parts(config, source_power: float = 1.0):
    """Chains, coherency matrix and cross-coherency tensor for a config.

    `source_power` scales the input coherency matrix; it cancels in
    every normalized quantity and exists so that invariance can be
    exercised directly.
    """
    t1 = np.asarray(polarization.build_arm_chain(config, 1).transform)
    t2 = np.asarray(polarization.build_arm_chain(config, 2).transform)
    if config.blocked_arm == 1:
        t1 = np.zeros((2, 2), dtype=complex)
    elif config.blocked_arm == 2:
        t2 = np.zeros((2, 2), dtype=complex)
    rho = polarization.input_polarization(config).coherency() * source_power
    chains = (t1, t2)
    # cross[k, i] = T_k rho T_i^dagger
    cross = np.empty((2, 2, 2, 2), dtype=complex)
    for k in range(2):
        for i in range(2):
            cross[k, i] = chains[k] @ rho @ chains[i].conj().T
    return chains, rho, cross


def _spectral_model(config) -> spectrum.SpectralModel:
    return spectrum.SpectralModel.from_nm(
        config.source.center_wavelength_nm,
        config.source.bandwidth_nm,
        config.source.shape,
    )


def _pairing_weights(xa: np.ndarray, xb: np.ndarray) -> dict[str, complex]:
    """The six balanced-pairing weights for one cell.

    xa couples photon a's ket chain to its bra chain, xb likewise for
    photon b; entry [r, c] is the (detector r, detector c) element.
    """
    return {
        "xxxx": xa[0, 0] * xb[0, 0],
        "yyyy": xa[1, 1] * xb[1, 1],
        "xyyx": xa[0, 0] * xb[1, 1],
        "yxxy": xa[1, 1] * xb[0, 0],
        "xyxy": xa[1, 0] * xb[0, 1],
        "yxyx": xa[0, 1] * xb[1, 0],
    }


def coefficient_matrix(config) -> TermMatrix:
    """The 4x4 polarization coefficient matrix C.

    Entry (m, n) weights the interference of conjugated amplitude m with
    amplitude n; it is the sum of the six surviving polarization
    pairings, each recorded in the attached PairingLedger with its
    temporal-factor kind.
    """
    _, _, cross = _parts(config)
    entries = np.zeros((4, 4), dtype=complex)
    ledgers = []
    for m, (i, j) in enumerate(_PATHS):
        for n, (k, l) in enumerate(_PATHS):
            weights = _pairing_weights(cross[k, i], cross[l, j])
            kind = temporal_kind(m, n)
            pairings = tuple(
                Pairing(label, complex(w), kind) for label, w in weights.items()
            )
            entries[m, n] = sum(weights.values())
            ledgers.append(PairingLedger(m, n, pairings))
    return TermMatrix(entries, name="C", ledgers=tuple(ledgers))


def scalar_matrix(config, tau_d: float) -> TermMatrix:
    """The scalar-model temporal matrix S at delay tau_d.

    Diagonal entries are 1, the II/III pair carries |gamma(tau_d)|^2,
    the I/IV pair gamma(tau_d)^2, and the eight mixed cells are linear
    in gamma with the carrier sign fixed by the delay bookkeeping
    (arm 1 at delay 0, arm 2 at tau_d).
    """
    model = _spectral_model(config)
    g = spectrum.gamma(model, tau_d)
    # gamma evaluated at (k - i) * tau_d for each photon; gamma(-t) = conj.
    by_step = {0: 1.0 + 0.0j, 1: g, -1: np.conj(g)}
    entries = np.empty((4, 4), dtype=complex)
    for m, (i, j) in enumerate(_PATHS):
        for n, (k, l) in enumerate(_PATHS):
            entries[m, n] = by_step[k - i] * by_step[l - j]
    return TermMatrix(entries, name="S_TPA")


def input_covariance(config) -> TwoPhotonCovariance:
    """Input-plane two-photon covariance matrix J0.

    Photons a and b are independent draws from the input mixture, so J0
    is the coherency-matrix product rho x rho arranged with photon a on
    the first and fourth subindices.  For the unpolarized source only
    mode-balanced positions survive (all inside the six red positions);
    a P0-polarized input populates the single selected mode.
    """
    rho = polarization.input_polarization(config).coherency()
    tensor = np.empty((2, 2, 2, 2), dtype=complex)
    for a in range(2):
        for b in range(2):
            for c in range(2):
                for d in range(2):
                    tensor[a, b, c, d] = rho[d, a] * rho[c, b]
    return TwoPhotonCovariance(tensor.reshape(4, 4))


def transform_covariance(
    j0: TwoPhotonCovariance, chain_i, chain_j, chain_k, chain_l
) -> TwoPhotonCovariance:
    """Propagate an input covariance matrix through four arm chains.

    The bra side (photon a via chain i, photon b via chain j) transforms
    with conjugated matrices, the ket side (a via k, b via l) with plain
    ones, preserving the frozen index placement.
    """
    ti, tj, tk, tl = (np.asarray(c.transform if isinstance(c, polarization.ArmChain) else c, dtype=complex) for c in (chain_i, chain_j, chain_k, chain_l))
    out = np.einsum(
        "ap,bq,cr,ds,pqrs->abcd",
        ti.conj(),
        tj.conj(),
        tl,
        tk,
        j0.as_tensor(),
        optimize=True,
    )
    paths = None
    return TwoPhotonCovariance(out.reshape(4, 4), paths)


def assemble_vtpa(coeffs: TermMatrix, scalar: TermMatrix) -> TermMatrix:
    """Entrywise product V = C o S.

    The pairing decomposition is re-checked cell by cell: the ledger
    weights must reproduce the C entry, which makes the Hadamard
    assembly equal to the direct amplitude model (each cell's pairings
    all share the cell's temporal factor).
    """
    if coeffs.ledgers is not None:
        for ledger in coeffs.ledgers:
            total = ledger.total_weight()
            entry = coeffs.entries[ledger.row, ledger.col]
            if abs(total - entry) > 1e-12 * max(1.0, abs(entry)):
                raise AssertionError(
                    f"pairing ledger at cell ({ledger.row}, {ledger.col}) "
                    f"does not reproduce the coefficient entry"
                )
    return TermMatrix(coeffs.entries * scalar.entries, name="V_TPA",
                      ledgers=coeffs.ledgers)


# ---------------------------------------------------------------------------
# Detection and normalization


def _arm_intensities(config, source_power: float = 1.0) -> tuple[float, float]:
    _, _, cross = _parts(config, source_power)
    return (float(cross[0, 0].trace().real), float(cross[1, 1].trace().real))


def _crossed_pair_hint(config, arm: int) -> str:
    """Name the polarizer pair that kills an arm, for error messages."""
    p = config.polarizers
    arm_angle = p.p1 if arm == 1 else p.p2
    pairs = []
    if p.p0 is not None and arm_angle is not None:
        pairs.append(("p0", f"p{arm}"))
    if arm_angle is not None and p.p3 is not None:
        pairs.append((f"p{arm}", "p3"))
    if p.p0 is not None and p.p3 is not None:
        pairs.append(("p0", "p3"))
    if pairs:
        listing = ", ".join(f"{a}/{b}" for a, b in pairs)
        return f"check the crossed polarizer pair among: {listing}"
    return "an arm is blocked or its polarizers are crossed"


def normalization(config, source_power: float = 1.0) -> float:
    """Product of mean per-pair arm intensities, 4 tr(X11) tr(X22)."""
    i1, i2 = _arm_intensities(config, source_power)
    for arm, value in ((1, i1), (2, i2)):
        if value <= _ZERO_INTENSITY:
            raise DegenerateNormalization(
                f"arm {arm} transmits zero mean intensity; "
                + _crossed_pair_hint(config, arm)
            )
    return 4.0 * i1 * i2


def _coefficient_entries(cross: np.ndarray) -> np.ndarray:
    entries = np.empty((4, 4), dtype=complex)
    for m, (i, j) in enumerate(_PATHS):
        for n, (k, l) in enumerate(_PATHS):
            xa = cross[k, i]
            xb = cross[l, j]
            entries[m, n] = (
                xa.trace() * xb.trace() + xa[1, 0] * xb[0, 1] + xa[0, 1] * xb[1, 0]
            )
    return entries


def _g2_values(config, tau_d, source_power: float = 1.0) -> np.ndarray:
    _, _, cross = _parts(config, source_power)
    coeffs = _coefficient_entries(cross)
    model = _spectral_model(config)
    tau = np.atleast_1d(np.asarray(tau_d, dtype=float))
    g = spectrum.gamma(model, tau)
    g = np.atleast_1d(g)
    by_step = {0: np.ones_like(g), 1: g, -1: np.conj(g)}
    total = np.zeros(tau.shape, dtype=complex)
    for m, (i, j) in enumerate(_PATHS):
        for n, (k, l) in enumerate(_PATHS):
            total += coeffs[m, n] * by_step[k - i] * by_step[l - j]
    return total.real


def g2_direct(config, tau_d, *, source_power: float = 1.0):
    """Normalized second-order correlation g2 at delay(s) tau_d (seconds).

    Closed form in the coherence function; scalar in, scalar out.
    `source_power` rescales the source and cancels in the result.
    Raises DegenerateNormalization when an arm transmits zero mean
    intensity.
    """
    norm = normalization(config, source_power)
    values = _g2_values(config, tau_d, source_power) / norm
    if np.isscalar(tau_d) or np.ndim(tau_d) == 0:
        return float(values[0])
    return values


def pair_amplitude(config, omega_a: float, mode_a, omega_b: float, mode_b,
                   tau_d: float) -> np.ndarray:
    """Symmetrized 2x2 detection-amplitude matrix for one photon pair.

    M[p, q] sums over arm assignments (i for photon a, j for photon b)
    of [(T_i u_a)_p (T_j u_b)_q + (T_i u_a)_q (T_j u_b)_p] times
    exp(-i(w_a tau_i + w_b tau_j)); the symmetrization realizes
    polarization-insensitive detection of an unordered pair.  Chains
    with zero transforms (blocked or degenerate) simply contribute
    nothing.
    """
    chains, _, _ = _parts(config)
    u_a = np.asarray(mode_a, dtype=complex).reshape(2)
    u_b = np.asarray(mode_b, dtype=complex).reshape(2)
    delays = (0.0, float(tau_d))
    a_field = np.zeros(2, dtype=complex)
    b_field = np.zeros(2, dtype=complex)
    for arm in range(2):
        a_field += (chains[arm] @ u_a) * np.exp(-1j * omega_a * delays[arm])
        b_field += (chains[arm] @ u_b) * np.exp(-1j * omega_b * delays[arm])
    return np.outer(a_field, b_field) + np.outer(b_field, a_field)


def detection_probability(m: np.ndarray) -> float:
    """Unordered-pair detection sum of a symmetrized amplitude matrix.

    The diagonal carries the 1/2 double-counting correction of the
    unordered p = q outcome; the sum runs in the source mode basis,
    where the surviving pairings live.
    """
    m = np.asarray(m)
    return float(
        abs(m[0, 0]) ** 2 / 4.0 + abs(m[1, 1]) ** 2 / 4.0 + abs(m[0, 1]) ** 2
    )


def path_probabilities(config) -> np.ndarray:
    """Large-delay shares of the four path amplitudes, summing to 1."""
    diag = np.real(np.diag(coefficient_matrix(config).entries))
    total = float(diag.sum())
    if total <= _ZERO_INTENSITY:
        raise DegenerateNormalization("total detection rate is zero")
    return diag / total


def blocked_arm_rate(config, blocked: int) -> float:
    """Ratio of the large-delay TPA rate with one arm blocked to unblocked."""
    if blocked not in (1, 2):
        raise ValueError(f"blocked arm must be 1 or 2, got {blocked}")
    diag = np.real(np.diag(coefficient_matrix(config).entries))
    total = float(diag.sum())
    if total <= _ZERO_INTENSITY:
        raise DegenerateNormalization("total detection rate is zero")
    survivor = 0 if blocked == 2 else 3
    return float(diag[survivor]) / total
