"""Jones calculus for the polarized Michelson interferometer.

Conventions used throughout the package:

* Jones vectors hold (x, y) field amplitudes; matrices act from the left.
* The beam splitter is non-polarizing, with real amplitude 1/sqrt(2) per
  port.  A reflection at the splitter flips handedness, modeled as
  diag(1, -1) on (x, y): the x component is preserved, the y component
  changes sign, so a linear polarization at angle theta maps to -theta.
* Arm 1 is entered by reflection (the flip acts *before* its polarizer
  P1) and leaves toward the detector by transmission.  Arm 2 is entered
  by transmission and leaves by reflection (the flip acts *after* P2).
  Consequently arm 1 and the output polarizer P3 select the source-frame
  angle -theta when set to a physical angle theta, while P0 and P2 act
  at their physical angles.  This is the handedness bookkeeping behind
  the "set both arm polarizers to 135 degrees to realize a 45/135
  scheme" recipe.
* Mirrors are hit at normal incidence and are identical in both arms;
  their polarization action is folded into the identity.

All angles at this layer are radians.  Config files use degrees and are
converted before reaching these functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateChain

BS_AMPLITUDE = 1.0 / math.sqrt(2.0)

_FLIP = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_IDENTITY = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class PolarizationTransform:
    """A 2x2 complex Jones matrix for a passive optical element.

    Entries are dimensionless field-amplitude ratios in the fixed (x, y)
    basis.  Passive optics never have singular values above 1.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __array__(self, dtype=None):
        return np.asarray(self.matrix, dtype=dtype)

    def compose(self, other: "PolarizationTransform") -> "PolarizationTransform":
        """Return the transform applying `other` first, then `self`."""
        return PolarizationTransform(self.matrix @ np.asarray(other))

    def max_singular_value(self) -> float:
        return float(np.linalg.svd(self.matrix, compute_uv=False)[0])

    def is_projector(self, tol: float = 1e-12) -> bool:
        m = self.matrix
        return bool(
            np.allclose(m, m.conj().T, atol=tol)
            and np.allclose(m @ m, m, atol=tol)
        )


@dataclass(frozen=True)
class ArmChain:
    """One interferometer arm: its round-trip Jones transform and delay.

    `elements` records the ordered (name, matrix) factors from input
    coupler to the detector so the product can be re-derived exactly.
    """

    transform: PolarizationTransform
    delay: float
    elements: tuple[tuple[str, np.ndarray], ...]

    def rederive(self) -> np.ndarray:
        """Recompute the transform from the element list (order-exact)."""
        total = _IDENTITY
        for _, factor in self.elements:
            total = factor @ total
        return total


@dataclass(frozen=True)
class InputPolarization:
    """Classical polarization mixture entering the interferometer.

    `mixture` is a tuple of (unit Jones vector, weight) pairs; weights
    sum to 1.  Unpolarized light is the equal mixture of two orthonormal
    modes; with P0 present the mixture collapses to the single mode
    along the P0 axis.
    """

    mixture: tuple[tuple[np.ndarray, float], ...]

    def __post_init__(self):
        frozen = []
        total = 0.0
        for vec, weight in self.mixture:
            v = np.array(vec, dtype=complex).reshape(2)
            norm = float(np.linalg.norm(v))
            if not math.isclose(norm, 1.0, rel_tol=0, abs_tol=1e-9):
                raise ValueError(f"mixture vector must be unit length, got norm {norm}")
            if weight < 0:
                raise ValueError("mixture weights must be nonnegative")
            v.setflags(write=False)
            frozen.append((v, float(weight)))
            total += weight
        if not math.isclose(total, 1.0, rel_tol=0, abs_tol=1e-9):
            raise ValueError(f"mixture weights must sum to 1, got {total}")
        object.__setattr__(self, "mixture", tuple(frozen))

    @classmethod
    def unpolarized(cls) -> "InputPolarization":
        return cls(((np.array([1.0, 0.0]), 0.5), (np.array([0.0, 1.0]), 0.5)))

    @classmethod
    def linear(cls, angle: float) -> "InputPolarization":
        return cls(((np.array([math.cos(angle), math.sin(angle)]), 1.0),))

    def coherency(self) -> np.ndarray:
        """Return the 2x2 coherency (polarization density) matrix."""
        rho = np.zeros((2, 2), dtype=complex)
        for vec, weight in self.mixture:
            rho += weight * np.outer(vec, vec.conj())
        return rho


def polarizer(angle: float) -> PolarizationTransform:
    """Ideal linear polarizer: projector onto the axis (cos a, sin a).

    The angle wraps modulo pi; no insertion loss, infinite extinction.
    """
    c = math.cos(angle)
    s = math.sin(angle)
    return PolarizationTransform(np.array([[c * c, c * s], [c * s, s * s]]))


def beamsplitter_port(kind: str) -> tuple[PolarizationTransform, float]:
    """Polarization action and amplitude of one beam-splitter port.

    `kind` is "transmit" (identity) or "reflect" (handedness flip
    diag(1, -1)); both ports carry amplitude 1/sqrt(2).
    """
    if kind == "transmit":
        return (PolarizationTransform(_IDENTITY), BS_AMPLITUDE)
    if kind == "reflect":
        return (PolarizationTransform(_FLIP), BS_AMPLITUDE)
    raise ValueError(f"unknown beam-splitter port kind: {kind!r}")


def mirror() -> PolarizationTransform:
    """Normal-incidence end mirror, identical in both arms (identity)."""
    return PolarizationTransform(_IDENTITY)


def _polarizer_angles_deg(config) -> dict:
    p = config.polarizers
    return {"p0": p.p0, "p1": p.p1, "p2": p.p2, "p3": p.p3}


def build_arm_chain(config, arm: int) -> ArmChain:
    """Build the ordered round-trip chain for one arm of the interferometer.

    The chain covers input coupler -> arm polarizer (both passes) ->
    mirror -> output coupler -> P3.  P0 is not part of any chain; it
    determines the input mixture instead.  Raises DegenerateChain when
    the product is the zero matrix (fully crossed polarizers); "zero"
    allows for trig rounding, so crossing at float angles still raises.
    """
    if arm not in (1, 2):
        raise ValueError(f"arm must be 1 or 2, got {arm}")
    angles = _polarizer_angles_deg(config)
    arm_angle = angles["p1"] if arm == 1 else angles["p2"]
    p3_angle = angles["p3"]

    in_kind, out_kind = ("reflect", "transmit") if arm == 1 else ("transmit", "reflect")
    in_port, in_amp = beamsplitter_port(in_kind)
    out_port, out_amp = beamsplitter_port(out_kind)

    elements: list[tuple[str, np.ndarray]] = []
    elements.append((f"bs_{in_kind}_in", in_amp * np.asarray(in_port)))
    if arm_angle is not None:
        p_arm = np.asarray(polarizer(math.radians(arm_angle)))
        elements.append((f"p{arm}_in", p_arm))
        elements.append(("mirror", np.asarray(mirror())))
        elements.append((f"p{arm}_out", p_arm))
    else:
        elements.append(("mirror", np.asarray(mirror())))
    elements.append((f"bs_{out_kind}_out", out_amp * np.asarray(out_port)))
    if p3_angle is not None:
        elements.append(("p3", np.asarray(polarizer(math.radians(p3_angle)))))

    total = _IDENTITY
    for _, factor in elements:
        total = factor @ total
    if np.abs(total).max() < 1e-14:
        raise DegenerateChain(
            f"arm {arm} chain is zero (fully crossed polarizers)"
        )
    return ArmChain(
        transform=PolarizationTransform(total),
        delay=0.0,
        elements=tuple((name, m.copy()) for name, m in elements),
    )


def effective_axes(config) -> tuple[float | None, float | None]:
    """Polarization axis each arm effectively selects, in source coordinates.

    The handedness flip sits before P1 on the way into arm 1, so arm 1
    at physical angle theta selects the source-frame axis -theta.  Arm 2
    is entered without a flip and selects its physical angle.  Returned
    angles are radians modulo pi; None marks an arm without a polarizer.
    """
    angles = _polarizer_angles_deg(config)
    axis1 = None if angles["p1"] is None else (-math.radians(angles["p1"])) % math.pi
    axis2 = None if angles["p2"] is None else math.radians(angles["p2"]) % math.pi
    return (axis1, axis2)


def input_polarization(config) -> InputPolarization:
    """The source mixture: unpolarized, or the single P0-selected mode."""
    p0 = _polarizer_angles_deg(config)["p0"]
    if p0 is None:
        return InputPolarization.unpolarized()
    return InputPolarization.linear(math.radians(p0))
