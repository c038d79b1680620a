"""Complex state-vector and operator algebra for 2- and 4-dim Hilbert spaces.

Basis conventions used everywhere in this package:
  single qubit:  {|up_n>, |down_n>}  (quantization axis n)
  pair (left (x) right): [up-up, up-down, down-up, down-down]
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

NORM_TOL = 1e-12
HERMITICITY_TOL = 1e-10

# tolerance for accepting slightly drifted input vectors (e.g. integrator output)
_CONSTRUCT_TOL = 1e-8

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def _as_unit_vector(amplitudes, dim: int) -> np.ndarray:
    vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if vec.shape != (dim,):
        raise ValueError(f"expected a {dim}-component amplitude vector, got shape {vec.shape}")
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > _CONSTRUCT_TOL:
        raise ValueError(f"amplitudes are not normalized: |psi| = {norm!r}")
    vec = vec / norm
    vec.setflags(write=False)
    return vec


@dataclass(frozen=True)
class SpinState:
    """Normalized complex 2-vector in the {|up_n>, |down_n>} basis."""

    amplitudes: np.ndarray

    def __init__(self, amplitudes):
        object.__setattr__(self, "amplitudes", _as_unit_vector(amplitudes, 2))

    @staticmethod
    def up() -> "SpinState":
        return SpinState([1.0, 0.0])

    @staticmethod
    def down() -> "SpinState":
        return SpinState([0.0, 1.0])


@dataclass(frozen=True)
class PairState:
    """Normalized complex 4-vector, ordering (left (x) right): [uu, ud, du, dd]."""

    amplitudes: np.ndarray

    def __init__(self, amplitudes):
        object.__setattr__(self, "amplitudes", _as_unit_vector(amplitudes, 4))


@dataclass(frozen=True)
class MeasurementDirection:
    """Analyzer direction: polar angle from the quantization axis plus azimuth.

    Construction canonicalizes to polar in [0, pi] and azimuthal in [0, 2*pi);
    out-of-range polar values are folded onto the equivalent direction
    (polar -> -polar or 2*pi - polar shifts the azimuth by pi).
    """

    polar: float
    azimuthal: float = 0.0

    def __post_init__(self):
        polar = math.remainder(self.polar, 2.0 * math.pi)  # (-pi, pi]
        azimuthal = self.azimuthal
        if polar < 0.0:
            polar = -polar
            azimuthal += math.pi
        azimuthal = azimuthal % (2.0 * math.pi)
        if azimuthal >= 2.0 * math.pi:  # fmod of a tiny negative can round up to 2*pi
            azimuthal = 0.0
        object.__setattr__(self, "polar", polar)
        object.__setattr__(self, "azimuthal", azimuthal)

    def ket(self, sign: str = "+") -> np.ndarray:
        """Spin-up (+) or spin-down (-) ket along this direction."""
        c = math.cos(0.5 * self.polar)
        s = math.sin(0.5 * self.polar)
        phase = complex(math.cos(self.azimuthal), math.sin(self.azimuthal))
        if sign == "+":
            return np.array([c, s * phase], dtype=complex)
        if sign == "-":
            return np.array([-s, c * phase], dtype=complex)
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def tensor(left: SpinState, right: SpinState) -> PairState:
    """Tensor product of two single-qubit states, amplitudes[2i+j] = left[i]*right[j]."""
    return PairState(np.kron(left.amplitudes, right.amplitudes))


def projector(direction: MeasurementDirection, sign: str = "+") -> np.ndarray:
    """Rank-1 projector |sign dir><sign dir| (idempotent, Hermitian, trace 1)."""
    ket = direction.ket(sign)
    return np.outer(ket, ket.conj())


def spin_observable(direction: MeasurementDirection) -> np.ndarray:
    """P_+ - P_- along the given direction (eigenvalues +1 and -1)."""
    return projector(direction, "+") - projector(direction, "-")


def pair_expectation(state: PairState, left_op: np.ndarray, right_op: np.ndarray) -> float:
    """<state| left_op (x) right_op |state> for Hermitian single-qubit operators."""
    for op in (left_op, right_op):
        op = np.asarray(op)
        if op.shape != (2, 2):
            raise ValueError(f"operators must be 2x2, got shape {op.shape}")
        if np.max(np.abs(op - op.conj().T)) > HERMITICITY_TOL:
            raise ValueError("operator is not Hermitian")
    psi = state.amplitudes
    value = np.vdot(psi, np.kron(left_op, right_op) @ psi)
    if abs(value.imag) > NORM_TOL:
        raise ValueError(f"expectation has non-negligible imaginary part {value.imag!r}")
    return float(value.real)


def phase_insensitive_distance(a, b) -> float:
    """1 - |<a|b>|, in [0, 1]; zero iff the states agree up to a global phase."""
    va = a.amplitudes if hasattr(a, "amplitudes") else np.asarray(a, dtype=complex)
    vb = b.amplitudes if hasattr(b, "amplitudes") else np.asarray(b, dtype=complex)
    if va.shape != vb.shape:
        raise ValueError(f"dimension mismatch: {va.shape} vs {vb.shape}")
    na = np.linalg.norm(va)
    nb = np.linalg.norm(vb)
    if na == 0.0 or nb == 0.0:
        raise ValueError("cannot compare a zero vector")
    overlap = abs(np.vdot(va, vb)) / (na * nb)
    return float(max(0.0, 1.0 - overlap))
