"""Single-neutron path (x) spin model: exact probabilities and count records.

The prepared state is (|I, up> - exp(i g_B) |II, down>)/sqrt(2), ordering
[I up, I down, II up, II down].  The phase shift chi of the interferometer
plays the role of the polar analyzer angle on the path side, the spinor
analysis direction delta the one on the spin side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bell import BellSetting, BerryParameter, compensated_setting
from .states import MeasurementDirection, projector

_CSV_FIELDS = ("seed", "gamma_B", "chi", "delta1", "delta2", "n_pp", "n_pm", "n_mp", "n_mm")


@dataclass(frozen=True)
class NeutronState:
    """Normalized 4-vector over {|I>, |II>} (x) {|up_n>, |down_n>}."""

    amplitudes: np.ndarray

    def __init__(self, amplitudes):
        vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if vec.shape != (4,):
            raise ValueError(f"expected 4 amplitudes, got shape {vec.shape}")
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > 1e-8:
            raise ValueError(f"amplitudes are not normalized: |psi| = {norm!r}")
        vec = vec / norm
        vec.setflags(write=False)
        object.__setattr__(self, "amplitudes", vec)


@dataclass(frozen=True)
class InterferometerConfig:
    """Geometric phase gamma_B imprinted by the two RF flippers.

    The flipper phases phi_1, phi_2 must satisfy gamma_B = phi_1 - phi_2
    exactly; gamma_B is half of the solid angle enclosed by the spinor path.
    """

    gamma_B: float
    rf_phase_1: float = None  # type: ignore[assignment]
    rf_phase_2: float = 0.0

    def __post_init__(self):
        if self.rf_phase_1 is None:
            object.__setattr__(self, "rf_phase_1", self.gamma_B + self.rf_phase_2)
        if self.gamma_B - (self.rf_phase_1 - self.rf_phase_2) != 0.0:
            raise ValueError(
                f"gamma_B = {self.gamma_B!r} must equal rf_phase_1 - rf_phase_2 "
                f"= {self.rf_phase_1 - self.rf_phase_2!r}"
            )


@dataclass(frozen=True)
class CountRecord:
    """Joint counts of one (chi, delta) setting, with the seed that produced them."""

    n_pp: int
    n_pm: int
    n_mp: int
    n_mm: int
    gamma_B: float
    chi: float
    delta: MeasurementDirection
    seed: int

    def __post_init__(self):
        if min(self.n_pp, self.n_pm, self.n_mp, self.n_mm) < 0:
            raise ValueError("counts must be nonnegative")

    @property
    def total(self) -> int:
        return self.n_pp + self.n_pm + self.n_mp + self.n_mm

    @staticmethod
    def csv_header() -> str:
        return ",".join(_CSV_FIELDS)

    def to_csv_row(self) -> str:
        values = (
            str(self.seed),
            f"{self.gamma_B:.9g}",
            f"{self.chi:.9g}",
            f"{self.delta.polar:.9g}",
            f"{self.delta.azimuthal:.9g}",
            str(self.n_pp),
            str(self.n_pm),
            str(self.n_mp),
            str(self.n_mm),
        )
        return ",".join(values)


def prepare_state(config: InterferometerConfig) -> NeutronState:
    """(|I, up> - exp(i gamma_B) |II, down>)/sqrt(2) after the spinor evolution."""
    s = 1.0 / math.sqrt(2.0)
    phase = complex(math.cos(config.gamma_B), math.sin(config.gamma_B))
    return NeutronState([s, 0.0, 0.0, -s * phase])


def path_projector(chi: float, sign: str = "+") -> np.ndarray:
    """Projector onto cos(chi/2)|I> + sin(chi/2)|II> (+) or its complement (-)."""
    c, s = math.cos(0.5 * chi), math.sin(0.5 * chi)
    if sign == "+":
        ket = np.array([c, s], dtype=complex)
    elif sign == "-":
        ket = np.array([-s, c], dtype=complex)
    else:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    return np.outer(ket, ket.conj())


def setting_projectors(chi: float, delta: MeasurementDirection, signs: str = "++") -> np.ndarray:
    """4x4 projector P_path(chi, sign1) (x) P_spin(delta, sign2)."""
    if len(signs) != 2 or any(s not in "+-" for s in signs):
        raise ValueError(f"signs must be two of '+'/'-', got {signs!r}")
    return np.kron(path_projector(chi, signs[0]), projector(delta, signs[1]))


def exact_probabilities(
    config: InterferometerConfig, chi: float, delta: MeasurementDirection
) -> np.ndarray:
    """The four joint probabilities (pp, pm, mp, mm), via the index-shift identities.

    The minus outcomes are the plus projectors at delta_1 + pi (spin) and
    chi + pi (path), which coincide with the complementary projectors exactly.
    """
    psi = prepare_state(config).amplitudes
    delta_flip = MeasurementDirection(delta.polar + math.pi, delta.azimuthal)
    probs = []
    for path_angle, spin_dir in (
        (chi, delta),
        (chi, delta_flip),
        (chi + math.pi, delta),
        (chi + math.pi, delta_flip),
    ):
        op = np.kron(path_projector(path_angle, "+"), projector(spin_dir, "+"))
        probs.append(float(np.vdot(psi, op @ psi).real))
    return np.array(probs)


def draw_counts(probabilities, total: int, seed: int, mode: str = "multinomial") -> np.ndarray:
    """Seeded finite-statistics layer: multinomial split or per-channel Poisson."""
    p = np.asarray(probabilities, dtype=float)
    if total < 1:
        raise ValueError("total must be >= 1")
    rng = np.random.default_rng(seed)
    if mode == "multinomial":
        return rng.multinomial(total, p / p.sum())
    if mode == "poisson":
        return rng.poisson(total * p)
    raise ValueError(f"unknown mode {mode!r}")


def simulate_counts(
    config: InterferometerConfig,
    chi: float,
    delta: MeasurementDirection,
    total: int,
    seed: int,
    mode: str = "multinomial",
) -> CountRecord:
    """Draw a reproducible count record for one setting."""
    counts = draw_counts(exact_probabilities(config, chi, delta), total, seed, mode)
    return CountRecord(*(int(n) for n in counts), config.gamma_B, chi, delta, seed)


def estimate_correlation(counts: CountRecord) -> float:
    """(n_pp - n_pm - n_mp + n_mm) / total, the count-based expectation value."""
    if counts.total <= 0:
        raise ValueError("cannot estimate a correlation from zero counts")
    return (counts.n_pp - counts.n_pm - counts.n_mp + counts.n_mm) / counts.total


def exact_correlation(config: InterferometerConfig, chi: float, delta: MeasurementDirection) -> float:
    p = exact_probabilities(config, chi, delta)
    return float(p[0] - p[1] - p[2] + p[3])


# -- two-spin <-> path-spin dictionary ---------------------------------------
#
# Matching (|I,up> - exp(i g_B)|II,down>)/sqrt(2) against the two-spin state
# (|ud> - exp(-2i g)|du>)/sqrt(2) identifies |I> with the left up state and
# flips the spin label, so g_B = -2 g and an analyzer (b1, b2) on the
# two-spin side corresponds to the spinor direction (pi - b1, -b2).


def berry_from_interferometer(gamma_B: float) -> BerryParameter:
    return BerryParameter(-0.5 * gamma_B)


def interferometer_phase(gamma: BerryParameter) -> float:
    return -2.0 * gamma.gamma


def spin_direction_from_analyzer(direction: MeasurementDirection) -> MeasurementDirection:
    """Spinor-analysis direction equivalent to a right-side two-spin analyzer."""
    return MeasurementDirection(math.pi - direction.polar, -direction.azimuthal)


def chsh_settings(gamma_B: float) -> list[tuple[float, MeasurementDirection]]:
    """The four (chi, delta) settings of the compensated CHSH protocol.

    Order: (chi, d), (chi, d'), (chi', d), (chi', d') with chi = 0 and
    chi' = pi/2; the CHSH combination is |E1 - E2| + |E3 + E4|.
    """
    bell: BellSetting = compensated_setting(berry_from_interferometer(gamma_B))
    d = spin_direction_from_analyzer(bell.b)
    d_prime = spin_direction_from_analyzer(bell.b_prime)
    return [(0.0, d), (0.0, d_prime), (0.5 * math.pi, d), (0.5 * math.pi, d_prime)]


def chsh_from_counts(records) -> tuple[float, float]:
    """CHSH S estimate and its 1-sigma error from four count records.

    Records follow the `chsh_settings` order.  Each correlation carries the
    multinomial variance (1 - E^2)/N; the absolute values propagate the
    variances unchanged.
    """
    if len(records) != 4:
        raise ValueError(f"need exactly 4 count records, got {len(records)}")
    estimates = [estimate_correlation(r) for r in records]
    variances = [(1.0 - e * e) / r.total for e, r in zip(estimates, records)]
    s = abs(estimates[0] - estimates[1]) + abs(estimates[2] + estimates[3])
    return s, math.sqrt(sum(variances))
