"""Phase-imprinted singlet correlations, CHSH optimization, and Bell angles.

The imprinted state is (|ud> - exp(-2i*g)|du>)/sqrt(2); the correlation of
two analyzers (a1, a2) and (b1, b2) on it is

    E = -cos a1 cos b1 - cos(a2 - b2 + 2 g) sin a1 sin b1,

so shifting the azimuthal difference by -2 g undoes the phase entirely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .states import MeasurementDirection, PairState

SQRT2 = math.sqrt(2.0)
TWO_SQRT2 = 2.0 * SQRT2

#: grid resolution of the brute-force optimizer, degrees
GRID_STEP_DEG = 0.5


@dataclass(frozen=True)
class BerryParameter:
    """The imprinted geometric phase g (the up-eigenstate Berry phase)."""

    gamma: float

    def __post_init__(self):
        if abs(self.gamma) > 2.0 * math.pi:
            raise ValueError(f"|gamma| must be <= 2*pi, got {self.gamma!r}")

    @property
    def tilt(self) -> float:
        """Field tilt angle with |gamma| = pi (1 - cos tilt)."""
        return math.acos(1.0 - abs(self.gamma) / math.pi)


@dataclass(frozen=True)
class BellSetting:
    """The four analyzer directions of a CHSH measurement."""

    a: MeasurementDirection
    a_prime: MeasurementDirection
    b: MeasurementDirection
    b_prime: MeasurementDirection


class BellAngles(NamedTuple):
    """Stationary polar angles (alpha'_1, beta_1, beta'_1), azimuths zero."""

    alpha_prime: float
    beta: float
    beta_prime: float


class GridMaxResult(NamedTuple):
    s_max: float
    angles: BellAngles


def singlet() -> PairState:
    """The antisymmetric Bell state (|ud> - |du>)/sqrt(2)."""
    return PairState([0.0, 1.0 / SQRT2, -1.0 / SQRT2, 0.0])


def psi_plus() -> PairState:
    """The symmetric Bell state (|ud> + |du>)/sqrt(2)."""
    return PairState([0.0, 1.0 / SQRT2, 1.0 / SQRT2, 0.0])


def imprint_berry(state: PairState, gamma: BerryParameter) -> PairState:
    """Apply the one-sided Berry phase and strip the global phase.

    The left qubit's up/down components pick up exp(+-i g).  The closed form
    (|ud> - exp(-2i g)|du>)/sqrt(2) is derived for the singlet; arbitrary
    states are accepted and transformed by the same one-sided unitary, but
    the usual interpretation applies to the singlet only.
    """
    g = gamma.gamma
    phase = np.exp(1j * np.array([g, g, -g, -g]))
    amps = phase * state.amplitudes
    # canonical global phase: first significant amplitude real and positive
    pivot = amps[np.argmax(np.abs(amps) > 1e-8)]
    amps = amps * np.exp(-1j * np.angle(pivot))
    return PairState(amps)


def _corr_terms(gamma, a: MeasurementDirection, b: MeasurementDirection) -> float:
    g = gamma.gamma if isinstance(gamma, BerryParameter) else float(gamma)
    return math.cos(a.polar) * math.cos(b.polar) + math.cos(
        a.azimuthal - b.azimuthal + 2.0 * g
    ) * math.sin(a.polar) * math.sin(b.polar)


def joint_probability(
    gamma: BerryParameter, a: MeasurementDirection, b: MeasurementDirection, signs: str
) -> float:
    """Probability of the outcome pair `signs` ("++", "+-", "-+" or "--")."""
    if signs not in ("++", "+-", "-+", "--"):
        raise ValueError(f"signs must be one of ++, +-, -+, --, got {signs!r}")
    parity = 1.0 if signs in ("++", "--") else -1.0
    return 0.25 * (1.0 - parity * _corr_terms(gamma, a, b))


def correlation(gamma: BerryParameter, a: MeasurementDirection, b: MeasurementDirection) -> float:
    """Joint expectation E(a, b) on the phase-imprinted singlet."""
    return -_corr_terms(gamma, a, b)


def s_terms(gamma: BerryParameter, setting: BellSetting) -> tuple[float, float]:
    """The two inner CHSH terms: f1 = E(a,b) - E(a,b'), f2 = E(a',b) + E(a',b')."""
    f1 = correlation(gamma, setting.a, setting.b) - correlation(gamma, setting.a, setting.b_prime)
    f2 = correlation(gamma, setting.a_prime, setting.b) + correlation(
        gamma, setting.a_prime, setting.b_prime
    )
    return f1, f2


def s_function(gamma: BerryParameter, setting: BellSetting) -> float:
    """CHSH value S = |f1| + |f2| (local-realism bound 2, Tsirelson bound 2*sqrt(2))."""
    f1, f2 = s_terms(gamma, setting)
    return abs(f1) + abs(f2)


def compensated_setting(gamma: BerryParameter) -> BellSetting:
    """Bell angles with the azimuthal shift that undoes the phase: S = 2*sqrt(2)."""
    g = gamma.gamma
    return BellSetting(
        a=MeasurementDirection(0.0, 0.0),
        a_prime=MeasurementDirection(0.5 * math.pi, 0.0),
        b=MeasurementDirection(0.25 * math.pi, 2.0 * g),
        b_prime=MeasurementDirection(0.75 * math.pi, 2.0 * g),
    )


def bell_angles(gamma: BerryParameter, branch: str = "f1neg_f2neg") -> BellAngles:
    """Stationary Bell angles in the zero-azimuth regime, beta_1 = +-arctan(cos 2g).

    The plus sign belongs to the branch with f1 < 0 and f2 < 0
    ("f1neg_f2neg"), the minus sign to f1 < 0 and f2 > 0 ("f1neg_f2pos").
    Returned as raw polar angles; beta' = pi - beta may exceed pi.
    """
    if branch == "f1neg_f2neg":
        beta = math.atan(math.cos(2.0 * gamma.gamma))
    elif branch == "f1neg_f2pos":
        beta = -math.atan(math.cos(2.0 * gamma.gamma))
    else:
        raise ValueError(f"unknown branch {branch!r}")
    return BellAngles(alpha_prime=0.5 * math.pi, beta=beta, beta_prime=math.pi - beta)


def setting_from_polar(alpha_prime: float, beta: float, beta_prime: float) -> BellSetting:
    """Zero-azimuth BellSetting with a fixed at the pole."""
    return BellSetting(
        a=MeasurementDirection(0.0, 0.0),
        a_prime=MeasurementDirection(alpha_prime, 0.0),
        b=MeasurementDirection(beta, 0.0),
        b_prime=MeasurementDirection(beta_prime, 0.0),
    )


def closed_form_max_s(gamma: BerryParameter) -> float:
    """Conjectured zero-azimuth maximum 2*sqrt(1 + cos^2 2g) (grid-confirmed)."""
    c = math.cos(2.0 * gamma.gamma)
    return 2.0 * math.sqrt(1.0 + c * c)


def _s_zero_azimuth(c: float, alpha: float, beta: float, beta_p: float) -> float:
    f1 = -math.cos(beta) + math.cos(beta_p)
    f2 = -c * math.sin(alpha) * (math.sin(beta) + math.sin(beta_p)) - math.cos(alpha) * (
        math.cos(beta) + math.cos(beta_p)
    )
    return abs(f1) + abs(f2)


def _golden_max(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    """Golden-section maximizer on [lo, hi]; returns the argmax."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    inv_phi_sq = (3.0 - math.sqrt(5.0)) / 2.0
    dist = hi - lo
    if dist <= tol:
        return 0.5 * (lo + hi)
    n = int(math.ceil(math.log(tol / dist) / math.log(inv_phi)))
    c = lo + inv_phi_sq * dist
    d = lo + inv_phi * dist
    yc, yd = f(c), f(d)
    for _ in range(n - 1):
        if yc > yd:
            hi, d, yd = d, c, yc
            dist *= inv_phi
            c = lo + inv_phi_sq * dist
            yc = f(c)
        else:
            lo, c, yc = c, d, yd
            dist *= inv_phi
            d = lo + inv_phi * dist
            yd = f(d)
    return 0.5 * (lo + d) if yc > yd else 0.5 * (c + hi)


def _alpha_grid_size(step: float) -> int:
    return int(round(math.pi / step)) + 1  # grid 0 .. pi inclusive


def _best_alpha(c: float, beta: float, beta_p: float, branch: str | None) -> float:
    """Exact maximizer of |f2| over alpha in [0, pi] at fixed (beta, beta').

    f2 = -amp * cos(alpha - phi) is sinusoidal in alpha, so the optimum is
    closed-form; with a branch constraint the sign of f2 is pinned and the
    feasible optimum is either the (folded) extremum or a boundary point.
    """
    u = math.sin(beta) + math.sin(beta_p)
    v = math.cos(beta) + math.cos(beta_p)
    phi = math.atan2(c * u, v)
    if branch is None:
        return min(max(phi % math.pi, 0.0), math.pi)
    target = (phi if branch == "f1neg_f2neg" else phi + math.pi) % (2.0 * math.pi)
    if target <= math.pi:
        return target
    # extremum outside [0, pi]: the feasible boundary with the right f2 sign
    want_neg = branch == "f1neg_f2neg"
    best, best_val = 0.0, -math.inf
    for cand in (0.0, math.pi):
        f2 = -math.hypot(c * u, v) * math.cos(cand - phi)
        if (f2 <= 0.0) == want_neg and abs(f2) > best_val:
            best, best_val = cand, abs(f2)
    return best


def _refine(
    c: float,
    alpha: float,
    beta: float,
    beta_p: float,
    step: float,
    sweeps: int = 25,
    branch: str | None = None,
):
    """Polish a grid argmax: closed-form alpha, golden-section beta sweeps.

    Each sweep re-centers the +-step windows on the current point, so the
    polish can track a diagonal ridge across several grid cells; it stops
    early once a full sweep no longer improves the value.  The alpha
    coordinate is reset to its exact conditional optimum every sweep, which
    avoids stalling on the |f2| kink.
    """
    # the ridge of S runs diagonally in (beta, beta'); in the rotated
    # coordinates s = (beta + beta')/2, d = (beta' - beta)/2 the landscape
    # separates and coordinate descent converges instead of crawling
    s = 0.5 * (beta + beta_p)
    d = 0.5 * (beta_p - beta)

    def profile(s_val, d_val):
        # alpha eliminated: its conditional optimum is closed-form
        b1, b2 = s_val - d_val, s_val + d_val
        return _s_zero_azimuth(c, _best_alpha(c, b1, b2, branch), b1, b2)

    value = profile(s, d)
    for _ in range(sweeps):
        s = _golden_max(lambda x: profile(x, d), s - step, s + step)
        d = _golden_max(lambda x: profile(s, x), d - step, d + step)
        new_value = profile(s, d)
        if new_value - value < 1e-13:
            break
        value = new_value
    a = _best_alpha(c, s - d, s + d, branch)
    return [a, s - d, s + d]


def grid_search_max_s(
    gamma: BerryParameter,
    step_deg: float = GRID_STEP_DEG,
    branch: str | None = None,
    refine_sweeps: int = 25,
) -> GridMaxResult:
    """Brute-force maximum of S over (alpha'_1, beta_1, beta'_1), azimuths zero.

    Exhaustive grid at `step_deg` resolution, then golden-section refinement
    on each coordinate.  The alpha'_1 axis is maximized in closed form over
    the same grid points (|f2| is sinusoidal in alpha'_1), which is exactly
    equivalent to enumerating it.  With `branch` set, the search is
    restricted to cells with f1 < 0 and the requested sign of f2, which
    isolates the two stationary branches of the Bell angles.

    Deterministic: ties resolve to the lowest flat index (beta-major order).
    """
    c = math.cos(2.0 * gamma.gamma)
    step = math.radians(step_deg)
    n_alpha = _alpha_grid_size(step)
    beta = np.arange(int(round(-0.5 * math.pi / step)), int(round(math.pi / step)) + 1) * step
    beta_p = np.arange(int(round(-0.5 * math.pi / step)), int(round(1.5 * math.pi / step)) + 1) * step

    sb, cb = np.sin(beta)[:, None], np.cos(beta)[:, None]
    sbp, cbp = np.sin(beta_p)[None, :], np.cos(beta_p)[None, :]
    u = sb + sbp
    v = cb + cbp
    f1 = -cb + cbp
    amp = np.hypot(c * u, v)
    phi = np.arctan2(c * u, v)  # f2 = -amp * cos(alpha - phi)

    if branch is None:
        # best grid alpha for |f2|: nearest grid point to phi mod pi
        m = np.mod(phi, math.pi)
        idx = np.clip(np.rint(m / step), 0, n_alpha - 1)
        alpha_best = idx * step
        best_f2 = amp * np.abs(np.cos(alpha_best - phi))
        total = np.abs(f1) + best_f2
    elif branch in ("f1neg_f2neg", "f1neg_f2pos"):
        want_neg = branch == "f1neg_f2neg"
        # f2 < 0 needs cos(alpha - phi) > 0: best alpha near phi mod 2*pi;
        # f2 > 0 needs the antipode.  Grid candidates: that point (when it
        # falls inside [0, pi]) plus the two boundary points.
        target = np.mod(phi if want_neg else phi + math.pi, 2.0 * math.pi)
        idx = np.clip(np.rint(target / step), 0, n_alpha - 1)
        cands = [idx * step, np.zeros_like(target), np.full_like(target, math.pi)]
        best_f2 = np.full(amp.shape, -np.inf)
        alpha_best = np.zeros(amp.shape)
        sign = -1.0 if want_neg else 1.0
        for cand in cands:
            f2 = -amp * np.cos(cand - phi)
            ok = sign * f2 >= 0.0
            value = np.where(ok, np.abs(f2), -np.inf)
            better = value > best_f2
            best_f2 = np.where(better, value, best_f2)
            alpha_best = np.where(better, cand, alpha_best)
        total = np.where(f1 < 0.0, np.abs(f1) + best_f2, -np.inf)
    else:
        raise ValueError(f"unknown branch {branch!r}")

    flat = int(np.argmax(total))
    i, j = np.unravel_index(flat, total.shape)
    alpha0 = float(alpha_best[i, j])
    refined = _refine(c, alpha0, float(beta[i]), float(beta_p[j]), step, refine_sweeps, branch)
    s_val = _s_zero_azimuth(c, *refined)
    return GridMaxResult(s_val, BellAngles(*refined))


def max_s(gamma: BerryParameter, method: str = "analytic") -> float:
    """Maximal zero-azimuth CHSH value, by stationary angles or brute force."""
    if method == "analytic":
        ang = bell_angles(gamma, "f1neg_f2neg")
        return s_function(gamma, setting_from_polar(*ang))
    if method == "grid":
        return grid_search_max_s(gamma).s_max
    raise ValueError(f"unknown method {method!r}")
