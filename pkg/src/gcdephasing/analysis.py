"""Regime classification of correlation trajectories.

Four labels: time-invariant, sudden death (the measure hits zero at finite
time and stays there), freezing (decay onto a nonzero plateau) and plain
decay (anything else, typically an asymptotic approach to zero).
"""
import enum
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np

from .correlations import lqu, negativity
from .dynamics import Trajectory, as_orientation, asymptotic_state, evolve_exact
from .errors import ConfigError, InsufficientSamples, NonUniformGrid, ParamOutOfRange
from .states import pure_density, schmidt_state

MIN_SAMPLES = 100
MEASURES = {"negativity": negativity, "lqu": lqu}


class Regime(str, enum.Enum):
    SUDDEN_DEATH = "SuddenDeath"
    FREEZING = "Freezing"
    TIME_INVARIANT = "TimeInvariant"
    PLAIN_DECAY = "PlainDecay"


class Fate(str, enum.Enum):
    SUDDEN_DEATH_FORCED = "SuddenDeath-forced"
    FREEZING_POSSIBLE = "Freezing-possible"


@dataclass(frozen=True)
class ClassifierConfig:
    zero_threshold: float = 1e-8
    invariance_tolerance: float = 1e-6
    slope_threshold: float = 1e-4  # per unit tau
    horizon: float = 20.0
    confirm_window: float = 2.0

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not (isinstance(value, (int, float)) and np.isfinite(value) and value > 0):
                raise ConfigError(f"classifier.{name} must be a positive number, got {value!r}")
        if self.confirm_window >= self.horizon:
            raise ConfigError("classifier.confirm_window must be smaller than classifier.horizon")


@dataclass(frozen=True)
class RegimeLabel:
    kind: Regime
    sudden_death_time: Optional[float] = None
    plateau_value: Optional[float] = None
    onset_time: Optional[float] = None
    initial_value: Optional[float] = None
    peak_value: Optional[float] = None
    rises_first: bool = False  # peak exceeds the initial value before the late window

    def to_dict(self):
        d = asdict(self)
        d["kind"] = self.kind.value
        return d


def _measure_fn(measure: str) -> Callable:
    try:
        return MEASURES[measure]
    except KeyError:
        raise ConfigError(f"unknown measure {measure!r}; expected one of {sorted(MEASURES)}") from None


def _bisect_below(f, lo, hi, threshold, tol=1e-6):
    """Shrink [lo, hi] with f(lo) >= threshold > f(hi) to width <= tol; return the midpoint."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) < threshold:
            hi = mid
        else:
            lo = mid
    return float(0.5 * (lo + hi))


def _late_slope(t, f, start):
    mask = t >= start
    if mask.sum() < 2:
        mask[-2:] = True
    # least-squares line through the late window
    return float(np.polyfit(t[mask], f[mask], 1)[0])


def classify(series: Trajectory, measure: str = "negativity",
             config: ClassifierConfig = ClassifierConfig()) -> RegimeLabel:
    fn = _measure_fn(measure)
    t = np.asarray(series.times, dtype=float)
    f = np.asarray(series.measure(measure), dtype=float)
    if len(t) < MIN_SAMPLES:
        raise InsufficientSamples(f"need >= {MIN_SAMPLES} samples, got {len(t)}")
    dt = np.diff(t)
    if np.max(np.abs(dt - dt.mean())) > 1e-9 * max(1.0, t[-1]):
        raise NonUniformGrid("classification needs a uniform time grid")
    if t[0] != 0.0 or t[-1] < config.horizon * (1 - 1e-12):
        raise InsufficientSamples(f"series covers [{t[0]}, {t[-1]}], need [0, {config.horizon}]")

    # only the classification horizon is used
    keep = t <= config.horizon * (1 + 1e-12)
    t, f = t[keep], f[keep]
    f0 = float(f[0])
    late_start = 0.9 * config.horizon
    early = t < late_start
    peak = float(f[early].max())
    common = dict(initial_value=f0, peak_value=peak,
                  rises_first=bool(peak > f0 + config.invariance_tolerance))

    if np.max(np.abs(f - f0)) <= config.invariance_tolerance:
        return RegimeLabel(Regime.TIME_INVARIANT, plateau_value=f0, **common)

    thr = config.zero_threshold
    below = f < thr
    if f0 >= thr and below.any():
        k = int(np.argmax(below))
        window = (t >= t[k]) & (t <= t[k] + config.confirm_window)
        if below[window].all() and t[k] + config.confirm_window <= t[-1]:
            rho0, n = series.rho0, series.orientation
            tau_star = _bisect_below(lambda s: fn(evolve_exact(rho0, n, s)), t[k - 1], t[k], thr)
            return RegimeLabel(Regime.SUDDEN_DEATH, sudden_death_time=tau_star, **common)

    slope = _late_slope(t, f, late_start)
    plateau = float(f[-1])
    grad = np.gradient(f, t)
    # a slow approach to zero can look flat at the horizon; the exact limit decides
    limit = fn(asymptotic_state(series.rho0, series.orientation))
    flat_late = abs(slope) <= config.slope_threshold
    moved_early = np.any(np.abs(grad[early]) > config.slope_threshold)
    if flat_late and moved_early and plateau > thr and limit > thr:
        steep = np.nonzero(np.abs(grad) > config.slope_threshold)[0]
        onset = float(t[min(steep[-1] + 1, len(t) - 1)])
        return RegimeLabel(Regime.FREEZING, plateau_value=plateau, onset_time=onset, **common)

    return RegimeLabel(Regime.PLAIN_DECAY, plateau_value=plateau, **common)


def sudden_death_time(rho0, n, config: ClassifierConfig = ClassifierConfig(),
                      measure: str = "negativity", scan_step: float = 0.05,
                      max_horizon: float = 1e3) -> Optional[float]:
    """First tau at which the measure drops below ``zero_threshold``, to +-1e-6.

    Returns 0.0 for an initially vanishing measure and ``None`` when the
    asymptotic value stays above the threshold or no crossing is found
    before ``max_horizon``.
    """
    fn = _measure_fn(measure)
    n = as_orientation(n)
    thr = config.zero_threshold
    if fn(rho0) < thr:
        return 0.0
    if fn(asymptotic_state(rho0, n)) > thr:
        return None
    horizon = config.horizon
    lo = 0.0
    while lo < max_horizon:
        grid = np.arange(lo + scan_step, horizon + 0.5 * scan_step, scan_step)
        for s in grid:
            if fn(evolve_exact(rho0, n, s)) < thr:
                return _bisect_below(lambda x: fn(evolve_exact(rho0, n, x)), s - scan_step, s, thr)
        lo = grid[-1] if len(grid) else horizon
        horizon *= 2
    return None


def asymptotic_correlations(rho0, n):
    """(negativity, lqu) of the infinite-time state."""
    rho_inf = asymptotic_state(rho0, n)
    return negativity(rho_inf), lqu(rho_inf)


def schmidt_fate(kind: int, alpha: float, n, config: ClassifierConfig = ClassifierConfig()) -> Fate:
    """Whether entanglement of the pure Schmidt state must die for direction ``n``."""
    if not 0.0 < alpha < 1.0:
        raise ParamOutOfRange("alpha", alpha, "0 < alpha < 1")
    rho0 = pure_density(schmidt_state(kind, alpha))
    neg_inf, _ = asymptotic_correlations(rho0, n)
    return Fate.FREEZING_POSSIBLE if neg_inf > config.zero_threshold else Fate.SUDDEN_DEATH_FORCED
