"""Comparison metrics computed from a :class:`SimulationTrace`.

All functions are pure: they only read the trace columns.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import DisturbanceBeforeSettling, TraceError

DEFAULT_BAND_PCT = 2.0
NEVER = math.inf


def _window(trace, t_stop):
    t = np.asarray(trace.t, dtype=float)
    if t_stop is None:
        return slice(0, t.size)
    return slice(0, int(np.searchsorted(t, t_stop, side="left")))


def _entry_time(t, err, band):
    """Time after which ``err`` stays within ``band`` until the end of ``t``.

    The crossing between the last out-of-band sample and its successor is
    linearly interpolated. Returns ``NEVER`` if the final sample is outside.
    """
    outside = np.flatnonzero(err > band)
    if outside.size == 0:
        return float(t[0])
    j = int(outside[-1])
    if j == t.size - 1:
        return NEVER
    e0, e1 = float(err[j]), float(err[j + 1])
    frac = (e0 - band) / (e0 - e1)
    return float(t[j] + frac * (t[j + 1] - t[j]))


def settling_time(trace, target: float, band_pct: float = DEFAULT_BAND_PCT,
                  t_stop: Optional[float] = None) -> float:
    """Earliest time after which ``|omega - target| <= band_pct% * target``.

    Only samples before ``t_stop`` are considered (use the disturbance onset
    to exclude the disturbed part of a run). Returns ``inf`` if the speed is
    outside the band at the end of the window.
    """
    if len(trace) == 0:
        raise TraceError("settling time of an empty trace")
    if not target > 0.0:
        raise TraceError(f"settling time needs a positive target, got {target!r}")
    win = _window(trace, t_stop)
    t = np.asarray(trace.t, dtype=float)[win]
    if t.size == 0:
        raise TraceError("no samples before t_stop")
    err = np.abs(np.asarray(trace.omega, dtype=float)[win] - target)
    return _entry_time(t, err, band_pct / 100.0 * target)


def overshoot_pct(trace, target: float, t_stop: Optional[float] = None) -> float:
    win = _window(trace, t_stop)
    omega = np.asarray(trace.omega, dtype=float)[win]
    if omega.size == 0:
        return 0.0
    return max(0.0, 100.0 * (float(np.max(omega)) - target) / target)


class DropResult(NamedTuple):
    drop_pct: float
    recovery_time: float


def disturbance_drop(trace, target: float, t_on: float,
                     band_pct: float = DEFAULT_BAND_PCT) -> DropResult:
    """Worst speed dip after ``t_on`` and the time to get back into the band.

    Raises
    ------
    DisturbanceBeforeSettling
        The last sample before ``t_on`` is already outside the band.
    """
    t = np.asarray(trace.t, dtype=float)
    omega = np.asarray(trace.omega, dtype=float)
    if t.size == 0 or not t[0] <= t_on <= t[-1]:
        raise TraceError(f"t_on={t_on!r} is outside the trace")
    band = band_pct / 100.0 * target
    k = int(np.searchsorted(t, t_on, side="left"))
    before = k - 1 if k > 0 else 0
    if abs(omega[before] - target) > band:
        raise DisturbanceBeforeSettling(
            f"speed {omega[before]:.6g} rad/s is outside the {band_pct}% band of "
            f"{target:.6g} rad/s when the disturbance starts at t={t_on:.6g} s"
        )
    after = slice(k, t.size)
    drop = 100.0 * (target - float(np.min(omega[after]))) / target
    drop = min(100.0, max(0.0, drop))
    err = np.abs(omega[after] - target)
    recovery = _entry_time(t[after], err, band) - t_on if np.any(err > band) else 0.0
    return DropResult(drop, recovery)


class Effort(NamedTuple):
    rms: float
    peak: float


def control_effort(trace) -> Effort:
    u = np.asarray(trace.u, dtype=float)
    if u.size == 0:
        raise TraceError("control effort of an empty trace")
    return Effort(float(np.sqrt(np.mean(u * u))), float(np.max(np.abs(u))))


class Chattering(NamedTuple):
    switch_count: int
    switch_rate: float


def chattering_metrics(trace) -> Chattering:
    """Sign changes of the switching component ``u - u_eq``.

    Zero samples are skipped, so ``+, 0, -`` counts as one switch.
    """
    t = np.asarray(trace.t, dtype=float)
    if t.size == 0:
        raise TraceError("chattering metrics of an empty trace")
    sw = np.sign(np.asarray(trace.u, dtype=float) - np.asarray(trace.u_eq, dtype=float))
    sw = sw[sw != 0.0]
    count = int(np.count_nonzero(sw[1:] != sw[:-1]))
    duration = float(t[-1] - t[0])
    rate = count / duration if duration > 0.0 else 0.0
    return Chattering(count, rate)


@dataclass(frozen=True)
class Metrics:
    settling_time: float
    overshoot_pct: float
    dist_drop_pct: float
    recovery_time: float
    control_rms: float
    control_peak: float
    switch_count: int
    switch_rate: float

    def as_dict(self) -> dict:
        return asdict(self)


def compute_metrics(trace, scenario, band_pct: float = DEFAULT_BAND_PCT) -> Metrics:
    """All comparison metrics for a run of ``scenario``.

    Settling and overshoot use the pre-disturbance window; without a
    disturbance the drop and recovery are reported as zero.
    """
    target = scenario.target_speed
    profile = scenario.disturbance
    t_stop = profile.t_on if profile.active else None
    settle = settling_time(trace, target, band_pct, t_stop=t_stop)
    over = overshoot_pct(trace, target, t_stop=t_stop)
    if profile.active:
        drop = disturbance_drop(trace, target, profile.t_on, band_pct)
    else:
        drop = DropResult(0.0, 0.0)
    effort = control_effort(trace)
    chat = chattering_metrics(trace)
    return Metrics(settle, over, drop.drop_pct, drop.recovery_time,
                   effort.rms, effort.peak, chat.switch_count, chat.switch_rate)
