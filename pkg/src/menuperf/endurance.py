"""Consumed-endurance (CE) workload metric from tracked arm-joint streams.

The arm is modeled as a single rigid segment with a parametric center of
mass. Per frame, the shoulder torque needed to hold the arm against gravity
and accelerate its center of mass is

    torque = | r x m (a - g) |,    r = com - shoulder,  g = (0, 0, -9.81)

The average torque over the stream, as a percentage s of the maximum
voluntary shoulder torque, feeds a Rohmert-type endurance law

    endurance(s) = 1236.5 / (s - 15)^0.618 - 72.5   seconds,  s > 15
    endurance(s) = +inf                              for s <= 15

and CE is the percentage of that endurance budget the interaction consumed:
100 * duration / endurance. Streams are resampled to a uniform rate (default
30 Hz, typical of depth cameras) by linear interpolation before the
acceleration differencing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "EnduranceError",
    "ArmFrame",
    "ArmParams",
    "CeResult",
    "GRAVITY",
    "DEFAULT_ARM_PARAMS",
    "arm_center_of_mass",
    "shoulder_torque",
    "endurance_seconds",
    "consumed_endurance",
]

GRAVITY = np.array([0.0, 0.0, -9.81])

# endurance law constants (Rohmert-type), strength threshold in percent
ENDURANCE_SCALE = 1236.5
ENDURANCE_EXPONENT = 0.618
ENDURANCE_OFFSET = 72.5
NO_FATIGUE_THRESHOLD_PCT = 15.0

# tracking sanity: relative spread of segment lengths tolerated across a stream
SEGMENT_LENGTH_TOLERANCE = 0.20


class EnduranceError(ValueError):
    """Raised for invalid arm streams (timestamps, frame counts, geometry)."""


@dataclass
class ArmFrame:
    """Timestamped 3D positions of shoulder, elbow and hand, gravity along -z."""

    t: float
    shoulder: np.ndarray
    elbow: np.ndarray
    hand: np.ndarray

    def __post_init__(self):
        self.shoulder = np.asarray(self.shoulder, dtype=float)
        self.elbow = np.asarray(self.elbow, dtype=float)
        self.hand = np.asarray(self.hand, dtype=float)
        for name in ("shoulder", "elbow", "hand"):
            if getattr(self, name).shape != (3,):
                raise EnduranceError(f"{name} must be a 3D point")


@dataclass
class ArmParams:
    """Anthropometric constants; per-user data, not universal."""

    arm_mass: float = 3.5  # kg
    com_fraction: float = 0.33  # of the shoulder->hand distance
    max_torque: float = 30.0  # N*m, maximum voluntary shoulder torque

    def __post_init__(self):
        if self.arm_mass <= 0 or self.max_torque <= 0:
            raise EnduranceError("arm_mass and max_torque must be positive")
        if not 0 < self.com_fraction < 1:
            raise EnduranceError("com_fraction must lie in (0, 1)")


DEFAULT_ARM_PARAMS = ArmParams()


@dataclass
class CeResult:
    avg_torque: float  # N*m
    strength_pct: float  # percent of max_torque
    endurance: float  # seconds, may be +inf
    ce: float  # percent of the endurance budget consumed
    duration: float = field(default=0.0)  # seconds of interaction


def arm_center_of_mass(frame: ArmFrame, params: ArmParams) -> np.ndarray:
    """COM of the rigid arm: shoulder + com_fraction * (hand - shoulder)."""
    return frame.shoulder + params.com_fraction * (frame.hand - frame.shoulder)


def _check_timestamps(times: np.ndarray) -> None:
    if np.any(np.diff(times) <= 0):
        raise EnduranceError("frame timestamps must be strictly increasing")


def shoulder_torque(prev: ArmFrame, cur: ArmFrame, nxt: ArmFrame, params: ArmParams) -> float:
    """Torque magnitude at `cur` from three consecutive frames.

    Acceleration of the center of mass is estimated by a central difference
    that tolerates unequal timestamp spacing.
    """
    times = np.array([prev.t, cur.t, nxt.t])
    _check_timestamps(times)
    coms = np.stack(
        [arm_center_of_mass(f, params) for f in (prev, cur, nxt)]
    )
    dt0 = cur.t - prev.t
    dt1 = nxt.t - cur.t
    accel = 2.0 * (
        coms[0] / (dt0 * (dt0 + dt1))
        - coms[1] / (dt0 * dt1)
        + coms[2] / (dt1 * (dt0 + dt1))
    )
    r = coms[1] - cur.shoulder
    torque_vec = np.cross(r, params.arm_mass * (accel - GRAVITY))
    return float(np.linalg.norm(torque_vec))


def endurance_seconds(avg_torque: float, max_torque: float) -> float:
    """Seconds a pose at this average torque can be held; +inf below threshold."""
    if max_torque <= 0:
        raise EnduranceError("max_torque must be positive")
    if avg_torque < 0:
        raise EnduranceError("avg_torque must be non-negative")
    s = 100.0 * avg_torque / max_torque
    if s <= NO_FATIGUE_THRESHOLD_PCT:
        return math.inf
    return max(
        0.0,
        ENDURANCE_SCALE / (s - NO_FATIGUE_THRESHOLD_PCT) ** ENDURANCE_EXPONENT - ENDURANCE_OFFSET,
    )


def _resample(frames: list[ArmFrame], rate: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Uniform-grid (times, shoulders, coms-source positions) spanning the stream.

    Returns times (n,), shoulder positions (n, 3) and hand positions (n, 3).
    The grid spans [t0, t1] exactly with spacing closest to 1/rate.
    """
    times = np.array([f.t for f in frames])
    duration = times[-1] - times[0]
    n = max(3, int(round(duration * rate)) + 1)
    grid = np.linspace(times[0], times[-1], n)
    shoulders = np.stack([f.shoulder for f in frames])
    hands = np.stack([f.hand for f in frames])
    sh = np.stack([np.interp(grid, times, shoulders[:, k]) for k in range(3)], axis=1)
    ha = np.stack([np.interp(grid, times, hands[:, k]) for k in range(3)], axis=1)
    return grid, sh, ha


def _check_segment_lengths(frames: list[ArmFrame]) -> None:
    upper = np.array([np.linalg.norm(f.shoulder - f.elbow) for f in frames])
    fore = np.array([np.linalg.norm(f.elbow - f.hand) for f in frames])
    for name, seg in (("shoulder-elbow", upper), ("elbow-hand", fore)):
        mean = seg.mean()
        if mean > 0 and (seg.max() - seg.min()) / mean >= SEGMENT_LENGTH_TOLERANCE:
            raise EnduranceError(
                f"{name} segment length varies by >= {SEGMENT_LENGTH_TOLERANCE:.0%} across the stream"
            )


def consumed_endurance(
    frames: list[ArmFrame], params: ArmParams = DEFAULT_ARM_PARAMS, rate: float = 30.0
) -> CeResult:
    """CE of a tracked interaction: 100 * duration / endurance(avg torque)."""
    if len(frames) < 3:
        raise EnduranceError(f"need at least 3 frames, got {len(frames)}")
    _check_timestamps(np.array([f.t for f in frames]))
    _check_segment_lengths(frames)

    grid, shoulders, hands = _resample(frames, rate)
    coms = shoulders + params.com_fraction * (hands - shoulders)
    dt = grid[1] - grid[0]
    accel = np.empty_like(coms)
    accel[1:-1] = (coms[2:] - 2.0 * coms[1:-1] + coms[:-2]) / dt**2
    # one-sided at the ends: nearest interior three-point estimate
    accel[0] = (coms[2] - 2.0 * coms[1] + coms[0]) / dt**2
    accel[-1] = (coms[-1] - 2.0 * coms[-2] + coms[-3]) / dt**2

    r = coms - shoulders
    torque = np.linalg.norm(np.cross(r, params.arm_mass * (accel - GRAVITY)), axis=1)
    duration = float(grid[-1] - grid[0])
    avg_torque = float(np.trapezoid(torque, grid) / duration)

    endurance = endurance_seconds(avg_torque, params.max_torque)
    if math.isinf(endurance) or duration == 0.0:
        ce = 0.0
    elif endurance == 0.0:
        ce = math.inf  # torque beyond the law's validity: budget exhausted immediately
    else:
        ce = 100.0 * duration / endurance
    return CeResult(
        avg_torque=avg_torque,
        strength_pct=100.0 * avg_torque / params.max_torque,
        endurance=endurance,
        ce=ce,
        duration=duration,
    )
