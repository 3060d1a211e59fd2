"""
Consumed endurance from arm poses
=================================

This walkthrough computes consumed endurance (CE) for a handful of mid-air
arm poses and shows how the number reacts to posture and duration. CE is the
percent of the arm's fatigue budget a gesture burns: the ratio of how long
the arm was held up to how long it could have been held at that effort.
"""

import numpy as np

from menuperf import ArmFrame, ArmParams, consumed_endurance

# A pose stream is a list of timestamped shoulder/elbow/hand positions.
# Here the arm hangs straight down at the side: gravity produces no torque
# about the shoulder, so the gesture is free.
shoulder = np.array([0.0, 0.0, 1.4])


def straight_arm(angle_deg: float, duration: float, rate: float = 30.0):
    """Arm raised `angle_deg` from vertical, held still for `duration` s."""
    theta = np.radians(angle_deg)
    d = np.array([np.sin(theta), 0.0, -np.cos(theta)])
    hand = shoulder + 0.9 * d
    elbow = shoulder + 0.45 * d
    n = max(3, int(round(duration * rate)) + 1)
    return [
        ArmFrame(t=float(t), shoulder=shoulder, elbow=elbow, hand=hand)
        for t in np.linspace(0.0, duration, n)
    ]


hanging = consumed_endurance(straight_arm(0.0, 10.0))
print(f"hanging arm, 10 s: torque {hanging.avg_torque:.2f} N*m -> CE {hanging.ce:.2f}")

# Raising the arm moves its center of mass away from the line of gravity
# through the shoulder, so torque grows with the sine of the elevation.
print("\nelevation sweep, 10 s holds:")
for angle in (15, 30, 45, 60, 75, 90):
    result = consumed_endurance(straight_arm(angle, 10.0))
    print(
        f"  {angle:3d} deg: torque {result.avg_torque:5.2f} N*m"
        f"  strength {result.strength_pct:5.1f}%"
        f"  endurance {result.endurance:7.1f} s"
        f"  CE {result.ce:6.2f}"
    )

# Below 15% of maximum strength the endurance model says the pose can be
# held indefinitely, so CE stays at zero. Above it, CE grows linearly with
# duration: twice the hold, twice the consumed budget.
print("\nduration sweep at 60 deg:")
for duration in (2.0, 5.0, 10.0, 20.0):
    result = consumed_endurance(straight_arm(60.0, duration))
    print(f"  {duration:5.1f} s -> CE {result.ce:6.2f}")

# Arm parameters are adjustable; a heavier arm tires faster.
heavy = ArmParams(arm_mass=4.5, com_fraction=0.33, max_torque=30.0)
light = ArmParams(arm_mass=2.5, com_fraction=0.33, max_torque=30.0)
frames = straight_arm(60.0, 10.0)
print(
    f"\nsame pose, heavy vs light arm: "
    f"CE {consumed_endurance(frames, heavy).ce:.2f} vs {consumed_endurance(frames, light).ce:.2f}"
)
