"""Dataclass configuration shared across the simulator.

Coordinate frame: the table top is the unit square, in meters. The human
stands at the y=0 edge, the robot arm is mounted just past the opposite
edge at (0.5, 1.05). All distances are Euclidean in the table plane and
all times are seconds unless a field name says otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SimParams:
    """Geometry and timing constants for one simulated workspace."""

    tick_s: float = 0.05            # fixed step, 20 Hz
    table_w: float = 1.0
    table_h: float = 1.0
    grid_rows: int = 10
    grid_cols: int = 10
    block_radius: float = 0.04
    min_spawn_separation: float = 0.09   # center-to-center at spawn
    goal_clearance: float = 0.08         # spawns keep this far from structure bases
    grasp_radius: float = 0.05
    robot_base: tuple[float, float] = (0.5, 1.05)
    user_anchor: tuple[float, float] = (0.5, -0.05)  # off-table point gestures aim at
    user_home: tuple[float, float] = (0.5, 0.05)
    # bases sit in the robot's delivery band, past the table midline
    structure_bases: tuple[tuple[float, float], ...] = (
        (0.2, 0.6), (0.4, 0.6), (0.6, 0.6), (0.8, 0.6),
    )

    def __post_init__(self) -> None:
        if self.tick_s <= 0:
            raise ValueError("tick_s must be positive")
        if self.grid_rows < 1 or self.grid_cols < 1:
            raise ValueError("grid must have at least one tile")


@dataclass(frozen=True)
class MotionModel:
    """Robot arm motion and grasp reliability."""

    reach_speed: float = 0.25       # m/s, straight-line gripper speed
    pick_s: float = 1.0
    place_s: float = 1.0
    black_pick_success: float = 0.95

    def __post_init__(self) -> None:
        if self.reach_speed <= 0:
            raise ValueError("reach_speed must be positive")
        if not 0.0 <= self.black_pick_success <= 1.0:
            raise ValueError("black_pick_success must be a probability")


@dataclass(frozen=True)
class PolicyParams:
    """Tunables for the allocation techniques.

    The score-field constants (window, radius, amplitude, half-life) drive
    the gaze and proximity heuristics; the gesture constants drive the
    push-to-allocate detector; the band bounds define the static split of
    the table used by the fixed-territory technique.
    """

    gaze_window_s: float = 5.0
    infusion_radius: float = 0.15
    infusion_amplitude: float = 1.0
    decay_half_life_s: float = 10.0
    user_avoid_threshold: float = 0.5    # proximity: skip blocks the user owns this hard
    gesture_min_displacement: float = 0.15
    gesture_window_s: float = 1.0
    gesture_cone_half_angle_deg: float = 45.0
    menu_dwell_s: float = 0.8
    band_user_max: float = 0.35          # y below this is the user band
    band_robot_min: float = 0.65         # y above this is the robot band
    classify_theta_user: float = 0.3
    classify_theta_robot: float = 0.3
    voice_utterance_s: float = 0.5       # user is busy this long per spoken label

    def __post_init__(self) -> None:
        if not 0.0 < self.band_user_max < self.band_robot_min < 1.0:
            raise ValueError("territory bands must partition the table")
        for name in ("gaze_window_s", "infusion_radius", "decay_half_life_s",
                     "gesture_window_s", "menu_dwell_s"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_SIM = SimParams()
DEFAULT_MOTION = MotionModel()
DEFAULT_POLICY = PolicyParams()
