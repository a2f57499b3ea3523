"""Per-region score state behind the gaze and proximity heuristics.

Gaze is a binary exposure signal averaged over a sliding window: each tick
the region under the gaze point scores 1, everything else 0, and a ring
buffer keeps the exact mean of the last window_ticks exposures. Proximity
is a pair of channels (user/robot) that are set to a fixed amplitude
around pick-up locations and decay exponentially back to zero.
"""
from __future__ import annotations

import numpy as np

from .config import PolicyParams
from .geometry import RegionGrid
from .workspace import Actor

__all__ = ["ScoreField", "classify_gaze", "classify_proximity",
           "GROUP", "USER", "ROBOT"]

# territory codes used on the wire and by the UI
GROUP, USER, ROBOT = 0, 1, 2


class ScoreField:
    def __init__(self, grid: RegionGrid, params: PolicyParams, tick_s: float,
                 track_gaze: bool = True, track_proximity: bool = True):
        self.grid = grid
        self.params = params
        self.tick_s = tick_s
        self.track_gaze = track_gaze
        self.track_proximity = track_proximity
        n = grid.n_regions

        self.window_ticks = max(1, round(params.gaze_window_s / tick_s))
        self._ring = np.full(self.window_ticks, -1, dtype=np.int32)
        self._ring_pos = 0
        self._gaze_counts = np.zeros(n, dtype=np.int64)

        self.user_score = np.zeros(n)
        self.robot_score = np.zeros(n)
        self._decay = 0.5 ** (tick_s / params.decay_half_life_s)

    # -- gaze -------------------------------------------------------------

    def observe_gaze(self, region: int | None) -> None:
        """Push one tick of exposure; region None means looking off-table."""
        old = self._ring[self._ring_pos]
        if old >= 0:
            self._gaze_counts[old] -= 1
        new = -1 if region is None else int(region)
        self._ring[self._ring_pos] = new
        if new >= 0:
            self._gaze_counts[new] += 1
        self._ring_pos = (self._ring_pos + 1) % self.window_ticks

    def gaze_means(self) -> np.ndarray:
        return self._gaze_counts / self.window_ticks

    # -- proximity --------------------------------------------------------

    def infuse(self, actor: Actor, x: float, y: float) -> None:
        """Mark a pick-up location: actor channel set to the amplitude over
        the nearby regions, the opposing channel zeroed there."""
        idx = self.grid.near(x, y, self.params.infusion_radius)
        amp = self.params.infusion_amplitude
        if actor is Actor.USER:
            self.user_score[idx] = amp
            self.robot_score[idx] = 0.0
        else:
            self.robot_score[idx] = amp
            self.user_score[idx] = 0.0

    def decay(self) -> None:
        self.user_score *= self._decay
        self.robot_score *= self._decay

    # -- per-tick update --------------------------------------------------

    def tick_update(self, pickups: list[tuple[Actor, float, float]],
                    gaze_region: int | None) -> None:
        """One tick of field dynamics, in a fixed order so that a replay
        reproduces the exact float stream: decay, then infusions in event
        order, then the gaze exposure."""
        if self.track_proximity:
            self.decay()
            for actor, x, y in pickups:
                self.infuse(actor, x, y)
        if self.track_gaze:
            self.observe_gaze(gaze_region)


def classify_gaze(means: np.ndarray, params: PolicyParams) -> np.ndarray:
    """Territory per region from gaze means: above theta_user belongs to
    the user, below theta_robot to the robot, anything between is group."""
    out = np.full(means.shape, GROUP, dtype=np.int8)
    out[means > params.classify_theta_user] = USER
    out[means < params.classify_theta_robot] = ROBOT
    return out


def classify_proximity(user_score: np.ndarray, robot_score: np.ndarray,
                       params: PolicyParams) -> np.ndarray:
    """Territory per region from proximity channels: the dominant channel
    above its threshold wins; both below reads as group space."""
    out = np.full(user_score.shape, GROUP, dtype=np.int8)
    user_hot = user_score > params.classify_theta_user
    robot_hot = robot_score > params.classify_theta_robot
    out[user_hot & (user_score >= robot_score)] = USER
    out[robot_hot & (robot_score > user_score)] = ROBOT
    return out
