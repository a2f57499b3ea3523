"""Planar geometry and the rectangular region grid.

Regions are indexed row-major from the user edge: index = iy * cols + ix,
where ix counts tiles along x and iy along y. A point on the far boundary
(x == table width or y == table height) clamps into the last tile so that
region_of is total on the closed table square.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["Position", "RegionGrid", "dist", "clamp"]


def clamp(v: float, lo: float, hi: float) -> float:
    return lo if v < lo else hi if v > hi else v


def dist(ax: float, ay: float, bx: float, by: float) -> float:
    return math.hypot(bx - ax, by - ay)


@dataclass(frozen=True)
class Position:
    x: float
    y: float

    def distance_to(self, other: "Position") -> float:
        return math.hypot(other.x - self.x, other.y - self.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


class RegionGrid:
    """Uniform rows x cols tiling of the table."""

    def __init__(self, rows: int = 10, cols: int = 10,
                 width: float = 1.0, height: float = 1.0):
        if rows < 1 or cols < 1:
            raise ValueError("grid needs at least one tile per axis")
        self.rows = rows
        self.cols = cols
        self.width = width
        self.height = height
        self.tile_w = width / cols
        self.tile_h = height / rows
        self.n_regions = rows * cols
        cx = (np.arange(cols) + 0.5) * self.tile_w
        cy = (np.arange(rows) + 0.5) * self.tile_h
        gx, gy = np.meshgrid(cx, cy)            # row-major: iy varies slowest
        self.centers = np.column_stack([gx.ravel(), gy.ravel()])

    def tile_at(self, x: float, y: float) -> tuple[int, int]:
        """Tile (ix, iy) containing the point; boundary clamps inward."""
        ix = min(int(x / self.tile_w), self.cols - 1)
        iy = min(int(y / self.tile_h), self.rows - 1)
        return (max(ix, 0), max(iy, 0))

    def index_at(self, x: float, y: float) -> int:
        ix, iy = self.tile_at(x, y)
        return iy * self.cols + ix

    def tile_of_index(self, idx: int) -> tuple[int, int]:
        return (idx % self.cols, idx // self.cols)

    def center_of(self, idx: int) -> tuple[float, float]:
        return (float(self.centers[idx, 0]), float(self.centers[idx, 1]))

    def near(self, x: float, y: float, radius: float) -> np.ndarray:
        """Indices of regions whose center lies within radius of the point.

        The containing region is always part of the result, so the set is
        never empty. Indices come back sorted ascending.
        """
        d2 = (self.centers[:, 0] - x) ** 2 + (self.centers[:, 1] - y) ** 2
        hit = np.flatnonzero(d2 <= radius * radius)
        own = self.index_at(x, y)
        if own not in hit:
            hit = np.sort(np.append(hit, own))
        return hit
