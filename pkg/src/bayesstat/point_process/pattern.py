"""Planar point patterns observed in a rectangular window."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from ..empirical import nn_distances
from ..errors import InputError


@dataclass(frozen=True)
class Window:
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise InputError("window must have positive area")

    @property
    def area(self) -> float:
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    def expanded(self, margin: float) -> "Window":
        return Window(self.x0 - margin, self.x1 + margin, self.y0 - margin, self.y1 + margin)

    def contains(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=np.float64).reshape(-1, 2)
        return ((pts[:, 0] >= self.x0) & (pts[:, 0] <= self.x1)
                & (pts[:, 1] >= self.y0) & (pts[:, 1] <= self.y1))

    def uniform(self, n: int, rng: np.random.Generator) -> np.ndarray:
        u = rng.random((n, 2))
        return np.column_stack([self.x0 + u[:, 0] * (self.x1 - self.x0),
                                self.y0 + u[:, 1] * (self.y1 - self.y0)])

    def shifted(self, dx: float, dy: float) -> "Window":
        return Window(self.x0 + dx, self.x1 + dx, self.y0 + dy, self.y1 + dy)


@dataclass(frozen=True)
class PointPattern:
    window: Window
    points: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64).reshape(-1, 2)
        if not self.window.contains(pts).all():
            raise InputError("all points must lie inside the window")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return len(self.points)

    @cached_property
    def nn(self) -> np.ndarray:
        return nn_distances(self.points)

    @property
    def intensity(self) -> float:
        return self.n / self.window.area

    def shifted(self, dx: float, dy: float) -> "PointPattern":
        return PointPattern(self.window.shifted(dx, dy), self.points + np.array([dx, dy]))


def write_pattern(pattern: PointPattern, path) -> None:
    w = pattern.window
    with open(path, "w") as fh:
        fh.write(f"# window {float(w.x0)!r} {float(w.x1)!r} {float(w.y0)!r} {float(w.y1)!r}\n")
        fh.write("x,y\n")
        for x, y in pattern.points:
            fh.write(f"{float(x)!r},{float(y)!r}\n")


def read_pattern(path) -> PointPattern:
    window = None
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if parts and parts[0] == "window":
                if len(parts) != 5:
                    raise InputError("window header needs four numbers")
                window = Window(*map(float, parts[1:]))
            continue
        if line.lower().replace(" ", "") == "x,y":
            continue
        try:
            x, y = (float(v) for v in line.split(","))
        except ValueError as exc:
            raise InputError(f"bad point row: {line!r}") from exc
        rows.append((x, y))
    pts = np.array(rows, dtype=np.float64).reshape(-1, 2)
    if window is None:
        if len(pts) == 0:
            raise InputError("no window header and no points")
        warnings.warn("no window header; using the bounding box of the points")
        window = Window(pts[:, 0].min(), pts[:, 0].max(), pts[:, 1].min(), pts[:, 1].max())
    return PointPattern(window, pts)
