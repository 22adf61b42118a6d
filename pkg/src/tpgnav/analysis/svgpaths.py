"""Top-down trajectory drawings as standalone SVG documents.

Each trajectory is one polyline whose vertices are coloured from red
(earliest) to blue (latest); rendering approximates the per-vertex
gradient by drawing short polyline runs in quantized segment colours.
Walls, the goal marker and spawn points come from the map itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..env.types import AgentPose, LabyrinthMap

WALL_FILL = "#33312e"
GOAL_FILL = "#27a05c"
SPAWN_FILL = "#111111"


def _as_points(traj) -> list[tuple[float, float]]:
    if len(traj) and isinstance(traj[0], AgentPose):
        return [(p.x, p.y) for p in traj]
    arr = np.asarray(traj, dtype=np.float64)
    return [(float(x), float(y)) for x, y in arr[:, :2]]


def _vertex_color(i: int, n: int) -> tuple[int, int, int]:
    frac = i / (n - 1) if n > 1 else 0.0
    return (round(255 * (1.0 - frac)), 0, round(255 * frac))


@dataclass
class TrajectoryPolyline:
    """One trajectory as polyline data: vertices plus per-vertex colours."""

    points: list[tuple[float, float]]

    @property
    def vertex_count(self) -> int:
        return len(self.points)

    @property
    def vertex_colors(self) -> list[tuple[int, int, int]]:
        n = len(self.points)
        return [_vertex_color(i, n) for i in range(n)]


def trajectories_to_polylines(trajectories: Iterable) -> list[TrajectoryPolyline]:
    return [TrajectoryPolyline(_as_points(t)) for t in trajectories]


def _wall_rects(m: LabyrinthMap) -> list[tuple[float, float, float, float]]:
    """Merge wall-cell runs per row into (x, y, w, h) rects."""
    rects = []
    cs = m.cell_size
    for r in range(m.n_rows):
        c = 0
        while c < m.n_cols:
            if m.walls[r, c]:
                c0 = c
                while c < m.n_cols and m.walls[r, c]:
                    c += 1
                rects.append((c0 * cs, r * cs, (c - c0) * cs, cs))
            else:
                c += 1
    return rects


def render_trajectories(
    m: LabyrinthMap,
    trajectories: Sequence,
    stroke_width: float = 3.0,
    color_bins: int = 64,
) -> str:
    """SVG text for a map outline with time-coloured trajectory polylines."""
    polylines = trajectories_to_polylines(trajectories)
    w, h = m.width, m.height
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w:g} {h:g}" '
        f'width="{w:g}" height="{h:g}">',
        f'<rect x="0" y="0" width="{w:g}" height="{h:g}" fill="#f4efe6"/>',
    ]
    for x, y, rw, rh in _wall_rects(m):
        parts.append(
            f'<rect x="{x:g}" y="{y:g}" width="{rw:g}" height="{rh:g}" fill="{WALL_FILL}"/>'
        )
    if m.goal_xy is not None:
        gx, gy = m.goal_xy
        parts.append(
            f'<circle cx="{gx:g}" cy="{gy:g}" r="{m.cell_size:g}" fill="{GOAL_FILL}"/>'
        )
    for poly in polylines:
        pts = poly.points
        n_seg = len(pts) - 1
        if n_seg < 1:
            continue
        parts.append('<g fill="none" stroke-linecap="round" stroke-linejoin="round">')
        start = 0
        bin_of = lambda i: min(color_bins - 1, int((i + 0.5) / n_seg * color_bins))
        while start < n_seg:
            b = bin_of(start)
            end = start
            while end + 1 < n_seg and bin_of(end + 1) == b:
                end += 1
            frac = (b + 0.5) / color_bins
            color = (round(255 * (1.0 - frac)), 0, round(255 * frac))
            run = " ".join(f"{x:.1f},{y:.1f}" for x, y in pts[start : end + 2])
            parts.append(
                f'<polyline points="{run}" stroke="rgb({color[0]},{color[1]},{color[2]})" '
                f'stroke-width="{stroke_width:g}" stroke-opacity="0.55"/>'
            )
            start = end + 1
        parts.append("</g>")
        x0, y0 = pts[0]
        parts.append(f'<circle cx="{x0:.1f}" cy="{y0:.1f}" r="4" fill="{SPAWN_FILL}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_trajectories_svg(m: LabyrinthMap, trajectories: Sequence, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_trajectories(m, trajectories), encoding="utf-8")
    return path
