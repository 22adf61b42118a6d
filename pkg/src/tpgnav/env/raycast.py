"""First-person raycast renderer.

One ray per pixel column is cast through a flat camera plane spanning the
horizontal field of view; each column shows a wall slice whose height is
inversely proportional to the perpendicular hit distance. Wall intensity
is the hit surface's base shade, modulated by that surface's vertical
stripe pattern and attenuated with distance. Floor and ceiling are flat
shades. The goal vest, when present, unoccluded and inside the view, is
drawn as a full-bright vertical bar resting on the floor line.

Everything is deterministic in (map, pose, width, height, fov).
"""

from __future__ import annotations

import functools
import math

import numpy as np
from numba import njit

from .types import DEFAULT_FOV_DEG, AgentPose, Frame, LabyrinthMap

FLOOR_SHADE = 0.30
CEILING_SHADE = 0.12
ATTENUATION_PER_CELL = 0.05
STRIPE_DIM = 0.78  # dark stripe = base shade times this
VEST_INTENSITY = 1.0
VEST_HALF_WIDTH_CELLS = 0.3
VEST_HEIGHT_FRAC = 0.55  # of the wall height at the vest's depth

_GOLDEN = 0.6180339887498949


@functools.lru_cache(maxsize=None)
def shade_tables(max_surface: int) -> tuple[np.ndarray, np.ndarray]:
    """Base shade and stripe count per surface class, 0..max_surface.

    Derived from the surface index alone so any surface id renders the
    same everywhere (labyrinth walls and probe-room imitations alike).
    """
    ids = np.arange(max_surface + 1, dtype=np.float64)
    base = 0.45 + 0.45 * ((ids * _GOLDEN) % 1.0)
    base[0] = 0.5  # unassigned interior walls, normally never visible
    stripes = (2 + (np.arange(max_surface + 1) * 3) % 5).astype(np.int64)
    return base, stripes


@njit(cache=True, nogil=True)
def _render_into(
    walls,
    surface,
    cell_size,
    base_shade,
    stripe_count,
    px,
    py,
    heading_rad,
    fov_rad,
    has_goal,
    goal_x,
    goal_y,
    out,
    zbuf,
    width,
    height,
):
    # ``out`` is the flat row-major pixel buffer (length width * height),
    # exactly the attribute vector programs index.
    n_rows, n_cols = walls.shape
    pxc = px / cell_size
    pyc = py / cell_size
    dir_x = np.cos(heading_rad)
    dir_y = np.sin(heading_rad)
    plane_scale = np.tan(fov_rad * 0.5)
    plane_x = -dir_y * plane_scale
    plane_y = dir_x * plane_scale
    half_h = height * 0.5

    for col in range(width):
        cam = 2.0 * (col + 0.5) / width - 1.0
        rdx = dir_x + plane_x * cam
        rdy = dir_y + plane_y * cam
        delta_x = abs(1.0 / rdx) if rdx != 0.0 else 1e30
        delta_y = abs(1.0 / rdy) if rdy != 0.0 else 1e30
        map_c = int(pxc)
        map_r = int(pyc)
        if rdx < 0.0:
            step_c = -1
            side_x = (pxc - map_c) * delta_x
        else:
            step_c = 1
            side_x = (map_c + 1.0 - pxc) * delta_x
        if rdy < 0.0:
            step_r = -1
            side_y = (pyc - map_r) * delta_y
        else:
            step_r = 1
            side_y = (map_r + 1.0 - pyc) * delta_y

        hit = False
        side = 0
        for _ in range(n_rows * n_cols):
            if side_x < side_y:
                side_x += delta_x
                map_c += step_c
                side = 0
            else:
                side_y += delta_y
                map_r += step_r
                side = 1
            if map_r < 0 or map_c < 0 or map_r >= n_rows or map_c >= n_cols:
                break
            if walls[map_r, map_c]:
                hit = True
                break

        if hit:
            if side == 0:
                perp = (map_c - pxc + (1 - step_c) * 0.5) / rdx
            else:
                perp = (map_r - pyc + (1 - step_r) * 0.5) / rdy
            if perp < 1e-6:
                perp = 1e-6
        else:
            perp = 1e30
        zbuf[col] = perp

        line_h = int(height / perp + 0.5)
        y0 = (height - line_h) // 2
        y1 = y0 + line_h - 1
        wall_top = max(0, y0)
        wall_bot = min(height - 1, y1)

        if hit:
            surf = surface[map_r, map_c]
            if side == 0:
                along = pyc + perp * rdy
            else:
                along = pxc + perp * rdx
            u = along - math.floor(along)
            stripe_bit = int(u * stripe_count[surf]) % 2
            shade = base_shade[surf]
            if stripe_bit == 1:
                shade *= STRIPE_DIM
            shade *= 1.0 / (1.0 + ATTENUATION_PER_CELL * perp)
            if shade > 1.0:
                shade = 1.0
        else:
            shade = 0.0
            wall_top = height // 2
            wall_bot = wall_top - 1  # nothing: floor/ceiling split only

        for row in range(0, min(wall_top, height)):
            out[row * width + col] = CEILING_SHADE
        for row in range(wall_top, wall_bot + 1):
            out[row * width + col] = shade
        for row in range(wall_bot + 1, height):
            out[row * width + col] = FLOOR_SHADE

    if has_goal:
        # Project the vest into camera space; columns it covers get a
        # bright bar wherever it is nearer than the wall behind it.
        gx = goal_x / cell_size - pxc
        gy = goal_y / cell_size - pyc
        inv_det = 1.0 / (plane_x * dir_y - dir_x * plane_y)
        cam_x = inv_det * (dir_y * gx - dir_x * gy)
        depth = inv_det * (-plane_y * gx + plane_x * gy)
        if depth > 0.05:
            centre_col = (width * 0.5) * (1.0 + cam_x / depth)
            half_w_px = (VEST_HALF_WIDTH_CELLS / depth) * (width * 0.5) / plane_scale
            c0 = int(centre_col - half_w_px + 0.5)
            c1 = int(centre_col + half_w_px + 0.5)
            wall_h = height / depth
            bot = int(half_h + wall_h * 0.5 - 0.5)
            top = bot - int(wall_h * VEST_HEIGHT_FRAC + 0.5) + 1
            r0 = max(0, top)
            r1 = min(height - 1, bot)
            for col in range(max(0, c0), min(width - 1, c1) + 1):
                if depth < zbuf[col]:
                    for row in range(r0, r1 + 1):
                        out[row * width + col] = VEST_INTENSITY


def render(
    m: LabyrinthMap,
    pose: AgentPose,
    width: int,
    height: int,
    fov_deg: float = DEFAULT_FOV_DEG,
) -> Frame:
    """Render the agent's first-person view as a grayscale Frame."""
    if width <= 0 or height <= 0:
        raise ValueError("frame dimensions must be positive")
    base, stripes = shade_tables(int(m.surface.max()))
    out = np.empty(height * width, dtype=np.float64)
    zbuf = np.empty(width, dtype=np.float64)
    gx, gy = m.goal_xy if m.goal_xy is not None else (0.0, 0.0)
    _render_into(
        m.walls,
        m.surface,
        m.cell_size,
        base,
        stripes,
        pose.x,
        pose.y,
        pose.heading_rad,
        math.radians(fov_deg),
        m.has_goal,
        gx,
        gy,
        out,
        zbuf,
        width,
        height,
    )
    return Frame(width=width, height=height, intensities=out)
