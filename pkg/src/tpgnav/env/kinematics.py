"""Agent spawning and motion: turning, walking, wall sliding, goal contact.

Motion kernels are numba-compiled and shared by the scripted episode loop
and the compiled evolution fast path, so both produce bit-identical
trajectories.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .types import (
    DEFAULT_AGENT_RADIUS,
    DEFAULT_MOVE_STEP,
    DEFAULT_TURN_DELTA,
    Action,
    AgentPose,
    LabyrinthMap,
)

_SNAP_EPS = 1e-6  # world units kept between the agent's square and a wall


@njit(cache=True, nogil=True)
def _square_blocked(walls, cell_size, x, y, radius):
    """True if the agent's square footprint overlaps a wall or leaves the grid."""
    n_rows, n_cols = walls.shape
    c0 = int((x - radius) // cell_size)
    c1 = int((x + radius) // cell_size)
    r0 = int((y - radius) // cell_size)
    r1 = int((y + radius) // cell_size)
    if r0 < 0 or c0 < 0 or r1 >= n_rows or c1 >= n_cols:
        return True
    for r in range(r0, r1 + 1):
        for c in range(c0, c1 + 1):
            if walls[r, c]:
                return True
    return False


@njit(cache=True, nogil=True)
def _advance(walls, cell_size, x, y, heading, action, turn_delta, move_step, radius):
    """Apply one action; returns the new (x, y, heading).

    Forward motion is resolved per axis (slide along walls) in sub-steps
    no larger than half a cell so the agent can never tunnel.
    """
    if action == 1:  # TURN_LEFT
        return x, y, (heading + turn_delta) % 360.0
    if action == 2:  # TURN_RIGHT
        return x, y, (heading - turn_delta) % 360.0

    theta = heading * (np.pi / 180.0)
    dx = move_step * np.cos(theta)
    dy = move_step * np.sin(theta)
    limit = 0.5 * cell_size
    n_sub = int(max(abs(dx), abs(dy)) / limit) + 1
    sx = dx / n_sub
    sy = dy / n_sub
    for _ in range(n_sub):
        nx = x + sx
        if _square_blocked(walls, cell_size, nx, y, radius):
            if sx > 0.0:
                col = int((nx + radius) // cell_size)
                nx = col * cell_size - radius - _SNAP_EPS
            elif sx < 0.0:
                col = int((nx - radius) // cell_size)
                nx = (col + 1) * cell_size + radius + _SNAP_EPS
            if _square_blocked(walls, cell_size, nx, y, radius):
                nx = x
        x = nx
        ny = y + sy
        if _square_blocked(walls, cell_size, x, ny, radius):
            if sy > 0.0:
                row = int((ny + radius) // cell_size)
                ny = row * cell_size - radius - _SNAP_EPS
            elif sy < 0.0:
                row = int((ny - radius) // cell_size)
                ny = (row + 1) * cell_size + radius + _SNAP_EPS
            if _square_blocked(walls, cell_size, x, ny, radius):
                ny = y
        y = ny
    return x, y, heading


@njit(cache=True, nogil=True)
def _goal_contact(goal_mask, cell_size, x, y, radius):
    """True if the agent centre lies within ``radius`` of any goal cell."""
    n_rows, n_cols = goal_mask.shape
    c0 = max(0, int((x - radius) // cell_size))
    c1 = min(n_cols - 1, int((x + radius) // cell_size))
    r0 = max(0, int((y - radius) // cell_size))
    r1 = min(n_rows - 1, int((y + radius) // cell_size))
    for r in range(r0, r1 + 1):
        for c in range(c0, c1 + 1):
            if goal_mask[r, c]:
                gx0 = c * cell_size
                gy0 = r * cell_size
                ddx = max(max(gx0 - x, x - (gx0 + cell_size)), 0.0)
                ddy = max(max(gy0 - y, y - (gy0 + cell_size)), 0.0)
                if ddx * ddx + ddy * ddy <= radius * radius:
                    return True
    return False


def step(
    m: LabyrinthMap,
    pose: AgentPose,
    action: Action,
    turn_delta: float = DEFAULT_TURN_DELTA,
    move_step: float = DEFAULT_MOVE_STEP,
    agent_radius: float = DEFAULT_AGENT_RADIUS,
) -> AgentPose:
    """Advance the agent one decision. Collisions absorb motion, never fail."""
    x, y, heading = _advance(
        m.walls,
        m.cell_size,
        pose.x,
        pose.y,
        pose.heading,
        int(action),
        turn_delta,
        move_step,
        agent_radius,
    )
    return AgentPose(x, y, heading)


def reached_goal(
    m: LabyrinthMap,
    pose: AgentPose,
    agent_radius: float = DEFAULT_AGENT_RADIUS,
) -> bool:
    if not m.has_goal:
        return False
    return bool(_goal_contact(m.goal_mask, m.cell_size, pose.x, pose.y, agent_radius))


def spawn_in(m: LabyrinthMap, region_id: int, rng: np.random.Generator) -> AgentPose:
    """Spawn at the centre of one named region with uniform random heading."""
    x, y = m.region_centre(region_id)  # raises KeyError for unknown ids
    heading = rng.uniform(0.0, 360.0)
    return AgentPose(x, y, heading)


def spawn(m: LabyrinthMap, rng: np.random.Generator) -> AgentPose:
    """Spawn in a uniformly chosen region, at its centre, facing anywhere."""
    ids = sorted(m.regions)
    if not ids:
        raise ValueError(f"map {m.name!r} has no spawn regions")
    region_id = ids[int(rng.integers(0, len(ids)))]
    return spawn_in(m, region_id, rng)
