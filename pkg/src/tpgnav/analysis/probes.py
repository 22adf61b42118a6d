"""Empty-room behaviour probes.

Releasing a trained agent in the centre of one large goalless room (sized
like the whole labyrinth footprint) exposes its bare navigation heuristic:
with no vest the episode always runs the full step budget, and the
recorded trajectory is the artifact. The probe room can imitate the
corridor texture or any single room's texture.
"""

from __future__ import annotations

import numpy as np

from ..env.maps import CORRIDOR_SURFACE, ROOM_SURFACES, build_probe_room
from ..env.kinematics import spawn_in
from ..env.types import DEFAULT_CELL_SIZE, EnvParams
from ..evolution.engine import _map_tasks
from ..evolution.rng import TAG_PROBE, rng_for
from ..tpg.compiled import CompiledGraphs, run_compiled_episode
from ..tpg.serialize import Champion

DEFAULT_PROBE_SIDE = 63 * DEFAULT_CELL_SIZE  # the labyrinth's long axis


def run_empty_room_probe(
    champion: Champion,
    surface_id: int,
    seed: int,
    episodes: int = 100,
    side_length: float = DEFAULT_PROBE_SIDE,
    env: EnvParams | None = None,
    threads: int = 1,
):
    """Run centre spawns in a goalless probe room; returns the probe map
    and one (steps + 1, 3) trajectory per episode."""
    env = env or EnvParams()
    m = build_probe_room(surface_id, side_length)
    cg = CompiledGraphs(champion.bundle, champion.num_registers, champion.num_actions)

    def one(ep: int) -> np.ndarray:
        pose = spawn_in(m, 0, rng_for(seed, TAG_PROBE, surface_id, ep))
        _, _, traj = run_compiled_episode(cg, m, env, champion.root_id, pose, record=True)
        return traj

    return m, _map_tasks(one, list(range(episodes)), threads)


def probe_all_room_surfaces(
    champion: Champion,
    seed: int,
    episodes: int = 100,
    side_length: float = DEFAULT_PROBE_SIDE,
    env: EnvParams | None = None,
    threads: int = 1,
):
    """One probe bundle per labyrinth room texture: {room label: (map, trajectories)}."""
    out = {}
    for label in sorted(ROOM_SURFACES):
        out[label] = run_empty_room_probe(
            champion,
            ROOM_SURFACES[label],
            seed,
            episodes=episodes,
            side_length=side_length,
            env=env,
            threads=threads,
        )
    return out


def corridor_probe_surface() -> int:
    return CORRIDOR_SURFACE
