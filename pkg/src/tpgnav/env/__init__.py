"""Partially observable first-person labyrinth environment."""

from .episode import (
    EpisodeAbort,
    EpisodeResult,
    EpisodeSession,
    episode_return,
    run_episode,
    step_reward,
)
from .kinematics import reached_goal, spawn, spawn_in, step
from .maps import (
    CORRIDOR_SURFACE,
    ROOM_SURFACES,
    build_my_way_home,
    build_probe_room,
    map_from_ascii,
    map_to_text,
)
from .raycast import render
from .types import (
    EPISODE_CAP,
    Action,
    AgentPose,
    EnvParams,
    Frame,
    LabyrinthMap,
    Region,
    StepOutcome,
)

__all__ = [
    "Action",
    "AgentPose",
    "CORRIDOR_SURFACE",
    "EPISODE_CAP",
    "EnvParams",
    "EpisodeAbort",
    "EpisodeResult",
    "EpisodeSession",
    "Frame",
    "LabyrinthMap",
    "Region",
    "ROOM_SURFACES",
    "StepOutcome",
    "build_my_way_home",
    "build_probe_room",
    "episode_return",
    "map_from_ascii",
    "map_to_text",
    "reached_goal",
    "render",
    "run_episode",
    "spawn",
    "spawn_in",
    "step",
    "step_reward",
]
