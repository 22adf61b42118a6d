"""Episode execution: reward accounting and the render-decide-step loop."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .kinematics import reached_goal as _reached_goal
from .kinematics import spawn, step
from .types import (
    EPISODE_CAP,
    GOAL_BONUS,
    STEP_COST_DENOM,
    Action,
    AgentPose,
    EnvParams,
    Frame,
    LabyrinthMap,
    StepOutcome,
)

STEP_COST = 1.0 / STEP_COST_DENOM

Policy = Callable[[Frame], Action]


class EpisodeAbort(RuntimeError):
    """A policy callback failed mid-episode."""

    def __init__(self, t: int, cause: BaseException):
        super().__init__(f"policy failed at step {t}: {cause!r}")
        self.t = t
        self.cause = cause


def episode_return(reached_goal: bool, steps: int, max_steps: int = EPISODE_CAP) -> float:
    """Episodic return after ``steps`` elapsed decisions.

    Every elapsed step costs 1/10000; reaching the goal adds a bonus of
    1.0 and a timeout adds nothing. The division form keeps the canonical
    extremes exact in double precision (2100 steps -> -0.21 exactly,
    goal at step 30 -> 0.997 exactly).
    """
    if not 0 <= steps <= max_steps:
        raise ValueError(f"step count {steps} outside [0, {max_steps}]")
    bonus = GOAL_BONUS if reached_goal else 0.0
    return bonus - steps / STEP_COST_DENOM


def step_reward(reached_goal: bool) -> float:
    """Per-step reward: the step cost, plus the goal bonus when it hits."""
    return (GOAL_BONUS if reached_goal else 0.0) - STEP_COST


@dataclass
class EpisodeResult:
    return_: float
    steps: int
    reached_goal: bool
    trajectory: list[AgentPose] | None = None


class EpisodeSession:
    """Step-at-a-time environment session around one agent pose.

    Per-step rewards follow ``step_reward``; aggregate returns should use
    ``episode_return``, whose arithmetic is exact for the canonical values.
    """

    def __init__(self, m: LabyrinthMap, start_pose: AgentPose, params: EnvParams):
        self.map = m
        self.pose = start_pose
        self.params = params
        self.t = 0
        self.terminal = False

    def observe(self) -> Frame:
        from .raycast import render

        return render(
            self.map, self.pose, self.params.width, self.params.height, self.params.fov_deg
        )

    def act(self, action: Action) -> StepOutcome:
        if self.terminal:
            raise RuntimeError("episode already terminal")
        p = self.params
        self.pose = step(
            self.map, self.pose, action, p.turn_delta, p.move_step, p.agent_radius
        )
        self.t += 1
        hit = _reached_goal(self.map, self.pose, p.agent_radius)
        self.terminal = hit or self.t >= p.max_steps
        return StepOutcome(
            frame=self.observe(),
            reward=step_reward(hit),
            terminal=self.terminal,
            t=self.t,
        )


def run_episode(
    m: LabyrinthMap,
    policy: Policy,
    rng: np.random.Generator | None = None,
    *,
    params: EnvParams | None = None,
    start_pose: AgentPose | None = None,
    record: bool = False,
) -> EpisodeResult:
    """Run one episode: spawn (unless a pose is given), then loop
    render -> policy -> step until the goal is hit or the step cap.

    Policy exceptions abort the episode with an :class:`EpisodeAbort`
    carrying the failing step.
    """
    params = params or EnvParams()
    if start_pose is None:
        if rng is None:
            raise ValueError("run_episode needs an rng when no start_pose is given")
        start_pose = spawn(m, rng)
    session = EpisodeSession(m, start_pose, params)
    trajectory = [session.pose] if record else None
    reached = False
    while not session.terminal:
        frame = session.observe()
        try:
            action = Action(policy(frame))
        except Exception as exc:
            raise EpisodeAbort(session.t + 1, exc) from exc
        outcome = session.act(action)
        if trajectory is not None:
            trajectory.append(session.pose)
        if outcome.terminal and outcome.reward > 0.0:
            reached = True
    return EpisodeResult(
        return_=episode_return(reached, session.t, params.max_steps),
        steps=session.t,
        reached_goal=reached,
        trajectory=trajectory,
    )
