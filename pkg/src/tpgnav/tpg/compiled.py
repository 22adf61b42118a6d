"""Flat-array compilation of policy graphs plus a fused episode kernel.

Evolution and the test protocols run millions of render-decide-step
iterations; doing that through Python objects is far too slow. A
``CompiledGraphs`` packs every program, learner and ensemble of a bundle
into contiguous arrays, and ``run_compiled_episode`` executes the whole
episode loop inside one numba kernel built from the same primitive
kernels the object model uses, so both paths agree bit-exactly.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from ..env.kinematics import _advance, _goal_contact
from ..env.raycast import _render_into, shade_tables
from ..env.types import AgentPose, EnvParams, LabyrinthMap
from .graph import GraphBundle, GraphError
from .programs import run_code_slice

_NO_REF = -1


class CompiledGraphs:
    """Array form of a graph bundle; indices are sorted-id ranks."""

    def __init__(self, bundle: GraphBundle, num_registers: int, num_actions: int):
        self.num_registers = num_registers
        self.num_actions = num_actions

        prog_ids = sorted(bundle.programs)
        self._prog_index = {pid: i for i, pid in enumerate(prog_ids)}
        total = sum(len(bundle.programs[pid].code) for pid in prog_ids)
        self.prog_code = np.empty((total, 5), dtype=np.int32)
        self.prog_off = np.zeros(len(prog_ids) + 1, dtype=np.int64)
        at = 0
        for i, pid in enumerate(prog_ids):
            code = bundle.programs[pid].code
            self.prog_code[at : at + len(code)] = code
            at += len(code)
            self.prog_off[i + 1] = at

        learner_ids = sorted(bundle.learners)
        self._learner_index = {lid: i for i, lid in enumerate(learner_ids)}
        team_ids = sorted(bundle.ensembles)
        self.team_index = {eid: i for i, eid in enumerate(team_ids)}
        self.team_ids = np.array(team_ids, dtype=np.int64)

        n_l = len(learner_ids)
        self.lrn_ctx = np.empty(n_l, dtype=np.int32)
        self.lrn_aprog = np.full(n_l, _NO_REF, dtype=np.int32)
        self.lrn_ateam = np.full(n_l, _NO_REF, dtype=np.int32)
        for i, lid in enumerate(learner_ids):
            learner = bundle.learners[lid]
            ctx = self._prog_index.get(learner.context_id)
            if ctx is None:
                raise GraphError(f"learner {lid}: dangling context {learner.context_id}")
            self.lrn_ctx[i] = ctx
            if learner.acts_directly:
                aprog = self._prog_index.get(learner.action_program_id)
                if aprog is None:
                    raise GraphError(
                        f"learner {lid}: dangling action program "
                        f"{learner.action_program_id}"
                    )
                self.lrn_aprog[i] = aprog
            else:
                ateam = self.team_index.get(learner.action_team)
                if ateam is None:
                    raise GraphError(
                        f"learner {lid}: dangling ensemble ref {learner.action_team}"
                    )
                self.lrn_ateam[i] = ateam

        members: list[int] = []
        self.team_off = np.zeros(len(team_ids) + 1, dtype=np.int64)
        for i, eid in enumerate(team_ids):
            for lid in bundle.ensembles[eid].member_ids:
                idx = self._learner_index.get(lid)
                if idx is None:
                    raise GraphError(f"ensemble {eid}: dangling learner {lid}")
                members.append(idx)
            self.team_off[i + 1] = len(members)
        self.team_members = np.array(members, dtype=np.int32)

    @property
    def n_teams(self) -> int:
        return len(self.team_ids)

    def new_scratch(self) -> tuple[np.ndarray, np.ndarray]:
        """(registers, visited-stamps) buffers for one evaluation stream."""
        return (
            np.empty(self.num_registers, dtype=np.float64),
            np.zeros(max(1, self.n_teams), dtype=np.int64),
        )

    def evaluate(
        self,
        root_id: int,
        state: np.ndarray,
        scratch: tuple[np.ndarray, np.ndarray] | None = None,
    ) -> int:
        """One decision from a root on a flat observation vector."""
        regs, visited = scratch if scratch is not None else self.new_scratch()
        visited[:] = 0
        action = _eval_graph(
            self.prog_code,
            self.prog_off,
            self.lrn_ctx,
            self.lrn_aprog,
            self.lrn_ateam,
            self.team_off,
            self.team_members,
            self.team_index[root_id],
            np.ascontiguousarray(state, dtype=np.float64),
            regs,
            visited,
            1,
            self.num_actions,
        )
        if action < 0:
            raise GraphError(f"traversal from root {root_id} found no eligible bidder")
        return action


@njit(cache=True, nogil=True)
def _eval_graph(
    prog_code,
    prog_off,
    lrn_ctx,
    lrn_aprog,
    lrn_ateam,
    team_off,
    team_members,
    root_t,
    state,
    regs,
    visited,
    stamp,
    num_actions,
):
    """Winner-take-all traversal; returns the action index or -1 on a
    structurally broken graph (no eligible bidder)."""
    t = root_t
    n_teams = team_off.shape[0] - 1
    for _ in range(n_teams):
        visited[t] = stamp
        best = -1
        best_bid = 0.0
        for mi in range(team_off[t], team_off[t + 1]):
            li = team_members[mi]
            at = lrn_ateam[li]
            if at >= 0 and visited[at] == stamp:
                continue
            p = lrn_ctx[li]
            run_code_slice(prog_code, prog_off[p], prog_off[p + 1], state, regs)
            bid = regs[0]
            # learner indices are sorted by id, so lower index = lower id
            if best < 0 or bid > best_bid or (bid == best_bid and li < best):
                best = li
                best_bid = bid
        if best < 0:
            return -1
        at = lrn_ateam[best]
        if at < 0:
            p = lrn_aprog[best]
            run_code_slice(prog_code, prog_off[p], prog_off[p + 1], state, regs)
            action = 0
            top = regs[0]
            for k in range(1, num_actions):
                if regs[k] > top:
                    top = regs[k]
                    action = k
            return action
        t = at
    return -1


@njit(cache=True, nogil=True)
def _episode_kernel(
    walls,
    surface,
    goal_mask,
    cell_size,
    base_shade,
    stripe_count,
    x,
    y,
    heading,
    fov_rad,
    turn_delta,
    move_step,
    radius,
    has_goal,
    gx,
    gy,
    max_steps,
    width,
    height,
    prog_code,
    prog_off,
    lrn_ctx,
    lrn_aprog,
    lrn_ateam,
    team_off,
    team_members,
    root_t,
    num_actions,
    frame,
    zbuf,
    regs,
    visited,
    traj,
    record,
):
    deg2rad = np.pi / 180.0
    if record:
        traj[0, 0] = x
        traj[0, 1] = y
        traj[0, 2] = heading
    for t in range(1, max_steps + 1):
        _render_into(
            walls,
            surface,
            cell_size,
            base_shade,
            stripe_count,
            x,
            y,
            heading * deg2rad,
            fov_rad,
            has_goal,
            gx,
            gy,
            frame,
            zbuf,
            width,
            height,
        )
        action = _eval_graph(
            prog_code,
            prog_off,
            lrn_ctx,
            lrn_aprog,
            lrn_ateam,
            team_off,
            team_members,
            root_t,
            frame,
            regs,
            visited,
            t,
            num_actions,
        )
        if action < 0:
            return -t, False
        x, y, heading = _advance(
            walls, cell_size, x, y, heading, action, turn_delta, move_step, radius
        )
        if record:
            traj[t, 0] = x
            traj[t, 1] = y
            traj[t, 2] = heading
        if has_goal and _goal_contact(goal_mask, cell_size, x, y, radius):
            return t, True
    return max_steps, False


def run_compiled_episode(
    cg: CompiledGraphs,
    m: LabyrinthMap,
    params: EnvParams,
    root_id: int,
    pose: AgentPose,
    record: bool = False,
) -> tuple[int, bool, np.ndarray | None]:
    """Run one full episode inside the fused kernel.

    Returns (steps, reached_goal, trajectory) where the optional
    trajectory is a (steps + 1, 3) array of (x, y, heading) rows.
    """
    base, stripes = shade_tables(int(m.surface.max()))
    frame = np.empty(params.height * params.width, dtype=np.float64)
    zbuf = np.empty(params.width, dtype=np.float64)
    regs, visited = cg.new_scratch()
    traj = np.empty((params.max_steps + 1, 3), dtype=np.float64) if record else np.empty((1, 3))
    gx, gy = m.goal_xy if m.goal_xy is not None else (0.0, 0.0)
    steps, reached = _episode_kernel(
        m.walls,
        m.surface,
        m.goal_mask,
        m.cell_size,
        base,
        stripes,
        pose.x,
        pose.y,
        pose.heading,
        math.radians(params.fov_deg),
        params.turn_delta,
        params.move_step,
        params.agent_radius,
        m.has_goal,
        gx,
        gy,
        params.max_steps,
        params.width,
        params.height,
        cg.prog_code,
        cg.prog_off,
        cg.lrn_ctx,
        cg.lrn_aprog,
        cg.lrn_ateam,
        cg.team_off,
        cg.team_members,
        cg.team_index[root_id],
        cg.num_actions,
        frame,
        zbuf,
        regs,
        visited,
        traj,
        record,
    )
    if steps < 0:
        raise GraphError(
            f"traversal from root {root_id} found no eligible bidder at step {-steps}"
        )
    return int(steps), bool(reached), traj[: steps + 1].copy() if record else None
