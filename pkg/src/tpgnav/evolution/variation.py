"""Variation operators: program mutation, action mutation, team crossover.

Offspring teams start as clones of their parents, get crossed over in
pairs, have learners added/removed, and finally have one member cloned
and mutated. Mutating a cloned learner always rewrites its context
program; its action side is mutated behind a gate, choosing between
program mutation and (in the second phase) replacing the action with a
pointer to a surviving ensemble. Repair keeps every offspring legal:
2-4 members and at least two distinct active action programs.
"""

from __future__ import annotations

import numpy as np

from ..tpg.graph import Learner
from ..tpg.programs import NUM_OPS
from .params import EvolutionParams
from .population import Populations


def random_instruction(
    rng: np.random.Generator, num_registers: int, state_dim: int
) -> np.ndarray:
    return np.array(
        [
            rng.integers(0, 2),
            rng.integers(0, num_registers),
            rng.integers(0, NUM_OPS),
            rng.integers(0, num_registers),
            rng.integers(0, state_dim),
        ],
        dtype=np.int32,
    )


def random_program_code(
    rng: np.random.Generator, params: EvolutionParams, state_dim: int
) -> np.ndarray:
    n = int(rng.integers(1, params.max_instructions + 1))
    return np.stack(
        [random_instruction(rng, params.max_registers, state_dim) for _ in range(n)]
    )


def mutate_program_code(
    code: np.ndarray,
    rng: np.random.Generator,
    params: EvolutionParams,
    state_dim: int,
) -> np.ndarray:
    """``mutate_count`` repetitions of add / delete / swap plus one-field
    point drift, with lengths clamped to [1, max_instructions]."""
    rows = [row.copy() for row in code]
    n_regs = params.max_registers
    for _ in range(params.mutate_count):
        if rng.random() < params.p_instr_add and len(rows) < params.max_instructions:
            pos = int(rng.integers(0, len(rows) + 1))
            rows.insert(pos, random_instruction(rng, n_regs, state_dim))
        if rng.random() < params.p_instr_delete and len(rows) > 1:
            del rows[int(rng.integers(0, len(rows)))]
        if rng.random() < params.p_instr_swap and len(rows) >= 2:
            i = int(rng.integers(0, len(rows)))
            j = int(rng.integers(0, len(rows) - 1))
            if j >= i:
                j += 1
            rows[i], rows[j] = rows[j], rows[i]
        if rng.random() < params.p_point_mutate:
            k = int(rng.integers(0, len(rows)))
            f = int(rng.integers(0, 5))
            if f == 0:
                rows[k][0] = rng.integers(0, 2)
            elif f == 1:
                rows[k][1] = rng.integers(0, n_regs)
            elif f == 2:
                rows[k][2] = rng.integers(0, NUM_OPS)
            elif f == 3:
                rows[k][3] = rng.integers(0, n_regs)
            else:
                rows[k][4] = rng.integers(0, state_dim)
    return np.stack(rows)


def mutate_learner(
    pops: Populations,
    learner: Learner,
    pointer_pool: list[int],
    p_action: float,
    allow_pointer: bool,
    params: EvolutionParams,
    state_dim: int,
    rng: np.random.Generator,
) -> Learner:
    """Clone a learner with a mutated context program, then (behind the
    p_mn gate) either mutate its action program or swap the action for a
    pointer into the surviving ensemble pool.

    ``allow_pointer`` lets the caller veto the pointer branch when taking
    it would leave the offspring team without two active action programs;
    the mutation falls back to program mutation in that case.
    """
    ctx_code = mutate_program_code(pops.programs[learner.context_id].code, rng, params, state_dim)
    ctx = pops.new_program(ctx_code, params.max_registers)
    aprog = learner.action_program_id
    ateam = learner.action_team
    if rng.random() < params.p_mn:
        pointer_branch = rng.random() < p_action
        if pointer_branch and allow_pointer and pointer_pool:
            ateam = pointer_pool[int(rng.integers(0, len(pointer_pool)))]
            # the action program is disabled but retained
        else:
            base = (
                pops.programs[aprog].code
                if aprog is not None
                else random_program_code(rng, params, state_dim)
            )
            aprog = pops.new_program(
                mutate_program_code(base, rng, params, state_dim), params.max_registers
            ).id
            ateam = None
    return pops.new_learner(ctx.id, aprog, ateam)


# -- team-level helpers ------------------------------------------------------


def active_action_ids(members: list[int], pops: Populations) -> set[int]:
    out = set()
    for lid in members:
        learner = pops.learners[lid]
        if learner.acts_directly:
            out.add(learner.action_program_id)
    return out


def _dedupe(members: list[int]) -> list[int]:
    seen: set[int] = set()
    out = []
    for lid in members:
        if lid not in seen:
            seen.add(lid)
            out.append(lid)
    return out


def repair_team(
    members: list[int],
    pool: list[int],
    pops: Populations,
    params: EvolutionParams,
    rng: np.random.Generator,
) -> list[int] | None:
    """Restore size bounds and the two-distinct-actions rule by moving or
    duplicating learners from ``pool``. Returns None if the pool cannot
    supply what is missing."""
    members = _dedupe(members)

    while len(active_action_ids(members, pops)) < 2:
        have = active_action_ids(members, pops)
        candidates = sorted(
            lid
            for lid in set(pool)
            if lid not in members
            and pops.learners[lid].acts_directly
            and pops.learners[lid].action_program_id not in have
        )
        if not candidates:
            return None
        members.append(candidates[int(rng.integers(0, len(candidates)))])

    while len(members) > params.max_team_size:
        removable = [
            lid
            for lid in members
            if len(active_action_ids([m for m in members if m != lid], pops)) >= 2
        ]
        if not removable:
            return None
        members.remove(removable[int(rng.integers(0, len(removable)))])

    while len(members) < params.min_team_size:
        candidates = sorted(lid for lid in set(pool) if lid not in members)
        if not candidates:
            return None
        members.append(candidates[int(rng.integers(0, len(candidates)))])

    return members


def crossover_teams(
    members_a: list[int],
    members_b: list[int],
    pops: Populations,
    params: EvolutionParams,
    rng: np.random.Generator,
) -> tuple[list[int], list[int]] | None:
    """Uniform team crossover: pool both complements, assign each pooled
    learner to either child with probability 1/2, then repair. Returns
    None (keep the original clones) when repair is impossible."""
    pool = list(members_a) + list(members_b)
    child_a: list[int] = []
    child_b: list[int] = []
    for lid in pool:
        (child_a if rng.random() < 0.5 else child_b).append(lid)
    repaired_a = repair_team(child_a, pool, pops, params, rng)
    repaired_b = repair_team(child_b, pool, pops, params, rng)
    if repaired_a is None or repaired_b is None:
        return None
    return repaired_a, repaired_b


def mutate_team_composition(
    members: list[int],
    learner_pool: list[int],
    pops: Populations,
    params: EvolutionParams,
    rng: np.random.Generator,
) -> list[int]:
    """Learner delete then add, each behind its own probability gate."""
    if rng.random() < params.p_delete_learner and len(members) > params.min_team_size:
        removable = [
            lid
            for lid in members
            if len(active_action_ids([m for m in members if m != lid], pops)) >= 2
        ]
        if removable:
            members.remove(removable[int(rng.integers(0, len(removable)))])
    if rng.random() < params.p_add_learner and len(members) < params.max_team_size:
        candidates = sorted(set(learner_pool) - set(members))
        if candidates:
            members.append(candidates[int(rng.integers(0, len(candidates)))])
    return members


def clone_and_mutate_member(
    members: list[int],
    pointer_pool: list[int],
    p_action: float,
    pops: Populations,
    params: EvolutionParams,
    state_dim: int,
    rng: np.random.Generator,
) -> list[int]:
    """Replace one uniformly chosen member with its mutated clone."""
    if rng.random() >= params.p_mutate_learner:
        return members
    idx = int(rng.integers(0, len(members)))
    victim = members[idx]
    others = [m for m in members if m != victim]
    allow_pointer = len(active_action_ids(others, pops)) >= 2
    clone = mutate_learner(
        pops,
        pops.learners[victim],
        pointer_pool,
        p_action,
        allow_pointer,
        params,
        state_dim,
        rng,
    )
    members[idx] = clone.id
    return members


def force_unique(
    members: list[int],
    pointer_pool: list[int],
    pops: Populations,
    params: EvolutionParams,
    state_dim: int,
    rng: np.random.Generator,
) -> list[int]:
    """Guarantee a population-unique complement by cloning-and-mutating
    one member with the pointer branch vetoed: the clone's fresh learner
    id makes the complement new, and its fresh action program keeps the
    two-action rule intact."""
    idx = int(rng.integers(0, len(members)))
    clone = mutate_learner(
        pops,
        pops.learners[members[idx]],
        pointer_pool,
        0.0,
        False,
        params,
        state_dim,
        rng,
    )
    members[idx] = clone.id
    return members
