"""Population bookkeeping: id allocation, reference counts, legality.

``Populations`` extends the plain graph bundle with everything the
breeder loop needs: unique-id counters, the complement-uniqueness index,
learner membership counts (for orphan sweeps), ensemble in-degrees (for
root identification) and the latest fitness map.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..tpg.graph import Ensemble, GraphBundle, Learner, team_violations
from ..tpg.programs import Program
from .params import EvolutionParams


@dataclass
class Populations(GraphBundle):
    fitness: dict[int, float] = field(default_factory=dict)
    next_program_id: int = 0
    next_learner_id: int = 0
    next_ensemble_id: int = 0
    complement_index: dict[frozenset[int], int] = field(default_factory=dict)
    in_degree: dict[int, int] = field(default_factory=dict)
    membership: dict[int, int] = field(default_factory=dict)

    # -- construction ------------------------------------------------------

    def new_program(self, code: np.ndarray, num_registers: int) -> Program:
        program = Program(id=self.next_program_id, code=code, num_registers=num_registers)
        self.next_program_id += 1
        self.programs[program.id] = program
        return program

    def new_learner(
        self,
        context_id: int,
        action_program_id: int | None,
        action_team: int | None = None,
    ) -> Learner:
        learner = Learner(
            id=self.next_learner_id,
            context_id=context_id,
            action_program_id=action_program_id,
            action_team=action_team,
        )
        self.next_learner_id += 1
        self.learners[learner.id] = learner
        self.membership[learner.id] = 0
        if action_team is not None:
            self.in_degree[action_team] = self.in_degree.get(action_team, 0) + 1
        return learner

    def new_ensemble(self, member_ids: tuple[int, ...]) -> Ensemble:
        complement = frozenset(member_ids)
        if complement in self.complement_index:
            raise ValueError(
                f"duplicate complement {sorted(complement)} "
                f"(ensemble {self.complement_index[complement]})"
            )
        team = Ensemble(id=self.next_ensemble_id, member_ids=tuple(member_ids))
        self.next_ensemble_id += 1
        self.ensembles[team.id] = team
        self.complement_index[complement] = team.id
        self.in_degree.setdefault(team.id, 0)
        for lid in member_ids:
            self.membership[lid] += 1
        return team

    def register_loaded(
        self,
        programs: list[Program],
        learners: list[Learner],
        ensembles: list[Ensemble],
        counters: tuple[int, int, int],
    ) -> None:
        """Adopt pre-built entities (checkpoint restore)."""
        for p in programs:
            self.programs[p.id] = p
        for learner in learners:
            self.learners[learner.id] = learner
            self.membership[learner.id] = 0
        for team in ensembles:
            self.ensembles[team.id] = team
            self.complement_index[team.complement] = team.id
            for lid in team.member_ids:
                self.membership[lid] += 1
        for team in ensembles:
            self.in_degree.setdefault(team.id, 0)
        for learner in learners:
            if learner.action_team is not None:
                self.in_degree[learner.action_team] += 1
        self.next_program_id, self.next_learner_id, self.next_ensemble_id = counters

    # -- deletion ----------------------------------------------------------

    def remove_ensemble(self, eid: int) -> None:
        team = self.ensembles.pop(eid)
        del self.complement_index[team.complement]
        self.fitness.pop(eid, None)
        self.in_degree.pop(eid, None)
        for lid in team.member_ids:
            self.membership[lid] -= 1

    def sweep_orphans(self) -> tuple[int, int]:
        """Drop learners in no ensemble, then programs referenced by no
        learner. Returns (learners removed, programs removed)."""
        dead = [lid for lid, n in self.membership.items() if n == 0]
        for lid in dead:
            learner = self.learners.pop(lid)
            del self.membership[lid]
            if learner.action_team is not None and learner.action_team in self.in_degree:
                self.in_degree[learner.action_team] -= 1
        live_programs: set[int] = set()
        for learner in self.learners.values():
            live_programs.add(learner.context_id)
            if learner.action_program_id is not None:
                live_programs.add(learner.action_program_id)
        dead_programs = [pid for pid in self.programs if pid not in live_programs]
        for pid in dead_programs:
            del self.programs[pid]
        return len(dead), len(dead_programs)

    # -- queries -----------------------------------------------------------

    def roots(self) -> list[int]:
        """Ensemble ids with in-degree zero, ascending (the agents)."""
        return sorted(eid for eid in self.ensembles if self.in_degree.get(eid, 0) == 0)

    def graph_size(self, root_id: int) -> int:
        """Number of ensembles reachable from a root."""
        seen = {root_id}
        stack = [root_id]
        while stack:
            for lid in self.ensembles[stack.pop()].member_ids:
                target = self.learners[lid].action_team
                if target is not None and target not in seen:
                    seen.add(target)
                    stack.append(target)
        return len(seen)

    def audit(self) -> list[str]:
        """Full legality audit; returns human-readable violations."""
        issues: list[str] = []
        for team in self.ensembles.values():
            issues.extend(team_violations(team, self))
        seen: dict[frozenset[int], int] = {}
        for team in self.ensembles.values():
            if team.complement in seen:
                issues.append(
                    f"ensembles {seen[team.complement]} and {team.id} share a complement"
                )
            seen[team.complement] = team.id
            if self.complement_index.get(team.complement) != team.id:
                issues.append(f"ensemble {team.id} missing from the complement index")
        for lid, n in self.membership.items():
            if n <= 0:
                issues.append(f"learner {lid} is orphaned (membership {n})")
        for learner in self.learners.values():
            if learner.context_id not in self.programs:
                issues.append(f"learner {learner.id}: dangling context program")
            if (
                learner.action_program_id is not None
                and learner.action_program_id not in self.programs
            ):
                issues.append(f"learner {learner.id}: dangling action program")
            if learner.action_team is not None and learner.action_team not in self.ensembles:
                issues.append(f"learner {learner.id}: dangling ensemble pointer")
        # recompute in-degrees
        recint: dict[int, int] = {eid: 0 for eid in self.ensembles}
        for learner in self.learners.values():
            if learner.action_team is not None and learner.action_team in recint:
                recint[learner.action_team] += 1
        for eid, expect in recint.items():
            if self.in_degree.get(eid, 0) != expect:
                issues.append(
                    f"ensemble {eid}: in_degree {self.in_degree.get(eid, 0)} != {expect}"
                )
        return issues


def init_populations(
    params: EvolutionParams, state_dim: int, rng: np.random.Generator
) -> Populations:
    """Fresh single-node agents: every learner has a random context and a
    random action program and no ensemble pointer."""
    from .variation import random_program_code

    pops = Populations()
    for _ in range(params.pop_size):
        size = int(rng.integers(params.min_team_size, params.max_team_size + 1))
        members = []
        for _ in range(size):
            ctx = pops.new_program(
                random_program_code(rng, params, state_dim), params.max_registers
            )
            act = pops.new_program(
                random_program_code(rng, params, state_dim), params.max_registers
            )
            members.append(pops.new_learner(ctx.id, act.id, None).id)
        pops.new_ensemble(tuple(members))
    return pops
