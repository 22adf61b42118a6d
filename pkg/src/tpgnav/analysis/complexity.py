"""Structural complexity of a champion: node/learner counts, per-program
attribute footprints, and the worst-case decision-path footprint."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..tpg.graph import GraphBundle
from ..tpg.programs import indexed_attributes
from ..tpg.serialize import Champion


@dataclass(frozen=True)
class ComplexityReport:
    ensembles: int
    learners: int
    context_programs: int
    action_programs: int
    mean_context_attributes: float
    mean_action_attributes: float
    max_path_attributes: int
    state_dim: int

    @property
    def max_path_fraction(self) -> float:
        return self.max_path_attributes / self.state_dim

    def to_text(self) -> str:
        lines = [
            f"ensembles {self.ensembles}",
            f"learners {self.learners}",
            f"context_programs {self.context_programs}",
            f"action_programs {self.action_programs}",
            f"mean_context_attributes {self.mean_context_attributes!r}",
            f"mean_action_attributes {self.mean_action_attributes!r}",
            f"max_path_attributes {self.max_path_attributes}",
            f"state_dim {self.state_dim}",
            f"max_path_fraction {self.max_path_fraction!r}",
        ]
        return "\n".join(lines) + "\n"


def _max_path_attributes(bundle: GraphBundle, root_id: int, footprints) -> int:
    """Max over root-to-action decision paths of the distinct attributes
    indexed by every program executed along the path.

    A decision at an ensemble executes every member's context program;
    the path then either ends at one directly acting member (adding its
    action program) or descends through one pointer member. Each ensemble
    is visited at most once, mirroring the traversal rule.
    """
    best = 0

    def visit(eid: int, visited: frozenset[int], acc: frozenset[int]) -> None:
        nonlocal best
        team = bundle.ensembles[eid]
        ctx_union = set(acc)
        for lid in team.member_ids:
            ctx_union |= footprints[bundle.learners[lid].context_id]
        ctx_union = frozenset(ctx_union)
        for lid in team.member_ids:
            learner = bundle.learners[lid]
            if learner.acts_directly:
                total = len(ctx_union | footprints[learner.action_program_id])
                if total > best:
                    best = total
            elif learner.action_team not in visited:
                visit(learner.action_team, visited | {learner.action_team}, ctx_union)

    visit(root_id, frozenset((root_id,)), frozenset())
    return best


def complexity_report(champion: Champion) -> ComplexityReport:
    bundle = champion.bundle
    footprints = {
        pid: frozenset(indexed_attributes(p)) for pid, p in bundle.programs.items()
    }
    context_ids = sorted({l.context_id for l in bundle.learners.values()})
    action_ids = sorted(
        {
            l.action_program_id
            for l in bundle.learners.values()
            if l.acts_directly
        }
    )

    def mean_size(ids: list[int]) -> float:
        if not ids:
            return 0.0
        return math.fsum(len(footprints[pid]) for pid in ids) / len(ids)

    return ComplexityReport(
        ensembles=len(bundle.ensembles),
        learners=len(bundle.learners),
        context_programs=len(context_ids),
        action_programs=len(action_ids),
        mean_context_attributes=mean_size(context_ids),
        mean_action_attributes=mean_size(action_ids),
        max_path_attributes=_max_path_attributes(bundle, champion.root_id, footprints),
        state_dim=champion.state_dim,
    )
