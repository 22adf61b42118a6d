"""Learners, ensembles, winner-take-all bidding and policy-graph traversal.

A learner pairs a context program (its bid) with an action: either an
action program or a pointer to another ensemble. An ensemble holds 2-4
learners; deciding on a state runs every member's context program and the
highest R[0] bid wins (ties to the lowest learner id). If the winner
defers to another ensemble, bidding repeats there. Each ensemble is
visited at most once per decision; a learner pointing back into the
visited set is excluded from bidding, which together with the two-action
legality rule guarantees termination with a concrete action.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .programs import Program, exec_program

MIN_TEAM_SIZE = 2
MAX_TEAM_SIZE = 4


class GraphError(RuntimeError):
    """Structural corruption: dangling ids or an undecidable traversal."""


@dataclass(frozen=True)
class Learner:
    """Bid program plus an action side.

    The action program is the active action when ``action_team`` is None.
    With a pointer set, the program is disabled: evolving learners retain
    it (pointer mutation disables, it does not destroy), while serialized
    champions drop it because it is not part of the decision function.
    """

    id: int
    context_id: int
    action_program_id: int | None
    action_team: int | None = None

    def __post_init__(self) -> None:
        if self.action_team is None and self.action_program_id is None:
            raise ValueError(f"learner {self.id} has neither action program nor pointer")

    @property
    def acts_directly(self) -> bool:
        return self.action_team is None


@dataclass(frozen=True)
class Ensemble:
    """A policy-graph node: an ordered complement of learner ids."""

    id: int
    member_ids: tuple[int, ...]

    @property
    def complement(self) -> frozenset[int]:
        return frozenset(self.member_ids)


@dataclass
class GraphBundle:
    """A self-contained set of programs, learners and ensembles."""

    programs: dict[int, Program] = field(default_factory=dict)
    learners: dict[int, Learner] = field(default_factory=dict)
    ensembles: dict[int, Ensemble] = field(default_factory=dict)

    def learner(self, lid: int) -> Learner:
        try:
            return self.learners[lid]
        except KeyError:
            raise GraphError(f"dangling learner id {lid}") from None

    def program(self, pid: int) -> Program:
        try:
            return self.programs[pid]
        except KeyError:
            raise GraphError(f"dangling program id {pid}") from None

    def ensemble(self, eid: int) -> Ensemble:
        try:
            return self.ensembles[eid]
        except KeyError:
            raise GraphError(f"dangling ensemble id {eid}") from None


def team_violations(team: Ensemble, bundle: GraphBundle) -> list[str]:
    """Legality audit for one ensemble (size and action-diversity rules).

    Complement uniqueness is population-wide and audited by the owner of
    the whole population.
    """
    issues = []
    n = len(team.member_ids)
    if len(set(team.member_ids)) != n:
        issues.append(f"ensemble {team.id}: duplicate members")
    if not MIN_TEAM_SIZE <= n <= MAX_TEAM_SIZE:
        issues.append(f"ensemble {team.id}: size {n} outside [{MIN_TEAM_SIZE}, {MAX_TEAM_SIZE}]")
    actions = set()
    for lid in team.member_ids:
        learner = bundle.learners.get(lid)
        if learner is None:
            issues.append(f"ensemble {team.id}: dangling learner {lid}")
            continue
        if learner.acts_directly:
            actions.add(learner.action_program_id)
        elif learner.action_team not in bundle.ensembles:
            issues.append(
                f"ensemble {team.id}: learner {lid} points at missing "
                f"ensemble {learner.action_team}"
            )
    if len(actions) < 2:
        issues.append(
            f"ensemble {team.id}: only {len(actions)} distinct active action programs"
        )
    return issues


def compute_bids(
    team: Ensemble, bundle: GraphBundle, state: np.ndarray
) -> list[tuple[int, float]]:
    """(learner_id, R[0] bid) for every member, in member order."""
    out = []
    for lid in team.member_ids:
        learner = bundle.learner(lid)
        regs = exec_program(bundle.program(learner.context_id), state)
        out.append((lid, float(regs[0])))
    return out


def select_winner(team: Ensemble, bundle: GraphBundle, state: np.ndarray) -> int:
    """Highest-bidding member; ties broken by lowest learner id."""
    best_id = -1
    best_bid = 0.0
    for lid, bid in compute_bids(team, bundle, state):
        if best_id < 0 or bid > best_bid or (bid == best_bid and lid < best_id):
            best_id = lid
            best_bid = bid
    if best_id < 0:
        raise GraphError(f"ensemble {team.id} has no members")
    return best_id


def evaluate_graph(
    bundle: GraphBundle,
    root_id: int,
    state: np.ndarray,
    num_actions: int = 3,
    collect_path: list[int] | None = None,
) -> int:
    """Traverse from a root ensemble to an action for this state.

    Returns the argmax over the winning action program's first
    ``num_actions`` registers. Visits each ensemble at most once; bidders
    deferring to an already-visited ensemble are excluded, so traversal
    ends within (ensemble count) bidding rounds.
    """
    team = bundle.ensemble(root_id)
    visited: set[int] = set()
    for _ in range(len(bundle.ensembles)):
        visited.add(team.id)
        if collect_path is not None:
            collect_path.append(team.id)
        best_id = -1
        best_bid = 0.0
        best_learner: Learner | None = None
        for lid, bid in compute_bids(team, bundle, state):
            learner = bundle.learner(lid)
            if learner.action_team is not None and learner.action_team in visited:
                continue
            if best_id < 0 or bid > best_bid or (bid == best_bid and lid < best_id):
                best_id = lid
                best_bid = bid
                best_learner = learner
        if best_learner is None:
            raise GraphError(
                f"ensemble {team.id}: no eligible bidder (legality violated)"
            )
        if best_learner.acts_directly:
            regs = exec_program(bundle.program(best_learner.action_program_id), state)
            return int(np.argmax(regs[:num_actions]))
        team = bundle.ensemble(best_learner.action_team)
    raise GraphError(f"traversal from root {root_id} exceeded the ensemble count")


def reachable_from(bundle: GraphBundle, root_id: int) -> tuple[set[int], set[int], set[int]]:
    """Ids of (ensembles, learners, programs) reachable from a root.

    Programs include each reachable learner's context program and, for
    directly acting learners, the active action program. Disabled action
    programs are not part of the decision function and are skipped.
    """
    seen_teams: set[int] = set()
    seen_learners: set[int] = set()
    seen_programs: set[int] = set()
    stack = [root_id]
    while stack:
        eid = stack.pop()
        if eid in seen_teams:
            continue
        seen_teams.add(eid)
        team = bundle.ensemble(eid)
        for lid in team.member_ids:
            learner = bundle.learner(lid)
            seen_learners.add(lid)
            seen_programs.add(learner.context_id)
            if learner.acts_directly:
                seen_programs.add(learner.action_program_id)
            else:
                stack.append(learner.action_team)
    return seen_teams, seen_learners, seen_programs
