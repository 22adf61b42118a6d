"""Evolution parameterization and the two training phases."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Phase(Enum):
    P1 = 1  # single-node graphs only: pointer mutation disabled
    P2 = 2  # pointer mutation enabled, graphs may grow


@dataclass(frozen=True)
class EvolutionParams:
    generations_p1: int = 500
    generations_p2: int = 500
    pop_size: int = 120
    gap: float = 0.5
    mutate_count: int = 5
    evaluations: int = 5
    p_delete_learner: float = 0.7
    p_add_learner: float = 0.7
    max_instructions: int = 128
    max_registers: int = 8
    min_team_size: int = 2
    max_team_size: int = 4
    p_instr_add: float = 0.5
    p_instr_delete: float = 0.5
    p_instr_swap: float = 1.0
    # Gate for mutating a cloned learner's action side at all; the split
    # between program mutation and pointer introduction is phase-driven.
    p_mn: float = 0.5
    p_action_p2: float = 0.5
    # Field-level drift: chance per mutation repetition of rewriting one
    # field of one instruction. Set to 0 to keep only add/delete/swap.
    p_point_mutate: float = 1.0
    # Chance that an offspring team gets one member cloned-and-mutated.
    p_mutate_learner: float = 1.0
    crossover: bool = True
    validation_headings: int = 5

    def __post_init__(self) -> None:
        for name in (
            "gap",
            "p_delete_learner",
            "p_add_learner",
            "p_instr_add",
            "p_instr_delete",
            "p_instr_swap",
            "p_mn",
            "p_action_p2",
            "p_point_mutate",
            "p_mutate_learner",
        ):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")
        if self.pop_size < 1:
            raise ValueError("pop_size must be positive")
        n_gap = self.pop_size * self.gap
        if abs(n_gap - round(n_gap)) > 1e-9:
            raise ValueError(f"pop_size * gap = {n_gap} must be integral")
        if not 1 <= self.min_team_size <= self.max_team_size:
            raise ValueError("team size bounds are inconsistent")
        if self.min_team_size < 2:
            raise ValueError("teams need at least 2 learners")
        if self.max_instructions < 1 or self.max_registers < 1:
            raise ValueError("program limits must be positive")
        if self.evaluations < 1 or self.validation_headings < 1:
            raise ValueError("evaluation counts must be positive")

    @property
    def total_generations(self) -> int:
        return self.generations_p1 + self.generations_p2

    def phase_of(self, generation: int) -> Phase:
        return Phase.P1 if generation <= self.generations_p1 else Phase.P2

    def p_action(self, phase: Phase) -> float:
        return 0.0 if phase is Phase.P1 else self.p_action_p2
