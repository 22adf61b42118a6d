"""Breeder-model evolution of policy graphs."""

from .engine import (
    CheckpointError,
    GenerationStats,
    TrainResult,
    evaluate_agent,
    evaluate_roots,
    load_checkpoint,
    run_generation,
    save_checkpoint,
    select_champion,
    train,
    validation_poses,
)
from .params import EvolutionParams, Phase
from .population import Populations, init_populations
from .rng import rng_for, seed_for
from .variation import (
    crossover_teams,
    mutate_learner,
    mutate_program_code,
    random_program_code,
)

__all__ = [
    "CheckpointError",
    "EvolutionParams",
    "GenerationStats",
    "Phase",
    "Populations",
    "TrainResult",
    "crossover_teams",
    "evaluate_agent",
    "evaluate_roots",
    "init_populations",
    "load_checkpoint",
    "mutate_learner",
    "mutate_program_code",
    "random_program_code",
    "rng_for",
    "run_generation",
    "save_checkpoint",
    "seed_for",
    "select_champion",
    "train",
    "validation_poses",
]
