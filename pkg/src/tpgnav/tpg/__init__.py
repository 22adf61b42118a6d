"""Tangled-program-graph core: programs, learners, ensembles, traversal."""

from .compiled import CompiledGraphs, run_compiled_episode
from .graph import (
    MAX_TEAM_SIZE,
    MIN_TEAM_SIZE,
    Ensemble,
    GraphBundle,
    GraphError,
    Learner,
    compute_bids,
    evaluate_graph,
    reachable_from,
    select_winner,
    team_violations,
)
from .programs import (
    DEFAULT_NUM_REGISTERS,
    MAX_PROGRAM_LEN,
    Instruction,
    Program,
    exec_program,
    indexed_attributes,
)
from .serialize import (
    Champion,
    ChampionFormatError,
    extract_champion,
    load_champion,
    read_champion,
    save_champion,
    write_champion,
)

__all__ = [
    "Champion",
    "ChampionFormatError",
    "CompiledGraphs",
    "DEFAULT_NUM_REGISTERS",
    "Ensemble",
    "GraphBundle",
    "GraphError",
    "Instruction",
    "Learner",
    "MAX_PROGRAM_LEN",
    "MAX_TEAM_SIZE",
    "MIN_TEAM_SIZE",
    "Program",
    "compute_bids",
    "evaluate_graph",
    "exec_program",
    "extract_champion",
    "indexed_attributes",
    "load_champion",
    "reachable_from",
    "read_champion",
    "run_compiled_episode",
    "save_champion",
    "select_winner",
    "team_violations",
    "write_champion",
]
