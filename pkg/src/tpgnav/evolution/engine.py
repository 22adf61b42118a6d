"""The breeder loop: evaluate, rank, cull, breed; plus champion selection,
run logs and checkpointing.

Each generation evaluates every root ensemble (mean return over several
fresh uniform spawns), deletes the worst Gap share of roots, sweeps
orphaned learners and programs, then refills the root population with
cloned-and-varied offspring until the root count is back at pop_size.
All randomness is drawn from counter-based streams keyed by (seed,
purpose, generation, ...), which makes runs reproducible byte for byte,
thread counts and resume points notwithstanding.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from ..env.episode import episode_return
from ..env.kinematics import spawn, spawn_in
from ..env.types import NUM_ACTIONS, EnvParams, LabyrinthMap
from ..tpg.compiled import CompiledGraphs, run_compiled_episode
from ..tpg.graph import Ensemble, Learner
from ..tpg.programs import Program
from ..tpg.serialize import Champion, extract_champion
from .params import EvolutionParams, Phase
from .population import Populations, init_populations
from .rng import TAG_EPISODE, TAG_INIT, TAG_VALIDATION, TAG_VARIATION, rng_for
from .variation import (
    clone_and_mutate_member,
    crossover_teams,
    force_unique,
    mutate_team_composition,
    repair_team,
)

RUNLOG_HEADER = "generation,phase,best,mean,median,root_count,mean_graph_size"


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    phase: int
    best: float
    mean: float
    median: float
    root_count: int
    mean_graph_size: float

    def csv_row(self) -> str:
        return (
            f"{self.generation},{self.phase},{self.best!r},{self.mean!r},"
            f"{self.median!r},{self.root_count},{self.mean_graph_size!r}"
        )


def _map_tasks(fn: Callable, tasks: Sequence, threads: int) -> list:
    if threads <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, tasks))


def _mean(values: Iterable[float]) -> float:
    values = list(values)
    return math.fsum(values) / len(values)


def evaluate_agent(
    cg: CompiledGraphs,
    root_id: int,
    m: LabyrinthMap,
    env: EnvParams,
    params: EvolutionParams,
    seed: int,
    generation: int,
) -> float:
    """Mean episodic return over ``params.evaluations`` fresh spawns."""
    returns = []
    for ep in range(params.evaluations):
        rng = rng_for(seed, TAG_EPISODE, generation, root_id, ep)
        pose = spawn(m, rng)
        steps, reached, _ = run_compiled_episode(cg, m, env, root_id, pose)
        returns.append(episode_return(reached, steps, env.max_steps))
    return _mean(returns)


def evaluate_roots(
    pops: Populations,
    root_ids: Sequence[int],
    m: LabyrinthMap,
    env: EnvParams,
    params: EvolutionParams,
    seed: int,
    generation: int,
    threads: int = 1,
) -> dict[int, float]:
    cg = CompiledGraphs(pops, params.max_registers, NUM_ACTIONS)

    def one(task: tuple[int, int]) -> float:
        rid, ep = task
        rng = rng_for(seed, TAG_EPISODE, generation, rid, ep)
        pose = spawn(m, rng)
        steps, reached, _ = run_compiled_episode(cg, m, env, rid, pose)
        return episode_return(reached, steps, env.max_steps)

    tasks = [(rid, ep) for rid in root_ids for ep in range(params.evaluations)]
    flat = _map_tasks(one, tasks, threads)
    fitness: dict[int, float] = {}
    for i, rid in enumerate(root_ids):
        chunk = flat[i * params.evaluations : (i + 1) * params.evaluations]
        fitness[rid] = _mean(chunk)
    return fitness


def run_generation(
    pops: Populations,
    m: LabyrinthMap,
    env: EnvParams,
    params: EvolutionParams,
    seed: int,
    generation: int,
    threads: int = 1,
) -> GenerationStats:
    phase = params.phase_of(generation)
    p_action = params.p_action(phase)
    state_dim = env.state_dim

    roots = pops.roots()
    fitness = evaluate_roots(pops, roots, m, env, params, seed, generation, threads)
    pops.fitness = dict(fitness)

    # Cull the worst Gap share; fitness ties delete the younger id first.
    n_delete = int(round(params.gap * len(roots)))
    worst_first = sorted(roots, key=lambda rid: (fitness[rid], -rid))
    for rid in worst_first[:n_delete]:
        pops.remove_ensemble(rid)
    pops.sweep_orphans()

    vrng = rng_for(seed, TAG_VARIATION, generation)
    # Pointer targets and parents both come from the surviving ensembles.
    survivor_pool = sorted(pops.ensembles)

    safety = 10 * params.pop_size
    while len(pops.roots()) < params.pop_size and safety > 0:
        deficit = params.pop_size - len(pops.roots())
        batch: list[list[int]] = []
        for _ in range(deficit):
            parent = pops.ensembles[survivor_pool[int(vrng.integers(0, len(survivor_pool)))]]
            batch.append(list(parent.member_ids))
        if params.crossover:
            for i in range(0, len(batch) - 1, 2):
                crossed = crossover_teams(batch[i], batch[i + 1], pops, params, vrng)
                if crossed is not None:
                    batch[i], batch[i + 1] = crossed
        for members in batch:
            safety -= 1
            learner_pool = sorted(lid for lid, n in pops.membership.items() if n > 0)
            members = mutate_team_composition(members, learner_pool, pops, params, vrng)
            members = clone_and_mutate_member(
                members, survivor_pool, p_action, pops, params, state_dim, vrng
            )
            repaired = repair_team(members, learner_pool, pops, params, vrng)
            if repaired is not None:
                members = repaired
            while frozenset(members) in pops.complement_index:
                members = force_unique(members, survivor_pool, pops, params, state_dim, vrng)
            pops.new_ensemble(tuple(members))
    if len(pops.roots()) != params.pop_size:
        raise RuntimeError(
            f"generation {generation}: root count {len(pops.roots())} "
            f"did not return to {params.pop_size}"
        )

    values = sorted(fitness.values())
    final_roots = pops.roots()
    return GenerationStats(
        generation=generation,
        phase=phase.value,
        best=values[-1],
        mean=_mean(values),
        median=float(np.median(values)),
        root_count=len(final_roots),
        mean_graph_size=_mean(pops.graph_size(rid) for rid in final_roots),
    )


def validation_poses(
    m: LabyrinthMap, params: EvolutionParams, seed: int
) -> list:
    """The per-run fixed validation start states: every region crossed
    with ``validation_headings`` random orientations."""
    rng = rng_for(seed, TAG_VALIDATION)
    poses = []
    for rid in sorted(m.regions):
        for _ in range(params.validation_headings):
            poses.append(spawn_in(m, rid, rng))
    return poses


def select_champion(
    pops: Populations,
    m: LabyrinthMap,
    env: EnvParams,
    params: EvolutionParams,
    seed: int,
    generation: int,
    threads: int = 1,
) -> tuple[Champion, float]:
    """Evaluate every root on the shared validation set and serialize the
    closed subgraph of the best one. Returns (champion, validation mean)."""
    roots = pops.roots()
    if not roots:
        raise ValueError("no root ensembles to validate")
    poses = validation_poses(m, params, seed)
    cg = CompiledGraphs(pops, params.max_registers, NUM_ACTIONS)

    def one(task: tuple[int, int]) -> float:
        rid, pose_idx = task
        steps, reached, _ = run_compiled_episode(cg, m, env, rid, poses[pose_idx])
        return episode_return(reached, steps, env.max_steps)

    tasks = [(rid, k) for rid in roots for k in range(len(poses))]
    flat = _map_tasks(one, tasks, threads)
    scores: dict[int, float] = {}
    for i, rid in enumerate(roots):
        scores[rid] = _mean(flat[i * len(poses) : (i + 1) * len(poses)])
    best = max(roots, key=lambda rid: (scores[rid], -rid))
    champion = extract_champion(
        pops,
        best,
        state_dim=env.state_dim,
        num_registers=params.max_registers,
        num_actions=NUM_ACTIONS,
        provenance={
            "seed": str(seed),
            "generation": str(generation),
            "validation_fitness": repr(scores[best]),
            "frame": f"{env.width}x{env.height}",
        },
    )
    return champion, scores[best]


# -- checkpointing -----------------------------------------------------------

CHECKPOINT_HEADER = "tpgnav-checkpoint v1"


class CheckpointError(ValueError):
    pass


def save_checkpoint(pops: Populations, seed: int, generation: int, config_text: str) -> str:
    lines = [
        CHECKPOINT_HEADER,
        f"seed {seed}",
        f"generation {generation}",
        f"counters {pops.next_program_id} {pops.next_learner_id} {pops.next_ensemble_id}",
        "config-begin",
    ]
    lines.extend(config_text.rstrip("\n").splitlines())
    lines.append("config-end")
    for pid in sorted(pops.programs):
        program = pops.programs[pid]
        lines.append(f"program {pid} {len(program.code)}")
        lines.extend(" ".join(str(int(v)) for v in row) for row in program.code)
    for lid in sorted(pops.learners):
        learner = pops.learners[lid]
        if learner.acts_directly:
            lines.append(
                f"learner {lid} context {learner.context_id} action {learner.action_program_id}"
            )
        elif learner.action_program_id is not None:
            lines.append(
                f"learner {lid} context {learner.context_id} team {learner.action_team} "
                f"retained {learner.action_program_id}"
            )
        else:
            lines.append(
                f"learner {lid} context {learner.context_id} team {learner.action_team}"
            )
    for eid in sorted(pops.ensembles):
        members = " ".join(str(v) for v in pops.ensembles[eid].member_ids)
        lines.append(f"ensemble {eid} members {members}")
    for eid in sorted(pops.fitness):
        lines.append(f"fitness {eid} {pops.fitness[eid]!r}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def load_checkpoint(
    text: str, expected_config_text: str | None, num_registers: int
) -> tuple[Populations, int, int]:
    """Returns (populations, seed, last completed generation)."""
    lines = text.splitlines()
    if not lines or lines[0] != CHECKPOINT_HEADER:
        raise CheckpointError(f"line 1: expected header {CHECKPOINT_HEADER!r}")
    seed = generation = None
    counters = None
    config_lines: list[str] = []
    programs: list[Program] = []
    learners: list[Learner] = []
    ensembles: list[Ensemble] = []
    fitness: dict[int, float] = {}
    i = 1
    try:
        while i < len(lines):
            line = lines[i].strip()
            i += 1
            if not line or line == "end":
                continue
            parts = line.split()
            if parts[0] == "seed":
                seed = int(parts[1])
            elif parts[0] == "generation":
                generation = int(parts[1])
            elif parts[0] == "counters":
                counters = (int(parts[1]), int(parts[2]), int(parts[3]))
            elif parts[0] == "config-begin":
                while lines[i].strip() != "config-end":
                    config_lines.append(lines[i])
                    i += 1
                i += 1
            elif parts[0] == "program":
                pid, n = int(parts[1]), int(parts[2])
                code = np.array(
                    [[int(v) for v in lines[i + k].split()] for k in range(n)],
                    dtype=np.int32,
                )
                i += n
                programs.append(Program(id=pid, code=code, num_registers=num_registers))
            elif parts[0] == "learner":
                lid, ctx = int(parts[1]), int(parts[3])
                if parts[4] == "action":
                    learners.append(Learner(lid, ctx, int(parts[5]), None))
                else:
                    retained = int(parts[7]) if len(parts) > 6 and parts[6] == "retained" else None
                    learners.append(Learner(lid, ctx, retained, int(parts[5])))
            elif parts[0] == "ensemble":
                ensembles.append(
                    Ensemble(int(parts[1]), tuple(int(v) for v in parts[3:]))
                )
            elif parts[0] == "fitness":
                fitness[int(parts[1])] = float(parts[2])
            else:
                raise CheckpointError(f"line {i}: unknown record {parts[0]!r}")
    except (IndexError, ValueError) as exc:
        if isinstance(exc, CheckpointError):
            raise
        raise CheckpointError(f"line {i}: malformed record ({exc})") from exc
    if seed is None or generation is None or counters is None:
        raise CheckpointError("missing seed/generation/counters")
    config_text = "\n".join(config_lines) + "\n" if config_lines else ""
    if expected_config_text is not None and config_text.strip() != expected_config_text.strip():
        raise CheckpointError(
            "checkpoint was written with a different configuration; "
            "resume with the original config"
        )
    pops = Populations()
    pops.register_loaded(programs, learners, ensembles, counters)
    pops.fitness = fitness
    return pops, seed, generation


# -- full training runs ------------------------------------------------------


@dataclass
class TrainResult:
    champion: Champion
    validation_fitness: float
    champion_path: Path
    runlog_path: Path
    generations_run: int


def train(
    config,
    out_dir: Path,
    threads: int = 1,
    resume_checkpoint: Path | None = None,
    progress: Callable[[str], None] | None = None,
) -> TrainResult:
    """Run (or resume) a full two-phase training and write all artifacts.

    ``config`` is a :class:`tpgnav.config.RunConfig`. Outputs land in
    ``out_dir``: runlog.csv, periodic checkpoint files, champion.txt.
    """
    from ..env.maps import build_my_way_home

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    env = config.env_params()
    params = config.evolution_params()
    m = build_my_way_home()
    seed = config.seed
    runlog_path = out_dir / "runlog.csv"

    if resume_checkpoint is not None:
        pops, ck_seed, start_gen = load_checkpoint(
            Path(resume_checkpoint).read_text(encoding="utf-8"),
            config.to_text(),
            params.max_registers,
        )
        if ck_seed != seed:
            raise CheckpointError(f"checkpoint seed {ck_seed} != config seed {seed}")
        _truncate_runlog(runlog_path, start_gen)
    else:
        pops = init_populations(params, env.state_dim, rng_for(seed, TAG_INIT))
        start_gen = 0
        runlog_path.write_text(RUNLOG_HEADER + "\n", encoding="utf-8")

    total = params.total_generations
    with open(runlog_path, "a", encoding="utf-8") as runlog:
        for gen in range(start_gen + 1, total + 1):
            stats = run_generation(pops, m, env, params, seed, gen, threads)
            runlog.write(stats.csv_row() + "\n")
            runlog.flush()
            if progress is not None:
                progress(
                    f"gen {gen}/{total} phase {stats.phase} "
                    f"best {stats.best:.4f} median {stats.median:.4f}"
                )
            if config.checkpoint_interval and gen % config.checkpoint_interval == 0:
                ck = out_dir / f"checkpoint_gen{gen:06d}.txt"
                ck.write_text(
                    save_checkpoint(pops, seed, gen, config.to_text()), encoding="utf-8"
                )

    champion, val_fit = select_champion(pops, m, env, params, seed, total, threads)
    champion_path = out_dir / "champion.txt"
    from ..tpg.serialize import write_champion

    write_champion(champion, champion_path)
    if progress is not None:
        progress(f"champion validation fitness {val_fit!r} -> {champion_path}")
    return TrainResult(
        champion=champion,
        validation_fitness=val_fit,
        champion_path=champion_path,
        runlog_path=runlog_path,
        generations_run=total - start_gen,
    )


def _truncate_runlog(runlog_path: Path, last_generation: int) -> None:
    """Drop runlog rows past a checkpoint so a resume continues cleanly."""
    if not runlog_path.exists():
        runlog_path.write_text(RUNLOG_HEADER + "\n", encoding="utf-8")
        return
    lines = runlog_path.read_text(encoding="utf-8").splitlines()
    kept = [lines[0]] if lines else [RUNLOG_HEADER]
    for line in lines[1:]:
        try:
            gen = int(line.split(",", 1)[0])
        except ValueError:
            continue
        if gen <= last_generation:
            kept.append(line)
    runlog_path.write_text("\n".join(kept) + "\n", encoding="utf-8")
