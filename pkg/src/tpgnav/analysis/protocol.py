"""The per-room test protocol: fixed spawns, many orientations, full stats.

Every spawn region is sampled ``episodes_per_region`` times from its
centre with seeded random orientations; the resulting returns feed the
summary table (average / median / best / worst over all episodes) and the
per-region quartiles behind violin-style plots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..env.episode import episode_return
from ..env.kinematics import spawn_in
from ..env.types import NUM_ACTIONS, EnvParams, LabyrinthMap
from ..evolution.engine import _map_tasks
from ..evolution.rng import TAG_TEST, seed_for
from ..tpg.compiled import CompiledGraphs, run_compiled_episode
from ..tpg.serialize import Champion

CSV_HEADER = "region_id,episode,seed,return,steps,reached_goal"


@dataclass(frozen=True)
class TestEpisodeRow:
    region_id: int
    episode: int
    seed: int
    return_: float
    steps: int
    reached_goal: bool

    def csv_row(self) -> str:
        return (
            f"{self.region_id},{self.episode},{self.seed},{self.return_!r},"
            f"{self.steps},{int(self.reached_goal)}"
        )


@dataclass
class RoomTestReport:
    rows: list[TestEpisodeRow]
    episodes_per_region: int

    @property
    def region_returns(self) -> dict[int, list[float]]:
        out: dict[int, list[float]] = {}
        for row in self.rows:
            out.setdefault(row.region_id, []).append(row.return_)
        return out

    @property
    def returns(self) -> list[float]:
        return [row.return_ for row in self.rows]

    @property
    def average(self) -> float:
        return math.fsum(self.returns) / len(self.rows)

    @property
    def median(self) -> float:
        return float(np.median(self.returns))

    @property
    def best(self) -> float:
        return max(self.returns)

    @property
    def worst(self) -> float:
        return min(self.returns)

    def region_quartiles(self) -> dict[int, tuple[float, float, float]]:
        out = {}
        for rid, vals in sorted(self.region_returns.items()):
            q1, q2, q3 = np.percentile(vals, [25.0, 50.0, 75.0])
            out[rid] = (float(q1), float(q2), float(q3))
        return out

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        lines.extend(row.csv_row() for row in self.rows)
        return "\n".join(lines) + "\n"

    def quartiles_csv(self) -> str:
        lines = ["region_id,q1,median,q3"]
        for rid, (q1, q2, q3) in self.region_quartiles().items():
            lines.append(f"{rid},{q1!r},{q2!r},{q3!r}")
        return "\n".join(lines) + "\n"

    def summary_text(self) -> str:
        lines = [
            f"episodes {len(self.rows)} "
            f"({self.episodes_per_region} per region x {len(self.region_returns)} regions)",
            f"average {self.average:.3f}",
            f"median {self.median:.3f}",
            f"best {self.best:.3f}",
            f"worst {self.worst:.3f}",
        ]
        return "\n".join(lines) + "\n"


def run_test_protocol(
    champion: Champion,
    m: LabyrinthMap,
    env: EnvParams,
    seed: int,
    episodes_per_region: int = 100,
    threads: int = 1,
    record: bool = False,
) -> tuple[RoomTestReport, dict[int, list[np.ndarray]] | None]:
    """Run the full per-region battery for a champion.

    With ``record`` the per-episode pose trajectories are returned too,
    keyed by region, for path rendering.
    """
    cg = CompiledGraphs(champion.bundle, champion.num_registers, champion.num_actions)
    region_ids = sorted(m.regions)
    tasks = [(rid, ep) for rid in region_ids for ep in range(episodes_per_region)]

    def one(task: tuple[int, int]):
        rid, ep = task
        sub_seed = seed_for(seed, TAG_TEST, rid, ep)
        pose = spawn_in(m, rid, np.random.default_rng(sub_seed))
        steps, reached, traj = run_compiled_episode(
            cg, m, env, champion.root_id, pose, record=record
        )
        row = TestEpisodeRow(
            region_id=rid,
            episode=ep,
            seed=sub_seed,
            return_=episode_return(reached, steps, env.max_steps),
            steps=steps,
            reached_goal=reached,
        )
        return row, traj

    results = _map_tasks(one, tasks, threads)
    rows = [row for row, _ in results]
    trajectories: dict[int, list[np.ndarray]] | None = None
    if record:
        trajectories = {rid: [] for rid in region_ids}
        for (rid, _), (_, traj) in zip(tasks, results):
            trajectories[rid].append(traj)
    return RoomTestReport(rows=rows, episodes_per_region=episodes_per_region), trajectories


def write_report(report: RoomTestReport, out_dir: Path, prefix: str = "test") -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, text in (
        (f"{prefix}_episodes.csv", report.to_csv()),
        (f"{prefix}_quartiles.csv", report.quartiles_csv()),
        (f"{prefix}_summary.txt", report.summary_text()),
    ):
        p = out_dir / name
        p.write_text(text, encoding="utf-8")
        paths.append(p)
    return paths
