"""Core value types for the labyrinth environment."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

# World geometry defaults. One occupancy cell is 16 map units, so the
# default labyrinth (63 cells on its long axis) spans ~1000 units, and
# probe rooms requested at side_length=1000 match the labyrinth footprint.
DEFAULT_CELL_SIZE = 16.0
DEFAULT_AGENT_RADIUS = 4.0

# Kinematics defaults: 10 degrees per turn decision, 3.2 units per forward
# decision (~315 decisions to cross the long axis, so the 2100-step budget
# is binding but sufficient).
DEFAULT_TURN_DELTA = 10.0
DEFAULT_MOVE_STEP = 3.2

DEFAULT_FOV_DEG = 90.0
DEFAULT_FRAME_WIDTH = 160
DEFAULT_FRAME_HEIGHT = 120

EPISODE_CAP = 2100

# Per-step cost is 1/10000; returns are computed with integer division by
# 10000 so that the canonical extremes (-0.21 for a 2100-step timeout,
# 0.997 for goal at step 30) are exact in double precision.
STEP_COST_DENOM = 10000.0
GOAL_BONUS = 1.0


class Action(IntEnum):
    """Discrete agent actions. Index order is fixed: action programs map
    register index -> action, so 0/1/2 must never be reordered."""

    MOVE_FORWARD = 0
    TURN_LEFT = 1
    TURN_RIGHT = 2


NUM_ACTIONS = len(Action)


@dataclass(frozen=True)
class AgentPose:
    """Continuous agent state: world position plus heading in degrees.

    Heading is normalized to [0, 360). 0 degrees points along +x; 90
    degrees points along +y (downward on the ASCII map).
    """

    x: float
    y: float
    heading: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "heading", self.heading % 360.0)

    @property
    def heading_rad(self) -> float:
        return math.radians(self.heading)


@dataclass
class Frame:
    """A rendered grayscale observation.

    ``intensities`` is row-major (row 0 = top of view), length
    ``width * height``, values in [0, 1].
    """

    width: int
    height: int
    intensities: np.ndarray

    def validate(self) -> None:
        if self.intensities.shape != (self.width * self.height,):
            raise ValueError(
                f"frame buffer has {self.intensities.shape}, "
                f"expected ({self.width * self.height},)"
            )
        if not np.all(np.isfinite(self.intensities)):
            raise ValueError("frame contains non-finite intensities")
        lo, hi = self.intensities.min(), self.intensities.max()
        if lo < 0.0 or hi > 1.0:
            raise ValueError(f"frame intensities outside [0, 1]: [{lo}, {hi}]")

    def as_image(self) -> np.ndarray:
        """2-D (height, width) view of the flat buffer."""
        return self.intensities.reshape(self.height, self.width)


@dataclass(frozen=True)
class StepOutcome:
    """Result of one environment step."""

    frame: Frame
    reward: float
    terminal: bool
    t: int


@dataclass(frozen=True)
class EnvParams:
    """Tunable environment knobs shared by episode runners."""

    width: int = DEFAULT_FRAME_WIDTH
    height: int = DEFAULT_FRAME_HEIGHT
    fov_deg: float = DEFAULT_FOV_DEG
    turn_delta: float = DEFAULT_TURN_DELTA
    move_step: float = DEFAULT_MOVE_STEP
    agent_radius: float = DEFAULT_AGENT_RADIUS
    max_steps: int = EPISODE_CAP

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError("frame dimensions must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if not 0.0 < self.fov_deg < 180.0:
            raise ValueError("fov_deg must lie in (0, 180)")

    @property
    def state_dim(self) -> int:
        return self.width * self.height


@dataclass(frozen=True)
class Region:
    """A named spawn region: a set of floor cells plus its display label."""

    region_id: int
    label: str
    cells: frozenset[tuple[int, int]]  # (row, col)
    centre_cell: tuple[int, int]


@dataclass
class LabyrinthMap:
    """Occupancy-grid world: walls, per-wall surface classes, goal cells
    and spawn regions.

    ``walls`` is uint8 (1 = wall), indexed [row, col]; world x maps to
    columns and world y to rows (y grows downward). ``surface`` gives the
    texture class of each wall cell (0 for never-visible interior walls).
    """

    walls: np.ndarray
    surface: np.ndarray
    goal_cells: frozenset[tuple[int, int]]
    regions: dict[int, Region]
    cell_size: float = DEFAULT_CELL_SIZE
    name: str = "map"

    # Filled in __post_init__.
    goal_mask: np.ndarray = field(init=False, repr=False)
    goal_xy: tuple[float, float] | None = field(init=False)

    def __post_init__(self) -> None:
        self.walls = np.ascontiguousarray(self.walls, dtype=np.uint8)
        self.surface = np.ascontiguousarray(self.surface, dtype=np.int16)
        if self.walls.shape != self.surface.shape:
            raise ValueError("walls and surface grids must share a shape")
        mask = np.zeros(self.walls.shape, dtype=np.uint8)
        for r, c in self.goal_cells:
            if self.walls[r, c]:
                raise ValueError(f"goal cell ({r}, {c}) is a wall")
            mask[r, c] = 1
        self.goal_mask = mask
        if self.goal_cells:
            rows = np.array([rc[0] for rc in self.goal_cells], dtype=np.float64)
            cols = np.array([rc[1] for rc in self.goal_cells], dtype=np.float64)
            self.goal_xy = (
                (cols.mean() + 0.5) * self.cell_size,
                (rows.mean() + 0.5) * self.cell_size,
            )
        else:
            self.goal_xy = None
        for region in self.regions.values():
            for r, c in region.cells:
                if self.walls[r, c]:
                    raise ValueError(
                        f"spawn region {region.region_id} contains wall cell ({r}, {c})"
                    )
            if self.goal_cells & region.cells:
                raise ValueError(
                    f"spawn region {region.region_id} overlaps the goal region"
                )

    @property
    def n_rows(self) -> int:
        return self.walls.shape[0]

    @property
    def n_cols(self) -> int:
        return self.walls.shape[1]

    @property
    def width(self) -> float:
        """World width in map units."""
        return self.n_cols * self.cell_size

    @property
    def height(self) -> float:
        return self.n_rows * self.cell_size

    @property
    def room_labels(self) -> dict[int, str]:
        return {rid: region.label for rid, region in self.regions.items()}

    @property
    def has_goal(self) -> bool:
        return bool(self.goal_cells)

    def region_centre(self, region_id: int) -> tuple[float, float]:
        """World coordinates of the centre of a spawn region's centre cell."""
        region = self.regions.get(region_id)
        if region is None:
            raise KeyError(f"unknown spawn region {region_id}")
        r, c = region.centre_cell
        return ((c + 0.5) * self.cell_size, (r + 0.5) * self.cell_size)

    def cell_at(self, x: float, y: float) -> tuple[int, int]:
        return (int(y // self.cell_size), int(x // self.cell_size))

    def is_floor(self, x: float, y: float) -> bool:
        r, c = self.cell_at(x, y)
        if r < 0 or c < 0 or r >= self.n_rows or c >= self.n_cols:
            return False
        return self.walls[r, c] == 0
