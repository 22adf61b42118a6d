"""Map construction: the eight-room labyrinth, probe rooms, and text I/O.

The main labyrinth mirrors the classic "My Way Home" layout: 8 square
rooms on a 4x2 lattice joined by 10 corridors, with the goal vest sitting
in the corridor between the two bottom-right rooms. The 17 remaining
rooms/corridors are the legal spawn regions, numbered 10..26 so that low
numbers sit far from the goal:

        13 --14-- 17 --19-- 22 --23-- 24
        |         |         |         |
        12        16        21        25
        |         |         |         |
        10 --11-- 15 --18-- 20 --GG-- 26

Rooms carry distinct wall surface classes; every corridor (the goal
corridor included) shares one common surface class.
"""

from __future__ import annotations

import numpy as np

from .types import DEFAULT_AGENT_RADIUS, DEFAULT_CELL_SIZE, LabyrinthMap, Region

ROOM_CELLS = 9  # rooms are square, 9x9 cells
CORRIDOR_WIDTH = 3  # corridors are one third of a room wide
CORRIDOR_LENGTH = 9  # and one room-width long
_PITCH = ROOM_CELLS + CORRIDOR_LENGTH

CORRIDOR_SURFACE = 1
ROOM_LABELS_TOP = (13, 17, 22, 24)
ROOM_LABELS_BOTTOM = (10, 15, 20, 26)
# Display label -> wall surface class, rooms only; corridors share 1.
ROOM_SURFACES = {10: 2, 13: 3, 15: 4, 17: 5, 20: 6, 22: 7, 24: 8, 26: 9}

# (label, lattice column) for corridors; the bottom-right horizontal
# corridor is the goal corridor and carries no spawn label.
_TOP_H_CORRIDORS = ((14, 0), (19, 1), (23, 2))
_BOTTOM_H_CORRIDORS = ((11, 0), (18, 1))
_GOAL_CORRIDOR_COL = 2
_V_CORRIDORS = ((12, 0), (16, 1), (21, 2), (25, 3))


def _room_origin(col: int, row: int) -> tuple[int, int]:
    """Top-left cell (r, c) of the room at lattice position (col, row)."""
    return (1 + row * _PITCH, 1 + col * _PITCH)


def _rect_cells(r0: int, c0: int, nr: int, nc: int) -> frozenset[tuple[int, int]]:
    return frozenset((r, c) for r in range(r0, r0 + nr) for c in range(c0, c0 + nc))


def _rect_centre(r0: int, c0: int, nr: int, nc: int) -> tuple[int, int]:
    return (r0 + nr // 2, c0 + nc // 2)


def _carve(walls: np.ndarray, r0: int, c0: int, nr: int, nc: int) -> None:
    walls[r0 : r0 + nr, c0 : c0 + nc] = 0


def _paint_walls_adjacent(
    surface: np.ndarray, walls: np.ndarray, cells, surface_id: int
) -> None:
    """Stamp surface_id on wall cells edge-adjacent to any of the floor cells."""
    n_rows, n_cols = walls.shape
    for r, c in cells:
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            rr, cc = r + dr, c + dc
            if 0 <= rr < n_rows and 0 <= cc < n_cols and walls[rr, cc]:
                surface[rr, cc] = surface_id


def build_my_way_home(cell_size: float = DEFAULT_CELL_SIZE) -> LabyrinthMap:
    """Construct the eight-room labyrinth with its 17 spawn regions."""
    n_cols = 2 + 4 * ROOM_CELLS + 3 * CORRIDOR_LENGTH
    n_rows = 2 + 2 * ROOM_CELLS + CORRIDOR_LENGTH
    walls = np.ones((n_rows, n_cols), dtype=np.uint8)
    surface = np.zeros((n_rows, n_cols), dtype=np.int16)

    regions: dict[int, Region] = {}

    def add_region(label: int, kind: str, r0: int, c0: int, nr: int, nc: int) -> None:
        regions[label] = Region(
            region_id=label,
            label=f"{kind} {label}",
            cells=_rect_cells(r0, c0, nr, nc),
            centre_cell=_rect_centre(r0, c0, nr, nc),
        )

    # Rooms.
    room_rects: dict[int, tuple[int, int, int, int]] = {}
    for lattice_row, labels in ((0, ROOM_LABELS_TOP), (1, ROOM_LABELS_BOTTOM)):
        for lattice_col, label in enumerate(labels):
            r0, c0 = _room_origin(lattice_col, lattice_row)
            _carve(walls, r0, c0, ROOM_CELLS, ROOM_CELLS)
            room_rects[label] = (r0, c0, ROOM_CELLS, ROOM_CELLS)
            add_region(label, "room", r0, c0, ROOM_CELLS, ROOM_CELLS)

    # Horizontal corridors: full corridor-length east of a room, centred
    # on the room's east wall.
    corridor_rects: list[tuple[int, int, int, int]] = []
    h_off = (ROOM_CELLS - CORRIDOR_WIDTH) // 2
    for lattice_row, specs in ((0, _TOP_H_CORRIDORS), (1, _BOTTOM_H_CORRIDORS)):
        for label, lattice_col in specs:
            r0, c0 = _room_origin(lattice_col, lattice_row)
            rect = (r0 + h_off, c0 + ROOM_CELLS, CORRIDOR_WIDTH, CORRIDOR_LENGTH)
            _carve(walls, *rect)
            corridor_rects.append(rect)
            add_region(label, "corridor", *rect)

    # Vertical corridors between the room rows.
    for label, lattice_col in _V_CORRIDORS:
        r0, c0 = _room_origin(lattice_col, 0)
        rect = (r0 + ROOM_CELLS, c0 + h_off, CORRIDOR_LENGTH, CORRIDOR_WIDTH)
        _carve(walls, *rect)
        corridor_rects.append(rect)
        add_region(label, "corridor", *rect)

    # The goal corridor (no spawn region): bottom row, east of room 20.
    r0, c0 = _room_origin(_GOAL_CORRIDOR_COL, 1)
    goal_rect = (r0 + h_off, c0 + ROOM_CELLS, CORRIDOR_WIDTH, CORRIDOR_LENGTH)
    _carve(walls, *goal_rect)
    corridor_rects.append(goal_rect)
    # The vest occupies the central 3x3 block of the corridor, spanning its
    # full width so it cannot be walked past.
    gr, gc, gnr, gnc = goal_rect
    goal_cells = _rect_cells(gr, gc + (gnc - CORRIDOR_WIDTH) // 2, gnr, CORRIDOR_WIDTH)

    # Wall surfaces: corridors first, rooms second so the distinct room
    # texture wins at doorway jambs.
    for rect in corridor_rects:
        _paint_walls_adjacent(surface, walls, _rect_cells(*rect), CORRIDOR_SURFACE)
    for label, rect in room_rects.items():
        _paint_walls_adjacent(surface, walls, _rect_cells(*rect), ROOM_SURFACES[label])

    return LabyrinthMap(
        walls=walls,
        surface=surface,
        goal_cells=goal_cells,
        regions=regions,
        cell_size=cell_size,
        name="my-way-home",
    )


def build_probe_room(
    surface_id: int,
    side_length: float = 63 * DEFAULT_CELL_SIZE,
    cell_size: float = DEFAULT_CELL_SIZE,
    agent_radius: float = DEFAULT_AGENT_RADIUS,
) -> LabyrinthMap:
    """A single empty square room with no goal, used for behaviour probes.

    ``side_length`` is in world units; the default matches the labyrinth's
    long axis. All walls carry ``surface_id`` so a probe room can imitate
    the corridors or any one room of the labyrinth.
    """
    if side_length < 2.0 * agent_radius:
        raise ValueError(
            f"side_length {side_length} is below the minimum "
            f"{2.0 * agent_radius} (twice the agent radius)"
        )
    n = max(1, int(side_length / cell_size + 0.5))
    walls = np.ones((n + 2, n + 2), dtype=np.uint8)
    surface = np.zeros((n + 2, n + 2), dtype=np.int16)
    _carve(walls, 1, 1, n, n)
    _paint_walls_adjacent(surface, walls, _rect_cells(1, 1, n, n), surface_id)
    centre = _rect_centre(1, 1, n, n)
    regions = {
        0: Region(
            region_id=0,
            label="probe centre",
            cells=frozenset((centre,)),
            centre_cell=centre,
        )
    }
    return LabyrinthMap(
        walls=walls,
        surface=surface,
        goal_cells=frozenset(),
        regions=regions,
        cell_size=cell_size,
        name=f"probe-surface-{surface_id}",
    )


# --- text I/O -------------------------------------------------------------

_REGION_CHARS = "abcdefghijklmnopqrstuvwxyz"


def map_to_text(m: LabyrinthMap) -> str:
    """Plain-text export: one char per cell with a legend header.

    '#' wall, '.' unlabelled floor, 'G' goal cell, letters for spawn
    regions in ascending region id.
    """
    ordered = sorted(m.regions)
    if len(ordered) > len(_REGION_CHARS):
        raise ValueError("too many regions for single-char encoding")
    char_of = {rid: _REGION_CHARS[i] for i, rid in enumerate(ordered)}
    lines = [f"tpgnav-map v1 {m.name}", f"cell_size {m.cell_size!r}"]
    lines += [f"legend {char_of[rid]} {rid} {m.regions[rid].label}" for rid in ordered]
    lines.append(f"grid {m.n_rows} {m.n_cols}")
    canvas = np.full((m.n_rows, m.n_cols), ".", dtype="U1")
    canvas[m.walls == 1] = "#"
    for rid in ordered:
        ch = char_of[rid]
        for r, c in m.regions[rid].cells:
            canvas[r, c] = ch
    for r, c in m.goal_cells:
        canvas[r, c] = "G"
    lines += ["".join(row) for row in canvas]
    return "\n".join(lines) + "\n"


def map_from_ascii(
    art: str,
    cell_size: float = DEFAULT_CELL_SIZE,
    name: str = "ascii",
) -> LabyrinthMap:
    """Build a map from ASCII art (test helper).

    '#' wall, '.' floor, 'G' goal floor, letters a.. are spawn regions
    (a=0, b=1, ...). All walls get the corridor surface class.
    """
    rows = [line for line in art.splitlines() if line.strip()]
    width = max(len(r) for r in rows)
    walls = np.ones((len(rows), width), dtype=np.uint8)
    surface = np.zeros_like(walls, dtype=np.int16)
    goal: set[tuple[int, int]] = set()
    region_cells: dict[int, set[tuple[int, int]]] = {}
    for r, line in enumerate(rows):
        for c, ch in enumerate(line):
            if ch == "#" or ch == " ":
                continue
            walls[r, c] = 0
            if ch == "G":
                goal.add((r, c))
            elif ch != ".":
                rid = _REGION_CHARS.index(ch)
                region_cells.setdefault(rid, set()).add((r, c))
    floor_cells = [(r, c) for r in range(len(rows)) for c in range(width) if not walls[r, c]]
    _paint_walls_adjacent(surface, walls, floor_cells, CORRIDOR_SURFACE)
    regions = {}
    for rid, cells in region_cells.items():
        rs = sorted(cells)
        regions[rid] = Region(
            region_id=rid,
            label=f"region {rid}",
            cells=frozenset(cells),
            centre_cell=rs[len(rs) // 2],
        )
    return LabyrinthMap(
        walls=walls,
        surface=surface,
        goal_cells=frozenset(goal),
        regions=regions,
        cell_size=cell_size,
        name=name,
    )
