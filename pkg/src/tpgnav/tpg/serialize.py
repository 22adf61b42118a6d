"""Champion files: a versioned, deterministic text format.

A champion is the closed subgraph reachable from one root ensemble, plus
the configuration needed to run it (observation size, register count,
action order) and free-form provenance. Saving is deterministic (entries
sorted by id, metadata by key) and load/save round-trips bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..env.types import Action
from .graph import Ensemble, GraphBundle, Learner, reachable_from
from .programs import Program

FORMAT_HEADER = "tpgnav-champion v1"

_ACTION_NAMES = " ".join(a.name for a in Action)


class ChampionFormatError(ValueError):
    """Raised for malformed champion files; names the offending line."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass
class Champion:
    """A closed, runnable policy graph with provenance metadata."""

    bundle: GraphBundle
    root_id: int
    state_dim: int
    num_registers: int
    num_actions: int
    provenance: dict[str, str] = field(default_factory=dict)

    def validate(self) -> None:
        if self.root_id not in self.bundle.ensembles:
            raise ValueError(f"root ensemble {self.root_id} missing from bundle")
        teams, learners, programs = reachable_from(self.bundle, self.root_id)
        if teams != set(self.bundle.ensembles):
            raise ValueError("bundle contains ensembles unreachable from the root")
        if learners != set(self.bundle.learners):
            raise ValueError("bundle contains unreachable learners")
        if programs != set(self.bundle.programs):
            raise ValueError("bundle contains unreachable programs")
        for program in self.bundle.programs.values():
            program.validate(self.state_dim)


def extract_champion(
    bundle: GraphBundle,
    root_id: int,
    state_dim: int,
    num_registers: int,
    num_actions: int,
    provenance: dict[str, str] | None = None,
) -> Champion:
    """Copy the closed subgraph of ``root_id`` out of a larger bundle.

    Pointer learners lose their retained (disabled) action programs: the
    champion keeps exactly the decision function.
    """
    teams, learners, programs = reachable_from(bundle, root_id)
    sub = GraphBundle(
        programs={pid: bundle.programs[pid] for pid in programs},
        learners={},
        ensembles={eid: bundle.ensembles[eid] for eid in teams},
    )
    for lid in learners:
        learner = bundle.learners[lid]
        if learner.action_team is not None:
            learner = Learner(
                id=learner.id,
                context_id=learner.context_id,
                action_program_id=None,
                action_team=learner.action_team,
            )
        sub.learners[lid] = learner
    champion = Champion(
        bundle=sub,
        root_id=root_id,
        state_dim=state_dim,
        num_registers=num_registers,
        num_actions=num_actions,
        provenance=dict(provenance or {}),
    )
    champion.validate()
    return champion


def save_champion(champion: Champion) -> str:
    lines = [
        FORMAT_HEADER,
        f"state_dim {champion.state_dim}",
        f"num_registers {champion.num_registers}",
        f"num_actions {champion.num_actions}",
        f"actions {_ACTION_NAMES}",
        f"root {champion.root_id}",
    ]
    for key in sorted(champion.provenance):
        lines.append(f"meta {key} {champion.provenance[key]}")
    for pid in sorted(champion.bundle.programs):
        program = champion.bundle.programs[pid]
        lines.append(f"program {pid} {len(program.code)}")
        for row in program.code:
            lines.append(" ".join(str(int(v)) for v in row))
    for lid in sorted(champion.bundle.learners):
        learner = champion.bundle.learners[lid]
        if learner.acts_directly:
            lines.append(
                f"learner {lid} context {learner.context_id} "
                f"action {learner.action_program_id}"
            )
        else:
            lines.append(
                f"learner {lid} context {learner.context_id} team {learner.action_team}"
            )
    for eid in sorted(champion.bundle.ensembles):
        team = champion.bundle.ensembles[eid]
        members = " ".join(str(m) for m in team.member_ids)
        lines.append(f"ensemble {eid} members {members}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ChampionFormatError(line_no, f"bad {what}: {token!r}") from None


def load_champion(text: str) -> Champion:
    lines = text.splitlines()
    if not lines or lines[0].strip() != FORMAT_HEADER:
        raise ChampionFormatError(1, f"expected header {FORMAT_HEADER!r}")
    bundle = GraphBundle()
    header: dict[str, int] = {}
    provenance: dict[str, str] = {}
    root_id: int | None = None
    saw_end = False
    i = 1
    while i < len(lines):
        line_no = i + 1
        line = lines[i].strip()
        i += 1
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "end":
            saw_end = True
            break
        if kind in ("state_dim", "num_registers", "num_actions"):
            if len(parts) != 2:
                raise ChampionFormatError(line_no, f"malformed {kind} line")
            header[kind] = _parse_int(parts[1], line_no, kind)
        elif kind == "actions":
            if " ".join(parts[1:]) != _ACTION_NAMES:
                raise ChampionFormatError(
                    line_no, f"action order {parts[1:]} does not match {_ACTION_NAMES!r}"
                )
        elif kind == "root":
            root_id = _parse_int(parts[1], line_no, "root id")
        elif kind == "meta":
            if len(parts) < 3:
                raise ChampionFormatError(line_no, "malformed meta line")
            provenance[parts[1]] = " ".join(parts[2:])
        elif kind == "program":
            if len(parts) != 3:
                raise ChampionFormatError(line_no, "malformed program line")
            pid = _parse_int(parts[1], line_no, "program id")
            n = _parse_int(parts[2], line_no, "instruction count")
            if n < 1:
                raise ChampionFormatError(line_no, f"program {pid} has no instructions")
            if i + n > len(lines):
                raise ChampionFormatError(line_no, f"program {pid} truncated")
            code = np.empty((n, 5), dtype=np.int32)
            for k in range(n):
                row_no = i + k + 1
                tokens = lines[i + k].split()
                if len(tokens) != 5:
                    raise ChampionFormatError(row_no, "instruction needs 5 fields")
                for j in range(5):
                    code[k, j] = _parse_int(tokens[j], row_no, "instruction field")
            i += n
            if pid in bundle.programs:
                raise ChampionFormatError(line_no, f"duplicate program id {pid}")
            bundle.programs[pid] = Program(
                id=pid, code=code, num_registers=header.get("num_registers", 8)
            )
        elif kind == "learner":
            if len(parts) != 6 or parts[2] != "context" or parts[4] not in ("action", "team"):
                raise ChampionFormatError(line_no, "malformed learner line")
            lid = _parse_int(parts[1], line_no, "learner id")
            ctx = _parse_int(parts[3], line_no, "context id")
            ref = _parse_int(parts[5], line_no, "action ref")
            if lid in bundle.learners:
                raise ChampionFormatError(line_no, f"duplicate learner id {lid}")
            if parts[4] == "action":
                bundle.learners[lid] = Learner(lid, ctx, ref, None)
            else:
                bundle.learners[lid] = Learner(lid, ctx, None, ref)
        elif kind == "ensemble":
            if len(parts) < 4 or parts[2] != "members":
                raise ChampionFormatError(line_no, "malformed ensemble line")
            eid = _parse_int(parts[1], line_no, "ensemble id")
            members = tuple(
                _parse_int(tok, line_no, "member id") for tok in parts[3:]
            )
            if eid in bundle.ensembles:
                raise ChampionFormatError(line_no, f"duplicate ensemble id {eid}")
            bundle.ensembles[eid] = Ensemble(eid, members)
        else:
            raise ChampionFormatError(line_no, f"unknown record {kind!r}")
    if not saw_end:
        raise ChampionFormatError(len(lines), "missing end marker")
    for key in ("state_dim", "num_registers", "num_actions"):
        if key not in header:
            raise ChampionFormatError(len(lines), f"missing {key}")
    if root_id is None:
        raise ChampionFormatError(len(lines), "missing root")
    champion = Champion(
        bundle=bundle,
        root_id=root_id,
        state_dim=header["state_dim"],
        num_registers=header["num_registers"],
        num_actions=header["num_actions"],
        provenance=provenance,
    )
    try:
        champion.validate()
    except Exception as exc:
        raise ChampionFormatError(len(lines), str(exc)) from exc
    return champion


def write_champion(champion: Champion, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(save_champion(champion))


def read_champion(path) -> Champion:
    with open(path, "r", encoding="utf-8") as fh:
        return load_champion(fh.read())
