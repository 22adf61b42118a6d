"""Linear register-machine programs: the atomic decision substrate.

A program is an ordered list of instructions over ``num_registers``
general-purpose registers. Each instruction updates one register from
either another register or one attribute of the observation vector:

    R[target] <- R[target] op (R[source] if mode == 0 else state[input])

with op drawn from {+, -, *, /}. Division by a near-zero value leaves the
target unchanged and any non-finite result is replaced by 0, so programs
are total over finite inputs. Registers are zeroed at the start of every
execution: agents are purely reactive, nothing persists across decisions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

MODE_REGISTER = 0
MODE_INPUT = 1

OP_ADD = 0
OP_SUB = 1
OP_MUL = 2
OP_DIV = 3
NUM_OPS = 4
OP_NAMES = ("add", "sub", "mul", "div")

# Columns of a program's (n, 5) int32 code array.
COL_MODE, COL_TARGET, COL_OP, COL_SOURCE, COL_INPUT = range(5)

DIV_GUARD = 1e-10

DEFAULT_NUM_REGISTERS = 8
MAX_PROGRAM_LEN = 128


@dataclass(frozen=True)
class Instruction:
    """Typed view of one code row."""

    mode: int
    target: int
    op: int
    source: int
    input_index: int

    def validate(self, num_registers: int, state_dim: int) -> None:
        if self.mode not in (MODE_REGISTER, MODE_INPUT):
            raise ValueError(f"bad mode {self.mode}")
        if not 0 <= self.target < num_registers:
            raise ValueError(f"target {self.target} outside [0, {num_registers})")
        if not 0 <= self.op < NUM_OPS:
            raise ValueError(f"bad op {self.op}")
        if not 0 <= self.source < num_registers:
            raise ValueError(f"source {self.source} outside [0, {num_registers})")
        if not 0 <= self.input_index < state_dim:
            raise ValueError(f"input {self.input_index} outside [0, {state_dim})")

    def as_row(self) -> np.ndarray:
        return np.array(
            [self.mode, self.target, self.op, self.source, self.input_index],
            dtype=np.int32,
        )


@dataclass
class Program:
    """An immutable instruction sequence with a population-unique id."""

    id: int
    code: np.ndarray  # (n, 5) int32
    num_registers: int = DEFAULT_NUM_REGISTERS

    def __post_init__(self) -> None:
        self.code = np.ascontiguousarray(self.code, dtype=np.int32)
        if self.code.ndim != 2 or self.code.shape[1] != 5:
            raise ValueError(f"code must be (n, 5), got {self.code.shape}")
        if not 1 <= len(self.code) <= MAX_PROGRAM_LEN:
            raise ValueError(f"program length {len(self.code)} outside [1, {MAX_PROGRAM_LEN}]")

    def __len__(self) -> int:
        return len(self.code)

    def instruction(self, k: int) -> Instruction:
        m, t, o, s, i = (int(v) for v in self.code[k])
        return Instruction(m, t, o, s, i)

    def validate(self, state_dim: int) -> None:
        for k in range(len(self.code)):
            self.instruction(k).validate(self.num_registers, state_dim)


@njit(cache=True, nogil=True)
def run_code_slice(code, k0, k1, state, regs):
    """Execute rows [k0, k1) of a (possibly concatenated) code array."""
    regs[:] = 0.0
    for k in range(k0, k1):
        if code[k, 0] == 0:
            v = regs[code[k, 3]]
        else:
            v = state[code[k, 4]]
        tgt = code[k, 1]
        op = code[k, 2]
        if op == 0:
            r = regs[tgt] + v
        elif op == 1:
            r = regs[tgt] - v
        elif op == 2:
            r = regs[tgt] * v
        else:
            if -DIV_GUARD < v < DIV_GUARD:
                continue
            r = regs[tgt] / v
        if not np.isfinite(r):
            r = 0.0
        regs[tgt] = r


@njit(cache=True, nogil=True)
def run_program_code(code, state, regs):
    """Execute one program's code over ``state``, filling ``regs``."""
    run_code_slice(code, 0, code.shape[0], state, regs)


def exec_program(program: Program, state: np.ndarray) -> np.ndarray:
    """Run a program on an observation vector; returns the final registers.

    Pure: identical (program, state) yield bit-identical registers.
    """
    regs = np.empty(program.num_registers, dtype=np.float64)
    run_program_code(program.code, np.ascontiguousarray(state, dtype=np.float64), regs)
    return regs


def indexed_attributes(program: Program) -> set[int]:
    """Distinct observation attributes a program references.

    This is a static scan over input-mode instructions, not a count of
    reads reachable at runtime.
    """
    mask = program.code[:, COL_MODE] == MODE_INPUT
    return set(int(v) for v in program.code[mask, COL_INPUT])
