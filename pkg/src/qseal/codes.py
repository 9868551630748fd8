"""Steane [[7,1,3]] and five-qubit [[5,1,3]] codes.

Syndromes are measured as direct projective Pauli measurements on the code
block, one bit per generator (0 for eigenvalue +1). Encoding projects
``|0...0>`` onto the code space with the stabilizer-group average, so the
logical basis is fixed by the generators and the logical Z operator rather
than by a particular encoder circuit.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Sequence, Union

import numpy as np

from .rng import RandomStream
from .state import (
    PauliString,
    QuantumState,
    apply_pauli,
    measure_pauli,
    single_qubit,
)

# [7,4] Hamming parity checks; column j is the binary expansion of j + 1.
HAMMING_7_4 = (
    (0, 0, 0, 1, 1, 1, 1),
    (0, 1, 1, 0, 0, 1, 1),
    (1, 0, 1, 0, 1, 0, 1),
)


@dataclass(frozen=True)
class CssCodeSpec:
    name: str
    n: int
    k: int
    d: int
    x_checks: tuple[tuple[int, ...], ...]
    z_checks: tuple[tuple[int, ...], ...]
    logical_x: PauliString
    logical_z: PauliString

    @property
    def t(self) -> int:
        return (self.d - 1) // 2

    @property
    def generators(self) -> tuple[PauliString, ...]:
        """X-type checks in row order, then Z-type checks."""
        xs = tuple(PauliString("".join("X" if b else "I" for b in row)) for row in self.x_checks)
        zs = tuple(PauliString("".join("Z" if b else "I" for b in row)) for row in self.z_checks)
        return xs + zs


@dataclass(frozen=True)
class StabilizerCodeSpec:
    name: str
    n: int
    k: int
    d: int
    generators: tuple[PauliString, ...]
    logical_z: PauliString
    logical_x: PauliString

    @property
    def t(self) -> int:
        return (self.d - 1) // 2


CodeSpec = Union[CssCodeSpec, StabilizerCodeSpec]


def steane_spec() -> CssCodeSpec:
    return CssCodeSpec(
        name="steane",
        n=7,
        k=1,
        d=3,
        x_checks=HAMMING_7_4,
        z_checks=HAMMING_7_4,
        logical_x=PauliString("XXXIIII"),
        logical_z=PauliString("ZZZIIII"),
    )


def perfect_code_spec() -> StabilizerCodeSpec:
    return StabilizerCodeSpec(
        name="perfect5",
        n=5,
        k=1,
        d=3,
        generators=tuple(PauliString(g) for g in ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")),
        logical_z=PauliString("ZZZZZ"),
        logical_x=PauliString("XXXXX"),
    )


def syndrome_of(code: CodeSpec, error: PauliString) -> tuple[int, ...]:
    """Generator-commutation pattern of ``error`` (1 = anticommutes)."""
    return tuple(int(not g.commutes(error)) for g in code.generators)


def _paulis_up_to(n: int, weight: int, letters: str = "XYZ"):
    for w in range(weight + 1):
        for support in combinations(range(n), w):
            for choice in product(letters, repeat=w):
                out = ["I"] * n
                for q, c in zip(support, choice):
                    out[q] = c
                yield PauliString("".join(out))


@lru_cache(maxsize=None)
def _lookup(code: CodeSpec, letters: str) -> dict[tuple[int, ...], PauliString]:
    table: dict[tuple[int, ...], PauliString] = {}
    for err in _paulis_up_to(code.n, code.t, letters):
        table.setdefault(syndrome_of(code, err), err)
    return table


def recovery(code: CodeSpec, syndrome: Sequence[int]) -> PauliString | None:
    """Minimum-weight Pauli consistent with ``syndrome``, or None if no
    error of weight <= t explains it.

    CSS codes decode the X-check and Z-check halves independently, so a Y
    error is the composition of one Z and one X lookup.
    """
    syndrome = tuple(int(b) for b in syndrome)
    if len(syndrome) != len(code.generators):
        raise ValueError(f"syndrome has {len(syndrome)} bits, code has {len(code.generators)} generators")
    if not isinstance(code, CssCodeSpec):
        return _lookup(code, "XYZ").get(syndrome)
    nx = len(code.x_checks)
    zfix = _lookup(code, "Z").get(syndrome[:nx] + (0,) * len(code.z_checks))
    xfix = _lookup(code, "X").get((0,) * nx + syndrome[nx:])
    if zfix is None or xfix is None:
        return None
    return PauliString.from_symplectic(xfix.x, zfix.z)


@lru_cache(maxsize=None)
def logical_basis(code: CodeSpec) -> tuple[QuantumState, QuantumState]:
    """``(|0_L>, |1_L>)`` on ``code.n`` qubits."""
    if code.k != 1:
        raise ValueError(f"only k=1 codes are supported, got k={code.k}")
    projectors = list(code.generators) + [code.logical_z]
    for start in range(1 << code.n):
        psi = QuantumState.basis(code.n, start).amplitudes.copy()
        for g in projectors:
            psi = 0.5 * (psi + apply_pauli(QuantumState._wrap(psi), g).amplitudes)
        norm = np.linalg.norm(psi)
        if norm > 1e-6:
            break
    else:  # pragma: no cover - the generators always leave a code space
        raise ValueError(f"{code.name}: empty code space")
    zero = QuantumState._wrap(psi / norm)
    one = apply_pauli(zero, code.logical_x)
    return zero, one


def encode(code: CodeSpec, logical) -> QuantumState:
    """Encode a 1-qubit state (named, ``(alpha, beta)``, or QuantumState)."""
    if code.k != 1:
        raise ValueError(f"only k=1 codes are supported, got k={code.k}")
    alpha, beta = single_qubit(logical).amplitudes
    zero, one = logical_basis(code)
    return QuantumState._wrap(alpha * zero.amplitudes + beta * one.amplitudes)


def _check_block(code: CodeSpec, state: QuantumState, block: Sequence[int]) -> list[int]:
    block = [int(q) for q in block]
    if len(block) != code.n:
        raise ValueError(f"block has {len(block)} qubits, {code.name} needs {code.n}")
    if len(set(block)) != len(block) or not all(0 <= q < state.num_qubits for q in block):
        raise IndexError(f"invalid block {block} for a {state.num_qubits}-qubit state")
    return block


def measure_syndrome(
    state: QuantumState, code: CodeSpec, block: Sequence[int], rng: RandomStream
) -> tuple[list[int], QuantumState]:
    block = _check_block(code, state, block)
    bits = []
    for g in code.generators:
        ev, state = measure_pauli(state, g.embed(block, state.num_qubits), rng)
        bits.append(0 if ev == 1 else 1)
    return bits, state


def correct(
    state: QuantumState, code: CodeSpec, block: Sequence[int], syndrome: Sequence[int]
) -> tuple[QuantumState, bool]:
    """Apply the minimum-weight recovery; ``(state, False)`` if uncorrectable."""
    block = _check_block(code, state, block)
    fix = recovery(code, syndrome)
    if fix is None:
        return state, False
    if fix.weight == 0:
        return state, True
    return apply_pauli(state, fix.embed(block, state.num_qubits)), True


def decode_logical_measure(
    state: QuantumState, code: CodeSpec, block: Sequence[int], rng: RandomStream
) -> tuple[int, QuantumState]:
    block = _check_block(code, state, block)
    ev, state = measure_pauli(state, code.logical_z.embed(block, state.num_qubits), rng)
    return (0 if ev == 1 else 1), state


def to_text(code: CodeSpec) -> str:
    """Check matrix as 0/1 rows, X block then Z block, one row per generator."""
    lines = [f"# {code.name} [[{code.n},{code.k},{code.d}]]"]
    for g in code.generators:
        lines.append("".join(map(str, g.x)) + " " + "".join(map(str, g.z)))
    return "\n".join(lines)
