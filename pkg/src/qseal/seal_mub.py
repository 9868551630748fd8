"""Basis sealing of classical bits.

Each message bit becomes a block of ``N`` qubits: ``m`` of them hold the bit
in the reading (computational) basis and the other ``N - m`` hold a random
``|+>`` or ``|->``. Positions inside a block are shuffled. Only the sealer
knows which qubit is which, so only the sealer can manufacture reference
copies for the SWAP-test verification.

``MubSealParams.bp()`` gives three qubits per bit with two message qubits;
``MubSealParams.ss(N, m)`` gives the minority variant with ``m / N < 1/2``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .rng import RandomStream
from .state import HADAMARD, READING, ProductRegister, QuantumState, single_qubit

log = logging.getLogger(__name__)

SEALING_VALUES = ("+", "-")


@dataclass(frozen=True)
class MubSealParams:
    block_size: int
    message_count: int
    sealing_basis: str = HADAMARD

    def __post_init__(self):
        if not 1 <= self.message_count <= self.block_size:
            raise ValueError(
                f"need 1 <= message_count <= block_size, got m={self.message_count}, "
                f"N={self.block_size}"
            )
        if self.sealing_basis != HADAMARD:
            raise ValueError("only the hadamard sealing basis is implemented")

    @classmethod
    def bp(cls) -> "MubSealParams":
        return cls(3, 2)

    @classmethod
    def ss(cls, block_size: int, message_count: int) -> "MubSealParams":
        if 2 * message_count >= block_size:
            raise ValueError("the minority scheme needs message_count / block_size < 1/2")
        return cls(block_size, message_count)

    @property
    def sealing_count(self) -> int:
        return self.block_size - self.message_count

    @property
    def message_fraction(self) -> float:
        return self.message_count / self.block_size


@dataclass(frozen=True)
class BlockSecret:
    bit: int
    # permutation[j] is the in-block position of slot j; slots < m carry the bit
    permutation: tuple[int, ...]
    sealing_values: tuple[str, ...]

    def position_states(self) -> list[str]:
        m = len(self.permutation) - len(self.sealing_values)
        out = [""] * len(self.permutation)
        for slot, pos in enumerate(self.permutation):
            out[pos] = str(self.bit) if slot < m else self.sealing_values[slot - m]
        return out

    def sealing_positions(self) -> list[int]:
        m = len(self.permutation) - len(self.sealing_values)
        return sorted(self.permutation[m:])


@dataclass(frozen=True)
class SealSecret:
    params: MubSealParams
    blocks: tuple[BlockSecret, ...]
    seed: int
    path: tuple[int, ...] = ()

    @property
    def num_qubits(self) -> int:
        return len(self.blocks) * self.params.block_size

    @property
    def bits(self) -> list[int]:
        return [b.bit for b in self.blocks]

    def locate(self, index: int) -> tuple[int, int]:
        if not 0 <= index < self.num_qubits:
            raise IndexError(f"qubit {index} out of range for {self.num_qubits} sealed qubits")
        return divmod(index, self.params.block_size)

    def is_sealing(self, index: int) -> bool:
        blk, pos = self.locate(index)
        return pos in self.blocks[blk].sealing_positions()

    def sealing_indices(self) -> list[int]:
        n = self.params.block_size
        return [i * n + p for i, b in enumerate(self.blocks) for p in b.sealing_positions()]

    def message_indices(self) -> list[int]:
        sealing = set(self.sealing_indices())
        return [i for i in range(self.num_qubits) if i not in sealing]


@dataclass
class SealedMessage:
    register: ProductRegister
    block_count: int
    block_size: int

    def __post_init__(self):
        if self.register.num_qubits != self.block_count * self.block_size:
            raise ValueError("register size does not match block_count * block_size")

    @property
    def num_qubits(self) -> int:
        return self.block_count * self.block_size

    def block_labels(self, block: int) -> list[int]:
        n = self.block_size
        return list(range(block * n, (block + 1) * n))

    def copy(self) -> "SealedMessage":
        return SealedMessage(self.register.copy(), self.block_count, self.block_size)

    def block_state(self, block: int) -> QuantumState:
        return self.register.state_of(self.block_labels(block))


@dataclass
class MajorityRead:
    bits: list[int]
    ties: list[bool] = field(default_factory=list)
    outcomes: list[list[int]] = field(default_factory=list)


@dataclass
class VerificationReport:
    tested: list[int]
    outcomes: list[int]
    sealing_tested: int
    message_tested: int
    detection_power: float

    @property
    def broken(self) -> bool:
        return any(self.outcomes)

    @property
    def verdict(self) -> str:
        return "broken" if self.broken else "sealed"


def majority_bit(outcomes: Sequence[int]) -> tuple[int, bool]:
    """Majority of ``outcomes``; ties go to 0 and are flagged."""
    ones = sum(outcomes)
    zeros = len(outcomes) - ones
    if ones == zeros:
        return 0, True
    return int(ones > zeros), False


def seal_bits(
    bits: Iterable[int], params: MubSealParams, rng: RandomStream
) -> tuple[SealedMessage, SealSecret]:
    blocks = []
    states = []
    for b in bits:
        b = int(b)
        if b not in (0, 1):
            raise ValueError(f"message bits must be 0 or 1, got {b}")
        perm = tuple(rng.permutation(params.block_size))
        vals = tuple(SEALING_VALUES[v] for v in rng.bits(params.sealing_count))
        blk = BlockSecret(b, perm, vals)
        blocks.append(blk)
        states.extend(single_qubit(s) for s in blk.position_states())
    register = ProductRegister.from_states(states)
    secret = SealSecret(params, tuple(blocks), rng.seed, rng.path)
    return SealedMessage(register, len(blocks), params.block_size), secret


def read_majority(
    sealed: SealedMessage, params: MubSealParams, rng: RandomStream
) -> tuple[MajorityRead, SealedMessage]:
    """Measure every qubit in the reading basis and take a per-block majority.

    Needs no secret: anyone holding the message can do this.
    """
    if sealed.block_size != params.block_size:
        raise ValueError("params do not match the sealed message's block size")
    out = sealed.copy()
    result = MajorityRead([])
    for blk in range(out.block_count):
        outcomes = out.register.measure(out.block_labels(blk), READING, rng)
        bit, tie = majority_bit(outcomes)
        if tie:
            log.debug("block %d: majority tie, reading 0", blk)
        result.bits.append(bit)
        result.ties.append(tie)
        result.outcomes.append(outcomes)
    return result, out


def reference_state(secret: SealSecret, index: int) -> QuantumState:
    """The single-qubit state the sealer prepared at global ``index``."""
    blk, pos = secret.locate(index)
    return single_qubit(secret.blocks[blk].position_states()[pos])


def detection_power(params: MubSealParams, s: int) -> float:
    """Chance that testing ``s`` sealing qubits flags an honest full read.

    A reading-basis outcome overlaps a hadamard-basis reference with
    ``|<+|0>|^2 = 1/2``, so each SWAP test fires with probability 1/4.
    """
    if s < 0:
        raise ValueError("s must be non-negative")
    return 1.0 - 0.75**s


def verify(
    sealed: SealedMessage,
    secret: SealSecret,
    test_indices: Iterable[int],
    rng: RandomStream,
    *,
    allow_full: bool = False,
) -> tuple[VerificationReport, SealedMessage]:
    """SWAP-test each index in ``test_indices`` against a fresh reference copy.

    Handing out copies of every qubit would let the holder read the message
    from the copies, so the tested set must be a proper subset unless
    ``allow_full`` is set (sealer-side checks, where that does not matter).
    """
    tested = sorted({int(i) for i in test_indices})
    total = sealed.num_qubits
    if secret.num_qubits != total:
        raise ValueError("secret does not belong to this message")
    for i in tested:
        secret.locate(i)
    if not allow_full and total and len(tested) >= total:
        raise ValueError("test_indices must be a proper subset of the sealed qubits")
    out = sealed.copy()
    reg = out.register
    outcomes = []
    n_seal = 0
    for i in tested:
        (ref,) = reg.add(reference_state(secret, i))
        (anc,) = reg.add(QuantumState.zeros(1))
        outcomes.append(reg.swap_test(i, ref, anc, rng))
        reg.discard([ref], rng)
        reg.remove([anc])
        n_seal += secret.is_sealing(i)
    report = VerificationReport(
        tested=tested,
        outcomes=outcomes,
        sealing_tested=n_seal,
        message_tested=len(tested) - n_seal,
        detection_power=detection_power(secret.params, n_seal),
    )
    return report, out
