"""Adversarial readers.

None of these receive the sealer's secret. Ground truth, where a harness
knows it, is attached afterwards with :meth:`AttackOutcome.scored`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Sequence, Union

import numpy as np

from . import kernels
from .codes import HAMMING_7_4
from .rng import RandomStream
from .seal_chau import ChauSealInstance
from .seal_mub import MubSealParams, SealedMessage, majority_bit
from .state import READING, QuantumState, measure_qubits


@dataclass
class AttackOutcome:
    strategy: str
    read_bits: list[int]
    post_register: Union[SealedMessage, ChauSealInstance]
    aborted: bool = False
    per_block_success: list[bool] | None = None
    seed: int | None = None

    def scored(self, truth: Sequence[int]) -> "AttackOutcome":
        if len(truth) != len(self.read_bits):
            raise ValueError("truth and read bits differ in length")
        return replace(self, per_block_success=[int(a) == int(b) for a, b in zip(self.read_bits, truth)])

    @property
    def accuracy(self) -> float | None:
        if not self.per_block_success:
            return None
        return sum(self.per_block_success) / len(self.per_block_success)

    def to_json(self) -> str:
        return json.dumps(
            {
                "strategy": self.strategy,
                "bits": self.read_bits,
                "success": self.per_block_success,
                "aborted": self.aborted,
                "seed": self.seed,
            },
            sort_keys=True,
        )


def attack_measure_resend(
    sealed: SealedMessage, params: MubSealParams, rng: RandomStream
) -> AttackOutcome:
    """Measure everything in the reading basis and resend the observed states."""
    out = sealed.copy()
    reg = out.register
    bits = []
    for blk in range(out.block_count):
        labels = out.block_labels(blk)
        outcomes = reg.measure(labels, READING, rng)
        for lab, b in zip(labels, outcomes):
            reg.assign([lab], QuantumState.basis(1, b))
        bits.append(majority_bit(outcomes)[0])
    return AttackOutcome("measure_resend", bits, out, seed=rng.seed)


def majority_weight(block: QuantumState) -> float:
    """Weight of ``block`` on basis states whose majority bit is 1."""
    n = block.num_qubits
    return kernels.masked_weight(block.amplitudes, (1 << n) - 1, n // 2)


def attack_collective_majority(
    sealed: SealedMessage, params: MubSealParams, rng: RandomStream
) -> AttackOutcome:
    """Two-outcome projective measurement of each block's majority bit.

    The projectors are onto the spans of computational basis states with
    majority 0 and majority 1. When the message qubits alone fix the
    majority (``m > N/2``), every block already lies in one of the two
    subspaces and the measurement leaves it untouched.
    """
    n = params.block_size
    if n % 2 == 0:
        raise ValueError("the collective majority attack needs an odd block size")
    out = sealed.copy()
    reg = out.register
    bits = []
    for blk in range(out.block_count):
        labels = out.block_labels(blk)
        psi = reg.state_of(labels).amplitudes.copy()
        w1 = kernels.masked_weight(psi, (1 << n) - 1, n // 2)
        w1 = 0.0 if w1 < 1e-14 else (1.0 if w1 > 1 - 1e-14 else w1)
        bit = int(rng.random() < w1)
        kernels.majority_project(psi, (1 << n) - 1, n // 2, bool(bit))
        reg.assign(labels, QuantumState._wrap(psi))
        bits.append(bit)
    return AttackOutcome("collective", bits, out, seed=rng.seed)


def hamming_decode(bits: Sequence[int]) -> int:
    """Logical bit of a 7-bit Steane reading-basis outcome.

    Corrects at most one flipped position via the Hamming syndrome, then
    returns the parity of the word.
    """
    word = [int(b) for b in bits]
    s = 0
    for row in HAMMING_7_4:
        s = (s << 1) | (sum(r * b for r, b in zip(row, word)) & 1)
    if s:
        word[s - 1] ^= 1
    return sum(word) & 1


def attack_crude_read_chau(instance: ChauSealInstance, rng: RandomStream) -> AttackOutcome:
    """Measure every public slot in the reading basis and decode classically."""
    bits, reg = measure_qubits(instance.register, list(instance.public_slots), READING, rng)
    guess = hamming_decode(bits)
    return AttackOutcome("crude_read", [guess], replace(instance, register=reg), seed=rng.seed)


def attack_read_slots(instance: ChauSealInstance, slots: Sequence[int], rng: RandomStream) -> ChauSealInstance:
    """Measure the given public slot positions in the reading basis."""
    if not slots:
        return instance
    qubits = [instance.public_slots[j] for j in slots]
    _, reg = measure_qubits(instance.register, qubits, READING, rng)
    return replace(instance, register=reg)


def exact_block_fidelity_after_collective(block: QuantumState) -> list[tuple[float, float]]:
    """``(probability, fidelity with the input)`` for both outcomes of the
    collective measurement on one block."""
    n = block.num_qubits
    rows = []
    for bit in (0, 1):
        psi = block.amplitudes.copy()
        w = kernels.majority_project(psi, (1 << n) - 1, n // 2, bool(bit))
        if w < 1e-14:
            continue
        fid = abs(np.vdot(block.amplitudes, psi)) ** 2
        rows.append((w, float(fid)))
    return rows
