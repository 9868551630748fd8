"""Sealing a qubit with a CSS code and hidden stabilizer-code decoys.

The message qubit is encoded in the announced Steane code. ``t`` positions of
the codeword are withheld and each withheld slot is filled with one qubit of
a separate five-qubit-code encoding of ``|0>``; the remaining qubits of those
decoy codewords stay private. A reader who decodes with the announced code
treats the decoy as a correctable error, which entangles it with the reader's
measurement and breaks the decoy codeword the sealer later checks.

Register layout: qubits ``0..n-1`` are the CSS codeword in code order, decoy
codeword ``c`` occupies ``n + c*n_prime .. n + (c+1)*n_prime - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import product

import numpy as np

from . import codes
from .rng import RandomStream
from .state import (
    HADAMARD,
    READING,
    QuantumState,
    apply_pauli,
    measure_qubits,
    single_qubit,
    tensor,
)
from . import kernels


@dataclass(frozen=True)
class ChauParams:
    n: int = 7
    d: int = 3
    n_prime: int = 5
    # Advisory only; the code-rate bound is not enforced.
    min_distance_ratio: float | None = None
    t: int = field(init=False)

    def __post_init__(self):
        t = (self.d - 1) // 2
        object.__setattr__(self, "t", t)
        if t < 1:
            raise ValueError(f"distance {self.d} gives t={t}; sealing needs t >= 1")
        if self.n < self.d or self.n_prime < 3:
            raise ValueError("invalid code lengths")

    @property
    def num_qubits(self) -> int:
        return self.n + self.t * self.n_prime


@dataclass(frozen=True)
class ChauSecret:
    message: QuantumState
    withheld: tuple[int, ...]
    decoy_qubits: tuple[int, ...]
    seed: int
    path: tuple[int, ...] = ()


@dataclass(frozen=True)
class ChauSealInstance:
    register: QuantumState
    params: ChauParams
    public_slots: tuple[int, ...]
    private_indices: tuple[int, ...]
    # None for a reader's view of the instance
    secret: ChauSecret | None
    announced_code: codes.CssCodeSpec

    def decoy_block(self, c: int) -> list[int]:
        base = self.params.n + c * self.params.n_prime
        return list(range(base, base + self.params.n_prime))

    @property
    def decoy_slots(self) -> list[int]:
        return list(self.secret.withheld)


@dataclass
class ChauVerificationReport:
    decoy_syndromes: list[list[int]]
    css_syndrome: list[int] | None = None

    @property
    def broken(self) -> bool:
        bits = [b for s in self.decoy_syndromes for b in s] + list(self.css_syndrome or [])
        return any(bits)

    @property
    def verdict(self) -> str:
        return "broken" if self.broken else "sealed"


def _codes_for(params: ChauParams) -> tuple[codes.CssCodeSpec, codes.StabilizerCodeSpec]:
    if (params.n, params.d, params.n_prime) != (7, 3, 5):
        raise NotImplementedError("only the [[7,1,3]] + [[5,1,3]] instance is available")
    return codes.steane_spec(), codes.perfect_code_spec()


def _layout(params: ChauParams, withheld, decoy_qubits):
    slots = list(range(params.n))
    private = list(withheld)
    for c, (w, k) in enumerate(zip(withheld, decoy_qubits)):
        base = params.n + c * params.n_prime
        slots[w] = base + k
        private.extend(base + j for j in range(params.n_prime) if j != k)
    return tuple(slots), tuple(private)


def with_layout(instance: ChauSealInstance, withheld, decoy_qubits) -> ChauSealInstance:
    """Same register and message with the decoy placement replaced."""
    withheld, decoy_qubits = tuple(withheld), tuple(decoy_qubits)
    slots, private = _layout(instance.params, withheld, decoy_qubits)
    secret = replace(instance.secret, withheld=withheld, decoy_qubits=decoy_qubits)
    return replace(instance, public_slots=slots, private_indices=private, secret=secret)


def build_register(message, params: ChauParams) -> QuantumState:
    css, decoy = _codes_for(params)
    reg = codes.encode(css, message)
    zero = codes.encode(decoy, "0")
    for _ in range(params.t):
        reg = tensor(reg, zero)
    return reg


def chau_seal(message, params: ChauParams, rng: RandomStream) -> ChauSealInstance:
    css, _ = _codes_for(params)
    message = single_qubit(message)
    withheld = tuple(sorted(rng.sample(range(params.n), params.t)))
    decoy_qubits = tuple(rng.integers(params.n_prime) for _ in range(params.t))
    slots, private = _layout(params, withheld, decoy_qubits)
    return ChauSealInstance(
        register=build_register(message, params),
        params=params,
        public_slots=slots,
        private_indices=private,
        secret=ChauSecret(message, withheld, decoy_qubits, rng.seed, rng.path),
        announced_code=css,
    )


def chau_read_honest(
    instance: ChauSealInstance, rng: RandomStream
) -> tuple[int | None, ChauSealInstance]:
    """Read with the announced code: syndrome, minimum-weight fix, logical Z.

    Uses the public slots only. Returns ``None`` as the bit when the
    syndrome has no correctable explanation.
    """
    code = instance.announced_code
    block = list(instance.public_slots)
    syndrome, reg = codes.measure_syndrome(instance.register, code, block, rng)
    reg, ok = codes.correct(reg, code, block, syndrome)
    if not ok:
        return None, replace(instance, register=reg)
    bit, reg = codes.decode_logical_measure(reg, code, block, rng)
    return bit, replace(instance, register=reg)


def chau_verify(
    instance: ChauSealInstance, rng: RandomStream, *, css_check: bool = False
) -> tuple[ChauVerificationReport, ChauSealInstance]:
    """Sealer-side check of every decoy codeword (generators, then logical Z)."""
    if instance.secret is None:
        raise ValueError("verification needs the sealer's secret and private qubits")
    css, decoy = _codes_for(instance.params)
    reg = instance.register
    syndromes = []
    for c in range(instance.params.t):
        block = instance.decoy_block(c)
        bits, reg = codes.measure_syndrome(reg, decoy, block, rng)
        logical, reg = codes.decode_logical_measure(reg, decoy, block, rng)
        syndromes.append(bits + [logical])
    css_bits = None
    if css_check:
        css_bits, reg = codes.measure_syndrome(reg, css, list(range(instance.params.n)), rng)
    report = ChauVerificationReport(syndromes, css_bits)
    return report, replace(instance, register=reg)


def chau_is_opaque(instance: ChauSealInstance, trials: int, rng: RandomStream) -> list[dict]:
    """Per-slot outcome frequencies on fresh re-preparations of the instance.

    One row per ``(slot, basis)`` with the count of outcome 1, its frequency
    and the standard error for a fair coin.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if instance.secret is None:
        raise ValueError("re-preparation needs the sealed message from the secret")
    fresh = build_register(instance.secret.message, instance.params)
    slots = list(instance.public_slots)
    rows = []
    for basis in (READING, HADAMARD):
        ones = np.zeros(len(slots), dtype=np.int64)
        for _ in range(trials):
            bits, _ = measure_qubits(fresh, slots, basis, rng)
            ones += bits
        for j, count in enumerate(ones):
            rows.append(
                {
                    "slot": j,
                    "basis": basis,
                    "ones": int(count),
                    "trials": trials,
                    "frequency": count / trials,
                    "stderr": 0.5 / np.sqrt(trials),
                }
            )
    return rows


def decoy_pass_probability(instance: ChauSealInstance, state: QuantumState | None = None) -> float:
    """Exact probability that :func:`chau_verify` reports sealed for ``state``."""
    _, decoy = _codes_for(instance.params)
    psi = (state or instance.register).amplitudes.copy()
    n = psi.shape[0].bit_length() - 1
    for c in range(instance.params.t):
        block = instance.decoy_block(c)
        for g in list(decoy.generators) + [decoy.logical_z]:
            psi = 0.5 * (psi + apply_pauli(QuantumState._wrap(psi), g.embed(block, n)).amplitudes)
    return float(np.vdot(psi, psi).real)


def exact_honest_read(instance: ChauSealInstance) -> dict:
    """Exact read distribution and post-read detection probability.

    Enumerates every syndrome and logical outcome branch with its Born
    weight instead of sampling. Returns ``{"p0", "p1", "aborted", "detect"}``.
    """
    code = instance.announced_code
    block = list(instance.public_slots)
    n = instance.register.num_qubits
    gens = [g.embed(block, n) for g in code.generators]
    lz = code.logical_z.embed(block, n)
    out = {"p0": 0.0, "p1": 0.0, "aborted": 0.0, "detect": 0.0}
    for signs in product((0, 1), repeat=len(gens)):
        psi = instance.register.amplitudes.copy()
        for g, s in zip(gens, signs):
            psi = 0.5 * (psi + (1 - 2 * s) * apply_pauli(QuantumState._wrap(psi), g).amplitudes)
        weight = float(np.vdot(psi, psi).real)
        if weight < 1e-14:
            continue
        psi /= np.sqrt(weight)
        fixed, ok = codes.correct(QuantumState._wrap(psi), code, block, signs)
        if not ok:
            out["aborted"] += weight
            continue
        for bit in (0, 1):
            phi = fixed.amplitudes.copy()
            phi = 0.5 * (phi + (1 - 2 * bit) * apply_pauli(QuantumState._wrap(phi), lz).amplitudes)
            w = float(np.vdot(phi, phi).real)
            if w < 1e-14:
                continue
            post = QuantumState._wrap(phi / np.sqrt(w))
            out[f"p{bit}"] += weight * w
            out["detect"] += weight * w * (1.0 - decoy_pass_probability(instance, post))
    return out


def exact_slot_read(instance: ChauSealInstance, slots) -> float:
    """Exact detection probability after measuring ``slots`` in the reading basis."""
    qubits = [instance.public_slots[j] for j in slots]
    if not qubits:
        return 1.0 - decoy_pass_probability(instance)
    probs = kernels.marginal(instance.register.amplitudes, np.array(qubits, dtype=np.int64))
    mask = sum(1 << q for q in qubits)
    detect = 0.0
    for outcome, p in enumerate(probs):
        if p < 1e-14:
            continue
        value = sum(((outcome >> j) & 1) << q for j, q in enumerate(qubits))
        psi = instance.register.amplitudes.copy()
        kernels.collapse(psi, mask, value)
        detect += p * (1.0 - decoy_pass_probability(instance, QuantumState._wrap(psi)))
    return float(detect)
