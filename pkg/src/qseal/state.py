"""Dense pure-state simulation.

Qubit ``i`` is bit ``i`` of the basis-state index, so for two qubits the
amplitude vector is ordered ``|q1 q0> = 00, 01, 10, 11``. States are treated
as values: every operation returns a new :class:`QuantumState` and leaves
its input untouched.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .rng import RandomStream

NORM_TOL = 1e-9
MAX_QUBITS = 16
_PROB_EPS = 1e-14
_DUMP_EPS = 1e-15
_S = 1.0 / math.sqrt(2.0)

NAMED_STATES = {
    "0": (1.0, 0.0),
    "1": (0.0, 1.0),
    "+": (_S, _S),
    "-": (_S, -_S),
}

READING = "reading"
HADAMARD = "hadamard"
BASES = (READING, HADAMARD)


class NormalizationError(ValueError):
    pass


class QuantumState:
    """Normalized amplitude vector over ``num_qubits`` qubits."""

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, amplitudes, num_qubits: int | None = None):
        amps = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        n = int(amps.shape[0]).bit_length() - 1
        if amps.shape[0] != 1 << n or n < 0:
            raise ValueError(f"amplitude count {amps.shape[0]} is not a power of two")
        if num_qubits is not None and num_qubits != n:
            raise ValueError(f"expected {1 << num_qubits} amplitudes, got {amps.shape[0]}")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise NormalizationError(f"state norm {norm!r} differs from 1")
        amps.setflags(write=False)
        self.num_qubits = n
        self.amplitudes = amps

    @classmethod
    def _wrap(cls, amps: np.ndarray) -> "QuantumState":
        # Trusted constructor for kernel output; skips validation.
        obj = cls.__new__(cls)
        amps.setflags(write=False)
        obj.num_qubits = int(amps.shape[0]).bit_length() - 1
        obj.amplitudes = amps
        return obj

    @classmethod
    def zeros(cls, num_qubits: int) -> "QuantumState":
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[0] = 1.0
        return cls._wrap(amps)

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> "QuantumState":
        if num_qubits == 1:
            return _ONE_QUBIT_STATES[str(index)]
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls._wrap(amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        a = self.amplitudes
        return a.real**2 + a.imag**2

    def dump(self) -> str:
        """One ``index re im`` line per nonzero amplitude, 12 significant digits."""
        lines = []
        for i in np.flatnonzero(np.abs(self.amplitudes) > _DUMP_EPS):
            a = self.amplitudes[i]
            lines.append(f"{i} {a.real:.12g} {a.imag:.12g}")
        return "\n".join(lines)

    @classmethod
    def from_dump(cls, text: str, num_qubits: int) -> "QuantumState":
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        for line in text.strip().splitlines():
            idx, re, im = line.split()
            amps[int(idx)] = complex(float(re), float(im))
        # 12-digit dumps round-trip to ~1e-12; restore exact normalization.
        amps /= np.linalg.norm(amps)
        return cls(amps, num_qubits)

    def __repr__(self) -> str:
        return f"QuantumState(num_qubits={self.num_qubits})"


@dataclass(frozen=True)
class PauliString:
    """Signed tensor product of I, X, Y, Z; ``letters[i]`` acts on qubit ``i``."""

    letters: str
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        bad = set(self.letters) - set("IXYZ")
        if bad:
            raise ValueError(f"invalid Pauli letters {sorted(bad)}")

    @classmethod
    def parse(cls, text: str) -> "PauliString":
        text = text.strip()
        sign = 1
        if text[:1] in "+-":
            sign = -1 if text[0] == "-" else 1
            text = text[1:]
        return cls(text, sign)

    @classmethod
    def from_symplectic(cls, x: Sequence[int], z: Sequence[int], sign: int = 1) -> "PauliString":
        table = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
        return cls("".join(table[int(a) & 1, int(b) & 1] for a, b in zip(x, z)), sign)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return ("+" if self.sign > 0 else "-") + self.letters

    @property
    def x(self) -> tuple[int, ...]:
        return tuple(int(c in "XY") for c in self.letters)

    @property
    def z(self) -> tuple[int, ...]:
        return tuple(int(c in "ZY") for c in self.letters)

    @property
    def weight(self) -> int:
        return sum(c != "I" for c in self.letters)

    def commutes(self, other: "PauliString") -> bool:
        if len(self) != len(other):
            raise ValueError("Pauli strings act on different numbers of qubits")
        s = sum(a * d + b * c for a, b, c, d in zip(self.x, self.z, other.x, other.z))
        return s % 2 == 0

    def embed(self, positions: Sequence[int], num_qubits: int) -> "PauliString":
        """Place letter ``j`` on qubit ``positions[j]`` of a larger register."""
        out = ["I"] * num_qubits
        for letter, pos in zip(self.letters, positions, strict=True):
            out[pos] = letter
        return PauliString("".join(out), self.sign)

    def masks(self) -> tuple[int, int, int]:
        """``(xmask, zmask, y_count)`` for the kernels."""
        xm = zm = ny = 0
        for i, c in enumerate(self.letters):
            if c in "XY":
                xm |= 1 << i
            if c in "ZY":
                zm |= 1 << i
            ny += c == "Y"
        return xm, zm, ny


def _check_qubits(indices: Sequence[int], num_qubits: int) -> list[int]:
    idx = [int(i) for i in indices]
    if len(set(idx)) != len(idx):
        raise IndexError(f"duplicate qubit indices {idx}")
    for i in idx:
        if not 0 <= i < num_qubits:
            raise IndexError(f"qubit {i} out of range for {num_qubits} qubits")
    return idx


def single_qubit(spec) -> QuantumState:
    """Named state ``0 1 + -``, an ``(alpha, beta)`` pair, or a 1-qubit state."""
    if isinstance(spec, QuantumState):
        if spec.num_qubits != 1:
            raise ValueError("expected a single-qubit state")
        return spec
    if isinstance(spec, str):
        key = spec.strip().strip("|>⟩")
        key = {"−": "-", "plus": "+", "minus": "-"}.get(key, key)
        try:
            return _ONE_QUBIT_STATES[key]
        except KeyError:
            raise ValueError(f"unknown named state {spec!r}") from None
    alpha, beta = spec
    amps = np.array([alpha, beta], dtype=np.complex128)
    norm2 = float(np.sum(np.abs(amps) ** 2))
    if abs(norm2 - 1.0) > NORM_TOL:
        raise NormalizationError(f"|alpha|^2 + |beta|^2 = {norm2!r}, expected 1")
    return QuantumState._wrap(amps)


_ONE_QUBIT_STATES = {
    key: QuantumState._wrap(np.array(amps, dtype=np.complex128)) for key, amps in NAMED_STATES.items()
}


def tensor(low: QuantumState, high: QuantumState) -> QuantumState:
    """Joint state with ``low`` on qubits ``0..`` and ``high`` above it."""
    return QuantumState._wrap(np.outer(high.amplitudes, low.amplitudes).reshape(-1))


def prepare_product(specs: Iterable) -> QuantumState:
    """Tensor product with ``specs[i]`` on qubit ``i``."""
    amps = np.ones(1, dtype=np.complex128)
    for spec in specs:
        amps = np.kron(single_qubit(spec).amplitudes, amps)
    return QuantumState._wrap(amps)


def reorder(state: QuantumState, order: Sequence[int]) -> QuantumState:
    """New state whose qubit ``j`` is qubit ``order[j]`` of ``state``."""
    n = state.num_qubits
    order = list(order)
    if order == list(range(n)):
        return state
    # numpy axis k of the reshaped tensor is qubit n-1-k
    tensor_ = state.amplitudes.reshape([2] * n)
    axes = [n - 1 - order[n - 1 - k] for k in range(n)]
    return QuantumState._wrap(np.ascontiguousarray(tensor_.transpose(axes)).reshape(-1))


_H = (_S, _S, _S, -_S)
_X = (0.0, 1.0, 1.0, 0.0)
_Z = (1.0, 0.0, 0.0, -1.0)
_ONE_QUBIT = {"H": _H, "X": _X, "Z": _Z}
GATE_ARITY = {"H": 1, "X": 1, "Z": 1, "CNOT": 2, "CSWAP": 3}


def _apply_inplace(psi: np.ndarray, gate: str, targets: Sequence[int]) -> None:
    if gate in _ONE_QUBIT:
        kernels.apply_1q(psi, targets[0], *_ONE_QUBIT[gate])
    elif gate == "CNOT":
        kernels.apply_cnot(psi, targets[0], targets[1])
    else:
        kernels.apply_cswap(psi, targets[0], targets[1], targets[2])


def apply_gate(state: QuantumState, gate: str, targets: Sequence[int] | int) -> QuantumState:
    """Apply ``gate`` from {H, X, Z, CNOT, CSWAP}.

    ``CNOT`` targets are ``(control, target)``; ``CSWAP`` targets are
    ``(control, a, b)``.
    """
    gate = gate.upper()
    if gate not in GATE_ARITY:
        raise ValueError(f"unsupported gate {gate!r}")
    if isinstance(targets, (int, np.integer)):
        targets = [int(targets)]
    targets = _check_qubits(targets, state.num_qubits)
    if len(targets) != GATE_ARITY[gate]:
        raise ValueError(f"{gate} takes {GATE_ARITY[gate]} qubit(s), got {len(targets)}")
    psi = state.amplitudes.copy()
    _apply_inplace(psi, gate, targets)
    return QuantumState._wrap(psi)


def _sample_bit(p1: float, rng: RandomStream) -> int:
    u = rng.random()
    if p1 < _PROB_EPS:
        return 0
    if p1 > 1.0 - _PROB_EPS:
        return 1
    return int(u >= 1.0 - p1)


def _sample(probs: np.ndarray, rng: RandomStream) -> int:
    probs = np.where(probs < _PROB_EPS, 0.0, probs)
    cum = np.cumsum(probs)
    u = rng.random() * cum[-1]
    return min(int(np.searchsorted(cum, u, side="right")), len(probs) - 1)


def measure_qubits(
    state: QuantumState,
    indices: Sequence[int],
    basis: str = READING,
    rng: RandomStream | None = None,
) -> tuple[list[int], QuantumState]:
    """Projective measurement of ``indices`` in the reading or hadamard basis.

    In the hadamard basis bit 0 means ``|+>`` and bit 1 means ``|->``. The
    returned state is collapsed and renormalized.
    """
    if basis not in BASES:
        raise ValueError(f"basis must be one of {BASES}")
    if rng is None:
        raise TypeError("measure_qubits needs an explicit RandomStream")
    idx = _check_qubits(indices, state.num_qubits)
    psi = state.amplitudes.copy()
    if basis == HADAMARD:
        for q in idx:
            kernels.apply_1q(psi, q, *_H)
    if len(idx) == 1:
        outcome = _sample_bit(kernels.prob_one(psi, idx[0]), rng)
    else:
        outcome = _sample(kernels.marginal(psi, np.array(idx, dtype=np.int64)), rng)
    bits = [(outcome >> j) & 1 for j in range(len(idx))]
    mask = value = 0
    for q, b in zip(idx, bits):
        mask |= 1 << q
        value |= b << q
    kernels.collapse(psi, mask, value)
    if basis == HADAMARD:
        for q in idx:
            kernels.apply_1q(psi, q, *_H)
    return bits, QuantumState._wrap(psi)


def expectation(state: QuantumState, observable: PauliString) -> float:
    if len(observable) != state.num_qubits:
        raise ValueError(
            f"observable acts on {len(observable)} qubits, state has {state.num_qubits}"
        )
    xm, zm, ny = observable.masks()
    return observable.sign * kernels.pauli_expectation(state.amplitudes, xm, zm, ny)


def apply_pauli(state: QuantumState, pauli: PauliString) -> QuantumState:
    if len(pauli) != state.num_qubits:
        raise ValueError(f"Pauli acts on {len(pauli)} qubits, state has {state.num_qubits}")
    xm, zm, ny = pauli.masks()
    out = np.empty_like(state.amplitudes)
    kernels.apply_pauli(state.amplitudes, out, xm, zm, ny)
    if pauli.sign < 0:
        out *= -1
    return QuantumState._wrap(out)


def measure_pauli(
    state: QuantumState, observable: PauliString, rng: RandomStream
) -> tuple[int, QuantumState]:
    """Projective measurement of a Pauli observable; returns ``(+1|-1, state)``."""
    ev = expectation(state, observable)
    p_plus = min(max(0.5 * (1.0 + ev), 0.0), 1.0)
    if p_plus < _PROB_EPS:
        rng.random()
        return -1, state
    if p_plus > 1.0 - _PROB_EPS:
        rng.random()
        return 1, state
    eigen = 1 if rng.random() < p_plus else -1
    xm, zm, ny = observable.masks()
    out = np.empty_like(state.amplitudes)
    kernels.apply_pauli(state.amplitudes, out, xm, zm, ny)
    out *= eigen * observable.sign
    out += state.amplitudes
    out /= np.linalg.norm(out)
    return eigen, QuantumState._wrap(out)


def swap_test(
    state: QuantumState, qubit_a: int, qubit_b: int, ancilla: int, rng: RandomStream
) -> tuple[int, QuantumState]:
    """H, CSWAP, H on ``ancilla`` then measure it.

    Outcome 1 occurs with probability ``(1 - |<a|b>|^2) / 2`` for product
    inputs. The ancilla stays in the register, collapsed.
    """
    a, b, anc = _check_qubits([qubit_a, qubit_b, ancilla], state.num_qubits)
    psi = state.amplitudes.copy()
    if kernels.prob_one(psi, anc) > NORM_TOL:
        raise ValueError(f"swap_test ancilla {anc} is not prepared in |0>")
    kernels.apply_1q(psi, anc, *_H)
    kernels.apply_cswap(psi, anc, a, b)
    kernels.apply_1q(psi, anc, *_H)
    bit = _sample_bit(kernels.prob_one(psi, anc), rng)
    kernels.collapse(psi, 1 << anc, bit << anc)
    return bit, QuantumState._wrap(psi)


def inner_product(a: QuantumState, b: QuantumState) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    if a.num_qubits != b.num_qubits:
        raise ValueError(f"dimension mismatch: {a.num_qubits} vs {b.num_qubits} qubits")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: QuantumState, b: QuantumState) -> float:
    return abs(inner_product(a, b)) ** 2


def split_off(state: QuantumState, qubit: int, bit: int | None = None) -> tuple[int, QuantumState]:
    """Remove a qubit that is in a definite computational-basis state.

    Returns the qubit's bit and the state of the remaining qubits (their
    relative order is kept). Pass ``bit`` when it is already known from a
    measurement to skip the check.
    """
    if bit is None:
        p1 = kernels.prob_one(state.amplitudes, qubit)
        if NORM_TOL < p1 < 1.0 - NORM_TOL:
            raise ValueError(f"qubit {qubit} is not in a computational basis state")
        bit = int(p1 > 0.5)
    rest = state.amplitudes.reshape(-1, 2, 1 << qubit)[:, bit, :].reshape(-1)
    rest = rest / np.sqrt(np.vdot(rest, rest).real)
    return bit, QuantumState._wrap(rest)


class _Factor:
    __slots__ = ("labels", "state")

    def __init__(self, labels: list[int], state: QuantumState):
        self.labels = labels
        self.state = state


class ProductRegister:
    """Register held as a tensor product of dense factors.

    Qubits carry integer labels. Gates and measurements merge only the
    factors they touch, and computational-basis measurements split the
    measured qubit back out, so registers much larger than
    :data:`MAX_QUBITS` stay cheap as long as entanglement is local.
    """

    def __init__(self):
        self._owner: dict[int, _Factor] = {}
        self._next = 0

    @classmethod
    def from_states(cls, states: Iterable[QuantumState]) -> "ProductRegister":
        reg = cls()
        for s in states:
            reg.add(s)
        return reg

    @classmethod
    def from_factors(cls, factors: Iterable[tuple[Sequence[int], QuantumState]]) -> "ProductRegister":
        reg = cls()
        for labels, state in factors:
            labels = [int(x) for x in labels]
            if len(labels) != state.num_qubits or any(x in reg._owner for x in labels):
                raise ValueError(f"bad factor labels {labels}")
            f = _Factor(labels, state)
            for lab in labels:
                reg._owner[lab] = f
        reg._next = max(reg._owner, default=-1) + 1
        return reg

    @property
    def labels(self) -> list[int]:
        return sorted(self._owner)

    @property
    def num_qubits(self) -> int:
        return len(self._owner)

    def factors(self) -> list[tuple[list[int], QuantumState]]:
        seen = {}
        for lab in self.labels:
            f = self._owner[lab]
            seen.setdefault(id(f), f)
        return [(list(f.labels), f.state) for f in seen.values()]

    def copy(self) -> "ProductRegister":
        out = ProductRegister()
        out._next = self._next
        clones: dict[int, _Factor] = {}
        for lab, f in self._owner.items():
            g = clones.get(id(f))
            if g is None:
                g = clones[id(f)] = _Factor(list(f.labels), f.state)
            out._owner[lab] = g
        return out

    def add(self, state: QuantumState) -> list[int]:
        labels = list(range(self._next, self._next + state.num_qubits))
        self._next += state.num_qubits
        f = _Factor(labels, state)
        for lab in labels:
            self._owner[lab] = f
        return labels

    def _factor(self, label: int) -> _Factor:
        try:
            return self._owner[label]
        except KeyError:
            raise IndexError(f"qubit {label} is not in the register") from None

    def _gather(self, labels: Sequence[int]) -> _Factor:
        facs = []
        for lab in labels:
            f = self._factor(lab)
            if all(f is not g for g in facs):
                facs.append(f)
        if len(facs) == 1:
            return facs[0]
        merged = _Factor(list(facs[0].labels), facs[0].state)
        for f in facs[1:]:
            merged.state = tensor(merged.state, f.state)
            merged.labels.extend(f.labels)
        if merged.state.num_qubits > MAX_QUBITS:
            raise MemoryError(f"merged factor would hold {merged.state.num_qubits} qubits")
        for lab in merged.labels:
            self._owner[lab] = merged
        return merged

    def state_of(self, labels: Sequence[int]) -> QuantumState:
        """Dense state of ``labels`` (in that order); they must not be entangled
        with any other qubit."""
        labels = [int(x) for x in labels]
        f = self._gather(labels)
        if sorted(f.labels) != sorted(labels):
            raise ValueError("requested qubits are entangled with qubits outside the set")
        return reorder(f.state, [f.labels.index(lab) for lab in labels])

    def assign(self, labels: Sequence[int], state: QuantumState) -> None:
        """Replace the joint state of ``labels``, which must form whole factors."""
        labels = [int(x) for x in labels]
        f = self._gather(labels)
        if sorted(f.labels) != sorted(labels) or state.num_qubits != len(labels):
            raise ValueError("assign needs exactly the qubits of the merged factor")
        f.labels = labels
        f.state = state

    def dense(self) -> QuantumState:
        return self.state_of(self.labels)

    def apply(self, gate: str, labels: Sequence[int]) -> None:
        f = self._gather(labels)
        f.state = apply_gate(f.state, gate, [f.labels.index(lab) for lab in labels])

    def _detach(self, f: _Factor, label: int, bit: int) -> None:
        pos = f.labels.index(label)
        if len(f.labels) > 1:
            _, rest = split_off(f.state, pos, bit)
            f.labels.pop(pos)
            f.state = rest
            self._owner[label] = _Factor([label], QuantumState.basis(1, bit))

    def measure(self, labels: Sequence[int], basis: str, rng: RandomStream) -> list[int]:
        bits = []
        for lab in labels:
            f = self._factor(lab)
            if len(f.labels) == 1:
                a0, a1 = f.state.amplitudes
                if basis == HADAMARD:
                    a0, a1 = _S * (a0 + a1), _S * (a0 - a1)
                bit = _sample_bit(a1.real * a1.real + a1.imag * a1.imag, rng)
                f.state = _ONE_QUBIT_STATES["+-"[bit] if basis == HADAMARD else "01"[bit]]
                bits.append(bit)
                continue
            pos = f.labels.index(lab)
            if basis == HADAMARD:
                f.state = apply_gate(f.state, "H", pos)
            (bit,), f.state = measure_qubits(f.state, [pos], READING, rng)
            self._detach(f, lab, bit)
            if basis == HADAMARD:
                g = self._owner[lab]
                g.state = apply_gate(g.state, "H", 0)
            bits.append(bit)
        return bits

    def swap_test(self, a: int, b: int, ancilla: int, rng: RandomStream) -> int:
        fa, fb, fc = self._factor(a), self._factor(b), self._factor(ancilla)
        if len(fa.labels) == len(fb.labels) == len(fc.labels) == 1 and len({id(fa), id(fb), id(fc)}) == 3:
            if fidelity(fa.state, fb.state) > 1.0 - _PROB_EPS and fc.state.amplitudes[0] == 1.0:
                # identical unentangled inputs pass with certainty and stay
                # put; draw the same single random as the general path
                rng.random()
                return 0
        f = self._gather([a, b, ancilla])
        pos = [f.labels.index(x) for x in (a, b, ancilla)]
        bit, f.state = swap_test(f.state, *pos, rng)
        self._detach(f, ancilla, bit)
        return bit

    def remove(self, labels: Sequence[int]) -> None:
        """Drop qubits that are unentangled single-qubit factors."""
        for lab in labels:
            f = self._factor(lab)
            if len(f.labels) != 1:
                raise ValueError(f"qubit {lab} is entangled; measure it before removing")
            del self._owner[lab]

    def discard(self, labels: Sequence[int], rng: RandomStream) -> list[int]:
        """Measure ``labels`` in the reading basis and drop them."""
        bits = self.measure(labels, READING, rng)
        self.remove(labels)
        return bits

    def is_normalized(self) -> bool:
        return all(abs(s.norm() - 1.0) <= NORM_TOL for _, s in self.factors())
