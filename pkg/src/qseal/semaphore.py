"""A binary semaphore whose lock is a sealed message.

``P`` waits while the shared token carries an intact seal and then seals a
fresh token; ``V`` removes the seal by reading the token. Whether the seal is
on is decided by SWAP-test verification of the token's sealing qubits, which
never flags an untouched token, so a holder's lock is never mistaken for a
free one.

Processes run under a deterministic round-robin scheduler, one action per
turn. The check-and-seal of ``P`` is a single turn (a test-and-set), since
a split test and set would let two waiters both see a free token.

Release modes:

``destroy``
    ``V`` reads the token and then discards it, so the next check sees no
    token at all and progress is deterministic.
``observe``
    ``V`` only reads. Waiters must notice the broken seal through
    verification. A passing SWAP test projects the tested qubit toward its
    fresh reference, so every quiet check repairs part of the broken seal and
    a break that goes unnoticed for a few checks is usually never noticed.
    A run that exceeds ``max_ticks`` is reported as stalled.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .rng import RandomStream
from .seal_mub import MubSealParams, SealedMessage, SealSecret, read_majority, seal_bits, verify

ACTIONS = ("P-wait", "P-acquire", "V-release", "critical-enter", "critical-exit")
RELEASE_MODES = ("destroy", "observe")


@dataclass
class SemaphoreTrace:
    events: list[tuple[int, str]] = field(default_factory=list)
    stalled: bool = False

    def mutual_exclusion_holds(self) -> bool:
        holder = None
        for pid, action in self.events:
            if action == "critical-enter":
                if holder is not None:
                    return False
                holder = pid
            elif action == "critical-exit":
                if holder != pid:
                    return False
                holder = None
        return True

    def count(self, action: str) -> int:
        return sum(1 for _, a in self.events if a == action)

    def rows(self) -> list[dict]:
        return [{"tick": i, "process": p, "action": a} for i, (p, a) in enumerate(self.events)]


class _Token:
    def __init__(self, params: MubSealParams, bits: int):
        self.params = params
        self.bits = bits
        self.message: SealedMessage | None = None
        self.secret: SealSecret | None = None

    def sealed(self, rng: RandomStream) -> bool:
        if self.message is None:
            return False
        report, self.message = verify(self.message, self.secret, self.secret.sealing_indices(), rng)
        if report.broken:
            self.message = self.secret = None
        return not report.broken

    def seal(self, rng: RandomStream) -> None:
        self.message, self.secret = seal_bits(rng.bits(self.bits), self.params, rng)

    def unseal(self, rng: RandomStream, mode: str) -> None:
        _, self.message = read_majority(self.message, self.params, rng)
        if mode == "destroy":
            self.message = self.secret = None


def run_semaphore_demo(
    num_processes: int,
    operations_per_process: int,
    seed: int,
    *,
    release: str = "destroy",
    token_bits: int = 2,
    max_ticks: int = 100_000,
) -> SemaphoreTrace:
    """Each process performs ``operations_per_process`` rounds of
    ``P``, critical section, ``V``."""
    if num_processes < 1:
        raise ValueError("need at least one process")
    if operations_per_process < 0:
        raise ValueError("operations_per_process must be non-negative")
    if release not in RELEASE_MODES:
        raise ValueError(f"release must be one of {RELEASE_MODES}")
    rng = RandomStream(seed)
    token = _Token(MubSealParams.bp(), token_bits)
    trace = SemaphoreTrace()
    # per-process program counter: 0 = P, 1 = enter, 2 = exit, 3 = V
    pc = [0] * num_processes
    remaining = [operations_per_process] * num_processes
    tick = 0
    while any(remaining):
        for pid in range(num_processes):
            if not remaining[pid]:
                continue
            if tick >= max_ticks:
                trace.stalled = True
                return trace
            tick += 1
            step = rng.fork(tick)
            if pc[pid] == 0:
                if token.sealed(step):
                    trace.events.append((pid, "P-wait"))
                    continue
                token.seal(step)
                trace.events.append((pid, "P-acquire"))
            elif pc[pid] == 1:
                trace.events.append((pid, "critical-enter"))
            elif pc[pid] == 2:
                trace.events.append((pid, "critical-exit"))
            else:
                token.unseal(step, release)
                trace.events.append((pid, "V-release"))
                remaining[pid] -= 1
            pc[pid] = (pc[pid] + 1) % 4
    return trace
