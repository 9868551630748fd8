"""Seeded Monte Carlo experiments over the sealing schemes.

Trial ``i`` of an experiment with seed ``s`` draws all of its randomness from
``RandomStream(s).fork(i)``, and results are aggregated as counts, so a run
is reproducible bit for bit and independent of trial order.

The message-receipt, packaging and quiz flows are the same
seal / optional intrusion / verify loop as eavesdropping detection and are
exposed as presets of :func:`run_eavesdrop`.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field
from functools import lru_cache

from . import attacks
from .rng import RandomStream
from .seal_chau import (
    ChauParams,
    chau_read_honest,
    chau_seal,
    chau_verify,
    exact_honest_read,
    exact_slot_read,
    with_layout,
)
from .seal_mub import (
    MubSealParams,
    detection_power,
    read_majority,
    seal_bits,
    verify,
)

SCHEMES = ("bp", "ss", "chau")
ADVERSARIES = {
    "bp": ("none", "measure_resend", "collective"),
    "ss": ("none", "measure_resend", "collective"),
    "chau": ("none", "crude_read", "honest_read"),
}
TEST_POOLS = ("sealing", "all")
Z95 = 1.959963984540054


def half_width(p: float, n: int) -> float:
    """95% normal-approximation half-width of a binomial proportion."""
    if n == 0 or math.isnan(p):
        return math.nan
    return Z95 * math.sqrt(p * (1.0 - p) / n)


def _rate(k: int, n: int) -> float:
    return k / n if n else math.nan


def mub_params(scheme: str, block_size: int | None = None, message_count: int | None = None) -> MubSealParams:
    if scheme == "bp":
        if block_size not in (None, 3) or message_count not in (None, 2):
            return MubSealParams(block_size or 3, message_count or 2)
        return MubSealParams.bp()
    if scheme == "ss":
        return MubSealParams.ss(block_size or 9, message_count or 4)
    raise ValueError(f"{scheme!r} is not a basis-sealing scheme")


@dataclass(frozen=True)
class ExperimentConfig:
    scheme: str = "bp"
    block_size: int | None = None
    message_count: int | None = None
    message_bits: int = 8
    trials: int = 1000
    seed: int = 0
    adversary: str = "none"
    p_eve: float = 1.0
    test_fraction: float = 1.0
    test_pool: str = "sealing"
    label: str = "eavesdrop"

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.adversary not in ADVERSARIES[self.scheme]:
            raise ValueError(
                f"adversary {self.adversary!r} does not apply to scheme {self.scheme!r}; "
                f"choose from {ADVERSARIES[self.scheme]}"
            )
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0.0 <= self.p_eve <= 1.0:
            raise ValueError("p_eve must lie in [0, 1]")
        if not 0.0 <= self.test_fraction <= 1.0:
            raise ValueError("test_fraction must lie in [0, 1]")
        if self.test_pool not in TEST_POOLS:
            raise ValueError(f"test_pool must be one of {TEST_POOLS}")
        if self.message_bits < 1:
            raise ValueError("message_bits must be >= 1")
        if self.scheme != "chau":
            params = self.params()
            if self.adversary == "collective" and params.block_size % 2 == 0:
                raise ValueError("the collective attack needs an odd block size")

    def params(self) -> MubSealParams:
        return mub_params(self.scheme, self.block_size, self.message_count)


PRESETS = {
    # A reader who opens the message is the intrusion being detected.
    "receipt": dict(adversary="measure_resend", p_eve=0.5, test_pool="sealing"),
    "packaging": dict(adversary="measure_resend", p_eve=0.5, test_pool="all", test_fraction=0.5),
    "quiz": dict(adversary="measure_resend", p_eve=1.0, test_pool="sealing"),
    "eavesdrop": dict(adversary="measure_resend", p_eve=1.0, test_pool="sealing"),
}


def preset(name: str, **overrides) -> ExperimentConfig:
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return ExperimentConfig(label=name, **{**PRESETS[name], **overrides})


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    present_trials: int
    detected: int
    absent_trials: int
    false_alarms: int
    read_correct: int
    read_total: int
    analytic_detection: float = math.nan
    runtime: float = field(default=0.0, compare=False)

    @property
    def detection_rate(self) -> float:
        return _rate(self.detected, self.present_trials)

    @property
    def false_alarm_rate(self) -> float:
        return _rate(self.false_alarms, self.absent_trials)

    @property
    def read_accuracy(self) -> float:
        return _rate(self.read_correct, self.read_total)

    def row(self) -> dict:
        """Table row; runtime is left out so output files are reproducible."""
        c = self.config
        return {
            "label": c.label,
            "scheme": c.scheme,
            "block_size": c.params().block_size if c.scheme != "chau" else 7,
            "message_count": c.params().message_count if c.scheme != "chau" else 1,
            "adversary": c.adversary,
            "trials": c.trials,
            "seed": c.seed,
            "p_eve": c.p_eve,
            "test_pool": c.test_pool if c.scheme != "chau" else "decoys",
            "test_fraction": c.test_fraction,
            "present_trials": self.present_trials,
            "detection_rate": self.detection_rate,
            "detection_hw": half_width(self.detection_rate, self.present_trials),
            "analytic_detection": self.analytic_detection,
            "absent_trials": self.absent_trials,
            "false_alarm_rate": self.false_alarm_rate,
            "false_alarm_hw": half_width(self.false_alarm_rate, self.absent_trials),
            "read_accuracy": self.read_accuracy,
            "read_accuracy_hw": half_width(self.read_accuracy, self.read_total),
        }


def _test_indices(secret, pool: str, fraction: float, rng: RandomStream) -> list[int]:
    candidates = secret.sealing_indices() if pool == "sealing" else list(range(secret.num_qubits))
    k = int(round(fraction * len(candidates)))
    if pool == "all":
        k = min(k, secret.num_qubits - 1)
    return sorted(rng.sample(candidates, k)) if k else []


_MUB_ATTACKS = {
    "measure_resend": attacks.attack_measure_resend,
    "collective": attacks.attack_collective_majority,
}


@lru_cache(maxsize=None)
def _chau_exact(bit: int, withheld: tuple, decoy_qubits: tuple, adversary: str) -> float:
    inst = chau_seal(str(bit), ChauParams(), RandomStream(0))
    inst = with_layout(inst, withheld, decoy_qubits)
    if adversary == "honest_read":
        return float(exact_honest_read(inst)["detect"])
    return float(exact_slot_read(inst, range(inst.params.n)))


def _eavesdrop_chau(config: ExperimentConfig) -> ExperimentResult:
    root = RandomStream(config.seed)
    present = detected = absent = false_alarms = correct = total = 0
    expected = 0.0
    for i in range(config.trials):
        rng = root.fork(i)
        bit = rng.integers(2)
        inst = chau_seal(str(bit), ChauParams(), rng)
        eve = rng.random() < config.p_eve and config.adversary != "none"
        if eve:
            if config.adversary == "crude_read":
                out = attacks.attack_crude_read_chau(inst, rng)
                guess, inst = out.read_bits[0], out.post_register
            else:
                guess, inst = chau_read_honest(inst, rng)
            total += 1
            correct += guess == bit
            expected += _chau_exact(bit, inst.secret.withheld, inst.secret.decoy_qubits, config.adversary)
        report, _ = chau_verify(inst, rng)
        if eve:
            present += 1
            detected += report.broken
        else:
            absent += 1
            false_alarms += report.broken
    analytic = expected / present if present else math.nan
    return ExperimentResult(config, present, detected, absent, false_alarms, correct, total, analytic)


def _eavesdrop_mub(config: ExperimentConfig) -> ExperimentResult:
    params = config.params()
    root = RandomStream(config.seed)
    present = detected = absent = false_alarms = correct = total = 0
    expected = 0.0
    attack = _MUB_ATTACKS.get(config.adversary)
    for i in range(config.trials):
        rng = root.fork(i)
        bits = rng.bits(config.message_bits)
        sealed, secret = seal_bits(bits, params, rng)
        eve = rng.random() < config.p_eve and attack is not None
        if eve:
            outcome = attack(sealed, params, rng).scored(bits)
            sealed = outcome.post_register
            correct += sum(outcome.per_block_success)
            total += len(bits)
        tested = _test_indices(secret, config.test_pool, config.test_fraction, rng)
        report, _ = verify(sealed, secret, tested, rng)
        if eve:
            present += 1
            detected += report.broken
            expected += report.detection_power
        else:
            absent += 1
            false_alarms += report.broken
    if config.adversary == "measure_resend" and present:
        analytic = expected / present
    elif config.adversary == "collective" and params.message_count * 2 > params.block_size:
        analytic = 0.0
    else:
        analytic = math.nan
    return ExperimentResult(config, present, detected, absent, false_alarms, correct, total, analytic)


def run_eavesdrop(config: ExperimentConfig) -> ExperimentResult:
    """Seal, intrude with probability ``p_eve``, verify; aggregate rates.

    ``analytic_detection`` is the closed-form expectation where one exists:
    the mean of ``1 - (3/4)^s`` over intruded trials for measure-and-resend,
    exactly 0 for the collective attack on majority-message blocks, and the
    exact branch-enumerated probability for Chau readers.
    """
    start = time.perf_counter()
    if config.scheme == "chau":
        result = _eavesdrop_chau(config)
    else:
        result = _eavesdrop_mub(config)
    result.runtime = time.perf_counter() - start
    return result


def run_detection_curve(
    scheme: str,
    params: MubSealParams | None,
    s_values,
    trials: int,
    seed: int,
) -> list[dict]:
    """Detection rate after an honest read, per verification size.

    Basis schemes: ``s`` sealing qubits are SWAP-tested after a majority
    read; the analytic column is ``1 - (3/4)^s``. Chau: ``s`` public slots
    are measured in the reading basis before the decoy check; the analytic
    column is the exact branch-enumerated detection probability averaged
    over decoy placements (a slot read only matters if it hits the decoy).
    """
    rows = []
    root = RandomStream(seed)
    if scheme == "chau":
        cparams = ChauParams()
        for row_index, s in enumerate(s_values):
            if not 0 <= s <= cparams.n:
                raise ValueError(f"slot count {s} outside 0..{cparams.n}")
            stream = root.fork(row_index)
            hits = 0
            for i in range(trials):
                rng = stream.fork(i)
                inst = chau_seal(str(rng.integers(2)), cparams, rng)
                slots = rng.sample(range(cparams.n), s)
                inst = attacks.attack_read_slots(inst, slots, rng)
                report, _ = chau_verify(inst, rng)
                hits += report.broken
            rows.append(
                {
                    "s": s,
                    "fraction": s / cparams.n,
                    "empirical": hits / trials,
                    "analytic": (s / cparams.n) * _decoy_read_detection(),
                    "trials": trials,
                }
            )
        return rows
    params = params or mub_params(scheme)
    for row_index, s in enumerate(s_values):
        if s < 0:
            raise ValueError("s must be non-negative")
        blocks = max(1, math.ceil(s / params.sealing_count))
        stream = root.fork(row_index)
        hits = 0
        for i in range(trials):
            rng = stream.fork(i)
            sealed, secret = seal_bits(rng.bits(blocks), params, rng)
            _, sealed = read_majority(sealed, params, rng)
            tested = rng.sample(secret.sealing_indices(), s)
            report, _ = verify(sealed, secret, tested, rng)
            hits += report.broken
        rows.append(
            {
                "s": s,
                "fraction": s / (blocks * params.block_size),
                "empirical": hits / trials,
                "analytic": detection_power(params, s),
                "trials": trials,
            }
        )
    return rows


@lru_cache(maxsize=None)
def _decoy_read_detection() -> float:
    """Exact detection probability when the decoy slot is read, averaged
    over the decoy's position inside its codeword."""
    params = ChauParams()
    inst = chau_seal("0", params, RandomStream(0))
    total = 0.0
    for k in range(params.n_prime):
        probe = with_layout(inst, (0,), (k,))
        total += exact_slot_read(probe, [0])
    return total / params.n_prime


@dataclass
class CommitmentTranscript:
    committed_bit: int
    early_open: str
    steps: list[dict]
    detected: bool
    revealed_bit: int
    early_bit: int | None = None

    def rows(self) -> list[dict]:
        return [{"step": i, **s} for i, s in enumerate(self.steps)]


EARLY_OPEN = ("none", "read", "collective")


def run_bit_commitment(
    seed: int,
    *,
    bit: int | None = None,
    early_open: str = "none",
    params: MubSealParams | None = None,
) -> CommitmentTranscript:
    """Alice seals a bit and hands it to Bob; she later checks the seal before
    asking him to open it.

    With ``early_open="read"`` Bob reads the register before the check; with
    ``"collective"`` he uses the majority-subspace measurement, which the
    check cannot see on the three-qubit scheme.
    """
    if early_open not in EARLY_OPEN:
        raise ValueError(f"early_open must be one of {EARLY_OPEN}")
    params = params or MubSealParams.bp()
    rng = RandomStream(seed)
    alice, bob = rng.fork(0), rng.fork(1)
    if bit is None:
        bit = alice.integers(2)
    steps = []
    sealed, secret = seal_bits([bit], params, alice)
    steps.append({"actor": "alice", "action": "seal", "detail": f"{params.block_size} qubits"})
    steps.append({"actor": "alice", "action": "transfer", "detail": "register handed to bob"})
    early_bit = None
    if early_open == "read":
        read, sealed = read_majority(sealed, params, bob)
        early_bit = read.bits[0]
        steps.append({"actor": "bob", "action": "early-open", "detail": f"majority read -> {early_bit}"})
    elif early_open == "collective":
        outcome = attacks.attack_collective_majority(sealed, params, bob)
        sealed, early_bit = outcome.post_register, outcome.read_bits[0]
        steps.append({"actor": "bob", "action": "early-open", "detail": f"collective read -> {early_bit}"})
    report, sealed = verify(sealed, secret, secret.sealing_indices(), alice)
    steps.append(
        {
            "actor": "alice",
            "action": "check",
            "detail": f"tested {report.tested} outcomes {report.outcomes} -> {report.verdict}",
        }
    )
    read, sealed = read_majority(sealed, params, bob)
    revealed = read.bits[0]
    steps.append({"actor": "bob", "action": "reveal", "detail": f"majority read -> {revealed}"})
    return CommitmentTranscript(bit, early_open, steps, report.broken, revealed, early_bit)


def format_table(rows: list[dict], fmt: str = "csv") -> str:
    """CSV with a header row, or a JSON list of objects; floats to 6 significant digits."""

    def cell(v):
        if isinstance(v, float):
            return "nan" if math.isnan(v) else f"{v:.6g}"
        if isinstance(v, (list, tuple)):
            return " ".join(str(x) for x in v)
        if v is None:
            return ""
        return v

    if fmt == "json":
        clean = [
            {k: (float(f"{v:.6g}") if isinstance(v, float) and not math.isnan(v) else (None if isinstance(v, float) else v)) for k, v in r.items()}
            for r in rows
        ]
        return json.dumps(clean, indent=2) + "\n"
    if fmt != "csv":
        raise ValueError("format must be csv or json")
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: cell(v) for k, v in r.items()})
    return buf.getvalue()
