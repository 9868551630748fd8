from itertools import product

import pytest

from conftest import ScriptedStream, within_sigma
from oracles.golden import READ_SUCCESS
from qseal.rng import RandomStream
from qseal.seal_mub import (
    BlockSecret,
    MubSealParams,
    SealedMessage,
    SealSecret,
    detection_power,
    majority_bit,
    read_majority,
    reference_state,
    seal_bits,
    verify,
)
from qseal.state import ProductRegister, fidelity, prepare_product, single_qubit

BP = MubSealParams.bp()


def all_bp_secrets():
    """Every (bit, arrangement, sealing value) of one BP block."""
    for bit in (0, 1):
        for pos in range(3):  # position of the sealing qubit
            for val in "+-":
                perm = tuple(p for p in range(3) if p != pos) + (pos,)
                yield BlockSecret(bit, perm, (val,))


def sealed_from(blocks, params=BP):
    secret = SealSecret(params, tuple(blocks), seed=0)
    states = [single_qubit(s) for b in blocks for s in b.position_states()]
    return SealedMessage(ProductRegister.from_states(states), len(blocks), params.block_size), secret


def test_params():
    assert (BP.block_size, BP.message_count, BP.sealing_count) == (3, 2, 1)
    ss = MubSealParams.ss(9, 4)
    assert ss.message_fraction == pytest.approx(4 / 9)
    with pytest.raises(ValueError):
        MubSealParams.ss(8, 4)
    with pytest.raises(ValueError):
        MubSealParams(3, 0)
    with pytest.raises(ValueError):
        MubSealParams(3, 4)
    with pytest.raises(ValueError):
        MubSealParams(3, 1, sealing_basis="y")


def test_seal_01_structure():
    sealed, secret = seal_bits([0, 1], BP, RandomStream(1))
    assert sealed.num_qubits == 6 and secret.bits == [0, 1]
    for blk, bit in zip(secret.blocks, (0, 1)):
        states = blk.position_states()
        assert sorted(states).count(str(bit)) == 2
        assert sum(s in "+-" for s in states) == 1
    expected = prepare_product([s for b in secret.blocks for s in b.position_states()])
    assert fidelity(sealed.register.dense(), expected) == pytest.approx(1)


def test_seal_empty_and_determinism():
    sealed, secret = seal_bits([], BP, RandomStream(1))
    assert sealed.num_qubits == 0 and secret.blocks == ()
    a = seal_bits([1, 0, 1], BP, RandomStream(5))
    b = seal_bits([1, 0, 1], BP, RandomStream(5))
    assert a[1] == b[1]
    assert fidelity(a[0].register.dense(), b[0].register.dense()) == pytest.approx(1)
    with pytest.raises(ValueError):
        seal_bits([2], BP, RandomStream(0))


def test_secret_reconstruction():
    sealed, secret = seal_bits([1, 0, 0, 1], MubSealParams.ss(9, 4), RandomStream(3))
    for blk in range(4):
        refs = [reference_state(secret, blk * 9 + p) for p in range(9)]
        assert fidelity(sealed.block_state(blk), prepare_product(refs)) == pytest.approx(1)
    with pytest.raises(IndexError):
        reference_state(secret, 36)
    assert set(secret.sealing_indices()).isdisjoint(secret.message_indices())
    assert len(secret.sealing_indices()) == 20


def test_reference_state_examples():
    blk = BlockSecret(1, (0, 2, 1), ("-",))
    secret = SealSecret(BP, (blk,), seed=0)
    assert reference_state(secret, 0) == single_qubit("1")
    assert reference_state(secret, 1) == single_qubit("-")
    assert secret.is_sealing(1) and not secret.is_sealing(2)


def test_majority_bit():
    assert majority_bit([1, 1, 0]) == (1, False)
    assert majority_bit([0, 1]) == (0, True)
    assert majority_bit([]) == (0, True)


def test_bp_retrievability_exhaustive():
    # every secret and every measurement branch of the sealing qubit
    for blk in all_bp_secrets():
        for u in (0.1, 0.9):
            sealed, _ = sealed_from([blk])
            result, _ = read_majority(sealed, BP, ScriptedStream([u] * 3))
            assert result.bits == [blk.bit]


def test_read_needs_no_secret_and_collapses():
    sealed, secret = seal_bits([0, 1, 1], BP, RandomStream(2))
    result, post = read_majority(sealed, BP, RandomStream(3))
    assert result.bits == [0, 1, 1] and not any(result.ties)
    # collapsed to the observed computational basis state
    again, _ = read_majority(post, BP, RandomStream(4))
    assert again.outcomes == result.outcomes
    with pytest.raises(ValueError):
        read_majority(sealed, MubSealParams(5, 3), RandomStream(0))


def test_even_block_tie_resolves_to_zero():
    params = MubSealParams(2, 1)
    blk = BlockSecret(1, (0, 1), ("+",))
    sealed, _ = sealed_from([blk], params)
    result, _ = read_majority(sealed, params, ScriptedStream([0.1]))  # sealing qubit -> 0
    assert result.bits == [0] and result.ties == [True]


def test_degenerate_single_qubit_block():
    params = MubSealParams(1, 1)
    for bit in (0, 1):
        sealed, _ = seal_bits([bit], params, RandomStream(bit))
        assert read_majority(sealed, params, RandomStream(9))[0].bits == [bit]


@pytest.mark.parametrize("nm", [(9, 4), (15, 7), (25, 12)])
def test_ss_retrievability(nm):
    n, m = nm
    params = MubSealParams.ss(n, m)
    trials = 10_000 if n == 9 else 2_000
    root = RandomStream(11)
    ok = 0
    for i in range(trials):
        rng = root.fork(i)
        bit = rng.integers(2)
        sealed, _ = seal_bits([bit], params, rng)
        ok += read_majority(sealed, params, rng)[0].bits == [bit]
    assert within_sigma(ok, trials, READ_SUCCESS[nm])


def test_ss_oracle_monotone():
    vals = [READ_SUCCESS[k] for k in [(9, 4), (15, 7), (25, 12)]]
    assert vals == sorted(vals) and vals[-1] < 1


def test_detection_power():
    assert detection_power(BP, 0) == 0
    assert detection_power(BP, 1) == 0.25
    assert detection_power(BP, 4) == pytest.approx(1 - 81 / 256)
    with pytest.raises(ValueError):
        detection_power(BP, -1)


def test_no_false_alarms():
    for seed in range(100):
        sealed, secret = seal_bits(RandomStream(seed).bits(4), BP, RandomStream(seed))
        report, _ = verify(sealed, secret, range(sealed.num_qubits), RandomStream(seed + 1), allow_full=True)
        assert report.verdict == "sealed" and report.outcomes == [0] * 12


def test_verify_rejects_full_set_and_bad_indices():
    sealed, secret = seal_bits([0, 1], BP, RandomStream(0))
    with pytest.raises(ValueError):
        verify(sealed, secret, range(6), RandomStream(0))
    with pytest.raises(IndexError):
        verify(sealed, secret, [6], RandomStream(0))
    other, _ = seal_bits([0], BP, RandomStream(0))
    with pytest.raises(ValueError):
        verify(other, secret, [0], RandomStream(0))


def test_verify_report_counts():
    sealed, secret = seal_bits([0, 1], BP, RandomStream(4))
    idx = secret.sealing_indices()[:1] + secret.message_indices()[:2]
    report, _ = verify(sealed, secret, idx, RandomStream(5))
    assert report.sealing_tested == 1 and report.message_tested == 2
    assert report.detection_power == 0.25
    assert report.tested == sorted(idx)


@pytest.mark.parametrize("s", [1, 2, 4, 8])
def test_honest_read_detection(s):
    trials = 10_000
    root = RandomStream(100 + s)
    hits = 0
    for i in range(trials):
        rng = root.fork(i)
        sealed, secret = seal_bits(rng.bits(8), BP, rng)
        _, sealed = read_majority(sealed, BP, rng)
        report, _ = verify(sealed, secret, rng.sample(secret.sealing_indices(), s), rng)
        hits += report.broken
    assert within_sigma(hits, trials, detection_power(BP, s))
