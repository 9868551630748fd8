import json
from itertools import product

import pytest

from conftest import ScriptedStream, within_sigma
from oracles import golden
from qseal import attacks
from qseal.rng import RandomStream
from qseal.seal_chau import ChauParams, chau_seal, chau_verify
from qseal.seal_mub import BlockSecret, MubSealParams, SealedMessage, SealSecret, detection_power, seal_bits, verify
from qseal.state import ProductRegister, fidelity, prepare_product, single_qubit

BP = MubSealParams.bp()


def every_block(n, m):
    """Every bit and sealing-value assignment, message qubits first."""
    for bit in (0, 1):
        for vals in product("+-", repeat=n - m):
            yield BlockSecret(bit, tuple(range(n)), tuple(vals))


def sealed_from(blocks, params):
    secret = SealSecret(params, tuple(blocks), seed=0)
    states = [single_qubit(s) for b in blocks for s in b.position_states()]
    return SealedMessage(ProductRegister.from_states(states), len(blocks), params.block_size), secret


def test_measure_resend_reads_and_resends():
    sealed, secret = seal_bits([0, 1, 1, 0], BP, RandomStream(1))
    out = attacks.attack_measure_resend(sealed, BP, RandomStream(2)).scored(secret.bits)
    assert out.read_bits == secret.bits and out.accuracy == 1
    assert out.post_register.register.is_normalized()
    # message qubits were resent unchanged
    report, _ = verify(out.post_register, secret, secret.message_indices(), RandomStream(3))
    assert report.verdict == "sealed"
    # the original message is untouched
    assert all(len(labels) == 1 for labels, _ in sealed.register.factors())


def test_measure_resend_exhaustive_bp():
    for blk in every_block(3, 2):
        for u in (0.2, 0.8):
            sealed, _ = sealed_from([blk], BP)
            out = attacks.attack_measure_resend(sealed, BP, ScriptedStream([u] * 3))
            assert out.read_bits == [blk.bit]


def test_measure_resend_detection():
    trials, s = 4_000, 2
    root = RandomStream(4)
    hits = 0
    for i in range(trials):
        rng = root.fork(i)
        sealed, secret = seal_bits(rng.bits(4), BP, rng)
        out = attacks.attack_measure_resend(sealed, BP, rng)
        report, _ = verify(out.post_register, secret, rng.sample(secret.sealing_indices(), s), rng)
        hits += report.broken
    assert within_sigma(hits, trials, detection_power(BP, s))


def test_collective_bp_is_invisible_exhaustive():
    for blk in every_block(3, 2):
        for perm in ((0, 1, 2), (0, 2, 1), (2, 1, 0)):
            blk = BlockSecret(blk.bit, perm, blk.sealing_values)
            sealed, secret = sealed_from([blk], BP)
            before = sealed.block_state(0)
            out = attacks.attack_collective_majority(sealed, BP, RandomStream(5))
            assert out.read_bits == [blk.bit]
            assert fidelity(before, out.post_register.block_state(0)) == pytest.approx(1, abs=1e-9)
            for seed in range(5):
                report, _ = verify(out.post_register, secret, range(3), RandomStream(seed), allow_full=True)
                assert report.verdict == "sealed"


def test_collective_rejects_even_blocks():
    params = MubSealParams(4, 1)
    sealed, _ = seal_bits([1], params, RandomStream(0))
    with pytest.raises(ValueError):
        attacks.attack_collective_majority(sealed, params, RandomStream(0))


def test_minority_blocks_are_disturbed():
    # (3, 1): at least one secret is disturbed by the collective measurement
    worst = 1.0
    for blk in every_block(3, 1):
        state = prepare_product(blk.position_states())
        for prob, fid in attacks.exact_block_fidelity_after_collective(state):
            worst = min(worst, fid)
    assert worst < 1 - 1e-6
    assert worst == pytest.approx(golden.COLLECTIVE[(3, 1)]["min_fidelity"], abs=1e-9)
    # and none of the BP secrets is
    for blk in every_block(3, 2):
        rows = attacks.exact_block_fidelity_after_collective(prepare_product(blk.position_states()))
        assert rows == [(pytest.approx(1), pytest.approx(1))]


def test_ss_collective_exact_read_accuracy():
    params = MubSealParams.ss(9, 4)
    for blk in every_block(9, 4):
        state = prepare_product(blk.position_states())
        w1 = attacks.majority_weight(state)
        success = w1 if blk.bit else 1 - w1
        assert success == pytest.approx(golden.READ_SUCCESS[(9, 4)], abs=1e-12)


@pytest.mark.slow
def test_ss_collective_detection_matches_oracle():
    params = MubSealParams.ss(9, 4)
    trials = 10_000
    root = RandomStream(6)
    hits = correct = 0
    for i in range(trials):
        rng = root.fork(i)
        bit = rng.integers(2)
        sealed, secret = seal_bits([bit], params, rng)
        out = attacks.attack_collective_majority(sealed, params, rng)
        correct += out.read_bits == [bit]
        report, _ = verify(out.post_register, secret, secret.sealing_indices(), rng)
        hits += report.broken
    r = golden.COLLECTIVE[(9, 4)]
    assert within_sigma(correct, trials, r["read_success"])
    assert within_sigma(hits, trials, r["detect"])


def test_crude_read_chau():
    params = ChauParams()
    for seed in range(20):
        inst = chau_seal("1", params, RandomStream(seed))
        out = attacks.attack_crude_read_chau(inst, RandomStream(seed + 1)).scored([1])
        assert out.read_bits == [1]  # oracle accuracy 1
        assert abs(out.post_register.register.norm() - 1) < 1e-9


def test_crude_read_detection():
    trials = 4_000
    root = RandomStream(7)
    hits = 0
    for i in range(trials):
        rng = root.fork(i)
        inst = chau_seal("0", ChauParams(), rng)
        out = attacks.attack_crude_read_chau(inst, rng)
        hits += chau_verify(out.post_register, rng)[0].broken
    assert within_sigma(hits, trials, golden.CHAU_Q_STAR)
    untouched = chau_seal("0", ChauParams(), RandomStream(8))
    assert chau_verify(untouched, RandomStream(9))[0].verdict == "sealed"


def test_hamming_decode():
    assert attacks.hamming_decode([0] * 7) == 0
    assert attacks.hamming_decode([1] * 7) == 1
    assert attacks.hamming_decode([0, 0, 0, 1, 0, 0, 0]) == 0  # one flip corrected
    assert attacks.hamming_decode([1, 1, 1, 0, 0, 0, 0]) == 1


def test_read_slots():
    inst = chau_seal("+", ChauParams(), RandomStream(10))
    assert attacks.attack_read_slots(inst, [], RandomStream(0)) is inst
    out = attacks.attack_read_slots(inst, [0, 3], RandomStream(0))
    assert abs(out.register.norm() - 1) < 1e-9


def test_determinism_and_json():
    sealed, secret = seal_bits([1, 0, 1], BP, RandomStream(11))
    a = attacks.attack_measure_resend(sealed, BP, RandomStream(12)).scored(secret.bits)
    b = attacks.attack_measure_resend(sealed, BP, RandomStream(12)).scored(secret.bits)
    assert a.to_json() == b.to_json()
    record = json.loads(a.to_json())
    assert record == {"strategy": "measure_resend", "bits": [1, 0, 1], "success": [True] * 3, "aborted": False, "seed": 12}
    with pytest.raises(ValueError):
        a.scored([1])
