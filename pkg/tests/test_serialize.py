import pytest

from qseal import serialize
from qseal.attacks import attack_measure_resend
from qseal.rng import RandomStream
from qseal.seal_chau import ChauParams, chau_seal, chau_verify
from qseal.seal_mub import MubSealParams, read_majority, seal_bits
from qseal.state import fidelity


def test_sealed_round_trip():
    params = MubSealParams.ss(9, 4)
    sealed, secret = seal_bits([1, 0], params, RandomStream(1))
    text = serialize.dump_sealed(sealed, params, "ss")
    assert text.splitlines()[0] == "qseal-v1"
    back, p2, scheme = serialize.load_sealed(text)
    assert (p2, scheme) == (params, "ss")
    for blk in range(2):
        assert fidelity(back.block_state(blk), sealed.block_state(blk)) == pytest.approx(1)
    assert serialize.kind_of(text) == "sealed-message"


def test_secret_round_trip():
    params = MubSealParams.bp()
    _, secret = seal_bits([1, 0, 1], params, RandomStream(2).fork(4))
    text = serialize.dump_mub_secret(secret)
    assert "# block_index, b, permutation, sealing_values, seed" in text
    assert serialize.load_mub_secret(text) == secret


def test_post_attack_round_trip_is_stable():
    params = MubSealParams.bp()
    sealed, _ = seal_bits([1, 1], params, RandomStream(3))
    post = attack_measure_resend(sealed, params, RandomStream(4)).post_register
    text = serialize.dump_sealed(post, params, "bp")
    back, _, _ = serialize.load_sealed(text)
    assert serialize.dump_sealed(back, params, "bp") == text


def test_chau_round_trip():
    inst = chau_seal((0.6, 0.8j), ChauParams(), RandomStream(5))
    msg, sec = serialize.dump_chau_message(inst), serialize.dump_chau_secret(inst)
    public = serialize.load_chau(msg)
    assert public.secret is None and public.public_slots == inst.public_slots
    full = serialize.load_chau(msg, sec)
    assert full.private_indices == inst.private_indices
    assert full.secret.withheld == inst.secret.withheld
    assert fidelity(full.secret.message, inst.secret.message) == pytest.approx(1)
    assert fidelity(full.register, inst.register) == pytest.approx(1)
    assert chau_verify(full, RandomStream(6))[0].verdict == "sealed"


def test_format_errors():
    with pytest.raises(serialize.FormatError):
        serialize.load_sealed("not a file\n")
    params = MubSealParams.bp()
    _, secret = seal_bits([1], params, RandomStream(0))
    with pytest.raises(serialize.FormatError):
        serialize.load_sealed(serialize.dump_mub_secret(secret))
    with pytest.raises(serialize.FormatError):
        serialize.kind_of("qseal-v1\n")
    with pytest.raises(ValueError):
        import dataclasses

        serialize.dump_chau_secret(dataclasses.replace(chau_seal("0", ChauParams(), RandomStream(0)), secret=None))


def test_entangled_factor_round_trip():
    from qseal.attacks import attack_collective_majority

    params = MubSealParams.ss(9, 4)
    sealed, _ = seal_bits([1, 0], params, RandomStream(7))
    post = attack_collective_majority(sealed, params, RandomStream(8)).post_register
    assert any(len(labels) == 9 for labels, _ in post.register.factors())
    back, _, _ = serialize.load_sealed(serialize.dump_sealed(post, params, "ss"))
    for blk in range(2):
        assert fidelity(back.block_state(blk), post.block_state(blk)) == pytest.approx(1, abs=1e-9)
