"""Plain-text file formats.

Every file starts with the version tag line ``qseal-v1`` followed by a
``kind`` line and ``key value`` header lines. Amplitude sections use the
``index re im`` dump of :meth:`QuantumState.dump`.
"""
from __future__ import annotations

import numpy as np

from . import codes
from .seal_chau import ChauParams, ChauSealInstance, ChauSecret
from .seal_mub import BlockSecret, MubSealParams, SealedMessage, SealSecret
from .state import ProductRegister, QuantumState

FORMAT_TAG = "qseal-v1"


class FormatError(ValueError):
    pass


def _header(kind: str, **fields) -> list[str]:
    lines = [FORMAT_TAG, f"kind {kind}"]
    for key, value in fields.items():
        if isinstance(value, (list, tuple)):
            value = " ".join(str(v) for v in value)
        lines.append(f"{key} {value}".rstrip())
    return lines


def _parse(text: str, kind: str) -> tuple[dict[str, str], list[str]]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != FORMAT_TAG:
        raise FormatError(f"missing {FORMAT_TAG} tag")
    fields: dict[str, str] = {}
    body: list[str] = []
    for line in lines[1:]:
        if not line.strip() or line.startswith("#"):
            continue
        if body or line[0].isdigit() or line.startswith("factor"):
            body.append(line)
            continue
        key, _, value = line.partition(" ")
        fields[key] = value.strip()
    if fields.get("kind") != kind:
        raise FormatError(f"expected kind {kind!r}, found {fields.get('kind')!r}")
    return fields, body


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split()]


def dump_sealed(sealed: SealedMessage, params: MubSealParams, scheme: str) -> str:
    lines = _header(
        "sealed-message",
        scheme=scheme,
        block_size=params.block_size,
        message_count=params.message_count,
        block_count=sealed.block_count,
    )
    for labels, state in sorted(sealed.register.factors(), key=lambda f: min(f[0])):
        lines.append("factor " + " ".join(map(str, labels)))
        lines.append(state.dump())
    return "\n".join(lines) + "\n"


def load_sealed(text: str) -> tuple[SealedMessage, MubSealParams, str]:
    fields, body = _parse(text, "sealed-message")
    params = MubSealParams(int(fields["block_size"]), int(fields["message_count"]))
    factors = []
    labels: list[int] | None = None
    chunk: list[str] = []

    def flush():
        if labels is not None:
            factors.append((labels, QuantumState.from_dump("\n".join(chunk), len(labels))))

    for line in body:
        if line.startswith("factor"):
            flush()
            labels, chunk = _ints(line[len("factor"):]), []
        else:
            chunk.append(line)
    flush()
    register = ProductRegister.from_factors(factors)
    sealed = SealedMessage(register, int(fields["block_count"]), params.block_size)
    return sealed, params, fields["scheme"]


def dump_mub_secret(secret: SealSecret) -> str:
    lines = _header(
        "mub-secret",
        block_size=secret.params.block_size,
        message_count=secret.params.message_count,
        path=secret.path,
    )
    lines.append("# block_index, b, permutation, sealing_values, seed")
    for i, blk in enumerate(secret.blocks):
        perm = " ".join(map(str, blk.permutation))
        vals = " ".join(blk.sealing_values)
        lines.append(f"{i}, {blk.bit}, {perm}, {vals}, {secret.seed}")
    return "\n".join(lines) + "\n"


def load_mub_secret(text: str) -> SealSecret:
    fields, body = _parse(text, "mub-secret")
    params = MubSealParams(int(fields["block_size"]), int(fields["message_count"]))
    blocks = []
    seed = 0
    for expected, line in enumerate(body):
        idx, bit, perm, vals, seed_text = (part.strip() for part in line.split(","))
        if int(idx) != expected:
            raise FormatError(f"block rows out of order at {idx}")
        blocks.append(BlockSecret(int(bit), tuple(_ints(perm)), tuple(vals.split())))
        seed = int(seed_text)
    return SealSecret(params, tuple(blocks), seed, tuple(_ints(fields.get("path", ""))))


def dump_chau_message(instance: ChauSealInstance) -> str:
    p = instance.params
    lines = _header(
        "chau-message",
        n=p.n,
        d=p.d,
        n_prime=p.n_prime,
        code=instance.announced_code.name,
        public_slots=instance.public_slots,
        num_qubits=instance.register.num_qubits,
    )
    lines.append(instance.register.dump())
    return "\n".join(lines) + "\n"


def dump_chau_secret(instance: ChauSealInstance) -> str:
    s = instance.secret
    if s is None:
        raise ValueError("instance carries no secret")
    a, b = s.message.amplitudes
    lines = _header(
        "chau-secret",
        seed=s.seed,
        path=s.path,
        withheld=s.withheld,
        decoy_qubits=s.decoy_qubits,
        private=instance.private_indices,
        message=f"{a.real:.17g} {a.imag:.17g} {b.real:.17g} {b.imag:.17g}",
    )
    return "\n".join(lines) + "\n"


def load_chau(message_text: str, secret_text: str | None = None) -> ChauSealInstance:
    fields, body = _parse(message_text, "chau-message")
    params = ChauParams(int(fields["n"]), int(fields["d"]), int(fields["n_prime"]))
    if fields.get("code") != "steane":
        raise FormatError(f"unsupported announced code {fields.get('code')!r}")
    register = QuantumState.from_dump("\n".join(body), int(fields["num_qubits"]))
    secret = None
    private: tuple[int, ...] = ()
    if secret_text is not None:
        sf, _ = _parse(secret_text, "chau-secret")
        re0, im0, re1, im1 = (float(v) for v in sf["message"].split())
        message = QuantumState(np.array([complex(re0, im0), complex(re1, im1)]))
        secret = ChauSecret(
            message,
            tuple(_ints(sf["withheld"])),
            tuple(_ints(sf["decoy_qubits"])),
            int(sf["seed"]),
            tuple(_ints(sf.get("path", ""))),
        )
        private = tuple(_ints(sf["private"]))
    return ChauSealInstance(
        register=register,
        params=params,
        public_slots=tuple(_ints(fields["public_slots"])),
        private_indices=private,
        secret=secret,
        announced_code=codes.steane_spec(),
    )


def kind_of(text: str) -> str:
    lines = text.splitlines()
    if len(lines) < 2 or lines[0].strip() != FORMAT_TAG or not lines[1].startswith("kind "):
        raise FormatError(f"not a {FORMAT_TAG} file")
    return lines[1].split(None, 1)[1].strip()
