"""Command-line front end.

Exit status: 0 on success, 1 on usage or input errors, 2 when a
verification finds the seal broken.

``read`` and ``attack`` measure the register, so they write the
post-measurement state back to the message file (or to ``--post``). A
verification run afterwards then sees what the reader left behind.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import attacks, scenarios, serialize
from .kernels import BACKEND
from .rng import RandomStream
from .seal_chau import ChauParams, chau_read_honest, chau_seal, chau_verify
from .seal_mub import read_majority, seal_bits, verify
from .semaphore import RELEASE_MODES, run_semaphore_demo

EXIT_OK, EXIT_USAGE, EXIT_BROKEN = 0, 1, 2

COMMON_DEFAULTS = {
    "scheme": "bp",
    "seed": 0,
    "trials": 1000,
    "out": None,
    "format": "csv",
    "block_size": None,
    "message_count": None,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.replace(",", " ").split()]


def _common(parser: argparse.ArgumentParser) -> None:
    # SUPPRESS lets the flags appear before or after the subcommand without
    # the subparser's defaults overwriting values given to the main parser.
    s = argparse.SUPPRESS
    parser.add_argument("--scheme", choices=scenarios.SCHEMES, default=s)
    parser.add_argument("--seed", type=_seed, default=s)
    parser.add_argument("--trials", type=int, default=s)
    parser.add_argument("--out", type=Path, default=s, help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default=s)
    parser.add_argument("--block-size", type=int, default=s)
    parser.add_argument("--message-count", type=int, default=s)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qseal", description="Quantum sealing protocol laboratory.")
    parser.add_argument("--version", action="version", version=f"qseal (kernels: {BACKEND})")
    _common(parser)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("seal", help="seal bits (bp, ss) or one qubit (chau) into files")
    _common(p)
    p.add_argument("--bits", help="message bits for bp/ss, e.g. 0110")
    p.add_argument("--payload", default="0", help="chau payload state: 0, 1, + or -")
    p.add_argument("--message", type=Path, required=True, help="sealed-message file to write")
    p.add_argument("--secret", type=Path, required=True, help="secret file to write")

    p = sub.add_parser("read", help="honest read of a sealed message (no secret needed)")
    _common(p)
    p.add_argument("--message", type=Path, required=True)
    p.add_argument("--post", type=Path, help="where to write the measured register")

    p = sub.add_parser("verify", help="sealer-side verification; exit 2 if broken")
    _common(p)
    p.add_argument("--message", type=Path, required=True)
    p.add_argument("--secret", type=Path, required=True)
    p.add_argument("--test-indices", type=_int_list, help="qubits to SWAP-test (default: all sealing qubits)")
    p.add_argument("--css-check", action="store_true", help="chau: also check the recombined CSS block")
    p.add_argument("--post", type=Path)

    p = sub.add_parser("attack", help="run an adversarial reader on a sealed message")
    _common(p)
    p.add_argument("--message", type=Path, required=True)
    p.add_argument(
        "--strategy", required=True, choices=("measure_resend", "collective", "crude_read", "honest_read")
    )
    p.add_argument("--post", type=Path)

    p = sub.add_parser("experiment", help="Monte Carlo eavesdropping experiment")
    _common(p)
    p.add_argument("--preset", choices=sorted(scenarios.PRESETS))
    p.add_argument("--adversary")
    p.add_argument("--p-eve", type=float)
    p.add_argument("--test-fraction", type=float)
    p.add_argument("--test-pool", choices=scenarios.TEST_POOLS)
    p.add_argument("--message-bits", type=int)

    p = sub.add_parser("curve", help="detection rate against verification size")
    _common(p)
    p.add_argument("--s-values", type=_int_list, default=[0, 1, 2, 4, 8])

    p = sub.add_parser("commit", help="scripted bit-commitment transcript")
    _common(p)
    p.add_argument("--bit", type=int, choices=(0, 1))
    p.add_argument("--early-open", choices=scenarios.EARLY_OPEN, default="none")

    p = sub.add_parser("semaphore", help="sealed-token semaphore demonstration")
    _common(p)
    p.add_argument("--processes", type=int, default=2)
    p.add_argument("--ops", type=int, default=3)
    p.add_argument("--release", choices=RELEASE_MODES, default="destroy")
    return parser


def _emit(args, text: str) -> None:
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)


def _table(args, rows: list[dict]) -> str:
    return serialize.FORMAT_TAG + "\n" + scenarios.format_table(rows, args.format)


def _mub_params(args):
    return scenarios.mub_params(args.scheme, args.block_size, args.message_count)


def _load_message(path: Path):
    text = path.read_text()
    kind = serialize.kind_of(text)
    if kind == "sealed-message":
        sealed, params, scheme = serialize.load_sealed(text)
        return scheme, (sealed, params)
    if kind == "chau-message":
        return "chau", serialize.load_chau(text)
    raise UsageError(f"{path}: expected a sealed message, found {kind!r}")


def _write_post(args, scheme, obj) -> None:
    target = args.post or args.message
    if scheme == "chau":
        target.write_text(serialize.dump_chau_message(obj))
    else:
        sealed, params = obj
        target.write_text(serialize.dump_sealed(sealed, params, scheme))


def cmd_seal(args) -> int:
    rng = RandomStream(args.seed)
    if args.scheme == "chau":
        inst = chau_seal(args.payload, ChauParams(), rng)
        args.message.write_text(serialize.dump_chau_message(inst))
        args.secret.write_text(serialize.dump_chau_secret(inst))
        rows = [{"scheme": "chau", "public_slots": len(inst.public_slots), "private": len(inst.private_indices)}]
    else:
        if args.bits is None or set(args.bits) - {"0", "1"}:
            raise UsageError("--bits must be a string of 0s and 1s")
        params = _mub_params(args)
        sealed, secret = seal_bits([int(b) for b in args.bits], params, rng)
        args.message.write_text(serialize.dump_sealed(sealed, params, args.scheme))
        args.secret.write_text(serialize.dump_mub_secret(secret))
        rows = [{"scheme": args.scheme, "blocks": sealed.block_count, "qubits": sealed.num_qubits}]
    _emit(args, _table(args, rows))
    return EXIT_OK


def cmd_read(args) -> int:
    scheme, obj = _load_message(args.message)
    rng = RandomStream(args.seed)
    if scheme == "chau":
        bit, inst = chau_read_honest(obj, rng)
        rows = [{"slot_block": 0, "bit": "" if bit is None else bit, "aborted": bit is None}]
        _write_post(args, scheme, inst)
    else:
        sealed, params = obj
        result, sealed = read_majority(sealed, params, rng)
        rows = [{"block": i, "bit": b, "tie": t} for i, (b, t) in enumerate(zip(result.bits, result.ties))]
        _write_post(args, scheme, (sealed, params))
    _emit(args, _table(args, rows))
    return EXIT_OK


def cmd_verify(args) -> int:
    scheme, obj = _load_message(args.message)
    rng = RandomStream(args.seed)
    if scheme == "chau":
        inst = serialize.load_chau(args.message.read_text(), args.secret.read_text())
        report, inst = chau_verify(inst, rng, css_check=args.css_check)
        rows = [
            {"check": f"decoy{c}", "bits": " ".join(map(str, bits)), "verdict": report.verdict}
            for c, bits in enumerate(report.decoy_syndromes)
        ]
        if report.css_syndrome is not None:
            rows.append({"check": "css", "bits": " ".join(map(str, report.css_syndrome)), "verdict": report.verdict})
        _write_post(args, scheme, inst)
    else:
        sealed, params = obj
        secret = serialize.load_mub_secret(args.secret.read_text())
        indices = args.test_indices if args.test_indices is not None else secret.sealing_indices()
        report, sealed = verify(sealed, secret, indices, rng)
        rows = [
            {"index": i, "sealing": secret.is_sealing(i), "outcome": o, "verdict": report.verdict}
            for i, o in zip(report.tested, report.outcomes)
        ]
        _write_post(args, scheme, (sealed, params))
    _emit(args, _table(args, rows))
    print(f"verdict: {report.verdict}", file=sys.stderr)
    return EXIT_BROKEN if report.broken else EXIT_OK


def cmd_attack(args) -> int:
    scheme, obj = _load_message(args.message)
    rng = RandomStream(args.seed)
    if scheme == "chau":
        if args.strategy == "crude_read":
            outcome = attacks.attack_crude_read_chau(obj, rng)
            post, bits, aborted = outcome.post_register, outcome.read_bits, False
        elif args.strategy == "honest_read":
            bit, post = chau_read_honest(obj, rng)
            bits, aborted = ([] if bit is None else [bit]), bit is None
        else:
            raise UsageError(f"strategy {args.strategy!r} does not apply to chau messages")
        _write_post(args, scheme, post)
    else:
        if args.strategy not in ("measure_resend", "collective"):
            raise UsageError(f"strategy {args.strategy!r} does not apply to {scheme} messages")
        sealed, params = obj
        fn = attacks.attack_measure_resend if args.strategy == "measure_resend" else attacks.attack_collective_majority
        outcome = fn(sealed, params, rng)
        bits, aborted = outcome.read_bits, False
        _write_post(args, scheme, (outcome.post_register, params))
    rows = [{"strategy": args.strategy, "bits": "".join(map(str, bits)), "aborted": aborted, "seed": args.seed}]
    _emit(args, _table(args, rows))
    return EXIT_OK


def cmd_experiment(args) -> int:
    fields = {
        "scheme": args.scheme,
        "block_size": args.block_size,
        "message_count": args.message_count,
        "trials": args.trials,
        "seed": args.seed,
    }
    for name in ("adversary", "p_eve", "test_fraction", "test_pool", "message_bits"):
        value = getattr(args, name)
        if value is not None:
            fields[name] = value
    if args.preset:
        config = scenarios.preset(args.preset, **fields)
    else:
        config = scenarios.ExperimentConfig(**fields)
    result = scenarios.run_eavesdrop(config)
    _emit(args, _table(args, [result.row()]))
    return EXIT_OK


def cmd_curve(args) -> int:
    params = None if args.scheme == "chau" else _mub_params(args)
    rows = scenarios.run_detection_curve(args.scheme, params, args.s_values, args.trials, args.seed)
    _emit(args, _table(args, rows))
    return EXIT_OK


def cmd_commit(args) -> int:
    if args.scheme != "bp" or args.block_size or args.message_count:
        params = _mub_params(args)
    else:
        params = None
    t = scenarios.run_bit_commitment(args.seed, bit=args.bit, early_open=args.early_open, params=params)
    _emit(args, _table(args, t.rows()))
    summary = {"committed": t.committed_bit, "revealed": t.revealed_bit, "detected": t.detected}
    print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return EXIT_OK


def cmd_semaphore(args) -> int:
    trace = run_semaphore_demo(args.processes, args.ops, args.seed, release=args.release)
    _emit(args, _table(args, trace.rows()))
    print(
        json.dumps({"mutual_exclusion": trace.mutual_exclusion_holds(), "stalled": trace.stalled}),
        file=sys.stderr,
    )
    return EXIT_OK


COMMANDS = {
    "seal": cmd_seal,
    "read": cmd_read,
    "verify": cmd_verify,
    "attack": cmd_attack,
    "experiment": cmd_experiment,
    "curve": cmd_curve,
    "commit": cmd_commit,
    "semaphore": cmd_semaphore,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    for key, value in COMMON_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        if args.trials < 1:
            raise UsageError("--trials must be >= 1")
        return COMMANDS[args.command](args)
    except (UsageError, ValueError, OSError, KeyError, NotImplementedError) as exc:
        print(f"qseal {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
