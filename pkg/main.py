"""
main.py - Esecuzione CLI dello schema IDGSC

Sottocomandi:
- setup / extract: operazioni del PKG (parametri, chiave master, chiavi utente)
- signcrypt / unsigncrypt: algoritmo generalizzato, modalità dedotta da --from/--to
- sign / verify, encrypt / decrypt: modalità ridotte
- inspect: metadati di un contenitore (le chiavi private sono redatte)
- bench: conteggio delle operazioni dominanti e tempi

Codici di uscita: 0 successo, 1 rifiuto crittografico, 2 errore d'uso/IO/formato.
La passphrase della chiave master si legge da IDGSC_PASSPHRASE (o .env),
altrimenti viene chiesta in modo interattivo.
"""

import argparse
import getpass
import os
import sys
import time
from typing import List, Optional, Tuple

from pydantic import ValidationError

import codec
import gsc
import harness
import keyauthority
from errors import DecodeError, IdgscError
from model_schema import (MIN_MESSAGE_BITS, CliConfig, Envelope, Identity, Mode, SecurityLevel,
                          SystemParams, TransportHeader, UserKeyPair)
from settings import get_settings
from utils import (armour, dearmour, log_debug, log_error, log_info, log_step, log_warning,
                   read_file, write_atomic)

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_USAGE = 2

DEFAULT_PARAMS = "idgsc.params"
DEFAULT_MASTER = "idgsc.master"

MODE_NAMES = {"signcryption": Mode.SIGNCRYPTION, "signature": Mode.SIGNATURE_ONLY,
              "encryption": Mode.ENCRYPTION_ONLY}

# Regola delle chiavi per ogni modalità, citata negli errori d'uso
MODE_RULES = {
    Mode.SIGNCRYPTION: "modalità firmacifratura: servono --from e --to; "
                       "chiave del mittente per creare, del destinatario per aprire",
    Mode.SIGNATURE_ONLY: "modalità firma: serve la chiave del mittente, nessuna chiave del destinatario",
    Mode.ENCRYPTION_ONLY: "modalità cifratura: nessuna chiave del mittente, "
                          "serve la chiave del destinatario per decifrare",
}


class CliUsageError(IdgscError):
    """Combinazione di flag non valida, rilevata prima di qualsiasi operazione crittografica."""


# --- Parsing ---


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"serve un intero >= 1, non {value}")
    return number


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", default=DEFAULT_PARAMS, help="File dei parametri di sistema")
    common.add_argument("--hex", action="store_true", help="Scrive i contenitori in esadecimale")
    common.add_argument("--verbose", action="store_true", help="Righe DEBUG su stderr")
    common.add_argument("--workers", type=_positive_int, default=None,
                        help="Thread per la firmacifratura a blocchi")

    parser = argparse.ArgumentParser(
        description="Firmacifratura generalizzata basata sull'identità (IDGSC)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", parents=[common], help="Inizializza il PKG")
    p.add_argument("--master", default=DEFAULT_MASTER, help="File della chiave master")
    p.add_argument("--toy-group", action="store_true", help="Gruppo giocattolo (solo test)")
    p.add_argument("--toy-bits", type=int, default=None, help="Bit dell'ordine giocattolo")
    p.add_argument("--identity-bits", type=int, default=None, help="n1")
    p.add_argument("--message-bits", type=int, default=None, help="n2")

    p = sub.add_parser("extract", parents=[common], help="Estrae la chiave di un'identità")
    p.add_argument("--master", default=DEFAULT_MASTER)
    p.add_argument("--id", required=True, dest="identity", help="Identità dell'utente")
    p.add_argument("--out", required=True, dest="output", help="File della chiave utente")
    p.add_argument("--public-only", action="store_true", help="Omette la chiave privata")

    for name, helptext in (("signcrypt", "Firmacifra un file"),
                           ("unsigncrypt", "Apre un file firmacifrato")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--from", dest="sender", default=None, help="Identità del mittente")
        p.add_argument("--to", dest="receiver", default=None, help="Identità del destinatario")
        p.add_argument("--key", default=None, help="File della chiave utente")
        p.add_argument("--mode", choices=sorted(MODE_NAMES), default=None,
                       help="Modalità esplicita (deve concordare con --from/--to)")
        p.add_argument("--in", dest="input", required=True)
        p.add_argument("--out", dest="output", default=None)

    p = sub.add_parser("sign", parents=[common], help="Firma un file")
    p.add_argument("--from", dest="sender", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", default=None)

    p = sub.add_parser("verify", parents=[common], help="Verifica una firma (solo valori pubblici)")
    p.add_argument("--from", dest="sender", default=None)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", default=None, help="Scrive il messaggio firmato")

    p = sub.add_parser("encrypt", parents=[common], help="Cifra un file per un'identità")
    p.add_argument("--to", dest="receiver", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", default=None)

    p = sub.add_parser("decrypt", parents=[common], help="Decifra un file")
    p.add_argument("--to", dest="receiver", default=None)
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", default=None)

    p = sub.add_parser("inspect", parents=[common], help="Mostra i metadati di un contenitore")
    p.add_argument("--in", dest="input", required=True)

    p = sub.add_parser("bench", parents=[common], help="Conteggio operazioni e tempi")
    p.add_argument("--toy-group", action="store_true")
    p.add_argument("--toy-bits", type=int, default=None)
    p.add_argument("--rounds", type=_positive_int, default=1)
    return parser


def parse_config(argv: Optional[List[str]] = None) -> Tuple[CliConfig, argparse.Namespace]:
    args = build_parser().parse_args(argv)
    settings = get_settings()
    if getattr(args, "verbose", False):
        os.environ["IDGSC_VERBOSE"] = "1"
        get_settings.cache_clear()
    mode = MODE_NAMES[args.mode] if getattr(args, "mode", None) else None
    return CliConfig(
        command=args.command,
        params_path=args.params,
        master_path=getattr(args, "master", None),
        key_path=getattr(args, "key", None),
        sender=getattr(args, "sender", None),
        receiver=getattr(args, "receiver", None),
        identity=getattr(args, "identity", None),
        mode=mode,
        input_path=getattr(args, "input", None),
        output_path=getattr(args, "output", None),
        toy_group=getattr(args, "toy_group", False),
        toy_bits=getattr(args, "toy_bits", None),
        hex_output=args.hex,
        public_only=getattr(args, "public_only", False),
        rounds=getattr(args, "rounds", 1),
        workers=args.workers or settings.workers,
    ), args


# --- Risorse ---


def _passphrase() -> str:
    secret = get_settings().passphrase
    if secret is not None:
        return secret.get_secret_value()
    return getpass.getpass("Passphrase della chiave master: ")


def _load_params(config: CliConfig) -> SystemParams:
    log_debug(f"Caricamento parametri da {config.params_path}")
    return codec.decode_params(dearmour(read_file(config.params_path)))


def _load_key(config: CliConfig, params: SystemParams, owner: Identity, role: str) -> UserKeyPair:
    key = codec.decode_user_key(dearmour(read_file(config.key_path)))
    if key.public_point.group != params.group:
        raise CliUsageError("La chiave appartiene a un altro gruppo rispetto ai parametri")
    if key.identity != owner:
        raise CliUsageError(
            f"--key appartiene a '{key.identity.label}', ma il {role} è '{owner.label}'")
    if not key.has_private:
        raise CliUsageError(f"--key contiene solo la parte pubblica: serve la chiave privata del {role}")
    return key


def _identity(params: SystemParams, label: Optional[str]) -> Identity:
    return params.vacant() if label is None else params.identity(label)


def _resolve_mode(config: CliConfig, sender: Identity, receiver: Identity) -> Mode:
    try:
        implied = gsc.mode_of(sender, receiver)
    except IdgscError as e:
        raise CliUsageError(f"{e}: indicare --from e/o --to") from e
    if config.mode is not None and config.mode is not implied:
        raise CliUsageError(
            f"--mode {config.mode.name} in conflitto con le identità fornite ({implied.name})")
    return implied


def _write_output(config: CliConfig, data: bytes) -> None:
    if config.output_path:
        write_atomic(config.output_path, data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()


# --- Comandi ---


def _check_group_flags(config: CliConfig) -> SecurityLevel:
    if config.toy_bits is not None and config.toy_bits < 2:
        raise CliUsageError(f"--toy-bits {config.toy_bits}: servono almeno 2 bit")
    if not config.toy_group:
        if config.toy_bits is not None:
            raise CliUsageError("--toy-bits richiede --toy-group")
        return SecurityLevel.BLS12_381
    log_warning("gruppo giocattolo senza sicurezza crittografica, solo per test")
    return SecurityLevel.TOY


def _check_width_flags(args) -> None:
    if args.identity_bits is not None and (args.identity_bits % 8 or args.identity_bits < 16):
        raise CliUsageError(f"--identity-bits {args.identity_bits}: serve un multiplo di 8 >= 16")
    if args.message_bits is not None and (args.message_bits % 8
                                          or args.message_bits < MIN_MESSAGE_BITS):
        raise CliUsageError(
            f"--message-bits {args.message_bits}: serve un multiplo di 8 >= {MIN_MESSAGE_BITS}")


def cmd_setup(config: CliConfig, args) -> int:
    level = _check_group_flags(config)
    _check_width_flags(args)
    passphrase = _passphrase()
    params, master = keyauthority.setup(level, identity_bits=args.identity_bits,
                                        message_bits=args.message_bits,
                                        toy_order_bits=config.toy_bits)
    write_atomic(config.params_path, armour(codec.encode_params(params), config.hex_output))
    write_atomic(config.master_path, armour(keyauthority.seal_master_key(master, params, passphrase),
                                            config.hex_output), private=True)
    log_info(f"Parametri scritti in {config.params_path}, chiave master in {config.master_path}")
    return EXIT_OK


def cmd_extract(config: CliConfig, args) -> int:
    params = _load_params(config)
    identity = params.identity(config.identity)
    master = keyauthority.unseal_master_key(dearmour(read_file(config.master_path)), params,
                                            _passphrase())
    log_step(f"Estrazione della chiave per '{config.identity}'")
    key = keyauthority.extract(master, params, identity)
    data = codec.encode_user_key(key, include_private=not config.public_only)
    write_atomic(config.output_path, armour(data, config.hex_output),
                 private=not config.public_only)
    log_info(f"Chiave scritta in {config.output_path}")
    return EXIT_OK


def _produce(config: CliConfig, sender_label: Optional[str], receiver_label: Optional[str]) -> int:
    params = _load_params(config)
    sender, receiver = _identity(params, sender_label), _identity(params, receiver_label)
    mode = _resolve_mode(config, sender, receiver)
    if sender.is_vacant and config.key_path:
        raise CliUsageError(MODE_RULES[mode])
    if not sender.is_vacant and not config.key_path:
        raise CliUsageError(MODE_RULES[mode])
    key = _load_key(config, params, sender, "mittente") if config.key_path else None

    data = read_file(config.input_path)
    log_step(f"{mode.name}: {len(data)} byte da {sender.label} a {receiver.label}")
    envelopes = gsc.gsc_payload(params, key, sender, receiver, data, workers=config.workers)
    header = envelopes[0].header
    _write_output(config, armour(codec.encode_bundle(params, header, envelopes), config.hex_output))
    log_debug(f"{len(envelopes)} blocchi firmacifrati")
    return EXIT_OK


def _read_bundle(config: CliConfig,
                 params: SystemParams) -> Optional[Tuple[TransportHeader, List[Envelope]]]:
    """
    Bundle letto da --in, oppure None se un X non è un punto valido del gruppo.

    Un X alterato è un rifiuto come un y alterato; gli altri errori di formato
    (magic, versione, troncamento, intestazione) restano errori d'uso.
    """
    try:
        return codec.decode_bundle(params, dearmour(read_file(config.input_path)))
    except DecodeError as e:
        if e.category != "point":
            raise
        log_debug(f"Blocco non decodificabile {e}")
        return None


def _open(config: CliConfig, sender_label: Optional[str], receiver_label: Optional[str],
          use_header: bool) -> int:
    params = _load_params(config)
    bundle = _read_bundle(config, params)
    if bundle is None:
        log_error("RIFIUTATO")
        return EXIT_REJECT
    header, envelopes = bundle
    sender = _identity(params, sender_label) if sender_label or not use_header else header.sender
    receiver = (_identity(params, receiver_label) if receiver_label or not use_header
                else header.receiver)
    mode = _resolve_mode(config, sender, receiver)
    if receiver.is_vacant and config.key_path:
        raise CliUsageError(MODE_RULES[mode])
    if not receiver.is_vacant and not config.key_path:
        raise CliUsageError(MODE_RULES[mode])
    key = _load_key(config, params, receiver, "destinatario") if config.key_path else None

    log_step(f"{mode.name}: apertura di {len(envelopes)} blocchi")
    data = gsc.guc_payload(params, sender, key, receiver, envelopes, workers=config.workers)
    if data is None:
        log_error("RIFIUTATO")
        return EXIT_REJECT
    if not sender.is_vacant:
        log_info(f"Mittente autenticato: {sender.label}")
    _write_output(config, data)
    return EXIT_OK


def cmd_signcrypt(config: CliConfig, args) -> int:
    return _produce(config, config.sender, config.receiver)


def cmd_unsigncrypt(config: CliConfig, args) -> int:
    return _open(config, config.sender, config.receiver, use_header=True)


def cmd_sign(config: CliConfig, args) -> int:
    return _produce(config, config.sender, None)


def cmd_verify(config: CliConfig, args) -> int:
    sender_label = config.sender
    if sender_label is None:
        bundle = _read_bundle(config, _load_params(config))
        if bundle is None:
            log_error("RIFIUTATO")
            return EXIT_REJECT
        header = bundle[0]
        if header.sender.is_vacant:
            raise CliUsageError(MODE_RULES[Mode.SIGNATURE_ONLY])
        sender_label = header.sender.label
    return _open(config, sender_label, None, use_header=False)


def cmd_encrypt(config: CliConfig, args) -> int:
    return _produce(config, None, config.receiver)


def cmd_decrypt(config: CliConfig, args) -> int:
    receiver = config.receiver
    if receiver is None:
        receiver = codec.decode_user_key(dearmour(read_file(config.key_path))).identity.label
    return _open(config, None, receiver, use_header=False)


def cmd_inspect(config: CliConfig, args) -> int:
    data = dearmour(read_file(config.input_path))
    kind = codec.container_kind(data)
    print(f"contenitore: {kind}")
    if kind == "params":
        params = codec.decode_params(data)
        print(f"gruppo: {params.group.name} (q di {params.q.bit_length()} bit)")
        print(f"n1={params.n1} n2={params.n2} n3={params.n3} n4={params.n4} "
              f"tag_version={params.tag_version}")
        print(f"P_pub: {params.p_pub.to_bytes().hex()}")
    elif kind == "master":
        sealed = codec.decode_master_key(data)
        print(f"curve id: {sealed.curve_id}, scrypt log2N={sealed.log_n} r={sealed.r} p={sealed.p}")
        print("s: <cifrato>")
    elif kind == "key":
        key = codec.decode_user_key(data)
        print(f"identità: {key.identity.label}")
        print(f"Q: {key.public_point.to_bytes().hex()}")
        print(f"S: {'<redatto>' if key.has_private else '<assente>'}")
    else:
        params = _load_params(config)
        if kind == "envelope":
            env = codec.decode_envelope(params, data)
            header, count = env.header, 1
        else:
            header, envelopes = codec.decode_bundle(params, data)
            count = len(envelopes)
        print(f"modalità: {header.mode.name}")
        print(f"mittente (non autenticato): {header.sender.label}")
        print(f"destinatario (non autenticato): {header.receiver.label}")
        print(f"blocchi: {count}")
    return EXIT_OK


def cmd_bench(config: CliConfig, args) -> int:
    level = _check_group_flags(config)
    params, master = keyauthority.setup(level, toy_order_bits=config.toy_bits)
    state = harness.OracleState(params, master)
    signcrypt = harness.opcount_signcrypt(state)
    unsigncrypt = harness.opcount_unsigncrypt(state)
    print(harness.format_opcount_table(signcrypt, unsigncrypt))

    alice, bob = params.identity("alice"), params.identity("bob")
    key_a, key_b = state.key_for(alice), state.key_for(bob)
    m = harness.random_message(state)
    start = time.perf_counter()
    for _ in range(config.rounds):
        env = gsc.gsc(params, key_a, alice, bob, m, state.rng)
    middle = time.perf_counter()
    for _ in range(config.rounds):
        gsc.guc(params, alice, key_b, bob, env)
    end = time.perf_counter()
    print(f"signcrypt: {(middle - start) * 1000 / config.rounds:.2f} ms, "
          f"unsigncrypt: {(end - middle) * 1000 / config.rounds:.2f} ms "
          f"({params.group.name}, {config.rounds} round)")

    expected = harness.EXPECTED_OPCOUNTS
    matches = (signcrypt.as_row() == expected["signcrypt"].as_row()
               and unsigncrypt.as_row() == expected["unsigncrypt"].as_row())
    print("conforme alla tabella: " + ("sì" if matches else "NO"))
    return EXIT_OK if matches else EXIT_REJECT


COMMANDS = {
    "setup": cmd_setup, "extract": cmd_extract, "signcrypt": cmd_signcrypt,
    "unsigncrypt": cmd_unsigncrypt, "sign": cmd_sign, "verify": cmd_verify,
    "encrypt": cmd_encrypt, "decrypt": cmd_decrypt, "inspect": cmd_inspect, "bench": cmd_bench,
}


def main(argv: Optional[List[str]] = None) -> int:
    try:
        config, args = parse_config(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return COMMANDS[config.command](config, args)
    except DecodeError as e:
        log_error(f"Formato non valido {e}")
        return EXIT_USAGE
    except (IdgscError, OSError) as e:
        log_error(str(e))
        return EXIT_USAGE
    except ValidationError as e:
        log_error(f"Valore non valido: {e.errors()[0]['msg']}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
