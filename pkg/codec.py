"""
codec.py - Padding dei payload e codifica canonica dei contenitori

Formati (tutti gli interi big endian, versione di formato 1):
- Parametri:   IDGSCP1 | ver | gruppo | tag_ver | n1 n2 n3 n4 (2 byte ciascuno) | P_pub
- Chiave master: IDGSCM1 | ver | gruppo | log2N | r | p | salt(16) | nonce(12) | len(2) | cifrato
- Chiave utente: IDGSCK1 | ver | gruppo | flag privata | len id(2) | id | Q | [S]
- Envelope:    IDGSCE1 | ver | modalità | id mittente | id destinatario | X | y
- Bundle:      IDGSCB1 | ver | modalità | id mittente | id destinatario | blocchi(4) | (X | y)*
dove "gruppo" = curve id(1) | len ordine(1) | ordine.
"""

from typing import List, Optional, Tuple

from pydantic import ValidationError

from errors import DecodeError, PaddingError
from groups import PairingGroup, Slot, load_group
from model_schema import (PAD_LENGTH_BYTES, Envelope, Identity, Mode, PaddedPayload,
                          SealedMasterKey, SystemParams, TransportHeader, UserKeyPair)

PARAMS_MAGIC = b"IDGSCP1"
MASTER_MAGIC = b"IDGSCM1"
KEY_MAGIC = b"IDGSCK1"
ENVELOPE_MAGIC = b"IDGSCE1"
BUNDLE_MAGIC = b"IDGSCB1"
FORMAT_VERSION = 1

PAD_MARKER = 0x80
MAX_PAYLOAD = 2 ** 32 - 1


class _Reader:
    """Lettore sequenziale che segnala troncamenti e byte in eccesso."""

    def __init__(self, data: bytes):
        self._data = bytes(data)
        self._pos = 0

    def take(self, n: int) -> bytes:
        if self._pos + n > len(self._data):
            raise DecodeError("truncated", f"servono {n} byte alla posizione {self._pos}")
        chunk = self._data[self._pos:self._pos + n]
        self._pos += n
        return chunk

    def uint(self, n: int) -> int:
        return int.from_bytes(self.take(n), "big")

    def header(self, magic: bytes) -> None:
        if self.take(len(magic)) != magic:
            raise DecodeError("magic", f"atteso {magic.decode()}")
        version = self.uint(1)
        if version != FORMAT_VERSION:
            raise DecodeError("version", f"versione {version} non supportata")

    def finish(self) -> None:
        if self._pos != len(self._data):
            raise DecodeError("width", f"{len(self._data) - self._pos} byte in eccesso")


# --- Padding ---


def pad(data: bytes, block_bytes: int) -> PaddedPayload:
    """
    data || 0x80 || 0x00* || len(data) su 4 byte, fino a un multiplo di block_bytes.

    Il padding occupa almeno 5 byte: un input lungo esattamente un blocco
    produce due blocchi.
    """
    if len(data) > MAX_PAYLOAD:
        raise PaddingError(f"Payload di {len(data)} byte oltre il limite di 2^32 - 1")
    if block_bytes < PAD_LENGTH_BYTES + 1:
        raise PaddingError(f"Blocchi di {block_bytes} byte troppo piccoli per il padding")
    used = len(data) + 1 + PAD_LENGTH_BYTES
    total = -(-used // block_bytes) * block_bytes
    padded = (data + bytes([PAD_MARKER]) + bytes(total - used)
              + len(data).to_bytes(PAD_LENGTH_BYTES, "big"))
    blocks = tuple(padded[i:i + block_bytes] for i in range(0, total, block_bytes))
    return PaddedPayload(blocks=blocks, original_length=len(data))


def unpad(payload: PaddedPayload) -> bytes:
    """Inverso di pad; solleva PaddingError per qualunque incoerenza."""
    if not payload.blocks:
        raise PaddingError("Nessun blocco")
    block_bytes = len(payload.blocks[0])
    if any(len(b) != block_bytes for b in payload.blocks):
        raise PaddingError("Blocchi di larghezza diversa")
    joined = b"".join(payload.blocks)
    length = int.from_bytes(joined[-PAD_LENGTH_BYTES:], "big")
    used = length + 1 + PAD_LENGTH_BYTES
    if used > len(joined) or -(-used // block_bytes) * block_bytes != len(joined):
        raise PaddingError("Lunghezza dichiarata incoerente con il numero di blocchi")
    if joined[length] != PAD_MARKER or any(joined[length + 1:-PAD_LENGTH_BYTES]):
        raise PaddingError("Byte di riempimento non validi")
    if length != payload.original_length:
        raise PaddingError("Lunghezza originale non corrispondente")
    return joined[:length]


def blocks_to_payload(blocks: List[bytes]) -> PaddedPayload:
    """Ricostruisce il PaddedPayload da blocchi ricevuti (lunghezza dal trailer)."""
    if not blocks:
        raise PaddingError("Nessun blocco")
    length = int.from_bytes(blocks[-1][-PAD_LENGTH_BYTES:], "big")
    return PaddedPayload(blocks=tuple(blocks), original_length=length)


# --- Descrittore del gruppo ---


def _encode_group(group: PairingGroup) -> bytes:
    order = group.order.to_bytes((group.order.bit_length() + 7) // 8, "big")
    return bytes([group.curve_id, len(order)]) + order


def _decode_group(reader: _Reader) -> PairingGroup:
    curve_id = reader.uint(1)
    order_bytes = reader.take(reader.uint(1))
    if not order_bytes or order_bytes[0] == 0:
        raise DecodeError("field", "ordine del gruppo non canonico")
    return load_group(curve_id, int.from_bytes(order_bytes, "big"))


# --- Parametri ---


def encode_params(params: SystemParams) -> bytes:
    return (PARAMS_MAGIC + bytes([FORMAT_VERSION]) + _encode_group(params.group)
            + bytes([params.tag_version])
            + b"".join(n.to_bytes(2, "big") for n in (params.n1, params.n2, params.n3, params.n4))
            + params.p_pub.to_bytes())


def decode_params(data: bytes) -> SystemParams:
    reader = _Reader(data)
    reader.header(PARAMS_MAGIC)
    group = _decode_group(reader)
    tag_version = reader.uint(1)
    n1, n2, n3, n4 = (reader.uint(2) for _ in range(4))
    if n3 != group.point_width(Slot.SECOND) * 8 or n4 != group.gt_width * 8:
        raise DecodeError("width", f"n3={n3}/n4={n4} incoerenti con {group.name}")
    p_pub = group.decode_point(reader.take(group.point_width(Slot.FIRST)), Slot.FIRST)
    reader.finish()
    try:
        return SystemParams(group=group, generator=group.generator(Slot.FIRST), p_pub=p_pub,
                            n1=n1, n2=n2, n3=n3, n4=n4, tag_version=tag_version)
    except ValidationError as e:
        raise DecodeError("field", str(e.errors()[0]["msg"])) from e


# --- Chiave master ---


def encode_master_key(sealed: SealedMasterKey) -> bytes:
    order = sealed.order.to_bytes((sealed.order.bit_length() + 7) // 8, "big")
    return (MASTER_MAGIC + bytes([FORMAT_VERSION, sealed.curve_id, len(order)]) + order
            + bytes([sealed.log_n, sealed.r, sealed.p]) + sealed.salt + sealed.nonce
            + len(sealed.ciphertext).to_bytes(2, "big") + sealed.ciphertext)


def decode_master_key(data: bytes) -> SealedMasterKey:
    reader = _Reader(data)
    reader.header(MASTER_MAGIC)
    curve_id = reader.uint(1)
    order = reader.uint(reader.uint(1))
    log_n, r, p = reader.uint(1), reader.uint(1), reader.uint(1)
    salt, nonce = reader.take(16), reader.take(12)
    ciphertext = reader.take(reader.uint(2))
    reader.finish()
    return SealedMasterKey(curve_id=curve_id, order=order, log_n=log_n, r=r, p=p,
                           salt=salt, nonce=nonce, ciphertext=ciphertext)


# --- Chiavi utente ---


def encode_user_key(key: UserKeyPair, include_private: bool = True) -> bytes:
    group = key.public_point.group
    private = include_private and key.has_private
    out = (KEY_MAGIC + bytes([FORMAT_VERSION]) + _encode_group(group) + bytes([int(private)])
           + len(key.identity.data).to_bytes(2, "big") + key.identity.data
           + key.public_point.to_bytes())
    if private:
        out += key.private_point.to_bytes()
    return out


def decode_user_key(data: bytes) -> UserKeyPair:
    reader = _Reader(data)
    reader.header(KEY_MAGIC)
    group = _decode_group(reader)
    flag = reader.uint(1)
    if flag not in (0, 1):
        raise DecodeError("field", f"flag della chiave privata non valido: {flag}")
    identity = _decode_identity(reader.take(reader.uint(2)))
    width = group.point_width(Slot.SECOND)
    public = group.decode_point(reader.take(width), Slot.SECOND)
    private = group.decode_point(reader.take(width), Slot.SECOND) if flag else None
    reader.finish()
    return UserKeyPair(identity=identity, public_point=public, private_point=private)


# --- Envelope e bundle ---


def _decode_identity(raw: bytes) -> Identity:
    try:
        return Identity(data=raw)
    except ValidationError as e:
        raise DecodeError("width", "identità troppo corta") from e


def _encode_header(magic: bytes, header: TransportHeader) -> bytes:
    return (magic + bytes([FORMAT_VERSION, header.mode.value])
            + header.sender.data + header.receiver.data)


def _decode_header(reader: _Reader, magic: bytes, params: SystemParams) -> TransportHeader:
    reader.header(magic)
    mode_byte = reader.uint(1)
    try:
        mode = Mode(mode_byte)
    except ValueError as e:
        raise DecodeError("field", f"byte di modalità sconosciuto: {mode_byte}") from e
    sender = _decode_identity(reader.take(params.identity_bytes))
    receiver = _decode_identity(reader.take(params.identity_bytes))
    return TransportHeader(mode=mode, sender=sender, receiver=receiver)


def _encode_body(params: SystemParams, env: Envelope) -> bytes:
    if len(env.y) != params.mask_bytes:
        raise ValueError(f"y di {len(env.y)} byte, attesi {params.mask_bytes}")
    return env.x.to_bytes() + env.y


def _decode_body(reader: _Reader, params: SystemParams, header: TransportHeader) -> Envelope:
    x = params.group.decode_point(reader.take(params.group.point_width(Slot.FIRST)), Slot.FIRST)
    y = reader.take(params.mask_bytes)
    return Envelope(x=x, y=y, header=header)


def encode_envelope(params: SystemParams, env: Envelope,
                    header: Optional[TransportHeader] = None) -> bytes:
    header = header or env.header
    if header is None:
        raise ValueError("Envelope senza intestazione di trasporto")
    return _encode_header(ENVELOPE_MAGIC, header) + _encode_body(params, env)


def decode_envelope(params: SystemParams, data: bytes) -> Envelope:
    reader = _Reader(data)
    header = _decode_header(reader, ENVELOPE_MAGIC, params)
    env = _decode_body(reader, params, header)
    reader.finish()
    return env


def encode_bundle(params: SystemParams, header: TransportHeader, envelopes: List[Envelope]) -> bytes:
    return (_encode_header(BUNDLE_MAGIC, header) + len(envelopes).to_bytes(4, "big")
            + b"".join(_encode_body(params, env) for env in envelopes))


def decode_bundle(params: SystemParams, data: bytes) -> Tuple[TransportHeader, List[Envelope]]:
    reader = _Reader(data)
    header = _decode_header(reader, BUNDLE_MAGIC, params)
    count = reader.uint(4)
    envelopes = [_decode_body(reader, params, header) for _ in range(count)]
    reader.finish()
    return header, envelopes


def container_kind(data: bytes) -> str:
    """Tipo di contenitore dal magic (per il comando inspect)."""
    for magic, kind in ((PARAMS_MAGIC, "params"), (MASTER_MAGIC, "master"), (KEY_MAGIC, "key"),
                        (ENVELOPE_MAGIC, "envelope"), (BUNDLE_MAGIC, "bundle")):
        if data.startswith(magic):
            return kind
    raise DecodeError("magic", "contenitore sconosciuto")
