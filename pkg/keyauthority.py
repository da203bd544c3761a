"""
keyauthority.py - Il PKG: setup del sistema, custodia della chiave master, estrazione

Contiene:
- setup: genera (params, P_pub) e la chiave master s
- extract / verify_keypair: chiavi per identità (Q = H0(ID), S = sQ)
- seal_master_key / unseal_master_key: custodia cifrata a riposo
  (scrypt + ChaCha20-Poly1305, intestazione del file come dati associati)
"""

import os
import secrets
from typing import Optional, Tuple

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import ChaCha20Poly1305
from cryptography.hazmat.primitives.kdf.scrypt import Scrypt
from pydantic import ValidationError

import algebra
import codec
import hashing
from errors import InvalidParameters, KeyFileError, VacantIdentity
from groups import PairingGroup, Slot, bls12_381, toy_group, toy_group_bits
from model_schema import (Identity, MasterKey, SealedMasterKey, SecurityLevel, SystemParams,
                          UserKeyPair)
from settings import get_settings
from utils import log_debug, log_step


def resolve_group(security_level: SecurityLevel, toy_order: Optional[int] = None,
                  toy_order_bits: Optional[int] = None) -> PairingGroup:
    """Istanza del gruppo per il livello di sicurezza richiesto."""
    if security_level is SecurityLevel.BLS12_381:
        return bls12_381()
    bits = toy_order_bits if toy_order_bits is not None else get_settings().toy_order_bits
    if toy_order is None and bits < 2:
        raise InvalidParameters(f"Gruppo giocattolo di {bits} bit: servono almeno 2 bit")
    try:
        return toy_group(toy_order) if toy_order is not None else toy_group_bits(bits)
    except ValueError as e:
        raise InvalidParameters(str(e)) from e


def build_params(group: PairingGroup, p_pub, identity_bits: int = 256,
                 message_bits: int = 256) -> SystemParams:
    try:
        return SystemParams(
            group=group,
            generator=group.generator(Slot.FIRST),
            p_pub=p_pub,
            n1=identity_bits,
            n2=message_bits,
            n3=group.point_width(Slot.SECOND) * 8,
            n4=group.gt_width * 8,
            tag_version=hashing.TAG_VERSION,
        )
    except ValidationError as e:
        raise InvalidParameters(str(e.errors()[0]["msg"])) from e


def setup(security_level: SecurityLevel = SecurityLevel.BLS12_381, rng=None, *,
          identity_bits: Optional[int] = None, message_bits: Optional[int] = None,
          toy_order: Optional[int] = None,
          toy_order_bits: Optional[int] = None) -> Tuple[SystemParams, MasterKey]:
    """
    Inizializzazione del sistema.

    Args:
        security_level: curva di produzione o gruppo giocattolo
        rng: sorgente di casualità con randrange (default: secrets.SystemRandom)
        identity_bits / message_bits: n1 e n2 (default dalle impostazioni)
        toy_order / toy_order_bits: ordine esatto o dimensione del gruppo giocattolo

    Returns:
        Tuple (params, master_key) con P_pub = s·P
    """
    settings = get_settings()
    rng = rng or secrets.SystemRandom()
    group = resolve_group(security_level, toy_order, toy_order_bits)
    log_step(f"Setup PKG su {group.name} (q di {group.order.bit_length()} bit)")

    s = algebra.random_scalar(group.order, rng)
    p_pub = algebra.g1_mul(s, group.generator(Slot.FIRST))
    params = build_params(group, p_pub,
                          settings.identity_bits if identity_bits is None else identity_bits,
                          settings.message_bits if message_bits is None else message_bits)
    log_debug(f"n1={params.n1} n2={params.n2} n3={params.n3} n4={params.n4}")
    return params, MasterKey(s=s)


def extract(master: MasterKey, params: SystemParams, identity: Identity) -> UserKeyPair:
    """Q_ID = H0(ID), S_ID = s·Q_ID; l'identità vacante è rifiutata."""
    params.require_identity(identity)
    if identity.is_vacant:
        raise VacantIdentity("Nessuna chiave per l'identità vacante: H0(0) è l'elemento neutro")
    q_point = hashing.h0(params, identity)
    return UserKeyPair(identity=identity, public_point=q_point,
                       private_point=algebra.g1_mul(master.s, q_point))


def verify_keypair(params: SystemParams, key: UserKeyPair) -> bool:
    """Verifica lato client: Q = H0(ID) e ê(P, S) = ê(P_pub, Q)."""
    if key.identity.bits != params.n1 or key.identity.is_vacant:
        return False
    if key.public_point != hashing.h0(params, key.identity):
        return False
    if not key.has_private:
        return False
    return algebra.pair(params.generator, key.private_point) == algebra.pair(params.p_pub,
                                                                             key.public_point)


def master_matches(params: SystemParams, master: MasterKey) -> bool:
    return algebra.g1_mul(master.s, params.generator) == params.p_pub


# --- Custodia della chiave master ---


def _derive_key(passphrase: str, salt: bytes, log_n: int, r: int, p: int) -> bytes:
    return Scrypt(salt=salt, length=32, n=2 ** log_n, r=r, p=p).derive(passphrase.encode("utf-8"))


def _associated_data(sealed: SealedMasterKey) -> bytes:
    # Tutta l'intestazione è autenticata: cambiarla invalida il tag
    header = sealed.model_copy(update={"ciphertext": b""})
    return codec.encode_master_key(header)


def seal_master_key(master: MasterKey, params: SystemParams, passphrase: str,
                    log_n: Optional[int] = None) -> bytes:
    """Contenitore IDGSCM1 con s cifrato sotto una chiave derivata dalla passphrase."""
    log_n = log_n or get_settings().scrypt_log_n
    scalar_bytes = (params.q.bit_length() + 7) // 8
    sealed = SealedMasterKey(curve_id=params.group.curve_id, order=params.q, log_n=log_n,
                             salt=os.urandom(16), nonce=os.urandom(12), ciphertext=b"")
    key = _derive_key(passphrase, sealed.salt, sealed.log_n, sealed.r, sealed.p)
    ciphertext = ChaCha20Poly1305(key).encrypt(
        sealed.nonce, master.s.to_bytes(scalar_bytes, "big"), _associated_data(sealed))
    return codec.encode_master_key(sealed.model_copy(update={"ciphertext": ciphertext}))


def unseal_master_key(data: bytes, params: SystemParams, passphrase: str) -> MasterKey:
    """Decifra la chiave master e ricontrolla P_pub = s·P."""
    sealed = codec.decode_master_key(data)
    if (sealed.curve_id, sealed.order) != params.group.descriptor:
        raise KeyFileError("La chiave master appartiene a un altro gruppo")
    key = _derive_key(passphrase, sealed.salt, sealed.log_n, sealed.r, sealed.p)
    try:
        plain = ChaCha20Poly1305(key).decrypt(sealed.nonce, sealed.ciphertext,
                                              _associated_data(sealed))
    except InvalidTag as e:
        raise KeyFileError("Passphrase errata o file della chiave master corrotto") from e
    s = int.from_bytes(plain, "big")
    if not 0 < s < params.q:
        raise KeyFileError("Scalare master fuori intervallo")
    master = MasterKey(s=s)
    if not master_matches(params, master):
        raise KeyFileError("La chiave master non corrisponde a P_pub")
    return master
