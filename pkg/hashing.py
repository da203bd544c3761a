"""
hashing.py - Oracoli casuali H0..H3 e funzione di selezione della modalità f

Vincoli dello schema:
- H0(identità vacante) = elemento neutro di G1
- H1(1) = stringa tutta a zero
- H2, H3 a valori in Z_q^* (rehash con contatore se il risultato è 0)
I tag di dominio sono costanti versionate e pubblicate nel formato dei file.
"""

import hashlib
from functools import lru_cache
from itertools import count

from groups import G1Point, GtElement, PairingGroup, Slot
from model_schema import Identity, Message, SystemParams

TAG_VERSION = 1
H0_DST = b"IDGSC-V01-H0-BLS12381G1_XMD:SHA-256_SSWU_RO_"
H1_TAG = b"IDGSC-V01-H1-MASK"
H2_TAG = b"IDGSC-V01-H2-SCALAR"
H3_TAG = b"IDGSC-V01-H3-SCALAR"

DOMAIN_TAGS = (H0_DST, H1_TAG, H2_TAG, H3_TAG)


def f(identity: Identity) -> int:
    """0 per l'identità vacante, 1 altrimenti."""
    return 0 if identity.is_vacant else 1


@lru_cache(maxsize=4096)
def _h0_cached(group: PairingGroup, data: bytes) -> G1Point:
    return group.hash_to_point(data, H0_DST, Slot.SECOND)


def h0(params: SystemParams, identity: Identity) -> G1Point:
    """Chiave pubblica Q_ID = H0(ID) nel secondo slot."""
    params.require_identity(identity)
    if identity.is_vacant:
        return params.group.identity(Slot.SECOND)
    return _h0_cached(params.group, identity.data)


def h1(params: SystemParams, w: GtElement) -> bytes:
    """Maschera di n2 + n1 + n3 bit derivata da w con SHAKE256."""
    if w.is_identity():
        return bytes(params.mask_bytes)
    return hashlib.shake_256(H1_TAG + w.to_bytes()).digest(params.mask_bytes)


def _hash_to_scalar(tag: bytes, payload: bytes, q: int) -> int:
    wide = (q.bit_length() + 128 + 7) // 8
    for counter in count():
        suffix = counter.to_bytes(4, "big") if counter else b""
        digest = hashlib.shake_256(tag + payload + suffix).digest(wide)
        value = int.from_bytes(digest, "big") % q
        if value:
            return value


def h2(params: SystemParams, m: Message, id_a: Identity, id_b: Identity) -> int:
    """h2 = H2(m || ID_A || ID_B) in Z_q^*."""
    params.require_identity(id_a)
    params.require_identity(id_b)
    return _hash_to_scalar(H2_TAG, m.data + id_a.data + id_b.data, params.q)


def h3(params: SystemParams, m: Message, x: G1Point, binding: bytes = b"") -> int:
    """
    h3 = H3(m || X) in Z_q^*.

    binding estende il dominio per i payload a più blocchi
    (indice e numero di blocchi); vuoto per il messaggio singolo.
    """
    return _hash_to_scalar(H3_TAG, m.data + x.to_bytes() + binding, params.q)
