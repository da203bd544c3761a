"""
gsc.py - Firmacifratura generalizzata basata sull'identità

Un'unica coppia di algoritmi (gsc, guc) che, a seconda delle identità
vacanti, lavora come:
- firmacifratura (mittente e destinatario presenti)
- sola firma (destinatario vacante: maschera nulla, verifica pubblica)
- sola cifratura (mittente vacante: nessun termine della chiave del mittente)

Contiene anche i wrapper sign/verify/encrypt/decrypt e la variante a più
blocchi per payload di lunghezza arbitraria.
"""

import secrets
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional

import algebra
import codec
from errors import DecodeError, InvalidModeCombination, MissingKey, PaddingError
from groups import G1Point, GtElement, Slot
from hashing import f, h0, h1, h2, h3
from model_schema import Envelope, Identity, Message, Mode, SystemParams, TransportHeader, UserKeyPair
from utils import xor_bytes


def mode_of(sender: Identity, receiver: Identity) -> Mode:
    """
    Modalità determinata dalle identità vacanti.

    Raises:
        InvalidModeCombination: entrambe vacanti, oppure mittente = destinatario
    """
    if sender.is_vacant and receiver.is_vacant:
        raise InvalidModeCombination("Mittente e destinatario entrambi vacanti")
    if sender.is_vacant:
        return Mode.ENCRYPTION_ONLY
    if receiver.is_vacant:
        return Mode.SIGNATURE_ONLY
    if sender == receiver:
        raise InvalidModeCombination("Mittente e destinatario coincidono")
    return Mode.SIGNCRYPTION


# --- Accoppiamenti precalcolabili ---


def precomputed_pairing(params: SystemParams, first: G1Point, second: G1Point) -> GtElement:
    """
    ê(first, second) dalla cache dei parametri.

    Ogni uso è conteggiato come accoppiamento precalcolabile; il calcolo alla
    prima richiesta non entra nei contatori online.
    """
    algebra.tally_precomputed_pairing()
    key = (first, second)
    cache = params.pairing_cache
    value = cache.get(key)
    if value is None:
        with algebra.uncounted():
            value = algebra.pair(first, second)
        cache[key] = value
    return value


def base_pairing(params: SystemParams) -> GtElement:
    """ê(P, P)."""
    return precomputed_pairing(params, params.generator, params.generator_second)


def identity_pairing(params: SystemParams, identity: Identity) -> GtElement:
    """ê(P_pub, Q_ID)."""
    return precomputed_pairing(params, params.p_pub, h0(params, identity))


def warm_caches(params: SystemParams, identities: Iterable[Identity] = ()) -> None:
    """Precalcola ê(P,P) e ê(P_pub, Q_ID) senza toccare i contatori."""
    with algebra.count_operations():
        base_pairing(params)
        for identity in identities:
            if not identity.is_vacant:
                identity_pairing(params, identity)


# --- Algoritmi principali ---


def _check_key(params: SystemParams, key: Optional[UserKeyPair], identity: Identity,
               role: str, mode: Mode) -> UserKeyPair:
    if key is None or not key.has_private:
        raise MissingKey(f"La modalità {mode.name} richiede la chiave privata del {role}")
    if key.identity != identity:
        raise MissingKey(f"La chiave fornita non appartiene al {role} {identity.label}")
    return key


def gsc(params: SystemParams, sender_key: Optional[UserKeyPair], sender: Identity,
        receiver: Identity, m: Message, rng=None, binding: bytes = b"") -> Envelope:
    """
    Firmacifratura generalizzata.

    X = rP, V = r^-1·(h2·P + f(ID_A)·h3·S_A), w = ê(P_pub, Q_B)^(r·f(ID_B)),
    y = (m || ID_A || V) xor H1(w).
    V è calcolato come (r^-1·h2)·P + (r^-1·h3)·S_A: due moltiplicazioni in G1.

    Args:
        sender_key: chiave del mittente, può mancare solo in sola cifratura
        rng: sorgente di casualità con randrange (default: secrets.SystemRandom)
        binding: estensione del dominio di H3 (payload a blocchi)
    """
    params.require_identity(sender)
    params.require_identity(receiver)
    m.require_width(params.n2)
    mode = mode_of(sender, receiver)
    f_a, f_b = f(sender), f(receiver)
    if f_a:
        sender_key = _check_key(params, sender_key, sender, "mittente", mode)

    rng = rng or secrets.SystemRandom()
    q = params.q
    r = algebra.random_scalar(q, rng)
    x = algebra.g1_mul(r, params.generator)
    h2_value = h2(params, m, sender, receiver)
    h3_value = h3(params, m, x, binding)
    r_inv = algebra.scalar_invert(r, q)

    v = algebra.g1_mul(r_inv * h2_value % q, params.generator_second)
    if f_a:
        v = algebra.g1_add(v, algebra.g1_mul(r_inv * h3_value % q, sender_key.private_point))

    if f_b:
        w = algebra.gt_pow(identity_pairing(params, receiver), r)
    else:
        w = params.group.gt_identity()

    y = xor_bytes(m.data + sender.data + v.to_bytes(), h1(params, w))
    return Envelope(x=x, y=y, header=TransportHeader(mode=mode, sender=sender, receiver=receiver))


def guc(params: SystemParams, sender: Identity, receiver_key: Optional[UserKeyPair],
        receiver: Identity, env: Envelope, binding: bytes = b"") -> Optional[Message]:
    """
    Unsigncryption generalizzata.

    Restituisce m se ê(X, V) = ê(P,P)^h2 · ê(P_pub, Q_A)^(h3·f(ID_A)) e
    l'identità smascherata coincide con il mittente dichiarato, altrimenti
    None (⊥) senza distinguere la causa.

    Raises:
        InvalidModeCombination / MissingKey: errori d'uso, non rifiuti
    """
    params.require_identity(sender)
    params.require_identity(receiver)
    mode = mode_of(sender, receiver)
    f_a, f_b = f(sender), f(receiver)
    if f_b:
        receiver_key = _check_key(params, receiver_key, receiver, "destinatario", mode)

    x = env.x
    if x.group != params.group or x.slot is not Slot.FIRST or x.is_identity():
        return None
    if len(env.y) != params.mask_bytes:
        return None

    if f_b:
        w = algebra.pair(x, receiver_key.private_point)
    else:
        w = params.group.gt_identity()
    plain = xor_bytes(env.y, h1(params, w))

    m_len, id_len = params.message_bytes, params.identity_bytes
    m = Message(data=plain[:m_len])
    if plain[m_len:m_len + id_len] != sender.data:
        return None
    try:
        v = params.group.decode_point(plain[m_len + id_len:], Slot.SECOND)
    except DecodeError:
        return None
    if v.is_identity():
        return None

    h2_value = h2(params, m, sender, receiver)
    h3_value = h3(params, m, x, binding)
    lhs = algebra.pair(x, v)
    rhs = algebra.gt_pow(base_pairing(params), h2_value)
    if f_a:
        rhs = rhs * algebra.gt_pow(identity_pairing(params, sender), h3_value)
    return m if lhs == rhs else None


# --- Modalità ridotte ---


def sign(params: SystemParams, sender_key: UserKeyPair, sender: Identity, m: Message,
         rng=None) -> Envelope:
    """Firma: gsc con destinatario vacante; y = m || ID_A || V in chiaro."""
    return gsc(params, sender_key, sender, params.vacant(), m, rng)


def verify(params: SystemParams, sender: Identity, env: Envelope) -> Optional[Message]:
    """Verifica con i soli valori pubblici; restituisce m se valida."""
    return guc(params, sender, None, params.vacant(), env)


def encrypt(params: SystemParams, receiver: Identity, m: Message, rng=None) -> Envelope:
    """Cifratura: gsc con mittente vacante, V = r^-1·h2·P."""
    return gsc(params, None, params.vacant(), receiver, m, rng)


def decrypt(params: SystemParams, receiver_key: UserKeyPair, env: Envelope) -> Optional[Message]:
    return guc(params, params.vacant(), receiver_key, receiver_key.identity, env)


# --- Payload a più blocchi ---


def block_binding(index: int, count: int) -> bytes:
    """Indice e numero di blocchi aggiunti all'input di H3."""
    return index.to_bytes(4, "big") + count.to_bytes(4, "big")


def gsc_payload(params: SystemParams, sender_key: Optional[UserKeyPair], sender: Identity,
                receiver: Identity, data: bytes, rng=None, workers: int = 1) -> List[Envelope]:
    """
    Firmacifra un payload arbitrario: padding, poi un gsc per blocco con r
    indipendente, legando ogni blocco alla sua posizione.
    """
    padded = codec.pad(data, params.message_bytes)
    count = len(padded.blocks)

    def _one(index: int) -> Envelope:
        return gsc(params, sender_key, sender, receiver, Message(data=padded.blocks[index]),
                   rng, block_binding(index, count))

    if workers <= 1 or count == 1:
        return [_one(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(_one, range(count)))


def guc_payload(params: SystemParams, sender: Identity, receiver_key: Optional[UserKeyPair],
                receiver: Identity, envelopes: List[Envelope], workers: int = 1) -> Optional[bytes]:
    """Inverso di gsc_payload; None se un blocco è rifiutato o il padding è incoerente."""
    count = len(envelopes)
    if count == 0:
        return None

    def _one(index: int) -> Optional[Message]:
        return guc(params, sender, receiver_key, receiver, envelopes[index],
                   block_binding(index, count))

    if workers <= 1 or count == 1:
        messages = [_one(i) for i in range(count)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            messages = list(executor.map(_one, range(count)))

    if any(m is None for m in messages):
        return None
    try:
        return codec.unpad(codec.blocks_to_payload([m.data for m in messages]))
    except PaddingError:
        return None
