"""
harness.py - Harness di sicurezza: oracoli, attacchi scriptati, conteggi, identità algebriche

Contiene:
- OracleState / oracle: le sette query del modello di sicurezza, risposte da
  uno sfidante onesto che conosce la chiave master, con trascrizione completa
- attack_suite_mode_mixing: replay e ridirezionamenti tra modalità che devono
  finire tutti in ⊥
- opcount_signcrypt / opcount_unsigncrypt: conteggio delle operazioni dominanti
- weak_bcdh_selfcheck / weak_bcdh_sweep: identità algebrica di controllo weak-BCDH
- challenge_restrictions / security_bound_terms: vincoli dei giochi e termini di perdita
"""

import math
import secrets
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

import algebra
import codec
import gsc
import hashing
import keyauthority
from errors import IdgscError, QueryError
from groups import PairingGroup, Slot
from model_schema import (AttackAttempt, AttackReport, Envelope, Identity, MasterKey, Message,
                          Mode, OpCounter, QueryKind, QueryRecord, SystemParams, TransportHeader,
                          UserKeyPair)
from utils import xor_bytes

# Riga della tabella di confronto per questo schema: (mul G1, exp Gt, ê online, ê precalcolabili)
EXPECTED_OPCOUNTS = {
    "signcrypt": OpCounter(g1_mul=3, gt_pow=1, pairing=0, precomputed_pairing=1),
    "unsigncrypt": OpCounter(g1_mul=0, gt_pow=2, pairing=2, precomputed_pairing=2),
}


class OracleState:
    """
    Stato dello sfidante: parametri, chiave master, registro delle Extract e
    trascrizioni. Un solo scrittore; la chiave master non esce mai dalle risposte.
    """

    def __init__(self, params: SystemParams, master: MasterKey, rng=None):
        self.params = params
        self._master = master
        self.rng = rng or secrets.SystemRandom()
        self._keys: Dict[Identity, UserKeyPair] = {}
        self.extracted: set = set()
        self.transcript: List[QueryRecord] = []
        self.answers: List[Tuple[QueryKind, Any]] = []

    def key_for(self, identity: Identity) -> UserKeyPair:
        """Chiave usata internamente per rispondere (non conta come Extract)."""
        key = self._keys.get(identity)
        if key is None:
            key = keyauthority.extract(self._master, self.params, identity)
            self._keys[identity] = key
        return key

    def queries(self, kind: QueryKind) -> List[QueryRecord]:
        return [r for r in self.transcript if r.kind is kind]

    def was_output(self, env: Envelope) -> bool:
        """True se l'envelope (X, y) è stato restituito da una query Sign/Encrypt/GSC."""
        return any(isinstance(a, Envelope) and a.x == env.x and a.y == env.y
                   for _, a in self.answers)


def _require(args: Mapping[str, Any], name: str, kind: type) -> Any:
    if name not in args:
        raise QueryError(f"Argomento mancante: {name}")
    value = args[name]
    if not isinstance(value, kind):
        raise QueryError(f"{name} deve essere {kind.__name__}, non {type(value).__name__}")
    return value


def _key_or_none(state: OracleState, identity: Identity) -> Optional[UserKeyPair]:
    return None if identity.is_vacant else state.key_for(identity)


def _answer(state: OracleState, query: QueryKind, args: Mapping[str, Any]) -> Any:
    params = state.params
    if query is QueryKind.EXTRACT:
        identity = _require(args, "identity", Identity)
        key = state.key_for(identity)
        state.extracted.add(identity)
        return key
    if query is QueryKind.SIGN:
        sender = _require(args, "sender", Identity)
        m = _require(args, "message", Message)
        return gsc.sign(params, state.key_for(sender), sender, m, state.rng)
    if query is QueryKind.VERIFY:
        sender = _require(args, "sender", Identity)
        return gsc.verify(params, sender, _require(args, "envelope", Envelope))
    if query is QueryKind.ENCRYPT:
        receiver = _require(args, "receiver", Identity)
        return gsc.encrypt(params, receiver, _require(args, "message", Message), state.rng)
    if query is QueryKind.DECRYPT:
        receiver = _require(args, "receiver", Identity)
        return gsc.decrypt(params, state.key_for(receiver), _require(args, "envelope", Envelope))
    if query is QueryKind.GSC:
        sender = _require(args, "sender", Identity)
        receiver = _require(args, "receiver", Identity)
        m = _require(args, "message", Message)
        return gsc.gsc(params, _key_or_none(state, sender), sender, receiver, m, state.rng)
    if query is QueryKind.GUC:
        sender = _require(args, "sender", Identity)
        receiver = _require(args, "receiver", Identity)
        env = _require(args, "envelope", Envelope)
        return gsc.guc(params, sender, _key_or_none(state, receiver), receiver, env)
    raise QueryError(f"Tipo di query sconosciuto: {query}")


def oracle(state: OracleState, query: QueryKind, args: Mapping[str, Any]) -> Any:
    """
    Risponde a una query come lo sfidante onesto e la registra in trascrizione.

    Raises:
        QueryError: argomenti malformati (anche identità vacanti o modalità invalide)
    """
    if not isinstance(query, QueryKind):
        raise QueryError(f"Query non riconosciuta: {query!r}")
    record = QueryRecord(index=len(state.transcript), kind=query, args=dict(args))
    state.transcript.append(record)
    try:
        answer = _answer(state, query, args)
    except QueryError as e:
        record.error = str(e)
        raise
    except IdgscError as e:
        record.error = str(e)
        raise QueryError(f"{query.value}: {e}") from e
    record.answer = answer
    state.answers.append((query, answer))
    return answer


# --- Suite di attacchi ---


def random_message(state: OracleState) -> Message:
    nbytes = state.params.message_bytes
    return Message(data=state.rng.getrandbits(8 * nbytes).to_bytes(nbytes, "big"))


def _forge_without_sender_key(state: OracleState, sender: Identity, receiver: Identity,
                              m: Message) -> Envelope:
    """
    Falsario che conosce r ma non S_A: costruisce V = r^-1·h2·P per la coppia
    (A, B) e maschera correttamente. Manca il fattore ê(P_pub, Q_A)^h3.
    """
    params = state.params
    r = algebra.random_scalar(params.q, state.rng)
    x = algebra.g1_mul(r, params.generator)
    h2_value = hashing.h2(params, m, sender, receiver)
    v = algebra.g1_mul(algebra.scalar_invert(r, params.q) * h2_value % params.q,
                       params.generator_second)
    w = algebra.gt_pow(gsc.identity_pairing(params, receiver), r)
    y = xor_bytes(m.data + sender.data + v.to_bytes(), hashing.h1(params, w))
    return Envelope(x=x, y=y)


def _reheader(state: OracleState, env: Envelope, header: TransportHeader) -> Envelope:
    """Riscrive l'intestazione di trasporto passando dal formato su filo."""
    params = state.params
    return codec.decode_envelope(params, codec.encode_envelope(params, env, header))


def _attacks(state: OracleState, alice: Identity, bob: Identity,
             carol: Identity) -> List[Tuple[str, Callable[[], Tuple[QueryKind, Any]]]]:
    vacant = state.params.vacant()

    def sc_as_signature():
        env = oracle(state, QueryKind.GSC, {"sender": alice, "receiver": bob,
                                            "message": random_message(state)})
        return QueryKind.VERIFY, oracle(state, QueryKind.VERIFY,
                                        {"sender": alice, "envelope": env})

    def sc_as_encryption():
        env = oracle(state, QueryKind.GSC, {"sender": alice, "receiver": bob,
                                            "message": random_message(state)})
        return QueryKind.DECRYPT, oracle(state, QueryKind.DECRYPT,
                                         {"receiver": bob, "envelope": env})

    def sc_retargeted():
        env = oracle(state, QueryKind.GSC, {"sender": alice, "receiver": bob,
                                            "message": random_message(state)})
        return QueryKind.GUC, oracle(state, QueryKind.GUC,
                                     {"sender": alice, "receiver": carol, "envelope": env})

    def sc_resendered():
        env = oracle(state, QueryKind.GSC, {"sender": alice, "receiver": bob,
                                            "message": random_message(state)})
        return QueryKind.GUC, oracle(state, QueryKind.GUC,
                                     {"sender": carol, "receiver": bob, "envelope": env})

    def sc_header_as_signature():
        env = oracle(state, QueryKind.GSC, {"sender": alice, "receiver": bob,
                                            "message": random_message(state)})
        forged = _reheader(state, env, TransportHeader(mode=Mode.SIGNATURE_ONLY,
                                                       sender=alice, receiver=vacant))
        return QueryKind.VERIFY, oracle(state, QueryKind.VERIFY,
                                        {"sender": forged.header.sender, "envelope": forged})

    def sc_header_as_encryption():
        env = oracle(state, QueryKind.GSC, {"sender": alice, "receiver": bob,
                                            "message": random_message(state)})
        forged = _reheader(state, env, TransportHeader(mode=Mode.ENCRYPTION_ONLY,
                                                       sender=vacant, receiver=carol))
        return QueryKind.DECRYPT, oracle(state, QueryKind.DECRYPT,
                                         {"receiver": forged.header.receiver, "envelope": forged})

    def signature_as_sc():
        env = oracle(state, QueryKind.SIGN, {"sender": alice, "message": random_message(state)})
        return QueryKind.GUC, oracle(state, QueryKind.GUC,
                                     {"sender": alice, "receiver": bob, "envelope": env})

    def signature_resendered():
        env = oracle(state, QueryKind.SIGN, {"sender": alice, "message": random_message(state)})
        return QueryKind.VERIFY, oracle(state, QueryKind.VERIFY,
                                        {"sender": carol, "envelope": env})

    def encryption_as_sc():
        env = oracle(state, QueryKind.ENCRYPT, {"receiver": bob,
                                                "message": random_message(state)})
        return QueryKind.GUC, oracle(state, QueryKind.GUC,
                                     {"sender": alice, "receiver": bob, "envelope": env})

    def forged_sc_from_encryption():
        env = _forge_without_sender_key(state, alice, bob, random_message(state))
        return QueryKind.GUC, oracle(state, QueryKind.GUC,
                                     {"sender": alice, "receiver": bob, "envelope": env})

    return [
        ("signcryption->signature", sc_as_signature),
        ("signcryption->encryption", sc_as_encryption),
        ("signcryption->other-receiver", sc_retargeted),
        ("signcryption->other-sender", sc_resendered),
        ("signcryption-header->signature", sc_header_as_signature),
        ("signcryption-header->encryption", sc_header_as_encryption),
        ("signature->signcryption", signature_as_sc),
        ("signature->other-sender", signature_resendered),
        ("encryption->signcryption", encryption_as_sc),
        ("keyless-forgery->signcryption", forged_sc_from_encryption),
    ]


def attack_suite_mode_mixing(state: OracleState, attempts: int = 200) -> AttackReport:
    """
    Esegue a rotazione gli attacchi di mescolamento delle modalità e di
    ridirezionamento; ogni tentativo deve restituire ⊥.
    """
    params = state.params
    alice, bob, carol = (params.identity(n) for n in ("alice", "bob", "carol"))
    attacks = _attacks(state, alice, bob, carol)
    report = AttackReport()
    for i in range(attempts):
        name, attack = attacks[i % len(attacks)]
        query, answer = attack()
        report.attempts.append(AttackAttempt(name=name, query=query, accepted=answer is not None))
    return report


# --- Conteggio delle operazioni ---


def opcount_signcrypt(state: OracleState, sender: Optional[Identity] = None,
                      receiver: Optional[Identity] = None) -> OpCounter:
    """Operazioni di un gsc in firmacifratura, con cache già calde."""
    params = state.params
    sender = sender or params.identity("alice")
    receiver = receiver or params.identity("bob")
    key = state.key_for(sender)
    gsc.warm_caches(params, [sender, receiver])
    m = random_message(state)
    with algebra.count_operations() as counter:
        gsc.gsc(params, key, sender, receiver, m, state.rng)
    return counter


def opcount_unsigncrypt(state: OracleState, sender: Optional[Identity] = None,
                        receiver: Optional[Identity] = None) -> OpCounter:
    """Operazioni di un guc in firmacifratura, con cache già calde."""
    params = state.params
    sender = sender or params.identity("alice")
    receiver = receiver or params.identity("bob")
    env = gsc.gsc(params, state.key_for(sender), sender, receiver, random_message(state),
                  state.rng)
    key = state.key_for(receiver)
    gsc.warm_caches(params, [sender, receiver])
    with algebra.count_operations() as counter:
        result = gsc.guc(params, sender, key, receiver, env)
    if result is None:
        raise AssertionError("L'envelope onesto è stato rifiutato durante il conteggio")
    return counter


# --- Identità algebriche ---


def weak_bcdh_selfcheck(group: PairingGroup, rng=None, a: Optional[int] = None,
                        b: Optional[int] = None, c: Optional[int] = None) -> bool:
    """
    Istanza (P, aP, bP, cP, (1/c)P): con X* = aP e S_B = c·(bP) verifica
    ê(X*, S_B) = ê(P,P)^(abc) e (1/c)·(cP) = P.
    """
    rng = rng or secrets.SystemRandom()
    q = group.order
    a, b, c = (v if v is not None else algebra.random_scalar(q, rng) for v in (a, b, c))
    p_first, p_second = group.generator(Slot.FIRST), group.generator(Slot.SECOND)

    x_star = algebra.g1_mul(a, p_first)
    b_p = algebra.g1_mul(b, p_second)
    c_p = algebra.g1_mul(c, p_second)
    inv_c_p = algebra.g1_mul(algebra.scalar_invert(c, q), p_second)
    s_b = algebra.g1_mul(c, b_p)

    w_star = algebra.pair(x_star, s_b)
    expected = algebra.gt_pow(algebra.pair(p_first, p_second), a * b * c % q)
    return w_star == expected and algebra.g1_mul(algebra.scalar_invert(c, q), c_p) == p_second \
        and algebra.g1_mul(c, inv_c_p) == p_second


def weak_bcdh_sweep(group: PairingGroup) -> bool:
    """Verifica esaustiva su tutte le terne (a, b, c) di un gruppo minuscolo."""
    q = group.order
    return all(weak_bcdh_selfcheck(group, a=a, b=b, c=c)
               for a in range(1, q) for b in range(1, q) for c in range(1, q))


# --- Vincoli dei giochi e termini di perdita ---


def challenge_restrictions(state: OracleState, sender: Identity, receiver: Identity,
                           env: Envelope) -> List[str]:
    """
    Condizioni di non banalità violate da una sfida/falsificazione candidata:
    - "sender-extracted": Extract già chiesta sul mittente (falsificazione)
    - "receiver-extracted": Extract già chiesta sul destinatario (riservatezza)
    - "same-identity": mittente e destinatario coincidono
    - "oracle-output": l'envelope è una risposta di un oracolo
    """
    violations = []
    if not sender.is_vacant and sender in state.extracted:
        violations.append("sender-extracted")
    if not receiver.is_vacant and receiver in state.extracted:
        violations.append("receiver-extracted")
    if sender == receiver:
        violations.append("same-identity")
    if state.was_output(env):
        violations.append("oracle-output")
    return violations


def security_bound_terms(params: SystemParams, q1: int, qs: int, qu: int) -> Dict[str, float]:
    """
    log2 dei termini additivi della riduzione in firmacifratura:
    (q1·qs)/2^n4 e qu/2^(n1+n2+n3).
    """
    if min(q1, qs, qu) < 1:
        raise ValueError("I numeri di query devono essere positivi")
    return {
        "mask_collision": math.log2(q1 * qs) - params.n4,
        "unsigncrypt_guess": math.log2(qu) - (params.n1 + params.n2 + params.n3),
    }


def format_opcount_table(signcrypt: OpCounter, unsigncrypt: OpCounter) -> str:
    """Tabella a testo fisso stampata da `bench`."""
    lines = [
        "operation    g1_mul  gt_pow  pairing  precomputed",
        "-----------  ------  ------  -------  -----------",
    ]
    for name, counter in (("signcrypt", signcrypt), ("unsigncrypt", unsigncrypt)):
        lines.append(f"{name:<11}  {counter.g1_mul:>6}  {counter.gt_pow:>6}  "
                     f"{counter.pairing:>7}  {counter.precomputed_pairing:>11}")
    return "\n".join(lines)
