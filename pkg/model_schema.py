"""
model_schema.py - Definizione dei modelli dati per IDGSC

Contiene:
- Identità, messaggi e modalità (Identity, Message, Mode)
- Parametri di sistema e chiavi (SystemParams, MasterKey, UserKeyPair, SealedMasterKey)
- Cifrati e payload (Envelope, TransportHeader, PaddedPayload)
- Configurazione CLI (CliConfig)
- Strutture dell'harness (OpCounter, QueryKind, QueryRecord, AttackAttempt, AttackReport)
"""

from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from errors import MalformedIdentity, MalformedMessage
from groups import G1Point, PairingGroup, Slot

# Lunghezza in coda a ogni payload: un blocco deve contenere almeno marcatore + lunghezza
PAD_LENGTH_BYTES = 4
MIN_MESSAGE_BITS = 8 * (PAD_LENGTH_BYTES + 1)

# --- Scelte di sicurezza ---


class SecurityLevel(str, Enum):
    """Istanza del gruppo richiesta a setup."""
    BLS12_381 = "bls12-381"   # ~128 bit, curva di produzione
    TOY = "toy"               # ordine piccolo, solo per test e oracoli a forza bruta


# --- Identità e messaggi ---


class Identity(BaseModel):
    """
    Identità a larghezza fissa di n1 bit.

    La stringa tutta a zero è la sentinella "vacante" (ID = 0): non è mai
    un utente reale e seleziona la modalità ridotta dello schema.
    Le etichette testuali sono codificate come byte di lunghezza + UTF-8 +
    zeri a destra.
    """
    model_config = ConfigDict(frozen=True)
    data: bytes = Field(description="Byte dell'identità (n1/8)")

    @model_validator(mode="after")
    def _check_width(self) -> "Identity":
        if len(self.data) < 2:
            raise ValueError("Identità troppo corta")
        return self

    @classmethod
    def from_label(cls, label: str, bits: int = 256) -> "Identity":
        if bits % 8 or bits < 16:
            raise MalformedIdentity(f"n1={bits} non è un multiplo di 8 >= 16")
        raw = label.encode("utf-8")
        width = bits // 8
        if not raw:
            raise MalformedIdentity("Etichetta vuota: coincide con l'identità vacante")
        if len(raw) > width - 1:
            raise MalformedIdentity(
                f"Etichetta '{label}' di {len(raw)} byte, massimo {width - 1}")
        return cls(data=bytes([len(raw)]) + raw + bytes(width - 1 - len(raw)))

    @classmethod
    def vacant(cls, bits: int = 256) -> "Identity":
        return cls(data=bytes(bits // 8))

    @property
    def is_vacant(self) -> bool:
        return not any(self.data)

    @property
    def bits(self) -> int:
        return len(self.data) * 8

    @property
    def label(self) -> str:
        """Etichetta leggibile (o esadecimale se la codifica non è testuale)."""
        if self.is_vacant:
            return "<vacante>"
        length = self.data[0]
        body, rest = self.data[1:1 + length], self.data[1 + length:]
        if 0 < length < len(self.data) and not any(rest):
            try:
                return body.decode("utf-8")
            except UnicodeDecodeError:
                pass
        return self.data.hex()


class Message(BaseModel):
    """Blocco messaggio di esattamente n2 bit."""
    model_config = ConfigDict(frozen=True)
    data: bytes

    def require_width(self, n2: int) -> None:
        if len(self.data) * 8 != n2:
            raise MalformedMessage(f"Messaggio di {len(self.data) * 8} bit, attesi {n2}")


class Mode(int, Enum):
    """Modalità dello schema generalizzato (valore = byte sul filo)."""
    SIGNCRYPTION = 1
    SIGNATURE_ONLY = 2
    ENCRYPTION_ONLY = 3


# --- Parametri e chiavi ---


class SystemParams(BaseModel):
    """
    Parametri pubblici globali (params, P_pub).

    generator è P nel primo slot; la sua copia nel secondo slot si ottiene
    con generator_second. n3 è la larghezza di un punto del secondo slot
    (il V mascherato), n4 quella di un elemento di Gt.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)
    group: PairingGroup
    generator: G1Point
    p_pub: G1Point
    n1: int = Field(description="bit di un'identità")
    n2: int = Field(description="bit di un blocco messaggio")
    n3: int = Field(description="bit di un punto compresso del secondo slot")
    n4: int = Field(description="bit di un elemento serializzato di Gt")
    tag_version: int = Field(default=1, description="versione dei tag di dominio")

    _pairing_cache: Dict[Any, Any] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def _check_invariants(self) -> "SystemParams":
        if self.generator != self.group.generator(Slot.FIRST):
            raise ValueError("Il generatore non corrisponde a quello del gruppo")
        if self.p_pub.slot is not Slot.FIRST:
            raise ValueError("P_pub deve stare nel primo slot")
        if self.p_pub.is_identity() or not self.group.in_subgroup(self.p_pub):
            raise ValueError("P_pub deve essere un punto non banale del sottogruppo")
        if self.n1 % 8 or self.n1 < 16 or self.n2 % 8 or self.n2 < MIN_MESSAGE_BITS:
            raise ValueError(f"n1={self.n1}, n2={self.n2}: servono multipli di 8, "
                             f"n1 >= 16 e n2 >= {MIN_MESSAGE_BITS}")
        if self.n3 != self.group.point_width(Slot.SECOND) * 8:
            raise ValueError(f"n3={self.n3} non è la larghezza di un punto compresso")
        if self.n4 != self.group.gt_width * 8:
            raise ValueError(f"n4={self.n4} non è la larghezza di un elemento di Gt")
        return self

    @property
    def q(self) -> int:
        return self.group.order

    @property
    def generator_second(self) -> G1Point:
        return self.group.generator(Slot.SECOND)

    @property
    def identity_bytes(self) -> int:
        return self.n1 // 8

    @property
    def message_bytes(self) -> int:
        return self.n2 // 8

    @property
    def point_bytes(self) -> int:
        return self.n3 // 8

    @property
    def mask_bits(self) -> int:
        return self.n2 + self.n1 + self.n3

    @property
    def mask_bytes(self) -> int:
        return self.mask_bits // 8

    @property
    def pairing_cache(self) -> Dict[Any, Any]:
        """Cache degli accoppiamenti precalcolabili (ê(P,P), ê(P_pub, Q_ID))."""
        return self._pairing_cache

    def vacant(self) -> Identity:
        return Identity.vacant(self.n1)

    def identity(self, label: str) -> Identity:
        return Identity.from_label(label, self.n1)

    def require_identity(self, identity: Identity) -> None:
        if identity.bits != self.n1:
            raise MalformedIdentity(f"Identità di {identity.bits} bit, attesi {self.n1}")


class MasterKey(BaseModel):
    """Scalare segreto s del PKG."""
    model_config = ConfigDict(frozen=True)
    s: int = Field(gt=0, repr=False)


class UserKeyPair(BaseModel):
    """Coppia (Q_ID, S_ID = s·Q_ID); private_point assente nella variante pubblica."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)
    identity: Identity
    public_point: G1Point
    private_point: Optional[G1Point] = Field(default=None, repr=False)

    @property
    def has_private(self) -> bool:
        return self.private_point is not None

    def public_only(self) -> "UserKeyPair":
        return UserKeyPair(identity=self.identity, public_point=self.public_point)


class SealedMasterKey(BaseModel):
    """Chiave master cifrata a riposo (scrypt + ChaCha20-Poly1305)."""
    model_config = ConfigDict(frozen=True)
    curve_id: int
    order: int
    log_n: int
    r: int = 8
    p: int = 1
    salt: bytes
    nonce: bytes
    ciphertext: bytes = Field(repr=False)


# --- Cifrati ---


class TransportHeader(BaseModel):
    """Intestazione del contenitore: solo un suggerimento, mai autenticata da sola."""
    model_config = ConfigDict(frozen=True)
    mode: Mode
    sender: Identity
    receiver: Identity


class Envelope(BaseModel):
    """Cifrato (X, y) con y = (m || ID_A || V) xor H1(w)."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)
    x: G1Point
    y: bytes
    header: Optional[TransportHeader] = None


class PaddedPayload(BaseModel):
    """Payload arbitrario spezzato in blocchi di n2 bit."""
    model_config = ConfigDict(frozen=True)
    blocks: Tuple[bytes, ...]
    original_length: int


# --- CLI ---


class CliConfig(BaseModel):
    """Configurazione validata di un'invocazione della CLI."""
    model_config = ConfigDict(frozen=True)
    command: str
    params_path: Optional[str] = None
    master_path: Optional[str] = None
    key_path: Optional[str] = None
    sender: Optional[str] = None
    receiver: Optional[str] = None
    identity: Optional[str] = None
    mode: Optional[Mode] = None
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    toy_group: bool = False
    toy_bits: Optional[int] = None
    hex_output: bool = False
    public_only: bool = False
    rounds: int = 1
    workers: int = 1


# --- Harness ---


class OpCounter(BaseModel):
    """Contatori delle operazioni dominanti (convenzione della tabella di confronto)."""
    g1_mul: int = 0
    gt_pow: int = 0
    pairing: int = 0
    precomputed_pairing: int = 0

    def reset(self) -> None:
        self.g1_mul = self.gt_pow = self.pairing = self.precomputed_pairing = 0

    def as_row(self) -> Tuple[int, int, int, int]:
        return (self.g1_mul, self.gt_pow, self.pairing, self.precomputed_pairing)


class QueryKind(str, Enum):
    """Le sette query del modello di sicurezza."""
    EXTRACT = "extract"
    SIGN = "sign"
    VERIFY = "verify"
    ENCRYPT = "encrypt"
    DECRYPT = "decrypt"
    GSC = "gsc"
    GUC = "guc"


class QueryRecord(BaseModel):
    """Una coppia domanda/risposta nella trascrizione dello sfidante."""
    model_config = ConfigDict(arbitrary_types_allowed=True)
    index: int
    kind: QueryKind
    args: Dict[str, Any]
    answer: Any = None
    error: Optional[str] = None


class AttackAttempt(BaseModel):
    """Esito di un singolo attacco scriptato."""
    name: str
    query: QueryKind
    accepted: bool


class AttackReport(BaseModel):
    """Rapporto della suite di attacchi di mescolamento delle modalità."""
    attempts: List[AttackAttempt] = Field(default_factory=list)

    @property
    def all_rejected(self) -> bool:
        return all(not a.accepted for a in self.attempts)

    @property
    def accepted(self) -> List[AttackAttempt]:
        return [a for a in self.attempts if a.accepted]
