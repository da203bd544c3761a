"""
groups/base.py - Interfaccia astratta per i gruppi con accoppiamento bilineare

Contiene:
- Slot: la posizione di un punto negli argomenti dell'accoppiamento
- G1Point / GtElement: valori immutabili legati al proprio gruppo
- PairingGroup: classe base astratta implementata dai backend concreti
"""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Tuple

from errors import DecodeError


class Slot(Enum):
    """Posizione di un punto nell'accoppiamento ê(primo, secondo)."""
    FIRST = "first"      # P, P_pub, X
    SECOND = "second"    # P, Q, S, V


class G1Point:
    """
    Elemento del gruppo sorgente (notazione additiva).

    Il gruppo dello schema è simmetrico; su una curva asimmetrica ogni punto
    vive nello slot in cui viene usato dall'accoppiamento. Lo slot fa parte
    dell'identità del punto solo se il backend non è simmetrico.
    """

    __slots__ = ("group", "slot", "raw")

    def __init__(self, group: "PairingGroup", slot: Slot, raw: Any):
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "slot", slot)
        object.__setattr__(self, "raw", raw)

    def __setattr__(self, name, value):
        raise AttributeError("G1Point è immutabile")

    def __add__(self, other: "G1Point") -> "G1Point":
        return self.group.add(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, G1Point) or other.group != self.group:
            return False
        if other.slot is not self.slot and not self.group.symmetric:
            return False
        return self.group._point_eq(self.raw, other.raw, self.slot)

    def __hash__(self) -> int:
        slot = None if self.group.symmetric else self.slot
        return hash((self.group.descriptor, slot, self.to_bytes()))

    def is_identity(self) -> bool:
        return self.group._point_is_identity(self.raw, self.slot)

    def to_bytes(self) -> bytes:
        return self.group.encode_point(self)

    def __repr__(self) -> str:
        return f"G1Point({self.slot.value}, {self.to_bytes().hex()[:16]}...)"


class GtElement:
    """Elemento del gruppo bersaglio (notazione moltiplicativa)."""

    __slots__ = ("group", "raw")

    def __init__(self, group: "PairingGroup", raw: Any):
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "raw", raw)

    def __setattr__(self, name, value):
        raise AttributeError("GtElement è immutabile")

    def __mul__(self, other: "GtElement") -> "GtElement":
        return GtElement(self.group, self.group._gt_mul(self.raw, other.raw))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GtElement) or other.group != self.group:
            return False
        return self.group._gt_eq(self.raw, other.raw)

    def __hash__(self) -> int:
        return hash((self.group.descriptor, self.to_bytes()))

    def is_identity(self) -> bool:
        return self == self.group.gt_identity()

    def to_bytes(self) -> bytes:
        return self.group._gt_serialize(self.raw)

    def __repr__(self) -> str:
        return f"GtElement({self.to_bytes().hex()[:16]}...)"


class PairingGroup(ABC):
    """
    Tripla (G1, Gt, ê) di ordine primo q con generatore P.

    Le sottoclassi implementano solo gli hook a livello "raw"; la classe base
    costruisce i valori G1Point/GtElement e controlla la disciplina degli slot.
    """

    curve_id: int
    name: str
    symmetric: bool = False

    # --- Hook da implementare nei backend ---

    @property
    @abstractmethod
    def order(self) -> int:
        """Ordine primo q dei gruppi."""

    @abstractmethod
    def _generator(self, slot: Slot) -> Any: ...

    @abstractmethod
    def _identity(self, slot: Slot) -> Any: ...

    @abstractmethod
    def _mul(self, raw: Any, k: int, slot: Slot) -> Any: ...

    @abstractmethod
    def _add(self, a: Any, b: Any, slot: Slot) -> Any: ...

    @abstractmethod
    def _point_eq(self, a: Any, b: Any, slot: Slot) -> bool: ...

    @abstractmethod
    def _point_is_identity(self, raw: Any, slot: Slot) -> bool: ...

    @abstractmethod
    def _serialize(self, raw: Any, slot: Slot) -> bytes: ...

    @abstractmethod
    def _deserialize(self, data: bytes, slot: Slot) -> Any:
        """Decodifica con controllo di appartenenza al sottogruppo; solleva DecodeError."""

    @abstractmethod
    def _pair(self, first: Any, second: Any) -> Any: ...

    @abstractmethod
    def _gt_identity(self) -> Any: ...

    @abstractmethod
    def _gt_mul(self, a: Any, b: Any) -> Any: ...

    @abstractmethod
    def _gt_pow(self, a: Any, k: int) -> Any: ...

    @abstractmethod
    def _gt_eq(self, a: Any, b: Any) -> bool: ...

    @abstractmethod
    def _gt_serialize(self, raw: Any) -> bytes: ...

    @abstractmethod
    def _hash_to_point(self, data: bytes, dst: bytes, slot: Slot) -> Any:
        """Hash deterministico verso un punto non banale del sottogruppo."""

    @abstractmethod
    def point_width(self, slot: Slot) -> int:
        """Larghezza in byte della codifica compressa di un punto."""

    @property
    @abstractmethod
    def gt_width(self) -> int:
        """Larghezza in byte della codifica di un elemento di Gt."""

    # --- Identità del gruppo ---

    @property
    def descriptor(self) -> Tuple[int, int]:
        return (self.curve_id, self.order)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PairingGroup) and other.descriptor == self.descriptor

    def __hash__(self) -> int:
        return hash(self.descriptor)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name}, q={self.order.bit_length()} bit)"

    # --- API pubblica costruita sugli hook ---

    def generator(self, slot: Slot = Slot.FIRST) -> G1Point:
        return G1Point(self, slot, self._generator(slot))

    def identity(self, slot: Slot = Slot.SECOND) -> G1Point:
        return G1Point(self, slot, self._identity(slot))

    def gt_identity(self) -> GtElement:
        return GtElement(self, self._gt_identity())

    def mul(self, k: int, point: G1Point) -> G1Point:
        return G1Point(self, point.slot, self._mul(point.raw, k % self.order, point.slot))

    def add(self, a: G1Point, b: G1Point) -> G1Point:
        self._require_same_slot(a, b)
        return G1Point(self, a.slot, self._add(a.raw, b.raw, a.slot))

    def pair(self, first: G1Point, second: G1Point) -> GtElement:
        if not self.symmetric and (first.slot is not Slot.FIRST or second.slot is not Slot.SECOND):
            raise ValueError(
                f"Accoppiamento con slot errati: ({first.slot.value}, {second.slot.value})")
        return GtElement(self, self._pair(first.raw, second.raw))

    def gt_pow(self, w: GtElement, k: int) -> GtElement:
        return GtElement(self, self._gt_pow(w.raw, k % self.order))

    def encode_point(self, point: G1Point) -> bytes:
        return self._serialize(point.raw, point.slot)

    def decode_point(self, data: bytes, slot: Slot) -> G1Point:
        if len(data) != self.point_width(slot):
            raise DecodeError(
                "width", f"punto di {len(data)} byte, attesi {self.point_width(slot)}")
        return G1Point(self, slot, self._deserialize(bytes(data), slot))

    def hash_to_point(self, data: bytes, dst: bytes, slot: Slot = Slot.SECOND) -> G1Point:
        return G1Point(self, slot, self._hash_to_point(data, dst, slot))

    def in_subgroup(self, point: G1Point) -> bool:
        return self._point_is_identity(self._mul(point.raw, self.order, point.slot), point.slot)

    def _require_same_slot(self, a: G1Point, b: G1Point) -> None:
        if a.slot is not b.slot and not self.symmetric:
            raise ValueError("Somma di punti appartenenti a slot diversi")
