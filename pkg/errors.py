"""
errors.py - Gerarchia delle eccezioni

Il rifiuto crittografico (⊥) non è un'eccezione: guc/verify/decrypt
restituiscono None. Le eccezioni segnalano errori d'uso, di formato o di I/O.
"""


class IdgscError(Exception):
    """Base di tutti gli errori della libreria."""


class InvalidScalar(IdgscError):
    """Scalare nullo dove serve un elemento di Z_q^*."""


class VacantIdentity(IdgscError):
    """L'identità vacante (tutta a zero) non può ricevere chiavi."""


class MalformedIdentity(IdgscError):
    """Identità di larghezza diversa da n1 o etichetta non codificabile."""


class MalformedMessage(IdgscError):
    """Messaggio di larghezza diversa da n2."""


class InvalidModeCombination(IdgscError):
    """Combinazione mittente/destinatario senza modalità definita."""


class MissingKey(IdgscError):
    """Chiave assente o non corrispondente per la modalità richiesta."""


class PaddingError(IdgscError):
    """Padding malformato in fase di rimozione."""


class KeyFileError(IdgscError):
    """Passphrase errata o file della chiave master corrotto."""


class QueryError(IdgscError):
    """Argomenti malformati per una query dell'oracolo."""


class DecodeError(IdgscError):
    """
    Contenitore binario non valido.

    category: magic, version, width, point, truncated, field
    """

    CATEGORIES = ("magic", "version", "width", "point", "truncated", "field")

    def __init__(self, category: str, detail: str = ""):
        if category not in self.CATEGORIES:
            raise ValueError(f"Categoria di DecodeError sconosciuta: {category}")
        self.category = category
        self.detail = detail
        super().__init__(f"[{category}] {detail}" if detail else f"[{category}]")


class InvalidParameters(IdgscError):
    """Parametri di setup fuori dai limiti (n1, n2, dimensione del gruppo giocattolo)."""
