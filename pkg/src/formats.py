"""
Documentos JSON de entrada: arreglos, vectores de pesos, familias de jets,
levantamientos y superficies con tabla de intersección.

Cada decodificador valida el esquema y lanza InputError con un mensaje que
nombra el campo problemático.
"""
import json
import logging
from typing import Any, Dict, List, Optional

from config.settings import DEFAULT_TRUNCATION
from src.arrangement import Arrangement
from src.errors import ComputationError, InputError
from src.exactnum import EpsRat, as_rat
from src.intersect import PairingSurface
from src.replacement import JetFamily, JetPoly
from src.weightdomain import WeightVector

logger = logging.getLogger(__name__)


def load_json(path: str) -> Any:
    """Lee un documento JSON desde disco"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise InputError(f"No existe el archivo {path}", path=path)
    except json.JSONDecodeError as e:
        raise InputError(f"JSON inválido en {path}: {e.msg} (línea {e.lineno})", path=path)


def dump_json(document: Any) -> str:
    """Serialización determinista usada por todos los reportes"""
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False)


def _require(doc: Any, key: str, kind: type, where: str) -> Any:
    if not isinstance(doc, dict):
        raise InputError(f"{where}: se esperaba un objeto JSON")
    if key not in doc:
        raise InputError(f"{where}: falta el campo '{key}'", field=key)
    value = doc[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise InputError(f"{where}: '{key}' debe ser un entero", field=key)
    if kind is not int and not isinstance(value, kind):
        raise InputError(f"{where}: '{key}' debe ser {kind.__name__}", field=key)
    return value


def _scalar(value: Any, where: str):
    """Cadena racional o expresión en e; se rechazan floats"""
    if isinstance(value, float):
        raise InputError(f"{where}: {value!r} es float; use una cadena racional como \"1/3\"")
    if isinstance(value, str) and "e" in value:
        parsed = EpsRat.parse(value)
        return parsed.to_rat() if parsed.is_rational else parsed
    try:
        return as_rat(value)
    except (ValueError, TypeError, ComputationError) as e:
        raise InputError(f"{where}: valor {value!r} no es racional ({e})")


def _rational(value: Any, where: str):
    scalar = _scalar(value, where)
    if isinstance(scalar, EpsRat):
        raise InputError(f"{where}: se esperaba un racional, no una expresión en e")
    return scalar


def _instantiate(value, eps):
    """En modo racional se sustituye e por su valor"""
    if eps is None or not isinstance(value, EpsRat):
        return value
    return value.substitute(eps)


# ----------------------------------------------------------------------
# Decodificadores
# ----------------------------------------------------------------------

def decode_arrangement(doc: Any) -> Arrangement:
    """{"d": int, "n": int, "hyperplanes": [[Rat, ...], ...]}"""
    d = _require(doc, "d", int, "arrangement")
    n = _require(doc, "n", int, "arrangement")
    rows = _require(doc, "hyperplanes", list, "arrangement")
    coeffs = []
    for i, row in enumerate(rows, start=1):
        if not isinstance(row, list):
            raise InputError(f"arrangement: H_{i} debe ser una lista")
        coeffs.append(tuple(_rational(x, f"arrangement H_{i}") for x in row))
    return Arrangement(d, n, tuple(coeffs))


def decode_weights(doc: Any, eps=None) -> WeightVector:
    """{"d": int, "n": int, "weights": [EpsRat strings]}"""
    d = _require(doc, "d", int, "weights")
    n = _require(doc, "n", int, "weights")
    entries = _require(doc, "weights", list, "weights")
    values = [_instantiate(_scalar(x, f"weights[{i}]"), eps) for i, x in enumerate(entries)]
    return WeightVector(d, n, tuple(values))


def decode_family(doc: Any) -> Dict[str, Any]:
    """
    {"d": int, "n": int, "T": int (opcional), "members": [[t-polinomios]]}.
    Devuelve {"family": JetFamily, "n": int}.
    """
    d = _require(doc, "d", int, "family")
    n = _require(doc, "n", int, "family")
    T = doc.get("T", DEFAULT_TRUNCATION)
    if isinstance(T, bool) or not isinstance(T, int) or T < 1:
        raise InputError("family: 'T' debe ser un entero positivo", field="T")
    rows = _require(doc, "members", list, "family")
    members = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or not all(isinstance(a, str) for a in row):
            raise InputError(f"family: el miembro {i} debe ser una lista de cadenas")
        members.append(tuple(JetPoly.parse(a, T) for a in row))
    return {"family": JetFamily(d, tuple(members)), "n": n}


def decode_lifting(doc: Any) -> Dict[str, Any]:
    """{"d": int, "m": int, "lifting": [Rat strings]} en orden por copias"""
    d = _require(doc, "d", int, "lifting")
    m = _require(doc, "m", int, "lifting")
    values = _require(doc, "lifting", list, "lifting")
    lifting = [_scalar(x, f"lifting[{i}]") for i, x in enumerate(values)]
    return {"d": d, "m": m, "lifting": lifting}


def decode_surface(doc: Any) -> PairingSurface:
    """{"curves": [str], "matrix": [[Rat]], "divisor": [EpsRat strings]}"""
    curves = _require(doc, "curves", list, "surface")
    if not all(isinstance(c, str) for c in curves):
        raise InputError("surface: 'curves' debe ser una lista de nombres")
    rows = _require(doc, "matrix", list, "surface")
    matrix = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise InputError(f"surface: la fila {i} de 'matrix' debe ser una lista")
        matrix.append(tuple(_rational(x, f"surface matrix[{i}]") for x in row))
    divisor: List = []
    if "divisor" in doc:
        raw = _require(doc, "divisor", list, "surface")
        divisor = [_scalar(x, f"surface divisor[{i}]") for i, x in enumerate(raw)]
    return PairingSurface(tuple(curves), tuple(matrix), tuple(divisor))


def read_document(path: str, kind: str, eps: Optional[object] = None):
    """Carga y decodifica un archivo según su tipo"""
    doc = load_json(path)
    decoders = {
        "arrangement": decode_arrangement,
        "family": decode_family,
        "lifting": decode_lifting,
        "surface": decode_surface,
    }
    if kind == "weights":
        return decode_weights(doc, eps)
    if kind not in decoders:
        raise InputError(f"Tipo de documento desconocido: {kind}")
    logger.debug("read_document", extra={"path": path, "kind": kind})
    return decoders[kind](doc)
