"""
Números de intersección sobre Bl_p P^d y superficies dadas por tabla.

Sobre Bl_p P^d sólo se modelan las clases H, E y las curvas de prueba
e (recta en E), f (recta por p) y s (recta que no pasa por p).
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from src.errors import BadParameters, DimensionMismatch, PreconditionViolated
from src.exactnum import EPS, ONE, ZERO, EpsRat, as_rat

logger = logging.getLogger(__name__)


class TestCurve(Enum):
    E_LINE = "e"
    LINE_THROUGH_P = "f"
    LINE_MISSING_P = "s"


# (H·C, E·C)
PAIRING_TABLE: Dict[TestCurve, Tuple[int, int]] = {
    TestCurve.E_LINE: (0, -1),
    TestCurve.LINE_THROUGH_P: (1, 1),
    TestCurve.LINE_MISSING_P: (1, 0),
}


@dataclass(frozen=True)
class BlowupDivisor:
    """Clase aH·H + aE·E sobre Bl_p P^d"""

    d: int
    aH: EpsRat
    aE: EpsRat

    def __post_init__(self):
        if self.d < 2:
            raise BadParameters(f"Bl_p P^d requiere d >= 2 (d={self.d})")
        object.__setattr__(self, "aH", EpsRat.coerce(self.aH))
        object.__setattr__(self, "aE", EpsRat.coerce(self.aE))

    def __add__(self, other: "BlowupDivisor") -> "BlowupDivisor":
        if self.d != other.d:
            raise DimensionMismatch(f"Divisores en dimensiones distintas: {self.d} vs {other.d}")
        return BlowupDivisor(self.d, self.aH + other.aH, self.aE + other.aE)

    def scale(self, c) -> "BlowupDivisor":
        c = EpsRat.coerce(c)
        return BlowupDivisor(self.d, c * self.aH, c * self.aE)

    def to_json(self) -> dict:
        return {"d": self.d, "aH": str(self.aH), "aE": str(self.aE)}


def hyperplane_class(d: int) -> BlowupDivisor:
    return BlowupDivisor(d, ONE, ZERO)


def exceptional_class(d: int) -> BlowupDivisor:
    return BlowupDivisor(d, ZERO, ONE)


def strict_transform_through_p(d: int) -> BlowupDivisor:
    """R ~ H - E"""
    return BlowupDivisor(d, ONE, -ONE)


def canonical_class(d: int) -> BlowupDivisor:
    """K ~ -(d+1)H + (d-1)E"""
    if d < 2:
        raise BadParameters(f"canonical_class requiere d >= 2 (d={d})")
    return BlowupDivisor(d, EpsRat.from_rat(-(d + 1)), EpsRat.from_rat(d - 1))


def pair(D: BlowupDivisor, C: TestCurve) -> EpsRat:
    h, e = PAIRING_TABLE[C]
    return D.aH * h + D.aE * e


def pairings(D: BlowupDivisor) -> Dict[str, EpsRat]:
    return {c.value: pair(D, c) for c in TestCurve}


def is_ample_blowup(D: BlowupDivisor) -> bool:
    """Kleiman con las curvas e, f, s"""
    return all(pair(D, c) > 0 for c in TestCurve)


def degeneration_log_divisor_summands(d: int, n: int, eps=EPS) -> List[Tuple[str, BlowupDivisor]]:
    """
    Sumandos de D_2 + K + nt·C restringido a Y_2:
      D_2 + K, (d+1)(1-e)·R, (n-d-1)·((1+e)/(n-d-1))·H
    """
    if d < 2 or n < d + 3:
        raise BadParameters(f"Se requiere d >= 2 y n >= d+3 (d={d}, n={n})")
    eps = EpsRat.coerce(eps)
    light = n - d - 1
    return [
        ("D2+K", exceptional_class(d) + canonical_class(d)),
        ("heavy", strict_transform_through_p(d).scale((d + 1) * (ONE - eps))),
        ("light", hyperplane_class(d).scale(light * ((ONE + eps) / light))),
    ]


def degeneration_log_divisor(d: int, n: int, eps=EPS) -> BlowupDivisor:
    """Forma colectada: (1 - e·d)H + (e(1+d) - 1)E"""
    summands = degeneration_log_divisor_summands(d, n, eps)
    total = summands[0][1]
    for _, divisor in summands[1:]:
        total = total + divisor
    return total


def y1_log_divisor(d: int, eps=EPS) -> EpsRat:
    """
    Coeficiente de H en D_1 + K_{Y_1} + nt·C|_{Y_1} sobre P^d:
    -(d+1) + 1 + (d+1)(1-e) = 1 - (d+1)e
    """
    if d < 1:
        raise BadParameters(f"d debe ser >= 1 (d={d})")
    eps = EpsRat.coerce(eps)
    return EpsRat.from_rat(-(d + 1)) + ONE + (d + 1) * (ONE - eps)


def ruled_fiber_degree(d: int, eps=EPS, conductor: str = "E+H", heavy_coefficient=None) -> EpsRat:
    """
    (K + conductor + c·Σ R_i)·f sobre E_h ≅ Bl_p P^d; debe ser 0.

    conductor es "E+H" (la situación real) o "E".
    """
    if d < 2:
        raise BadParameters(f"ruled_fiber_degree requiere d >= 2 (d={d})")
    eps = EpsRat.coerce(eps)
    c = ONE - eps if heavy_coefficient is None else EpsRat.coerce(heavy_coefficient)
    if conductor == "E+H":
        cond = exceptional_class(d) + hyperplane_class(d)
    elif conductor == "E":
        cond = exceptional_class(d)
    else:
        raise BadParameters(f"Conductor desconocido: {conductor!r}")
    total = canonical_class(d) + cond + strict_transform_through_p(d).scale((d + 1) * c)
    return pair(total, TestCurve.LINE_THROUGH_P)


def ruling_pairing(n: int, eps, c_hits: int, light_hits: int) -> EpsRat:
    """R·(-C_1-C_2-C_3 + (1-e)ΣC̃_i + ((1+e)/(n-3))ΣC̃_light) según incidencias"""
    eps = EpsRat.coerce(eps)
    return -c_hits + (ONE - eps) * c_hits + (ONE + eps) / (n - 3) * light_hits


def modification_checks(n: int, eps=EPS) -> dict:
    """
    Intersecciones tras explotar la componente P¹×P¹ no Q-Cartier:
    con la curva excepcional y la cota inferior con las reglas R_1, R_2.
    """
    if n < 5:
        raise BadParameters(f"Se requiere n >= 5 (n={n})")
    eps = EpsRat.coerce(eps)
    # E es una de las C̃_i: E·(-ΣC) = 1, E·C̃_E = -1, ninguna liviana
    on_e = ONE + (ONE - eps) * (-1) + (ONE + eps) / (n - 3) * 0
    # R corta una o dos C̃_i pesadas y al menos una liviana
    candidates = [ruling_pairing(n, eps, hits, 1) for hits in (1, 2)]
    on_r_lower = candidates[0] if candidates[0] < candidates[1] else candidates[1]
    return {
        "onE": on_e,
        "onR_lower": on_r_lower,
        "positive": on_e > 0 and on_r_lower > 0,
    }


# ----------------------------------------------------------------------
# Superficies con tabla de intersección
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PairingSurface:
    """Curvas de borde con su matriz de intersección y un divisor en esa base"""

    curves: Tuple[str, ...]
    matrix: Tuple[Tuple[Fraction, ...], ...]
    divisor: Tuple[EpsRat, ...] = field(default=())

    def __post_init__(self):
        m = len(self.curves)
        matrix = tuple(tuple(as_rat(x) for x in row) for row in self.matrix)
        if len(matrix) != m or any(len(row) != m for row in matrix):
            raise DimensionMismatch(f"La matriz debe ser {m}x{m}")
        for i in range(m):
            for j in range(i + 1, m):
                if matrix[i][j] != matrix[j][i]:
                    raise BadParameters(
                        f"Matriz no simétrica en ({self.curves[i]}, {self.curves[j]})"
                    )
        divisor = tuple(EpsRat.coerce(x) for x in self.divisor)
        if divisor and len(divisor) != m:
            raise DimensionMismatch(f"El divisor tiene {len(divisor)} coeficientes, se esperaban {m}")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "divisor", divisor)

    def with_divisor(self, coefficients: Sequence) -> "PairingSurface":
        return PairingSurface(self.curves, self.matrix, tuple(coefficients))

    def to_json(self) -> dict:
        return {
            "curves": list(self.curves),
            "matrix": [[str(x) for x in row] for row in self.matrix],
            "divisor": [str(x) for x in self.divisor],
        }


def pair_surface(S: PairingSurface, coefficients: Sequence) -> List[EpsRat]:
    """D·L para cada curva L, con D = Σ_j coefficients[j]·L_j"""
    coefficients = [EpsRat.coerce(c) for c in coefficients]
    if len(coefficients) != len(S.curves):
        raise DimensionMismatch(
            f"El divisor tiene {len(coefficients)} coeficientes, se esperaban {len(S.curves)}"
        )
    result = []
    for i in range(len(S.curves)):
        acc = ZERO
        for c, row in zip(coefficients, S.matrix):
            if row[i]:
                acc = acc + c * row[i]
        result.append(acc)
    return result


def ample_from_pairing(S: PairingSurface) -> bool:
    if not S.divisor:
        raise DimensionMismatch("La superficie no tiene divisor")
    return all(x > 0 for x in pair_surface(S, S.divisor))


def small_coefficient_threshold(S: PairingSurface, A: Sequence, D: Sequence) -> Optional[Union[Fraction, EpsRat]]:
    """
    c* = min sobre curvas con D·L < 0 de (A·L)/(-D·L); A + cD es amplio
    para 0 < c < c*. None si D·L >= 0 para toda curva.
    """
    a_values = pair_surface(S, A)
    d_values = pair_surface(S, D)
    if not all(x > 0 for x in a_values):
        raise PreconditionViolated("A debe ser positivo sobre todas las curvas")
    best = None
    for a, dl in zip(a_values, d_values):
        if dl < 0:
            ratio = a / (-dl)
            if best is None or ratio < best:
                best = ratio
    if best is not None and best.is_rational:
        return best.to_rat()
    return best


def blowup_surface(eps=EPS, divisor: Optional[BlowupDivisor] = None) -> PairingSurface:
    """
    Modelo F_1 de Bl_p P^2 con curvas (e, f, s): e² = -1, f² = 0, s² = 1,
    e·f = 1, e·s = 0, f·s = 1. H ~ s y E ~ e.
    """
    matrix = (
        (Fraction(-1), Fraction(1), Fraction(0)),
        (Fraction(1), Fraction(0), Fraction(1)),
        (Fraction(0), Fraction(1), Fraction(1)),
    )
    coefficients: Tuple = ()
    if divisor is not None:
        if divisor.d != 2:
            raise DimensionMismatch("El modelo F_1 sólo representa d = 2")
        coefficients = (divisor.aE, ZERO, divisor.aH)
    return PairingSurface(("e", "f", "s"), matrix, coefficients)
