"""
Arreglos de hiperplanos en P^d sobre Q.

Retículo de flats por rango exacto, criterio log canónico por sumas de pesos
sobre flats, estabilidad y la configuración identidad e.
"""
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from config.settings import MAX_FLAT_N, RANDOM_COEFF_BOUND
from src.errors import BadParameters, DimensionMismatch, PreconditionViolated, SizeGuard
from src.exactnum import EPS, ONE, ZERO, EpsRat, as_rat
from src.linalg import in_row_space, rank, rref
from src.weightdomain import WeightVector, nt_weights, t_weights

logger = logging.getLogger(__name__)

STABLE = "Stable"
NOT_LC = "NotLC"
NOT_POSITIVE = "NotPositive"


@dataclass(frozen=True)
class Arrangement:
    """n hiperplanos H_i = V(Σ_j coeffs[i][j]·x_j) en P^d"""

    d: int
    n: int
    coeffs: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.d < 1:
            raise BadParameters(f"d debe ser >= 1 (d={self.d})")
        if self.n < self.d + 3:
            raise BadParameters(f"n debe ser >= d+3 (d={self.d}, n={self.n})")
        rows = tuple(tuple(as_rat(x) for x in row) for row in self.coeffs)
        if len(rows) != self.n:
            raise DimensionMismatch(f"Se esperaban {self.n} hiperplanos, hay {len(rows)}")
        for i, row in enumerate(rows, start=1):
            if len(row) != self.d + 1:
                raise DimensionMismatch(f"H_{i} tiene {len(row)} coeficientes, se esperaban {self.d + 1}")
            if not any(row):
                raise BadParameters(f"H_{i} es la fila cero")
        object.__setattr__(self, "coeffs", rows)

    def row(self, i: int) -> Tuple[Fraction, ...]:
        """Fila del hiperplano H_i (1-indexado)"""
        return self.coeffs[i - 1]

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "hyperplanes": [[str(x) for x in row] for row in self.coeffs],
        }


@dataclass(frozen=True)
class Flat:
    codim: int
    support: Tuple[int, ...]
    basis: Tuple[Tuple[Fraction, ...], ...]

    def to_json(self) -> dict:
        return {
            "codim": self.codim,
            "support": list(self.support),
            "basis": [[str(x) for x in row] for row in self.basis],
        }


@dataclass(frozen=True)
class Verdict:
    """Resultado de is_log_canonical / is_stable"""

    status: str
    witness: Optional[Flat] = None
    weight_sum: Optional[EpsRat] = None

    @property
    def ok(self) -> bool:
        return self.status in ("LC", STABLE)

    def to_json(self) -> dict:
        result = {"status": self.status}
        if self.witness is not None:
            result["witness"] = self.witness.to_json()
            result["weight_sum"] = str(self.weight_sum)
        return result


# ----------------------------------------------------------------------
# Retículo de flats
# ----------------------------------------------------------------------

def _support(A: Arrangement, reduced) -> Tuple[int, ...]:
    return tuple(i for i in range(1, A.n + 1) if in_row_space(reduced, A.row(i)))


def iter_flats(A: Arrangement) -> Iterator[Flat]:
    """
    Recorre los flats no vacíos por codimensión creciente.

    Sólo guarda en memoria las claves del nivel actual.
    """
    level: Dict[tuple, Flat] = {}
    for i in range(1, A.n + 1):
        key = rref([A.row(i)])
        if key not in level:
            level[key] = Flat(1, _support(A, key), key)

    codim = 1
    while level:
        for key in sorted(level, key=lambda k: level[k].support):
            yield level[key]
        if codim == A.d:
            break
        next_level: Dict[tuple, Flat] = {}
        for flat in level.values():
            for i in range(1, A.n + 1):
                if i in flat.support:
                    continue
                key = rref(list(flat.basis) + [A.row(i)])
                if key not in next_level:
                    next_level[key] = Flat(codim + 1, _support(A, key), key)
        level = next_level
        codim += 1


def flats(A: Arrangement, streaming: bool = False) -> List[Flat]:
    """Todos los flats no vacíos (codim <= d), deduplicados por espacio de filas"""
    if A.n > MAX_FLAT_N and not streaming:
        raise SizeGuard(f"Retículo de flats limitado a n <= {MAX_FLAT_N} (n={A.n})", n=A.n)
    return list(iter_flats(A))


# ----------------------------------------------------------------------
# Log canonicidad y estabilidad
# ----------------------------------------------------------------------

def _check_weights(A: Arrangement, b: WeightVector) -> None:
    if (A.d, A.n) != (b.d, b.n):
        raise DimensionMismatch(
            f"Arreglo (d={A.d}, n={A.n}) y pesos (d={b.d}, n={b.n}) no coinciden"
        )


def is_log_canonical(A: Arrangement, b: WeightVector, streaming: bool = False) -> Verdict:
    """LC sii para todo flat L: Σ_{i ∈ soporte(L)} b_i <= codim(L)"""
    _check_weights(A, b)
    if A.n > MAX_FLAT_N and not streaming:
        raise SizeGuard(f"Retículo de flats limitado a n <= {MAX_FLAT_N} (n={A.n})", n=A.n)
    for flat in iter_flats(A):
        total = ZERO
        for i in flat.support:
            total = total + b[i]
        if total > flat.codim:
            logger.debug("not_lc", extra={"support": list(flat.support), "codim": flat.codim})
            return Verdict(NOT_LC, flat, total)
    return Verdict("LC")


def is_stable(A: Arrangement, b: WeightVector, streaming: bool = False) -> Verdict:
    lc = is_log_canonical(A, b, streaming=streaming)
    if not lc.ok:
        return lc
    if not b.total() > A.d + 1:
        return Verdict(NOT_POSITIVE)
    return Verdict(STABLE)


# ----------------------------------------------------------------------
# Configuración identidad y dicotomía
# ----------------------------------------------------------------------

def e_configuration(d: int, n: int) -> Arrangement:
    """H_1..H_{d+1} = V(x_0)..V(x_d); H_{d+2} = ... = H_n = V(x_0 + ... + x_d)"""
    if d < 1 or n < d + 3:
        raise BadParameters(f"Se requiere d >= 1 y n >= d+3 (d={d}, n={n})")
    identity = [tuple(Fraction(int(i == j)) for j in range(d + 1)) for i in range(d + 1)]
    ones = tuple(Fraction(1) for _ in range(d + 1))
    return Arrangement(d, n, tuple(identity) + (ones,) * (n - d - 1))


def projectively_equivalent_to_e(A: Arrangement) -> bool:
    """H_{d+2} = ... = H_n y H_1, ..., H_{d+2} linealmente generales"""
    d = A.d
    light = A.row(d + 2)
    for i in range(d + 3, A.n + 1):
        if rank([light, A.row(i)]) != 1:
            return False
    frame = [A.row(i) for i in range(1, d + 3)]
    for skip in range(d + 2):
        if rank([r for j, r in enumerate(frame) if j != skip]) != d + 1:
            return False
    return True


def dichotomy_check(A: Arrangement, eps=EPS) -> bool:
    """
    Dado (P^d, tH) estable: (P^d, ntH) es estable XOR el arreglo es e.
    """
    t = t_weights(A.d, A.n, eps)
    t_verdict = is_stable(A, t)
    if not t_verdict.ok:
        raise PreconditionViolated(
            f"(P^d, tH) no es estable: {t_verdict.status}",
            status=t_verdict.status,
        )
    nt_stable = is_stable(A, nt_weights(A.d, A.n, eps)).ok
    is_e = projectively_equivalent_to_e(A)
    return nt_stable != is_e


def flat_case_counts(A: Arrangement, flat: Flat) -> Tuple[int, int]:
    """(m1, m2): hiperplanos pesados y livianos del soporte"""
    m1 = sum(1 for i in flat.support if i <= A.d + 1)
    return m1, len(flat.support) - m1


def nt_case_split(m1: int, m2: int, c: int, d: int, n: int, eps=EPS) -> dict:
    """
    Análisis por casos de la desigualdad nt sobre un flat de codimensión c,
    suponiendo la desigualdad t: m1 + e·m2 <= c.
    """
    eps = EpsRat.coerce(eps)
    light = n - d - 1
    t_sum = m1 + eps * m2
    nt_sum = (ONE - eps) * m1 + (ONE + eps) * m2 / light

    if m2 == 0:
        case, predicted = "m2=0", True
    elif m1 == 0 and m2 < light:
        case, predicted = "m1=0,m2<n-d-1", True
    elif m1 == 0:
        # todos los livianos: 1 + e <= c exige c >= 2
        case, predicted = "m1=0,m2=n-d-1", c >= 2
    else:
        # m1 <= c - 1, luego (c-1)(1-e) + 1 + e <= c si c >= 2
        case, predicted = "m1>0,m2>0", c >= 2

    return {
        "case": case,
        "t_holds": t_sum <= c,
        "predicted": predicted,
        "holds": nt_sum <= c,
        "nt_sum": nt_sum,
    }


def component_lc_exceptions(n: int, eps=EPS) -> List[Tuple[int, int, int, int]]:
    """
    Configuraciones (r, c, m1, m2) que cumplen r + m1 + e·m2 <= c pero violan
    r + (1-e)·m1 + ((1+e)/(n-3))·m2 <= c.
    """
    if n < 5:
        raise BadParameters(f"Se requiere n >= 5 (n={n})")
    eps = EpsRat.coerce(eps)
    light = (ONE + eps) / (n - 3)
    found = []
    for c in range(0, 3):
        for r in range(0, c + 1):
            for m1 in range(0, 4):
                for m2 in range(0, n - 2):
                    if r + m1 + eps * m2 > c:
                        continue
                    if r + (ONE - eps) * m1 + light * m2 > c:
                        found.append((r, c, m1, m2))
    found.sort()
    return found


def blown_up_point_lc(n: int, eps=EPS) -> dict:
    """Desigualdades sobre la preimagen de un punto fijo explotado"""
    eps = EpsRat.coerce(eps)
    single = ONE - eps
    double = ONE + (ONE - eps)
    return {
        "single": str(single),
        "single_holds": single <= 1,
        "double": str(double),
        "double_holds": double <= 2,
    }


def random_arrangement(
    d: int,
    n: int,
    rng: random.Random,
    bound: int = RANDOM_COEFF_BOUND,
    degenerate: float = 0.0,
) -> Arrangement:
    """
    Arreglo aleatorio con coeficientes enteros en [-bound, bound].

    Con probabilidad `degenerate` una fila copia (escalada) una fila previa o
    es combinación de dos previas (hiperplanos concurrentes).
    """
    rows: List[Tuple[Fraction, ...]] = []
    while len(rows) < n:
        if rows and rng.random() < degenerate:
            if len(rows) >= 2 and rng.random() < 0.5:
                p, q = rng.sample(rows, 2)
                alpha, beta = rng.randint(1, bound), rng.choice([-1, 1]) * rng.randint(1, bound)
                row = tuple(alpha * x + beta * y for x, y in zip(p, q))
            else:
                scale = rng.choice([-2, -1, 1, 2, 3])
                row = tuple(scale * x for x in rng.choice(rows))
        else:
            row = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(d + 1))
        if any(row):
            rows.append(row)
    return Arrangement(d, n, tuple(rows))
