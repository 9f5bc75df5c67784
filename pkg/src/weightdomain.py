"""
Dominio de pesos D(d+1, n), paredes x_I = k y predicados de cámara.

Los pesos viven en Q(e). Una cámara es una celda abierta del complemento de
todas las paredes: un punto sobre una pared no pertenece a ninguna cámara.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

from config.settings import MAX_WALL_N
from src.errors import BadParameters, DimensionMismatch, SizeGuard
from src.exactnum import EPS, ONE, ZERO, EpsRat

logger = logging.getLogger(__name__)


def _check_dims(d: int, n: int) -> None:
    if not isinstance(d, int) or not isinstance(n, int):
        raise BadParameters("d y n deben ser enteros", d=d, n=n)
    if d < 1:
        raise BadParameters(f"d debe ser >= 1 (d={d})", d=d)
    if n < d + 3:
        raise BadParameters(f"n debe ser >= d+3 (d={d}, n={n})", d=d, n=n)


def _check_eps(eps: EpsRat) -> EpsRat:
    eps = EpsRat.coerce(eps)
    if not (ZERO < eps < ONE):
        raise BadParameters(f"e debe cumplir 0 < e < 1 (e={eps})")
    return eps


@dataclass(frozen=True)
class WeightVector:
    """Vector de pesos b = (b_1, ..., b_n) con 0 < b_i <= 1"""

    d: int
    n: int
    entries: Tuple[EpsRat, ...]

    def __post_init__(self):
        _check_dims(self.d, self.n)
        entries = tuple(EpsRat.coerce(b) for b in self.entries)
        object.__setattr__(self, "entries", entries)
        if len(entries) != self.n:
            raise DimensionMismatch(
                f"Se esperaban {self.n} pesos, se recibieron {len(entries)}"
            )
        for i, b in enumerate(entries, start=1):
            if not (ZERO < b <= ONE):
                raise BadParameters(f"Peso b_{i} = {b} fuera de (0, 1]", index=i)

    def __getitem__(self, i: int) -> EpsRat:
        """Acceso 1-indexado, como en x_I"""
        return self.entries[i - 1]

    def total(self) -> EpsRat:
        acc = ZERO
        for b in self.entries:
            acc = acc + b
        return acc

    def to_json(self) -> List[str]:
        return [str(b) for b in self.entries]


@dataclass(frozen=True, order=True)
class Wall:
    """Pared x_I = k; el orden canónico es (k, I lexicográfico)"""

    k: int
    I: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "I", tuple(sorted(self.I)))

    def validate(self, d: int, n: int) -> None:
        if not 2 <= len(self.I) <= n - 2:
            raise DimensionMismatch(f"|I| = {len(self.I)} fuera de [2, {n - 2}]")
        if not 1 <= self.k <= d:
            raise DimensionMismatch(f"k = {self.k} fuera de [1, {d}]")
        if len(set(self.I)) != len(self.I) or self.I[0] < 1 or self.I[-1] > n:
            raise DimensionMismatch(f"I = {list(self.I)} no es subconjunto de 1..{n}")

    def to_json(self) -> dict:
        return {"I": list(self.I), "k": self.k}


@dataclass(frozen=True)
class SignVector:
    """Signos (-1, 0, +1) por pared, en el orden canónico de all_walls(d, n)"""

    d: int
    n: int
    signs: Tuple[int, ...]

    def has_zero(self) -> bool:
        return 0 in self.signs

    def to_json(self) -> str:
        return "".join({-1: "-", 0: "0", 1: "+"}[s] for s in self.signs)


@dataclass(frozen=True)
class Crossing:
    wall: Wall
    u0: EpsRat
    point: WeightVector

    def to_json(self) -> dict:
        return {"wall": self.wall.to_json(), "u0": str(self.u0), "point": self.point.to_json()}


# ----------------------------------------------------------------------
# Vectores canónicos
# ----------------------------------------------------------------------

def t_weights(d: int, n: int, eps=EPS) -> WeightVector:
    """t = (1, ..., 1 [d+1], e, ..., e)"""
    _check_dims(d, n)
    eps = _check_eps(eps)
    return WeightVector(d, n, (ONE,) * (d + 1) + (eps,) * (n - d - 1))


def nt_weights(d: int, n: int, eps=EPS) -> WeightVector:
    """nt = (1-e, ..., 1-e [d+1], (1+e)/(n-d-1), ...)"""
    _check_dims(d, n)
    eps = _check_eps(eps)
    light = (ONE + eps) / (n - d - 1)
    return WeightVector(d, n, (ONE - eps,) * (d + 1) + (light,) * (n - d - 1))


def in_domain(b: WeightVector) -> bool:
    """Pertenencia a D(d+1, n): además de 0 < b_i <= 1, suma > d+1"""
    return b.total() > b.d + 1


def point_on_segment(b: WeightVector, b2: WeightVector, u) -> WeightVector:
    """(1-u)·b + u·b2"""
    _same_shape(b, b2)
    u = EpsRat.coerce(u)
    if not (ZERO <= u <= ONE):
        raise BadParameters(f"u = {u} fuera de [0, 1]")
    entries = tuple((ONE - u) * x + u * y for x, y in zip(b.entries, b2.entries))
    return WeightVector(b.d, b.n, entries)


def _same_shape(b: WeightVector, b2: WeightVector) -> None:
    if (b.d, b.n) != (b2.d, b2.n):
        raise DimensionMismatch(
            f"Vectores de dimensiones distintas: (d={b.d}, n={b.n}) vs (d={b2.d}, n={b2.n})"
        )


# ----------------------------------------------------------------------
# Paredes
# ----------------------------------------------------------------------

def wall_value(wall: Wall, b: WeightVector) -> EpsRat:
    """x_I(b) - k"""
    wall.validate(b.d, b.n)
    acc = ZERO
    for i in wall.I:
        acc = acc + b[i]
    return acc - wall.k


def _guard(n: int) -> None:
    if n > MAX_WALL_N:
        raise SizeGuard(f"Enumeración de paredes limitada a n <= {MAX_WALL_N} (n={n})", n=n)


def all_walls(d: int, n: int) -> List[Wall]:
    """Todas las paredes de D(d+1, n) en orden canónico"""
    _check_dims(d, n)
    _guard(n)
    walls = [
        Wall(k, I)
        for k in range(1, d + 1)
        for size in range(2, n - 1)
        for I in combinations(range(1, n + 1), size)
    ]
    walls.sort()
    return walls


class _SubsetSums:
    """
    Sumas x_I para uno o varios vectores a la vez.

    Con compresión, las coordenadas con el mismo valor (en todos los vectores)
    forman un grupo y x_I sólo depende de cuántos índices de cada grupo toma I.
    """

    def __init__(self, vectors: Sequence[WeightVector], compress: bool = True):
        self.vectors = vectors
        self.compress = compress
        n = vectors[0].n
        group_index: Dict[tuple, int] = {}
        self.group_of: List[int] = []
        self.members: List[List[int]] = []
        self.values: List[tuple] = []
        for i in range(1, n + 1):
            key = tuple(v[i] for v in vectors)
            if key not in group_index:
                group_index[key] = len(self.members)
                self.members.append([])
                self.values.append(key)
            self.group_of.append(group_index[key])
            self.members[group_index[key]].append(i)
        self._cache: Dict[tuple, tuple] = {}

    def counts(self, I: Sequence[int]) -> tuple:
        c = [0] * len(self.members)
        for i in I:
            c[self.group_of[i - 1]] += 1
        return tuple(c)

    def sums_for_counts(self, counts: tuple) -> tuple:
        cached = self._cache.get(counts)
        if cached is None:
            acc = [ZERO] * len(self.vectors)
            for c, value in zip(counts, self.values):
                if c:
                    acc = [a + c * v for a, v in zip(acc, value)]
            cached = tuple(acc)
            self._cache[counts] = cached
        return cached

    def sums(self, I: Sequence[int]) -> tuple:
        if self.compress:
            return self.sums_for_counts(self.counts(I))
        acc = [ZERO] * len(self.vectors)
        for i in I:
            acc = [a + v[i] for a, v in zip(acc, self.vectors)]
        return tuple(acc)

    def expand(self, counts: tuple) -> List[Tuple[int, ...]]:
        """Todos los I con las multiplicidades dadas"""
        choices = [combinations(m, c) for m, c in zip(self.members, counts)]
        return [tuple(sorted(i for part in parts for i in part)) for parts in product(*choices)]


def walls_containing(b: WeightVector, compress: bool = True) -> List[Wall]:
    """Paredes con x_I(b) = k, en orden canónico"""
    _guard(b.n)
    d, n = b.d, b.n
    summer = _SubsetSums([b], compress=compress)
    found = []

    if compress:
        ranges = [range(len(m) + 1) for m in summer.members]
        for counts in product(*ranges):
            size = sum(counts)
            if not 2 <= size <= n - 2:
                continue
            (x,) = summer.sums_for_counts(counts)
            if not x.is_rational:
                continue
            value = x.to_rat()
            if value.denominator == 1 and 1 <= value <= d:
                k = int(value)
                found.extend(Wall(k, I) for I in summer.expand(counts))
    else:
        for wall in all_walls(d, n):
            (x,) = summer.sums(wall.I)
            if x == wall.k:
                found.append(wall)

    found.sort()
    logger.debug("walls_containing", extra={"d": d, "n": n, "count": len(found)})
    return found


def segment_walls(b: WeightVector, b2: WeightVector, compress: bool = True) -> List[Crossing]:
    """
    Paredes que cortan el interior relativo de [b, b2].

    Ordenadas por u0 y, en empates, por el orden canónico de paredes.
    """
    _same_shape(b, b2)
    if b.entries == b2.entries:
        raise BadParameters("El segmento es degenerado: b = b'")
    _guard(b.n)

    summer = _SubsetSums([b, b2], compress=compress)
    points: Dict[EpsRat, WeightVector] = {}
    u_cache: Dict[tuple, Optional[EpsRat]] = {}
    crossings = []

    for wall in all_walls(b.d, b.n):
        key = (summer.counts(wall.I), wall.k) if compress else None
        if key is not None and key in u_cache:
            u0 = u_cache[key]
        else:
            x, x2 = summer.sums(wall.I)
            start, end = x - wall.k, x2 - wall.k
            u0 = None
            if start.sign() * end.sign() < 0:
                u0 = start / (start - end)
            if key is not None:
                u_cache[key] = u0
        if u0 is None:
            continue
        if u0 not in points:
            points[u0] = point_on_segment(b, b2, u0)
        crossings.append(Crossing(wall, u0, points[u0]))

    crossings.sort(key=lambda c: (c.u0, c.wall))
    logger.debug("segment_walls", extra={"d": b.d, "n": b.n, "count": len(crossings)})
    return crossings


# ----------------------------------------------------------------------
# Predicados de cámara
# ----------------------------------------------------------------------

def sign_vector(b: WeightVector, compress: bool = True) -> SignVector:
    summer = _SubsetSums([b], compress=compress)
    signs = []
    for wall in all_walls(b.d, b.n):
        (x,) = summer.sums(wall.I)
        signs.append((x - wall.k).sign())
    return SignVector(b.d, b.n, tuple(signs))


def same_chamber(b: WeightVector, b2: WeightVector) -> bool:
    """Ambos en la misma cámara abierta (ningún signo nulo)"""
    _same_shape(b, b2)
    s, s2 = sign_vector(b), sign_vector(b2)
    return not s.has_zero() and s.signs == s2.signs


def in_chamber_closure(b: WeightVector, b2: WeightVector) -> bool:
    """b está en la clausura de la cámara de b2"""
    _same_shape(b, b2)
    s, s2 = sign_vector(b), sign_vector(b2)
    if s2.has_zero():
        return False
    return all(x == 0 or x == y for x, y in zip(s.signs, s2.signs))


def leq(b: WeightVector, b2: WeightVector) -> bool:
    """b <= b2 entrada por entrada"""
    _same_shape(b, b2)
    return all(x <= y for x, y in zip(b.entries, b2.entries))


# ----------------------------------------------------------------------
# Pesos auxiliares del morfismo birracional
# ----------------------------------------------------------------------

def default_eps_hat(d: int, n: int, eps=EPS) -> EpsRat:
    """1/(d+1) - e²: deja a fuera de toda pared y arbitrariamente cerca de t"""
    eps = EpsRat.coerce(eps)
    return ONE / (d + 1) - eps * eps


def auxiliary_weights(d: int, n: int, eps=EPS, eps_hat=None) -> dict:
    """
    Pesos a, w_hat, w, h usados para encadenar los espacios de moduli.

    a     = (1 - 1/(d+1) + ê [d+1], e, ..., e)
    w_hat = (1 - 1/(d+1) + ê [d+1], 1/(n-d-1), ...)   (sobre x_{d+2}+...+x_n = 1)
    w     = cruce del segmento [t, nt] con esa pared
    h     = punto medio de [w_hat, nt]
    """
    _check_dims(d, n)
    eps = _check_eps(eps)
    eps_hat = default_eps_hat(d, n, eps) if eps_hat is None else EpsRat.coerce(eps_hat)

    upper = ONE / (d + 1)
    lower = upper - (n - d - 1) * eps / (d + 1)
    if not (lower < eps_hat < upper):
        raise BadParameters(
            f"ê = {eps_hat} fuera de ({lower}, {upper})", eps_hat=eps_hat
        )

    heavy = ONE - upper + eps_hat
    m = n - d - 1
    a = WeightVector(d, n, (heavy,) * (d + 1) + (eps,) * m)
    w_hat = WeightVector(d, n, (heavy,) * (d + 1) + (ONE / m,) * m)

    t, nt = t_weights(d, n, eps), nt_weights(d, n, eps)
    crossings = segment_walls(t, nt)
    w = crossings[0].point
    h = point_on_segment(w_hat, nt, Fraction(1, 2))
    return {"a": a, "w_hat": w_hat, "w": w, "h": h, "eps_hat": eps_hat}


def morphism_chain(d: int, n: int, eps=EPS, eps_hat=None) -> List[dict]:
    """
    Reproduce la cadena nt ~ h -> w ~ w_hat ~ a ~ t con los predicados de cámara.

    Cada paso es {"name", "kind", "holds"}; kind es "closure", "order" o "segment".
    """
    weights = auxiliary_weights(d, n, eps, eps_hat)
    a, w_hat, w, h = weights["a"], weights["w_hat"], weights["w"], weights["h"]
    t, nt = t_weights(d, n, eps), nt_weights(d, n, eps)

    steps = [
        ("t in closure(a)", "closure", in_chamber_closure(t, a)),
        ("a <= t", "order", leq(a, t)),
        ("w_hat in closure(a)", "closure", in_chamber_closure(w_hat, a)),
        ("a <= w_hat", "order", leq(a, w_hat)),
        ("no wall on [w_hat, w]", "segment",
         w_hat.entries == w.entries or not segment_walls(w_hat, w)),
        ("nt in closure(h)", "closure", in_chamber_closure(nt, h)),
        ("h <= nt", "order", leq(h, nt)),
        ("w in closure(h)", "closure", in_chamber_closure(w, h)),
    ]
    result = [{"name": name, "kind": kind, "holds": holds} for name, kind, holds in steps]
    logger.info(
        "morphism_chain",
        extra={"d": d, "n": n, "failed": [s["name"] for s in result if not s["holds"]]},
    )
    return result


def git_weights(d: int, n: int, eps=EPS, delta1=None) -> WeightVector:
    """
    Linealización a = (1, ..., 1 [d], 1 - δ1, e - δ2, ...) con suma d+1.

    δ2 = e - δ1/(n-d-1); requiere 0 < δ1 < (n-d-1)·e.
    """
    _check_dims(d, n)
    eps = _check_eps(eps)
    m = n - d - 1
    delta1 = m * eps / 2 if delta1 is None else EpsRat.coerce(delta1)
    if not (ZERO < delta1 < m * eps):
        raise BadParameters(f"δ1 = {delta1} fuera de (0, {m * eps})")
    delta2 = eps - delta1 / m
    return WeightVector(d, n, (ONE,) * d + (ONE - delta1,) + (eps - delta2,) * m)
