"""
Degeneraciones a un parámetro de familias de hiperplanos.

Cada hiperplano es L(t) = V(a_0(t) + a_1(t)·x_1 + ... + a_d(t)·x_d) con jets
a_j(t) truncados en orden T. En forma normal el límite común es V(x_1):
a_1(0) != 0 y a_j(0) = 0 para j != 1.
"""
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from config.settings import DEFAULT_TRUNCATION, RANDOM_COEFF_BOUND
from src.errors import (
    BadParameters,
    DimensionMismatch,
    IndistinguishableAtTruncation,
    InsufficientTruncation,
    NotInNormalForm,
    PreconditionViolated,
)
from src.exactnum import EPS, EpsRat, as_rat, format_polynomial, parse_polynomial
from src.intersect import degeneration_log_divisor, is_ample_blowup, y1_log_divisor
from src.linalg import inverse

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class JetPoly:
    """a(t) mod t^T; coefficients[k] es el coeficiente de t^k"""

    coefficients: Tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(as_rat(c) for c in self.coefficients)
        if len(coeffs) < 1:
            raise BadParameters("Un jet necesita orden de truncación T >= 1")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_coefficients(cls, coeffs: Sequence, T: int) -> "JetPoly":
        coeffs = list(coeffs)[:T]
        return cls(tuple(coeffs) + (Fraction(0),) * (T - len(coeffs)))

    @classmethod
    def parse(cls, text: str, T: int) -> "JetPoly":
        """Parsea "5*t + t**2"; los términos de grado >= T se descartan"""
        coeffs = parse_polynomial(text, "t")
        if len(coeffs) > T:
            logger.debug("jet_truncated", extra={"text": text, "T": T})
        return cls.from_coefficients(coeffs, T)

    @property
    def T(self) -> int:
        return len(self.coefficients)

    def coefficient(self, k: int) -> Fraction:
        if k >= self.T:
            raise InsufficientTruncation(f"Se necesita el coeficiente de t^{k} pero T = {self.T}")
        return self.coefficients[k]

    def at_zero(self) -> Fraction:
        return self.coefficients[0]

    def truncate(self, T: int) -> "JetPoly":
        return JetPoly(self.coefficients[:T])

    def __add__(self, other: "JetPoly") -> "JetPoly":
        T = min(self.T, other.T)
        return JetPoly(tuple(a + b for a, b in zip(self.coefficients[:T], other.coefficients[:T])))

    def __neg__(self) -> "JetPoly":
        return JetPoly(tuple(-a for a in self.coefficients))

    def __sub__(self, other: "JetPoly") -> "JetPoly":
        return self + (-other)

    def __mul__(self, other) -> "JetPoly":
        if not isinstance(other, JetPoly):
            c = as_rat(other)
            return JetPoly(tuple(c * a for a in self.coefficients))
        T = min(self.T, other.T)
        a, b = self.coefficients, other.coefficients
        return JetPoly(tuple(sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)) for k in range(T)))

    __rmul__ = __mul__

    def inverse(self) -> "JetPoly":
        """Inversa de una unidad (a(0) != 0) como serie truncada"""
        a = self.coefficients
        if a[0] == 0:
            raise NotInNormalForm("El jet no es una unidad: a(0) = 0")
        b = [1 / a[0]]
        for k in range(1, self.T):
            b.append(-sum((a[i] * b[k - i] for i in range(1, k + 1)), Fraction(0)) / a[0])
        return JetPoly(tuple(b))

    def __str__(self):
        return format_polynomial(self.coefficients, "t")


Member = Tuple[JetPoly, ...]


@dataclass(frozen=True)
class JetFamily:
    """Hiperplanos que colisionan: cada miembro es (a_0, ..., a_d)"""

    d: int
    members: Tuple[Member, ...]

    def __post_init__(self):
        if self.d < 1:
            raise BadParameters(f"d debe ser >= 1 (d={self.d})")
        members = tuple(tuple(member) for member in self.members)
        for i, member in enumerate(members):
            if len(member) != self.d + 1:
                raise DimensionMismatch(
                    f"El miembro {i} tiene {len(member)} coeficientes, se esperaban {self.d + 1}"
                )
        object.__setattr__(self, "members", members)

    @property
    def T(self) -> int:
        return min(a.T for member in self.members for a in member)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "T": self.T,
            "members": [[str(a) for a in member] for member in self.members],
        }


@dataclass(frozen=True)
class LimitSection:
    """σ = c_0 + c_2·x_2 + ... + c_d·x_d sobre el divisor excepcional"""

    constant: Fraction
    linear: Tuple[Fraction, ...]
    at_infinity: bool = False

    def __str__(self):
        terms = [(self.constant, None)] + [(c, f"x_{j}") for j, c in enumerate(self.linear, start=2)]
        parts = []
        for c, var in terms:
            if c == 0 and (var is not None or any(x for x, _ in terms[1:])):
                continue
            body = str(abs(c)) if var is None else (var if abs(c) == 1 else f"{abs(c)}*{var}")
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "constant": str(self.constant),
            "linear": [str(c) for c in self.linear],
            "expr": str(self),
        }


@dataclass(frozen=True)
class DegenerationModel:
    """
    Par roto Y = Y_1 ∪ Y_2: Y_1 = P^d con d+2 hiperplanos generales y
    Y_2 = Bl_p P^d con las secciones de los hiperplanos livianos.
    """

    d: int
    n: int
    sections: Tuple[LimitSection, ...]
    classes: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if self.d < 2:
            raise BadParameters(f"El modelo de degeneración requiere d >= 2 (d={self.d})")
        if len(self.sections) != self.n - self.d - 1:
            raise DimensionMismatch(
                f"Se esperaban {self.n - self.d - 1} secciones, hay {len(self.sections)}"
            )

    @property
    def y1_hyperplanes(self) -> int:
        return self.d + 2

    def largest_class(self) -> int:
        return max(len(c) for c in self.classes)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "y1_hyperplanes": self.y1_hyperplanes,
            "sections": [s.to_json() for s in self.sections],
            "classes": [list(c) for c in self.classes],
        }


# ----------------------------------------------------------------------
# Forma normal
# ----------------------------------------------------------------------

def _check_normal_form(member: Member, label: str = "") -> None:
    if member[1].at_zero() == 0:
        raise NotInNormalForm(f"a_1(0) = 0 {label}".strip())
    for j, a in enumerate(member):
        if j != 1 and a.at_zero() != 0:
            raise NotInNormalForm(f"a_{j}(0) = {a.at_zero()} != 0 {label}".strip())


def normalize_member(member: Member) -> Member:
    """Divide por la unidad a_1(t): el nuevo a_1 es 1"""
    _check_normal_form(member)
    unit = member[1].inverse()
    return tuple(a * unit for a in member)


def normalize_to_chart(members: Sequence[Member]) -> List[Member]:
    """
    Cambio de coordenadas proyectivo sobre Q que lleva el hiperplano límite
    común a V(x_1).
    """
    if not members:
        raise BadParameters("Familia vacía")
    limit = [a.at_zero() for a in members[0]]
    if not any(limit):
        raise PreconditionViolated("El primer miembro tiene límite nulo")
    size = len(limit)
    if size < 2:
        raise DimensionMismatch("Se necesitan al menos 2 coeficientes por miembro")
    for member in members[1:]:
        other = [a.at_zero() for a in member]
        if len(other) != size:
            raise DimensionMismatch("Miembros de longitudes distintas")
        if any(limit[i] * other[j] != limit[j] * other[i] for i in range(size) for j in range(size)):
            raise PreconditionViolated("Los miembros no tienen un hiperplano límite común")

    pivot = next(i for i, x in enumerate(limit) if x)
    # B·e_1 = v; las demás columnas son vectores canónicos distintos del pivote
    others = [k for k in range(size) if k != pivot]
    columns: List[List[Fraction]] = []
    for j in range(size):
        if j == 1:
            columns.append(list(limit))
        else:
            k = others[j if j == 0 else j - 1]
            columns.append([Fraction(int(i == k)) for i in range(size)])
    b = [[columns[j][i] for j in range(size)] for i in range(size)]
    q = inverse(b)
    if q is None:
        raise PreconditionViolated("Cambio de coordenadas singular")

    result = []
    for member in members:
        new_member = []
        for i in range(size):
            acc = None
            for j in range(size):
                if q[i][j]:
                    term = member[j] * q[i][j]
                    acc = term if acc is None else acc + term
            new_member.append(acc if acc is not None else member[0] * 0)
        result.append(tuple(new_member))
    return result


# ----------------------------------------------------------------------
# Secciones límite y profundidad de separación
# ----------------------------------------------------------------------

def limit_section(member: Sequence[JetPoly]) -> LimitSection:
    """σ_0 = -(1/a_1(0))·K_0 con K_0 el límite de (a_0, a_2, ..., a_d)/t"""
    member = tuple(member)
    if len(member) < 2:
        raise DimensionMismatch("Un hiperplano necesita al menos a_0 y a_1")
    _check_normal_form(member)
    if min(a.T for a in member) < 2:
        raise InsufficientTruncation("limit_section requiere T >= 2")
    a1 = member[1].at_zero()
    constant = -member[0].coefficient(1) / a1
    linear = tuple(-a.coefficient(1) / a1 for a in member[2:])
    return LimitSection(constant, linear)


def _normalized(F: JetFamily) -> List[Member]:
    if len(F.members) < 2:
        raise BadParameters("Se necesitan al menos 2 miembros")
    normalized = []
    for i, member in enumerate(F.members):
        _check_normal_form(member, f"(miembro {i})")
        normalized.append(normalize_member(member))
    return normalized


def _depth_of(normalized: Sequence[Member], T: int) -> int:
    for k in range(1, T):
        first = tuple(a.coefficients[k] for a in normalized[0])
        if any(tuple(a.coefficients[k] for a in member) != first for member in normalized[1:]):
            return k
    raise IndistinguishableAtTruncation(
        f"Todos los miembros coinciden módulo t^{T}", T=T
    )


def separation_depth(F: JetFamily) -> int:
    """Menor k >= 1 tal que los miembros normalizados difieren módulo t^(k+1)"""
    return _depth_of(_normalized(F), F.T)


def separated_sections(F: JetFamily) -> List[LimitSection]:
    """
    Secciones sobre E_s: coeficientes de t^s de (a_0, a_2, ..., a_d) tras
    normalizar por a_1 y restar el jet común módulo t^s.
    """
    normalized = _normalized(F)
    s = _depth_of(normalized, F.T)
    sections = []
    for member in normalized:
        constant = -member[0].coefficients[s]
        linear = tuple(-a.coefficients[s] for a in member[2:])
        sections.append(LimitSection(constant, linear))
    logger.debug("separated_sections", extra={"depth": s, "members": len(sections)})
    return sections


def coincidence_classes(sections: Sequence[LimitSection], offset: int = 1) -> Tuple[Tuple[int, ...], ...]:
    """Índices (desde offset) agrupados por sección igual, en orden de aparición"""
    groups: Dict[LimitSection, List[int]] = {}
    for i, section in enumerate(sections, start=offset):
        groups.setdefault(section, []).append(i)
    return tuple(tuple(g) for g in groups.values())


def stable_replacement_model(F: JetFamily, n: int) -> DegenerationModel:
    """Modelo roto con las secciones separadas de H_{d+2}, ..., H_n"""
    if len(F.members) != n - F.d - 1:
        raise BadParameters(
            f"Se esperaban n-d-1 = {n - F.d - 1} miembros, hay {len(F.members)}"
        )
    sections = separated_sections(F)
    classes = coincidence_classes(sections, offset=F.d + 2)
    model = DegenerationModel(F.d, n, tuple(sections), classes)
    logger.info(
        "stable_replacement_model",
        extra={"d": F.d, "n": n, "classes": len(classes), "largest": model.largest_class()},
    )
    return model


def validate_degeneration(M: DegenerationModel, eps=EPS) -> bool:
    """Amplitud en ambas componentes y a lo sumo n-d-2 secciones coincidentes"""
    try:
        ample_y2 = is_ample_blowup(degeneration_log_divisor(M.d, M.n, eps))
        ample_y1 = y1_log_divisor(M.d, eps) > 0
    except BadParameters:
        return False
    distinct = len(M.classes) >= 2
    bounded = M.largest_class() <= M.n - M.d - 2
    return ample_y2 and ample_y1 and distinct and bounded


# ----------------------------------------------------------------------
# Generación aleatoria
# ----------------------------------------------------------------------

def random_family(
    d: int,
    members: int,
    T: int = DEFAULT_TRUNCATION,
    rng: Optional[random.Random] = None,
    depth: Optional[int] = None,
    bound: int = RANDOM_COEFF_BOUND,
    rescale: bool = True,
) -> JetFamily:
    """
    Familia en forma normal con profundidad de separación `depth` (aleatoria
    en [1, T-1] si no se indica). Con rescale cada miembro se multiplica por
    una unidad aleatoria.
    """
    rng = rng or random.Random(0)
    if members < 2:
        raise BadParameters("Se necesitan al menos 2 miembros")
    if T < 2:
        raise InsufficientTruncation("T debe ser >= 2")
    s = depth if depth is not None else rng.randint(1, T - 1)
    if not 1 <= s <= T - 1:
        raise BadParameters(f"depth = {s} fuera de [1, {T - 1}]")

    def coeff():
        return Fraction(rng.randint(-bound, bound))

    # jet común (a_1 = 1 tras normalizar)
    common = [[Fraction(0)] + [coeff() for _ in range(1, s)] for _ in range(d + 1)]
    common[1] = [Fraction(1)] + [Fraction(0)] * (s - 1)

    split = [[coeff() for _ in range(d + 1)] for _ in range(members)]
    split[1][0] = split[0][0] + 1
    for row in split:
        row[1] = Fraction(0)

    family = []
    for i in range(members):
        member = []
        for j in range(d + 1):
            tail = [coeff() for _ in range(s + 1, T)] if j != 1 else [Fraction(0)] * (T - s - 1)
            member.append(JetPoly.from_coefficients(common[j] + [split[i][j]] + tail, T))
        if rescale:
            unit = JetPoly.from_coefficients(
                [Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))] + [coeff() for _ in range(1, T)], T
            )
            member = [a * unit for a in member]
        family.append(tuple(member))
    return JetFamily(d, tuple(family))
