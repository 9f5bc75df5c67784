"""
Aritmética exacta: racionales (Fraction) y el cuerpo ordenado Q(e).

Un elemento de Q(e) es un cociente reducido de polinomios en e con
coeficientes racionales. El orden es el del límite e -> 0+: a > 0 si el
coeficiente no nulo de menor grado del numerador es positivo (el denominador
se normaliza para que su coeficiente de menor grado sea +1).
"""
import logging
import re
from enum import Enum
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from sympy import QQ, Poly, Symbol, fraction, nan, oo, together, zoo
from sympy.parsing.sympy_parser import parse_expr, standard_transformations
from sympy.polys.rings import ring

from config.settings import MAX_EPS_DEGREE
from src.errors import DegreeGuard, DivisionByZero, ParseError, PoleAtPoint

logger = logging.getLogger(__name__)

Rat = Fraction

_RING, _E = ring("e", QQ)
_E_SYMBOL = _RING.symbols[0]

# Sólo dígitos, variables de una letra, operadores y paréntesis
_SAFE_EXPR = re.compile(r"^[0-9+\-*/() \t{var}]*$")
# "1e-17" es un literal flotante para el tokenizador de Python
_SCIENTIFIC = re.compile(r"\d\s*[eE]")
# El exponente de ** debe ser un entero literal, opcionalmente entre paréntesis
_EXPONENT = re.compile(r"\s*(?:\(\s*([+-]?)\s*(\d+)\s*\)|([+-]?)\s*(\d+))")
_TOWER = re.compile(r"\s*\*\*")


class Ordering(Enum):
    """Resultado de una comparación en Q(e)"""

    LESS = -1
    EQUAL = 0
    GREATER = 1


def as_rat(value) -> Fraction:
    """Convierte int, Fraction o texto "p/q" a Fraction (sin flotantes)"""
    if isinstance(value, bool):
        raise ParseError(f"Valor booleano no es racional: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
            raise ParseError(f"Racional mal formado: {value!r}")
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise ParseError(f"Denominador cero en {value!r}")
    raise ParseError(f"Tipo no soportado como racional: {type(value).__name__}")


def _qq(value: Fraction):
    return QQ(value.numerator, value.denominator)


def _rat(coeff) -> Fraction:
    return Fraction(int(coeff.numerator), int(coeff.denominator))


def _lowest(poly) -> Tuple[int, object]:
    """(grado, coeficiente) del término no nulo de menor grado"""
    k = min(monom[0] for monom in poly.keys())
    return k, poly[(k,)]


def _degree(poly) -> int:
    return max(monom[0] for monom in poly.keys()) if poly else -1


def _from_coefficients(coeffs: Sequence[Fraction]):
    return _RING.from_dict({(k,): _qq(Fraction(c)) for k, c in enumerate(coeffs) if c})


def _base_start(cleaned: str, power: int) -> Optional[int]:
    """Posición del "(" que abre la base de la potencia en `power`, si la base es un grupo"""
    i = power - 1
    while i >= 0 and cleaned[i] in " \t":
        i -= 1
    if i < 0 or cleaned[i] != ")":
        return None
    depth = 0
    while i >= 0:
        if cleaned[i] == ")":
            depth += 1
        elif cleaned[i] == "(":
            depth -= 1
            if depth == 0:
                return i
        i -= 1
    return None


def _check_powers(cleaned: str, text: str) -> None:
    """
    Acota las potencias antes de evaluar: exponente entero literal de valor
    absoluto <= MAX_EPS_DEGREE, sin torres (a**b**c) y sin potencias
    anidadas en la base ((a**b)**c).
    """
    for match in re.finditer(r"\*\*", cleaned):
        exponent = _EXPONENT.match(cleaned, match.end())
        if exponent is None:
            raise ParseError(f"Exponente no literal en {text!r}")
        value = int(exponent.group(2) or exponent.group(4))
        if value > MAX_EPS_DEGREE:
            raise DegreeGuard(
                f"Exponente {value} mayor a {MAX_EPS_DEGREE} en {text!r}",
                exponent=value,
            )
        if _TOWER.match(cleaned, exponent.end()):
            raise ParseError(f"Potencias encadenadas en {text!r}")
        start = _base_start(cleaned, match.start())
        if start is not None and "**" in cleaned[start:match.start()]:
            raise ParseError(f"Potencia anidada en la base en {text!r}")


def _parse_polynomial_expr(text: str, var: str):
    """
    Parsea una expresión racional en la variable `var` y devuelve
    (numerador, denominador) como expresiones de sympy.
    """
    if not isinstance(text, str):
        raise ParseError(f"Se esperaba texto, se recibió {type(text).__name__}")
    cleaned = text.replace("ε", "e") if var == "e" else text
    if not cleaned.strip():
        raise ParseError("Expresión vacía")
    if not re.fullmatch(_SAFE_EXPR.pattern.format(var=var), cleaned):
        raise ParseError(f"Caracteres no permitidos en {text!r}")
    if _SCIENTIFIC.search(cleaned):
        raise ParseError(f"Notación científica no permitida en {text!r}")
    _check_powers(cleaned, text)

    symbol = _E_SYMBOL if var == "e" else None
    local_dict = {var: symbol} if symbol is not None else None
    try:
        expr = parse_expr(
            cleaned,
            local_dict=local_dict,
            transformations=standard_transformations,
        )
    except Exception as e:
        raise ParseError(f"No se pudo interpretar {text!r}: {e}")

    if expr.has(zoo) or expr.has(nan) or expr.has(oo) or expr.has(-oo):
        raise ParseError(f"División por cero en {text!r}")

    num, den = fraction(together(expr))
    return num, den


def parse_polynomial(text: str, var: str = "t") -> List[Fraction]:
    """
    Parsea un polinomio con coeficientes racionales, p. ej. "5*t + t**2".

    Devuelve los coeficientes en orden creciente de grado, sin ceros finales.
    """
    num, den = _parse_polynomial_expr(text, var)
    symbol = _E_SYMBOL if var == "e" else Symbol(var)
    try:
        den_poly = Poly(den, symbol, domain=QQ)
        num_poly = Poly(num, symbol, domain=QQ)
    except Exception as e:
        raise ParseError(f"{text!r} no es un polinomio en {var}: {e}")
    if den_poly.degree() > 0:
        raise ParseError(f"{text!r} no es un polinomio en {var}")
    scale = den_poly.LC()
    coeffs = [Fraction(int(c.p), int(c.q)) / Fraction(int(scale.p), int(scale.q))
              for c in reversed(num_poly.all_coeffs())]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def format_polynomial(coeffs: Sequence[Fraction], var: str) -> str:
    """Imprime coeficientes (grado creciente) como "1 - 3*e + e**2" """
    terms = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        magnitude = abs(c)
        if k == 0:
            body = str(magnitude)
        else:
            mono = var if k == 1 else f"{var}**{k}"
            body = mono if magnitude == 1 else f"{magnitude}*{mono}"
        terms.append((c < 0, body))
    if not terms:
        return "0"
    negative, body = terms[0]
    parts = [("-" if negative else "") + body]
    for negative, body in terms[1:]:
        parts.append(("- " if negative else "+ ") + body)
    return " ".join(parts)


class EpsPoly:
    """
    Polinomio en e con coeficientes racionales, sin ceros finales.

    Vista inmutable de los coeficientes; la aritmética vive en EpsRat.
    """

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable[Fraction] = ()):
        coeffs = [as_rat(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("EpsPoly es inmutable")

    @classmethod
    def _from_ring(cls, poly) -> "EpsPoly":
        if not poly:
            return cls(())
        coeffs = [Fraction(0)] * (_degree(poly) + 1)
        for (k,), c in poly.items():
            coeffs[k] = _rat(c)
        return cls(coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        return isinstance(other, EpsPoly) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self):
        return f"EpsPoly({format_polynomial(self.coefficients, 'e')})"


class EpsRat:
    """
    Elemento de Q(e) con e infinitesimal positivo.

    Invariantes: denominador no nulo, num y den coprimos, coeficiente de
    menor grado del denominador igual a +1.
    """

    __slots__ = ("_num", "_den", "_key")

    def __init__(self, num=None, den=None):
        if num is None:
            num = _RING.zero
        if den is None:
            den = _RING.one
        if isinstance(num, EpsPoly):
            num = _from_coefficients(num.coefficients)
        if isinstance(den, EpsPoly):
            den = _from_coefficients(den.coefficients)
        if not den:
            raise DivisionByZero("Denominador cero en Q(e)")

        if not num:
            num, den = _RING.zero, _RING.one
        else:
            _, num, den = num.cofactors(den)
            _, low = _lowest(den)
            num = num.quo_ground(low)
            den = den.quo_ground(low)

        if _degree(num) > MAX_EPS_DEGREE or _degree(den) > MAX_EPS_DEGREE:
            raise DegreeGuard(
                f"Grado mayor a {MAX_EPS_DEGREE} en Q(e)",
                num_degree=_degree(num),
                den_degree=_degree(den),
            )

        object.__setattr__(self, "_num", num)
        object.__setattr__(self, "_den", den)
        object.__setattr__(
            self,
            "_key",
            (EpsPoly._from_ring(num).coefficients, EpsPoly._from_ring(den).coefficients),
        )

    def __setattr__(self, name, value):
        raise AttributeError("EpsRat es inmutable")

    # ------------------------------------------------------------------
    # Construcción
    # ------------------------------------------------------------------
    @classmethod
    def from_rat(cls, value) -> "EpsRat":
        return cls(_RING.ground_new(_qq(as_rat(value))))

    @classmethod
    def eps(cls) -> "EpsRat":
        return cls(_E)

    @classmethod
    def from_coefficients(cls, num: Sequence, den: Sequence = (1,)) -> "EpsRat":
        return cls(EpsPoly(num), EpsPoly(den))

    @classmethod
    def parse(cls, text: str) -> "EpsRat":
        """Parsea "(1 - 3*e)/(1 - 2*e)"; "e" denota el infinitesimal"""
        num, den = _parse_polynomial_expr(text, "e")
        try:
            num_poly = _RING.from_expr(num)
            den_poly = _RING.from_expr(den)
        except Exception as e:
            raise ParseError(f"{text!r} no es una función racional en e: {e}")
        return cls(num_poly, den_poly)

    @classmethod
    def coerce(cls, value) -> "EpsRat":
        if isinstance(value, EpsRat):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return cls.from_rat(value)

    # ------------------------------------------------------------------
    # Acceso
    # ------------------------------------------------------------------
    @property
    def num(self) -> EpsPoly:
        return EpsPoly(self._key[0])

    @property
    def den(self) -> EpsPoly:
        return EpsPoly(self._key[1])

    @property
    def is_zero(self) -> bool:
        return not self._num

    @property
    def is_rational(self) -> bool:
        return _degree(self._num) <= 0 and _degree(self._den) == 0

    def to_rat(self) -> Fraction:
        if not self.is_rational:
            raise ParseError(f"{self} depende de e")
        return self._key[0][0] if self._key[0] else Fraction(0)

    def leading_term(self) -> Tuple[int, Fraction]:
        """(k, c) tal que self ~ c·e^k cuando e -> 0+"""
        if self.is_zero:
            return 0, Fraction(0)
        k_num, c_num = _lowest(self._num)
        k_den, _ = _lowest(self._den)
        return k_num - k_den, _rat(c_num)

    def sign(self) -> int:
        if self.is_zero:
            return 0
        _, c = _lowest(self._num)
        return 1 if c > 0 else -1

    def is_positive(self) -> bool:
        return self.sign() > 0

    def evaluate(self, x) -> Fraction:
        """Sustitución exacta e := x (x racional)"""
        x = as_rat(x)
        den_value = self.den(x)
        if den_value == 0:
            raise PoleAtPoint(f"El denominador de {self} se anula en e={x}")
        return self.num(x) / den_value

    def substitute(self, value) -> "EpsRat":
        """Sustituye e por otro elemento de Q(e) (o un racional)"""
        value = EpsRat.coerce(value)

        def horner(coeffs):
            acc = EpsRat()
            for c in reversed(coeffs):
                acc = acc * value + c
            return acc

        den_value = horner(self._key[1])
        if den_value.is_zero:
            raise PoleAtPoint(f"El denominador de {self} se anula en e={value}")
        return horner(self._key[0]) / den_value

    # ------------------------------------------------------------------
    # Aritmética
    # ------------------------------------------------------------------
    def _coerce_other(self, other) -> Optional["EpsRat"]:
        if isinstance(other, EpsRat):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return EpsRat.from_rat(other)
        return None

    def __add__(self, other):
        other = self._coerce_other(other)
        if other is None:
            return NotImplemented
        return EpsRat(self._num * other._den + other._num * self._den, self._den * other._den)

    __radd__ = __add__

    def __neg__(self):
        return EpsRat(-self._num, self._den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce_other(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce_other(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce_other(other)
        if other is None:
            return NotImplemented
        return EpsRat(self._num * other._num, self._den * other._den)

    __rmul__ = __mul__

    def inverse(self) -> "EpsRat":
        if self.is_zero:
            raise DivisionByZero("Inverso de cero en Q(e)")
        return EpsRat(self._den, self._num)

    def __truediv__(self, other):
        other = self._coerce_other(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise DivisionByZero(f"División de {self} por cero")
        return EpsRat(self._num * other._den, self._den * other._num)

    def __rtruediv__(self, other):
        other = self._coerce_other(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return EpsRat(self._num ** exponent, self._den ** exponent)

    # ------------------------------------------------------------------
    # Orden e igualdad
    # ------------------------------------------------------------------
    def __eq__(self, other):
        other = self._coerce_other(other)
        if other is None:
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def _cmp(self, other) -> int:
        other = self._coerce_other(other)
        if other is None:
            return NotImplemented
        return (self - other).sign()

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __bool__(self):
        return not self.is_zero

    # ------------------------------------------------------------------
    # Texto
    # ------------------------------------------------------------------
    def __str__(self):
        num_str = format_polynomial(self._key[0], "e")
        if self._key[1] == (Fraction(1),):
            return num_str
        den_str = format_polynomial(self._key[1], "e")
        if len([c for c in self._key[0] if c]) > 1 or "/" in num_str:
            num_str = f"({num_str})"
        if not re.fullmatch(r"e(\*\*\d+)?", den_str):
            den_str = f"({den_str})"
        return f"{num_str}/{den_str}"

    def __repr__(self):
        return f"EpsRat({self})"


EPS = EpsRat.eps()
ZERO = EpsRat()
ONE = EpsRat.from_rat(1)

Scalar = Union[EpsRat, Fraction, int]


def eps_cmp(a, b) -> Ordering:
    """Signo de a - b para todo e positivo suficientemente pequeño"""
    a, b = EpsRat.coerce(a), EpsRat.coerce(b)
    return Ordering((a - b).sign())


def eps_arith(a, b, op: str) -> EpsRat:
    """Operación de cuerpo exacta: op en {add, sub, mul, div}"""
    a, b = EpsRat.coerce(a), EpsRat.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ParseError(f"Operación desconocida: {op!r}")


def eval_at(a, x) -> Fraction:
    """Evalúa a en e := x"""
    return EpsRat.coerce(a).evaluate(x)


def eps_sign(a) -> int:
    return EpsRat.coerce(a).sign()


def eps_min(values: Iterable[EpsRat]) -> EpsRat:
    values = list(values)
    best = values[0]
    for v in values[1:]:
        if v < best:
            best = v
    return best
