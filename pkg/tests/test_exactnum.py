"""
Tests para la aritmética exacta en Q(e)
"""

import random
from fractions import Fraction

import pytest
import sympy

from src.errors import DegreeGuard, DivisionByZero, ParseError, PoleAtPoint
from src.exactnum import (
    EPS,
    ONE,
    ZERO,
    EpsRat,
    Ordering,
    as_rat,
    eps_arith,
    eps_cmp,
    eps_min,
    eps_sign,
    eval_at,
    format_polynomial,
    parse_polynomial,
)

E = sympy.Symbol("e")


def random_eps_rat(rng: random.Random) -> EpsRat:
    num = [rng.randint(-5, 5) for _ in range(rng.randint(1, 3))]
    den = [rng.randint(-5, 5) for _ in range(rng.randint(1, 3))]
    if not any(den):
        den[0] = 1
    return EpsRat.from_coefficients(num, den)


def to_sympy(a: EpsRat):
    num = sum(sympy.Rational(c.numerator, c.denominator) * E ** k for k, c in enumerate(a.num.coefficients))
    den = sum(sympy.Rational(c.numerator, c.denominator) * E ** k for k, c in enumerate(a.den.coefficients))
    return num / den


def sign_radius(poly) -> Fraction:
    """Radio bajo el cual el término de menor grado fija el signo del polinomio"""
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(sympy.Poly(poly, E).all_coeffs())]
    j = next(k for k, c in enumerate(coeffs) if c)
    rest = sum(abs(c) for c in coeffs[j + 1:])
    return abs(coeffs[j]) / (abs(coeffs[j]) + rest)


def limit_sign(expr) -> int:
    """Signo de expr cuando e -> 0+, evaluando en 2^-k para varios k más allá del radio"""
    if expr == 0:
        return 0
    num, den = sympy.fraction(sympy.cancel(expr))
    radius = min(sign_radius(num), sign_radius(den))
    k = 1
    while Fraction(1, 2 ** k) >= radius:
        k += 1
    signs = {int(sympy.sign(expr.subs(E, sympy.Rational(1, 2 ** j)))) for j in range(k, k + 5)}
    assert len(signs) == 1
    return signs.pop()


class TestParsing:
    """Texto <-> EpsRat"""

    def test_parse_and_print(self):
        """Test: la forma canónica se imprime como se escribe"""
        a = EpsRat.parse("(1 - 3*e)/(1 - 2*e)")
        assert str(a) == "(1 - 3*e)/(1 - 2*e)"
        assert EpsRat.parse(str(a)) == a

    def test_epsilon_symbol_accepted(self):
        """Test: ε se acepta como sinónimo de e"""
        assert EpsRat.parse("1 - ε") == ONE - EPS

    def test_normalization(self):
        """Test: numerador y denominador reducidos, denominador con término bajo +1"""
        a = EpsRat.parse("(2*e - 2*e**2)/(-4*e)")
        assert a == EpsRat.parse("(e - 1)/2")
        assert a.den.coefficients[0] == 1

    @pytest.mark.parametrize("text", ["1.5", "import os", "e**", "", "x + 1", "1/0"])
    def test_malformed_input(self, text):
        """Test: entradas mal formadas lanzan ParseError"""
        with pytest.raises(ParseError):
            EpsRat.parse(text)

    def test_floats_rejected(self):
        """Test: no se aceptan flotantes como racionales"""
        with pytest.raises(ParseError):
            as_rat(0.5)
        with pytest.raises(ParseError):
            as_rat(True)

    @pytest.mark.parametrize("text", ["1e-17", "3e-30", "1e5", "2E3", "1 - 1e-9*e"])
    def test_scientific_notation_rejected(self, text):
        """Test: los literales en notación científica no se leen como flotantes"""
        with pytest.raises(ParseError):
            EpsRat.parse(text)
        with pytest.raises(ParseError):
            parse_polynomial(text.replace("*e", "*t"))

    @pytest.mark.parametrize("text", ["9**9**9**9", "2**e", "e**(e)", "((9**64)**64)**64", "(1 + e**2)**3"])
    def test_power_towers_rejected(self, text):
        """Test: exponentes no literales o anidados se rechazan antes de evaluar"""
        with pytest.raises(ParseError):
            EpsRat.parse(text)

    @pytest.mark.parametrize("text", ["e**100000", "2**65", "e**(-99999999)"])
    def test_large_exponents_rejected(self, text):
        """Test: exponentes mayores que el tope de grado lanzan DegreeGuard"""
        with pytest.raises(DegreeGuard):
            EpsRat.parse(text)

    def test_literal_exponents_accepted(self):
        """Test: exponentes literales pequeños, también negativos o entre paréntesis"""
        assert EpsRat.parse("e**(2)") == EPS * EPS
        assert EpsRat.parse("e**-1 * e**2") == EPS
        assert EpsRat.parse("(1 + e)**2") == ONE + 2 * EPS + EPS * EPS
        assert EpsRat.parse("1/(e**2)") == EPS ** -2

    def test_polynomial_roundtrip(self):
        """Test: polinomios en t"""
        coeffs = parse_polynomial("5*t + t**2")
        assert coeffs == [0, 5, 1]
        assert format_polynomial(coeffs, "t") == "5*t + t**2"
        assert parse_polynomial("(t - 2*t**3)/2") == [0, Fraction(1, 2), 0, -1]


class TestOrder:
    """Orden del límite e -> 0+"""

    def test_infinitesimal(self):
        """Test: 0 < e < q para todo racional positivo q"""
        assert ZERO < EPS
        assert EPS < Fraction(1, 10 ** 9)
        assert EPS * EPS < EPS
        assert ONE - 1000 * EPS > 0

    def test_eps_cmp(self):
        """Test: eps_cmp devuelve un Ordering"""
        assert eps_cmp(EPS, 0) == Ordering.GREATER
        assert eps_cmp("1 - e", 1) == Ordering.LESS
        assert eps_cmp("2*e/2", EPS) == Ordering.EQUAL

    def test_leading_term(self):
        """Test: orden y coeficiente dominante, incluso con orden negativo"""
        assert EpsRat.parse("(1 - e)/e**2").leading_term() == (-2, 1)
        assert EpsRat.parse("3*e**2 - e**3").leading_term() == (2, 3)
        assert ZERO.leading_term() == (0, 0)

    def test_sign_and_min(self):
        """Test: signo y mínimo"""
        assert eps_sign("e - e**2") == 1
        assert eps_sign("-e**3") == -1
        assert eps_sign(0) == 0
        assert eps_min([ONE, EPS, EPS * EPS]) == EPS * EPS

    def test_sign_beyond_fixed_point(self):
        """Test: e - 2^50·e^2 es negativo en e = 2^-40 pero positivo en el límite"""
        a = EPS - 2 ** 50 * EPS * EPS
        assert a.evaluate(Fraction(1, 2 ** 40)) < 0
        assert a.sign() == 1
        assert limit_sign(to_sympy(a)) == 1


class TestArithmetic:
    """Operaciones de cuerpo"""

    def test_evaluation(self):
        """Test: evaluación exacta en un racional"""
        assert eval_at("(1 - 3*e)/(1 - 2*e)", Fraction(1, 100)) == Fraction(97, 98)

    def test_pole(self):
        """Test: evaluar en un polo lanza PoleAtPoint"""
        with pytest.raises(PoleAtPoint):
            (ONE / EPS).evaluate(0)

    def test_division_by_zero(self):
        """Test: dividir por cero lanza DivisionByZero (también ZeroDivisionError)"""
        with pytest.raises(DivisionByZero):
            EPS / ZERO
        with pytest.raises(ZeroDivisionError):
            eps_arith(1, 0, "div")

    def test_degree_guard(self):
        """Test: grados enormes se rechazan"""
        with pytest.raises(DegreeGuard):
            EPS ** 65

    def test_eps_arith(self):
        """Test: eps_arith coincide con los operadores"""
        a, b = EpsRat.parse("1 + e"), EpsRat.parse("e/3")
        assert eps_arith(a, b, "add") == a + b
        assert eps_arith(a, b, "sub") == a - b
        assert eps_arith(a, b, "mul") == a * b
        assert eps_arith(a, b, "div") == a / b
        with pytest.raises(ParseError):
            eps_arith(a, b, "pow")

    def test_substitute(self):
        """Test: sustitución de e por otro elemento de Q(e)"""
        a = ONE / (ONE - EPS)
        assert a.substitute(EPS * EPS) == ONE / (ONE - EPS * EPS)
        assert a.substitute(Fraction(1, 2)) == 2
        with pytest.raises(PoleAtPoint):
            a.substitute(1)

    def test_hash_consistency(self):
        """Test: iguales implica mismo hash"""
        assert hash(EpsRat.parse("2*e/2")) == hash(EPS)
        assert len({EpsRat.parse("(e**2 - 1)/(e - 1)"), ONE + EPS}) == 1


class TestFieldProperties:
    """Axiomas de cuerpo ordenado sobre ternas aleatorias"""

    @pytest.fixture(scope="class")
    def triples(self):
        """Fixture: 10^4 ternas aleatorias con semilla fija"""
        rng = random.Random(2024)
        return [tuple(random_eps_rat(rng) for _ in range(3)) for _ in range(10_000)]

    @pytest.mark.slow
    def test_field_axioms(self, triples):
        """Test: asociatividad, distributividad e inversos"""
        for a, b, c in triples:
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a - a == ZERO
            if a:
                assert a / a == ONE

    @pytest.mark.slow
    def test_order_axioms(self, triples):
        """Test: tricotomía y compatibilidad con + y * por positivos"""
        for a, b, c in triples:
            assert sum([a < b, a == b, a > b]) == 1
            if a < b:
                assert a + c < b + c
                if c > 0:
                    assert a * c < b * c

    @pytest.mark.slow
    def test_against_sympy(self, triples):
        """Test: oráculo sympy para las operaciones y el signo cuando e -> 0+"""
        point = Fraction(1, 2 ** 40)
        for a, b, _ in triples[:2000]:
            expected = sympy.cancel(to_sympy(a) * to_sympy(b) + to_sympy(a))
            assert sympy.cancel(expected - to_sympy(a * b + a)) == 0
            value = expected.subs(E, sympy.Rational(1, 2 ** 40))
            assert Fraction(int(value.p), int(value.q)) == (a * b + a).evaluate(point)
            assert (a * b + a).sign() == limit_sign(expected)
