"""
Tests para números de intersección y criterio de Kleiman
"""

import random
from fractions import Fraction

import pytest

from src import intersect
from src.errors import BadParameters, DimensionMismatch, PreconditionViolated
from src.exactnum import EPS, ONE


class TestBlowupPairings:
    """Tabla de intersección sobre Bl_p P^d"""

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_pairing_table(self, d):
        """Test: H·(e, f, s) = (0, 1, 1) y E·(e, f, s) = (-1, 1, 0)"""
        H, E = intersect.hyperplane_class(d), intersect.exceptional_class(d)
        assert [intersect.pair(H, c) for c in intersect.TestCurve] == [0, 1, 1]
        assert [intersect.pair(E, c) for c in intersect.TestCurve] == [-1, 1, 0]

    def test_canonical_class(self):
        """Test: K = -(d+1)H + (d-1)E y K·f = -2"""
        K = intersect.canonical_class(3)
        assert (K.aH, K.aE) == (-4, 2)
        for d in (2, 3, 4):
            assert intersect.pair(intersect.canonical_class(d), intersect.TestCurve.LINE_THROUGH_P) == -2

    def test_strict_transform(self):
        """Test: R = H - E no corta a f"""
        R = intersect.strict_transform_through_p(2)
        assert intersect.pairings(R) == {"e": 1, "f": 0, "s": 1}

    def test_ample_examples(self):
        """Test: H - E/2 es amplio; H y H - E no lo son"""
        H, E = intersect.hyperplane_class(2), intersect.exceptional_class(2)
        assert intersect.is_ample_blowup(H + E.scale(Fraction(-1, 2)))
        assert not intersect.is_ample_blowup(H)
        assert not intersect.is_ample_blowup(intersect.strict_transform_through_p(2))

    def test_low_dimension(self):
        """Test: Bl_p P^1 no se modela"""
        with pytest.raises(BadParameters):
            intersect.hyperplane_class(1)

    def test_dimension_mismatch(self):
        """Test: sumar clases de dimensiones distintas"""
        with pytest.raises(DimensionMismatch):
            intersect.hyperplane_class(2) + intersect.hyperplane_class(3)


class TestDegenerationDivisor:
    """D_2 + K + nt·C sobre las dos componentes"""

    @pytest.mark.parametrize("d,n", [(2, 6), (2, 9), (3, 7), (4, 10)])
    def test_collected_form(self, d, n):
        """Test: la suma de sumandos es (1 - e·d)H + (e(1+d) - 1)E"""
        D = intersect.degeneration_log_divisor(d, n)
        assert D.aH == ONE - d * EPS
        assert D.aE == (1 + d) * EPS - 1
        assert intersect.pairings(D) == {"e": ONE - (d + 1) * EPS, "f": EPS, "s": ONE - d * EPS}
        assert intersect.is_ample_blowup(D)

    def test_summands(self):
        """Test: tres sumandos con sus nombres"""
        names = [name for name, _ in intersect.degeneration_log_divisor_summands(2, 6)]
        assert names == ["D2+K", "heavy", "light"]

    def test_not_ample_for_large_eps(self):
        """Test: con e = 1/(d+1) se pierde la positividad sobre e"""
        D = intersect.degeneration_log_divisor(2, 6, Fraction(1, 3))
        assert intersect.pair(D, intersect.TestCurve.E_LINE) == 0
        assert not intersect.is_ample_blowup(D)

    def test_y1_coefficient(self):
        """Test: 1 - (d+1)e, nulo en e = 1/(d+1)"""
        assert intersect.y1_log_divisor(2) == ONE - 3 * EPS
        assert intersect.y1_log_divisor(3, Fraction(1, 4)) == 0

    def test_ruled_fiber_degree(self):
        """Test: grado 0 con conductor E+H; -1 con sólo E"""
        for d in (2, 3, 4):
            assert intersect.ruled_fiber_degree(d) == 0
            assert intersect.ruled_fiber_degree(d, conductor="E") == -1
        with pytest.raises(BadParameters):
            intersect.ruled_fiber_degree(2, conductor="H")

    def test_modification(self):
        """Test: curva excepcional y reglas tras la modificación"""
        six = intersect.modification_checks(6)
        assert six["onE"] == EPS
        assert six["onR_lower"] == (ONE - 5 * EPS) / 3
        assert six["positive"]
        assert intersect.modification_checks(7)["onR_lower"] == (ONE - 7 * EPS) / 4


class TestPairingSurface:
    """Superficies dadas por tabla de intersección"""

    def test_p1_x_p1(self):
        """Test: O(1,1) es amplio, O(1,0) no"""
        S = intersect.PairingSurface(("r1", "r2"), ((0, 1), (1, 0)), (1, 1))
        assert intersect.pair_surface(S, (1, 1)) == [1, 1]
        assert intersect.ample_from_pairing(S)
        assert not intersect.ample_from_pairing(S.with_divisor((1, 0)))

    def test_not_symmetric(self):
        """Test: matriz no simétrica"""
        with pytest.raises(BadParameters):
            intersect.PairingSurface(("a", "b"), ((0, 1), (2, 0)))

    def test_missing_divisor(self):
        """Test: ample_from_pairing sin divisor"""
        S = intersect.PairingSurface(("a", "b"), ((0, 1), (1, 0)))
        with pytest.raises(DimensionMismatch):
            intersect.ample_from_pairing(S)

    def test_f1_threshold(self):
        """Test: A = f + s, D = e tiene c* = 1"""
        S = intersect.blowup_surface()
        assert intersect.small_coefficient_threshold(S, (0, 1, 1), (1, 0, 0)) == 1
        assert intersect.small_coefficient_threshold(S, (0, 1, 1), (0, 1, 0)) is None
        with pytest.raises(PreconditionViolated):
            intersect.small_coefficient_threshold(S, (1, 0, 0), (0, 1, 0))

    def test_f1_agrees_with_blowup_table(self):
        """Test: el modelo F_1 da las mismas intersecciones que Bl_p P^2"""
        for eps in (EPS, Fraction(1, 10), Fraction(1, 3)):
            D = intersect.degeneration_log_divisor(2, 7, eps)
            S = intersect.blowup_surface(eps, D)
            assert intersect.pair_surface(S, S.divisor) == [
                intersect.pair(D, c) for c in intersect.TestCurve
            ]
            assert intersect.ample_from_pairing(S) == intersect.is_ample_blowup(D)

    def test_threshold_on_random_surfaces(self):
        """Test: A + cD amplio para c = c*/2 y no amplio en c = c*"""
        rng = random.Random(11)
        checked = 0
        for _ in range(100):
            size = rng.randint(2, 4)
            matrix = [[Fraction(0)] * size for _ in range(size)]
            for i in range(size):
                matrix[i][i] = Fraction(rng.randint(-2, 2))
                for j in range(i + 1, size):
                    matrix[i][j] = matrix[j][i] = Fraction(rng.randint(0, 3))
            S = intersect.PairingSurface(tuple(f"L{i}" for i in range(size)), tuple(map(tuple, matrix)))
            A = [Fraction(rng.randint(1, 3)) for _ in range(size)]
            D = [Fraction(rng.randint(-3, 3)) for _ in range(size)]
            try:
                c_star = intersect.small_coefficient_threshold(S, A, D)
            except PreconditionViolated:
                continue
            if c_star is None:
                assert intersect.ample_from_pairing(S.with_divisor([a + d for a, d in zip(A, D)]))
                continue
            half = [a + c_star / 2 * d for a, d in zip(A, D)]
            at = [a + c_star * d for a, d in zip(A, D)]
            assert intersect.ample_from_pairing(S.with_divisor(half))
            assert not intersect.ample_from_pairing(S.with_divisor(at))
            checked += 1
        assert checked > 0
