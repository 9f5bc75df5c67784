"""
Tests para subdivisiones mixtas de m·Δ_d, vértices de fibra y defectos
"""

import random
from fractions import Fraction
from itertools import combinations
from math import factorial

import pytest

from config.settings import SAMPLE_LIFTING_FILE
from src import mixedsub
from src.errors import BadParameters, DimensionMismatch, NotFine, SizeGuard, WrongDimension
from src.formats import read_document


def brute_force_edges(S: mixedsub.MixedSubdivision):
    """Pares de celdas que comparten al menos dos vértices"""
    vertices = [set(mixedsub.cell_vertices(c, S.d)) for c in S.cells]
    return {
        (a, b)
        for a, b in combinations(range(len(S.cells)), 2)
        if len(vertices[a] & vertices[b]) >= 2
    }


class TestCayley:
    """Configuración de Cayley"""

    @pytest.mark.parametrize("d,m", [(1, 2), (2, 3), (2, 5)])
    def test_spanning(self, d, m):
        """Test: los puntos (e_i, v_j) generan dimensión m-1+d"""
        config = mixedsub.CayleyConfig(d, m)
        assert len(config.points) == m * (d + 1)
        assert config.is_spanning()


class TestSubdivision:
    """Celdas de la subdivisión regular"""

    @pytest.fixture
    def defect(self):
        """Fixture: levantamiento con un único defecto Q-Cartier"""
        doc = read_document(SAMPLE_LIFTING_FILE, "lifting")
        return mixedsub.regular_mixed_subdivision(doc["d"], doc["m"], doc["lifting"])

    @pytest.mark.slow
    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_random_liftings_partition(self, m):
        """Test: 200 levantamientos por m, m(m+1)/2 celdas finas cuya área suma m^2/2"""
        rng = random.Random(300 + m)
        for _ in range(200):
            S = mixedsub.regular_mixed_subdivision(2, m, mixedsub.random_lifting(2, m, rng))
            assert S.fine
            assert len(S.cells) == m * (m + 1) // 2
            assert sum(sorted(c.dims()) == [0] * (m - 1) + [2] for c in S.cells) == m
            total = sum((mixedsub.cell_volume(c, 2) for c in S.cells), Fraction(0))
            assert total == mixedsub.simplex_volume(2, m)

    def test_one_dimensional(self):
        """Test: d = 1 da m segmentos unitarios"""
        S = mixedsub.regular_mixed_subdivision(1, 3, mixedsub.random_lifting(1, 3, random.Random(1)))
        assert len(S.cells) == 3
        assert all(mixedsub.cell_volume(c, 1) == 1 for c in S.cells)

    def test_defect_lifting(self, defect):
        """Test: 10 celdas finas y área 8"""
        assert defect.fine
        assert len(defect.cells) == 10
        assert sum((mixedsub.cell_volume(c, 2) for c in defect.cells), Fraction(0)) == 8

    def test_non_generic(self):
        """Test: levantamiento nulo da una sola celda no fina"""
        S = mixedsub.regular_mixed_subdivision(2, 2, [0] * 6)
        assert not S.fine
        assert len(S.cells) == 1
        with pytest.raises(NotFine):
            mixedsub.fiber_vertex(S)

    def test_perturbation_refines(self):
        """Test: perturbar con e genera una subdivisión fina que refina la nula"""
        rng = random.Random(9)
        coarse = mixedsub.regular_mixed_subdivision(2, 3, [0] * 9)
        fine = mixedsub.perturbed_subdivision(2, 3, [0] * 9, mixedsub.random_lifting(2, 3, rng))
        assert fine.fine
        assert len(fine.cells) == 6
        assert mixedsub.refines(fine, coarse)
        assert not mixedsub.refines(coarse, fine)

    @pytest.mark.parametrize("d,m,lifting,error", [
        (3, 2, [0] * 8, WrongDimension),
        (2, 7, [0] * 21, SizeGuard),
        (2, 2, [0] * 5, DimensionMismatch),
        (2, 0, [], BadParameters),
    ])
    def test_errors(self, d, m, lifting, error):
        """Test: dimensión, tamaño y longitud del levantamiento"""
        with pytest.raises(error):
            mixedsub.regular_mixed_subdivision(d, m, lifting)


class TestDualGraph:
    """Grafo dual por facetas compartidas"""

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_against_brute_force(self, m):
        """Test: mismas aristas que el barrido por vértices compartidos"""
        rng = random.Random(500 + m)
        for _ in range(10):
            S = mixedsub.regular_mixed_subdivision(2, m, mixedsub.random_lifting(2, m, rng))
            G = mixedsub.dual_graph(S)
            assert {(a, b) for a, b, _ in G.edges} == brute_force_edges(S)
            assert G.is_connected()

    def test_one_dimensional_chain(self):
        """Test: para d = 1 el grafo es un camino"""
        S = mixedsub.regular_mixed_subdivision(1, 4, mixedsub.ordering_lifting((2, 0, 3, 1)))
        G = mixedsub.dual_graph(S)
        assert G.nodes == 4
        assert len(G.edges) == 3
        assert G.is_connected()


class TestFiberVertices:
    """Vértices de fibra y el permutoedro"""

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_permutohedron(self, m):
        """Test: m! vértices, iguales al oráculo por permutaciones"""
        found = mixedsub.fiber_vertices_by_orderings(m)
        assert len(found) == factorial(m)
        assert found == mixedsub.permutohedron_vertices(m)

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_permutohedron_generic_liftings(self, m):
        """Test: levantamientos aleatorios genéricos alcanzan los m! vértices y ningún otro"""
        found = mixedsub.fiber_vertices_by_random_liftings(m, random.Random(700 + m))
        assert len(found) == factorial(m)
        assert found == mixedsub.permutohedron_vertices(m)

    def test_sampling_stops_early(self):
        """Test: con pocas rondas sólo se obtiene un subconjunto del permutoedro"""
        found = mixedsub.fiber_vertices_by_random_liftings(4, random.Random(3), rounds=5)
        assert 1 <= len(found) <= 5
        assert found <= mixedsub.permutohedron_vertices(4)

    def test_ordering_vertex(self):
        """Test: la primera copia en moverse recibe m - 1/2"""
        S = mixedsub.regular_mixed_subdivision(1, 3, mixedsub.ordering_lifting((1, 2, 0)))
        vertex = mixedsub.fiber_vertex(S)
        assert vertex.coordinates == ((Fraction(1, 2),), (Fraction(5, 2),), (Fraction(3, 2),))

    def test_bad_ordering(self):
        """Test: el orden debe ser una permutación"""
        with pytest.raises(BadParameters):
            mixedsub.ordering_lifting((0, 0, 1))

    def test_fiber_vertex_sum(self):
        """Test: para d = 2 cada copia suma vol(m·Δ_2)·(1/3, 1/3)"""
        rng = random.Random(21)
        S = mixedsub.regular_mixed_subdivision(2, 3, mixedsub.random_lifting(2, 3, rng))
        vertex = mixedsub.fiber_vertex(S)
        total = [sum((c[k] for c in vertex.coordinates), Fraction(0)) for k in range(2)]
        assert total == [Fraction(9, 2)] * 2


class TestDefects:
    """Celdas con un único vértice sobre el borde"""

    def test_defect_lifting(self):
        """Test: un defecto en (2, 2) sobre el lado x+y=m"""
        doc = read_document(SAMPLE_LIFTING_FILE, "lifting")
        S = mixedsub.regular_mixed_subdivision(doc["d"], doc["m"], doc["lifting"])
        defects = mixedsub.qcartier_defect_cells(S)
        assert len(defects) == 1
        (defect,) = defects
        assert defect["contact"]["point"] == (2, 2)
        assert defect["contact"]["sides"] == [3]
        assert mixedsub.is_unit_parallelogram(defect["cell"], 2)
        assert sorted(mixedsub.cell_vertices(defect["cell"], 2)) == [(1, 1), (1, 2), (2, 1), (2, 2)]

    def test_boundary_contacts(self):
        """Test: un triángulo en la esquina toca dos lados"""
        cell = mixedsub.MixedCell(((0, 1, 2), (0,)), (Fraction(0), Fraction(0)))
        contacts = mixedsub.boundary_contacts(cell, 2, 2)
        assert contacts["edges"] == [1, 2]
        assert contacts["isolated"] == []

    def test_requires_d2(self):
        """Test: d = 1 no tiene defectos Q-Cartier"""
        S = mixedsub.regular_mixed_subdivision(1, 2, mixedsub.ordering_lifting((0, 1)))
        with pytest.raises(WrongDimension):
            mixedsub.qcartier_defect_cells(S)
