"""
Subdivisiones mixtas coherentes de m·Δ_d (d = 1, 2) por el truco de Cayley.

Forma dual: una faceta inferior de la configuración de Cayley levantada
corresponde a un punto y ∈ Q^d; la copia i elige la cara
F_i = argmin_v (ω_i(v) - <y, v>). Los y candidatos resuelven d ecuaciones de
empate y dan una celda cuando las caras elegidas generan dimensión d.

Vértices de Δ_d: v_0 = 0, v_j = e_j. El levantamiento va por copias:
lifting[i·(d+1) + j] levanta el vértice j de la copia i.
"""
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Dict, List, Optional, Sequence, Set, Tuple

from config.settings import FIBER_SAMPLE_ROUNDS, MAX_MIXED_M
from src.errors import (
    BadParameters,
    DimensionMismatch,
    InvariantBreach,
    NotFine,
    SizeGuard,
    WrongDimension,
)
from src.exactnum import EpsRat, as_rat
from src.linalg import rank

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, ...]

BOUNDARY_SIDES = {1: "x=0", 2: "y=0", 3: "x+y=m"}


def simplex_vertex(d: int, j: int) -> Tuple[int, ...]:
    return tuple(int(k == j - 1) for k in range(d))


@dataclass(frozen=True)
class CayleyConfig:
    """m copias de Δ_d en la inclusión de Cayley: puntos (e_i, v_j)"""

    d: int
    m: int

    @property
    def points(self) -> List[Tuple[int, int]]:
        """Etiquetas (copia, vértice) en el orden del vector de levantamiento"""
        return [(i, j) for i in range(self.m) for j in range(self.d + 1)]

    def coordinates(self, label: Tuple[int, int]) -> Tuple[int, ...]:
        i, j = label
        return tuple(int(k == i) for k in range(self.m)) + simplex_vertex(self.d, j)

    def is_spanning(self) -> bool:
        pts = [self.coordinates(p) for p in self.points]
        base = pts[0]
        diffs = [[a - b for a, b in zip(p, base)] for p in pts[1:]]
        return rank(diffs) == self.m - 1 + self.d


@dataclass(frozen=True)
class MixedCell:
    """Tupla de caras (F_1, ..., F_m) de Δ_d y el punto dual y que la define"""

    faces: Tuple[Tuple[int, ...], ...]
    y: Tuple

    def dims(self) -> Tuple[int, ...]:
        return tuple(len(f) - 1 for f in self.faces)

    def to_json(self) -> dict:
        return {"faces": [list(f) for f in self.faces], "y": [str(c) for c in self.y]}


@dataclass(frozen=True)
class MixedSubdivision:
    d: int
    m: int
    cells: Tuple[MixedCell, ...]
    lifting: Tuple
    non_generic: bool = False

    @property
    def fine(self) -> bool:
        return not self.non_generic


@dataclass(frozen=True)
class FiberVertex:
    """Un punto de (Q^d)^m: una coordenada d-dimensional por copia"""

    d: int
    m: int
    coordinates: Tuple[Point, ...]

    def to_json(self) -> List[List[str]]:
        return [[str(x) for x in c] for c in self.coordinates]


@dataclass(frozen=True)
class DualGraph:
    nodes: int
    edges: Tuple[Tuple[int, int, Tuple[Point, ...]], ...]

    def to_json(self) -> dict:
        return {
            "nodes": self.nodes,
            "edges": [
                {"cells": [a, b], "facet": [[str(x) for x in p] for p in facet]}
                for a, b, facet in self.edges
            ],
        }

    def is_connected(self) -> bool:
        if self.nodes == 0:
            return True
        neighbours: Dict[int, Set[int]] = {i: set() for i in range(self.nodes)}
        for a, b, _ in self.edges:
            neighbours[a].add(b)
            neighbours[b].add(a)
        seen, stack = {0}, [0]
        while stack:
            for nxt in neighbours[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return len(seen) == self.nodes


# ----------------------------------------------------------------------
# Subdivisión
# ----------------------------------------------------------------------

def _coerce_lifting(lifting: Sequence) -> Tuple:
    values = []
    for x in lifting:
        if isinstance(x, EpsRat):
            values.append(x if not x.is_rational else x.to_rat())
        elif isinstance(x, str) and "e" in x:
            values.append(EpsRat.parse(x))
        else:
            values.append(as_rat(x))
    if any(isinstance(x, EpsRat) for x in values):
        values = [EpsRat.coerce(x) for x in values]
    return tuple(values)


def _tie_equations(d: int, m: int, lifting: Tuple) -> List[Tuple[Tuple[int, ...], object]]:
    """<y, v_j - v_k> = ω_i(v_j) - ω_i(v_k) para cada copia y par de vértices"""
    equations = []
    for i in range(m):
        for j, k in combinations(range(d + 1), 2):
            row = tuple(a - b for a, b in zip(simplex_vertex(d, j), simplex_vertex(d, k)))
            rhs = lifting[i * (d + 1) + j] - lifting[i * (d + 1) + k]
            equations.append((row, rhs))
    return equations


def _solve_ties(d: int, equations) -> Optional[Tuple]:
    """Regla de Cramer con matriz entera; None si es singular"""
    if d == 1:
        (row, rhs), = equations
        return (rhs / row[0],)
    (r1, b1), (r2, b2) = equations
    det = r1[0] * r2[1] - r1[1] * r2[0]
    if det == 0:
        return None
    return ((b1 * r2[1] - b2 * r1[1]) / det, (r1[0] * b2 - r2[0] * b1) / det)


def _select_faces(d: int, m: int, lifting: Tuple, y: Tuple) -> Tuple[Tuple[int, ...], ...]:
    faces = []
    for i in range(m):
        values = [lifting[i * (d + 1)]] + [
            lifting[i * (d + 1) + j] - y[j - 1] for j in range(1, d + 1)
        ]
        low = values[0]
        for v in values[1:]:
            if v < low:
                low = v
        faces.append(tuple(j for j, v in enumerate(values) if v == low))
    return tuple(faces)


def _span_dimension(d: int, faces: Sequence[Tuple[int, ...]]) -> int:
    directions = []
    for face in faces:
        base = simplex_vertex(d, face[0])
        for j in face[1:]:
            directions.append([a - b for a, b in zip(simplex_vertex(d, j), base)])
    return rank(directions) if directions else 0


def regular_mixed_subdivision(d: int, m: int, lifting: Sequence) -> MixedSubdivision:
    """Celdas de la subdivisión mixta inducida por un levantamiento"""
    if d not in (1, 2):
        raise WrongDimension(f"Sólo d = 1 o d = 2 (d={d})")
    if m < 1:
        raise BadParameters(f"m debe ser >= 1 (m={m})")
    if m > MAX_MIXED_M:
        raise SizeGuard(f"Subdivisiones mixtas limitadas a m <= {MAX_MIXED_M} (m={m})", m=m)
    lifting = _coerce_lifting(lifting)
    if len(lifting) != m * (d + 1):
        raise DimensionMismatch(
            f"El levantamiento tiene {len(lifting)} valores, se esperaban {m * (d + 1)}"
        )

    equations = _tie_equations(d, m, lifting)
    cells: Dict[Tuple, MixedCell] = {}
    for chosen in combinations(equations, d):
        y = _solve_ties(d, chosen)
        if y is None or y in cells:
            continue
        faces = _select_faces(d, m, lifting, y)
        if _span_dimension(d, faces) == d:
            cells[y] = MixedCell(faces, y)

    ordered = tuple(sorted(cells.values(), key=lambda c: c.faces))
    non_generic = any(sum(c.dims()) != d for c in ordered)
    if non_generic:
        logger.warning("non_generic_lifting", extra={"d": d, "m": m, "cells": len(ordered)})
    return MixedSubdivision(d, m, ordered, lifting, non_generic)


def random_lifting(d: int, m: int, rng: random.Random) -> Tuple[Fraction, ...]:
    """Levantamiento racional genérico con probabilidad 1"""
    return tuple(
        Fraction(rng.randint(0, 10 ** 6), rng.randint(1, 997)) for _ in range(m * (d + 1))
    )


def perturbed_subdivision(d: int, m: int, lifting: Sequence, perturbation: Sequence) -> MixedSubdivision:
    """Subdivisión para lifting + e·perturbation con e infinitesimal"""
    eps = EpsRat.eps()
    lifted = [EpsRat.coerce(as_rat(a)) + eps * as_rat(b) for a, b in zip(lifting, perturbation)]
    return regular_mixed_subdivision(d, m, lifted)


# ----------------------------------------------------------------------
# Geometría de celdas
# ----------------------------------------------------------------------

def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Sequence[Point]) -> List[Point]:
    """Cadena monótona exacta; vértices en sentido antihorario, sin colineales"""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: List[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def minkowski_points(d: int, cell: MixedCell) -> Set[Point]:
    sums: Set[Point] = {tuple(Fraction(0) for _ in range(d))}
    for face in cell.faces:
        vertices = [simplex_vertex(d, j) for j in face]
        sums = {tuple(a + b for a, b in zip(s, v)) for s in sums for v in vertices}
    return sums


def cell_vertices(cell: MixedCell, d: int) -> List[Point]:
    """Vértices del politopo F_1 + ... + F_m (antihorario si d = 2)"""
    pts = minkowski_points(d, cell)
    if d == 1:
        lo, hi = min(pts), max(pts)
        return [lo] if lo == hi else [lo, hi]
    return convex_hull(list(pts))


def polygon_area(vertices: Sequence[Point]) -> Fraction:
    if len(vertices) < 3:
        return Fraction(0)
    twice = sum(
        (vertices[k][0] * vertices[(k + 1) % len(vertices)][1]
         - vertices[(k + 1) % len(vertices)][0] * vertices[k][1]
         for k in range(len(vertices))),
        Fraction(0),
    )
    return abs(twice) / 2


def cell_volume(cell: MixedCell, d: int) -> Fraction:
    """Longitud (d = 1) o área euclídea (d = 2)"""
    vertices = cell_vertices(cell, d)
    if d == 1:
        return vertices[-1][0] - vertices[0][0]
    return polygon_area(vertices)


def simplex_volume(d: int, m: int) -> Fraction:
    """vol(m·Δ_d) = m^d / d!"""
    return Fraction(m ** d, 1 if d == 1 else 2)


def cell_facets(cell: MixedCell, d: int) -> List[Tuple[Point, ...]]:
    """Facetas como tuplas ordenadas de extremos (puntos si d = 1)"""
    vertices = cell_vertices(cell, d)
    if d == 1:
        return [(v,) for v in vertices]
    return [
        tuple(sorted((vertices[k], vertices[(k + 1) % len(vertices)])))
        for k in range(len(vertices))
    ]


def _on_side(point: Point, side: int, m: int) -> bool:
    x, y = point
    if side == 1:
        return x == 0
    if side == 2:
        return y == 0
    return x + y == m


def facet_on_boundary(facet: Tuple[Point, ...], d: int, m: int) -> bool:
    if d == 1:
        return facet[0][0] in (0, m)
    return any(all(_on_side(p, side, m) for p in facet) for side in BOUNDARY_SIDES)


def boundary_contacts(cell: MixedCell, d: int, m: int) -> dict:
    """
    Contacto de la celda con ∂(m·Δ_2): lados con una arista en común y
    vértices aislados (sobre el borde pero fuera de esas aristas).
    """
    if d != 2:
        raise WrongDimension("boundary_contacts sólo aplica a d = 2")
    vertices = cell_vertices(cell, d)
    edge_sides = []
    on_edges: Set[Point] = set()
    for side in BOUNDARY_SIDES:
        touching = [v for v in vertices if _on_side(v, side, m)]
        if len(touching) >= 2:
            edge_sides.append(side)
            on_edges.update(touching)
    isolated = []
    for v in vertices:
        if v in on_edges:
            continue
        sides = [side for side in BOUNDARY_SIDES if _on_side(v, side, m)]
        if sides:
            isolated.append({"point": v, "sides": sides})
    return {"edges": edge_sides, "isolated": isolated}


def is_unit_parallelogram(cell: MixedCell, d: int) -> bool:
    """Dos copias aportan aristas independientes y el resto puntos"""
    dims = cell.dims()
    if d != 2 or sorted(dims)[-2:] != [1, 1] or sum(dims) != 2:
        return False
    return _span_dimension(d, [f for f in cell.faces if len(f) == 2]) == 2


# ----------------------------------------------------------------------
# Vértice de fibra, grafo dual y defectos Q-Cartier
# ----------------------------------------------------------------------

def _barycenter(d: int, face: Tuple[int, ...]) -> Point:
    k = len(face)
    return tuple(
        sum((Fraction(simplex_vertex(d, j)[c]) for j in face), Fraction(0)) / k
        for c in range(d)
    )


def fiber_vertex(S: MixedSubdivision) -> FiberVertex:
    """Σ_celdas vol(celda)·(baricentro de F_1, ..., baricentro de F_m)"""
    if not S.fine:
        raise NotFine("La subdivisión no es fina; el vértice de fibra no está definido")
    d, m = S.d, S.m
    coords = [[Fraction(0)] * d for _ in range(m)]
    for cell in S.cells:
        vol = cell_volume(cell, d)
        for i, face in enumerate(cell.faces):
            bary = _barycenter(d, face)
            for c in range(d):
                coords[i][c] += vol * bary[c]
    return FiberVertex(d, m, tuple(tuple(c) for c in coords))


def dual_graph(S: MixedSubdivision) -> DualGraph:
    """Nodos = celdas; aristas = facetas compartidas"""
    owners: Dict[Tuple[Point, ...], List[int]] = {}
    for idx, cell in enumerate(S.cells):
        for facet in cell_facets(cell, S.d):
            owners.setdefault(facet, []).append(idx)
    edges = []
    for facet, cells in sorted(owners.items()):
        for a, b in combinations(sorted(cells), 2):
            edges.append((a, b, facet))
    edges.sort(key=lambda e: (e[0], e[1], e[2]))
    return DualGraph(len(S.cells), tuple(edges))


def qcartier_defect_cells(S: MixedSubdivision) -> List[dict]:
    """
    Paralelogramos unitarios cuya intersección con ∂(m·Δ_2) es exactamente
    un vértice.
    """
    if S.d != 2:
        raise WrongDimension(f"La detección de defectos requiere d = 2 (d={S.d})")
    defects = []
    for idx, cell in enumerate(S.cells):
        if not is_unit_parallelogram(cell, S.d):
            continue
        contacts = boundary_contacts(cell, S.d, S.m)
        if contacts["edges"]:
            continue
        if len(contacts["isolated"]) > 1:
            raise InvariantBreach(
                "Paralelogramo con más de un contacto aislado con el borde",
                cell=idx,
                contacts=len(contacts["isolated"]),
            )
        if len(contacts["isolated"]) == 1:
            contact = contacts["isolated"][0]
            defects.append({"index": idx, "cell": cell, "contact": contact})
    logger.debug("qcartier_defect_cells", extra={"m": S.m, "defects": len(defects)})
    return defects


# ----------------------------------------------------------------------
# d = 1: permutoedro
# ----------------------------------------------------------------------

def ordering_lifting(order: Sequence[int]) -> Tuple[Fraction, ...]:
    """
    Levantamiento para d = 1 que hace moverse a las copias en el orden dado:
    ω_i(0) = 0, ω_i(1) = posición de i en `order`.
    """
    m = len(order)
    if sorted(order) != list(range(m)):
        raise BadParameters(f"{list(order)} no es una permutación de 0..{m - 1}")
    position = {copy: k for k, copy in enumerate(order)}
    lifting: List[Fraction] = []
    for i in range(m):
        lifting.extend([Fraction(0), Fraction(position[i])])
    return tuple(lifting)


def permutohedron_vertices(m: int) -> Set[FiberVertex]:
    """Oráculo por fuerza bruta: permutaciones de (1/2, 3/2, ..., m - 1/2)"""
    base = [Fraction(2 * k + 1, 2) for k in range(m)]
    return {
        FiberVertex(1, m, tuple((x,) for x in perm))
        for perm in set(permutations(base))
    }


def fiber_vertices_by_orderings(m: int) -> Set[FiberVertex]:
    """Vértices de fibra para d = 1 recorriendo un levantamiento por orden"""
    found = set()
    for order in permutations(range(m)):
        S = regular_mixed_subdivision(1, m, ordering_lifting(order))
        found.add(fiber_vertex(S))
    return found


def fiber_vertices_by_random_liftings(
    m: int,
    rng: random.Random,
    rounds: int = FIBER_SAMPLE_ROUNDS,
) -> Set[FiberVertex]:
    """
    Vértices de fibra para d = 1 muestreando levantamientos genéricos.

    Se detiene al reunir m! vértices o tras `rounds` levantamientos.
    """
    found: Set[FiberVertex] = set()
    target = factorial(m)
    for _ in range(rounds):
        try:
            found.add(fiber_vertex(regular_mixed_subdivision(1, m, random_lifting(1, m, rng))))
        except NotFine:
            continue
        if len(found) == target:
            break
    logger.debug("fiber_sampling", extra={"m": m, "found": len(found), "target": target})
    return found


def refines(fine: MixedSubdivision, coarse: MixedSubdivision) -> bool:
    """Cada celda de `fine` está contenida en alguna celda de `coarse`"""
    d = fine.d
    coarse_polys = [cell_vertices(c, d) for c in coarse.cells]

    def inside(point: Point, poly: List[Point]) -> bool:
        if d == 1:
            return poly[0] <= point <= poly[-1]
        return all(_cross(poly[k], poly[(k + 1) % len(poly)], point) >= 0 for k in range(len(poly)))

    for cell in fine.cells:
        vertices = cell_vertices(cell, d)
        if not any(all(inside(v, poly) for v in vertices) for poly in coarse_polys):
            return False
    return True
