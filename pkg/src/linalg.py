"""
Eliminación exacta sobre Q.

Rango y forma escalonada con Bareiss (sin fracciones) sobre enteros, después
de limpiar denominadores fila por fila; forma reducida y resolución de
sistemas con Fraction.
"""
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

Row = Tuple[Fraction, ...]


def integer_rows(rows: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    """Multiplica cada fila por el mcm de sus denominadores"""
    result = []
    for row in rows:
        scale = lcm(*(Fraction(x).denominator for x in row)) if row else 1
        result.append([int(Fraction(x) * scale) for x in row])
    return result


def bareiss_echelon(rows: Sequence[Sequence[Fraction]]) -> Tuple[List[List[int]], List[int]]:
    """
    Forma escalonada entera por Bareiss.

    Devuelve (filas, columnas pivote); las primeras len(pivotes) filas son
    la base escalonada, el resto son cero.
    """
    m = integer_rows(rows)
    if not m:
        return m, []
    n_rows, n_cols = len(m), len(m[0])
    pivots: List[int] = []
    prev = 1
    piv_r = 0
    for piv_c in range(n_cols):
        if piv_r == n_rows:
            break
        for i_row in range(piv_r, n_rows):
            if m[i_row][piv_c] != 0:
                break
        else:
            continue
        if i_row != piv_r:
            m[piv_r], m[i_row] = m[i_row], m[piv_r]
        fp = m[piv_r][piv_c]
        for r in range(piv_r + 1, n_rows):
            fr = m[r][piv_c]
            m[r] = [
                (fp * m[r][c] - fr * m[piv_r][c]) // prev if c >= piv_c else 0
                for c in range(n_cols)
            ]
        prev = fp
        pivots.append(piv_c)
        piv_r += 1
    return m, pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(bareiss_echelon(rows)[1])


def rref(rows: Sequence[Sequence[Fraction]]) -> Tuple[Row, ...]:
    """Forma escalonada reducida (clave canónica del espacio de filas)"""
    m, pivots = bareiss_echelon(rows)
    basis = [[Fraction(x) for x in m[r]] for r in range(len(pivots))]
    for r in range(len(pivots) - 1, -1, -1):
        piv_c = pivots[r]
        fp = basis[r][piv_c]
        basis[r] = [x / fp for x in basis[r]]
        for above in range(r):
            fa = basis[above][piv_c]
            if fa:
                basis[above] = [x - fa * y for x, y in zip(basis[above], basis[r])]
    return tuple(tuple(row) for row in basis)


def in_row_space(reduced: Sequence[Row], vector: Sequence[Fraction]) -> bool:
    """¿vector pertenece al espacio generado por una base en forma reducida?"""
    v = [Fraction(x) for x in vector]
    for row in reduced:
        piv_c = next(c for c, x in enumerate(row) if x)
        f = v[piv_c]
        if f:
            v = [x - f * y for x, y in zip(v, row)]
    return not any(v)


def inverse(a: Sequence[Sequence[Fraction]]) -> Optional[List[List[Fraction]]]:
    """Inversa exacta por reducción de [a | I]; None si a es singular"""
    n = len(a)
    augmented = [
        [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(a)
    ]
    reduced = rref(augmented)
    if len(reduced) < n or any(not any(row[:n]) for row in reduced):
        return None
    return [list(row[n:]) for row in reduced]
