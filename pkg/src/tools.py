"""
Herramientas (Tools) que expone el CLI.

Cada herramienta corresponde a un subcomando y devuelve un diccionario de
resultado: {"success": True, "data": {...}} o
{"success": False, "error": CODE, "message": str}.
"""
import logging
import random
from fractions import Fraction
from typing import Dict, Optional

from src import arrangement, intersect, mixedsub, replacement, weightdomain
from src.errors import ComputationError, InputError
from src.exactnum import EPS, EpsRat
from src.formats import read_document

logger = logging.getLogger(__name__)


def _unknown_error(tool: str, e: Exception) -> Dict:
    logger.exception("tool_failed", extra={"tool": tool})
    return {
        "success": False,
        "error": "UNKNOWN_ERROR",
        "message": f"Error inesperado: {str(e)}",
    }


class WallCrossingTools:
    """
    Conjunto de herramientas de cálculo exacto.

    eps es el infinitesimal simbólico (por defecto) o un racional 0 < e < 1
    en modo racional.
    """

    def __init__(self, eps: Optional[Fraction] = None):
        self.eps = EPS if eps is None else EpsRat.from_rat(eps)
        self.rational_mode = eps is not None

    # ------------------------------------------------------------------
    # Resolución de argumentos
    # ------------------------------------------------------------------
    def _weights(self, which: str, d: int, n: int) -> weightdomain.WeightVector:
        if which == "t":
            return weightdomain.t_weights(d, n, self.eps)
        if which == "nt":
            return weightdomain.nt_weights(d, n, self.eps)
        b = read_document(which, "weights", self.eps if self.rational_mode else None)
        if d is not None and n is not None and (b.d, b.n) != (d, n):
            raise InputError(
                f"El archivo {which} tiene (d={b.d}, n={b.n}); se pidió (d={d}, n={n})"
            )
        return b

    def _arrangement(self, which: str, d: int, n: int) -> arrangement.Arrangement:
        if which == "e_config":
            return arrangement.e_configuration(d, n)
        return read_document(which, "arrangement")

    # ------------------------------------------------------------------
    # Herramientas
    # ------------------------------------------------------------------
    def walls(self, d: int, n: int, weights: str = "t") -> Dict:
        """
        Tool: walls

        Propósito:
        Listar las paredes x_I = k que contienen un vector de pesos.

        Entradas esperadas:
        - d, n (int): dimensiones del dominio D(d+1, n)
        - weights (str): "t", "nt" o ruta a un documento de pesos

        Salida esperada:
        {
            "success": bool,
            "data": {"weights": [str], "in_domain": bool, "walls": [{"I", "k"}]}
        }

        Posibles errores:
        - BAD_PARAMETERS: d, n o e fuera de rango
        - SIZE_GUARD: n demasiado grande
        - INPUT_ERROR: documento de pesos mal formado
        """
        try:
            b = self._weights(weights, d, n)
            found = weightdomain.walls_containing(b)
            return {
                "success": True,
                "data": {
                    "weights": b.to_json(),
                    "in_domain": weightdomain.in_domain(b),
                    "walls": [w.to_json() for w in found],
                },
            }
        except ComputationError as e:
            return e.to_result()
        except Exception as e:
            return _unknown_error("walls", e)

    def segment(self, d: int, n: int, start: str = "t", end: str = "nt") -> Dict:
        """
        Tool: segment

        Propósito:
        Paredes cruzadas por el segmento abierto (start, end), ordenadas por u0.

        Entradas esperadas:
        - d, n (int)
        - start, end (str): "t", "nt" o ruta a un documento de pesos

        Salida esperada:
        {
            "success": bool,
            "data": {"from": [str], "to": [str], "crossings": [{"wall", "u0", "point"}]}
        }

        Posibles errores:
        - BAD_PARAMETERS: extremos iguales
        - DIMENSION_MISMATCH: extremos de dimensiones distintas
        """
        try:
            b = self._weights(start, d, n)
            b2 = self._weights(end, d, n)
            crossings = weightdomain.segment_walls(b, b2)
            return {
                "success": True,
                "data": {
                    "from": b.to_json(),
                    "to": b2.to_json(),
                    "crossings": [c.to_json() for c in crossings],
                },
            }
        except ComputationError as e:
            return e.to_result()
        except Exception as e:
            return _unknown_error("segment", e)

    def chamber(self, d: int, n: int, b: str, b2: str) -> Dict:
        """
        Tool: chamber

        Propósito:
        Vectores de signo de b y b2 y los predicados de cámara.

        Salida esperada:
        {
            "success": bool,
            "data": {
                "sign_b": str, "sign_b2": str,
                "same_chamber": bool, "b_in_closure_of_b2": bool, "b_leq_b2": bool
            }
        }
        """
        try:
            first = self._weights(b, d, n)
            second = self._weights(b2, d, n)
            return {
                "success": True,
                "data": {
                    "sign_b": weightdomain.sign_vector(first).to_json(),
                    "sign_b2": weightdomain.sign_vector(second).to_json(),
                    "same_chamber": weightdomain.same_chamber(first, second),
                    "b_in_closure_of_b2": weightdomain.in_chamber_closure(first, second),
                    "b_leq_b2": weightdomain.leq(first, second),
                },
            }
        except ComputationError as e:
            return e.to_result()
        except Exception as e:
            return _unknown_error("chamber", e)

    def stability(self, weights: str, source: str, d: Optional[int] = None, n: Optional[int] = None) -> Dict:
        """
        Tool: stability

        Propósito:
        Decidir si (P^d, bH) es estable y dar un flat testigo si no es lc.

        Entradas esperadas:
        - weights (str): "t", "nt" o ruta a un documento de pesos
        - source (str): "e_config" o ruta a un documento de arreglo
        - d, n (int, opcional): obligatorios con e_config

        Salida esperada:
        {
            "success": bool,
            "data": {"status": "Stable" | "NotLC" | "NotPositive", "witness"?, "weight_sum"?,
                     "e_type": bool}
        }

        Posibles errores:
        - BAD_PARAMETERS: falta d o n con e_config
        - SIZE_GUARD: retículo de flats demasiado grande
        - DIMENSION_MISMATCH: pesos y arreglo no coinciden
        """
        try:
            if source == "e_config" and (d is None or n is None):
                raise InputError("e_config requiere --d y --n")
            A = self._arrangement(source, d, n)
            b = self._weights(weights, A.d, A.n)
            verdict = arrangement.is_stable(A, b)
            data = verdict.to_json()
            data["e_type"] = arrangement.projectively_equivalent_to_e(A)
            data["arrangement"] = A.to_json()
            data["weights"] = b.to_json()
            return {"success": True, "data": data}
        except ComputationError as e:
            return e.to_result()
        except Exception as e:
            return _unknown_error("stability", e)

    def ample(self, model: str = "blowup", d: Optional[int] = None, n: Optional[int] = None,
              surface: Optional[str] = None) -> Dict:
        """
        Tool: ample

        Propósito:
        Criterio de Kleiman por curvas de prueba.

        Entradas esperadas:
        - model (str): "blowup" (divisor log de la degeneración sobre Bl_p P^d)
          o "pairing" (superficie con tabla de intersección)
        - d, n (int): para "blowup"
        - surface (str): ruta al documento de superficie para "pairing"

        Salida esperada:
        {
            "success": bool,
            "data": {"pairings": {curva: str}, "ample": bool, ...}
        }
        """
        try:
            if model == "blowup":
                if d is None or n is None:
                    raise InputError("--model blowup requiere --d y --n")
                summands = intersect.degeneration_log_divisor_summands(d, n, self.eps)
                D = intersect.degeneration_log_divisor(d, n, self.eps)
                return {
                    "success": True,
                    "data": {
                        "model": "blowup",
                        "divisor": D.to_json(),
                        "summands": {name: div.to_json() for name, div in summands},
                        "pairings": {k: str(v) for k, v in intersect.pairings(D).items()},
                        "y1_coefficient": str(intersect.y1_log_divisor(d, self.eps)),
                        "ample": intersect.is_ample_blowup(D),
                    },
                }
            if model == "pairing":
                if surface is None:
                    raise InputError("--model pairing requiere un documento de superficie")
                S = read_document(surface, "surface")
                if not S.divisor:
                    raise InputError("La superficie no trae 'divisor'")
                if self.rational_mode:
                    S = S.with_divisor([x.substitute(self.eps) for x in S.divisor])
                values = intersect.pair_surface(S, S.divisor)
                return {
                    "success": True,
                    "data": {
                        "model": "pairing",
                        "surface": S.to_json(),
                        "pairings": {c: str(v) for c, v in zip(S.curves, values)},
                        "ample": intersect.ample_from_pairing(S),
                    },
                }
            raise InputError(f"Modelo desconocido: {model}")
        except ComputationError as e:
            return e.to_result()
        except Exception as e:
            return _unknown_error("ample", e)

    def replace(self, family: str) -> Dict:
        """
        Tool: replace

        Propósito:
        Reemplazo estable de una familia de hiperplanos livianos que colisionan.

        Entradas esperadas:
        - family (str): ruta a un documento de familia de jets

        Salida esperada:
        {
            "success": bool,
            "data": {"s": int, "sections": [...], "classes": [[int]], "model": {...},
                     "valid": bool}
        }

        Posibles errores:
        - NOT_IN_NORMAL_FORM: a_1(0) = 0 o a_j(0) != 0 para j != 1
        - INDISTINGUISHABLE_AT_TRUNCATION: los miembros coinciden hasta orden T
        - INSUFFICIENT_TRUNCATION: T no alcanza para leer el orden s
        """
        try:
            doc = read_document(family, "family")
            F, n = doc["family"], doc["n"]
            s = replacement.separation_depth(F)
            model = replacement.stable_replacement_model(F, n)
            return {
                "success": True,
                "data": {
                    "family": F.to_json(),
                    "s": s,
                    "sections": [sec.to_json() for sec in model.sections],
                    "classes": [list(c) for c in model.classes],
                    "model": model.to_json(),
                    "valid": replacement.validate_degeneration(model, self.eps),
                },
            }
        except ComputationError as e:
            return e.to_result()
        except Exception as e:
            return _unknown_error("replace", e)

    def mixed_subdivision(self, d: int, m: int, lifting: Optional[str] = None,
                          seed: Optional[int] = None) -> Dict:
        """
        Tool: mixedsub

        Propósito:
        Subdivisión mixta coherente de m·Δ_d para un levantamiento dado o aleatorio.

        Entradas esperadas:
        - d (int): 1 o 2
        - m (int): número de copias
        - lifting (str, opcional): ruta a un documento de levantamiento
        - seed (int, opcional): semilla para un levantamiento aleatorio

        Salida esperada:
        {
            "success": bool,
            "data": {"cells": [...], "fine": bool, "dual_graph": {...},
                     "defects": [...], "fiber_vertex"?: [[str]]}
        }

        Posibles errores:
        - WRONG_DIMENSION: d fuera de {1, 2}
        - SIZE_GUARD: m demasiado grande
        - DIMENSION_MISMATCH: longitud del levantamiento
        """
        try:
            if lifting is not None:
                doc = read_document(lifting, "lifting")
                d, m, values = doc["d"], doc["m"], doc["lifting"]
            else:
                rng = random.Random(0 if seed is None else seed)
                values = mixedsub.random_lifting(d, m, rng)
            S = mixedsub.regular_mixed_subdivision(d, m, values)
            cells = []
            for cell in S.cells:
                entry = cell.to_json()
                entry["vertices"] = [[str(x) for x in v] for v in mixedsub.cell_vertices(cell, d)]
                entry["volume"] = str(mixedsub.cell_volume(cell, d))
                cells.append(entry)
            data = {
                "d": d,
                "m": m,
                "lifting": [str(x) for x in S.lifting],
                "fine": S.fine,
                "cells": cells,
                "dual_graph": mixedsub.dual_graph(S).to_json(),
            }
            if d == 2:
                data["defects"] = [
                    {
                        "cell": item["index"],
                        "point": [str(x) for x in item["contact"]["point"]],
                        "sides": item["contact"]["sides"],
                    }
                    for item in mixedsub.qcartier_defect_cells(S)
                ]
            if S.fine:
                data["fiber_vertex"] = mixedsub.fiber_vertex(S).to_json()
            return {"success": True, "data": data}
        except ComputationError as e:
            return e.to_result()
        except Exception as e:
            return _unknown_error("mixedsub", e)
