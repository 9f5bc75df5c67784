"""
Errores del cálculo exacto.

Cada excepción lleva un `code` estable en mayúsculas; la capa de herramientas
(src/tools.py) lo devuelve tal cual en el diccionario de resultado.
"""


class ComputationError(Exception):
    """Error base de la librería."""

    code = "COMPUTATION_ERROR"

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.details = details

    def to_result(self) -> dict:
        """Convierte el error al formato de resultado de las herramientas"""
        result = {
            "success": False,
            "error": self.code,
            "message": self.message,
        }
        if self.details:
            result["details"] = {k: str(v) for k, v in self.details.items()}
        return result


class DivisionByZero(ComputationError, ZeroDivisionError):
    code = "DIVISION_BY_ZERO"


class PoleAtPoint(ComputationError):
    code = "POLE_AT_POINT"


class DegreeGuard(ComputationError):
    code = "DEGREE_GUARD"


class ParseError(ComputationError, ValueError):
    code = "PARSE_ERROR"


class BadParameters(ComputationError, ValueError):
    code = "BAD_PARAMETERS"


class DimensionMismatch(ComputationError, ValueError):
    code = "DIMENSION_MISMATCH"


class SizeGuard(ComputationError):
    code = "SIZE_GUARD"


class PreconditionViolated(ComputationError):
    code = "PRECONDITION_VIOLATED"


class NotInNormalForm(ComputationError):
    code = "NOT_IN_NORMAL_FORM"


class InsufficientTruncation(ComputationError):
    code = "INSUFFICIENT_TRUNCATION"


class IndistinguishableAtTruncation(ComputationError):
    code = "INDISTINGUISHABLE_AT_TRUNCATION"


class NotFine(ComputationError):
    code = "NOT_FINE"


class WrongDimension(ComputationError):
    code = "WRONG_DIMENSION"


class InvariantBreach(ComputationError):
    code = "INVARIANT_BREACH"


class InputError(ComputationError, ValueError):
    """Documento de entrada mal formado (JSON, esquema o valores)."""

    code = "INPUT_ERROR"
