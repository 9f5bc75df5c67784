"""
Plantillas de texto para el resumen humano de cada reporte.
"""

SUMMARY_TEMPLATES = {
    "walls": "{count} pared(es) contienen el vector de pesos",
    "segment": "{count} cruce(s) de pared en el segmento",
    "chamber": "misma cámara: {same_chamber}; b en la clausura de b2: {b_in_closure_of_b2}",
    "stability": "veredicto: {status}",
    "ample": "amplio: {ample}",
    "replace": "profundidad s = {s}; {classes} clase(s) de secciones; válido: {valid}",
    "mixedsub": "{cells} celda(s); fina: {fine}; {defects} defecto(s) Q-Cartier",
    "verify-paper": "{passed}/{total} identidades reproducidas",
}

ERROR_TEMPLATE = "error {error}: {message}"

MODE_SYMBOLIC = "e simbólico"
MODE_RATIONAL = "e = {eps}"


def _fields(subcommand: str, data: dict) -> dict:
    if subcommand == "walls":
        return {"count": len(data["walls"])}
    if subcommand == "segment":
        return {"count": len(data["crossings"])}
    if subcommand == "replace":
        return {"s": data["s"], "classes": len(data["classes"]), "valid": data["valid"]}
    if subcommand == "mixedsub":
        return {
            "cells": len(data["cells"]),
            "fine": data["fine"],
            "defects": len(data.get("defects", [])),
        }
    if subcommand == "verify-paper":
        return {"passed": data["passed"], "total": data["total"]}
    return data


def get_summary(subcommand: str, result: dict, eps=None) -> str:
    """Resumen de una línea para el reporte de un subcomando"""
    mode = MODE_SYMBOLIC if eps is None else MODE_RATIONAL.format(eps=eps)
    if not result.get("success"):
        return f"[{mode}] " + ERROR_TEMPLATE.format(
            error=result.get("error", "UNKNOWN_ERROR"),
            message=result.get("message", ""),
        )
    template = SUMMARY_TEMPLATES.get(subcommand, "{subcommand} completado")
    fields = dict(_fields(subcommand, result["data"]))
    fields.setdefault("subcommand", subcommand)
    return f"[{mode}] " + template.format(**fields)
