#!/usr/bin/env python3
"""
Cruce de paredes t -> nt para arreglos de hiperplanos estables
Interfaz de línea de comandos

Uso: python main.py <subcomando> [opciones]
"""

import argparse
import sys

from config.settings import EXIT_INPUT_ERROR
from src.errors import ComputationError
from src.exactnum import as_rat
from src.logger import setup_logging
from src.runner import RunConfig, run


def _rational(text: str):
    try:
        return as_rat(text)
    except ComputationError as e:
        raise argparse.ArgumentTypeError(e.message)


def build_parser() -> argparse.ArgumentParser:
    """Parser con un subparser por subcomando"""
    parser = argparse.ArgumentParser(
        prog="main.py",
        description="Cálculo exacto en Q(e) del cruce de paredes t -> nt",
    )
    parser.add_argument("--eps", type=_rational, default=None,
                        help="valor racional de e (modo racional); por defecto e es simbólico")
    parser.add_argument("--output", default=None, help="escribe el reporte JSON en este archivo")
    parser.add_argument("--seed", type=int, default=None, help="semilla para suites aleatorias")

    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("walls", help="paredes que contienen un vector de pesos")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--weights", default="t", help="t | nt | archivo de pesos")

    p = sub.add_parser("segment", help="paredes cruzadas por un segmento")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--from", dest="start", default="t", help="t | nt | archivo de pesos")
    p.add_argument("--to", dest="end", default="nt", help="t | nt | archivo de pesos")

    p = sub.add_parser("chamber", help="vectores de signo y predicados de cámara")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--b", required=True, help="t | nt | archivo de pesos")
    p.add_argument("--b2", required=True, help="t | nt | archivo de pesos")

    p = sub.add_parser("stability", help="estabilidad de (P^d, bH)")
    p.add_argument("--weights", default="t", help="t | nt | archivo de pesos")
    p.add_argument("source", help="e_config | archivo de arreglo")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--n", type=int, default=None)

    p = sub.add_parser("ample", help="criterio de Kleiman por curvas de prueba")
    p.add_argument("--model", choices=("blowup", "pairing"), default="blowup")
    p.add_argument("surface", nargs="?", default=None, help="archivo de superficie (--model pairing)")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--n", type=int, default=None)

    p = sub.add_parser("replace", help="reemplazo estable de una familia de jets")
    p.add_argument("family", help="archivo de familia")

    p = sub.add_parser("mixedsub", help="subdivisión mixta coherente de m·Δ_d")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--lifting", default=None, help="archivo de levantamiento")
    group.add_argument("--random", dest="random_seed", type=int, default=None,
                       help="levantamiento aleatorio con esta semilla")

    sub.add_parser("verify-paper", help="reproduce todas las identidades exactas")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {
        "subcommand": args.subcommand,
        "eps": args.eps,
        "output": args.output,
    }
    for field in ("d", "n", "m", "weights", "source", "start", "end", "b", "b2",
                  "model", "surface", "family", "lifting"):
        if hasattr(args, field):
            values[field] = getattr(args, field)
    seed = getattr(args, "random_seed", None)
    if seed is None:
        seed = args.seed
    if seed is not None:
        values["seed"] = seed
    return RunConfig(**values)


def main(argv=None) -> int:
    """Función principal"""
    setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = config_from_args(args)
    except ComputationError as e:
        print(f"❌ Error: {e.message}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
