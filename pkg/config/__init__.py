"""Módulo de configuración."""
