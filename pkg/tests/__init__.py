"""Módulo de tests."""
