"""Cálculo exacto en Q(e) del cruce de paredes t -> nt."""
__version__ = "1.0.0"
