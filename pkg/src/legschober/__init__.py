"""Decategorified Legendrian fronts, pure sheaves and mutation braiding."""

__version__ = "0.1.0"
