"""Exact workbench for finite Lie conformal algebras."""

from __future__ import annotations

from .exactpoly import Poly, RatFn
from .lca import LcaPresentation, bracket, builtin, check_jacobi, check_skew

__version__ = "0.1.0"

__all__ = ["Poly", "RatFn", "LcaPresentation", "bracket", "builtin", "check_jacobi", "check_skew"]
