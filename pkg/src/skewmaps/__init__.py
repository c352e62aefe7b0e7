"""Skew-morphisms, regular Cayley maps and their census tools."""

from .perm import Permutation, compose, conjugate, format_cycles, inverse, parse
from .groups import PermGroup

__all__ = ["Permutation", "PermGroup", "compose", "conjugate", "format_cycles", "inverse", "parse"]
