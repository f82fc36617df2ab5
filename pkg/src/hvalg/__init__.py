"""Exact computations in the generalized Heisenberg-Virasoro algebra HV(Gamma)."""

from .exactnum import FieldElement, FieldSpec
from .gamma import Character, GammaHom, GammaSpec, ScalingUnit
from .algebra import HV, Basis, Box, Element, default_box
from .syntax import parse_element, format_element

__all__ = [
    "FieldSpec", "FieldElement", "GammaSpec", "Character", "GammaHom", "ScalingUnit",
    "HV", "Basis", "Box", "Element", "default_box", "parse_element", "format_element",
]
