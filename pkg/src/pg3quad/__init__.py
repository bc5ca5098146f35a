"""Hyperbolic quadrics of PG(3,q) and a checker for their secant-plane families."""
from .charverify import Certificate, PlaneFamily, forward_generate, verify_theorem
from .gf import FieldElement, FieldSpec, field_of_order, make_field
from .pg3 import PG3, ProjLine, ProjPlane, ProjPoint, geometry
from .quadric import QuadraticForm, classify, standard_hyperbolic

__all__ = [
    "Certificate", "FieldElement", "FieldSpec", "PG3", "PlaneFamily", "ProjLine", "ProjPlane",
    "ProjPoint", "QuadraticForm", "classify", "field_of_order", "forward_generate", "geometry",
    "make_field", "standard_hyperbolic", "verify_theorem",
]
