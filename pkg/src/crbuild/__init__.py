"""Spherical buildings over small finite fields: projections, opposition,
convex chamber subcomplexes and a complete-reducibility / centre classifier."""

from .coxeter import CoxeterDiagram, WeylElement, WeylGroup, build_weyl, parse_diagram
from .building import Building, Simplex, assemble
from .convexity import ConvexChamberSubcomplex, convex_hull, fixed_subcomplex, interval, is_convex
from .crengine import Verdict, build_opposite, certify_cr, classify
from .geometries import build_geometry

__all__ = [
    "CoxeterDiagram", "WeylElement", "WeylGroup", "build_weyl", "parse_diagram",
    "Building", "Simplex", "assemble",
    "ConvexChamberSubcomplex", "convex_hull", "fixed_subcomplex", "interval", "is_convex",
    "Verdict", "build_opposite", "certify_cr", "classify",
    "build_geometry",
]
