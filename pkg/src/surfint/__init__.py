"""Exact intersection curves of rational parametric surfaces.

The pipeline: implicitize the projectable surface ``S1``; substitute ``S2``
to get a plane curve ``G(v, t) = 0``; build its topology graph; refine and
lift it to a space graph; sample it into polylines within ``epsilon``.
"""

from .algebra import MultiPoly, RationalFunction, format_poly, parse_poly, resultant
from .approx import Polyline3D, approximate, hausdorff_estimate, polyline_topology
from .implicitize import (RationalSurface, RuledSurface, implicitize, plane_curve,
                          reparametrize_ruled)
from .plane_topology import TopologyGraph, build_graph
from .real_roots import IsolatingBox, IsolatingInterval, isolate_triangular, isolate_univariate
from .space_topology import SpaceGraph, space_graph

__all__ = [
    "MultiPoly", "RationalFunction", "format_poly", "parse_poly", "resultant",
    "RationalSurface", "RuledSurface", "implicitize", "plane_curve", "reparametrize_ruled",
    "IsolatingInterval", "IsolatingBox", "isolate_univariate", "isolate_triangular",
    "TopologyGraph", "build_graph", "SpaceGraph", "space_graph",
    "Polyline3D", "approximate", "hausdorff_estimate", "polyline_topology",
]

__version__ = "0.1.0"
