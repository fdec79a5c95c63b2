"""Command line front end.

    surfint --s1 S1.json --s2 S2.json --box A B C D --epsilon 1/20 --out DIR

Exit codes: 0 success, 1 usage error, 2 ``S1`` not projectable,
3 the surfaces share a component, 4 certification failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from .algebra import MultiPoly, PolynomialError, as_rational, format_poly
from .approx import (ApproximationError, Approximator, decimal_string, polyline_topology,
                     to_obj)
from .implicitize import (ImplicitizationError, NotProjectableError, RationalSurface,
                          RuledSurface, SharedComponentError, implicitize, plane_curve)
from .io import SurfaceFileError, dump_json, load_surface
from .plane_topology import TopologyError, build_graph
from .real_roots import RootIsolationError, VerticalComponentError
from .space_topology import PoleError, SelfIntersectionError, space_graph

STAGES = ("implicitize", "plane-topology", "space-topology", "approximate", "all")
FORMATS = ("json", "svg", "obj")

EXIT_OK, EXIT_USAGE, EXIT_NOT_PROJECTABLE, EXIT_SHARED, EXIT_CERT = range(5)

CERTIFICATION_ERRORS = (TopologyError, RootIsolationError, VerticalComponentError, PoleError,
                        SelfIntersectionError, ApproximationError, PolynomialError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def rational_arg(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="surfint", description="Topology-preserving approximation of the "
                "intersection curve of two rational surfaces.")
    p.add_argument("--s1", required=True, help="projectable or ruled surface (JSON), or implicit F")
    p.add_argument("--s2", required=True, help="parametric surface in (v, t) (JSON)")
    p.add_argument("--box", nargs=4, type=rational_arg, metavar=("A", "B", "C", "D"),
                   default=[Fraction(-2), Fraction(2), Fraction(-2), Fraction(2)],
                   help="parameter box [A,B]x[C,D] of S2")
    p.add_argument("--epsilon", type=rational_arg, default=Fraction(1, 20))
    p.add_argument("--stage", choices=STAGES, default="all")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--format", default="json,svg,obj",
                   help="comma separated subset of json,svg,obj")
    p.add_argument("--digits", type=int, default=12, help="significant digits in curve output")
    return p


def _box_json(box) -> dict:
    out = box.to_json()
    a, b = box.approx(Fraction(1, 10 ** 12))
    out["approx"] = [decimal_string(Fraction(a)), decimal_string(Fraction(b))]
    return out


def _point_json(p) -> List[str]:
    return [str(x) for x in p]


class Job:
    def __init__(self, args):
        self.args = args
        self.out = Path(args.out)
        self.formats = {f.strip() for f in args.format.split(",") if f.strip()}
        bad = self.formats - set(FORMATS)
        if bad:
            raise UsageError(f"unknown formats {sorted(bad)}")
        A, B, C, D = args.box
        if not (A < B and C < D):
            raise UsageError("box must satisfy A < B and C < D")
        if args.epsilon <= 0:
            raise UsageError("epsilon must be positive")
        self.box = (A, B, C, D)
        self.report: dict = {"box": [str(x) for x in self.box], "epsilon": str(args.epsilon)}
        self.timing: dict = {}

    def write(self, name: str, text: str) -> None:
        (self.out / name).write_text(text)

    def _tick(self, name, t0):
        self.timing[name] = round(time.perf_counter() - t0, 3)

    def run(self) -> int:
        a = self.args
        self.out.mkdir(parents=True, exist_ok=True)
        s1 = load_surface(a.s1)
        s2 = load_surface(a.s2)
        if not isinstance(s2, RationalSurface):
            raise UsageError("S2 must be a parametric surface")
        t0 = time.perf_counter()
        if isinstance(s1, MultiPoly):
            F = s1.integer_primitive()
            self.report["S1"] = "implicit"
        else:
            F = implicitize(s1)
            self.report["S1"] = "ruled" if isinstance(s1, RuledSurface) else "parametric"
        self._tick("implicitize", t0)
        self.write("F.txt", format_poly(F) + "\n")
        self.report["F"] = format_poly(F)
        if a.stage == "implicitize":
            return self.finish()

        t0 = time.perf_counter()
        pc = plane_curve(F, s2)
        self.write("G.txt", format_poly(pc.full) + "\n")
        self.report["plane_curve"] = {"full": format_poly(pc.full), "G": format_poly(pc.G),
                                      "V": format_poly(pc.V), "pole_factor": format_poly(pc.pole_factor)}
        graph = build_graph(pc.G, pc.V, self.box, s2.params)
        self._tick("plane_topology", t0)
        if "json" in self.formats:
            self.write("plane_graph.json", dump_json(graph.to_json()))
        if "svg" in self.formats:
            self.write("plane_graph.svg", graph.to_svg())
        self.report["plane_graph"] = {
            "vertices": len(graph.vertices), "edges": len(graph.edges),
            "components": len(graph.components()), "cycle_rank": graph.cycle_rank(),
            "critical": [dict(_box_json(v.box), kind=v.kind, degree=graph.degree(v.id))
                         for v in graph.critical_vertices()],
        }
        if a.stage == "plane-topology":
            return self.finish()

        t0 = time.perf_counter()
        sg, cp = space_graph(graph, s2)
        self._tick("space_topology", t0)
        if "json" in self.formats:
            self.write("space_graph.json", dump_json(sg.to_json()))
        self.report["character_points"] = {
            "special_component": format_poly(cp.special) if cp.special is not None else None,
            "singular": [_box_json(b) for b in cp.singular],
            "irregular": [_box_json(b) for b in cp.irregular],
            "self_intersections": [
                {"parameters": [_box_json(b) for b in grp],
                 "point": [c.to_json() for c in img]}
                for grp, img in zip(cp.selfint_groups, cp.selfint_images)],
        }
        self.report["space_graph"] = {
            "vertices": len(sg.vertices), "edges": len(sg.edges),
            "components": len(sg.components()), "cycle_rank": sg.cycle_rank(),
            "character_vertices": [
                {"point": _point_json(v.point), "exact": v.exact, "tags": sorted(v.tags),
                 "degree": sg.degree(v.id)}
                for v in sg.vertices if set(v.tags) - {"injected"}],
        }
        if a.stage == "space-topology":
            return self.finish()

        t0 = time.perf_counter()
        approx = Approximator(graph, sg, s2, a.epsilon)
        polylines = approx.run()
        self._tick("approximate", t0)
        comps, rank = polyline_topology(polylines)
        if "obj" in self.formats:
            self.write("curve.obj", to_obj(polylines, a.digits))
        if "json" in self.formats:
            self.write("curve.json", dump_json({"epsilon": str(a.epsilon),
                                                "polylines": [p.to_json(a.digits) for p in polylines]}))
        self.report["approximation"] = {
            "polylines": len(polylines), "points": sum(len(p.points) for p in polylines),
            "max_hausdorff_estimate": decimal_string(approx.max_estimate, 6),
            "components": comps, "cycle_rank": rank,
        }
        return self.finish()

    def finish(self) -> int:
        self.write("report.json", dump_json(self.report))
        # timing varies between runs, so it lives outside the deterministic artifacts
        self.write("timing.json", dump_json(self.timing))
        return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return Job(args).run()
    except UsageError as exc:
        print(f"surfint: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SurfaceFileError as exc:
        print(f"surfint: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotProjectableError as exc:
        print(f"surfint: {exc}", file=sys.stderr)
        return EXIT_NOT_PROJECTABLE
    except SharedComponentError as exc:
        print(f"surfint: {exc}", file=sys.stderr)
        return EXIT_SHARED
    except ImplicitizationError as exc:
        print(f"surfint: {exc}", file=sys.stderr)
        return EXIT_NOT_PROJECTABLE
    except CERTIFICATION_ERRORS as exc:
        print(f"surfint: certification failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CERT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
