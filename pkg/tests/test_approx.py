import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from surfint.algebra import MultiPoly
from surfint.approx import (ApproximationError, Approximator, ColumnSolver, Polyline3D,
                            all_segments, decimal_string, hausdorff_estimate, polyline_topology,
                            to_obj)
from surfint.implicitize import implicitize, plane_curve
from surfint.plane_topology import build_graph
from surfint.space_topology import crossing_pairs, space_graph

from oracles import certify_params, load, pipeline

VT = ("v", "t")


def arc_sampler(m):
    return [(math.cos(a), math.sin(a), 0.0)
            for a in (math.pi / 2 * i / (m + 1) for i in range(1, m + 1))]


def test_sagitta_of_quarter_circle():
    est = hausdorff_estimate((1, 0, 0), (0, 1, 0), arc_sampler, 99)
    assert abs(float(est) - (1 - math.sqrt(2) / 2)) < 1e-12


def test_estimate_of_straight_piece_is_zero():
    line = lambda m: [(i / (m + 1), 2 * i / (m + 1), 0.0) for i in range(1, m + 1)]  # noqa: E731
    assert hausdorff_estimate((0, 0, 0), (1, 2, 0), line, 16) < 1e-14


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 200))
def test_estimate_never_exceeds_sagitta(m):
    est = float(hausdorff_estimate((1, 0, 0), (0, 1, 0), arc_sampler, m))
    assert 0 < est <= 1 - math.sqrt(2) / 2 + 1e-12


def test_column_solver_certifies_roots():
    G = MultiPoly.parse("v^2 + t^2 - 1", VT)
    cs = ColumnSolver(G, VT, -2, 2)
    lo, hi = cs.certified_roots(Fraction(1, 3), 2)[1]
    f = lambda t: Fraction(1, 9) + t * t - 1  # noqa: E731
    assert lo < hi and f(lo) * f(hi) < 0
    assert hi - lo < Fraction(1, 2 ** 40)


def test_column_solver_snaps_rational_roots():
    G = MultiPoly.parse("t^2 - v", VT)
    assert cs_roots(G, Fraction(1, 4)) == [(Fraction(-1, 2),) * 2, (Fraction(1, 2),) * 2]


def cs_roots(G, v):
    return ColumnSolver(G, VT, -2, 2).certified_roots(v, 2)


def test_column_solver_wrong_count_raises():
    G = MultiPoly.parse("t^2 - v", VT)
    with pytest.raises(ApproximationError):
        ColumnSolver(G, VT, -2, 2).certified_roots(Fraction(-1), 2)


def test_decimal_string():
    assert decimal_string(Fraction(1, 3), 5) == "0.33333"
    assert decimal_string(Fraction(-5, 2)) == "-2.5"
    assert decimal_string(Fraction(0)) == "0"


def run(name, eps):
    F, pc, graph, sg, cp, S2 = pipeline(name)
    ap = Approximator(graph, sg, S2, eps)
    return ap, ap.run(), graph, sg


@pytest.mark.parametrize("name", ["cone-cylinder", "cone-paraboloid"])
def test_approximation_properties(name):
    eps = Fraction(1, 20)
    ap, pls, graph, sg = run(name, eps)
    assert all(e < eps for ch in ap.chains for e in ch.est)
    assert ap.max_estimate < eps
    assert polyline_topology(pls) == (len(sg.components()), sg.cycle_rank())
    assert crossing_pairs(all_segments(pls)) == []
    assert certify_params(pls, graph, sg) == 0
    points = {p for pl in pls for p in pl.points}
    for v in sg.vertices:
        if set(v.tags) - {"injected"}:
            assert v.point in points


def test_planes_give_one_segment():
    S1, S2 = load("plane_s1"), load("plane_s2")
    pc = plane_curve(implicitize(S1), S2)
    graph = build_graph(pc.G, pc.V, (-2, 2, -2, 2), S2.params)
    sg, _ = space_graph(graph, S2)
    pls = Approximator(graph, sg, S2, Fraction(1, 10)).run()
    assert len(pls) == 1 and len(pls[0].points) == 2


def test_circle_sampling_density():
    # the unit circle z = 0 on the sphere: a closed polyline
    S2 = load("sphere_s2")
    pc = plane_curve(MultiPoly.parse("z", ("x", "y", "z")), S2)
    graph = build_graph(pc.G, pc.V, (-2, 2, -2, 2), S2.params)
    sg, _ = space_graph(graph, S2)
    coarse = Approximator(graph, sg, S2, Fraction(1, 10)).run()
    fine = Approximator(graph, sg, S2, Fraction(1, 100)).run()
    n = lambda pls: sum(len(p.points) for p in pls)  # noqa: E731
    assert n(fine) > n(coarse)
    for pls in (coarse, fine):
        assert polyline_topology(pls) == (1, 1)
        for pl in pls:
            for p in pl.points:
                assert p[0] ** 2 + p[1] ** 2 == 1 or abs(float(p[0] ** 2 + p[1] ** 2) - 1) < 1e-12


def test_merge_keeps_character_ends():
    ap, pls, graph, sg = run("cone-cylinder", Fraction(1, 20))
    ends = {v for pl in pls for v in pl.ends}
    for v in ends:
        assert set(sg.vertices[v].tags) - {"injected", "fused"}
    assert len(pls) <= len(sg.edges)


def test_obj_output():
    pl = Polyline3D([(0, 0, 0), (Fraction(1, 3), 1, 0), (1, 1, 1)], [{}, {}, {}], [0], (0, 1))
    text = to_obj([pl], 6)
    lines = text.splitlines()
    assert lines[1] == "v 0.333333 1 0"
    assert lines[-1] == "l 1 2 3"


def test_polyline_topology_of_loop():
    sq = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 0, 0)]
    pl = Polyline3D(sq, [{}] * 4, [0], (0, 0))
    assert pl.closed
    assert polyline_topology([pl]) == (1, 1)


def test_rejects_nonpositive_epsilon():
    F, pc, graph, sg, cp, S2 = pipeline("cone-cylinder")
    with pytest.raises(ValueError):
        Approximator(graph, sg, S2, 0)
