import json
from fractions import Fraction

import pytest

from surfint.algebra import MultiPoly
from surfint.plane_topology import (TopologyError, branch_counts, build_graph,
                                    build_segregating_box, certify_segregating_box)

from oracles import BATTERY, compare_with_oracle, our_topology

VT = ("v", "t")


@pytest.mark.parametrize("name,expr,box", BATTERY, ids=[b[0] for b in BATTERY])
def test_matches_marching_squares(name, expr, box):
    ours, oracle = compare_with_oracle(expr, box)
    assert ours == oracle


# frozen from the oracle run above, so a regression shows up without numpy
@pytest.mark.parametrize("name,expected", [
    ("circle", (1, 1)), ("node", (1, 1)), ("cusp", (1, 0)), ("tacnode", (1, 0)),
    ("lemniscate", (1, 2)), ("trifolium", (1, 3)), ("two ovals", (2, 1)),
    ("two circles", (1, 3)), ("quadrifolium", (1, 4)), ("cone and cylinder", (1, 0)),
    ("cone and paraboloid", (1, 1)), ("paraboloid sextic", (1, 0)),
])
def test_frozen_counts(name, expected):
    expr, box = next((e, b) for n, e, b in BATTERY if n == name)
    g = our_topology(expr, box)
    assert (len(g.components()), g.cycle_rank()) == expected


def test_node_branches():
    g = our_topology("t^2 - v^2*(v + 1)", (-2, 2, -2, 2))
    (sing,) = [v for v in g.vertices if v.kind == "singular"]
    assert sing.box.point == (0, 0)
    assert branch_counts(sing) == (2, 2)
    assert g.degree(sing.id) == 4


def test_cusp_branches_from_the_right():
    g = our_topology("t^2 - v^3", (-1, 2, -2, 2))
    (sing,) = [v for v in g.vertices if v.kind == "singular"]
    assert branch_counts(sing) == (0, 2)


def test_segregating_boxes_certify():
    g = our_topology("(v^2 + t^2)^2 - 2*(v^2 - t^2)", (-2, 2, -2, 2))
    for v in g.critical_vertices():
        sb = build_segregating_box(g, v)
        assert certify_segregating_box(g, v, sb)
        assert sb.a < sb.b and sb.c < sb.d


def test_segregating_box_rejects_too_wide():
    g = our_topology("t^2 - v^2*(v + 1)", (-2, 2, -2, 2))
    (sing,) = [v for v in g.vertices if v.kind == "singular"]
    sb = build_segregating_box(g, sing)
    wide = type(sb)(Fraction(-3, 2), Fraction(1), sb.c, sb.d, sb.owner)
    assert not certify_segregating_box(g, sing, wide)


def test_vertical_line_edges():
    g = our_topology("t*(v - 1)", (-3, 3, -3, 3))
    assert any(e.vertical for e in g.edges)
    (sing,) = [v for v in g.vertices if v.kind == "singular"]
    assert sing.box.point == (1, 0)
    assert g.degree(sing.id) == 4


def test_rejects_v_only_factor_in_G():
    with pytest.raises(TopologyError):
        build_graph(MultiPoly.parse("v - 1", VT), None, (-1, 2, -1, 2))


def test_empty_curve():
    g = our_topology("v^2 + t^2 + 1", (-2, 2, -2, 2))
    assert g.edges == []
    assert g.cycle_rank() == 0


def test_curve_leaving_box():
    # a line crossing the box meets the boundary twice
    g = our_topology("t - v/2", (-1, 1, -1, 1))
    assert len(g.components()) == 1 and g.cycle_rank() == 0
    assert sorted(g.degree(v.id) for v in g.vertices)[:2] == [1, 1]


def test_vertices_lie_on_the_curve():
    g = our_topology("(v^2 + t^2)^2 - v*(v^2 - 3*t^2)", (-2, 2, -2, 2))
    from surfint.real_roots import point_sign
    for v in g.vertices:
        assert point_sign(v.box, g.G) == 0


def test_json_and_svg():
    g = our_topology("v^2 + t^2 - 1", (-2, 2, -2, 2))
    data = json.loads(json.dumps(g.to_json()))
    assert len(data["vertices"]) == len(g.vertices)
    assert g.to_svg().startswith("<svg")
