"""Space topology graph of the intersection curve.

The plane graph of ``G(v, t) = 0`` is refined with the parameters of
irregular points of ``S2`` and of self-intersections of the space curve,
then lifted through ``S2``.  Lifted vertices with identical images are fused.
Straight edges that would touch away from shared endpoints are separated by
subdividing the underlying plane edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (MultiPoly, RationalFunction, as_rational, compose, exact_divide, gcd,
                      gcd_list, remove_factor, resultant, squarefree_part)
from .implicitize import RationalSurface
from .intervals import Interval, interval_eval
from .plane_topology import (PlaneEdge, PlaneVertex, TopologyError, TopologyGraph, _between,
                             _exact_box, graph_components)
from .real_roots import (AlgebraicField, IsolatingBox, IsolatingInterval,
                         RootIsolationError, _coeffs_in_t, _roots_in_closed, compare, compare_t,
                         isolate_column, isolate_int, isolate_univariate, point_sign,
                         same_point)


class SelfIntersectionError(RuntimeError):
    """The self-intersection system is not zero-dimensional."""


class PoleError(RuntimeError):
    """A curve parameter lies on a pole of ``S2``."""


# ---------------------------------------------------------------------------
# exact images of algebraic parameter points

def _column_poly(box: IsolatingBox) -> MultiPoly:
    """Monic-in-t column polynomial of ``box`` as a polynomial in (v, t)."""
    vv, tv = box.vars
    if box.t_exact:
        return MultiPoly.var(tv, box.vars) - box.t_lo
    cs = box.column.coeffs
    n = len(cs) - 1
    terms = {}
    for i, c in enumerate(cs):
        dv = len(c) - 1
        for j, a in enumerate(c):
            if a:
                terms[(dv - j, n - i)] = a
    return MultiPoly(terms, box.vars)


def value_polynomial(box: IsolatingBox, f: RationalFunction) -> MultiPoly:
    """Squarefree univariate ``m(w)`` vanishing at ``f(alpha, beta)``."""
    vv, tv = box.vars
    P = box.vars + ("w",)
    w = MultiPoly.var("w", P)
    H = f.denom.with_vars(P) * w - f.numer.with_vars(P)
    Q = _column_poly(box).with_vars(P)
    R = resultant(Q, H, tv)
    box.v.minimize()
    h = box.v.polynomial(vv).with_vars(P)
    if box.v.is_exact:
        h = MultiPoly.var(vv, P) - box.v.lo
    m = resultant(h, R, vv)
    if m.is_zero():
        raise PoleError("value polynomial vanishes identically (pole or indeterminacy)")
    return squarefree_part(m.with_vars(("w",)))


def _rf_interval(f: RationalFunction, box: IsolatingBox) -> Interval:
    vals = {box.vars[0]: box.v.interval, box.vars[1]: box.t_interval}
    n = interval_eval(f.numer, vals)
    d = interval_eval(f.denom, vals)
    return n / d


def check_pole(box: IsolatingBox, S: RationalSurface) -> None:
    for c in S.coords:
        if not c.denom.is_constant() and point_sign(box, c.denom) == 0:
            raise PoleError(f"parameter pole on intersection curve at {box}")


def image_coordinate(box: IsolatingBox, f: RationalFunction) -> IsolatingInterval:
    """Exact real algebraic value of ``f`` at the point isolated by ``box``."""
    if box.is_exact:
        return IsolatingInterval.exact(f.evaluate(dict(zip(box.vars, box.point))))
    if box.t_exact and f.numer.degree(box.vars[0]) <= 0 and f.denom.degree(box.vars[0]) <= 0:
        return IsolatingInterval.exact(f.evaluate({box.vars[1]: box.t_lo}))
    m = value_polynomial(box, f)
    coeffs = _int_coeffs(m)
    if len(coeffs) == 2:
        return IsolatingInterval.exact(Fraction(-coeffs[1], coeffs[0]))
    for _ in range(400):
        iv = _rf_interval(f, box) if not _denominator_straddles(f, box) else None
        if iv is not None:
            n = _roots_in_closed(coeffs, iv.lo, iv.hi)
            if n == 1:
                roots = isolate_int(coeffs, iv.lo, iv.hi)
                if len(roots) == 1:
                    return roots[0]
            if n == 0:
                raise RootIsolationError("image value lost during refinement")
        box.refine(max(box.v.width, box.t_hi - box.t_lo) / 4 or Fraction(1, 2 ** 60))
    raise RootIsolationError("could not isolate an image coordinate")


def _denominator_straddles(f: RationalFunction, box: IsolatingBox) -> bool:
    vals = {box.vars[0]: box.v.interval, box.vars[1]: box.t_interval}
    return interval_eval(f.denom, vals).contains_zero()


def _int_coeffs(m: MultiPoly) -> List[int]:
    dense, _ = m._to_int(("w",))
    from .real_roots import _prim
    return _prim(list(dense))


def image_point(box: IsolatingBox, S: RationalSurface) -> Tuple[IsolatingInterval, ...]:
    check_pole(box, S)
    return tuple(image_coordinate(box, c) for c in S.coords)


def same_image(p: Sequence[IsolatingInterval], q: Sequence[IsolatingInterval]) -> bool:
    return all(compare(a, b) == 0 for a, b in zip(p, q))


def approx_point(box: IsolatingBox, S: RationalSurface, width=Fraction(1, 2 ** 50)) -> Tuple[Fraction, ...]:
    """Rational point near the image: exact when the parameters are rational."""
    if box.is_exact:
        return S.evaluate(*box.point)
    box.refine(width)
    a = box.v.lo if box.v.is_exact else box.v.mid
    b = box.t_lo if box.t_exact else (box.t_lo + box.t_hi) / 2
    return S.evaluate(a, b)


# ---------------------------------------------------------------------------
# irregular parameters

@dataclass
class CharacterPoints:
    special: Optional[MultiPoly] = None
    irregular: List[IsolatingBox] = field(default_factory=list)
    selfint_groups: List[List[IsolatingBox]] = field(default_factory=list)
    selfint_images: List[Tuple[IsolatingInterval, ...]] = field(default_factory=list)
    singular: List[IsolatingBox] = field(default_factory=list)

    def all_boxes(self) -> List[IsolatingBox]:
        out = list(self.irregular)
        for g in self.selfint_groups:
            out.extend(g)
        return out


def cross_numerators(S: RationalSurface) -> List[MultiPoly]:
    """Numerators of ``S_v x S_t``."""
    Sv = S.partials(0)
    St = S.partials(1)
    comps = [Sv[1] * St[2] - Sv[2] * St[1],
             Sv[2] * St[0] - Sv[0] * St[2],
             Sv[0] * St[1] - Sv[1] * St[0]]
    return [c.numer.with_vars(S.params) for c in comps]


def _vertical_roots(V: MultiPoly, box, vars) -> List[IsolatingInterval]:
    if V.is_constant():
        return []
    A, B, _, _ = box
    return isolate_univariate(V.with_vars((vars[0],)), (A, B))


def _common_points_on_column(alpha: IsolatingInterval, polys: Sequence[MultiPoly],
                             C, D, vars) -> Optional[List[IsolatingBox]]:
    """Points ``(alpha, t)``, ``t`` in ``[C, D]``, where every poly vanishes;
    ``None`` if all of them vanish identically on the column."""
    field = AlgebraicField(alpha)
    nonzero = []
    for p in polys:
        cs = _coeffs_in_t(p, *vars)
        if any(not field.is_zero(c) for c in cs):
            nonzero.append(p)
    if not nonzero:
        return None
    pivot = min(nonzero, key=lambda p: (p.degree(vars[1]), len(p)))
    out = []
    for bx in isolate_column(pivot, alpha, C, D, vars):
        if all(point_sign(bx, q) == 0 for q in nonzero if q is not pivot):
            out.append(bx)
    return out


def irregular_parameters(S2: RationalSurface, G: MultiPoly, V: Optional[MultiPoly], box) -> CharacterPoints:
    """Parameters in ``box`` where ``S2_v`` and ``S2_t`` are parallel on the curve."""
    A, B, C, D = (as_rational(x) for x in box)
    vars = S2.params
    G = G.with_vars(vars)
    V = (V if V is not None else MultiPoly.const(1, vars)).with_vars(vars)
    N = cross_numerators(S2)
    cp = CharacterPoints()
    full = G * V
    special = gcd_list([full] + N)
    if not special.is_constant():
        cp.special = special.with_vars(vars)
        G = _strip(G, special)
        V = _strip(V, special)
    Nn = [n for n in N if not n.is_zero()]
    if not Nn:
        # S2 is degenerate everywhere; the whole curve is special
        cp.special = full
        return cp
    if G.degree(vars[1]) > 0:
        combos = [Nn[0]]
        if len(Nn) > 1:
            combos = [sum((k ** i) * n for i, n in enumerate(Nn)) for k in (2, 3, 5, 7)] + Nn
        R = None
        for Nc in combos:
            R = resultant(G, Nc, vars[1])
            if not R.is_zero():
                break
        if R is None or R.is_zero():
            raise SelfIntersectionError("irregular locus is not zero-dimensional")
        if not R.is_constant():
            for alpha in isolate_univariate(squarefree_part(R.with_vars((vars[0],))), (A, B)):
                for bx in isolate_column(G, alpha, C, D, vars):
                    if all(point_sign(bx, n) == 0 for n in Nn):
                        cp.irregular.append(bx)
    for gamma in _vertical_roots(V, (A, B, C, D), vars):
        pts = _common_points_on_column(gamma, Nn, C, D, vars)
        if pts is None:
            raise SelfIntersectionError("a vertical line consists of irregular points")
        cp.irregular.extend(pts)
    return cp


def _strip(p: MultiPoly, f: MultiPoly) -> MultiPoly:
    g = gcd(p, f)
    if g.is_constant():
        return p
    return exact_divide(p, g)


# ---------------------------------------------------------------------------
# self-intersections

def _eliminate(polys: List[MultiPoly], var: str) -> Optional[List[MultiPoly]]:
    """Eliminate ``var`` keeping a superset of the solutions; ``None`` if the
    system is inconsistent."""
    polys = [p for p in polys if not p.is_zero()]
    if any(p.is_constant() for p in polys):
        return None
    with_v = [p for p in polys if p.degree(var) > 0]
    out = [p for p in polys if p.degree(var) <= 0]
    if len(with_v) >= 2:
        pivot = min(with_v, key=lambda p: (p.degree(var), len(p)))
        for q in with_v:
            if q is pivot:
                continue
            r = resultant(pivot, q, var)
            if not r.is_zero():
                out.append(r)
    out = [p for p in out if not p.is_zero()]
    if any(p.is_constant() for p in out):
        return None
    return out


def _chart_equations(S2: RationalSurface, G: MultiPoly, chart: int) -> List[MultiPoly]:
    v, t = S2.params
    P = (v, t, "_h", "_k")
    V_, T_ = MultiPoly.var(v, P), MultiPoly.var(t, P)
    h, k = MultiPoly.var("_h", P), MultiPoly.var("_k", P)
    if chart == 1:
        sub = {v: V_ + h, t: T_ + k * h}
    else:
        sub = {v: V_, t: T_ + h}
    eqs = []
    for c in S2.coords:
        p, q = c.numer.with_vars(P), c.denom.with_vars(P)
        ps, qs = compose(p, sub, P), compose(q, sub, P)
        E = ps * q - p * qs
        if E.is_zero():
            continue
        E, _ = remove_factor(E, h)
        eqs.append(E)
    Gp = G.with_vars(P)
    Gd, _ = remove_factor(compose(Gp, sub, P) - Gp, h)
    eqs.append(Gd)
    return eqs


def _pole_factors(S2: RationalSurface, chart: int) -> List[MultiPoly]:
    """Denominators at both parameter points of a chart; real curve points
    are never poles, so these factors can be divided out."""
    v, t = S2.params
    P = (v, t, "_h", "_k")
    h, k = MultiPoly.var("_h", P), MultiPoly.var("_k", P)
    shift = {v: MultiPoly.var(v, P) + h, t: MultiPoly.var(t, P) + (k * h if chart == 1 else h)}
    out = []
    for c in S2.coords:
        q = c.denom.with_vars(P)
        if not q.is_constant():
            out += [q, compose(q, shift, P)]
    return out


def _clean(eqs: Optional[List[MultiPoly]], poles: List[MultiPoly]) -> Optional[List[MultiPoly]]:
    """Drop the factor ``h`` (the two points differ) and pole factors."""
    if eqs is None:
        return None
    out = []
    for e in eqs:
        vars = e.vars
        if "_h" in vars:
            e, _ = remove_factor(e, MultiPoly.var("_h", vars))
        for q in poles:
            if set(q.free_vars()) <= set(e.free_vars()):
                e = _strip_all(e, q.with_vars(vars))
        out.append(e)
    if any(e.is_constant() and not e.is_zero() for e in out):
        return None
    return out


def _strip_all(p: MultiPoly, f: MultiPoly) -> MultiPoly:
    while True:
        g = gcd(p, f)
        if g.is_constant():
            return p
        p = exact_divide(p, g)


def _candidates_from_chart(S2, G, V, box, chart) -> List[IsolatingBox]:
    A, B, C, D = box
    vars = S2.params
    poles = _pole_factors(S2, chart)
    eqs = _clean(_chart_equations(S2, G * V, chart), poles)
    if eqs is None:
        return []
    if chart == 1:
        eqs = _clean(_eliminate(eqs, "_k"), poles)
        if eqs is None:
            return []
    eqs = _clean(_eliminate(eqs, "_h"), poles)
    if eqs is None:
        return []
    eqs = [e.with_vars(vars) for e in eqs]
    if not eqs:
        raise SelfIntersectionError("non-zero-dimensional self-intersection locus")
    out: List[IsolatingBox] = []
    if G.degree(vars[1]) > 0:
        Rs = [resultant(G, e, vars[1]) for e in eqs]
        Rs = [r for r in Rs if not r.is_zero()]
        if not Rs:
            raise SelfIntersectionError("non-zero-dimensional self-intersection locus")
        R = gcd_list(Rs)
        if not R.is_constant():
            for alpha in isolate_univariate(squarefree_part(R.with_vars((vars[0],))), (A, B)):
                for bx in isolate_column(G, alpha, C, D, vars):
                    if all(point_sign(bx, e) == 0 for e in eqs):
                        out.append(bx)
    for gamma in _vertical_roots(V, box, vars):
        pts = _common_points_on_column(gamma, eqs, C, D, vars)
        if pts is None:
            raise SelfIntersectionError("non-zero-dimensional self-intersection locus")
        out.extend(pts)
    return out


def _dedupe(boxes: List[IsolatingBox]) -> List[IsolatingBox]:
    out: List[IsolatingBox] = []
    for b in boxes:
        if not any(same_point(b, c) for c in out):
            out.append(b)
    return out


def group_by_image(boxes: List[IsolatingBox], S2: RationalSurface):
    """Group parameter points with identical images under ``S2``."""
    cache = ImageCache(S2)
    groups: List[List[IsolatingBox]] = []
    for b in boxes:
        for g in groups:
            if cache.same(g[0], b):
                g.append(b)
                break
        else:
            groups.append([b])
    return [(g, cache.exact(g[0]) if len(g) > 1 else None) for g in groups]


def self_intersections(S2: RationalSurface, G: MultiPoly, V: Optional[MultiPoly], box,
                       special: Optional[MultiPoly] = None):
    """Groups of at least two parameter points in ``box`` on ``G * V = 0``
    with a common image.  Returns ``[(boxes, image), ...]``."""
    A, B, C, D = (as_rational(x) for x in box)
    vars = S2.params
    G = G.with_vars(vars)
    V = (V if V is not None else MultiPoly.const(1, vars)).with_vars(vars)
    if special is not None and not special.is_constant():
        G = _strip(G, special)
        V = _strip(V, special)
    cands: List[IsolatingBox] = []
    for chart in (1, 2):
        cands.extend(_candidates_from_chart(S2, G, V, (A, B, C, D), chart))
    cands = _dedupe(cands)
    return [(g, img) for g, img in group_by_image(cands, S2) if len(g) >= 2]


# ---------------------------------------------------------------------------
# plane graph refinement

def _column_position(graph: TopologyGraph, alpha: IsolatingInterval) -> Tuple[str, int]:
    """``('at', c)`` if ``alpha`` is the value of column ``c``, else
    ``('between', h)`` for the half slab ``(col h, col h+1)``."""
    cols = graph.columns
    lo, hi = 0, len(cols) - 1
    if compare(alpha, cols[0].v) < 0 or compare(alpha, cols[-1].v) > 0:
        raise TopologyError("point outside the box")
    while lo <= hi:
        mid = (lo + hi) // 2
        c = compare(alpha, cols[mid].v)
        if c == 0:
            return "at", mid
        if c < 0:
            hi = mid - 1
        else:
            lo = mid + 1
    return "between", hi


def _vertex_v_cmp(graph, vid, alpha) -> int:
    return compare(graph.vertices[vid].box.v, alpha)


def insert_point(graph: TopologyGraph, P: IsolatingBox, kind: str = "injected",
                 tag: Optional[str] = None) -> int:
    """Insert a curve point as a vertex, splitting the edge it lies on.
    Idempotent: an existing vertex at the same point is returned."""
    A, B, C, D = graph.box
    vars = graph.vars
    where, idx = _column_position(graph, P.v)
    if where == "at":
        col = graph.columns[idx]
        for vid in col.vertices:
            if same_point(graph.vertices[vid].box, P):
                _tag(graph.vertices[vid], tag)
                return vid
        if not col.vertical:
            raise TopologyError(f"point {P} is not on the curve")
        for ei, e in enumerate(graph.edges):
            if e.vertical and e.column == idx:
                pa, pb = graph.vertices[e.a].box, graph.vertices[e.b].box
                if compare_t(pa, P) < 0 < compare_t(pb, P):
                    return _split(graph, ei, P, kind, tag)
                if compare_t(pa, P) > 0 > compare_t(pb, P):
                    return _split(graph, ei, P, kind, tag)
        raise TopologyError(f"point {P} not found on vertical line")
    h = idx
    boxes = isolate_column(graph.G, P.v, C, D, vars)
    j = next((i for i, b in enumerate(boxes) if same_point(b, P)), None)
    if j is None:
        raise TopologyError(f"point {P} is not on the curve")
    Q = boxes[j]
    for ei, e in enumerate(graph.edges):
        if e.vertical or e.half_slab != h or e.branch != j:
            continue
        ca = _vertex_v_cmp(graph, e.a, Q.v)
        cb = _vertex_v_cmp(graph, e.b, Q.v)
        if ca == 0:
            _tag(graph.vertices[e.a], tag)
            return e.a
        if cb == 0:
            _tag(graph.vertices[e.b], tag)
            return e.b
        if ca < 0 < cb:
            return _split(graph, ei, Q, kind, tag)
    raise TopologyError(f"no edge found for point {P}")


def _tag(vertex: PlaneVertex, tag: Optional[str]) -> None:
    if tag and tag not in vertex.tags:
        vertex.tags.append(tag)


def _split(graph: TopologyGraph, ei: int, box: IsolatingBox, kind: str, tag: Optional[str]) -> int:
    e = graph.edges[ei]
    vid = len(graph.vertices)
    vert = PlaneVertex(vid, box, kind, None)
    _tag(vert, tag)
    graph.vertices.append(vert)
    graph.edges[ei] = PlaneEdge(e.a, vid, e.vertical, e.half_slab, e.branch, e.column)
    graph.edges.insert(ei + 1, PlaneEdge(vid, e.b, e.vertical, e.half_slab, e.branch, e.column))
    if e.vertical:
        col = graph.columns[e.column]
        pos = col.vertices.index(e.a) + 1
        col.vertices.insert(pos, vid)
        vert.column = e.column
    return vid


def refine_graph(graph: TopologyGraph, points: CharacterPoints) -> TopologyGraph:
    """Insert irregular and self-intersection parameters as vertices."""
    for bx in points.irregular:
        insert_point(graph, bx, tag="irregular")
    for gi, group in enumerate(points.selfint_groups):
        for bx in group:
            insert_point(graph, bx, tag=f"self-intersection:{gi}")
    return graph


def edge_midpoint(graph: TopologyGraph, e: PlaneEdge) -> IsolatingBox:
    """A curve point strictly inside a plane edge, with a rational coordinate."""
    A, B, C, D = graph.box
    pa, pb = graph.vertices[e.a].box, graph.vertices[e.b].box
    if e.vertical:
        while not pa.t_hi < pb.t_lo and not pb.t_hi < pa.t_lo:
            pa.bisect_t()
            pb.bisect_t()
        lo, hi = (pa.t_hi, pb.t_lo) if pa.t_hi < pb.t_lo else (pb.t_hi, pa.t_lo)
        return _exact_box(pa.v, _between(lo, hi), graph.vars)
    va, vb = pa.v, pb.v
    while not va.hi < vb.lo:
        va.bisect()
        vb.bisect()
    x = _between(va.hi, vb.lo)
    boxes = isolate_column(graph.G, IsolatingInterval.exact(x), C, D, graph.vars)
    return boxes[e.branch]


def subdivide_edge(graph: TopologyGraph, ei: int) -> int:
    e = graph.edges[ei]
    return _split(graph, ei, edge_midpoint(graph, e), "injected", None)


# ---------------------------------------------------------------------------
# lifting

@dataclass
class SpaceVertex:
    id: int
    coords: Tuple[Interval, ...]
    point: Tuple[Fraction, Fraction, Fraction]
    preimages: List[int]
    tags: List[str] = field(default_factory=list)
    exact: bool = False

    def to_json(self) -> dict:
        out = {"id": self.id, "preimages": self.preimages, "tags": sorted(self.tags),
               "exact": self.exact, "point": [str(x) for x in self.point]}
        if not self.exact:
            out["interval"] = [[str(c.lo), str(c.hi)] for c in self.coords]
        out["approx"] = [float(x) for x in self.point]
        return out


@dataclass
class SpaceEdge:
    a: int
    b: int
    plane_edge: Tuple[int, int]
    plane_index: int = -1


@dataclass
class SpaceGraph:
    vertices: List[SpaceVertex] = field(default_factory=list)
    edges: List[SpaceEdge] = field(default_factory=list)
    plane_to_space: Dict[int, int] = field(default_factory=dict)
    contracted: List[Tuple[int, int]] = field(default_factory=list)

    def components(self) -> List[List[int]]:
        return graph_components([v.id for v in self.vertices], [(e.a, e.b) for e in self.edges])

    def cycle_rank(self) -> int:
        return len(self.edges) - len(self.vertices) + len(self.components())

    def degree(self, vid: int) -> int:
        return sum((e.a == vid) + (e.b == vid) for e in self.edges)

    def segments(self):
        return [(self.vertices[e.a].point, self.vertices[e.b].point) for e in self.edges]

    def to_json(self) -> dict:
        return {"vertices": [v.to_json() for v in self.vertices],
                "edges": [{"a": e.a, "b": e.b, "plane_edge": e.plane_index} for e in self.edges],
                "components": len(self.components()),
                "cycle_rank": self.cycle_rank()}


def _overlap(p: Sequence[Interval], q: Sequence[Interval]) -> bool:
    return all(a.lo <= b.hi and b.lo <= a.hi for a, b in zip(p, q))


def _vertex_tags(v: PlaneVertex) -> List[str]:
    tags = [] if v.kind == "regular" else [v.kind]
    for t in v.tags:
        tags.append(t.split(":")[0])
    return tags


class ImageCache:
    """Interval and exact images of parameter boxes under ``S``.

    Interval images are cheap and used to rule out coincidences; exact
    images (value polynomials) are only computed when two intervals meet.
    """

    def __init__(self, S: RationalSurface, width=Fraction(1, 2 ** 40)):
        self.S = S
        self.width = width
        self._iv: Dict[int, Tuple[Interval, ...]] = {}
        self._exact: Dict[int, Tuple[IsolatingInterval, ...]] = {}
        self._keep: Dict[int, IsolatingBox] = {}

    def interval(self, box: IsolatingBox) -> Tuple[Interval, ...]:
        k = id(box)
        if k not in self._iv:
            self._keep[k] = box
            check_pole(box, self.S)
            if box.is_exact:
                self._iv[k] = tuple(Interval(c) for c in self.S.evaluate(*box.point))
            else:
                w = self.width
                for _ in range(200):
                    box.refine(w)
                    if not any(_denominator_straddles(c, box) for c in self.S.coords):
                        iv = tuple(_rf_interval(c, box) for c in self.S.coords)
                        if max(c.width for c in iv) <= self.width:
                            break
                    w /= 16
                self._iv[k] = iv
        return self._iv[k]

    def exact(self, box: IsolatingBox) -> Tuple[IsolatingInterval, ...]:
        k = id(box)
        if k not in self._exact:
            self._keep[k] = box
            self._exact[k] = image_point(box, self.S)
        return self._exact[k]

    def same(self, p: IsolatingBox, q: IsolatingBox) -> bool:
        if not _overlap(self.interval(p), self.interval(q)):
            return False
        return same_image(self.exact(p), self.exact(q))

    def point(self, box: IsolatingBox) -> Tuple[Fraction, ...]:
        """Rational representative: exact for rational parameters."""
        if box.is_exact:
            return self.S.evaluate(*box.point)
        ex = self._exact.get(id(box))
        if ex is not None and all(c.is_exact for c in ex):
            return tuple(c.lo for c in ex)
        return tuple(c.mid for c in self.interval(box))


def lift(graph: TopologyGraph, S2: RationalSurface, cache: Optional[ImageCache] = None) -> SpaceGraph:
    """Map the plane graph through ``S2``, fusing vertices with equal images."""
    cache = cache or ImageCache(S2)
    boxes = [v.box for v in graph.vertices]
    images = [cache.interval(b) for b in boxes]
    n = len(images)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    order = sorted(range(n), key=lambda i: images[i][0].lo)
    for ii, i in enumerate(order):
        for j in order[ii + 1:]:
            if images[j][0].lo > images[i][0].hi:
                break
            if find(i) != find(j) and cache.same(boxes[i], boxes[j]):
                ri, rj = find(i), find(j)
                parent[max(ri, rj)] = min(ri, rj)
    sg = SpaceGraph()
    root_to_space: Dict[int, int] = {}
    for i in range(n):
        r = find(i)
        if r not in root_to_space:
            sid = len(sg.vertices)
            root_to_space[r] = sid
            sg.vertices.append(SpaceVertex(sid, images[r], cache.point(boxes[r]), [],
                                           exact=boxes[r].is_exact))
        sid = root_to_space[r]
        sg.plane_to_space[i] = sid
        sg.vertices[sid].preimages.append(i)
        for t in _vertex_tags(graph.vertices[i]):
            if t not in sg.vertices[sid].tags:
                sg.vertices[sid].tags.append(t)
    for sv in sg.vertices:
        if len(sv.preimages) > 1 and "self-intersection" not in sv.tags:
            sv.tags.append("fused")
    for i, e in enumerate(graph.edges):
        a, b = sg.plane_to_space[e.a], sg.plane_to_space[e.b]
        sg.edges.append(SpaceEdge(a, b, (e.a, e.b), i))
    return sg


# ---------------------------------------------------------------------------
# exact segment predicates

def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1], p[2] - q[2])


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def orient3d(a, b, c, d) -> int:
    det = _dot(_sub(b, a), _cross(_sub(c, a), _sub(d, a)))
    return (det > 0) - (det < 0)


def _orient2d(a, b, c) -> int:
    det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (det > 0) - (det < 0)


def _on_segment2(a, b, p) -> bool:
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def _seg2_intersect(p1, p2, q1, q2) -> bool:
    d1, d2 = _orient2d(q1, q2, p1), _orient2d(q1, q2, p2)
    d3, d4 = _orient2d(p1, p2, q1), _orient2d(p1, p2, q2)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    return ((d1 == 0 and _on_segment2(q1, q2, p1)) or (d2 == 0 and _on_segment2(q1, q2, p2))
            or (d3 == 0 and _on_segment2(p1, p2, q1)) or (d4 == 0 and _on_segment2(p1, p2, q2)))


def _point_on_segment(p, a, b) -> bool:
    if a == b:
        return p == a
    ab, ap = _sub(b, a), _sub(p, a)
    return _cross(ab, ap) == (0, 0, 0) and 0 <= _dot(ab, ap) <= _dot(ab, ab)


def segments_intersect(p1, p2, q1, q2) -> bool:
    """Exact test whether two closed 3D segments share a point."""
    if orient3d(p1, p2, q1, q2) != 0:
        return False
    n = _cross(_sub(p2, p1), _sub(q1, p1))
    if n == (0, 0, 0):
        n = _cross(_sub(p2, p1), _sub(q2, p1))
    if n == (0, 0, 0):
        n = _cross(_sub(q2, q1), _sub(p1, q1))
    if n == (0, 0, 0):
        if p1 == p2:
            return _point_on_segment(p1, q1, q2)
        if q1 == q2:
            return _point_on_segment(q1, p1, p2)
        # all four points collinear: project on an axis where p spreads
        axis = max(range(3), key=lambda i: abs(p2[i] - p1[i]))
        key = lambda p: (p[axis], 0)  # noqa: E731
        return _seg2_intersect(key(p1), key(p2), key(q1), key(q2))
    drop = max(range(3), key=lambda i: abs(n[i]))
    keep = [i for i in range(3) if i != drop]
    pr = lambda p: (p[keep[0]], p[keep[1]])  # noqa: E731
    return _seg2_intersect(pr(p1), pr(p2), pr(q1), pr(q2))


def improper_contact(p1, p2, q1, q2) -> bool:
    """True if the segments meet anywhere other than at one shared endpoint."""
    shared = [x for x in (p1, p2) if x == q1 or x == q2]
    if not shared:
        return segments_intersect(p1, p2, q1, q2)
    if len(shared) == 2 or p1 == p2 or q1 == q2:
        return True
    s = shared[0]
    a = p2 if p1 == s else p1
    b = q2 if q1 == s else q1
    # they share s; any further contact means collinear overlap
    if _cross(_sub(a, s), _sub(b, s)) != (0, 0, 0):
        return False
    return _dot(_sub(a, s), _sub(b, s)) > 0


def crossing_pairs(segments: Sequence[Tuple[tuple, tuple]]) -> List[Tuple[int, int]]:
    """Index pairs of segments with improper contact (bounding-box filtered)."""
    boxes = []
    for i, (p, q) in enumerate(segments):
        lo = tuple(min(p[k], q[k]) for k in range(3))
        hi = tuple(max(p[k], q[k]) for k in range(3))
        boxes.append((lo, hi, i))
    boxes.sort(key=lambda b: b[0][0])
    out = []
    for ii, (lo1, hi1, i) in enumerate(boxes):
        for lo2, hi2, j in boxes[ii + 1:]:
            if lo2[0] > hi1[0]:
                break
            if lo2[1] > hi1[1] or lo1[1] > hi2[1] or lo2[2] > hi1[2] or lo1[2] > hi2[2]:
                continue
            p1, p2 = segments[i]
            q1, q2 = segments[j]
            if improper_contact(p1, p2, q1, q2):
                out.append((min(i, j), max(i, j)))
    return sorted(out)


# ---------------------------------------------------------------------------
# crossing resolution

MAX_ROUNDS = 40


def resolve_crossings(graph: TopologyGraph, S2: RationalSurface,
                      cache: Optional[ImageCache] = None) -> SpaceGraph:
    """Lift, then subdivide plane edges until the straight space edges meet
    only at shared endpoints; contracted edges are dropped."""
    cache = cache or ImageCache(S2)
    for _ in range(MAX_ROUNDS):
        sg = lift(graph, S2, cache)
        split: set = set()
        keep = []
        for ei, e in enumerate(sg.edges):
            if e.a != e.b:
                keep.append(ei)
                continue
            # both ends fused: contracted if the interior maps there too
            mid = edge_midpoint(graph, graph.edges[ei])
            if cache.same(mid, graph.vertices[graph.edges[ei].a].box):
                sg.contracted.append(e.plane_edge)
            else:
                split.add(ei)
        segs = [(sg.vertices[sg.edges[ei].a].point, sg.vertices[sg.edges[ei].b].point) for ei in keep]
        for i, j in crossing_pairs(segs):
            split.add(keep[i])
            split.add(keep[j])
        if not split:
            sg.edges = [sg.edges[ei] for ei in keep]
            return sg
        for ei in sorted(split, reverse=True):
            subdivide_edge(graph, ei)
    raise TopologyError("crossing resolution did not terminate")


def space_graph(graph: TopologyGraph, S2: RationalSurface) -> Tuple[SpaceGraph, CharacterPoints]:
    """Character points, refinement, lifting and crossing resolution."""
    box = graph.box
    cp = irregular_parameters(S2, graph.G, graph.V, box)
    for group, img in self_intersections(S2, graph.G, graph.V, box, cp.special):
        cp.selfint_groups.append(group)
        cp.selfint_images.append(img)
    cp.singular = [v.box for v in graph.vertices if v.kind == "singular"]
    refine_graph(graph, cp)
    return resolve_crossings(graph, S2), cp


def betti_numbers(nodes: Sequence[int], edges: Sequence[Tuple[int, int]]) -> Tuple[int, int]:
    comps = graph_components(list(nodes), list(edges))
    return len(comps), len(edges) - len(nodes) + len(comps)
