"""Topology graph of a plane algebraic curve ``G(v, t) = 0`` inside a box.

Critical columns are the real roots of ``d(v)``, the squarefree product of the
box walls, the curve's intersections with the top and bottom edges, the
discriminant ``Res_t(G, G_t)`` and the vertical-line factor ``V(v)``.  Each
critical column gets its curve points as vertices.  One rational sample
column per slab carries the regular branches, and segregating boxes give
the per-vertex branch counts that decide which sample point each branch
reaches.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (MultiPoly, as_rational, derivative, evaluate,
                      exact_divide, format_poly, gcd, resultant, squarefree_part)
from .real_roots import (AlgebraicField, ColumnPoly, IsolatingBox, IsolatingInterval,
                         _coeffs_in_t, compare, count_roots_in,
                         isolate_column, isolate_univariate, point_sign, same_point,
                         simplest_rational)


class TopologyError(RuntimeError):
    """A certification or consistency check failed while building the graph."""


MAX_SHRINK = 60


def _box(box) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    A, B, C, D = (as_rational(x) for x in box)
    if not (A < B and C < D):
        raise ValueError(f"invalid box [{A}, {B}] x [{C}, {D}]")
    return A, B, C, D


def _coprime_factors(factors: Sequence[MultiPoly]) -> List[MultiPoly]:
    """Pairwise coprime squarefree polynomials with the same roots as the
    product of the inputs."""
    out: List[MultiPoly] = []
    for f in factors:
        if f.is_constant():
            continue
        f = squarefree_part(f)
        for g in out:
            c = gcd(f, g)
            if not c.is_constant():
                f = exact_divide(f, c)
                if f.is_constant():
                    break
        if not f.is_constant():
            out.append(f.integer_primitive())
    return out


def critical_factors(G: MultiPoly, box, V: Optional[MultiPoly] = None,
                     vars=("v", "t")) -> List[MultiPoly]:
    """Coprime squarefree factors of ``d(v)``.

    Keeping the factors apart keeps the defining polynomials of the critical
    columns small.
    """
    A, B, C, D = _box(box)
    vv, tv = vars
    G = G.with_vars(vars)
    vpoly = MultiPoly.var(vv, (vv,))
    factors = [vpoly - A, vpoly - B]
    if V is not None and not V.is_constant():
        factors.append(V.with_vars(vars).with_vars((vv,)))
    if G.degree(tv) > 0:
        for c in (C, D):
            g = evaluate(G, {tv: c})
            if not g.is_zero():
                factors.append(g.with_vars((vv,)))
        disc = resultant(G, derivative(G, tv), tv)
        if disc.is_zero():
            raise TopologyError("Res(G, G_t) vanishes identically; G is not squarefree")
        factors.append(disc.with_vars((vv,)))
    return _coprime_factors(factors)


def critical_polynomial(G: MultiPoly, box, V: Optional[MultiPoly] = None,
                        vars=("v", "t")) -> MultiPoly:
    """Squarefree ``d(v)`` whose real roots are the critical columns."""
    d = MultiPoly.const(1, (vars[0],))
    for f in critical_factors(G, box, V, vars):
        d = d * f
    return d


def isolate_factors(factors: Sequence[MultiPoly], domain) -> List[IsolatingInterval]:
    """Sorted roots of a product given by coprime factors."""
    roots = []
    for f in factors:
        roots.extend(isolate_univariate(f, domain))
    return sorted(roots, key=cmp_to_key(compare))


# ---------------------------------------------------------------------------
# graph types

@dataclass
class SegregatingBox:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    owner: int

    def to_json(self):
        return {"a": str(self.a), "b": str(self.b), "c": str(self.c), "d": str(self.d)}


@dataclass
class PlaneVertex:
    id: int
    box: IsolatingBox
    kind: str
    column: Optional[int]
    row: int = 0
    left: int = 0
    right: int = 0
    segbox: Optional[SegregatingBox] = None
    tags: List[str] = field(default_factory=list)

    @property
    def v(self) -> IsolatingInterval:
        return self.box.v

    def approx(self) -> Tuple[float, float]:
        a, b = self.box.approx(Fraction(1, 10 ** 9))
        return float(a), float(b)

    def to_json(self) -> dict:
        out = {"id": self.id, "kind": self.kind, "column": self.column, "row": self.row,
               "box": self.box.to_json(), "left": self.left, "right": self.right}
        if self.segbox is not None:
            out["segregating_box"] = self.segbox.to_json()
        if self.tags:
            out["tags"] = sorted(self.tags)
        return out


@dataclass
class PlaneEdge:
    a: int
    b: int
    vertical: bool = False
    half_slab: Optional[int] = None
    branch: Optional[int] = None
    column: Optional[int] = None

    def to_json(self) -> dict:
        out = {"a": self.a, "b": self.b, "vertical": self.vertical}
        if self.vertical:
            out["column"] = self.column
        else:
            out["half_slab"] = self.half_slab
            out["branch"] = self.branch
        return out


@dataclass
class Column:
    v: IsolatingInterval
    critical: bool
    vertical: bool = False
    vertices: List[int] = field(default_factory=list)


@dataclass
class TopologyGraph:
    G: MultiPoly
    V: MultiPoly
    box: Tuple[Fraction, Fraction, Fraction, Fraction]
    vars: Tuple[str, str]
    columns: List[Column] = field(default_factory=list)
    vertices: List[PlaneVertex] = field(default_factory=list)
    edges: List[PlaneEdge] = field(default_factory=list)
    d: Optional[MultiPoly] = None

    # graph queries ---------------------------------------------------------
    def degree(self, vid: int) -> int:
        return sum((e.a == vid) + (e.b == vid) for e in self.edges)

    def adjacency(self) -> Dict[int, List[int]]:
        adj: Dict[int, List[int]] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            adj[e.a].append(e.b)
            adj[e.b].append(e.a)
        return adj

    def components(self) -> List[List[int]]:
        return graph_components([v.id for v in self.vertices], [(e.a, e.b) for e in self.edges])

    def cycle_rank(self) -> int:
        return len(self.edges) - len(self.vertices) + len(self.components())

    def vertical_lines(self) -> List[IsolatingInterval]:
        return [c.v for c in self.columns if c.vertical]

    def critical_vertices(self) -> List[PlaneVertex]:
        return [v for v in self.vertices if v.kind in ("v-critical", "singular")]

    def vertex_by_box(self, box: IsolatingBox) -> Optional[PlaneVertex]:
        for v in self.vertices:
            if same_point(v.box, box):
                return v
        return None

    # serialisation ---------------------------------------------------------
    def to_json(self) -> dict:
        A, B, C, D = self.box
        return {
            "G": format_poly(self.G),
            "V": format_poly(self.V),
            "box": [str(A), str(B), str(C), str(D)],
            "columns": [{"v": c.v.to_json(), "critical": c.critical, "vertical": c.vertical,
                         "vertices": list(c.vertices)} for c in self.columns],
            "vertices": [v.to_json() for v in self.vertices],
            "edges": [e.to_json() for e in self.edges],
            "vertical_lines": [c.v.to_json() for c in self.columns if c.vertical],
        }

    def to_svg(self, size: int = 600, margin: int = 20) -> str:
        A, B, C, D = (float(x) for x in self.box)
        sx = (size - 2 * margin) / (B - A)
        sy = (size - 2 * margin) / (D - C)
        pos = {}
        for v in self.vertices:
            a, b = v.approx()
            pos[v.id] = (margin + (a - A) * sx, size - margin - (b - C) * sy)
        lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
                 f'viewBox="0 0 {size} {size}">',
                 f'<rect x="{margin}" y="{margin}" width="{size - 2 * margin}" '
                 f'height="{size - 2 * margin}" fill="none" stroke="#999"/>']
        for e in self.edges:
            (x1, y1), (x2, y2) = pos[e.a], pos[e.b]
            colour = "#c33" if e.vertical else "#124"
            lines.append(f'<line x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" '
                         f'stroke="{colour}" stroke-width="1.5"/>')
        colours = {"singular": "#d00", "v-critical": "#e80", "boundary": "#080",
                   "injected": "#a0a", "regular": "#124"}
        for v in self.vertices:
            x, y = pos[v.id]
            lines.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3" '
                         f'fill="{colours.get(v.kind, "#124")}"/>')
        lines.append("</svg>")
        return "\n".join(lines) + "\n"


def graph_components(nodes: Sequence[int], edges: Sequence[Tuple[int, int]]) -> List[List[int]]:
    parent = {n: n for n in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: Dict[int, List[int]] = {}
    for n in nodes:
        groups.setdefault(find(n), []).append(n)
    return sorted(groups.values())


# ---------------------------------------------------------------------------
# construction helpers

def _separate(roots: List[IsolatingInterval]) -> None:
    """Refine until consecutive isolating intervals are strictly disjoint."""
    for i in range(len(roots) - 1):
        a, b = roots[i], roots[i + 1]
        while not a.hi < b.lo:
            if a.is_exact and b.is_exact:
                raise TopologyError("duplicate critical column")
            a.bisect()
            b.bisect()


def _between(lo: Fraction, hi: Fraction) -> Fraction:
    """A short rational strictly inside ``(lo, hi)``."""
    r = simplest_rational(lo, hi)
    if r == lo or r == hi:
        r = simplest_rational(lo + (hi - lo) / 4, hi - (hi - lo) / 4)
    return r


def _t_levels(boxes: List[IsolatingBox], C: Fraction, D: Fraction) -> List[Fraction]:
    """``C = l_0 <= ... <= l_n = D`` with ``l_j`` strictly between roots ``j-1`` and ``j``."""
    levels = [C]
    for p, q in zip(boxes, boxes[1:]):
        while not p.t_hi <= q.t_lo or (p.t_exact and q.t_exact and p.t_hi == q.t_lo):
            p.bisect_t()
            q.bisect_t()
        lo, hi = p.t_hi, q.t_lo
        if lo < hi:
            x = simplest_rational(lo, hi)
            if (x == lo and p.t_exact) or (x == hi and q.t_exact):
                x = (lo + hi) / 2
        else:
            x = lo  # shared endpoint of two proper isolating intervals
        levels.append(x)
    levels.append(D)
    return levels


def _univariate_in_v(G: MultiPoly, tval: Fraction, vars) -> Optional[MultiPoly]:
    """``G(v, tval)``, or ``None`` when it vanishes identically."""
    g = evaluate(G, {vars[1]: tval})
    return None if g.is_zero() else g.with_vars((vars[0],))


def _has_root_in(p: Optional[MultiPoly], a: Fraction, b: Fraction) -> bool:
    if p is None:
        return True
    if p.is_constant():
        return False
    return bool(isolate_univariate(squarefree_part(p), (a, b)))


def _count(G: MultiPoly, vval: Fraction, lo: Fraction, hi: Fraction, vars) -> int:
    g = evaluate(G, {vars[0]: vval}).with_vars(vars)
    if g.is_zero():
        raise TopologyError(f"G vanishes on the whole column v = {vval}")
    return count_roots_in(g.with_vars((vars[1],)), (lo, hi))


def _exact_box(alpha: IsolatingInterval, tval: Fraction, vars) -> IsolatingBox:
    """Box for the point ``(alpha, tval)`` with a rational ``tval``."""
    line = MultiPoly.var(vars[1], vars) - tval
    col = ColumnPoly.from_poly(line, alpha, *vars)
    return IsolatingBox(alpha, tval, tval, col, line, vars)


def _classify(box: IsolatingBox, G: MultiPoly, Gv: MultiPoly, Gt: MultiPoly,
              on_vertical: bool, bounds, vars) -> str:
    A, B, C, D = bounds
    if on_vertical:
        return "singular"
    if point_sign(box, Gt) == 0:
        if point_sign(box, Gv) == 0:
            return "singular"
        return "v-critical"
    if box.t_exact and box.t_lo in (C, D):
        return "boundary"
    if box.v.is_exact and box.v.lo in (A, B):
        return "boundary"
    return "regular"


# ---------------------------------------------------------------------------
# main algorithm

def build_graph(G: MultiPoly, V: Optional[MultiPoly], box, vars=("v", "t")) -> TopologyGraph:
    """Topology graph of ``G * V = 0`` inside ``box = (A, B, C, D)``."""
    A, B, C, D = _box(box)
    vars = tuple(vars)
    vv, tv = vars
    G = G.with_vars(vars)
    V = (V if V is not None else MultiPoly.const(1, vars)).with_vars(vars)
    if G.free_vars() == (vv,) or (G.is_constant() and G.is_zero()):
        raise TopologyError("G must not have a factor in v alone; pass it as V")
    curve = G.degree(tv) > 0
    Gt, Gv = derivative(G, tv), derivative(G, vv)
    factors = critical_factors(G, (A, B, C, D), V, vars)
    d = MultiPoly.const(1, (vv,))
    for f in factors:
        d = d * f
    alphas = isolate_factors(factors, (A, B))
    _separate(alphas)
    graph = TopologyGraph(G, V, (A, B, C, D), vars, d=d)
    Vcoeffs = [c for c in _coeffs_in_t(V, vv, tv)] if not V.is_constant() else None

    # critical columns and their points
    crit: List[Tuple[IsolatingInterval, List[IsolatingBox], bool]] = []
    for alpha in alphas:
        boxes = isolate_column(G, alpha, C, D, vars) if curve else []
        vertical = False
        if Vcoeffs is not None:
            vertical = AlgebraicField(alpha).is_zero(Vcoeffs[-1])
        crit.append((alpha, boxes, vertical))

    samples = [_between(alphas[i].hi, alphas[i + 1].lo) for i in range(len(alphas) - 1)]
    sample_boxes = [isolate_column(G, IsolatingInterval.exact(x), C, D, vars) if curve else []
                    for x in samples]

    def add_vertex(bx, kind, column, row):
        vid = len(graph.vertices)
        graph.vertices.append(PlaneVertex(vid, bx, kind, column, row))
        graph.columns[column].vertices.append(vid)
        return vid

    # interleave critical and sample columns
    crit_ids: List[List[int]] = []
    samp_ids: List[List[int]] = []
    for i, (alpha, boxes, vertical) in enumerate(crit):
        graph.columns.append(Column(alpha, True, vertical))
        col = len(graph.columns) - 1
        ids = []
        for j, bx in enumerate(boxes):
            kind = _classify(bx, G, Gv, Gt, vertical, (A, B, C, D), vars)
            ids.append(add_vertex(bx, kind, col, j))
        crit_ids.append(ids)
        if i < len(samples):
            graph.columns.append(Column(IsolatingInterval.exact(samples[i]), False))
            col = len(graph.columns) - 1
            sids = []
            for k, bx in enumerate(sample_boxes[i]):
                kind = "boundary" if samples[i] in (A, B) else "regular"
                sids.append(add_vertex(bx, kind, col, k))
            samp_ids.append(sids)

    # segregating boxes and branch counts
    for i, (alpha, boxes, vertical) in enumerate(crit):
        if not boxes:
            continue
        levels = _t_levels(boxes, C, D)
        a = samples[i - 1] if i > 0 else None
        b = samples[i] if i < len(samples) else None
        interior = [_univariate_in_v(G, lv, vars) for lv in levels[1:-1]]
        for _ in range(MAX_SHRINK):
            lo = a if a is not None else alpha.lo
            hi = b if b is not None else alpha.hi
            if not any(_has_root_in(p, lo, hi) for p in interior):
                break
            alpha.refine((hi - lo) / 8)
            if a is not None:
                a = (a + alpha.lo) / 2
            if b is not None:
                b = (b + alpha.hi) / 2
        else:
            raise TopologyError(f"cannot certify segregating boxes on column {alpha}")
        for j, vid in enumerate(crit_ids[i]):
            vert = graph.vertices[vid]
            c, dd = levels[j], levels[j + 1]
            vert.left = _count(G, a, c, dd, vars) if a is not None else 0
            vert.right = _count(G, b, c, dd, vars) if b is not None else 0
            vert.segbox = SegregatingBox(a if a is not None else alpha.lo,
                                         b if b is not None else alpha.hi, c, dd, vid)

    # non-vertical edges
    for i in range(len(samples)):
        m = len(sample_boxes[i])
        right_total = sum(graph.vertices[v].right for v in crit_ids[i])
        left_total = sum(graph.vertices[v].left for v in crit_ids[i + 1])
        if right_total != m or left_total != m:
            raise TopologyError(
                f"branch count mismatch in slab {i}: {right_total} / {m} / {left_total}")
        k = 0
        for vid in crit_ids[i]:
            for _ in range(graph.vertices[vid].right):
                graph.edges.append(PlaneEdge(vid, samp_ids[i][k], half_slab=2 * i, branch=k))
                k += 1
        k = 0
        for vid in crit_ids[i + 1]:
            for _ in range(graph.vertices[vid].left):
                graph.edges.append(PlaneEdge(samp_ids[i][k], vid, half_slab=2 * i + 1, branch=k))
                k += 1

    # vertical lines
    for i, (alpha, boxes, vertical) in enumerate(crit):
        if not vertical:
            continue
        col = 2 * i
        ids = list(crit_ids[i])
        if not boxes or not (boxes[0].t_exact and boxes[0].t_lo == C):
            ids.insert(0, add_vertex(_exact_box(alpha, C, vars), "boundary", col, -1))
        if not boxes or not (boxes[-1].t_exact and boxes[-1].t_lo == D):
            ids.append(add_vertex(_exact_box(alpha, D, vars), "boundary", col, len(boxes)))
        for p, q in zip(ids, ids[1:]):
            graph.edges.append(PlaneEdge(p, q, vertical=True, column=col))
        graph.columns[col].vertices = ids
    return graph


def branch_counts(vertex: PlaneVertex) -> Tuple[int, int]:
    """``(left, right)`` branch numbers of a vertex of a built graph."""
    return vertex.left, vertex.right


def build_segregating_box(graph: TopologyGraph, vertex: PlaneVertex) -> SegregatingBox:
    """Segregating box of a critical-column vertex, re-certified."""
    sb = vertex.segbox
    if sb is None:
        raise TopologyError("vertex has no segregating box (not on a critical column)")
    if not certify_segregating_box(graph, vertex, sb):
        raise TopologyError("segregating box failed certification")
    return sb


def certify_segregating_box(graph: TopologyGraph, vertex: PlaneVertex, sb: SegregatingBox) -> bool:
    """Check the three defining conditions exactly."""
    vars = graph.vars
    alpha = vertex.box.v
    # (1) alpha is the only root of d in [a, b]
    roots = isolate_univariate(graph.d, (sb.a, sb.b))
    if len(roots) != 1 or compare(roots[0], alpha) != 0:
        return False
    # (2) only the owner solves {d, G} in the rectangle
    if graph.G.degree(vars[1]) > 0:
        boxes = isolate_column(graph.G, alpha, sb.c, sb.d, vars)
        if len(boxes) != 1 or not same_point(boxes[0], vertex.box):
            return False
    # (3) the top and bottom edges miss the curve (except at alpha on the box walls)
    A, B, C, D = graph.box
    for lv in (sb.c, sb.d):
        if lv in (C, D):
            continue
        p = _univariate_in_v(graph.G, lv, vars)
        if _has_root_in(p, sb.a, sb.b):
            return False
    return True
