"""Polyline approximation of the intersection curve within a tolerance.

Each edge of the refined plane graph is sampled on rational columns; the
sample parameters are certified curve points (rational ``v``, ``t`` bracketed
by an exact sign change of ``G(v, .)``), so every polyline vertex lies on the
curve up to the final rounding of its image.  Segments are split until the
sampled Hausdorff estimate is below ``epsilon`` and no two segments touch
away from shared endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import MultiPoly, as_rational
from .implicitize import RationalSurface
from .plane_topology import TopologyGraph, graph_components
from .real_roots import _eval_sign, isolate_int, simplest_rational
from .space_topology import SpaceGraph, crossing_pairs

M_START = 16
M_CAP = 256
MAX_SPLIT_DEPTH = 40
MAX_CROSSING_ROUNDS = 30
FINE = Fraction(1, 2 ** 48)


class ApproximationError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# columns of G at rational v

class ColumnSolver:
    """Roots of ``G(v, .)`` in ``[C, D]`` for rational ``v``.

    Float roots are tried first and accepted only after an exact sign-change
    certificate for every root; otherwise exact isolation is used.
    """

    def __init__(self, G: MultiPoly, vars: Tuple[str, str], C, D):
        vv, tv = vars
        self.C, self.D = as_rational(C), as_rational(D)
        dense, _ = G.with_vars((tv, vv))._to_int((tv, vv))
        self.tcoeffs = [list(c) for c in dense]  # t-coefficients as int polys in v
        self.dv = max((len(c) - 1 for c in self.tcoeffs if c), default=0)

    def univariate(self, v: Fraction) -> List[int]:
        """Integer coefficients of ``q^d * G(p/q, t)``."""
        p, q = v.numerator, v.denominator
        out = [_homog(c, p, q, self.dv) for c in self.tcoeffs]
        while out and out[0] == 0:
            out.pop(0)
        return out

    def float_roots(self, v: float) -> List[float]:
        cs = [sum(float(a) * v ** (len(c) - 1 - i) for i, a in enumerate(c)) for c in self.tcoeffs]
        while cs and cs[0] == 0:
            cs.pop(0)
        if len(cs) <= 1:
            return []
        rs = np.roots(cs)
        scale = 1 + max(abs(r) for r in rs)
        real = sorted(float(r.real) for r in rs if abs(r.imag) <= 1e-9 * scale)
        return [r for r in real if float(self.C) <= r <= float(self.D)]

    def float_roots_batch(self, xs: Sequence[float]) -> List[List[float]]:
        """Float roots in ``[C, D]`` for many columns (stacked companion matrices)."""
        xs = np.asarray(xs, dtype=float)
        cs = np.array([np.polyval(np.array(c, dtype=float), xs) if c else np.zeros_like(xs)
                       for c in self.tcoeffs])            # shape (n+1, m)
        n = cs.shape[0] - 1
        lc = cs[0]
        good = np.abs(lc) > 1e-12 * (1 + np.abs(cs).max(axis=0))
        out: List[Optional[List[float]]] = [None] * len(xs)
        if n >= 1 and good.any():
            idx = np.nonzero(good)[0]
            comp = np.zeros((len(idx), n, n))
            comp[:, 0, :] = -(cs[1:, idx] / lc[idx]).T
            if n > 1:
                comp[:, np.arange(1, n), np.arange(n - 1)] = 1.0
            eig = np.linalg.eigvals(comp)
            lo, hi = float(self.C), float(self.D)
            for row, k in zip(eig, idx):
                scale = 1 + np.abs(row).max()
                real = np.sort(row.real[np.abs(row.imag) <= 1e-9 * scale])
                out[k] = [float(r) for r in real if lo <= r <= hi]
        for k in range(len(xs)):
            if out[k] is None:
                out[k] = self.float_roots(float(xs[k]))
        return out

    def certified_roots(self, v: Fraction, expected: Optional[int] = None
                        ) -> List[Tuple[Fraction, Fraction]]:
        """Disjoint rational brackets, one per root in ``(C, D)``, sorted."""
        f = self.univariate(v)
        out = self._try_float(f, float(v), expected)
        if out is not None:
            return out
        brackets = []
        for r in isolate_int(f, self.C, self.D):
            if r.is_exact and r.lo in (self.C, self.D):
                continue
            r.refine(FINE)
            brackets.append(_snap(f, r.lo, r.hi))
        if expected is not None and len(brackets) != expected:
            raise ApproximationError(f"column v={v} has {len(brackets)} roots, expected {expected}")
        return brackets

    def _try_float(self, f, v, expected):
        if len(f) <= 1:
            return None
        fl = self.float_roots(v)
        if expected is not None and len(fl) != expected:
            return None
        out = []
        last_hi = self.C
        for r in fl:
            x = Fraction(r)
            d = FINE * max(1, abs(x))
            for _ in range(6):
                lo, hi = x - d, x + d
                if _eval_sign(f, lo) * _eval_sign(f, hi) < 0:
                    break
                d *= 16
            else:
                return None
            if lo <= last_hi or hi >= self.D:
                return None
            out.append(_snap(f, lo, hi))
            last_hi = hi
        if expected is None:
            return None  # count not known; exact isolation decides
        return out


def _snap(f, lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
    """Collapse a bracket onto its root when that root is a simple rational."""
    r = simplest_rational(lo, hi)
    if _eval_sign(f, r) == 0:
        return r, r
    return lo, hi


def _homog(c: Sequence[int], p: int, q: int, d: int) -> int:
    """``q^d * c(p/q)`` for an integer coefficient list ``c`` (highest first)."""
    n = len(c) - 1
    return sum(a * p ** (n - i) * q ** (d - n + i) for i, a in enumerate(c))


# ---------------------------------------------------------------------------
# float evaluation of S2

class _FloatMap:
    def __init__(self, S: RationalSurface):
        self.vars = S.params
        self.parts = [(self._terms(c.numer), self._terms(c.denom)) for c in S.coords]

    def _terms(self, p: MultiPoly):
        p = p.with_vars(self.vars)
        return [(float(c), e[0], e[1]) for e, c in p.sorted_terms()]

    def __call__(self, v: float, t: float) -> Tuple[float, float, float]:
        out = []
        for num, den in self.parts:
            n = sum(c * v ** a * t ** b for c, a, b in num)
            d = sum(c * v ** a * t ** b for c, a, b in den)
            out.append(n / d)
        return tuple(out)


def _point_segment_distance(p, a, b) -> float:
    ab = [b[i] - a[i] for i in range(3)]
    ap = [p[i] - a[i] for i in range(3)]
    L2 = sum(x * x for x in ab)
    if L2 == 0:
        return math.sqrt(sum(x * x for x in ap))
    s = max(0.0, min(1.0, sum(ab[i] * ap[i] for i in range(3)) / L2))
    return math.sqrt(sum((ap[i] - s * ab[i]) ** 2 for i in range(3)))


def hausdorff_estimate(P1, P2, sampler, m: int) -> Fraction:
    """Largest distance from ``m`` sampled curve points to segment ``P1 P2``.

    ``sampler(m)`` returns ``m`` float points on the curve piece.
    """
    a = tuple(float(x) for x in P1)
    b = tuple(float(x) for x in P2)
    d = max((_point_segment_distance(p, a, b) for p in sampler(m)), default=0.0)
    return Fraction(d)


# ---------------------------------------------------------------------------
# chains

@dataclass
class Sample:
    param: Fraction                        # v on slab edges, t on vertical edges
    point: Tuple[Fraction, Fraction, Fraction]
    bracket: Optional[Tuple[Fraction, Fraction]] = None   # t bracket on slab edges
    vertex: Optional[int] = None           # space vertex id at chain ends


@dataclass
class Chain:
    edge: int
    a: int
    b: int
    vertical: bool
    branch: int
    half_slab: int
    column_v: Optional[Fraction]
    samples: List[Sample] = field(default_factory=list)
    m: List[int] = field(default_factory=list)   # sample count per segment
    est: List[Optional[Fraction]] = field(default_factory=list)  # None until checked
    expected: int = 0


@dataclass
class Polyline3D:
    points: List[Tuple[Fraction, Fraction, Fraction]]
    params: List[dict]
    edges: List[int]
    ends: Tuple[int, int]

    @property
    def closed(self) -> bool:
        return len(self.points) > 2 and self.points[0] == self.points[-1]

    def to_json(self, digits: int = 12) -> dict:
        return {"edges": self.edges, "ends": list(self.ends), "closed": self.closed,
                "points": [[decimal_string(x, digits) for x in p] for p in self.points],
                "params": self.params}


def decimal_string(x: Fraction, digits: int = 12) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(x.numerator) / Decimal(x.denominator)
    s = format(d, "f") if abs(d.adjusted()) < 24 else str(d)
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class Approximator:
    def __init__(self, graph: TopologyGraph, sg: SpaceGraph, S2: RationalSurface, epsilon):
        epsilon = as_rational(epsilon)
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")
        self.eps = epsilon
        self.feps = float(epsilon)
        self.graph = graph
        self.sg = sg
        self.S2 = S2
        A, B, C, D = graph.box
        self.C, self.D = as_rational(C), as_rational(D)
        self.solver = ColumnSolver(graph.G, graph.vars, C, D)
        self.fmap = _FloatMap(S2)
        self._expected: Dict[int, int] = {}
        self.max_estimate = Fraction(0)

    # -- sampling helpers

    def expected_roots(self, h: int) -> int:
        if h not in self._expected:
            v = self._slab_sample(h)
            self._expected[h] = len(self.solver.certified_roots(v))
        return self._expected[h]

    def _slab_sample(self, h: int) -> Fraction:
        cols = self.graph.columns
        a, b = cols[h].v, cols[h + 1].v
        if not cols[h + 1].critical:
            return cols[h + 1].v.lo
        if not cols[h].critical:
            return cols[h].v.lo
        while not a.hi < b.lo:
            a.bisect()
            b.bisect()
        return (a.hi + b.lo) / 2

    def slab_point(self, chain: Chain, v: Fraction) -> Sample:
        br = self.solver.certified_roots(v, chain.expected)[chain.branch]
        t = (br[0] + br[1]) / 2
        return Sample(v, self.S2.evaluate(v, t), br)

    def vertical_point(self, chain: Chain, t: Fraction) -> Sample:
        return Sample(t, self.S2.evaluate(chain.column_v, t))

    def float_sampler(self, chain: Chain, p0: Fraction, p1: Fraction):
        def sample(m):
            f0, f1 = float(p0), float(p1)
            xs = [f0 + (f1 - f0) * i / (m + 1) for i in range(1, m + 1)]
            if chain.vertical:
                return [self.fmap(float(chain.column_v), x) for x in xs]
            pts = []
            for x, rs in zip(xs, self.solver.float_roots_batch(xs)):
                if len(rs) != chain.expected:
                    rs = [float((lo + hi) / 2)
                          for lo, hi in self.solver.certified_roots(Fraction(x), chain.expected)]
                pts.append(self.fmap(x, rs[chain.branch]))
            return pts
        return sample

    # -- building chains

    def _end_sample(self, vid_plane: int, vertical: bool) -> Sample:
        box = self.graph.vertices[vid_plane].box
        sid = self.sg.plane_to_space[vid_plane]
        point = self.sg.vertices[sid].point
        if vertical:
            box.refine(FINE)
            param = box.t_lo if box.t_exact else (box.t_lo + box.t_hi) / 2
        else:
            box.v.refine(FINE)
            param = box.v.lo if box.v.is_exact else box.v.mid
        return Sample(param, point, vertex=sid)

    def build_chain(self, se) -> Chain:
        e = self.graph.edges[se.plane_index]
        ch = Chain(se.plane_index, se.a, se.b, e.vertical, e.branch, e.half_slab, None)
        pa, pb = self.graph.vertices[e.a], self.graph.vertices[e.b]
        if e.vertical:
            gamma = self.graph.columns[e.column].v
            gamma.refine(Fraction(1, 2 ** 60))
            ch.column_v = gamma.lo if gamma.is_exact else gamma.mid
        else:
            ch.expected = self.expected_roots(e.half_slab)
        s0, s1 = self._end_sample(e.a, e.vertical), self._end_sample(e.b, e.vertical)
        if e.vertical and s0.param > s1.param:
            s0, s1 = s1, s0
            ch.a, ch.b = ch.b, ch.a
        p0, p1 = s0.param, s1.param
        # interior params must be strictly inside the true open range
        if not e.vertical:
            va, vb = pa.box.v, pb.box.v
            lo, hi = va.hi, vb.lo
        else:
            ba, bb = (pa.box, pb.box) if ch.a == se.a else (pb.box, pa.box)
            lo, hi = ba.t_hi, bb.t_lo
        L = p1 - p0
        N = max(2, math.floor(L / self.eps) + 1)
        inner = [p0 + L * k / N for k in range(1, N)]
        if inner and (inner[0] <= lo or inner[-1] >= hi):
            inner = [lo + (hi - lo) * k / N for k in range(1, N)]
        mk = self.vertical_point if e.vertical else self.slab_point
        ch.samples = [s0] + [mk(ch, x) for x in inner] + [s1]
        ch.m = [M_START] * (len(ch.samples) - 1)
        ch.est = [None] * len(ch.m)
        return ch

    def split_segment(self, ch: Chain, i: int) -> None:
        s0, s1 = ch.samples[i], ch.samples[i + 1]
        x = (s0.param + s1.param) / 2
        mk = self.vertical_point if ch.vertical else self.slab_point
        ch.samples.insert(i + 1, mk(ch, x))
        m = min(ch.m[i] * 2, M_CAP)
        ch.m[i:i + 1] = [m, m]
        ch.est[i:i + 1] = [None, None]

    def refine_chain(self, ch: Chain) -> None:
        """Split until every segment's estimate is below epsilon."""
        i = 0
        splits = 0
        while i < len(ch.samples) - 1:
            if ch.est[i] is not None:
                i += 1
                continue
            s0, s1 = ch.samples[i], ch.samples[i + 1]
            est = hausdorff_estimate(s0.point, s1.point, self.float_sampler(ch, s0.param, s1.param), ch.m[i])
            if est < self.eps:
                ch.est[i] = est
                i += 1
                continue
            splits += 1
            if splits > MAX_SPLIT_DEPTH * len(ch.samples):
                raise ApproximationError(f"edge {ch.edge}: Hausdorff refinement does not converge")
            self.split_segment(ch, i)

    # -- crossings

    def segments(self, chains: List[Chain]):
        segs, where = [], []
        for ci, ch in enumerate(chains):
            for i in range(len(ch.samples) - 1):
                segs.append((ch.samples[i].point, ch.samples[i + 1].point))
                where.append((ci, i))
        return segs, where

    def resolve(self, chains: List[Chain]) -> None:
        """Split crossing segments, re-checking the pieces against epsilon."""
        for _ in range(MAX_CROSSING_ROUNDS):
            for ch in chains:
                self.refine_chain(ch)
            segs, where = self.segments(chains)
            bad = crossing_pairs(segs)
            if not bad:
                return
            todo: Dict[int, set] = {}
            for i, j in bad:
                for k in (i, j):
                    ci, si = where[k]
                    todo.setdefault(ci, set()).add(si)
            for ci, idxs in todo.items():
                for si in sorted(idxs, reverse=True):
                    self.split_segment(chains[ci], si)
        raise ApproximationError("polyline crossings persist after subdivision")

    def run(self) -> List[Polyline3D]:
        chains = [self.build_chain(se) for se in self.sg.edges]
        self.resolve(chains)
        self.chains = chains
        self.max_estimate = max((e for ch in chains for e in ch.est), default=Fraction(0))
        return merge_polylines([self._polyline(ch) for ch in chains], self.sg)

    def _polyline(self, ch: Chain) -> Polyline3D:
        params = []
        for s in ch.samples:
            if s.vertex is not None:
                params.append({"vertex": s.vertex})
            elif ch.vertical:
                params.append({"v": str(ch.column_v), "t": str(s.param)})
            else:
                params.append({"v": str(s.param), "t": [str(s.bracket[0]), str(s.bracket[1])]})
        return Polyline3D([s.point for s in ch.samples], params, [ch.edge], (ch.a, ch.b))


def _collinear(a, b, c) -> bool:
    """``b`` lies strictly inside the segment ``a c``."""
    u = [b[i] - a[i] for i in range(3)]
    w = [c[i] - a[i] for i in range(3)]
    cr = (u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0])
    if cr != (0, 0, 0):
        return False
    return sum(u[i] * (c[i] - b[i]) for i in range(3)) > 0


def _drop_collinear(pl: Polyline3D) -> Polyline3D:
    """Remove interior points lying exactly between their neighbours."""
    pts, prm = [pl.points[0]], [pl.params[0]]
    for k in range(1, len(pl.points) - 1):
        if not _collinear(pts[-1], pl.points[k], pl.points[k + 1]):
            pts.append(pl.points[k])
            prm.append(pl.params[k])
    pts.append(pl.points[-1])
    prm.append(pl.params[-1])
    return Polyline3D(pts, prm, pl.edges, pl.ends)


def _reverse(pl: Polyline3D) -> Polyline3D:
    return Polyline3D(pl.points[::-1], pl.params[::-1], pl.edges[::-1], (pl.ends[1], pl.ends[0]))


def merge_polylines(polylines: List[Polyline3D], sg: SpaceGraph) -> List[Polyline3D]:
    """Join polylines through space vertices of degree two that carry no
    character tag, so that polyline ends are character or boundary points."""
    incident: Dict[int, List[int]] = {}
    for i, pl in enumerate(polylines):
        for v in pl.ends:
            incident.setdefault(v, []).append(i)

    def joinable(v: int) -> bool:
        return len(incident[v]) == 2 and not (set(sg.vertices[v].tags) - {"injected", "fused"})

    used = [False] * len(polylines)

    def walk(start: int, i: int) -> Polyline3D:
        pl = polylines[i] if polylines[i].ends[0] == start else _reverse(polylines[i])
        used[i] = True
        pts, prm, edges = list(pl.points), list(pl.params), list(pl.edges)
        end = pl.ends[1]
        while end != start and joinable(end):
            nxt = [j for j in incident[end] if not used[j]]
            if not nxt:
                break
            q = polylines[nxt[0]]
            q = q if q.ends[0] == end else _reverse(q)
            used[nxt[0]] = True
            pts += q.points[1:]
            prm += q.params[1:]
            edges += q.edges
            end = q.ends[1]
        return _drop_collinear(Polyline3D(pts, prm, edges, (start, end)))

    out = []
    for v in sorted(incident):
        if joinable(v):
            continue
        for i in incident[v]:
            if not used[i]:
                out.append(walk(v, i))
    for i, pl in enumerate(polylines):
        if not used[i]:
            out.append(walk(pl.ends[0], i))
    return out


def approximate(graph: TopologyGraph, sg: SpaceGraph, S2: RationalSurface, epsilon) -> List[Polyline3D]:
    """Polylines approximating every space-graph edge within ``epsilon``."""
    return Approximator(graph, sg, S2, epsilon).run()


def polyline_topology(polylines: Sequence[Polyline3D]) -> Tuple[int, int]:
    """Component count and cycle rank of the union of polylines, with points
    identified by exact coordinates."""
    ids: Dict[tuple, int] = {}
    edges = []
    for pl in polylines:
        prev = None
        for p in pl.points:
            k = ids.setdefault(tuple(p), len(ids))
            if prev is not None and prev != k:
                edges.append((prev, k))
            prev = k
    nodes = list(range(len(ids)))
    comps = graph_components(nodes, edges)
    return len(comps), len(edges) - len(nodes) + len(comps)


def all_segments(polylines: Sequence[Polyline3D]):
    return [(pl.points[i], pl.points[i + 1]) for pl in polylines for i in range(len(pl.points) - 1)]


def to_obj(polylines: Sequence[Polyline3D], digits: int = 12) -> str:
    ids: Dict[tuple, int] = {}
    lines = []
    records = []
    for pl in polylines:
        rec = []
        for p in pl.points:
            if tuple(p) not in ids:
                ids[tuple(p)] = len(ids) + 1
                lines.append("v " + " ".join(decimal_string(x, digits) for x in p))
            rec.append(str(ids[tuple(p)]))
        records.append("l " + " ".join(rec))
    return "\n".join(lines + records) + "\n"
