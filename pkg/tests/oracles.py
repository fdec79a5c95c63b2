"""Independent oracles used by the tests.

None of these reuse the package's algorithms: resultants come from a
Sylvester determinant in sympy, root counts from a Sturm sequence, curve
topology from marching squares on a float grid.
"""

from fractions import Fraction
from pathlib import Path

import numpy as np
import sympy

from surfint.algebra import MultiPoly
from surfint.io import load_surface

FIXTURES = Path(__file__).parent / "fixtures"


def load(name):
    return load_surface(FIXTURES / f"{name}.json")


def to_sympy(p: MultiPoly):
    syms = sympy.symbols(p.vars) if p.vars else ()
    if len(p.vars) == 1:
        syms = (syms,) if not isinstance(syms, tuple) else syms
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            term *= s ** k
        expr += term
    return sympy.expand(expr)


def from_sympy(expr, vars) -> MultiPoly:
    poly = sympy.Poly(sympy.expand(expr), *sympy.symbols(vars))
    terms = {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()}
    return MultiPoly(terms, vars)


def sylvester_resultant(f: MultiPoly, g: MultiPoly, var: str):
    """Determinant of the Sylvester matrix, as a sympy expression."""
    x = sympy.Symbol(var)
    F, G = sympy.Poly(to_sympy(f), x), sympy.Poly(to_sympy(g), x)
    m, n = F.degree(), G.degree()
    fc, gc = F.all_coeffs(), G.all_coeffs()
    rows = []
    for i in range(n):
        rows.append([0] * i + fc + [0] * (n - 1 - i))
    for i in range(m):
        rows.append([0] * i + gc + [0] * (m - 1 - i))
    return sympy.expand(sympy.Matrix(rows).det(method="berkowitz"))


# ---------------------------------------------------------------------------
# Sturm sequence root counting

def _rem(f, g):
    f = list(f)
    while len(f) >= len(g) and any(f):
        q = f[0] / g[0]
        for i in range(len(g)):
            f[i] -= q * g[i]
        f.pop(0)
    while f and f[0] == 0:
        f.pop(0)
    return f


def _ev(f, x):
    r = Fraction(0)
    for c in f:
        r = r * x + c
    return r


def sturm_count(coeffs, lo, hi):
    """Distinct real roots in ``(lo, hi]``; ``coeffs`` highest degree first."""
    f = [Fraction(c) for c in coeffs]
    while f and f[0] == 0:
        f.pop(0)
    n = len(f) - 1
    df = [f[i] * (n - i) for i in range(n)]
    seq = [f, df]
    while True:
        r = _rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])

    def var(x):
        signs = [s for s in (_ev(p, x) for p in seq) if s != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))

    return var(Fraction(lo)) - var(Fraction(hi))


# ---------------------------------------------------------------------------
# marching squares

def _lambdify(p: MultiPoly):
    v, t = sympy.symbols(p.vars)
    return sympy.lambdify((v, t), to_sympy(p), "numpy")


def singular_points(p: MultiPoly, box):
    """Real solutions of p = p_v = p_t = 0 inside the box (floats)."""
    v, t = sympy.symbols(p.vars)
    e = to_sympy(p)
    sols = sympy.solve_poly_system([e, sympy.diff(e, v), sympy.diff(e, t)], v, t) or []
    A, B, C, D = (float(x) for x in box)
    out = []
    for s in sols:
        a, b = complex(sympy.N(s[0], 30)), complex(sympy.N(s[1], 30))
        if abs(a.imag) > 1e-12 or abs(b.imag) > 1e-12:
            continue
        if A <= a.real <= B and C <= b.real <= D:
            out.append((a.real, b.real))
    return out


def branches_around(p: MultiPoly, centre, rv, rt=None, n=4000):
    """Sign changes of p along the rectangle ``centre +- (rv, rt)``."""
    f = _lambdify(p)
    rt = rv if rt is None else rt
    cv, ct = centre
    sv = np.linspace(-rv, rv, n, endpoint=False)
    st = np.linspace(-rt, rt, n, endpoint=False)
    vs = np.concatenate([cv + sv, np.full(n, cv + rv), cv - sv, np.full(n, cv - rv)])
    ts = np.concatenate([np.full(n, ct - rt), ct + st, np.full(n, ct + rt), ct - st])
    vals = np.sign(f(vs, ts) * np.ones_like(vs))
    vals = vals[vals != 0]
    return int(np.count_nonzero(vals != np.roll(vals, 1)))


def marching_squares(p: MultiPoly, box, n=512, hubs=(), hub_radius=24):
    """Component count and cycle rank of ``p = 0`` from an ``n x n`` grid.

    Grid crossing points within ``hub_radius`` grid cells of a point in
    ``hubs`` are contracted to one node, so singular points are not split
    by the ambiguity of saddle cells.
    """
    f = _lambdify(p)
    A, B, C, D = (float(x) for x in box)
    vs = np.linspace(A, B, n)
    ts = np.linspace(C, D, n)
    V, T = np.meshgrid(vs, ts, indexing="ij")
    val = f(V, T) * np.ones_like(V)
    # nudge exact zeros so every edge has a definite sign pattern
    val[val == 0] = 1e-300
    pos = val > 0

    nodes = {}
    coords = []

    def node(key, where):
        if key not in nodes:
            nodes[key] = len(coords)
            coords.append(where)
        return nodes[key]

    def crossing(i0, j0, i1, j1):
        a, b = val[i0, j0], val[i1, j1]
        s = a / (a - b)
        where = (V[i0, j0] + s * (V[i1, j1] - V[i0, j0]), T[i0, j0] + s * (T[i1, j1] - T[i0, j0]))
        return node((i0, j0, i1, j1), where)

    edges = []
    for i in range(n - 1):
        for j in range(n - 1):
            corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
            cs = [pos[c] for c in corners]
            if all(cs) or not any(cs):
                continue
            cut = []
            for k in range(4):
                c0, c1 = corners[k], corners[(k + 1) % 4]
                if pos[c0] != pos[c1]:
                    a, b = sorted((c0, c1))
                    cut.append(crossing(a[0], a[1], b[0], b[1]))
            if len(cut) == 2:
                edges.append((cut[0], cut[1]))
            else:
                # saddle: pair by the sign of the centre value
                centre = val[i, j] + val[i + 1, j] + val[i + 1, j + 1] + val[i, j + 1]
                if (centre > 0) == cs[0]:
                    edges += [(cut[0], cut[1]), (cut[2], cut[3])]
                else:
                    edges += [(cut[0], cut[3]), (cut[1], cut[2])]

    parent = list(range(len(coords)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cell = np.array([(B - A) / (n - 1), (D - C) / (n - 1)])
    xy = np.array(coords) / cell if coords else np.zeros((0, 2))
    for h in hubs:
        near = np.nonzero(np.max(np.abs(xy - np.array(h) / cell), axis=1) <= hub_radius)[0]
        for k in near[1:]:
            parent[find(int(k))] = find(int(near[0]))
    label = [find(x) for x in range(len(coords))]
    simple = {(min(label[a], label[b]), max(label[a], label[b]))
              for a, b in edges if label[a] != label[b]}
    nodes_ = set(label)
    comp = {x: x for x in nodes_}

    def root(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for a, b in simple:
        comp[root(a)] = root(b)
    comps = len({root(x) for x in nodes_})
    return comps, len(simple) - len(nodes_) + comps


# ---------------------------------------------------------------------------
# random inputs for the 100-case suites

def random_poly(rng, vars, degree, coeff=5, density=0.6):
    terms = {}
    n = len(vars)

    def exps(k, left):
        if k == n:
            yield ()
            return
        for e in range(left + 1):
            for rest in exps(k + 1, left - e):
                yield (e,) + rest

    for e in exps(0, degree):
        if rng.random() < density:
            terms[e] = rng.randint(-coeff, coeff)
    return MultiPoly(terms, vars)


def random_projectable(rng):
    """Rational surface whose z coordinate depends on ``s`` only."""
    from surfint.implicitize import RationalSurface
    from surfint.algebra import RationalFunction
    P = ("u", "s")
    while True:
        x = random_poly(rng, P, 2, 3)
        y = random_poly(rng, P, 2, 3)
        d = random_poly(rng, ("u",), 2, 2).with_vars(P) if rng.random() < 0.5 else MultiPoly.const(1, P)
        z = random_poly(rng, ("s",), rng.randint(1, 2), 3).with_vars(P)
        if d.is_zero() or z.degree("s") < 1 or x.degree("u") < 1 and y.degree("u") < 1:
            continue
        return RationalSurface(RationalFunction(x, d), RationalFunction(y, d), z, params=P)


# ---------------------------------------------------------------------------
# plane curve battery: (name, polynomial in v, t, box)

SEXTIC = "2*v + t^4 + t^3 + t^2*v/2 - 2*t^2 - t*v/2 - v^2/16 - t^6 + t"

BATTERY = [
    ("circle", "v^2 + t^2 - 1", (-2, 2, -2, 2)),
    ("ellipse", "(v - 1/3)^2 + 4*t^2 - 1", (-2, 2, -2, 2)),
    ("node", "t^2 - v^2*(v + 1)", (-2, 2, -2, 2)),
    ("cusp", "t^2 - v^3", (-1, 2, -2, 2)),
    ("tacnode", "t^2 - v^4", (-2, 2, -2, 2)),
    ("lemniscate", "(v^2 + t^2)^2 - 2*(v^2 - t^2)", (-2, 2, -2, 2)),
    ("trifolium", "(v^2 + t^2)^2 - v*(v^2 - 3*t^2)", (-2, 2, -2, 2)),
    ("two ovals", "t^2 - (v^2 - 1)*(v - 2)", (-3, 3, -3, 3)),
    ("two circles", "((v - 1/2)^2 + t^2 - 1)*((v + 1/2)^2 + t^2 - 1)", (-2, 2, -2, 2)),
    ("quadrifolium", "(v^2 + t^2)^3 - 4*v^2*t^2", (-2, 2, -2, 2)),
    ("cone and cylinder", "t*(1 + v^2)*(v - 1)", (-3, 3, -3, 3)),
    ("cone and paraboloid", "t*(t*v^4 + 3*v^4 + 6*t*v^2 + t + 2*v^2 - 1)", (-3, 3, -3, 3)),
    ("paraboloid sextic", SEXTIC, (-10, 40, -3, 3)),
]


def our_topology(expr, box):
    """Topology graph of ``expr = 0`` from the package."""
    from surfint.algebra import content_primitive
    from surfint.plane_topology import build_graph
    P = MultiPoly.parse(expr, ("v", "t"))
    V, G = content_primitive(P, ("t",))
    return build_graph(G, None if V.is_constant() else V, tuple(Fraction(x) for x in box))


def compare_with_oracle(expr, box, n=512):
    """``(ours, oracle)`` as ``(components, cycle rank, sorted branch degrees)``."""
    P = MultiPoly.parse(expr, ("v", "t"))
    g = our_topology(expr, box)
    hubs = singular_points(P, box)
    comps, rank = marching_squares(P, box, n=n, hubs=hubs)
    A, B, C, D = (Fraction(x) for x in box)
    cv, ct = float(B - A) / (n - 1), float(D - C) / (n - 1)
    ours, theirs = [], []
    for v in g.critical_vertices():
        a, b = v.approx()
        if not (A < a < B and C < b < D):
            continue
        ours.append(g.degree(v.id))
        theirs.append(branches_around(P, (a, b), 3 * cv, 3 * ct))
    return ((len(g.components()), g.cycle_rank(), ours),
            (comps, rank, theirs))


# ---------------------------------------------------------------------------
# the worked examples end to end

EXAMPLES = {
    # name: (S1 fixture, S2 fixture, box)
    "cone-cylinder": ("ex61_s1", "ex61_s2", (-3, 3, -3, 3)),
    "paraboloid-sextic": ("ex41_s1_implicit", "ex41_s2", (-10, 40, -3, 3)),
    "cone-paraboloid": ("ex41_s1_implicit", "ex63_s2", (-3, 3, -3, 3)),
}

_PIPELINE = {}


def pipeline(name):
    """``(F, plane curve, plane graph, space graph, character points)``, cached."""
    if name not in _PIPELINE:
        from surfint.implicitize import implicitize, plane_curve
        from surfint.plane_topology import build_graph
        from surfint.space_topology import space_graph
        s1, s2, box = EXAMPLES[name]
        S1, S2 = load(s1), load(s2)
        F = S1.integer_primitive() if isinstance(S1, MultiPoly) else implicitize(S1)
        pc = plane_curve(F, S2)
        graph = build_graph(pc.G, pc.V, tuple(Fraction(x) for x in box), S2.params)
        sg, cp = space_graph(graph, S2)
        _PIPELINE[name] = (F, pc, graph, sg, cp, S2)
    return _PIPELINE[name]


def certify_params(polylines, graph, sg):
    """Number of polyline points whose parameters fail the exact curve test.

    Slab samples carry a rational ``v`` and a ``t`` bracket with a sign
    change of ``G(v, .)`` (or an exact root); vertical samples sit on a
    rational root of ``V``; vertex samples are certified plane vertices.
    """
    from surfint.real_roots import point_sign
    vv, tv = graph.vars
    full = graph.G * graph.V
    bad = 0
    for pl in polylines:
        for prm in pl.params:
            if "vertex" in prm:
                boxes = [graph.vertices[i].box for i in sg.vertices[prm["vertex"]].preimages]
                bad += not boxes or any(point_sign(b, full) != 0 for b in boxes)
            elif isinstance(prm["t"], list):
                v = Fraction(prm["v"])
                lo, hi = (Fraction(x) for x in prm["t"])
                g = graph.G.subs({vv: v})
                a = g.subs({tv: lo}).constant_value()
                b = g.subs({tv: hi}).constant_value()
                bad += not ((lo == hi and a == 0) or (lo < hi and a * b < 0))
            else:
                v = Fraction(prm["v"])
                bad += graph.V.subs({vv: v, tv: 0}).constant_value() != 0
    return bad
