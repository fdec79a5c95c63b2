"""Rational surfaces, projectable forms and implicitization by resultants.

A surface ``(x, y, z) = S(u, s)`` is *projectable* when ``z`` depends on the
second parameter only.  For such a surface two resultants give the implicit
equation: eliminate ``u`` from the x and y equations, drop the content in
``s``, then eliminate ``s`` with the z equation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (MultiPoly, RationalFunction, as_rational,
                      compose_rational, content_primitive, derivative, exact_divide,
                      gcd, gcd_list, parse_rational_function, resultant, squarefree_part)

XYZ = ("x", "y", "z")


class ImplicitizationError(ValueError):
    """The surface cannot be implicitized by this method."""


class NotProjectableError(ImplicitizationError):
    pass


class SharedComponentError(ValueError):
    """The two surfaces share a component (``F(S2) == 0`` identically)."""


def _rf(x, vars) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, MultiPoly):
        return RationalFunction(x)
    if isinstance(x, str):
        return parse_rational_function(x, vars)
    if isinstance(x, (tuple, list)) and len(x) == 2:
        return RationalFunction(_rf(x[0], vars).numer, _rf(x[1], vars).numer)
    return RationalFunction(MultiPoly.const(as_rational(x), vars))


class RationalSurface:
    """Three rational functions of two parameters.

    ``params`` is the ordered parameter pair; for a projectable surface the
    third coordinate depends only on ``params[1]``.
    """

    def __init__(self, x, y, z, params: Sequence[str] = ("u", "s")):
        self.params = tuple(params)
        if len(self.params) != 2 or self.params[0] == self.params[1]:
            raise ValueError("a surface needs two distinct parameter names")
        coords = []
        for c in (x, y, z):
            rf = _rf(c, self.params)
            extra = set(rf.free_vars()) - set(self.params)
            if extra:
                raise ValueError(f"unknown variables {sorted(extra)} in surface coordinate")
            coords.append(RationalFunction(rf.numer.with_vars(self.params),
                                           rf.denom.with_vars(self.params)))
        self.coords: Tuple[RationalFunction, ...] = tuple(coords)

    x = property(lambda self: self.coords[0])
    y = property(lambda self: self.coords[1])
    z = property(lambda self: self.coords[2])

    def __repr__(self):
        return f"RationalSurface({', '.join(map(str, self.coords))}; params={self.params})"

    def __eq__(self, other):
        return (isinstance(other, RationalSurface) and self.params == other.params
                and all(a == b for a, b in zip(self.coords, other.coords)))

    def evaluate(self, a, b) -> Tuple[Fraction, Fraction, Fraction]:
        p, q = self.params
        vals = {p: as_rational(a), q: as_rational(b)}
        return tuple(c.evaluate(vals) for c in self.coords)

    def denominators(self) -> List[MultiPoly]:
        return [c.denom for c in self.coords]

    def permuted(self, perm: Sequence[int]) -> "RationalSurface":
        """Surface whose i-th coordinate is the ``perm[i]``-th coordinate here."""
        c = self.coords
        return RationalSurface(c[perm[0]], c[perm[1]], c[perm[2]], self.params)

    def renamed(self, params: Sequence[str]) -> "RationalSurface":
        """Same map with parameters renamed positionally."""
        mapping = {old: MultiPoly.var(new, params) for old, new in zip(self.params, params)}
        coords = [RationalFunction(c.numer.compose(mapping, params), c.denom.compose(mapping, params))
                  for c in self.coords]
        return RationalSurface(*coords, params=params)

    def swapped(self) -> "RationalSurface":
        """Same map with the parameter order reversed."""
        return RationalSurface(*self.coords, params=(self.params[1], self.params[0]))

    def partials(self, which: int) -> Tuple[RationalFunction, ...]:
        var = self.params[which]
        return tuple(c.diff(var) for c in self.coords)

    def to_json(self) -> dict:
        from .algebra import format_poly
        return {"params": list(self.params),
                "coords": [{"numer": format_poly(c.numer), "denom": format_poly(c.denom)}
                           for c in self.coords]}


def _depends_on(rf: RationalFunction, var: str) -> bool:
    return var in rf.free_vars()


def is_projectable(S: RationalSurface) -> bool:
    """True iff the third coordinate is free of the first parameter."""
    return not _depends_on(S.z, S.params[0])


@dataclass(frozen=True)
class ProjectableForm:
    """A projectable view of a surface.

    ``surface.coords[i]`` is coordinate ``perm[i]`` of the original, and the
    parameters were swapped when ``swapped`` is true.
    """

    surface: RationalSurface
    perm: Tuple[int, int, int]
    swapped: bool


def projectable_forms(S: RationalSurface) -> List[ProjectableForm]:
    """Every coordinate choice and parameter ordering that makes ``S``
    projectable; the identity comes first when it works."""
    out = []
    for k in (2, 1, 0):
        rest = tuple(i for i in range(3) if i != k)
        perm = rest + (k,)
        for swap in (False, True):
            T = S.swapped() if swap else S
            first, second = T.params
            c = S.coords[k]
            if _depends_on(c, first):
                continue
            out.append(ProjectableForm(T.permuted(perm), perm, swap))
    return out


def projectable_form(S: RationalSurface) -> ProjectableForm:
    forms = projectable_forms(S)
    if not forms:
        raise NotProjectableError(
            "surface is neither projectable nor ruled; implicitization of general "
            "rational surfaces by this method is an open problem")
    return forms[0]


# ---------------------------------------------------------------------------
# ruled surfaces

@dataclass
class RuledSurface:
    """``((a0 + a1 s)/d1, (b0 + b1 s)/d2, (c0 + c1 s)/d3)`` with coefficients in ``u``."""

    a0: MultiPoly
    a1: MultiPoly
    b0: MultiPoly
    b1: MultiPoly
    c0: MultiPoly
    c1: MultiPoly
    d1: MultiPoly
    d2: MultiPoly
    d3: MultiPoly
    params: Tuple[str, str] = ("u", "s")

    def __post_init__(self):
        u = self.params[0]
        for name in ("a0", "a1", "b0", "b1", "c0", "c1", "d1", "d2", "d3"):
            val = getattr(self, name)
            if isinstance(val, str):
                val = MultiPoly.parse(val, (u,))
            elif not isinstance(val, MultiPoly):
                val = MultiPoly.const(as_rational(val), (u,))
            if set(val.free_vars()) - {u}:
                raise ValueError(f"ruled coefficient {name} must depend on {u} only")
            setattr(self, name, val.with_vars((u,)))
        if self.d1.is_zero() or self.d2.is_zero() or self.d3.is_zero():
            raise ValueError("zero denominator in ruled surface")

    def surface(self) -> RationalSurface:
        P = self.params
        s = MultiPoly.var(P[1], P)
        lift = lambda p: p.with_vars(P)  # noqa: E731
        return RationalSurface(
            RationalFunction(lift(self.a0) + lift(self.a1) * s, lift(self.d1)),
            RationalFunction(lift(self.b0) + lift(self.b1) * s, lift(self.d2)),
            RationalFunction(lift(self.c0) + lift(self.c1) * s, lift(self.d3)),
            params=P)


@dataclass
class BirationalMap:
    """``(u, s) -> (ubar, sbar)`` with its inverse, as rational functions."""

    forward: Tuple[RationalFunction, RationalFunction]
    inverse: Tuple[RationalFunction, RationalFunction]
    params: Tuple[str, str]
    new_params: Tuple[str, str]

    def apply(self, a, b) -> Tuple[Fraction, Fraction]:
        vals = dict(zip(self.params, (as_rational(a), as_rational(b))))
        return tuple(f.evaluate(vals) for f in self.forward)

    def apply_inverse(self, a, b) -> Tuple[Fraction, Fraction]:
        vals = dict(zip(self.new_params, (as_rational(a), as_rational(b))))
        return tuple(f.evaluate(vals) for f in self.inverse)

    def check(self, samples: int = 50, seed: int = 0) -> bool:
        """``inverse(forward(p)) == p`` at random rational samples."""
        rng = random.Random(seed)
        done = 0
        for _ in range(samples * 10):
            p = (Fraction(rng.randint(-50, 50), rng.randint(1, 9)),
                 Fraction(rng.randint(-50, 50), rng.randint(1, 9)))
            try:
                q = self.apply(*p)
                back = self.apply_inverse(*q)
            except ZeroDivisionError:
                continue
            if back != p:
                return False
            done += 1
            if done >= samples:
                break
        return True


def reparametrize_ruled(R: RuledSurface) -> Tuple[RationalSurface, BirationalMap, Tuple[int, int, int]]:
    """Projectable form of a ruled surface.

    With ``sbar = (c0 + c1 s)/d3`` and ``ubar = u`` the surface becomes
    ``((a0 c1 - a1 c0 + a1 d3 sbar)/(c1 d1), (b0 c1 - b1 c0 + b1 d3 sbar)/(c1 d2), sbar)``.
    When ``c1 == 0`` the coordinates are permuted first; the returned
    permutation maps new coordinate positions to original ones.
    """
    rows = [(R.a0, R.a1, R.d1), (R.b0, R.b1, R.d2), (R.c0, R.c1, R.d3)]
    for k in (2, 1, 0):
        if not rows[k][1].is_zero():
            break
    else:
        raise ImplicitizationError("degenerate ruled surface (a curve)")
    perm = tuple(i for i in range(3) if i != k) + (k,)
    u, s = R.params
    ub, sb = u, s  # new parameters keep the old names
    P = (u, s)
    c0, c1, d3 = (p.with_vars(P) for p in rows[k])
    sbar = MultiPoly.var(s, P)
    coords = []
    for i in perm[:2]:
        a0, a1, d = (p.with_vars(P) for p in rows[i])
        coords.append(RationalFunction(a0 * c1 - a1 * c0 + a1 * d3 * sbar, c1 * d))
    coords.append(RationalFunction(sbar))
    surface = RationalSurface(*coords, params=(ub, sb))
    fwd = (RationalFunction(MultiPoly.var(u, P)), RationalFunction(c0 + c1 * MultiPoly.var(s, P), d3))
    inv = (RationalFunction(MultiPoly.var(u, P)), RationalFunction(d3 * sbar - c0, c1))
    return surface, BirationalMap(fwd, inv, P, (ub, sb)), perm


def check_reparametrization(R: RuledSurface, surface: RationalSurface, bmap: BirationalMap,
                            perm, samples: int = 50, seed: int = 0) -> bool:
    """``R(u, s)`` equals the permuted ``surface(map(u, s))`` at random samples."""
    rng = random.Random(seed)
    orig = R.surface()
    done = 0
    for _ in range(samples * 10):
        a = Fraction(rng.randint(-40, 40), rng.randint(1, 7))
        b = Fraction(rng.randint(-40, 40), rng.randint(1, 7))
        try:
            want = orig.evaluate(a, b)
            got = surface.evaluate(*bmap.apply(a, b))
        except ZeroDivisionError:
            continue
        if any(got[i] != want[perm[i]] for i in range(3)):
            return False
        done += 1
        if done >= samples:
            break
    return True


# ---------------------------------------------------------------------------
# implicitization

@dataclass
class Implicitization:
    F: MultiPoly
    L: MultiPoly
    content: MultiPoly
    cylindrical: bool
    form: ProjectableForm


def _unpermute(F: MultiPoly, perm) -> MultiPoly:
    """Rename variables: the i-th coordinate of the projectable form is the
    original coordinate ``perm[i]``."""
    tmp = tuple(f"_{c}" for c in XYZ)
    G = F.with_vars(XYZ)
    G = MultiPoly._raw(tmp, dict(G.terms))
    mapping = {tmp[i]: MultiPoly.var(XYZ[perm[i]], XYZ) for i in range(3)}
    return G.compose(mapping, XYZ)


def implicitize_details(S: RationalSurface) -> Implicitization:
    form = projectable_form(S)
    T = form.surface
    u, s = T.params
    V = (u, s) + XYZ
    x, y, z = (MultiPoly.var(c, V) for c in XYZ)
    X, Y, Z = T.coords
    e1 = X.denom.with_vars(V) * x - X.numer.with_vars(V)
    e2 = Y.denom.with_vars(V) * y - Y.numer.with_vars(V)
    L0 = resultant(e1, e2, u)
    if L0.is_zero():
        raise ImplicitizationError("first resultant vanishes identically (improper or degenerate input)")
    content, L = content_primitive(L0, ("x", "y"))
    if L.is_constant():
        raise ImplicitizationError("first resultant is free of x and y (degenerate surface)")
    if L.degree(s) <= 0:
        F = squarefree_part(L)
        cylindrical = True
    else:
        e3 = Z.denom.with_vars(V) * z - Z.numer.with_vars(V)
        R = resultant(e3, L, s)
        if R.is_zero():
            raise ImplicitizationError("second resultant vanishes identically")
        F = squarefree_part(R)
        cylindrical = False
    F = _unpermute(F.with_vars(XYZ), form.perm).integer_primitive()
    return Implicitization(F, L.with_vars(("x", "y", s)), content, cylindrical, form)


def implicitize(S) -> MultiPoly:
    """Implicit equation ``F(x, y, z)`` of a projectable or ruled surface,
    squarefree, integer primitive, positive graded-lex leading coefficient."""
    if isinstance(S, RuledSurface):
        surf, _, perm = reparametrize_ruled(S)
        F = implicitize_details(surf).F
        return _unpermute(F, perm).integer_primitive()
    return implicitize_details(S).F


def verify_implicit(F: MultiPoly, S: RationalSurface) -> bool:
    """Symbolic check ``F(S(u, s)) == 0``."""
    numer, _ = compose_rational(F, dict(zip(XYZ, S.coords)), S.params)
    return numer.is_zero()


# ---------------------------------------------------------------------------
# the plane intersection curve

@dataclass
class PlaneCurve:
    """``F(S2(v, t)) = 0`` split into a curve part and vertical lines.

    ``G`` has no factor depending on ``v`` alone; ``V`` collects those
    factors (vertical lines).  ``full`` is the squarefree numerator over the
    least common denominator, before cancelling factors shared with the
    denominator.
    """

    G: MultiPoly
    V: MultiPoly
    full: MultiPoly
    params: Tuple[str, str]
    pole_factor: MultiPoly = field(default=None)

    @property
    def product(self) -> MultiPoly:
        return self.G * self.V


def _lcm(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return exact_divide(a * b, gcd(a, b))


def plane_curve(F: MultiPoly, S2: RationalSurface) -> PlaneCurve:
    v, t = S2.params
    P = S2.params
    degs = [F.degree(c) for c in XYZ]
    numer, denom = compose_rational(F, dict(zip(XYZ, S2.coords)), P)
    if numer.is_zero():
        raise SharedComponentError("surfaces share a component")
    L = MultiPoly.const(1, P)
    for c, d in zip(S2.coords, degs):
        if d > 0:
            L = _lcm(L, c.denom.with_vars(P) ** d)
    numer_L = exact_divide(numer, exact_divide(denom, L))
    full = squarefree_part(numer_L).with_vars(P)
    # cancel what the numerator shares with the denominator
    reduced = numer_L
    pole = MultiPoly.const(1, P)
    while True:
        g = gcd(reduced, L)
        if g.is_constant():
            break
        reduced = exact_divide(reduced, g)
        pole = pole * g
    Gs = squarefree_part(reduced).with_vars(P)
    if Gs.degree(t) <= 0:
        Vc, G = Gs, MultiPoly.const(1, P)
    else:
        Vc, G = content_primitive(Gs, (t,))
    V = Vc.integer_primitive() if not Vc.is_constant() else MultiPoly.const(1, P)
    return PlaneCurve(G.integer_primitive().with_vars(P), V.with_vars(P), full, P,
                      squarefree_part(pole).with_vars(P) if not pole.is_constant() else pole)


# ---------------------------------------------------------------------------
# singular locus report (extraneous component detection)

def singular_report(F: MultiPoly, S: Optional[RationalSurface] = None) -> Dict[str, object]:
    """Projection to the xy-plane of the singular curves of ``F = 0``.

    Curves of singular points are where geometric extraneous components
    typically live.  ``gcd_i Res_z(F, F_i)`` vanishes on their projection.
    When a parametrization is given, rational parameter samples are mapped
    to the surface and tested against the projection; ``no_preimage_found``
    records that none landed on it.  Components are reported, never removed.
    """
    F = F.with_vars(XYZ)
    report: Dict[str, object] = {"singular_projection": None, "no_preimage_found": None}
    if F.degree("z") <= 0:
        return report
    from .algebra import format_poly
    polys = [resultant(F, derivative(F, c), "z") for c in XYZ if F.degree(c) > 0]
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return report
    common = gcd_list(polys)
    if common.is_constant():
        return report
    common = squarefree_part(common).with_vars(("x", "y"))
    report["singular_projection"] = format_poly(common)
    if S is not None:
        rng = random.Random(0)
        hit = False
        for _ in range(200):
            a = Fraction(rng.randint(-30, 30), rng.randint(1, 5))
            b = Fraction(rng.randint(-30, 30), rng.randint(1, 5))
            try:
                pt = S.evaluate(a, b)
            except ZeroDivisionError:
                continue
            if common.subs({"x": pt[0], "y": pt[1]}).constant_value() == 0:
                hit = True
                break
        report["no_preimage_found"] = not hit
    return report
