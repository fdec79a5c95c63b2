"""Dense recursive integer polynomials.

A polynomial in ``u + 1`` variables is a list of coefficients, highest degree
first, where each coefficient is a polynomial in ``u`` variables (plain ints at
level 0).  The zero polynomial is ``[]`` at every level.  These routines are the
fast path behind :mod:`surfint.algebra`; nothing here knows about variable
names or rational coefficients.
"""

import os
from math import gcd as igcd

from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dmp_gcd as _sympy_dmp_gcd

try:  # optional accelerated backend
    import flint as _flint
except ImportError:  # pragma: no cover - depends on the environment
    _flint = None

USE_FLINT = _flint is not None and os.environ.get("SURFINT_NO_FLINT") != "1"


class NotExactDivision(ArithmeticError):
    pass


def strip(f):
    i = 0
    n = len(f)
    while i < n and not f[i]:
        i += 1
    return f[i:] if i else f


def degree(f):
    return len(f) - 1


def ground(c, u):
    """Constant ``c`` at level ``u``."""
    if not c:
        return []
    for _ in range(u):
        c = [c]
    return [c] if u >= 0 else c


def one(u):
    return ground(1, u)


def is_ground(f, u):
    while u > 0:
        if len(f) > 1:
            return False
        if not f:
            return True
        f = f[0]
        u -= 1
    return len(f) <= 1


def ground_value(f, u):
    """Integer value of a constant polynomial."""
    for _ in range(u + 1):
        if not f:
            return 0
        f = f[0]
    return f


def neg(f, u):
    if u == 0:
        return [-c for c in f]
    return [neg(c, u - 1) for c in f]


def add(f, g, u):
    if not f:
        return g
    if not g:
        return f
    df, dg = len(f), len(g)
    if u == 0:
        if df == dg:
            return strip([a + b for a, b in zip(f, g)])
        if df > dg:
            k = df - dg
            return f[:k] + [a + b for a, b in zip(f[k:], g)]
        k = dg - df
        return g[:k] + [a + b for a, b in zip(f, g[k:])]
    v = u - 1
    if df == dg:
        return strip([add(a, b, v) for a, b in zip(f, g)])
    if df > dg:
        k = df - dg
        return f[:k] + [add(a, b, v) for a, b in zip(f[k:], g)]
    k = dg - df
    return g[:k] + [add(a, b, v) for a, b in zip(f, g[k:])]


def sub(f, g, u):
    return add(f, neg(g, u), u)


def mul_ground(f, c, u):
    if not c or not f:
        return []
    if u == 0:
        return [a * c for a in f]
    return [mul_ground(a, c, u - 1) for a in f]


def quo_ground(f, c, u):
    """Exact division of every integer coefficient by ``c``."""
    if u == 0:
        out = []
        for a in f:
            q, r = divmod(a, c)
            if r:
                raise NotExactDivision("coefficient not divisible")
            out.append(q)
        return out
    return [quo_ground(a, c, u - 1) for a in f]


def mul(f, g, u):
    if not f or not g:
        return []
    df, dg = len(f) - 1, len(g) - 1
    if u == 0:
        if df == 0:
            c = f[0]
            return [c * b for b in g]
        if dg == 0:
            c = g[0]
            return [a * c for a in f]
        h = [0] * (df + dg + 1)
        for i, a in enumerate(f):
            if a:
                for j, b in enumerate(g):
                    h[i + j] += a * b
        return strip(h)
    v = u - 1
    h = [[] for _ in range(df + dg + 1)]
    for i, a in enumerate(f):
        if not a:
            continue
        for j, b in enumerate(g):
            if b:
                h[i + j] = add(h[i + j], mul(a, b, v), v)
    return strip(h)


def mul_term(f, c, k, u):
    """``f * c * x^k`` with ``c`` a level ``u-1`` polynomial (int at level 0)."""
    if not f or not c:
        return []
    if u == 0:
        return [a * c for a in f] + [0] * k
    v = u - 1
    return [mul(a, c, v) for a in f] + [[] for _ in range(k)]


def power(f, n, u):
    if n == 0:
        return one(u)
    result = None
    base = f
    while n:
        if n & 1:
            result = base if result is None else mul(result, base, u)
        n >>= 1
        if n:
            base = mul(base, base, u)
    return result


def exquo(f, g, u):
    """Exact quotient ``f / g``; raises :class:`NotExactDivision` otherwise."""
    if not g:
        raise ZeroDivisionError("division by zero polynomial")
    if not f:
        return []
    if u == 0:
        return _dup_exquo(f, g)
    dg = len(g) - 1
    lc = g[0]
    v = u - 1
    r = f
    q = [[] for _ in range(max(len(f) - dg, 0))]
    while r and len(r) - 1 >= dg:
        k = len(r) - 1 - dg
        c = exquo(r[0], lc, v)
        q[len(q) - 1 - k] = c
        r = sub(r, mul_term(g, c, k, u), u)
    if r:
        raise NotExactDivision("polynomial division has a remainder")
    return strip(q)


def _dup_exquo(f, g):
    dg = len(g) - 1
    lc = g[0]
    r = list(f)
    n = len(r) - dg
    if n <= 0:
        raise NotExactDivision("polynomial division has a remainder")
    q = [0] * n
    for i in range(n):
        a = r[i]
        if a:
            c, rem = divmod(a, lc)
            if rem:
                raise NotExactDivision("coefficient not divisible")
            q[i] = c
            for j in range(1, dg + 1):
                r[i + j] -= c * g[j]
    if any(r[n:]):
        raise NotExactDivision("polynomial division has a remainder")
    return strip(q)


def prem(f, g, u):
    """Pseudo-remainder of ``f`` by ``g`` in the main variable."""
    df, dg = len(f) - 1, len(g) - 1
    if dg < 0:
        raise ZeroDivisionError("division by zero polynomial")
    r = f
    if df < dg:
        return r
    N = df - dg + 1
    lc = g[0]
    v = u - 1
    while True:
        dr = len(r) - 1
        if dr < dg:
            break
        j = dr - dg
        N -= 1
        R = mul_term(r, lc, 0, u) if u else [a * lc for a in r]
        G = mul_term(g, r[0], j, u)
        r = sub(R, G, u)
    if N:
        c = power(lc, N, v) if u else lc ** N
        r = mul_term(r, c, 0, u) if u else [a * c for a in r]
    return r


def content(f, u):
    """GCD of the coefficients (a level ``u-1`` polynomial, or int at level 0)."""
    if u == 0:
        g = 0
        for a in f:
            g = igcd(g, a)
            if g == 1:
                break
        if f and f[0] < 0:
            g = -g
        return g
    v = u - 1
    c = []
    for a in f:
        c = gcd(c, a, v)
        if is_ground(c, v) and c and abs(ground_value(c, v)) == 1:
            break
    if f and c and _sign_of_lc(f, u) != _sign_of_lc(c, v):
        c = neg(c, v)
    return c


def primitive(f, u):
    if not f:
        return [], []
    c = content(f, u)
    if u == 0:
        return c, [a // c for a in f]
    return c, [exquo(a, c, u - 1) for a in f]


def int_content(f, u):
    """Positive GCD of all integer coefficients."""
    if u == 0:
        g = 0
        for a in f:
            g = igcd(g, a)
        return g
    g = 0
    for a in f:
        g = igcd(g, int_content(a, u - 1))
        if g == 1:
            return 1
    return g


def _sign_of_lc(f, u):
    while u >= 0:
        if not f:
            return 0
        f = f[0]
        u -= 1
    return 1 if f > 0 else -1


def lc_sign(f, u):
    return _sign_of_lc(f, u)


def _to_int(f, u):
    """Convert a sympy dense polynomial (nested zeros) to this module's form."""
    if u == 0:
        return strip([int(a) for a in f])
    return strip([_to_int(a, u - 1) for a in f])


def _to_sympy(f, u):
    """Sympy writes the zero polynomial at level ``u`` as ``u`` nested lists."""
    if u == 0:
        return [ZZ(a) for a in f]
    if not f:
        return ground(0, u) or _sympy_zero(u)
    return [_to_sympy(a, u - 1) for a in f]


def _sympy_zero(u):
    z = []
    for _ in range(u):
        z = [z]
    return z


def gcd(f, g, u):
    """Greatest common divisor over the integers with positive leading
    coefficient (recursively leading)."""
    if not f:
        h = g
    elif not g:
        h = f
    elif u == 0 and len(f) == 1 and len(g) == 1:
        return [igcd(f[0], g[0])]
    elif USE_FLINT and u >= 1:
        h = _from_flint(_to_flint(f, u).gcd(_to_flint(g, u)), u)
    else:
        h = _to_int(_sympy_dmp_gcd(_to_sympy(f, u), _to_sympy(g, u), u, ZZ), u)
    if h and _sign_of_lc(h, u) < 0:
        h = neg(h, u)
    return h


def diff(f, u):
    """Derivative in the main variable."""
    n = len(f) - 1
    if n <= 0:
        return []
    if u == 0:
        return strip([a * (n - i) for i, a in enumerate(f[:-1])])
    return strip([mul_ground(a, n - i, u - 1) for i, a in enumerate(f[:-1])])


def eval_main(f, num, den, u):
    """``den^deg(f) * f(num/den)`` in the main variable (a level ``u-1``
    polynomial, or an int at level 0)."""
    if not f:
        return 0 if u == 0 else []
    if u == 0:
        acc = 0
        dpow = 1
        for a in f:
            acc = acc * num + a * dpow
            dpow *= den
        return acc
    v = u - 1
    acc = []
    dpow = 1
    for a in f:
        acc = add(mul_ground(acc, num, v), mul_ground(a, dpow, v), v)
        dpow *= den
    return acc


def subresultants(f, g, u):
    """Subresultant PRS of ``f`` and ``g`` (``deg f >= deg g >= 0``).

    Returns the list of remainders and the list of their scaling factors, so
    that the last factor is the resultant when the last remainder is constant
    in the main variable.
    """
    n, m = len(f) - 1, len(g) - 1
    v = u - 1
    R = [f, g]
    d = n - m
    b = ground(-1 if (d + 1) % 2 else 1, v) if u else (-1) ** (d + 1)
    h = prem(f, g, u)
    h = mul_term(h, b, 0, u) if u else [a * b for a in h]
    lc = g[0]
    c = power(lc, d, v) if u else lc ** d
    S = [one(v) if u else 1, c]
    c = neg(c, v) if u else -c
    while h:
        k = len(h) - 1
        R.append(h)
        f, g, m, d = g, h, k, m - k
        if u:
            b = mul(neg(lc, v), power(c, d, v), v)
            h = prem(f, g, u)
            h = [exquo(ch, b, v) for ch in h]
        else:
            b = -lc * c ** d
            h = prem(f, g, u)
            h = _dup_quo_exact_ground(h, b)
        lc = g[0]
        if d > 1:
            if u:
                p = power(neg(lc, v), d, v)
                q = power(c, d - 1, v)
                c = exquo(p, q, v)
            else:
                p = (-lc) ** d
                q = c ** (d - 1)
                c, r = divmod(p, q)
                if r:
                    raise NotExactDivision("subresultant scaling not exact")
        else:
            c = neg(lc, v) if u else -lc
        S.append(neg(c, v) if u else -c)
    return R, S


def _dup_quo_exact_ground(f, c):
    out = []
    for a in f:
        q, r = divmod(a, c)
        if r:
            raise NotExactDivision("subresultant coefficient not exact")
        out.append(q)
    return out


def resultant(f, g, u):
    """Resultant with respect to the main variable (level ``u-1`` result)."""
    if USE_FLINT and u >= 1 and f and g and len(f) > 1 and len(g) > 1:
        return _flint_resultant(f, g, u)
    return prs_resultant(f, g, u)


_CTX = {}


def _flint_ctx(n):
    if n not in _CTX:
        _CTX[n] = _flint.fmpz_mpoly_ctx.get(tuple(f"x{i}" for i in range(n)), "lex")
    return _CTX[n]


def _to_flint(f, u):
    return _flint_ctx(u + 1).from_dict(to_dict(f, u))


def _from_flint(p, u):
    return from_dict({e: int(c) for e, c in p.to_dict().items()}, u)


def _flint_resultant(f, g, u):
    r = _to_flint(f, u).resultant(_to_flint(g, u), "x0")
    # result lives in the same context with x0 absent
    terms = {e[1:]: int(c) for e, c in r.to_dict().items()}
    return from_dict(terms, u - 1) if u > 1 else _dense_const(terms)


def _dense_const(terms):
    return from_dict(terms, 0)


def prs_resultant(f, g, u):
    """Resultant by the subresultant PRS (pure Python)."""
    v = u - 1
    zero = [] if u else 0
    if not f or not g:
        return zero
    n, m = len(f) - 1, len(g) - 1
    if n == 0 and m == 0:
        return one(v) if u else 1
    if n == 0:
        return power(f[0], m, v) if u else f[0] ** m
    if m == 0:
        return power(g[0], n, v) if u else g[0] ** n
    sign = 1
    if n < m:
        f, g = g, f
        if (n * m) % 2:
            sign = -1
    R, S = subresultants(f, g, u)
    if len(R[-1]) - 1 > 0:
        return zero
    res = S[-1]
    if sign < 0:
        res = neg(res, v) if u else -res
    return res


def swap_levels(f, u, order):
    """Reorder variables: ``order[i]`` is the old index of new variable ``i``."""
    terms = to_dict(f, u)
    new = {}
    for e, c in terms.items():
        new[tuple(e[i] for i in order)] = c
    return from_dict(new, u)


def to_dict(f, u):
    out = {}
    _to_dict(f, u, (), out)
    return out


def _to_dict(f, u, prefix, out):
    n = len(f) - 1
    if u == 0:
        for i, a in enumerate(f):
            if a:
                out[prefix + (n - i,)] = a
        return
    for i, a in enumerate(f):
        if a:
            _to_dict(a, u - 1, prefix + (n - i,), out)


def from_dict(terms, u):
    if not terms:
        return []
    if u == 0:
        n = max(e[0] for e in terms)
        f = [0] * (n + 1)
        for e, c in terms.items():
            f[n - e[0]] += c
        return strip(f)
    groups = {}
    for e, c in terms.items():
        groups.setdefault(e[0], {})[e[1:]] = c
    n = max(groups)
    f = [[] for _ in range(n + 1)]
    for k, sub_terms in groups.items():
        f[n - k] = from_dict(sub_terms, u - 1)
    return strip(f)
