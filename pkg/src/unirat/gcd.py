"""Multivariate polynomial gcd over an exact field.

Primitive polynomial remainder sequences on the last variable present, with
recursive content extraction.  Univariate gcds over a prime field drop to the
dense numpy routines.  Output is monic in the canonical term order.
"""

import numpy as np

from . import univar
from .poly import Poly


def poly_gcd(f, g):
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    if f.is_constant() or g.is_constant():
        return f.ring.one()
    vs = sorted(set(f.vars_present()) | set(g.vars_present()))
    if not vs:
        return f.ring.one()
    return _gcd_rec(f, g, vs).monic()


def _gcd_rec(f, g, vs):
    ring = f.ring
    if len(vs) == 1:
        return _gcd_univar(f, g, vs[0])
    x = vs[-1]
    cf, pf = content_and_primitive(f, x)
    cg, pg = content_and_primitive(g, x)
    c = poly_gcd(cf, cg)
    h = _prs(pf, pg, x)
    if h.is_zero():
        return ring.zero()
    if h.degree_in(x) == 0:
        return c
    _, hp = content_and_primitive(h, x)
    return c * hp


def content_and_primitive(f, x):
    """Content (gcd of the coefficients wrt x) and primitive part."""
    coeffs = list(f.coeff_in_var(x).values())
    c = coeffs[0]
    for q in coeffs[1:]:
        if c.is_constant() and not c.is_zero():
            break
        c = poly_gcd(c, q)
    c = c.monic()
    return c, f.divexact(c)


def _prs(f, g, x):
    """Primitive remainder sequence; the last nonzero member."""
    if f.degree_in(x) < g.degree_in(x):
        f, g = g, f
    while True:
        r = pseudo_rem(f, g, x)
        if r.is_zero():
            return g
        if r.degree_in(x) == 0:
            return r
        _, r = content_and_primitive(r, x)
        f, g = g, r


def pseudo_rem(f, g, x):
    """Remainder of lc(g)^k * f under division by g, viewed in x."""
    dg = g.degree_in(x)
    assert dg >= 0
    lcg = g.coeff_of(x, dg)
    r = f
    xi = f.ring.index[x] if isinstance(x, str) else x
    while not r.is_zero() and r.degree_in(x) >= dg:
        dr = r.degree_in(x)
        lcr = r.coeff_of(x, dr)
        shift = [0] * f.ring.nvars
        shift[xi] = dr - dg
        r = r * lcg - (g * lcr).mul_monomial(tuple(shift))
    return r


def _gcd_univar(f, g, x):
    ring = f.ring
    field = ring.field
    if getattr(field, "kind", None) == "prime":
        p = field.p
        h = univar.gcd(_to_dense(f, x, p), _to_dense(g, x, p), p)
        return _from_dense(ring, x, h)
    while not g.is_zero():
        f, g = g, _univar_rem(f, g, x)
    return f.monic()


def _univar_rem(f, g, x):
    field = f.ring.field
    dg = g.degree_in(x)
    lc_inv = field.inv(g.coeff_of(x, dg).constant() if dg == 0 else _lc(g, x))
    xi = f.ring.index[x] if isinstance(x, str) else x
    r = f
    while not r.is_zero() and r.degree_in(x) >= dg:
        dr = r.degree_in(x)
        c = field.mul(_lc(r, x), lc_inv)
        shift = [0] * f.ring.nvars
        shift[xi] = dr - dg
        r = r - g.mul_monomial(tuple(shift), c)
    return r


def _lc(f, x):
    return f.coeff_of(x, f.degree_in(x)).constant()


def _to_dense(f, x, p):
    xi = f.ring.index[x] if isinstance(x, str) else x
    if f.is_zero():
        return np.zeros(0, dtype=np.int64)
    d = f.degree_in(x)
    a = np.zeros(d + 1, dtype=np.int64)
    for e, c in f.terms.items():
        a[e[xi]] = c
    return a


def _from_dense(ring, x, a):
    xi = ring.index[x] if isinstance(x, str) else x
    out = {}
    for i in range(len(a)):
        c = int(a[i])
        if c:
            e = [0] * ring.nvars
            e[xi] = i
            out[tuple(e)] = c
    return Poly(ring, out)


def poly_lcm(f, g):
    if f.is_zero() or g.is_zero():
        return f.ring.zero()
    return (f * g).divexact(poly_gcd(f, g)).monic()


def gcd_many(polys):
    it = [q for q in polys if not q.is_zero()]
    if not it:
        raise ValueError("gcd of an empty or all-zero family")
    acc = it[0]
    for q in it[1:]:
        if acc.is_constant():
            break
        acc = poly_gcd(acc, q)
    return acc.monic()
