"""Point, line, and plane searches over finite fields, plus bounded-height
rational point search.

All searches are deterministic given their Stream and report failure by
returning None (or raising SearchBudget for exhausted budgets) rather than
looping forever.  Containment of every returned witness is re-checked
exactly before it is returned.
"""

import numpy as np

from . import linalg, univar
from .poly import PolyRing


class SearchBudget(Exception):
    """A randomized search ran out of attempts."""


class UnsupportedSearch(Exception):
    """The requested search shape is outside what is implemented."""


# quadratic form helpers -----------------------------------------------------

def gram_matrix(Q):
    """Symmetric Gram matrix of a quadric; needs char != 2."""
    ring = Q.ring
    f = ring.field
    assert f.characteristic != 2
    n = ring.nvars
    half = f.inv(f.from_int(2))
    g = [[f.zero] * n for _ in range(n)]
    for e, c in Q.terms.items():
        idx = [i for i, k in enumerate(e) if k]
        if len(idx) == 1 and e[idx[0]] == 2:
            g[idx[0]][idx[0]] = c
        elif len(idx) == 2 and e[idx[0]] == 1 and e[idx[1]] == 1:
            i, j = idx
            g[i][j] = f.mul(c, half)
            g[j][i] = g[i][j]
        else:
            raise ValueError("not a quadratic form")
    return g


def eval_gram(field, g, u, v):
    acc = field.zero
    for i, gi in enumerate(g):
        if field.is_zero(u[i]):
            continue
        row = field.zero
        for j, c in enumerate(gi):
            if not field.is_zero(v[j]):
                row = field.add(row, field.mul(c, v[j]))
        acc = field.add(acc, field.mul(u[i], row))
    return acc


def restrict_gram(field, g, basis):
    """Gram matrix of the form restricted to the span of the basis rows."""
    return [[eval_gram(field, g, u, v) for v in basis] for u in basis]


def _combine(field, basis, coeffs):
    out = [field.zero] * len(basis[0])
    for c, v in zip(coeffs, basis):
        if field.is_zero(c):
            continue
        for i in range(len(out)):
            out[i] = field.add(out[i], field.mul(c, v[i]))
    return out


# point searches --------------------------------------------------------------

def point_on_quadric_gram(field, g, rng, tries=64):
    """Isotropic vector of a symmetric matrix over F_p, by random line
    slicing and a square root.  None if `tries` lines all fail (for p > 3
    this effectively never happens on an isotropic form)."""
    p = field.p
    n = len(g)
    for _ in range(tries):
        u = [rng.randint(p) for _ in range(n)]
        if all(x == 0 for x in u):
            continue
        a = eval_gram(field, g, u, u)
        if a == 0:
            return u
        v = [rng.randint(p) for _ in range(n)]
        b = eval_gram(field, g, u, v)
        c = eval_gram(field, g, v, v)
        if c == 0 and any(x != 0 for x in v):
            return v
        disc = (b * b - a * c) % p
        s = univar.sqrt_mod(disc, p)
        if s is None:
            continue
        # a t^2 + 2 b t + c = 0 for the point u*t + v
        t = ((-b + s) * pow(a, p - 2, p)) % p
        pt = [(t * ui + vi) % p for ui, vi in zip(u, v)]
        if any(x != 0 for x in pt):
            return pt
    return None


def find_point_on_quadric(Q, rng, tries=64):
    field = Q.ring.field
    g = gram_matrix(Q)
    pt = point_on_quadric_gram(field, g, rng, tries=tries)
    if pt is not None:
        assert field.is_zero(Q.evaluate(pt))
    return pt


def find_point_on_hypersurface(f, rng, tries=200):
    """A point of {f = 0} over F_p by restricting to random lines and taking
    roots of the resulting binary form."""
    ring = f.ring
    field = ring.field
    p = field.p
    n = ring.nvars
    S = PolyRing(field, ["s_", "t_"])
    for _ in range(tries):
        u = [rng.randint(p) for _ in range(n)]
        v = [rng.randint(p) for _ in range(n)]
        if linalg.rank(field, [u, v]) < 2:
            continue
        sg, tg = S.gens()
        r = f.substitute({ring.names[i]: sg.scale(u[i]) + tg.scale(v[i])
                          for i in range(n)}, S)
        if r.is_zero():
            return u
        dense = np.zeros(r.total_degree() + 1, dtype=np.int64)
        for e, c in r.dehomogenize(0).terms.items():
            dense[e[1]] = c
        dense = univar.trim(dense)
        if univar.is_zero(dense):
            return u
        for t0 in univar.roots(dense, p, rng.fork("roots")):
            pt = [(ui + t0 * vi) % p for ui, vi in zip(u, v)]
            if any(x != 0 for x in pt):
                assert field.is_zero(f.evaluate(pt))
                return pt
        # the point at t = infinity on the line is v itself
        if field.is_zero(f.evaluate(v)):
            return v
    return None


def _sylvester_resultant_u(g1, g2, uvar):
    """Resultant of two polynomials of u-degree <= 2 wrt u, as a Poly in the
    remaining variables."""
    ring = g1.ring
    a1 = [g1.coeff_of(uvar, k) for k in range(3)]
    a2 = [g2.coeff_of(uvar, k) for k in range(3)]
    z = ring.zero()
    m = [
        [a1[2], a1[1], a1[0], z],
        [z, a1[2], a1[1], a1[0]],
        [a2[2], a2[1], a2[0], z],
        [z, a2[2], a2[1], a2[0]],
    ]
    return _det_poly(m)


def _det_poly(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    acc = None
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [[m[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = m[0][j] * _det_poly(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc if acc is not None else m[0][0].ring.zero()


def find_point_on_two_quadrics(Q1, Q2, rng, tries=48):
    """A common point of two quadrics over F_p: slice with random 2-planes,
    eliminate with a Sylvester resultant, take roots."""
    ring = Q1.ring
    field = ring.field
    p = field.p
    n = ring.nvars
    S = PolyRing(field, ["s_", "t_", "u_"])
    sg, tg, ug = S.gens()
    for _ in range(tries):
        basis = [[rng.randint(p) for _ in range(n)] for _ in range(3)]
        if linalg.rank(field, basis) < 3:
            continue
        assign = {
            ring.names[i]: sg.scale(basis[0][i]) + tg.scale(basis[1][i])
            + ug.scale(basis[2][i])
            for i in range(n)}
        c1 = Q1.substitute(assign, S)
        c2 = Q2.substitute(assign, S)
        if c1.is_zero() or c2.is_zero():
            cand = _point_on_single_conic(c1 if c2.is_zero() else c2,
                                          S, basis, field, rng)
            if cand is not None:
                return _checked(Q1, Q2, cand)
            continue
        res = _sylvester_resultant_u(c1, c2, 2)
        if res.is_zero():
            # the conics share a component; slice the common curve with s=const
            for sval in range(4):
                cand = _common_root_at(c1, c2, field, sval, 1, rng)
                if cand is not None:
                    pt = _combine(field, basis, cand)
                    if any(x != 0 for x in pt):
                        return _checked(Q1, Q2, pt)
            continue
        dense = np.zeros(res.total_degree() + 1, dtype=np.int64)
        for e, c in res.dehomogenize(1).terms.items():
            dense[e[0]] = c
        dense = univar.trim(dense)
        roots = univar.roots(dense, p, rng.fork("r")) if not univar.is_zero(dense) else []
        svals = [(r, 1) for r in roots]
        if res.degree_in(0) < res.total_degree():
            svals.append((1, 0))
        for sv, tv in svals:
            cand = _common_root_at(c1, c2, field, sv, tv, rng)
            if cand is not None:
                pt = _combine(field, basis, cand)
                if any(x != 0 for x in pt):
                    return _checked(Q1, Q2, pt)
    return None


def _point_on_single_conic(c, S, basis, field, rng):
    if c.is_zero():
        return basis[0]
    g = gram_matrix(c)
    sol = point_on_quadric_gram(field, g, rng.fork("conic"), tries=32)
    if sol is None:
        return None
    return _combine(field, basis, sol)


def _common_root_at(c1, c2, field, sv, tv, rng):
    """Common u-root of the two conics at (s,t) = (sv,tv); coordinates in the
    plane, or None."""
    p = field.p
    u1 = _restrict_to_u(c1, field, sv, tv)
    u2 = _restrict_to_u(c2, field, sv, tv)
    if univar.is_zero(u1) and univar.is_zero(u2):
        return [sv, tv, 0]
    if univar.is_zero(u1) or univar.is_zero(u2):
        g = u2 if univar.is_zero(u1) else u1
    else:
        g = univar.gcd(u1, u2, p)
    if univar.deg(g) < 1:
        return None
    roots = univar.roots(g, p, rng.fork("u"))
    if not roots:
        return None
    return [sv, tv, roots[0]]


def _restrict_to_u(c, field, sv, tv):
    p = field.p
    out = np.zeros(3, dtype=np.int64)
    for e, cf in c.terms.items():
        out[e[2]] = (out[e[2]] + cf * pow(sv, e[0], p) * pow(tv, e[1], p)) % p
    return univar.trim(out)


def _checked(Q1, Q2, pt):
    f = Q1.ring.field
    assert f.is_zero(Q1.evaluate(pt)) and f.is_zero(Q2.evaluate(pt))
    return pt


# linear spaces in quadrics ----------------------------------------------------

def find_plane_in_quadric(Q, s, rng, tries=32):
    """Spanning points of an s-plane contained in the quadric {Q = 0} over
    F_p, by iterated polar slicing.  None on budget exhaustion."""
    ring = Q.ring
    field = ring.field
    N = ring.nvars - 1
    if s > (N - 1) // 2:
        raise ValueError("no s-plane: s exceeds floor((N-1)/2)")
    g = gram_matrix(Q)
    for _ in range(tries):
        pts = _grow_isotropic(field, [g], s + 1, rng)
        if pts is None:
            continue
        if _plane_in_all(field, [g], pts):
            return pts
    return None


def find_plane_in_ci(quadrics, s, rng, tries=48):
    """An s-plane contained in every one of the given quadrics.

    Implements the step-by-step enlargement: each new spanning point solves
    the polar linear conditions of the points found so far plus the quadric
    conditions themselves.  Supports up to two quadrics (the searches the
    pipelines need); more would require higher-codimension point search."""
    ring = quadrics[0].ring
    field = ring.field
    c = len(quadrics)
    N = ring.nvars - 1
    if N - s * (c + 1) - c < 0:
        raise ValueError("dimension count leaves no room for an s-plane")
    if c > 2:
        raise UnsupportedSearch("point search on >2 quadrics not implemented")
    grams = [gram_matrix(q) for q in quadrics]
    for _ in range(tries):
        pts = _grow_isotropic(field, grams, s + 1, rng)
        if pts is None:
            continue
        if _plane_in_all(field, grams, pts):
            return pts
    return None


def _grow_isotropic(field, grams, count, rng):
    """count points spanning a subspace isotropic for all the given Gram
    matrices; one attempt, None on dead ends."""
    n = len(grams[0])
    pts = []
    for _ in range(count):
        rows = []
        for g in grams:
            for q in pts:
                rows.append([eval_gram(field, g, q, [
                    field.one if i == j else field.zero for i in range(n)])
                    for j in range(n)])
        if rows:
            basis = linalg.kernel(field, rows)
        else:
            basis = [[field.one if i == j else field.zero for i in range(n)]
                     for j in range(n)]
        if len(basis) <= len(pts):
            return None
        rest = [restrict_gram(field, g, basis) for g in grams]
        if len(grams) == 1:
            sol = _iso_in_restricted(field, rest[0], rng)
        else:
            sol = _iso_in_restricted_pair(field, rest, rng)
        if sol is None:
            return None
        cand = _combine(field, basis, sol)
        if linalg.rank(field, pts + [cand]) <= len(pts):
            return None
        pts.append(cand)
    return pts


def _iso_in_restricted(field, g, rng):
    if all(field.is_zero(c) for row in g for c in row):
        return [field.one] + [field.zero] * (len(g) - 1)
    return point_on_quadric_gram(field, g, rng.fork("iso"), tries=48)


def _iso_in_restricted_pair(field, grams, rng):
    g1, g2 = grams
    z1 = all(field.is_zero(c) for row in g1 for c in row)
    z2 = all(field.is_zero(c) for row in g2 for c in row)
    if z1 and z2:
        return [field.one] + [field.zero] * (len(g1) - 1)
    if z1 or z2:
        return _iso_in_restricted(field, g2 if z1 else g1, rng)
    m = len(g1)
    ring = PolyRing(field, ["v%d" % i for i in range(m)])
    gens = ring.gens()
    q1 = _gram_to_poly(ring, gens, g1)
    q2 = _gram_to_poly(ring, gens, g2)
    return find_point_on_two_quadrics(q1, q2, rng.fork("pair"), tries=24)


def _gram_to_poly(ring, gens, g):
    field = ring.field
    acc = ring.zero()
    m = len(g)
    for i in range(m):
        for j in range(i, m):
            c = g[i][j] if i == j else field.add(g[i][j], g[j][i])
            if not field.is_zero(c):
                acc = acc + (gens[i] * gens[j]).scale(c)
    return acc


def _plane_in_all(field, grams, pts):
    for g in grams:
        for i in range(len(pts)):
            for j in range(i, len(pts)):
                if not field.is_zero(eval_gram(field, g, pts[i], pts[j])):
                    return False
    return True


# lines on an intersection of two quadrics in P^4 ------------------------------

def find_line_in_two_quadrics_p4(Q1, Q2, rng):
    """A line on the degree-4 del Pezzo surface {Q1 = Q2 = 0} in P^4 over
    F_p, if one is defined over F_p.

    Walks the singular members of the pencil: each rank-4 member is a cone
    whose ruling planes cut the surface in conics; lines appear exactly where
    such a conic degenerates and splits.  Returns two spanning points or
    None (the surface may genuinely have no F_p-lines)."""
    ring = Q1.ring
    field = ring.field
    p = field.p
    assert ring.nvars == 5
    g1 = gram_matrix(Q1)
    g2 = gram_matrix(Q2)
    members = _singular_pencil_members(field, g1, g2, rng)
    for lam, mu in members:
        gc = [[field.add(field.mul(lam, g1[i][j]), field.mul(mu, g2[i][j]))
               for j in range(5)] for i in range(5)]
        ker = linalg.kernel(field, gc)
        if len(ker) != 1:
            continue
        v = ker[0]
        # a pencil member independent of the cone
        other = g1 if not field.is_zero(mu) else g2
        line = _lines_via_cone(field, gc, other, v, rng)
        if line is not None:
            a, b = line
            if _on_both(field, Q1, Q2, a) and _on_both(field, Q1, Q2, b) \
                    and _line_in_both(field, g1, g2, a, b):
                return line
    return None


def _on_both(field, Q1, Q2, pt):
    return field.is_zero(Q1.evaluate(pt)) and field.is_zero(Q2.evaluate(pt))


def _line_in_both(field, g1, g2, a, b):
    for g in (g1, g2):
        if not (field.is_zero(eval_gram(field, g, a, a))
                and field.is_zero(eval_gram(field, g, a, b))
                and field.is_zero(eval_gram(field, g, b, b))):
            return False
    return True


def _singular_pencil_members(field, g1, g2, rng):
    """Roots of det(lam*g1 + mu*g2) in P^1(F_p)."""
    p = field.p
    # interpolate the degree-5 binary form det(t*g1 + g2) from 6 values
    xs = list(range(6))
    ys = []
    for t in xs:
        m = [[(t * g1[i][j] + g2[i][j]) % p for j in range(5)] for i in range(5)]
        ys.append(linalg.det(field, m))
    dense = univar.interp(xs, ys, p)
    out = []
    if not univar.is_zero(dense):
        for r in univar.roots(dense, p, rng.fork("pencil")):
            out.append((r % p, 1))
    else:
        for r in range(min(p, 6)):
            out.append((r, 1))
    # mu = 0 member (det g1 = 0) corresponds to degree drop
    if univar.deg(dense) < 5:
        out.append((1, 0))
    return out


def _lines_via_cone(field, gc, gother, vertex, rng):
    """Lines of {cone} cap {other quadric} in P^4: parametrize the cone's
    ruling planes through a Witt decomposition of the base quadric, then find
    parameters where the residual conic on the plane degenerates and splits."""
    p = field.p
    basis = _complement_basis(field, vertex)
    gq = restrict_gram(field, gc, basis)          # rank-4 quadric on P^3
    seg = _witt_segre(field, gq, rng)
    if seg is None:
        return None
    e = [_combine(field, basis, w) for w in seg]  # e0..e3 with q = z0 z1 - z2 z3
    for ruling in (0, 1):
        line = _line_on_ruling(field, gother, vertex, e, ruling, rng)
        if line is not None:
            return line
    return None


def _complement_basis(field, v):
    n = len(v)
    j = next(i for i in range(n) if not field.is_zero(v[i]))
    return [[field.one if r == c else field.zero for c in range(n)]
            for r in range(n) if r != j]


def _witt_segre(field, g, rng):
    """Coordinates e0..e3 (in the restricted space) with the form equal to
    z0 z1 - z2 z3; None when the quadric is not split over F_p."""
    p = field.p
    n = 4
    w0 = point_on_quadric_gram(field, g, rng.fork("w0"), tries=64)
    if w0 is None:
        return None
    # hyperbolic partner
    w1 = None
    for _ in range(64):
        cand = [rng.randint(p) for _ in range(n)]
        bv = eval_gram(field, g, w0, cand)
        if field.is_zero(bv):
            continue
        inv = field.inv(bv)
        cand = [field.mul(c, inv) for c in cand]   # B(w0, cand) = 1
        qc = eval_gram(field, g, cand, cand)
        # adjust to make cand isotropic: cand' = cand - (qc/2) w0
        half = field.inv(field.from_int(2))
        t = field.mul(qc, half)
        w1 = [field.sub(cand[i], field.mul(t, w0[i])) for i in range(n)]
        break
    if w1 is None:
        return None
    # orthogonal complement of the hyperbolic plane
    rows = []
    for w in (w0, w1):
        rows.append([eval_gram(field, g, w, [field.one if i == j else field.zero
                                             for i in range(n)])
                     for j in range(n)])
    comp = linalg.kernel(field, rows)
    if len(comp) != 2:
        return None
    a = eval_gram(field, g, comp[0], comp[0])
    b = eval_gram(field, g, comp[0], comp[1])
    c = eval_gram(field, g, comp[1], comp[1])
    # a s^2 + 2b st + c t^2 isotropic over F_p?
    if field.is_zero(a):
        u0 = comp[0]
    else:
        disc = field.sub(field.mul(b, b), field.mul(a, c))
        s = field.sqrt(disc)
        if s is None:
            return None
        t = field.mul(field.sub(s, b), field.inv(a))
        u0 = [field.add(field.mul(t, comp[0][i]), comp[1][i]) for i in range(4)]
        if all(field.is_zero(x) for x in u0):
            u0 = comp[0]
    # second hyperbolic pair inside the complement
    u1 = None
    for cand in (comp[0], comp[1],
                 [field.add(comp[0][i], comp[1][i]) for i in range(4)]):
        bv = eval_gram(field, g, u0, cand)
        if field.is_zero(bv):
            continue
        inv = field.inv(bv)
        cand = [field.mul(x, inv) for x in cand]
        qc = eval_gram(field, g, cand, cand)
        half = field.inv(field.from_int(2))
        t = field.mul(qc, half)
        u1 = [field.sub(cand[i], field.mul(t, u0[i])) for i in range(4)]
        break
    if u1 is None:
        return None
    # in basis (w0, w1, u0, -u1) the form is 2(z0 z1 - z2 z3); the factor 2
    # does not change the zero set, so the Segre ruling formulas apply as is
    u1 = [field.neg(x) for x in u1]
    return [w0, w1, u0, u1]


def _line_on_ruling(field, gother, vertex, e, ruling, rng):
    """Ruling `0`: planes span(vertex, a e0 + b e3, b e1 + a e2).
    Ruling `1`: planes span(vertex, c e0 + d e2, d e1 + c e3).
    Finds (a:b) making the residual conic of the other quadric on the plane
    degenerate and split over F_p."""
    p = field.p
    K = PolyRing(field, ["a_", "b_"])
    ag, bg = K.gens()

    def plane(aval, bval):
        if ruling == 0:
            p1 = [field.add(field.mul(aval, e[0][i]), field.mul(bval, e[3][i]))
                  for i in range(5)]
            p2 = [field.add(field.mul(bval, e[1][i]), field.mul(aval, e[2][i]))
                  for i in range(5)]
        else:
            p1 = [field.add(field.mul(aval, e[0][i]), field.mul(bval, e[2][i]))
                  for i in range(5)]
            p2 = [field.add(field.mul(bval, e[1][i]), field.mul(aval, e[3][i]))
                  for i in range(5)]
        return [list(vertex), p1, p2]

    # spanning vectors with entries linear in (a_, b_); the conic matrix of
    # the other quadric on the plane then has entries quadratic in (a_, b_)
    if ruling == 0:
        sv1 = [ag.scale(e[0][i]) + bg.scale(e[3][i]) for i in range(5)]
        sv2 = [bg.scale(e[1][i]) + ag.scale(e[2][i]) for i in range(5)]
    else:
        sv1 = [ag.scale(e[0][i]) + bg.scale(e[2][i]) for i in range(5)]
        sv2 = [bg.scale(e[1][i]) + ag.scale(e[3][i]) for i in range(5)]
    sv0 = [K.const(c) for c in vertex]
    span = [sv0, sv1, sv2]

    def bform(u, v):
        acc = K.zero()
        for i in range(5):
            if u[i].is_zero():
                continue
            row = K.zero()
            for j in range(5):
                if not v[j].is_zero():
                    row = row + v[j].scale(gother[i][j])
            acc = acc + u[i] * row
        return acc

    m = [[bform(span[i], span[j]) for j in range(3)] for i in range(3)]
    det = _det_poly(m)
    if det.is_zero():
        cand_params = [(t, 1) for t in range(min(p, 8))] + [(1, 0)]
    else:
        dense = np.zeros(det.total_degree() + 1, dtype=np.int64)
        for ex, c in det.dehomogenize(1).terms.items():
            dense[ex[0]] = c
        dense = univar.trim(dense)
        cand_params = []
        if not univar.is_zero(dense):
            cand_params = [(r, 1) for r in univar.roots(dense, p, rng.fork("det"))]
        if det.degree_in(0) < det.total_degree():
            cand_params.append((1, 0))
    for aval, bval in cand_params:
        pl = plane(aval, bval)
        if linalg.rank(field, pl) < 3:
            continue
        line = _split_conic_on_plane(field, gother, pl, rng)
        if line is not None:
            return line
    return None


def _split_conic_on_plane(field, g, plane_basis, rng):
    """The conic {other|_plane = 0} is degenerate here; extract a line of it
    over F_p if it splits.  Returns two spanning points in ambient
    coordinates."""
    gr = restrict_gram(field, g, plane_basis)
    ker = linalg.kernel(field, gr)
    if len(ker) == 0:
        return None
    if len(ker) == 3:
        # the whole plane lies in the quadric
        return [plane_basis[0], plane_basis[1]]
    if len(ker) == 2:
        # rank 1: a double line, spanned by the kernel directions
        return [_combine(field, plane_basis, ker[0]),
                _combine(field, plane_basis, ker[1])]
    # rank 2: pair of lines through the kernel point; split the residual
    v0 = ker[0]
    comp = _complement_basis(field, v0)
    a = eval_gram(field, gr, comp[0], comp[0])
    b = eval_gram(field, gr, comp[0], comp[1])
    c = eval_gram(field, gr, comp[1], comp[1])
    if field.is_zero(a):
        w = comp[0]
    else:
        disc = field.sub(field.mul(b, b), field.mul(a, c))
        s = field.sqrt(disc)
        if s is None:
            return None
        t = field.mul(field.sub(s, b), field.inv(a))
        w = [field.add(field.mul(t, comp[0][i]), comp[1][i]) for i in range(3)]
        if all(field.is_zero(x) for x in w):
            w = comp[0]
    p0 = _combine(field, plane_basis, v0)
    p1 = _combine(field, plane_basis, w)
    return [p0, p1]


# rational points of bounded height --------------------------------------------

def search_rational_point(f, height, rng, budget=2_000_000, require=None):
    """Search P^N(Q) for a point of {f = 0} with coordinates of absolute
    value <= height.

    Exhausts all points of height <= 2, then all points supported on <= 3
    coordinates up to the full height, then a seeded random sweep of
    full-support points, stopping after `budget` evaluations.  `require` is
    an optional predicate on the point (e.g. "off the subspace").  Returns a
    point as a list of ints or None.
    """
    ring = f.ring
    n = ring.nvars
    den = 1
    for c in f.terms.values():
        den = den * c.denominator // _gcd_int(den, c.denominator)
    terms = [(int(c * den), e) for e, c in f.terms.items()]

    checked = 0

    def ev(pt):
        acc = 0
        for c, e in terms:
            t = c
            for i, k in enumerate(e):
                if k:
                    t *= pt[i] ** k
            acc += t
        return acc

    def consider(pt):
        nonlocal checked
        if all(x == 0 for x in pt):
            return None
        checked += 1
        if ev(pt) == 0 and (require is None or require(pt)):
            return list(pt)
        return None

    # stage 1: dense small box
    small = 2
    for pt in _box_iter(n, small):
        if checked >= budget:
            return None
        r = consider(pt)
        if r is not None:
            return r
    # stage 2: sparse support up to full height
    import itertools
    for support_size in (1, 2, 3):
        for support in itertools.combinations(range(n), support_size):
            for vals in _box_iter(support_size, height):
                if checked >= budget:
                    return None
                pt = [0] * n
                for i, v in zip(support, vals):
                    pt[i] = v
                r = consider(pt)
                if r is not None:
                    return r
    # stage 3: seeded random full-support sweep
    while checked < budget:
        pt = [rng.randrange(-height, height + 1) for _ in range(n)]
        r = consider(pt)
        if r is not None:
            return r
    return None


def _box_iter(n, h):
    import itertools
    return itertools.product(range(-h, h + 1), repeat=n)


def _gcd_int(a, b):
    while b:
        a, b = b, a % b
    return abs(a) if a else 1
