"""Hypersurfaces, linear subspaces, multiplicity, blow-ups along linear
centers, and the divisor <-> hypersurface dictionary for quadric bundles.

Conventions.  A dim-h subspace of P^{n+1} is standardized to
{z_0 = ... = z_{n-h} = 0}.  Blowing it up lands in the weighted ambient with
weights (1, 0, ..., 0): variables x_0..x_{n-h}, y_0..y_{h+1}, substitution
z_i -> x_i y_0 for i <= n-h and z_{n-h+1+j} -> y_{1+j}.  The exceptional
divisor is y_0 = 0, a bidegree (m, d-m) divisor in P^{n-h} x P^h.
"""

from . import linalg
from .gcd import gcd_many
from .maps import RationalMap
from .poly import Poly, PolyRing
from .spaces import product_space, proj_space, weighted_blowup_space


class Hypersurface:
    def __init__(self, space, f):
        assert isinstance(f, Poly) and f.ring == space.ring
        assert not f.is_zero(), "hypersurface needs a nonzero equation"
        self.space = space
        self.f = f
        self.multidegree = f.multidegree()

    @property
    def degree(self):
        assert len(self.space.blocks) == 1
        return self.multidegree[0]

    @property
    def dim(self):
        return self.space.dim - 1

    def __repr__(self):
        return "Hypersurface(deg %s in %r, %d terms)" % (
            self.multidegree, self.space, len(self.f))


class MultidegreeDivisor:
    """A divisor in a product or weighted ambient, tracked by its equation."""

    def __init__(self, space, f):
        assert isinstance(f, Poly) and f.ring == space.ring
        assert not f.is_zero()
        self.space = space
        self.f = f
        self.multidegree = f.multidegree()

    @property
    def dim(self):
        return self.space.dim - 1

    def y_degree(self):
        return self.multidegree[-1]

    def sigma_coeffs(self, block=1):
        """Decompose f = sum over monomials y^beta of sigma_beta(x) y^beta.

        Returns {beta exponent tuple (block variables only): Poly in the
        remaining variables}."""
        idxs = self.space.blocks[block]
        out = {}
        for e, c in self.f.terms.items():
            beta = tuple(e[i] for i in idxs)
            rest = list(e)
            for i in idxs:
                rest[i] = 0
            out.setdefault(beta, {})[tuple(rest)] = c
        return {b: Poly(self.f.ring, t) for b, t in out.items()}

    def __repr__(self):
        return "MultidegreeDivisor(%s in %r, %d terms)" % (
            self.multidegree, self.space, len(self.f))


class LinearSubspace:
    """Linear subspace of a projective space, cut out by independent linear
    forms."""

    def __init__(self, space, equations):
        assert len(space.blocks) == 1
        self.space = space
        eqs = []
        for q in equations:
            assert q.ring == space.ring and q.total_degree() == 1
            eqs.append(q)
        self.equations = eqs
        self.matrix = [linear_coeffs(q) for q in eqs]
        f = space.field
        assert linalg.rank(f, self.matrix) == len(eqs), "dependent equations"
        self.dim = space.ring.nvars - 1 - len(eqs)

    @classmethod
    def coordinate(cls, space, vanishing):
        ring = space.ring
        gens = ring.gens()
        return cls(space, [gens[i] for i in vanishing])

    @classmethod
    def from_spanning_points(cls, space, points):
        f = space.field
        rows = [list(p) for p in points]
        eqs = linalg.kernel(f, rows)
        return cls(space, [poly_from_linear(space.ring, v) for v in eqs])

    @property
    def codim(self):
        return len(self.equations)

    def contains_point(self, pt):
        f = self.space.field
        return all(f.is_zero(_dot(f, row, pt)) for row in self.matrix)

    def basis(self):
        """Spanning points."""
        return linalg.kernel(self.space.field, self.matrix)

    def random_point(self, rng):
        f = self.space.field
        b = self.basis()
        while True:
            cs = [f.random(rng) for _ in b]
            pt = [f.zero] * self.space.ring.nvars
            for c, v in zip(cs, b):
                for i in range(len(pt)):
                    pt[i] = f.add(pt[i], f.mul(c, v[i]))
            if any(not f.is_zero(x) for x in pt):
                return pt

    def standardizing_change(self):
        """(M, A = M^{-1}) with the property that substituting z -> M z moves
        this subspace to {z_0 = ... = z_{codim-1} = 0}: the i-th equation
        becomes the coordinate z_i.  Points transform by pt_new = A pt_old."""
        f = self.space.field
        n = self.space.ring.nvars
        a = linalg.extend_to_basis(f, self.matrix, n)
        m = linalg.inv_matrix(f, a)
        return m, a

    def __repr__(self):
        return "LinearSubspace(dim %d in %r)" % (self.dim, self.space)


def linear_coeffs(q):
    ring = q.ring
    out = [ring.field.zero] * ring.nvars
    for e, c in q.terms.items():
        i = next(j for j, k in enumerate(e) if k)
        out[i] = c
    return out


def poly_from_linear(ring, vec):
    return ring.from_terms(
        (c, tuple(1 if j == i else 0 for j in range(ring.nvars)))
        for i, c in enumerate(vec) if not ring.field.is_zero(c))


def _dot(f, row, pt):
    acc = f.zero
    for c, x in zip(row, pt):
        acc = f.add(acc, f.mul(c, x))
    return acc


def linear_change_poly(f, matrix):
    """f(M z): substitute z_i -> sum_j matrix[i][j] z_j."""
    ring = f.ring
    fld = ring.field
    gens = ring.gens()
    assign = {}
    for i, name in enumerate(ring.names):
        acc = ring.zero()
        for j, c in enumerate(matrix[i]):
            if not fld.is_zero(c):
                acc = acc + gens[j].scale(c)
        assign[name] = acc
    return f.substitute(assign, ring)


def mult_along(X, L):
    """Multiplicity of the hypersurface along the linear subspace: minimal
    degree of f in the subspace's equations."""
    assert L.space.ring == X.space.ring
    m, _ = L.standardizing_change()
    g = linear_change_poly(X.f, m)
    return g.min_degree_in_block(range(L.codim))


class BlowUp:
    """Result bundle of blow_up_along."""

    def __init__(self, strict, exceptional, blow_down, m, change, change_inv,
                 pullback_space):
        self.strict = strict
        self.exceptional = exceptional
        self.blow_down = blow_down
        self.m = m
        self.change = change
        self.change_inv = change_inv
        self.space = pullback_space


def blow_up_along(X, L, xname="x", yname="y"):
    """Blow up P^{n+1} along an h-plane contained in X.

    Returns a BlowUp with: strict transform (a divisor in the weights
    (1,0,...,0) ambient), exceptional divisor (bidegree (m, d-m) in
    P^{n-h} x P^h), and the blow-down map back to the original coordinates.
    The exact identity  f_std(x_i y_0, ..., y_{1+j}, ...) = y_0^m * strict.f
    is asserted on construction.
    """
    space = X.space
    field = space.field
    nz = space.ring.nvars            # n + 2
    c = L.codim                      # n - h + 1
    h = L.dim
    d = X.degree
    m_mat, a_mat = L.standardizing_change()
    f_std = linear_change_poly(X.f, m_mat)
    m = f_std.min_degree_in_block(range(c))
    if m < 1:
        raise ValueError("subspace not contained in the hypersurface")
    if m >= d:
        raise ValueError("hypersurface vanishes to full degree along the subspace")

    T = weighted_blowup_space(field, c - 1, (1,) + (0,) * (h + 1),
                              xname=xname, yname=yname)
    tg = T.ring.gens()
    xg = [tg[i] for i in T.blocks[0]]
    yg = [tg[i] for i in T.blocks[1]]
    assign = {}
    for i in range(c):
        assign[space.ring.names[i]] = xg[i] * yg[0]
    for j in range(h + 1):
        assign[space.ring.names[c + j]] = yg[1 + j]
    pullback = f_std.substitute(assign, T.ring)
    y0 = [0] * T.ring.nvars
    y0[T.blocks[1][0]] = m
    strict_f = pullback.div_monomial(tuple(y0))
    strict = MultidegreeDivisor(T, strict_f)
    assert strict.multidegree == (m, d - m)

    exc_space = product_space(field, [(xname, c - 1), ("e", h)])
    exc_assign = {}
    for i in range(c):
        exc_assign[T.ring.names[T.blocks[0][i]]] = exc_space.ring.var("%s%d" % (xname, i))
    exc_assign[T.ring.names[T.blocks[1][0]]] = exc_space.ring.zero()
    for j in range(h + 1):
        exc_assign[T.ring.names[T.blocks[1][1 + j]]] = exc_space.ring.var("e%d" % j)
    exc_f = strict_f.substitute(exc_assign, exc_space.ring)
    assert not exc_f.is_zero(), "exceptional stratum cannot vanish at minimal order"
    exceptional = MultidegreeDivisor(exc_space, exc_f)
    assert exceptional.multidegree == (m, d - m)

    down_comps_std = [xg[i] * yg[0] for i in range(c)] + [yg[1 + j] for j in range(h + 1)]
    down_comps = []
    for r in range(nz):
        acc = T.ring.zero()
        for k in range(nz):
            cf = m_mat[r][k]
            if not field.is_zero(cf):
                acc = acc + down_comps_std[k].scale(cf)
        down_comps.append(acc)
    blow_down = RationalMap(T, down_comps, (tuple(range(nz)),))
    return BlowUp(strict, exceptional, blow_down, m, m_mat, a_mat, T)


def divisor_to_hypersurface(D, zname="z"):
    """The birational hypersurface model of a y-degree-2 divisor on the
    weighted ambient with weights a_0 >= ... >= a_{h+1} >= 0.

    Returns (X, forward, backward, factor) where forward: D -> X and
    backward: X -> D are verified by exact composition, and
    substitute(X.f, forward) = factor * D.f exactly (factor a monomial).
    """
    T = D.space
    field = T.field
    a = T.weights if T.weights is not None else (0,) * len(T.blocks[1])
    assert all(a[i] >= a[i + 1] for i in range(len(a) - 1)), \
        "weights must be descending"
    assert D.y_degree() == 2, "y-degree must be 2"
    nx = len(T.blocks[0])            # n - h + 1
    ny = len(T.blocks[1])            # h + 2
    nm = nx - 1                      # n - h
    h = ny - 2
    n = nm + h
    delta = D.multidegree[0] + 2 * a[0]

    Z = proj_space(field, n + 1, name=zname)
    zg = Z.ring.gens()
    xn_name = T.ring.names[T.blocks[0][nm]]
    yl_name = T.ring.names[T.blocks[1][ny - 1]]
    g = D.f.dehomogenize(xn_name).dehomogenize(yl_name)
    ren = {xn_name: Z.ring.one(), yl_name: Z.ring.one()}
    for i in range(nm):
        ren[T.ring.names[T.blocks[0][i]]] = zg[i]
    for j in range(h + 1):
        ren[T.ring.names[T.blocks[1][j]]] = zg[nm + j]
    ghat = g.substitute(ren, Z.ring)
    fz = ghat.homogenize(n + 1, degree=delta + 2)
    X = Hypersurface(Z, fz)

    tg = T.ring.gens()
    xg = [tg[i] for i in T.blocks[0]]
    yg = [tg[i] for i in T.blocks[1]]
    fwd_comps = []
    for i in range(nm):
        fwd_comps.append(xg[i] * yg[ny - 1])
    for j in range(h + 1):
        fwd_comps.append(yg[j] * xg[nm] ** (a[j] - a[ny - 1] + 1))
    fwd_comps.append(xg[nm] * yg[ny - 1])
    forward = RationalMap(T, fwd_comps, (tuple(range(n + 2)),))

    bwd_x = [zg[i] for i in range(nm)] + [zg[n + 1]]
    bwd_y = [zg[nm + j] * zg[n + 1] ** (a[0] - a[j]) for j in range(h + 1)]
    bwd_y.append(zg[n + 1] ** (1 + a[0] - a[ny - 1]))
    backward = RationalMap(Z, bwd_x + bwd_y,
                           (tuple(range(nx)), tuple(range(nx, nx + ny))))

    sub = fz.substitute({Z.ring.names[k]: fwd_comps[k] for k in range(n + 2)},
                        T.ring)
    factor = sub.divexact(D.f)
    assert len(factor) == 1, "pullback factor must be a monomial"

    rt = forward.compose(backward).normalized(full_gcd=True)
    for k in range(n + 2):
        assert rt.components[k] == zg[k], "round trip failed to reduce to identity"
    lam = LinearSubspace.coordinate(Z, list(range(nm)) + [n + 1])
    lamp = LinearSubspace.coordinate(Z, list(range(nm, n + 1)) + [n + 1])
    return X, forward, backward, factor, lam, lamp


def cone_check(X):
    """Basis of the vertex space: all v with sum_i v_i df/dz_i identically 0.

    Empty list means X is not a cone."""
    ring = X.f.ring
    field = ring.field
    partials = [X.f.partial(i) for i in range(ring.nvars)]
    support = sorted({e for g in partials for e in g.terms})
    rows = []
    for e in support:
        rows.append([g.terms.get(e, field.zero) for g in partials])
    if not rows:
        return [[field.one if i == j else field.zero for i in range(ring.nvars)]
                for j in range(ring.nvars)]
    return linalg.kernel(field, rows)


def singular_codim_check(X, L, trials=8, rng=None):
    """Probabilistic check that the singular locus of X meets the subspace in
    dimension at most dim(L) - 2, by slicing with random lines inside L.

    Returns {"status": "PASS"} or {"status": "FAIL", "witness_line": (P, Q),
    "common_factor": Poly}.  A FAIL is exact: the restricted partials have a
    genuine common factor on the witness line.
    """
    assert rng is not None, "needs a seeded Stream"
    ring = X.f.ring
    field = X.space.field
    partials = [X.f.partial(i) for i in range(ring.nvars)]
    S = PolyRing(field, ["s_", "t_"])
    sg, tg = S.gens()
    for _ in range(trials):
        P = L.random_point(rng)
        Q = L.random_point(rng)
        if linalg.rank(field, [P, Q]) < 2:
            continue
        assign = {ring.names[i]: sg.scale(P[i]) + tg.scale(Q[i])
                  for i in range(ring.nvars)}
        restricted = [g.substitute(assign, S) for g in partials]
        nz = [g for g in restricted if not g.is_zero()]
        if not nz:
            return {"status": "FAIL", "witness_line": (P, Q),
                    "common_factor": S.one()}
        g = gcd_many(nz)
        if not g.is_constant():
            return {"status": "FAIL", "witness_line": (P, Q),
                    "common_factor": g}
    return {"status": "PASS"}
