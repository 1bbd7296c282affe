"""Ambient spaces: projective, products of projectives, and the weighted
blow-up ambients used for hypersurfaces singular along a linear subspace.

A Space is a graded Cox ring plus the partition of its variables into
blocks, one block per projective factor.  Points are coordinate lists over
the field, nonzero in every block.
"""

from .poly import PolyRing, _monomials


class Space:
    def __init__(self, ring, blocks, weights=None):
        self.ring = ring
        self.blocks = tuple(tuple(b) for b in blocks)
        covered = sorted(i for b in self.blocks for i in b)
        assert covered == list(range(ring.nvars)), "blocks must partition the variables"
        self.weights = weights

    @property
    def field(self):
        return self.ring.field

    @property
    def dim(self):
        return sum(len(b) - 1 for b in self.blocks)

    def block_names(self, k):
        return [self.ring.names[i] for i in self.blocks[k]]

    def is_valid_point(self, pt):
        f = self.field
        if len(pt) != self.ring.nvars:
            return False
        return all(any(not f.is_zero(pt[i]) for i in b) for b in self.blocks)

    def normalize_point(self, pt):
        """Scale each block so its last nonzero coordinate is one."""
        f = self.field
        out = list(pt)
        for b in self.blocks:
            j = next(i for i in reversed(b) if not f.is_zero(out[i]))
            c = f.inv(out[j])
            for i in b:
                out[i] = f.mul(out[i], c)
        return out

    def random_point(self, rng):
        f = self.field
        while True:
            pt = [f.random(rng) for _ in range(self.ring.nvars)]
            if self.is_valid_point(pt):
                return pt

    def __repr__(self):
        return "Space(%s)" % " x ".join("P^%d" % (len(b) - 1) for b in self.blocks)


def proj_space(field, n, name="z"):
    """P^n with homogeneous coordinates name0 .. name<n>."""
    names = ["%s%d" % (name, i) for i in range(n + 1)]
    ring = PolyRing(field, names, grading=((1,) * (n + 1),))
    return Space(ring, (tuple(range(n + 1)),))


def product_space(field, specs):
    """Product of projective spaces; specs is a list of (prefix, dim)."""
    names = []
    blocks = []
    for prefix, d in specs:
        start = len(names)
        names += ["%s%d" % (prefix, i) for i in range(d + 1)]
        blocks.append(tuple(range(start, start + d + 1)))
    grading = tuple(
        tuple(1 if i in set(b) else 0 for i in range(len(names)))
        for b in blocks)
    return Space(PolyRing(field, names, grading=grading), blocks)


def weighted_blowup_space(field, m, weights, xname="x", yname="y"):
    """Ambient of the blow-up construction: variables x0..x<m>, y0..y<r>,
    graded by x_i -> (1, 0) and y_j -> (-a_j, 1) for the given weight list."""
    r = len(weights) - 1
    xnames = ["%s%d" % (xname, i) for i in range(m + 1)]
    ynames = ["%s%d" % (yname, j) for j in range(r + 1)]
    names = xnames + ynames
    row1 = tuple([1] * (m + 1) + [-int(a) for a in weights])
    row2 = tuple([0] * (m + 1) + [1] * (r + 1))
    ring = PolyRing(field, names, grading=(row1, row2))
    return Space(ring, (tuple(range(m + 1)), tuple(range(m + 1, m + r + 2))),
                 weights=tuple(int(a) for a in weights))


def glue_chart(space, name="u"):
    """A dominant chart P^dim -> product space, linear in the new variables.

    Consecutive blocks share one coordinate: for blocks of dimensions
    d1, d2, ... the chart sends [u] to ([u_0:..:u_d1], [u_d1:..:u_{d1+d2}], ...).
    Substituting it into a multihomogeneous map is a pure renaming, so term
    counts are preserved exactly.

    Returns (source Space P^dim, {old var name: new var Poly}).
    """
    total = space.dim
    src = proj_space(space.field, total, name=name)
    gens = src.ring.gens()
    assign = {}
    offset = 0
    for b in space.blocks:
        for k, i in enumerate(b):
            assign[space.ring.names[i]] = gens[offset + k]
        offset += len(b) - 1
    return src, assign


def random_form(space, degs, rng, density=None):
    """Random multihomogeneous form of per-block degrees `degs`.

    `density`, when given, keeps each monomial with that percent chance;
    at least one term always survives so the form is never zero.
    """
    ring = space.ring
    assert len(degs) == len(space.blocks)
    per_block = []
    for b, d in zip(space.blocks, degs):
        per_block.append(list(_monomials(len(b), d, exact=True)))
    monos = [()]
    for b, choices in zip(space.blocks, per_block):
        monos = [m + c for m in monos for c in choices]
    full = []
    for m in monos:
        e = [0] * ring.nvars
        pos = 0
        for b in space.blocks:
            for i in b:
                e[i] = m[pos]
                pos += 1
        full.append(tuple(e))
    take = full if density is None else [
        m for m in full if rng.randint(100) < density]
    if not take:
        take = [full[rng.randrange(len(full))]]
    return ring.from_terms((ring.field.random(rng), m) for m in take)
