"""Rational maps between products of projective spaces.

A RationalMap holds a source Space, component polynomials in the source Cox
ring, and the partition of the components into target blocks.  Composition
is exact substitution; normalization removes per-block common content.
"""

import numpy as np

from . import linalg
from .gcd import gcd_many
from .poly import Poly
from .spaces import Space, glue_chart, proj_space

# full polynomial gcd during normalization is skipped above this many total
# terms per block; monomial and scalar content always come out
GCD_TERM_GUARD = 60000


class RationalMap:
    def __init__(self, source, components, target_blocks=None):
        self.source = source
        self.components = list(components)
        assert self.components, "a map needs at least one component"
        r = self.components[0].ring
        for c in self.components:
            assert c.ring == r, "components must share the source ring"
        assert r == source.ring
        if target_blocks is None:
            target_blocks = (tuple(range(len(self.components))),)
        self.target_blocks = tuple(tuple(b) for b in target_blocks)
        covered = sorted(i for b in self.target_blocks for i in b)
        assert covered == list(range(len(self.components)))

    @property
    def field(self):
        return self.source.field

    def target_dim(self):
        return sum(len(b) - 1 for b in self.target_blocks)

    def block_components(self, k):
        return [self.components[i] for i in self.target_blocks[k]]

    def multidegrees(self):
        out = []
        for c in self.components:
            out.append(None if c.is_zero() else c.multidegree())
        return out

    def __repr__(self):
        degs = []
        for b in self.target_blocks:
            nz = [self.components[i] for i in b if not self.components[i].is_zero()]
            degs.append(nz[0].multidegree() if nz else "?")
        return "RationalMap(%r -> blocks %s, degrees %s)" % (
            self.source, [len(b) - 1 for b in self.target_blocks], degs)

    # normalization ----------------------------------------------------------

    def normalized(self, full_gcd="auto"):
        """Remove common content per target block: scalar and monomial always,
        full polynomial gcd when small or forced."""
        f = self.field
        new = list(self.components)
        for b in self.target_blocks:
            comps = [new[i] for i in b]
            nz = [c for c in comps if not c.is_zero()]
            if not nz:
                continue
            mc = nz[0].monomial_content()
            for c in nz[1:]:
                mc = tuple(min(a, k) for a, k in zip(mc, c.monomial_content()))
                if not any(mc):
                    break
            if any(mc):
                comps = [c if c.is_zero() else c.div_monomial(mc) for c in comps]
                nz = [c for c in comps if not c.is_zero()]
            total = sum(len(c) for c in nz)
            do_full = full_gcd is True or (full_gcd == "auto" and total <= GCD_TERM_GUARD)
            if do_full and len(nz) >= 2:
                g = gcd_many(nz)
                if not g.is_constant():
                    comps = [c if c.is_zero() else c.divexact(g) for c in comps]
                    nz = [c for c in comps if not c.is_zero()]
            _, lc = nz[0].leading()
            if not f.eq(lc, f.one):
                inv = f.inv(lc)
                comps = [c.scale(inv) for c in comps]
            for j, i in enumerate(b):
                new[i] = comps[j]
        return RationalMap(self.source, new, self.target_blocks)

    # evaluation -------------------------------------------------------------

    def evaluate(self, pt):
        """Component values at a source point; None if some target block
        vanishes entirely (the point is in the base locus of that block)."""
        vals = [c.evaluate(pt) for c in self.components]
        f = self.field
        for b in self.target_blocks:
            if all(f.is_zero(vals[i]) for i in b):
                return None
        return vals

    def compose(self, inner):
        """self o inner.  inner's target blocks must match self's source blocks
        dimension for dimension; substitution is by source variable order."""
        sb = self.source.blocks
        tb = inner.target_blocks
        assert len(sb) == len(tb), "block count mismatch in composition"
        assign = {}
        for bs, bt in zip(sb, tb):
            assert len(bs) == len(bt), "block size mismatch in composition"
            for i, j in zip(bs, bt):
                assign[self.source.ring.names[i]] = inner.components[j]
        comps = [c.substitute(assign, inner.source.ring) for c in self.components]
        return RationalMap(inner.source, comps, self.target_blocks)

    def flattened(self, name="u"):
        """Replace a product source by P^dim via the shared-coordinate chart;
        a pure renaming of monomials, so certificates transport verbatim."""
        if len(self.source.blocks) == 1:
            return self
        src, assign = glue_chart(self.source, name=name)
        comps = [c.substitute(assign, src.ring) for c in self.components]
        return RationalMap(src, comps, self.target_blocks)

    # differentials ----------------------------------------------------------

    def jacobian_rank_at(self, pt):
        """Rank of the induced map on affine charts at a source point.

        The point must evaluate with every target block nonzero.  Uses the
        exact chart formula rows (d_j phi_i * phi_r - phi_i * d_j phi_r).
        """
        f = self.field
        pt = self.source.normalize_point(pt)
        vals = [None] * len(self.components)
        grads = [None] * len(self.components)
        for i, c in enumerate(self.components):
            vals[i], grads[i] = eval_with_gradient(c, pt)
        drop_cols = set()
        for b in self.source.blocks:
            j = next(i for i in reversed(b) if f.eq(pt[i], f.one))
            drop_cols.add(j)
        cols = [j for j in range(self.source.ring.nvars) if j not in drop_cols]
        rows = []
        for b in self.target_blocks:
            r = next((i for i in b if not f.is_zero(vals[i])), None)
            if r is None:
                raise ValueError("point lies in the base locus of a target block")
            for i in b:
                if i == r:
                    continue
                rows.append([
                    f.sub(f.mul(grads[i][j], vals[r]), f.mul(vals[i], grads[r][j]))
                    for j in cols])
        if not rows:
            return 0
        return linalg.rank(f, rows)

    # coordinate changes -------------------------------------------------------

    def precompose_linear(self, matrix):
        """self o (linear automorphism of the source given by matrix acting on
        coordinates): substitute z_i -> sum_j matrix[i][j] z_j."""
        ring = self.source.ring
        f = self.field
        gens = ring.gens()
        assign = {}
        for i, name in enumerate(ring.names):
            acc = ring.zero()
            for j, c in enumerate(matrix[i]):
                if not f.is_zero(c):
                    acc = acc + gens[j].scale(c)
            assign[name] = acc
        comps = [c.substitute(assign, ring) for c in self.components]
        return RationalMap(self.source, comps, self.target_blocks)


def identity_map(space):
    return RationalMap(space, space.ring.gens(), space.blocks)


def eval_with_gradient(f, pt):
    """(f(pt), [df/dx_j(pt)]) in one pass, prefix/suffix products per term."""
    ring = f.ring
    field = ring.field
    nv = ring.nvars
    val = field.zero
    grad = [field.zero] * nv
    if f.is_zero():
        return val, grad
    maxd = [0] * nv
    for e in f.terms:
        for i, k in enumerate(e):
            if k > maxd[i]:
                maxd[i] = k
    pows = []
    for i in range(nv):
        row = [field.one]
        for _ in range(maxd[i]):
            row.append(field.mul(row[-1], pt[i]))
        pows.append(row)
    for e, c in f.terms.items():
        idxs = [i for i, k in enumerate(e) if k]
        m = len(idxs)
        if m == 0:
            val = field.add(val, c)
            continue
        pref = [field.one] * (m + 1)
        for a, i in enumerate(idxs):
            pref[a + 1] = field.mul(pref[a], pows[i][e[i]])
        val = field.add(val, field.mul(c, pref[m]))
        suf = field.one
        for a in range(m - 1, -1, -1):
            i = idxs[a]
            without = field.mul(pref[a], suf)
            dcoef = field.mul(c, field.from_int(e[i]))
            if not field.is_zero(dcoef):
                contrib = field.mul(dcoef, field.mul(without, pows[i][e[i] - 1]))
                grad[i] = field.add(grad[i], contrib)
            suf = field.mul(suf, pows[i][e[i]])
    return val, grad


def eval_many_fp(f, pts):
    """Evaluate an F_p polynomial at many points at once.

    pts: int64 array of shape (npts, nvars).  Returns int64 array (npts,).
    """
    p = f.ring.field.p
    pts = np.asarray(pts, dtype=np.int64) % p
    npts = pts.shape[0]
    out = np.zeros(npts, dtype=np.int64)
    if f.is_zero():
        return out
    nv = f.ring.nvars
    maxd = [0] * nv
    for e in f.terms:
        for i, k in enumerate(e):
            if k > maxd[i]:
                maxd[i] = k
    pows = []
    for i in range(nv):
        tbl = np.ones((maxd[i] + 1, npts), dtype=np.int64)
        for k in range(1, maxd[i] + 1):
            tbl[k] = (tbl[k - 1] * pts[:, i]) % p
        pows.append(tbl)
    for e, c in f.terms.items():
        t = np.full(npts, c % p, dtype=np.int64)
        for i, k in enumerate(e):
            if k:
                t = (t * pows[i][k]) % p
        out = (out + t) % p
    return out


def move_point_to_origin_matrix(field, pt, target_index):
    """Invertible matrix M with M e_target = pt, i.e. the coordinate change
    z -> M z sends the point e_target to pt under precompose_linear's action
    on maps (and pulls hypersurfaces through x -> M x).

    Returns (M, Minv)."""
    n = len(pt)
    j = next(i for i in range(n) if not field.is_zero(pt[i]))
    m = [[field.one if r == c else field.zero for c in range(n)] for r in range(n)]
    for r in range(n):
        m[r][target_index] = pt[r]
    if linalg.rank(field, m) < n:
        # column j of the identity is in the span of pt and the others; put
        # e_target there instead
        for r in range(n):
            m[r][j] = field.one if r == target_index else field.zero
    minv = linalg.inv_matrix(field, m)
    return m, minv


def product_map(space, maps):
    """Bundle maps with a common source into one map to the product target."""
    comps = []
    blocks = []
    for mp in maps:
        assert mp.source is space or mp.source.ring == space.ring
        start = len(comps)
        comps.extend(mp.components)
        assert len(mp.target_blocks) == 1
        blocks.append(tuple(range(start, start + len(mp.components))))
    return RationalMap(space, comps, tuple(blocks))


class MapTower:
    """A rational map kept as a chain of small maps instead of one expanded
    composite.

    stages[k] is a RationalMap whose source blocks start with stage k-1's
    target blocks (same sizes, same order) and may append fresh blocks; the
    fresh blocks become extra blocks of the tower's own source.  Expanding
    the composite would multiply coefficient counts stage by stage (the
    lifted fibration maps reach millions of terms two stages in), while
    every individual stage stays small.  Evaluation, Jacobian rank and
    serialization therefore all run stage by stage; exact vanishing of a
    target equation on the image is certified by per-stage polynomial
    identities, which substitution composes soundly."""

    def __init__(self, stages):
        stages = list(stages)
        assert stages, "a tower needs at least one stage"
        for st in stages:
            flat = tuple(i for b in st.target_blocks for i in b)
            assert flat == tuple(range(len(st.components))), \
                "tower stages need target blocks in component order"
        self.stages = stages
        self.field = stages[0].field
        sizes = [len(b) for b in stages[0].source.blocks]
        self.fresh = [()]
        for k in range(1, len(stages)):
            tb = stages[k - 1].target_blocks
            sb = stages[k].source.blocks
            assert len(sb) >= len(tb), "a stage dropped carried blocks"
            for a, b in zip(tb, sb):
                assert len(a) == len(b), "stage block size mismatch"
            fresh = tuple(range(len(tb), len(sb)))
            self.fresh.append(fresh)
            sizes.extend(len(sb[i]) for i in fresh)
        self.source_sizes = tuple(sizes)
        self.target_blocks = stages[-1].target_blocks

    def source_nvars(self):
        return sum(self.source_sizes)

    def target_dim(self):
        return sum(len(b) - 1 for b in self.target_blocks)

    def __repr__(self):
        return "MapTower(%d stages, source %s -> %d target blocks)" % (
            len(self.stages),
            "x".join("P^%d" % (s - 1) for s in self.source_sizes),
            len(self.target_blocks))

    def random_source_point(self, rng):
        f = self.field
        pt = []
        for size in self.source_sizes:
            while True:
                blk = [f.random(rng) for _ in range(size)]
                if any(not f.is_zero(x) for x in blk):
                    break
            pt.extend(blk)
        return pt

    def evaluate(self, pt):
        """Thread a source point through the stages; None if any stage sends
        it into a base locus (a target block vanishing entirely)."""
        n0 = sum(len(b) for b in self.stages[0].source.blocks)
        vals = list(pt[:n0])
        off = n0
        for k, st in enumerate(self.stages):
            if k:
                nf = sum(len(st.source.blocks[i]) for i in self.fresh[k])
                vals = vals + list(pt[off:off + nf])
                off += nf
            vals = st.evaluate(vals)
            if vals is None:
                return None
        return vals

    def eval_many(self, pts):
        """Batched evaluation over a prime field; pts is an int64 array of
        shape (npts, source_nvars).  Rows hitting a base locus come out as
        all-zero blocks, which callers filter."""
        p = self.field.p
        pts = np.asarray(pts, dtype=np.int64) % p
        n0 = sum(len(b) for b in self.stages[0].source.blocks)
        cur = pts[:, :n0]
        off = n0
        for k, st in enumerate(self.stages):
            if k:
                nf = sum(len(st.source.blocks[i]) for i in self.fresh[k])
                cur = np.concatenate([cur, pts[:, off:off + nf]], axis=1)
                off += nf
            cur = np.stack([eval_many_fp(c, cur) for c in st.components],
                           axis=1)
        return cur

    def _chain(self, pt, rows_for, ncols):
        """Ambient chain rule through the stages.

        rows_for(i) supplies the derivative row of tower source variable i
        with respect to the ncols ultimate parameters; pt is the full tower
        source point.  Returns (final values, final derivative rows)."""
        f = self.field
        n0 = sum(len(b) for b in self.stages[0].source.blocks)
        vals = list(pt[:n0])
        m = [rows_for(i) for i in range(n0)]
        off = n0
        for k, st in enumerate(self.stages):
            if k:
                nf = sum(len(st.source.blocks[i]) for i in self.fresh[k])
                for t in range(nf):
                    m.append(rows_for(off + t))
                vals = vals + list(pt[off:off + nf])
                off += nf
            amb = []
            new_vals = []
            for c in st.components:
                v, g = eval_with_gradient(c, vals)
                new_vals.append(v)
                amb.append(g)
            nxt = []
            for i in range(len(amb)):
                row = [f.zero] * ncols
                for t in range(len(vals)):
                    a = amb[i][t]
                    if f.is_zero(a):
                        continue
                    mt = m[t]
                    for j in range(ncols):
                        if not f.is_zero(mt[j]):
                            row[j] = f.add(row[j], f.mul(a, mt[j]))
                nxt.append(row)
            m = nxt
            vals = new_vals
        return vals, m

    def _chart_rank(self, vals, m, cols):
        f = self.field
        rows = []
        for b in self.target_blocks:
            r = next((i for i in b if not f.is_zero(vals[i])), None)
            if r is None:
                raise ValueError("point maps into a base locus")
            for i in b:
                if i == r:
                    continue
                rows.append([f.sub(f.mul(m[i][j], vals[r]),
                                   f.mul(vals[i], m[r][j])) for j in cols])
        if not rows:
            return 0
        return linalg.rank(f, rows)

    def jacobian_rank_at(self, pt):
        """Chart-Jacobian rank of the composite at a source point, by the
        ambient chain rule: the running matrix M holds the derivative of the
        current stage outputs with respect to every tower source variable.
        Stage inputs equal the previous stage outputs verbatim (no
        projective rescaling happens between stages), so multiplying the
        stage's ambient Jacobian onto M is exact.  The final projective
        quotient uses the same row formula as RationalMap.jacobian_rank_at;
        per source block one column at a nonzero coordinate is dropped,
        which costs nothing because the block's radial direction already
        lies in the kernel of those rows (Euler's relation)."""
        f = self.field
        nsrc = self.source_nvars()
        assert len(pt) == nsrc

        def unit(i):
            row = [f.zero] * nsrc
            row[i] = f.one
            return row

        vals, m = self._chain(pt, unit, nsrc)
        drop = set()
        pos = 0
        for size in self.source_sizes:
            j = next(pos + i for i in range(size)
                     if not f.is_zero(pt[pos + i]))
            drop.add(j)
            pos += size
        cols = [j for j in range(nsrc) if j not in drop]
        return self._chart_rank(vals, m, cols)


class RestrictedTower:
    """A tower precomposed with a linear map from one projective space.

    lin holds one coefficient matrix per tower source block; the block's
    value at a parameter point r is the matrix applied to r.  Restriction
    to a general linear subspace preserves dominance once the subspace
    dimension reaches the target dimension, which the caller checks by
    sampling ranks.  Keeping the restriction as data (instead of
    substituting it into the stages) leaves every stage certificate
    untouched: the composite vanishing statement is inherited because
    substitution of the linear forms commutes with the stage chain."""

    def __init__(self, tower, lin, source):
        assert isinstance(tower, MapTower)
        self.tower = tower
        self.lin = [[list(r) for r in block] for block in lin]
        assert len(self.lin) == len(tower.source_sizes)
        for block, size in zip(self.lin, tower.source_sizes):
            assert len(block) == size
        self.source = source
        self.field = tower.field
        self.target_blocks = tower.target_blocks
        self._rows = [row for block in self.lin for row in block]

    def __repr__(self):
        return "RestrictedTower(P^%d -> %r)" % (
            len(self.source.blocks[0]) - 1, self.tower)

    def target_dim(self):
        return self.tower.target_dim()

    def expand(self, pt):
        f = self.field
        out = []
        for row in self._rows:
            acc = f.zero
            for c, x in zip(row, pt):
                if not f.is_zero(c) and not f.is_zero(x):
                    acc = f.add(acc, f.mul(c, x))
            out.append(acc)
        return out

    def random_source_point(self, rng):
        f = self.field
        n = len(self.source.blocks[0])
        while True:
            pt = [f.random(rng) for _ in range(n)]
            if any(not f.is_zero(x) for x in pt):
                return pt

    def evaluate(self, pt):
        full = self.expand(pt)
        # a random parameter point may land a block at zero; report as base locus
        pos = 0
        f = self.field
        for size in self.tower.source_sizes:
            if all(f.is_zero(v) for v in full[pos:pos + size]):
                return None
            pos += size
        return self.tower.evaluate(full)

    def eval_many(self, pts):
        p = self.field.p
        pts = np.asarray(pts, dtype=np.int64) % p
        mat = np.array([[c % p for c in row] for row in self._rows],
                       dtype=np.int64)
        full = (pts @ mat.T) % p
        return self.tower.eval_many(full)

    def jacobian_rank_at(self, pt):
        f = self.field
        full = self.expand(pt)
        ncols = len(pt)
        vals, m = self.tower._chain(full, lambda i: list(self._rows[i]), ncols)
        j0 = next(j for j in range(ncols) if not f.is_zero(pt[j]))
        cols = [j for j in range(ncols) if j != j0]
        return self.tower._chart_rank(vals, m, cols)
