"""Sparse multivariate polynomials with exact coefficients.

Terms are stored as {exponent tuple: nonzero scalar}.  The coefficient field
is an object with the small interface described in fields.py; this module
never imports fields, so the field tower can build polynomial rings over
itself (function fields).

Canonical term order is graded lexicographic: higher total degree first,
ties broken by the exponent tuple compared left to right, larger first.
All serialization and leading-term logic uses it.
"""

import numpy as np


def _term_key(exp):
    return (sum(exp), exp)


class PolyRing:
    """k[x_1..x_n] for a field object k; optionally carries a grading.

    grading, when present, is a tuple of integer rows, one weight per
    variable per row.  It is bookkeeping used by the geometry layer; ring
    arithmetic ignores it.
    """

    def __init__(self, field, names, grading=None):
        self.field = field
        self.names = tuple(str(n) for n in names)
        assert len(set(self.names)) == len(self.names), "duplicate variable names"
        self.index = {n: i for i, n in enumerate(self.names)}
        if grading is not None:
            grading = tuple(tuple(int(w) for w in row) for row in grading)
            for row in grading:
                assert len(row) == len(self.names)
        self.grading = grading
        self.nvars = len(self.names)
        self._zero_exp = (0,) * self.nvars

    def __repr__(self):
        return "PolyRing(%s; %s)" % (self.field, ",".join(self.names))

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.field is other.field
                and self.names == other.names and self.grading == other.grading)

    def __hash__(self):
        return hash((id(self.field), self.names, self.grading))

    # constructors ---------------------------------------------------------

    def zero(self):
        return Poly(self, {})

    def one(self):
        return Poly(self, {self._zero_exp: self.field.one})

    def const(self, c):
        if self.field.is_zero(c):
            return self.zero()
        return Poly(self, {self._zero_exp: c})

    def from_int(self, n):
        return self.const(self.field.from_int(n))

    def var(self, name):
        i = self.index[name]
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): self.field.one})

    def gens(self):
        return [self.var(n) for n in self.names]

    def monomial(self, exp, coeff=None):
        exp = tuple(int(x) for x in exp)
        assert len(exp) == self.nvars and all(x >= 0 for x in exp)
        c = self.field.one if coeff is None else coeff
        if self.field.is_zero(c):
            return self.zero()
        return Poly(self, {exp: c})

    def from_terms(self, pairs):
        """pairs: iterable of (coeff, exponent tuple); repeated exponents add."""
        acc = {}
        f = self.field
        for c, exp in pairs:
            exp = tuple(int(x) for x in exp)
            assert len(exp) == self.nvars
            if exp in acc:
                acc[exp] = f.add(acc[exp], c)
            else:
                acc[exp] = c
        return Poly(self, {e: c for e, c in acc.items() if not f.is_zero(c)})

    def random(self, rng, degree, homogeneous=True, density=None):
        """Random polynomial of (total) degree `degree` with field.random coeffs."""
        monos = list(_monomials(self.nvars, degree, exact=homogeneous))
        take = monos if density is None else [m for m in monos if rng.randint(100) < density]
        return self.from_terms((self.field.random(rng), m) for m in take)

    def with_grading(self, grading):
        return PolyRing(self.field, self.names, grading)


def _monomials(nvars, degree, exact=True):
    if nvars == 0:
        if degree == 0 or not exact:
            yield ()
        return
    for d in range(degree, -1, -1):
        if exact and nvars == 1:
            yield (degree,)
            return
        for rest in _monomials(nvars - 1, degree - d, exact=exact):
            if exact and d + sum(rest) != degree:
                continue
            yield (d,) + rest


class Poly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # queries --------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and self.ring._zero_exp in self.terms)

    def constant(self):
        """The constant coefficient."""
        return self.terms.get(self.ring._zero_exp, self.ring.field.zero)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, var):
        i = self.ring.index[var] if isinstance(var, str) else var
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def degree_in_block(self, idxs):
        if not self.terms:
            return -1
        return max(sum(e[i] for i in idxs) for e in self.terms)

    def min_degree_in_block(self, idxs):
        """Smallest block degree over the terms; the order of vanishing along
        the block's coordinate subspace."""
        if not self.terms:
            return -1
        return min(sum(e[i] for i in idxs) for e in self.terms)

    def leading(self):
        """(exponent, coeff) of the leading term in graded lex."""
        assert self.terms, "zero polynomial has no leading term"
        e = max(self.terms, key=_term_key)
        return e, self.terms[e]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _term_key(t[0]), reverse=True)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        if self.ring is not other.ring and self.ring != other.ring:
            return False
        if len(self.terms) != len(other.terms):
            return False
        f = self.ring.field
        for e, c in self.terms.items():
            c2 = other.terms.get(e)
            if c2 is None or not f.eq(c, c2):
                return False
        return True

    def __hash__(self):
        return hash((self.ring, tuple(self.sorted_terms())))

    def __repr__(self):
        return self.format()

    def format(self):
        if not self.terms:
            return "0"
        names = self.ring.names
        f = self.ring.field
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (names[i] if k == 1 else "%s^%d" % (names[i], k))
                for i, k in enumerate(e) if k)
            cs = f.format(c)
            if mono:
                parts.append(mono if cs == "1" else ("%s*%s" % (cs, mono)))
            else:
                parts.append(cs)
        return " + ".join(parts)

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        f = self.ring.field
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for e, c in b.items():
            if e in out:
                s = f.add(out[e], c)
                if f.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return Poly(self.ring, out)

    def __neg__(self):
        f = self.ring.field
        return Poly(self.ring, {e: f.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def scale(self, c):
        f = self.ring.field
        if f.is_zero(c):
            return self.ring.zero()
        out = {}
        for e, a in self.terms.items():
            p = f.mul(a, c)
            if not f.is_zero(p):
                out[e] = p
        return Poly(self.ring, out)

    def mul_monomial(self, exp, coeff=None):
        f = self.ring.field
        c = coeff if coeff is not None else f.one
        if f.is_zero(c):
            return self.ring.zero()
        out = {}
        for e, a in self.terms.items():
            p = f.mul(a, c)
            if not f.is_zero(p):
                out[tuple(x + y for x, y in zip(e, exp))] = p
        return Poly(self.ring, out)

    def __mul__(self, other):
        other = self._coerce(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return self.ring.zero()
        if len(a) == 1:
            (e, c), = a.items()
            return other.mul_monomial(e, c)
        if len(b) == 1:
            (e, c), = b.items()
            return self.mul_monomial(e, c)
        field = self.ring.field
        if getattr(field, "kind", None) == "prime":
            n = len(a) * len(b)
            if self.ring.nvars == 1 and n > 600:
                return self._mul_dense_univar(other)
            if n > 20000:
                r = self._mul_packed(other)
                if r is not None:
                    return r
        return self._mul_dict(other)

    def _mul_dict(self, other):
        f = self.ring.field
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        if getattr(f, "kind", None) == "prime":
            p = f.p
            for e1, c1 in a.items():
                for e2, c2 in b.items():
                    e = tuple(x + y for x, y in zip(e1, e2))
                    out[e] = (out.get(e, 0) + c1 * c2) % p
            return Poly(self.ring, {e: c for e, c in out.items() if c})
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                prod = f.mul(c1, c2)
                if e in out:
                    out[e] = f.add(out[e], prod)
                else:
                    out[e] = prod
        return Poly(self.ring, {e: c for e, c in out.items() if not f.is_zero(c)})

    def _mul_dense_univar(self, other):
        p = self.ring.field.p
        d1 = max(e[0] for e in self.terms)
        d2 = max(e[0] for e in other.terms)
        a = np.zeros(d1 + 1, dtype=np.int64)
        for e, c in self.terms.items():
            a[e[0]] = c
        b = np.zeros(d2 + 1, dtype=np.int64)
        for e, c in other.terms.items():
            b[e[0]] = c
        # coefficient sums stay below 2^63 for p ~ 1e4 and degrees ~ 1e6
        c = np.convolve(a, b) % p
        nz = np.nonzero(c)[0]
        return Poly(self.ring, {(int(i),): int(c[i]) for i in nz})

    def _mul_packed(self, other):
        """Packed-exponent numpy multiply over a prime field; None if the
        packing would not fit in 63 bits."""
        p = self.ring.field.p
        nv = self.ring.nvars
        ka = np.array(list(self.terms.keys()), dtype=np.int64)
        kb = np.array(list(other.terms.keys()), dtype=np.int64)
        va = np.array(list(self.terms.values()), dtype=np.int64)
        vb = np.array(list(other.terms.values()), dtype=np.int64)
        base = ka.max(axis=0) + kb.max(axis=0) + 1
        bits = int(np.ceil(np.log2(base.astype(np.float64))).sum())
        if bits > 62:
            return None
        mult = np.ones(nv, dtype=np.int64)
        for i in range(nv - 2, -1, -1):
            mult[i] = mult[i + 1] * base[i + 1]
        pa = ka @ mult
        pb = kb @ mult
        chunk = max(1, 4_000_000 // max(1, len(pb)))
        keys_parts, val_parts = [], []
        for s in range(0, len(pa), chunk):
            keys = (pa[s:s + chunk, None] + pb[None, :]).ravel()
            vals = ((va[s:s + chunk, None] * vb[None, :]) % p).ravel()
            uk, inv = np.unique(keys, return_inverse=True)
            acc = np.zeros(len(uk), dtype=np.int64)
            np.add.at(acc, inv, vals)
            keys_parts.append(uk)
            val_parts.append(acc % p)
        keys = np.concatenate(keys_parts)
        vals = np.concatenate(val_parts)
        uk, inv = np.unique(keys, return_inverse=True)
        acc = np.zeros(len(uk), dtype=np.int64)
        np.add.at(acc, inv, vals)
        acc %= p
        out = {}
        nzidx = np.nonzero(acc)[0]
        uk_nz = uk[nzidx]
        acc_nz = acc[nzidx]
        for j in range(len(uk_nz)):
            key = int(uk_nz[j])
            exp = []
            for i in range(nv):
                exp.append(key // int(mult[i]))
                key %= int(mult[i])
            out[tuple(exp)] = int(acc_nz[j])
        return Poly(self.ring, out)

    def __pow__(self, n):
        assert n >= 0
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n > 1
            n >>= 1
            if base_needed and n:
                base = base * base
        return result

    def _coerce(self, other):
        if isinstance(other, Poly):
            assert other.ring is self.ring or other.ring == self.ring, \
                "mixed rings: %r vs %r" % (self.ring, other.ring)
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return self.ring.const(other)

    __radd__ = __add__

    def __rmul__(self, other):
        return self * other

    def __rsub__(self, other):
        return self._coerce(other) - self

    # calculus and substitution --------------------------------------------

    def partial(self, var):
        i = self.ring.index[var] if isinstance(var, str) else var
        f = self.ring.field
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k == 0:
                continue
            d = f.mul(c, f.from_int(k))
            if f.is_zero(d):
                continue
            e2 = list(e)
            e2[i] = k - 1
            out[tuple(e2)] = d
        return Poly(self.ring, out)

    def gradient(self):
        return [self.partial(i) for i in range(self.ring.nvars)]

    def substitute(self, assign, target=None):
        """Substitute variables.

        assign maps variable name -> Poly in the target ring (or a scalar of
        the target field).  Variables not mentioned must exist in the target
        ring under the same name and pass through.
        """
        ring = self.ring
        if target is None:
            target = next((v.ring for v in assign.values() if isinstance(v, Poly)), ring)
        tf = target.field
        images = []
        for i, n in enumerate(ring.names):
            if n in assign:
                v = assign[n]
                images.append(v if isinstance(v, Poly) else target.const(v))
            else:
                assert n in target.index, "variable %s missing from target ring" % n
                images.append(target.var(n))
        caches = [{0: target.one()} for _ in images]

        def power(i, k):
            c = caches[i]
            if k in c:
                return c[k]
            half = power(i, k // 2)
            r = half * half
            if k & 1:
                r = r * images[i]
            c[k] = r
            return r

        out = target.zero()
        for e, c in self.sorted_terms():
            t = target.const(self._convert_scalar(c, tf))
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            out = out + t
        return out

    def _convert_scalar(self, c, tf):
        f = self.ring.field
        if tf is f:
            return c
        conv = getattr(tf, "convert", None)
        if conv is not None:
            return conv(c, f)
        return c

    def evaluate(self, point):
        """Evaluate at a full list of scalars, one per variable."""
        assert len(point) == self.ring.nvars
        f = self.ring.field
        out = f.zero
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    t = f.mul(t, f.powi(point[i], k))
            out = f.add(out, t)
        return out

    # structure ------------------------------------------------------------

    def homogenize(self, var, degree=None):
        """Multiply each term by var^(degree - total degree)."""
        i = self.ring.index[var] if isinstance(var, str) else var
        if not self.terms:
            return self
        d = self.total_degree() if degree is None else degree
        out = {}
        for e, c in self.terms.items():
            pad = d - sum(e)
            assert pad >= 0, "degree bound below an existing term"
            e2 = list(e)
            e2[i] += pad
            out[tuple(e2)] = c
        return Poly(self.ring, out)

    def dehomogenize(self, var):
        """Set var = 1."""
        i = self.ring.index[var] if isinstance(var, str) else var
        f = self.ring.field
        out = {}
        for e, c in self.terms.items():
            e2 = list(e)
            e2[i] = 0
            e2 = tuple(e2)
            if e2 in out:
                s = f.add(out[e2], c)
                if f.is_zero(s):
                    del out[e2]
                else:
                    out[e2] = s
            else:
                out[e2] = c
        return Poly(self.ring, out)

    def coeff_in_var(self, var):
        """View as univariate in var: {exponent: coefficient Poly (same ring)}."""
        i = self.ring.index[var] if isinstance(var, str) else var
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            e2 = list(e)
            e2[i] = 0
            out.setdefault(k, {})[tuple(e2)] = c
        return {k: Poly(self.ring, t) for k, t in out.items()}

    def coeff_of(self, var, k):
        i = self.ring.index[var] if isinstance(var, str) else var
        out = {}
        for e, c in self.terms.items():
            if e[i] == k:
                e2 = list(e)
                e2[i] = 0
                out[tuple(e2)] = c
        return Poly(self.ring, out)

    def vars_present(self):
        used = [False] * self.ring.nvars
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return [i for i, u in enumerate(used) if u]

    def monomial_content(self):
        """Per-variable minimum exponent vector."""
        if not self.terms:
            return self.ring._zero_exp
        mins = None
        for e in self.terms:
            mins = e if mins is None else tuple(min(a, b) for a, b in zip(mins, e))
            if not any(mins):
                break
        return mins

    def div_monomial(self, exp):
        out = {}
        for e, c in self.terms.items():
            e2 = tuple(a - b for a, b in zip(e, exp))
            assert all(x >= 0 for x in e2), "monomial does not divide"
            out[e2] = c
        return Poly(self.ring, out)

    def monic(self):
        if not self.terms:
            return self
        _, lc = self.leading()
        f = self.ring.field
        if f.eq(lc, f.one):
            return self
        return self.scale(f.inv(lc))

    def divexact(self, g):
        """Exact division; raises ValueError when g does not divide."""
        assert not g.is_zero(), "division by zero polynomial"
        if self.is_zero():
            return self
        if len(g.terms) == 1:
            (e, c), = g.terms.items()
            f = self.ring.field
            try:
                return self.div_monomial(e).scale(f.inv(c))
            except AssertionError:
                raise ValueError("not divisible")
        f = self.ring.field
        rem = self
        ge, gc = g.leading()
        gcinv = f.inv(gc)
        quot = {}
        guard = 0
        while not rem.is_zero():
            re, rc = rem.leading()
            qe = tuple(a - b for a, b in zip(re, ge))
            if any(x < 0 for x in qe):
                raise ValueError("not divisible")
            qc = f.mul(rc, gcinv)
            quot[qe] = qc
            rem = rem - g.mul_monomial(qe, qc)
            guard += 1
            if guard > 4 * len(self.terms) * (len(g.terms) + 1) + 64:
                raise ValueError("not divisible")
        return Poly(self.ring, quot)

    def divides(self, other):
        try:
            other.divexact(self)
            return True
        except ValueError:
            return False

    # grading ---------------------------------------------------------------

    def multidegree(self):
        """Common multidegree under the ring's grading; raises on mixed terms."""
        g = self.ring.grading
        assert g is not None, "ring has no grading"
        assert self.terms, "zero polynomial has no multidegree"
        md = None
        for e in self.terms:
            d = tuple(sum(w * k for w, k in zip(row, e)) for row in g)
            if md is None:
                md = d
            elif md != d:
                raise ValueError("not homogeneous for the grading: %s vs %s" % (md, d))
        return md

    def is_homogeneous(self):
        try:
            if self.ring.grading is None:
                if not self.terms:
                    return True
                degs = {sum(e) for e in self.terms}
                return len(degs) == 1
            if not self.terms:
                return True
            self.multidegree()
            return True
        except ValueError:
            return False

    def map_coeffs(self, fn, new_ring=None):
        ring = new_ring if new_ring is not None else self.ring
        f = ring.field
        out = {}
        for e, c in self.terms.items():
            v = fn(c)
            if not f.is_zero(v):
                out[e] = v
        return Poly(ring, out)
