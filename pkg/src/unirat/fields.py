"""Coefficient fields: the rationals, prime fields, and rational function
fields over either.

Every field object exposes the same small interface consumed by the
polynomial and linear algebra layers:

    zero, one            distinguished scalars (attributes)
    add, sub, mul, neg, inv, div, powi
    is_zero, eq, from_int, convert, format, parse, random
    kind                 "rationals" | "prime" | "function"
    characteristic

Scalars are plain values: Fraction over the rationals, int in [0, p) over a
prime field, RatFunc over a function field.  Field objects are stateless and
shared; compare them with `is`.
"""

from fractions import Fraction

from . import univar
from .gcd import poly_gcd
from .poly import PolyRing


class Rationals:
    kind = "rationals"
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        return a / b

    def powi(self, a, n):
        return a ** n

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def from_int(self, n):
        return Fraction(n)

    def convert(self, c, src):
        if src is self or isinstance(c, (int, Fraction)):
            return Fraction(c)
        raise TypeError("cannot convert %r from %r to Q" % (c, src))

    def format(self, a):
        return str(a)

    def parse(self, s):
        return Fraction(s)

    def random(self, rng):
        return Fraction(rng.randrange(-9, 10))

    def __repr__(self):
        return "QQ"


QQ = Rationals()


class PrimeField:
    kind = "prime"

    def __init__(self, p):
        assert p >= 2
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def powi(self, a, n):
        return pow(a, n, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def from_int(self, n):
        return n % self.p

    def convert(self, c, src):
        if isinstance(c, int):
            return c % self.p
        if isinstance(c, Fraction):
            den = c.denominator % self.p
            if den == 0:
                raise ZeroDivisionError("denominator vanishes mod %d" % self.p)
            return (c.numerator * pow(den, self.p - 2, self.p)) % self.p
        raise TypeError("cannot convert %r from %r to F_%d" % (c, src, self.p))

    def sqrt(self, a):
        """Square root in F_p, or None when a is a nonresidue."""
        return univar.sqrt_mod(a % self.p, self.p)

    def format(self, a):
        return str(a % self.p)

    def parse(self, s):
        if "/" in s:
            num, den = s.split("/")
            return self.div(int(num) % self.p, int(den) % self.p)
        return int(s) % self.p

    def random(self, rng):
        return rng.randint(self.p)

    def __repr__(self):
        return "GF(%d)" % self.p


_prime_cache = {}


def GF(p):
    f = _prime_cache.get(p)
    if f is None:
        f = _prime_cache[p] = PrimeField(p)
    return f


class RatFunc:
    """Reduced fraction of polynomials; denominator monic, gcd one."""

    __slots__ = ("num", "den")

    def __init__(self, num, den, reduced=False):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = num, den.ring.one()
        elif not reduced and not den.is_constant():
            g = poly_gcd(num, den)
            if not (g.is_constant() and g.ring.field.eq(g.constant(), g.ring.field.one)):
                num = num.divexact(g)
                den = den.divexact(g)
        if not den.is_zero():
            _, lc = den.leading()
            bf = den.ring.field
            if not bf.eq(lc, bf.one):
                c = bf.inv(lc)
                num = num.scale(c)
                den = den.scale(c)
        self.num = num
        self.den = den

    def is_poly(self):
        return self.den.is_constant()

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den.is_constant():
            return "(%s)" % self.num.format()
        return "(%s)/(%s)" % (self.num.format(), self.den.format())


class FunctionField:
    """k(t_1, ..., t_m) as fractions over PolyRing(k, names)."""

    kind = "function"

    def __init__(self, base, names):
        self.base = base
        self.ring = PolyRing(base, names)
        self.characteristic = base.characteristic
        self.zero = RatFunc(self.ring.zero(), self.ring.one(), reduced=True)
        self.one = RatFunc(self.ring.one(), self.ring.one(), reduced=True)

    def gens(self):
        return [RatFunc(self.ring.var(n), self.ring.one(), reduced=True)
                for n in self.ring.names]

    def from_poly(self, f):
        assert f.ring == self.ring
        return RatFunc(f, self.ring.one())

    def add(self, a, b):
        if a.den == b.den:
            return RatFunc(a.num + b.num, a.den)
        return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den)

    def sub(self, a, b):
        if a.den == b.den:
            return RatFunc(a.num - b.num, a.den)
        return RatFunc(a.num * b.den - b.num * a.den, a.den * b.den)

    def mul(self, a, b):
        if a.num.is_zero() or b.num.is_zero():
            return self.zero
        if a.den.is_constant() and b.den.is_constant():
            # monic constant denominators are exactly one
            return RatFunc(a.num * b.num, a.den, reduced=True)
        g1 = poly_gcd(a.num, b.den)
        g2 = poly_gcd(b.num, a.den)
        n = a.num.divexact(g1) * b.num.divexact(g2)
        d = a.den.divexact(g2) * b.den.divexact(g1)
        return RatFunc(n, d, reduced=True)

    def neg(self, a):
        return RatFunc(-a.num, a.den, reduced=True)

    def inv(self, a):
        if a.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(a.den, a.num)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def powi(self, a, n):
        if n < 0:
            return self.powi(self.inv(a), -n)
        # num and den stay coprime under powers, den stays monic
        return RatFunc(a.num ** n, a.den ** n, reduced=True)

    def is_zero(self, a):
        return a.num.is_zero()

    def eq(self, a, b):
        return a.num == b.num and a.den == b.den

    def from_int(self, n):
        return RatFunc(self.ring.from_int(n), self.ring.one(), reduced=True)

    def convert(self, c, src):
        if src is self:
            return c
        if isinstance(c, RatFunc):
            if c.num.ring == self.ring:
                return c
            raise TypeError("function field mismatch")
        return RatFunc(self.ring.const(self.base.convert(c, src)),
                       self.ring.one(), reduced=True)

    def format(self, a):
        if a.den.is_constant():
            inner = a.num.format()
            return inner if len(a.num) <= 1 else "(%s)" % inner
        return "(%s)/(%s)" % (a.num.format(), a.den.format())

    def parse(self, s):
        raise NotImplementedError("function field scalars are built, not parsed")

    def random(self, rng):
        return self.convert(self.base.random(rng), self.base)

    def __repr__(self):
        return "%r(%s)" % (self.base, ",".join(self.ring.names))


_ff_cache = {}


def FF(base, names):
    """Shared FunctionField instances, so ring equality works across callers."""
    key = (id(base), tuple(names))
    f = _ff_cache.get(key)
    if f is None:
        f = _ff_cache[key] = FunctionField(base, names)
    return f
