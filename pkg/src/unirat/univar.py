"""Dense univariate arithmetic over a prime field.

Coefficient vectors are numpy int64 arrays, low degree first, entries in
[0, p).  Degrees here stay small enough (a few thousand) that products fit
comfortably in int64 for the primes in use (p below ~3e4, since
deg * p^2 < 2^63).
"""

import numpy as np


def trim(a):
    nz = np.nonzero(a)[0]
    if len(nz) == 0:
        return a[:0]
    return a[: nz[-1] + 1]


def deg(a):
    return len(a) - 1


def is_zero(a):
    return len(a) == 0


def add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = a.copy()
    out[: len(b)] = (out[: len(b)] + b) % p
    return trim(out)


def sub(a, b, p):
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=np.int64)
    out[: len(a)] = a
    out[: len(b)] = (out[: len(b)] - b) % p
    return trim(out)


def mul(a, b, p):
    if is_zero(a) or is_zero(b):
        return a[:0]
    return trim(np.convolve(a, b) % p)


def scale(a, c, p):
    c %= p
    if c == 0:
        return a[:0]
    return (a * c) % p


def monic(a, p):
    if is_zero(a):
        return a
    lc = int(a[-1])
    if lc == 1:
        return a
    return (a * pow(lc, p - 2, p)) % p


def divmod_fp(a, b, p):
    assert not is_zero(b)
    a = a.copy()
    db, da = deg(b), deg(a)
    if da < db:
        return a[:0], trim(a)
    inv = pow(int(b[-1]), p - 2, p)
    q = np.zeros(da - db + 1, dtype=np.int64)
    for i in range(da, db - 1, -1):
        c = int(a[i])
        if c == 0:
            continue
        f = (c * inv) % p
        q[i - db] = f
        a[i - db : i + 1] = (a[i - db : i + 1] - f * b) % p
    return q, trim(a)


def rem(a, b, p):
    return divmod_fp(a, b, p)[1]


def gcd(a, b, p):
    a, b = trim(a.copy()), trim(b.copy())
    while not is_zero(b):
        a, b = b, rem(a, b, p)
    return monic(a, p)


def pow_mod(a, n, m, p):
    """a^n mod m."""
    result = np.array([1], dtype=np.int64)
    a = rem(a, m, p)
    while n:
        if n & 1:
            result = rem(mul(result, a, p), m, p)
        n >>= 1
        if n:
            a = rem(mul(a, a, p), m, p)
    return result


def eval_at(a, x, p):
    acc = 0
    for c in a[::-1]:
        acc = (acc * x + int(c)) % p
    return acc


def eval_many(a, xs, p):
    """Horner over a vector of points."""
    xs = np.asarray(xs, dtype=np.int64) % p
    acc = np.zeros(len(xs), dtype=np.int64)
    for c in a[::-1]:
        acc = (acc * xs + int(c)) % p
    return acc


def resultant(a, b, p):
    a, b = trim(a.copy()), trim(b.copy())
    if is_zero(a) or is_zero(b):
        return 0
    res = 1
    while True:
        da, db = deg(a), deg(b)
        if db == 0:
            return (res * pow(int(b[0]), da, p)) % p
        r = rem(a, b, p)
        if is_zero(r):
            return 0
        dr = deg(r)
        res = (res * pow(int(b[-1]), da - dr, p)) % p
        if (da * db) & 1:
            res = (-res) % p
        a, b = b, r


def interp(xs, ys, p):
    """Newton interpolation through distinct points; returns dense coeffs."""
    n = len(xs)
    assert n == len(ys)
    xs = [int(x) % p for x in xs]
    assert len(set(xs)) == n, "interpolation nodes must be distinct"
    coeffs = [int(y) % p for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            num = (coeffs[i] - coeffs[i - 1]) % p
            den = (xs[i] - xs[i - j]) % p
            coeffs[i] = (num * pow(den, p - 2, p)) % p
    # expand Newton form
    out = np.zeros(1, dtype=np.int64)
    for i in range(n - 1, -1, -1):
        shifted = np.zeros(len(out) + 1, dtype=np.int64)
        shifted[1:] = out
        shifted[:-1] = (shifted[:-1] - int(xs[i]) * out) % p
        shifted[0] = (shifted[0] + coeffs[i]) % p
        out = shifted
    return trim(out % p)


def roots(a, p, rng):
    """All roots in F_p of a dense polynomial, via x^p - x then equal-degree
    splitting.  rng is a Stream used for splitting offsets."""
    a = monic(trim(a.copy()), p)
    if is_zero(a):
        raise ValueError("zero polynomial has every root")
    if deg(a) == 0:
        return []
    x = np.array([0, 1], dtype=np.int64)
    xp = pow_mod(x, p, a, p)
    lin = gcd(sub(xp, x, p), a, p)
    out = []
    if deg(lin) >= 1 and lin[0] == 0:
        out.append(0)
        lin = trim(lin[1:])
    stack = [lin]
    while stack:
        g = stack.pop()
        d = deg(g)
        if d <= 0:
            continue
        if d == 1:
            out.append((-int(g[0])) % p)
            continue
        if d == 2:
            # quadratic formula
            b, c = int(g[1]), int(g[0])
            disc = (b * b - 4 * c) % p
            s = sqrt_mod(disc, p)
            assert s is not None, "split factor must have rational roots"
            inv2 = pow(2, p - 2, p)
            out.append(((-b + s) * inv2) % p)
            out.append(((-b - s) * inv2) % p)
            continue
        while True:
            off = rng.randint(p)
            shifted = np.array([off, 1], dtype=np.int64)
            h = pow_mod(shifted, (p - 1) // 2, g, p)
            h = sub(h, np.array([1], dtype=np.int64), p)
            f1 = gcd(h, g, p)
            if 0 < deg(f1) < d:
                stack.append(f1)
                stack.append(divmod_fp(g, f1, p)[0])
                break
    return sorted(set(out))


def sqrt_mod(a, p):
    """Tonelli-Shanks; None for nonresidues."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = (t2 * t2) % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, (b * b) % p
        t = (t * c) % p
        r = (r * b) % p
    return r
