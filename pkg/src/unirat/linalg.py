"""Exact dense linear algebra over any field object from fields.py.

Matrices are lists of row lists of scalars.  Sizes here are small (tens of
rows), so plain Gaussian elimination is the right tool.
"""


def mat_copy(a):
    return [list(r) for r in a]


def identity(field, n):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def mat_mul(field, a, b):
    n, m = len(a), len(b[0])
    k = len(b)
    out = [[field.zero] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for l in range(k):
            c = ai[l]
            if field.is_zero(c):
                continue
            bl = b[l]
            for j in range(m):
                oi[j] = field.add(oi[j], field.mul(c, bl[j]))
    return out


def mat_vec(field, a, v):
    return [
        _dot(field, row, v)
        for row in a
    ]


def _dot(field, row, v):
    acc = field.zero
    for c, x in zip(row, v):
        acc = field.add(acc, field.mul(c, x))
    return acc


def rref(field, a):
    """Reduced row echelon form; returns (matrix, pivot column list)."""
    m = mat_copy(a)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if not field.is_zero(m[i][c])), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, x) for x in m[r]]
        for i in range(rows):
            if i != r and not field.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(field, a):
    if not a or not a[0]:
        return 0
    return len(rref(field, a)[1])


def kernel(field, a):
    """Basis of the right null space, as a list of vectors."""
    if not a:
        return []
    cols = len(a[0])
    m, pivots = rref(field, a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero] * cols
        v[fc] = field.one
        for r, pc in enumerate(pivots):
            v[pc] = field.neg(m[r][fc])
        basis.append(v)
    return basis


def solve(field, a, b):
    """One solution of A x = b, or None if inconsistent."""
    if not a:
        return None
    cols = len(a[0])
    aug = [list(r) + [bb] for r, bb in zip(a, b)]
    m, pivots = rref(field, aug)
    if cols in pivots:
        return None
    x = [field.zero] * cols
    for r, pc in enumerate(pivots):
        x[pc] = m[r][cols]
    return x


def det(field, a):
    m = mat_copy(a)
    n = len(m)
    assert all(len(r) == n for r in m)
    sign = False
    acc = field.one
    for c in range(n):
        pr = next((i for i in range(c, n) if not field.is_zero(m[i][c])), None)
        if pr is None:
            return field.zero
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            sign = not sign
        piv = m[c][c]
        acc = field.mul(acc, piv)
        inv = field.inv(piv)
        for i in range(c + 1, n):
            if field.is_zero(m[i][c]):
                continue
            f = field.mul(m[i][c], inv)
            m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[c])]
    return field.neg(acc) if sign else acc


def inv_matrix(field, a):
    n = len(a)
    aug = [list(r) + list(e) for r, e in zip(a, identity(field, n))]
    m, pivots = rref(field, aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [r[n:] for r in m]


def extend_to_basis(field, vecs, n):
    """Complete independent vectors to a basis of k^n with unit vectors."""
    rows = [list(v) for v in vecs]
    assert rank(field, rows) == len(rows) if rows else True
    for j in range(n):
        e = [field.one if i == j else field.zero for i in range(n)]
        if rank(field, rows + [e]) > len(rows):
            rows.append(e)
        if len(rows) == n:
            break
    return rows
