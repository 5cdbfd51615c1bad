"""Dense exact linear algebra over any field implementing the ring protocol.

Matrices are lists of rows; rows are lists of field elements.  Sizes here
are tiny (at most a few dozen), so plain Gaussian elimination is enough.
"""


def _copy(rows):
    return [list(r) for r in rows]


def row_reduce(rows, field):
    """Reduced row echelon form; returns (rref, pivot_columns)."""
    m = _copy(rows)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if not field.is_zero(m[i][c]):
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and not field.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows, field):
    _, pivots = row_reduce(rows, field)
    return len(pivots)


def kernel_basis(rows, field):
    """Basis of the null space of the matrix (vectors in column space)."""
    if not rows:
        return []
    ncols = len(rows[0])
    rref, pivots = row_reduce(rows, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero()] * ncols
        v[f] = field.one()
        for r, c in enumerate(pivots):
            v[c] = field.neg(rref[r][f])
        basis.append(v)
    return basis


def solve(rows, rhs, field):
    """One solution of rows * x = rhs, or None if inconsistent."""
    if not rows:
        return None
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    rref, pivots = row_reduce(aug, field)
    if ncols in pivots:
        return None  # pivot in the constant column
    x = [field.zero()] * ncols
    for r, c in enumerate(pivots):
        x[c] = rref[r][ncols]
    return x


def det(rows, field):
    """Determinant by fraction-full elimination (field entries)."""
    n = len(rows)
    m = _copy(rows)
    result = field.one()
    for c in range(n):
        pivot = None
        for i in range(c, n):
            if not field.is_zero(m[i][c]):
                pivot = i
                break
        if pivot is None:
            return field.zero()
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            result = field.neg(result)
        result = field.mul(result, m[c][c])
        inv = field.inv(m[c][c])
        for i in range(c + 1, n):
            if not field.is_zero(m[i][c]):
                f = field.mul(m[i][c], inv)
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[c])]
    return result


def det_laplace(rows, field):
    """Division-free determinant: Laplace expansion memoized on column sets.

    Preferred over elimination when entries live in an extension tower,
    where inversion is much more expensive than multiplication.
    """
    n = len(rows)
    if n == 0:
        return field.one()
    memo = {}

    def minor(row, cols):
        if len(cols) == 1:
            return rows[row][cols[0]]
        cached = memo.get((row, cols))
        if cached is not None:
            return cached
        acc = field.zero()
        sign = True
        for j, c in enumerate(cols):
            entry = rows[row][c]
            if not field.is_zero(entry):
                rest = cols[:j] + cols[j + 1 :]
                term = field.mul(entry, minor(row + 1, rest))
                acc = field.add(acc, term) if sign else field.sub(acc, term)
            sign = not sign
        memo[(row, cols)] = acc
        return acc

    return minor(0, tuple(range(n)))
