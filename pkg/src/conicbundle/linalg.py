"""Exact linear algebra: row reduction over a field, Bareiss determinants over
polynomial rings, and Hermite/Smith normal forms over the integers."""

from __future__ import annotations

from .fields import Field


def rref(rows, F: Field):
    """Reduced row echelon form.  Returns ``(rows, pivot_columns)``; input is not modified."""
    M = [list(r) for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if not F.is_zero(M[i][c])), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, a) for a in M[r]]
        for i in range(len(M)):
            if i != r and not F.is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows, F: Field) -> int:
    if F.kind == "rational":
        return _rational_rank(rows)
    return len(rref(rows, F)[1])


def _rational_rank(rows) -> int:
    """Fraction-free forward elimination on rows scaled to integers."""
    from math import lcm

    M = []
    for row in rows:
        den = lcm(*(a.denominator for a in row)) if row else 1
        ints = [int(a * den) for a in row]
        if any(ints):
            M.append(ints)
    if not M:
        return 0
    ncols = len(M[0])
    r, prev = 0, 1
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        for i in range(r + 1, len(M)):
            f = M[i][c]
            M[i] = [(a * p - f * b) // prev for a, b in zip(M[i], M[r])]
        prev = p
        r += 1
        if r == len(M):
            break
    return r


def nullspace(rows, ncols: int, F: Field) -> list[list]:
    """Basis of {v : rows . v = 0}; one vector per free column, free entry = 1."""
    if not rows:
        return [[F.one if i == j else F.zero for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(rows, F)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [F.zero] * ncols
        v[fcol] = F.one
        for row, pc in zip(R, pivots):
            v[pc] = F.neg(row[fcol])
        basis.append(v)
    return basis


def solve(A, b, F: Field):
    """One solution of A x = b, or ``None``."""
    n = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(aug, F)
    if n in pivots:
        return None
    x = [F.zero] * n
    for row, pc in zip(R, pivots):
        x[pc] = row[n]
    return x


def det(M, F: Field):
    M = [list(r) for r in M]
    n = len(M)
    result = F.one
    for c in range(n):
        piv = next((i for i in range(c, n) if not F.is_zero(M[i][c])), None)
        if piv is None:
            return F.zero
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            result = F.neg(result)
        result = F.mul(result, M[c][c])
        inv = F.inv(M[c][c])
        for i in range(c + 1, n):
            if not F.is_zero(M[i][c]):
                f = F.mul(M[i][c], inv)
                M[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(M[i], M[c])]
    return result


def inverse(M, F: Field):
    n = len(M)
    aug = [list(r) + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(M)]
    R, pivots = rref(aug, F)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def matmul(A, B, F: Field):
    return [[_dot(row, col, F) for col in zip(*B)] for row in A]


def _dot(u, v, F):
    acc = F.zero
    for a, b in zip(u, v):
        acc = F.add(acc, F.mul(a, b))
    return acc


def bareiss_det(M, zero, one):
    """Fraction-free determinant over an integral domain.

    Entries need ``+ - *``, ``is_zero()`` and ``exact_div``.
    """
    M = [list(r) for r in M]
    n = len(M)
    if n == 0:
        return one
    sign = 1
    prev = one
    for k in range(n - 1):
        if M[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not M[i][k].is_zero()), None)
            if swap is None:
                return zero
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]).exact_div(prev)
        prev = pivot
    d = M[n - 1][n - 1]
    return d if sign > 0 else -d


# -- integer matrices ---------------------------------------------------------

def int_column_hnf(A: list[list[int]]):
    """Column-style echelon form via unimodular column operations.

    Returns ``(H, U)`` with ``A @ U = H``, ``U`` unimodular, and the
    nonzero columns of ``H`` first; the columns of ``U`` beyond the rank span
    the integer kernel of ``A``.
    """
    m = len(A)
    n = len(A[0]) if A else 0
    H = [list(r) for r in A]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(j, k, q):  # col_j -= q col_k
        for r in H:
            r[j] -= q * r[k]
        for r in U:
            r[j] -= q * r[k]

    def swap(j, k):
        for r in H:
            r[j], r[k] = r[k], r[j]
        for r in U:
            r[j], r[k] = r[k], r[j]

    col = 0
    for row in range(m):
        if col >= n:
            break
        while True:
            nz = [j for j in range(col, n) if H[row][j] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(H[row][j]))
            swap(col, jmin)
            done = True
            for j in range(col + 1, n):
                if H[row][j]:
                    colop(j, col, H[row][j] // H[row][col])
                    if H[row][j]:
                        done = False
            if done:
                break
        if H[row][col] != 0:
            if H[row][col] < 0:
                for r in H:
                    r[col] = -r[col]
                for r in U:
                    r[col] = -r[col]
            col += 1
    return H, U, col


def int_kernel(A: list[list[int]], ncols: int) -> list[list[int]]:
    """Z-basis (as column vectors) of {v in Z^n : A v = 0}."""
    if not A:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    _, U, r = int_column_hnf(A)
    return [[U[i][j] for i in range(ncols)] for j in range(r, ncols)]


def smith_diagonal(A: list[list[int]]) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    M = [list(r) for r in A]
    m = len(M)
    n = len(M[0]) if M else 0
    diag = []
    t = 0
    while t < min(m, n):
        entries = [(abs(M[i][j]), i, j) for i in range(t, m) for j in range(t, n) if M[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        M[t], M[i] = M[i], M[t]
        for r in M:
            r[t], r[j] = r[j], r[t]
        while True:
            changed = False
            for i in range(t + 1, m):
                if M[i][t]:
                    q = M[i][t] // M[t][t]
                    M[i] = [a - q * b for a, b in zip(M[i], M[t])]
                    if M[i][t]:
                        changed = True
            for j in range(t + 1, n):
                if M[t][j]:
                    q = M[t][j] // M[t][t]
                    for r in M:
                        r[j] -= q * r[t]
                    if M[t][j]:
                        changed = True
            if changed:
                entries = [(abs(M[i][t]), i, t) for i in range(t, m) if M[i][t]]
                entries += [(abs(M[t][j]), t, j) for j in range(t, n) if M[t][j]]
                _, i, j = min(entries)
                M[t], M[i] = M[i], M[t]
                for r in M:
                    r[t], r[j] = r[j], r[t]
                continue
            # divisibility of the rest by the pivot
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if M[i][j] % M[t][t]), None)
            if bad is None:
                break
            M[t] = [a + b for a, b in zip(M[t], M[bad[0]])]
        diag.append(abs(M[t][t]))
        t += 1
    return diag
