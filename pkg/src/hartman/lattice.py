"""Integer-matrix utilities: Smith/Hermite normal forms, kernels, congruences.

All matrices are lists of lists of Python ints (arbitrary precision).  Sizes
here are tiny (generator counts and torus ranks), so the classical algorithms
are used without any fill-in control.
"""

from __future__ import annotations

from math import gcd


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    assert not a or len(a[0]) == k
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]


def _add_row(m, dst, src, k):
    m[dst] = [x + k * y for x, y in zip(m[dst], m[src])]


def _add_col(m, dst, src, k):
    for row in m:
        row[dst] += k * row[src]


def smith_normal_form(a: list[list[int]]):
    """Return (U, D, V) with U @ a @ V = D, U and V unimodular, D diagonal
    with nonnegative entries satisfying d_1 | d_2 | ...  Also returns the
    inverses of U and V (tracked alongside, so no matrix inversion needed):
    (U, D, V, Uinv, Vinv).
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    d = [list(map(int, r)) for r in a]
    u, uinv = identity(rows), identity(rows)
    v, vinv = identity(cols), identity(cols)

    def row_op(i, j, k):  # row_i += k * row_j on D; mirror on U, inverse on Uinv
        _add_row(d, i, j, k)
        _add_row(u, i, j, k)
        _add_col(uinv, j, i, -k)

    def col_op(i, j, k):  # col_i += k * col_j
        _add_col(d, i, j, k)
        _add_col(v, i, j, k)
        _add_row(vinv, j, i, -k)

    def row_swap(i, j):
        _swap_rows(d, i, j)
        _swap_rows(u, i, j)
        _swap_cols(uinv, i, j)

    def col_swap(i, j):
        _swap_cols(d, i, j)
        _swap_cols(v, i, j)
        _swap_rows(vinv, i, j)

    def negate_row(t):
        for j in range(cols):
            d[t][j] = -d[t][j]
        for j in range(rows):
            u[t][j] = -u[t][j]
        for i in range(rows):
            uinv[i][t] = -uinv[i][t]

    def reduce_from(t0):
        t = t0
        while t < min(rows, cols):
            # locate a nonzero pivot of minimal magnitude in the remaining block
            pivot = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if d[i][j] != 0 and (
                        pivot is None or abs(d[i][j]) < abs(d[pivot[0]][pivot[1]])
                    ):
                        pivot = (i, j)
            if pivot is None:
                break
            if pivot[0] != t:
                row_swap(t, pivot[0])
            if pivot[1] != t:
                col_swap(t, pivot[1])
            # clear row and column t; terminates since |d[t][t]| shrinks on swaps
            dirty = True
            while dirty:
                dirty = False
                for i in range(t + 1, rows):
                    if d[i][t] != 0:
                        q = d[i][t] // d[t][t]
                        row_op(i, t, -q)
                        if d[i][t] != 0:
                            row_swap(t, i)
                            dirty = True
                for j in range(t + 1, cols):
                    if d[t][j] != 0:
                        q = d[t][j] // d[t][t]
                        col_op(j, t, -q)
                        if d[t][j] != 0:
                            col_swap(t, j)
                            dirty = True
            if d[t][t] < 0:
                negate_row(t)
            t += 1

    reduce_from(0)
    # enforce the divisibility chain d_1 | d_2 | ...; each fix strictly
    # reduces |d_i| so the loop terminates
    while True:
        violation = None
        for i in range(min(rows, cols) - 1):
            if d[i][i] != 0 and d[i + 1][i + 1] % d[i][i] != 0:
                violation = i
                break
        if violation is None:
            break
        row_op(violation, violation + 1, 1)
        reduce_from(violation)
    return u, d, v, uinv, vinv


def diagonal_of(d: list[list[int]]) -> list[int]:
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def left_kernel(a: list[list[int]]) -> list[list[int]]:
    """Basis (rows) of {x in Z^m : x @ a = 0}."""
    rows = len(a)
    if rows == 0:
        return []
    cols = len(a[0])
    if cols == 0:
        return identity(rows)
    u, d, _, _, _ = smith_normal_form(a)
    diag = diagonal_of(d)
    basis = []
    for i in range(rows):
        di = diag[i] if i < len(diag) else 0
        if di == 0:
            basis.append(list(u[i]))
    return basis


def kernel_mod(p: list[list[int]], q: int) -> list[list[int]]:
    """Basis (rows) of the full-rank lattice {v in Z^t : p @ v = 0 (mod q)}."""
    s = len(p)
    t = len(p[0]) if s else 0
    if t == 0:
        return []
    if s == 0 or q == 1:
        return identity(t)
    _, d, v, _, _ = smith_normal_form(p)
    diag = diagonal_of(d)
    basis = []
    for i in range(t):
        di = abs(diag[i]) if i < len(diag) else 0
        scale = q // gcd(di, q)
        basis.append([v[r][i] * scale for r in range(t)])
    return basis


def row_hnf(rows: list[list[int]]) -> list[list[int]]:
    """Canonical row Hermite normal form of the lattice spanned by `rows`.

    Result rows have positive pivots in strictly increasing column order,
    zeros below each pivot and entries above a pivot reduced into [0, pivot).
    Zero rows are dropped.
    """
    work = [list(map(int, r)) for r in rows if any(r)]
    if not work:
        return []
    ncols = len(work[0])
    result: list[list[int]] = []
    col = 0
    while col < ncols and work:
        nz = [r for r in work if r[col] != 0]
        rest = [r for r in work if r[col] == 0]
        if not nz:
            col += 1
            continue
        # Euclidean reduction of this column; terminates since the sum of
        # absolute column entries strictly decreases
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            head = nz[0]
            reduced = [head]
            for r in nz[1:]:
                k = r[col] // head[col]
                r2 = [x - k * y for x, y in zip(r, head)]
                if r2[col] != 0:
                    reduced.append(r2)
                elif any(r2):
                    rest.append(r2)
            nz = reduced
        pivot_row = nz[0] if nz[0][col] > 0 else [-x for x in nz[0]]
        result.append(pivot_row)
        work = rest
        col += 1
    # reduce entries above pivots
    for i in range(len(result) - 1, -1, -1):
        pcol = next(j for j, x in enumerate(result[i]) if x != 0)
        for k in range(i):
            q = result[k][pcol] // result[i][pcol]
            if q:
                result[k] = [x - q * y for x, y in zip(result[k], result[i])]
    return result


def solve_congruence(a: int, b: int, m: int) -> tuple[int, int] | None:
    """Solve a*x = b (mod m); returns (x0, period) with all solutions
    x0 + k*period, or None if unsolvable."""
    m = abs(m)
    if m == 0:
        if a == 0:
            return (0, 1) if b == 0 else None
        return (b // a, 0) if b % a == 0 else None
    a, b = a % m, b % m
    g = gcd(a, m)
    if b % g != 0:
        return None
    mm = m // g
    x0 = (b // g) * pow(a // g, -1, mm) % mm
    return x0, mm


def crt_intersect(c1: tuple[int, int], c2: tuple[int, int]) -> tuple[int, int] | None:
    """Intersect residue classes x = r1 (mod m1) and x = r2 (mod m2)."""
    r1, m1 = c1
    r2, m2 = c2
    if m1 == 0:
        return c1 if (m2 == 0 and r1 == r2) or (m2 and (r1 - r2) % m2 == 0) else None
    if m2 == 0:
        return c2 if (r2 - r1) % m1 == 0 else None
    g = gcd(m1, m2)
    if (r2 - r1) % g != 0:
        return None
    lcm = m1 // g * m2
    k = ((r2 - r1) // g * pow(m1 // g, -1, m2 // g)) % (m2 // g)
    return (r1 + k * m1) % lcm, lcm
