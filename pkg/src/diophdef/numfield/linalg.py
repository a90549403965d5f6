"""Exact integer and rational linear algebra on small dense matrices (lists of rows)."""
from __future__ import annotations

from fractions import Fraction


def det_bareiss(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def solve_rows(a: list[list], b: list) -> list[Fraction] | None:
    """Solve c·A = b for a row vector c (A has full row rank). None if inconsistent."""
    m = len(a)
    n = len(b)
    # transpose to column system: A^T c = b, n equations in m unknowns
    rows = [[Fraction(a[i][j]) for i in range(m)] + [Fraction(b[j])] for j in range(n)]
    piv_cols = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [vi - f * vr for vi, vr in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, n):
        if rows[i][m] != 0:
            return None
    if len(piv_cols) < m:
        raise ValueError("matrix does not have full row rank")
    sol = [Fraction(0)] * m
    for i, c in enumerate(piv_cols):
        sol[c] = rows[i][m]
    return sol


def echelon(rows: list[list[int]], ncols: int, transform: bool = False):
    """Lower-triangular row echelon form by unimodular row operations.

    Returns (pivots, zero_rows, U) where pivots maps column -> row whose last
    nonzero entry sits in that column (positive), entries to the left of a
    later pivot reduced into [0, pivot). zero_rows lists indices of rows of
    the transformed matrix that vanished; with transform=True the matching
    rows of U span the integer left kernel.
    """
    a = [list(r) for r in rows]
    m = len(a)
    u = [[int(i == j) for j in range(m)] for i in range(m)] if transform else None
    active = list(range(m))
    pivots: dict[int, int] = {}
    for c in range(ncols - 1, -1, -1):
        while True:
            nz = [i for i in active if a[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(a[i][c]))
            if len(nz) == 1:
                break
            for i in nz:
                if i == p:
                    continue
                q = a[i][c] // a[p][c]
                if q:
                    ai, ap = a[i], a[p]
                    for j in range(c + 1):
                        ai[j] -= q * ap[j]
                    if u is not None:
                        ui, up = u[i], u[p]
                        for j in range(m):
                            ui[j] -= q * up[j]
        nz = [i for i in active if a[i][c] != 0]
        if not nz:
            continue
        p = nz[0]
        if a[p][c] < 0:
            a[p] = [-v for v in a[p]]
            if u is not None:
                u[p] = [-v for v in u[p]]
        pivots[c] = p
        active.remove(p)
    # reduce entries left of each pivot's column using the lower pivots
    cols = sorted(pivots, reverse=True)
    for c in cols:
        p = pivots[c]
        for c2 in cols:
            if c2 <= c:
                continue
            k = pivots[c2]
            q = a[k][c] // a[p][c]
            if q:
                for j in range(c + 1):
                    a[k][j] -= q * a[p][j]
                if u is not None:
                    for j in range(m):
                        u[k][j] -= q * u[p][j]
    return a, pivots, active, u


def hnf_square(rows: list[list[int]], n: int) -> tuple[tuple[int, ...], ...] | None:
    """Row HNF of a full-rank lattice in Z^n as an n×n lower-triangular matrix.

    Returns None when the rows span a lattice of rank < n.
    """
    a, pivots, _, _ = echelon(rows, n)
    if len(pivots) < n:
        return None
    return tuple(tuple(a[pivots[i]]) for i in range(n))


def left_kernel(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Integer basis of {c : c·A = 0} (saturated, since the transform is unimodular)."""
    a, pivots, zero, u = echelon(rows, ncols, transform=True)
    return [u[i] for i in zero]


def solve_integral(rows: list[list[int]], target: list[int], ncols: int) -> list[int] | None:
    """Integer c with c·A = target, or None when target is outside the row lattice."""
    a, pivots, _, u = echelon(rows, ncols, transform=True)
    t = list(target)
    coeffs = [0] * len(rows)
    for c in range(ncols - 1, -1, -1):
        if t[c] == 0:
            continue
        p = pivots.get(c)
        if p is None or t[c] % a[p][c]:
            return None
        q = t[c] // a[p][c]
        for j in range(c + 1):
            t[j] -= q * a[p][j]
        for j in range(len(rows)):
            coeffs[j] += q * u[p][j]
    return coeffs
