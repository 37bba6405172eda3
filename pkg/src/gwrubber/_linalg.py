"""Tiny exact linear algebra over Fractions (matrices are tuples of row tuples)."""

from __future__ import annotations

from fractions import Fraction


def frac_matrix(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def identity(n: int):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def zeros(r: int, c: int):
    return tuple(tuple(Fraction(0) for _ in range(c)) for _ in range(r))


def matmul(a, b):
    if not a:
        return ()
    inner = len(b)
    cols = len(b[0]) if b else 0
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(inner)), Fraction(0)) for j in range(cols))
        for i in range(len(a))
    )


def transpose(a):
    if not a:
        return ()
    return tuple(tuple(a[i][j] for i in range(len(a))) for j in range(len(a[0])))


def _rref(rows):
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(a) -> int:
    if not a or not a[0]:
        return 0
    return len(_rref(a)[1])


def inverse(a):
    n = len(a)
    aug = [list(a[i]) + list(identity(n)[i]) for i in range(n)]
    m, pivots = _rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular")
    return tuple(tuple(row[n:]) for row in m[:n])


def solve_row_combination(rows, target, prefer=None):
    """Find coefficients ``a`` with ``sum_k a_k rows[k] == target``.

    ``prefer`` is an optional ordered list of row indices tried first as the
    support of the solution; returns ``None`` when no solution exists.
    """
    order = list(prefer or []) + [k for k in range(len(rows)) if k not in (prefer or [])]
    for size in range(1, len(order) + 1):
        support = order[:size]
        sol = _solve_on_support(rows, target, support)
        if sol is not None:
            return sol
    if all(x == 0 for x in target):
        return tuple(Fraction(0) for _ in rows)
    return None


def _solve_on_support(rows, target, support):
    ncols = len(target)
    # columns of the system are the chosen rows
    aug = [[rows[k][c] for k in support] + [target[c]] for c in range(ncols)]
    m, pivots = _rref(aug)
    if len(support) in pivots:
        return None
    sol = [Fraction(0)] * len(rows)
    for r, c in enumerate(pivots):
        sol[support[c]] = m[r][-1]
    return tuple(sol)
