"""Independent classical reference counts.

Nothing in this module touches the series engine.  The routines are written
in a deliberately naive style straight from the classical statements so that
they can serve as oracles for the generating-function pipelines:

* :func:`kontsevich_recursion` -- rational plane curve counts ``N_d`` through
  ``3d - 1`` points via the WDVV recursion.
* :func:`ch_recursion` -- Caporaso-Harris numbers ``N^{d,delta}(alpha, beta)``
  (generalized Severi degrees: reduced, possibly reducible curves), and their
  irreducible parts obtained by peeling off the component through a marked
  point.
* :func:`hurwitz_bruteforce` -- weighted counts of transposition tuples in the
  symmetric group.

Tangency data follows Caporaso-Harris: ``alpha[k-1]`` is the number of contact
points of order ``k`` at *fixed* points of the line, ``beta[k-1]`` the number
of order ``k`` contacts at unspecified points.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

__all__ = [
    "kontsevich_recursion",
    "ch_recursion",
    "severi_degree",
    "irreducible_ch",
    "point_count",
    "hurwitz_bruteforce",
    "cycle_type",
    "golden_tables",
]


def kontsevich_recursion(max_degree: int) -> list[Fraction]:
    """Return ``[N_1, ..., N_max_degree]``.

    >>> [int(n) for n in kontsevich_recursion(4)]
    [1, 1, 12, 620]
    """
    if max_degree < 1:
        return []
    N = [Fraction(0), Fraction(1)]
    for d in range(2, max_degree + 1):
        total = Fraction(0)
        for a in range(1, d):
            b = d - a
            total += N[a] * N[b] * a * a * b * (
                b * comb(3 * d - 4, 3 * a - 2) - a * comb(3 * d - 4, 3 * a - 1)
            )
        N.append(total)
    return N[1:]


def _norm(v) -> tuple[int, ...]:
    v = tuple(int(x) for x in v)
    while v and v[-1] == 0:
        v = v[:-1]
    return v


def _I(v) -> int:
    return sum((k + 1) * x for k, x in enumerate(v))


def _size(v) -> int:
    return sum(v)


def _pad(v, n):
    return tuple(v) + (0,) * (n - len(v))


def point_count(d: int, delta: int, beta) -> int:
    """Number of general points imposed: ``2d + g - 1 + |beta|``."""
    g = (d - 1) * (d - 2) // 2 - delta
    return 2 * d + g - 1 + _size(beta)


@lru_cache(maxsize=None)
def _severi(d: int, delta: int, alpha: tuple, beta: tuple) -> int:
    if d == 0:
        return 1 if (delta == 0 and not alpha and not beta) else 0
    if delta < 0 or point_count(d, delta, beta) <= 0:
        return 0
    total = 0
    # specialise a point onto the line: a free tangency becomes fixed
    for k, bk in enumerate(beta):
        if bk:
            a2 = list(_pad(alpha, max(len(alpha), k + 1)))
            a2[k] += 1
            b2 = list(beta)
            b2[k] -= 1
            total += (k + 1) * _severi(d, delta, _norm(a2), _norm(b2))
    # or the line splits off
    width = d
    A = _pad(alpha, width)
    ranges = [range(a + 1) for a in A]
    for ap in itertools.product(*ranges):
        Ia = _I(ap)
        if Ia > d - 1:
            continue
        need = d - 1 - Ia
        # beta' >= beta with I(beta') = need
        base = _pad(beta, width)
        extra_budget = need - _I(base)
        if extra_budget < 0:
            continue
        for extra in _vectors_with_I(extra_budget, width):
            bp = tuple(b + e for b, e in zip(base, extra))
            dprime = delta - (d - 1) + _size(extra)
            if dprime < 0:
                continue
            coeff = 1
            for k, e in enumerate(extra):
                coeff *= (k + 1) ** e
            for a, a_ in zip(A, ap):
                coeff *= comb(a, a_)
            for b_, b in zip(bp, base):
                coeff *= comb(b_, b)
            total += coeff * _severi(d - 1, dprime, _norm(ap), _norm(bp))
    return total


@lru_cache(maxsize=None)
def _vectors_with_I(target: int, width: int) -> tuple[tuple[int, ...], ...]:
    """All nonnegative vectors ``v`` of length ``width`` with ``sum (k+1) v_k = target``."""
    out = []

    def rec(k, remaining, acc):
        if k == width:
            if remaining == 0:
                out.append(tuple(acc))
            return
        w = k + 1
        for c in range(remaining // w + 1):
            rec(k + 1, remaining - c * w, acc + [c])

    rec(0, target, [])
    return tuple(out)


def _check_profile(d, alpha, beta):
    if any(x < 0 for x in alpha) or any(x < 0 for x in beta):
        raise ValueError("tangency vectors must be nonnegative")
    if _I(alpha) + _I(beta) != d:
        raise ValueError(
            f"inconsistent profile: I(alpha) + I(beta) = {_I(alpha) + _I(beta)} != d = {d}"
        )


def severi_degree(d: int, delta: int, alpha=(), beta=()) -> int:
    """Caporaso-Harris number counting reduced (possibly reducible) curves."""
    alpha, beta = _norm(alpha), _norm(beta)
    _check_profile(d, alpha, beta)
    return _severi(d, delta, alpha, beta)


# -- irreducible counts ------------------------------------------------------
#
# A reduced curve through n labelled general points is the union of the
# irreducible component through point 1 with a reduced curve through the
# remaining points.  Fixed contact points are labelled (binomial choices),
# free contacts are not.


@lru_cache(maxsize=None)
def _S(d: int, n: int, alpha: tuple, beta: tuple) -> int:
    if d == 0:
        return 1 if (n == 0 and not alpha and not beta) else 0
    if n <= 0:
        return 0
    g = n - 2 * d + 1 - _size(beta)
    delta = (d - 1) * (d - 2) // 2 - g
    return _severi(d, delta, alpha, beta)


@lru_cache(maxsize=None)
def _irr(d: int, n: int, alpha: tuple, beta: tuple) -> int:
    if d == 0 or n <= 0:
        return 0
    g = n - 2 * d + 1 - _size(beta)
    if g < 0:
        return 0
    total = _S(d, n, alpha, beta)
    w = d
    A, B = _pad(alpha, w), _pad(beta, w)
    for a1 in itertools.product(*[range(a + 1) for a in A]):
        for b1 in itertools.product(*[range(b + 1) for b in B]):
            d1 = _I(a1) + _I(b1)
            if d1 == 0 or d1 >= d:
                continue
            a2 = tuple(x - y for x, y in zip(A, a1))
            b2 = tuple(x - y for x, y in zip(B, b1))
            mult = 1
            for x, y in zip(A, a1):
                mult *= comb(x, y)
            for s in range(1, n):
                c = _irr(d1, s, _norm(a1), _norm(b1))
                if not c:
                    continue
                rest = _S(d - d1, n - s, _norm(a2), _norm(b2))
                total -= comb(n - 1, s - 1) * mult * c * rest
    return total


def irreducible_ch(d: int, delta: int, alpha=(), beta=()) -> int:
    """Irreducible part of the Caporaso-Harris number (genus ``g = (d-1)(d-2)/2 - delta``)."""
    alpha, beta = _norm(alpha), _norm(beta)
    _check_profile(d, alpha, beta)
    n = point_count(d, delta, beta)
    return _irr(d, n, alpha, beta)


def ch_recursion(d: int, delta: int, alpha=(), beta=(), irreducible: bool = False) -> Fraction:
    """Caporaso-Harris number ``N^{d,delta}(alpha, beta)`` as an exact rational.

    With ``irreducible=False`` (default) this is the generalized Severi degree
    of the Caporaso-Harris recursion; reducible curves are included, so e.g.
    ``ch_recursion(2, 1, beta=(2,)) == 3`` counts line pairs through 4 points.
    """
    if irreducible:
        return Fraction(irreducible_ch(d, delta, alpha, beta))
    return Fraction(severi_degree(d, delta, alpha, beta))


# -- Hurwitz ------------------------------------------------------------------


def cycle_type(perm: tuple[int, ...]) -> tuple[int, ...]:
    seen = [False] * len(perm)
    parts = []
    for s in range(len(perm)):
        if seen[s]:
            continue
        length = 0
        j = s
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        parts.append(length)
    return tuple(sorted(parts, reverse=True))


@lru_cache(maxsize=None)
def _tuple_counts(d: int, r: int) -> dict:
    """Map permutation -> number of r-tuples of transpositions with that product."""
    identity = tuple(range(d))
    if r == 0:
        return {identity: 1}
    prev = _tuple_counts(d, r - 1)
    transpositions = []
    for i, j in itertools.combinations(range(d), 2):
        t = list(identity)
        t[i], t[j] = j, i
        transpositions.append(tuple(t))
    out: dict = {}
    for perm, c in prev.items():
        for t in transpositions:
            prod = tuple(t[perm[x]] for x in range(d))
            out[prod] = out.get(prod, 0) + c
    return out


def hurwitz_bruteforce(d: int, mu, num_transpositions: int) -> Fraction:
    """``(1/d!) #{(t_1..t_r) transpositions in S_d : t_r...t_1 has cycle type mu}``.

    Tuples are enumerated exhaustively by convolution over the group.
    """
    mu = tuple(sorted((int(x) for x in mu), reverse=True))
    if sum(mu) != d:
        raise ValueError("mu must be a partition of d")
    counts = _tuple_counts(d, num_transpositions)
    hits = sum(c for perm, c in counts.items() if cycle_type(perm) == mu)
    return Fraction(hits, factorial(d))


def _count_vectors(total: int):
    """All ``v`` with ``sum k * v[k-1] == total``, as trimmed tuples."""

    def rec(k, rem, acc):
        if rem == 0:
            yield tuple(acc)
            return
        if k > rem:
            return
        for c in range(rem // k + 1):
            yield from rec(k + 1, rem - c * k, acc + [c])

    yield from (_norm(v) for v in rec(1, total, []))


def _partitions(n: int, largest: int | None = None):
    largest = largest or n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def golden_tables(max_degree: int = 4, max_delta: int = 2, hurwitz_degree: int = 5, max_transpositions: int = 6) -> dict[str, str]:
    """Reference tables as text files, keyed by file name."""
    kont = "".join(f"{d} {n}\n" for d, n in enumerate(kontsevich_recursion(max_degree), 1))
    rows = []
    for d in range(1, max_degree + 1):
        for delta in range(max_delta + 1):
            for weight in range(d + 1):
                for alpha in sorted(set(_count_vectors(weight))):
                    for beta in sorted(set(_count_vectors(d - weight))):
                        if point_count(d, delta, beta) < 0:
                            continue
                        full = ch_recursion(d, delta, alpha, beta)
                        irr = ch_recursion(d, delta, alpha, beta, irreducible=True)
                        a = ",".join(map(str, alpha)) or "-"
                        b = ",".join(map(str, beta)) or "-"
                        rows.append(f"{d} {delta} {a} {b} {full} {irr}\n")
    hur = []
    for d in range(1, hurwitz_degree + 1):
        for r in range(max_transpositions + 1):
            for mu in _partitions(d):
                hur.append(f"{d} {','.join(map(str, mu))} {r} {hurwitz_bruteforce(d, mu, r)}\n")
    return {
        "kontsevich.txt": "# degree N_d\n" + kont,
        "caporaso_harris.txt": "# degree delta alpha beta all_reduced irreducible\n" + "".join(rows),
        "hurwitz.txt": "# degree mu transpositions value\n" + "".join(hur),
    }
