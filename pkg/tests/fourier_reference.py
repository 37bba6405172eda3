"""Direct expansion of the two Fourier integrals for (P^1, O(1)).

Laurent polynomials in ``X = e^{ix}`` are dicts ``(monomial, xpow) -> Fraction``
with monomials as sorted tuples of ``((tag, k, i), exponent)``.  Nothing here
uses the series engine.
"""

from fractions import Fraction


def _mul(a, b, keep):
    out = {}
    for (ma, xa), ca in a.items():
        for (mb, xb), cb in b.items():
            d = dict(ma)
            for v, e in mb:
                d[v] = d.get(v, 0) + e
            m = tuple(sorted(d.items()))
            if not keep(m):
                continue
            key = (m, xa + xb)
            out[key] = out.get(key, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def _window(max_weight, max_beta):
    def keep(m):
        pw = sum(v[1] * e for v, e in m if v[0] == "p")
        qw = sum(v[1] * e for v, e in m if v[0] == "q")
        bo = sum(e for v, e in m if v[0] == "b")
        return pw <= max_weight and qw <= max_weight and bo <= max_beta

    return keep


def _field(j, max_weight):
    s = {(((("b", 0, j), 1),), 0): Fraction(1)}
    for k in range(1, max_weight + 1):
        s[(((("p", k, j), 1),), -k)] = Fraction(1)
        s[(((("q", k, j), 1),), k)] = Fraction(1)
    return s


def p1_o1_display(max_weight, max_beta):
    """``{(z, monomial): coefficient}`` of ``hbar A`` for ``(P^1, O(1))``."""
    keep = _window(max_weight, max_beta)
    s0, s2 = _field(0, max_weight), _field(1, max_weight)
    cubic = _mul(_mul(s0, s0, keep), s2, keep)
    out = {}
    for (m, x), c in cubic.items():
        if x == 0:
            out[(0, m)] = c / 2
    # exp(S_2) * e^{ix}: keep the X^{-1} part of exp(S_2)
    power = {((), 0): Fraction(1)}
    fact = 1
    n = 0
    expo = dict(power)
    while True:
        n += 1
        fact *= n
        power = _mul(power, s2, keep)
        if not power:
            break
        for k, c in power.items():
            expo[k] = expo.get(k, 0) + c / fact
    for (m, x), c in expo.items():
        if x == -1 and c:
            out[(1, m)] = c
    return out
