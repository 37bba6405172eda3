"""Weyl-algebra layer: star product, interface product, cylinder transform, actions.

Elements of the rubber algebra are :class:`~gwrubber.series.Series` in a
``rubber`` (or ``hamiltonian``) universe, always stored in normal order.  The
commutator is ``[q_{n,i}, p_{n,j}] = n g^{ij} hbar`` with ``g^{ij}`` the inverse
of the intersection pairing.

Products are computed by enumerating contractions between the ``q`` factors of
the left monomial and the ``p`` factors of the right one.  :func:`star_via_operators`
realizes the same product by letting each ``q`` act as a differential operator
and is kept as an independent cross-check.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial

from .rings import RelativePairDescriptor
from .series import (
    UNBOUNDED,
    CapsExceeded,
    Kind,
    Monomial,
    Series,
    TruncationCaps,
    Universe,
    Var,
    _merge,
    add,
    derive,
    exp_truncated,
    make_monomial,
    mul,
)

_HBAR = Var(Kind.HBAR)

__all__ = [
    "star",
    "star_bar",
    "star_via_operators",
    "trivial_cylinder_transform",
    "cylinder_generator",
    "act",
    "act_bar",
    "fock_apply",
    "graded_commutator",
    "balance_defect",
    "check_balance",
]


# -- monomial anatomy ------------------------------------------------------------


def _split(m: Monomial):
    """Return ``(central, pfactors, qfactors)`` of a normal-ordered monomial."""
    central, ps, qs = [], [], []
    for v, e in m.factors:
        k = v[0]
        if k == Kind.P or k == Kind.PT:
            ps.append((v, e))
        elif k == Kind.Q or k == Kind.QT:
            qs.append((v, e))
        else:
            central.append((v, e))
    return tuple(central), tuple(ps), tuple(qs)


def _check_even(universe: Universe, factors):
    for v, _ in factors:
        if universe.parity(v):
            raise NotImplementedError("odd p/q interface variables are not supported")


# -- contraction enumeration -------------------------------------------------------

_TABLES: dict = {}


def _table(ginv):
    t = _TABLES.get(ginv)
    if t is None:
        t = _TABLES[ginv] = {}
    return t


def _group_matrices(qs, ps, ginv, n, need_all_q, need_all_p):
    """Contraction matrices between ``q_{n,i}^{e_i}`` and ``p_{n,j}^{f_j}`` of one multiplicity.

    Yields ``(count, coefficient, q_left, p_left)`` where ``count`` is the
    number of contractions.
    """
    cells = [(a, b) for a in range(len(qs)) for b in range(len(ps)) if ginv[qs[a][0]][ps[b][0]]]
    rows = [e for _, e in qs]
    cols = [f for _, f in ps]
    out = []

    def rec(k, rleft, cleft, chosen):
        if k == len(cells):
            if need_all_q and any(rleft):
                return
            if need_all_p and any(cleft):
                return
            w = Fraction(1)
            count = 0
            for a, e in enumerate(rows):
                w *= factorial(e) // factorial(rleft[a])
            for b, f in enumerate(cols):
                w *= factorial(f) // factorial(cleft[b])
            for (a, b), c in zip(cells, chosen):
                if c:
                    w *= Fraction((n * ginv[qs[a][0]][ps[b][0]]) ** c, factorial(c))
                    count += c
            out.append((count, w, tuple(rleft), tuple(cleft)))
            return
        a, b = cells[k]
        top = min(rleft[a], cleft[b])
        for c in range(top + 1):
            rleft[a] -= c
            cleft[b] -= c
            chosen.append(c)
            rec(k + 1, rleft, cleft, chosen)
            chosen.pop()
            rleft[a] += c
            cleft[b] += c

    rec(0, list(rows), list(cols), [])
    return out


def _contractions(qfac, pfac, ginv, mode):
    """All ways to contract ``qfac`` (left ``q``'s) against ``pfac`` (right ``p``'s).

    ``mode``: ``"star"`` (any partial matching), ``"act"`` (every ``q`` used),
    ``"bar"`` (perfect matching).  Returns a list of
    ``(hbar_power, coefficient, q_remaining, p_remaining)``.
    """
    key = (qfac, pfac, mode)
    table = _table(ginv)
    hit = table.get(key)
    if hit is not None:
        return hit
    need_q = mode in ("act", "bar")
    need_p = mode == "bar"
    by_n: dict = {}
    for v, e in qfac:
        by_n.setdefault(v[1], ([], []))[0].append((v[2], e, v))
    for v, f in pfac:
        by_n.setdefault(v[1], ([], []))[1].append((v[2], f, v))
    groups = []
    for n, (qs, ps) in sorted(by_n.items()):
        mats = _group_matrices([(i, e) for i, e, _ in qs], [(j, f) for j, f, _ in ps], ginv, n, need_q, need_p)
        if not mats:
            table[key] = []
            return []
        opts = []
        for count, w, rl, cl in mats:
            qrem = tuple((qs[a][2], r) for a, r in enumerate(rl) if r)
            prem = tuple((ps[b][2], c) for b, c in enumerate(cl) if c)
            opts.append((count, w, qrem, prem))
        groups.append(opts)
    result = []
    for combo in itertools.product(*groups):
        count = sum(c[0] for c in combo)
        w = Fraction(1)
        for c in combo:
            w *= c[1]
        if not w:
            continue
        qrem = tuple(sorted(x for c in combo for x in c[2]))
        prem = tuple(sorted(x for c in combo for x in c[3]))
        result.append((count, w, qrem, prem))
    table[key] = result
    return result


def _assemble(universe, z1, z2, parts, hpow):
    """Multiply canonical factor groups, in the given order, into one monomial with its sign."""
    zero = (0,) * len(z1)
    z = tuple(a + b for a, b in zip(z1, z2)) if z2 and any(z2) else z1
    m = Monomial(z, ())
    sign = 1
    for fac in parts:
        if not fac:
            continue
        r = _merge(m, Monomial(zero, fac), universe)
        if r is None:
            return None
        s, m = r
        sign *= s
    if hpow:
        _, m = _merge(m, Monomial(zero, ((_HBAR, hpow),)), universe)
    return sign, m


def _result_caps(a: Series, b: Series, caps):
    if caps is not None:
        return caps
    return a.caps if a.caps == b.caps else a.caps.intersect(b.caps)


def _ring_inverse(universe: Universe):
    return universe.ring.pairing_inverse


def star(a: Series, b: Series, caps: TruncationCaps | None = None) -> Series:
    """Normal-ordered Weyl product ``a * b``."""
    if a.universe != b.universe:
        raise ValueError("universe mismatch")
    u = a.universe
    caps = _result_caps(a, b, caps)
    ginv = _ring_inverse(u)
    admits = caps.admits
    out: dict = {}
    bsplit = [(mb, cb, _split(mb)) for mb, cb in b.terms.items()]
    for ma, ca in a.terms.items():
        Ca, Pa, Qa = _split(ma)
        _check_even(u, Qa)
        for mb, cb, (Cb, Pb, Qb) in bsplit:
            if Qa and Pb:
                _check_even(u, Pb)
                options = _contractions(Qa, Pb, ginv, "star")
            else:
                options = ((0, Fraction(1), Qa, Pb),)
            for count, w, qrem, prem in options:
                r = _assemble(u, ma.z, mb.z, (Ca, Cb, Pa, prem, qrem, Qb), count)
                if r is None:
                    continue
                s, m = r
                if not admits(m):
                    continue
                v = out.get(m, 0) + s * w * ca * cb
                if v:
                    out[m] = v
                else:
                    del out[m]
    return Series(u, out, caps, _trusted=True)


def star_bar(f: Series, h: Series, caps: TruncationCaps | None = None) -> Series:
    """Interface product ``f *_| h``: ``f``'s ``q`` exactly consume ``h``'s ``p``."""
    if f.universe != h.universe:
        raise ValueError("universe mismatch")
    u = f.universe
    caps = _result_caps(f, h, caps)
    ginv = _ring_inverse(u)
    out: dict = {}
    hsplit = [(mh, ch, _split(mh)) for mh, ch in h.terms.items()]
    for mf, cf in f.terms.items():
        Cf, Pf, Qf = _split(mf)
        _check_even(u, Qf)
        qw = sum(v[1] * e for v, e in Qf)
        for mh, ch, (Ch, Ph, Qh) in hsplit:
            if sum(v[1] * e for v, e in Ph) != qw:
                continue
            if Qf:
                options = _contractions(Qf, Ph, ginv, "bar")
            else:
                options = ((0, Fraction(1), (), ()),)
            for count, w, _, _ in options:
                r = _assemble(u, mf.z, mh.z, (Cf, Ch, Pf, Qh), count)
                if r is None:
                    continue
                s, m = r
                if not caps.admits(m):
                    continue
                v = out.get(m, 0) + s * w * cf * ch
                if v:
                    out[m] = v
                else:
                    del out[m]
    return Series(u, out, caps, _trusted=True)


def _apply_q(v: Var, s: Series, ginv, caps) -> Series:
    """Left multiplication by ``q_{n,i}`` realized as ``S q + n hbar g^{ij} dS/dp_{n,j}``."""
    u = s.universe
    n, i = v[1], v[2]
    out = mul(s, Series.var(u, v, UNBOUNDED), caps)
    hb = Series.monomial(u, [(Var(Kind.HBAR), 1)], n, UNBOUNDED)
    for j, g in enumerate(ginv[i]):
        if g:
            d = derive(s, Var(Kind.P, n, j))
            if d:
                out = add(out, mul(hb, d, caps).scale(g))
    return out


def star_via_operators(a: Series, b: Series, caps: TruncationCaps | None = None) -> Series:
    """Weyl product computed by letting each ``q`` act as a differential operator."""
    if a.universe != b.universe:
        raise ValueError("universe mismatch")
    u = a.universe
    caps = _result_caps(a, b, caps)
    ginv = _ring_inverse(u)
    total = Series.zero(u, caps)
    for ma, ca in a.items():
        Ca, Pa, Qa = _split(ma)
        cur = Series(u, b.terms, UNBOUNDED, _trusted=True)
        for v, e in reversed(Qa):
            for _ in range(e):
                cur = _apply_q(v, cur, ginv, UNBOUNDED)
        left = Series(u, {Monomial(ma.z, tuple(sorted(Ca + Pa))): ca}, UNBOUNDED, _trusted=True)
        total = add(total, mul(left, cur, caps))
    return total


# -- trivial cylinders -------------------------------------------------------------


def cylinder_generator(universe: Universe, max_n: int, caps: TruncationCaps = UNBOUNDED) -> Series:
    """``TK = sum_n (1/n) hbar^{-1} sum_{i,j} g_{ij} p_{n,i} q_{n,j}`` for ``n <= max_n``."""
    g = universe.ring.pairing
    h = Var(Kind.HBAR)
    terms = {}
    z0 = universe.zero_z()
    for n in range(1, max_n + 1):
        for i, row in enumerate(g):
            for j, gij in enumerate(row):
                if gij:
                    m = Monomial(z0, tuple(sorted([(h, -1), (Var(Kind.P, n, i), 1), (Var(Kind.Q, n, j), 1)])))
                    terms[m] = terms.get(m, 0) + Fraction(gij) / n
    return Series(universe, terms, caps)


def trivial_cylinder_transform(f: Series, caps: TruncationCaps | None = None) -> Series:
    """``T(f) = exp(TK) f``; the window must bound the ``p`` or the ``q`` weight."""
    caps = caps or f.caps
    bound = [c for c in (caps.max_p_weight, caps.max_q_weight) if c is not None]
    if not bound:
        raise CapsExceeded("trivial_cylinder_transform needs a finite p- or q-weight cap")
    K = cylinder_generator(f.universe, max(bound), caps)
    return mul(exp_truncated(K), Series(f.universe, f.terms, caps))


# -- actions on the relative algebra ----------------------------------------------------


def _beta_images(pair: RelativePairDescriptor, retained):
    images = {}
    for l in range(len(pair.divisor)):
        img = {j: c for j, c in pair.beta_image(l).items() if retained is None or j in retained}
        images[l] = img
    return images


def _central_to_relative(central, pair, images, target: Universe):
    """Expand the central factors of a rubber monomial as relative-algebra terms.

    Returns ``[(factors, coefficient)]``; ``lambda`` acts by zero.
    """
    base = []
    expansions = [((), Fraction(1))]
    for v, e in central:
        k = v[0]
        if k == Kind.LAMBDA:
            return []
        if k == Kind.HBAR:
            base.append((v, e))
            continue
        if k != Kind.BETA:
            raise ValueError(f"cannot act with {v!r} on the relative algebra")
        img = images[v[2]]
        if not img:
            return []
        new = []
        for fac, c in expansions:
            for combo in itertools.combinations_with_replacement(sorted(img), e):
                w = Fraction(factorial(e))
                counts: dict = {}
                for j in combo:
                    counts[j] = counts.get(j, 0) + 1
                for j, cnt in counts.items():
                    w = w / factorial(cnt) * img[j] ** cnt
                new.append((fac + tuple((Var(Kind.THETA, 0, j), cnt) for j, cnt in counts.items()), c * w))
        expansions = new
    return [(make_monomial((), tuple(base) + fac).factors, c) for fac, c in expansions]


def _act_generic(h: Series, f: Series, pair: RelativePairDescriptor, retained, mode, caps):
    target = f.universe
    if target.kind != "relative" or target.context != pair:
        raise ValueError("f must live in the relative universe of the pair")
    if h.universe.kind != "rubber" or h.universe.context.basis != pair.divisor.basis:
        raise ValueError("h must live in the divisor's rubber universe")
    caps = caps or f.caps
    ginv = pair.divisor.pairing_inverse
    images = _beta_images(pair, retained)
    zero_rel = target.zero_z()
    out: dict = {}
    fsplit = [(mf, cf, _split(mf)) for mf, cf in f.terms.items()]
    for mh, ch in h.terms.items():
        Ch, Ph, Qh = _split(mh)
        cent = _central_to_relative(Ch, pair, images, target)
        if not cent:
            continue
        zimg = pair.pushforward(mh.z) if mh.z else zero_rel
        ptil = tuple((Var(Kind.PT, v[1], v[2]), e) for v, e in Ph)
        qtil = tuple((Var(Kind.QT, v[1], v[2]), e) for v, e in Qh)
        qw = sum(v[1] * e for v, e in Qh)
        for mf, cf, (Cf, Pf, _) in fsplit:
            if mode == "bar" and sum(v[1] * e for v, e in Pf) != qw:
                continue
            if qtil:
                options = _contractions(qtil, Pf, ginv, mode)
            elif mode == "bar" and Pf:
                continue
            else:
                options = ((0, Fraction(1), (), Pf),)
            for count, w, _, prem in options:
                if mode == "bar":
                    prem = ()
                for fac, c in cent:
                    r = _assemble(target, mf.z, zimg, (fac, Cf, ptil, prem), count)
                    if r is None:
                        continue
                    s, m = r
                    if not caps.admits(m):
                        continue
                    val = out.get(m, 0) + s * w * c * ch * cf
                    if val:
                        out[m] = val
                    else:
                        del out[m]
    return Series(target, out, caps, _trusted=True)


def act(h: Series, f: Series, pair: RelativePairDescriptor, retained=None, caps=None) -> Series:
    """Module action ``h . f`` of the divisor's rubber algebra on the relative algebra.

    ``lambda`` acts by zero, ``hbar`` by ``hbar~``, ``z^d`` by ``z^{i_* d}``,
    ``p_{n,i}`` by multiplication with ``p~_{n,i}``, ``q_{n,i}`` by
    ``n hbar~ g^{ij} d/dp~_{n,j}`` and ``beta_l`` by ``sum_j M_{jl} theta_j``.
    ``retained`` optionally restricts the theta variables kept (others set to 0).
    """
    return _act_generic(h, f, pair, retained, "act", caps)


def act_bar(h: Series, f: Series, pair: RelativePairDescriptor, retained=None, caps=None) -> Series:
    """Interface action ``h ._| f``: ``h``'s ``q`` consume every ``p~`` of ``f``."""
    return _act_generic(h, f, pair, retained, "bar", caps)


def fock_apply(h: Series, phi: Series, caps=None) -> Series:
    """Apply ``h`` to a ``q``-free state ``phi`` (``q`` annihilates the vacuum)."""
    for m in phi.terms:
        if any(v[0] == Kind.Q for v, _ in m.factors):
            raise ValueError("fock_apply expects a q-free state")
    res = star(h, phi, caps or phi.caps)
    return res.filter(lambda m: not any(v[0] == Kind.Q for v, _ in m.factors))


# -- commutators and balance ---------------------------------------------------------


def graded_commutator(a: Series, b: Series, caps=None) -> Series:
    """``[a, b] = a*b - (-1)^{|a||b|} b*a``, split over homogeneous components."""
    total = Series.zero(a.universe, _result_caps(a, b, caps))
    for da, pa in a.homogeneous_parts().items():
        for db, pb in b.homogeneous_parts().items():
            term = star(pa, pb, caps) - star(pb, pa, caps).scale((-1) ** (da * db))
            total = add(total, term)
    return total


def balance_defect(m: Monomial, universe: Universe) -> int:
    """``p_weight - q_weight - <c_1(L), d>`` for one monomial."""
    return m.p_weight() - m.q_weight() - universe.ring.c1_bundle_on(m.z)


def check_balance(s: Series) -> bool:
    return all(balance_defect(m, s.universe) == 0 for m in s.terms)
