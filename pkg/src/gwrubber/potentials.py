"""Concrete generating functions: absolute genus-0 potentials and rubber potentials.

Absolute potentials are kept in a structured form (classical cubic part plus
``poly_d(t) * exp(<d, t_div>) * z^d`` couplings) so that exponentials can be
expanded lazily against whatever window a later computation needs.

Rational rubber potentials of ``(P^r, O(m))`` come from the Fourier formula:
substitute ``t_j -> beta_j + P_j + Q_j`` with ``P_j = sum_k p_{k,j} e^{-ikx}``,
``Q_j = sum_k q_{k,j} e^{ikx}`` and ``z -> z e^{imx}``, keep the ``x``-mode-zero
part and tag it with ``hbar^{-1}``.  The mode of a monomial is
``-p_weight + q_weight + m*d`` so no trigonometric bookkeeping is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from . import oracles
from .rings import RingDescriptor, builtin_ring, line_bundle_over, projective_space
from .series import (
    HBAR,
    CapsExceeded,
    Kind,
    Monomial,
    Series,
    TruncationCaps,
    Universe,
    Var,
    add,
    beta,
    derive,
    exp_truncated,
    make_monomial,
    mul,
    p,
    q,
    theta,
)

__all__ = [
    "GWPotential",
    "gw_potential_point",
    "gw_potential_p1",
    "gw_potential_p2",
    "point_rubber_potential",
    "cut_and_join",
    "fourier_mode",
    "fourier_rubber_potential",
    "rubber_potential",
    "rubber_derivative_operator",
]


@dataclass(frozen=True)
class GWPotential:
    """Genus-0 connected absolute potential of a ring.

    ``f = classical + sum_d couplings[d](t) * exp(sum_k d_k t_{divisor_vars[k]}) * z^d``
    where ``classical`` and each coupling are polynomials in ``t = theta``.
    """

    ring: RingDescriptor
    classical: Series
    couplings: tuple = ()
    divisor_vars: tuple = ()
    universe: Universe = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "universe", self.classical.universe)

    def series(self, caps: TruncationCaps) -> Series:
        """Expand into a plain series in the ``gw`` universe within ``caps``."""
        u = self.universe
        total = Series(u, self.classical.terms, caps)
        for d, poly in self.couplings:
            lin = self._divisor_line(u, d, caps)
            e = exp_truncated(lin) if lin else Series.one(u, caps)
            zmon = Series(u, {Monomial(tuple(d), ()): 1}, caps)
            total = add(total, mul(mul(Series(u, poly.terms, caps), e), zmon))
        return total

    def _divisor_line(self, u, d, caps):
        terms = {}
        for k, dk in enumerate(d):
            if dk:
                terms[make_monomial(u.zero_z(), [(theta(self.divisor_vars[k]), 1)])] = dk
        return Series(u, terms, caps)

    def derivative(self, i: int) -> "GWPotential":
        """``df/dt_i`` in the same structured form."""
        u = self.universe
        cl = derive(self.classical, theta(i))
        coup = []
        for d, poly in self.couplings:
            new = derive(poly, theta(i))
            for k, dk in enumerate(d):
                if dk and self.divisor_vars[k] == i:
                    new = add(new, poly.scale(dk))
            if new:
                coup.append((d, new))
        return GWPotential(self.ring, cl, tuple(coup), self.divisor_vars)


def _poly(u, terms):
    return Series(u, {make_monomial(u.zero_z(), [(theta(i), e) for i, e in fac]): c for fac, c in terms})


def gw_potential_point() -> GWPotential:
    """``f = t_0^3 / 6``."""
    ring = builtin_ring("point")
    u = Universe("gw", ring)
    return GWPotential(ring, _poly(u, [(((0, 3),), Fraction(1, 6))]))


def gw_potential_p1() -> GWPotential:
    """``f = t_0^2 t_2 / 2 + e^{t_2} z`` (``t_0, t_2`` are indices 0 and 1)."""
    ring = builtin_ring("p1")
    u = Universe("gw", ring)
    classical = _poly(u, [(((0, 2), (1, 1)), Fraction(1, 2))])
    return GWPotential(ring, classical, (((1,), _poly(u, [((), 1)])),), (1,))


def gw_potential_p2(max_degree: int) -> GWPotential:
    """``f = t0^2 t4/2 + t0 t2^2/2 + sum_d N_d t4^{3d-1}/(3d-1)! e^{d t2} z^d``."""
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    ring = projective_space(2)
    u = Universe("gw", ring)
    classical = _poly(u, [(((0, 2), (2, 1)), Fraction(1, 2)), (((0, 1), (1, 2)), Fraction(1, 2))])
    N = oracles.kontsevich_recursion(max_degree)
    coup = tuple(
        ((d,), _poly(u, [(((2, 3 * d - 1),), N[d - 1] / factorial(3 * d - 1))])) for d in range(1, max_degree + 1)
    )
    return GWPotential(ring, classical, coup, (1,))


def gw_potential(name: str, max_degree: int = 4) -> GWPotential:
    if name == "point":
        return gw_potential_point()
    if name == "p1":
        return gw_potential_p1()
    if name == "p2":
        return gw_potential_p2(max_degree)
    raise ValueError(f"no absolute potential for {name!r}")


# -- point rubber potential --------------------------------------------------------------


def cut_and_join(universe: Universe, max_weight: int, index: int = 0) -> Series:
    """``(1/2) sum_{k,l} (p_{k+l} q_k q_l + p_k p_l q_{k+l})`` (no ``hbar``) up to ``max_weight``."""
    terms: dict = {}
    z0 = universe.zero_z()
    for k in range(1, max_weight):
        for l in range(1, max_weight - k + 1):
            a = make_monomial(z0, [(p(k + l, index), 1), (q(k, index), 1), (q(l, index), 1)])
            b = make_monomial(z0, [(p(k, index), 1), (p(l, index), 1), (q(k + l, index), 1)])
            for m in (a, b):
                terms[m] = terms.get(m, 0) + Fraction(1, 2)
    return Series(universe, terms)


def point_rubber_potential(caps: TruncationCaps) -> Series:
    """``lambda = 0`` rubber potential of the point.

    ``hbar^{-1}(beta^3/6 + beta sum_k p_k q_k + cut-and-join) - beta/24``.  The
    ``beta p_k q_k`` term is what the Fourier formula gives for ``t^3/6`` and is
    needed for the divisor-type equation of the relative potential of ``P^1``.
    """
    ring = builtin_ring("point")
    u = Universe("rubber", ring)
    W = max(x for x in (caps.max_p_weight, caps.max_q_weight, 1) if x is not None)
    if caps.max_p_weight is None and caps.max_q_weight is None:
        raise CapsExceeded("point_rubber_potential needs a finite p- or q-weight cap")
    hb = Series.monomial(u, [(HBAR, -1)], 1)
    b = Series.var(u, beta(0))
    body = Series.monomial(u, [(beta(0), 3)], Fraction(1, 6))
    for k in range(1, W + 1):
        body = body + Series.monomial(u, [beta(0), p(k, 0), q(k, 0)])
    body = body + cut_and_join(u, W)
    out = mul(hb, body) - b.scale(Fraction(1, 24))
    return Series(u, out.terms, caps)


# -- Fourier construction ---------------------------------------------------------------


def fourier_mode(m: Monomial, universe: Universe) -> int:
    """Net ``e^{ikx}`` exponent ``-p_weight + q_weight + <c_1(L), d>``."""
    return -m.p_weight() + m.q_weight() + universe.ring.c1_bundle_on(m.z)


def _substitution(u: Universe, j: int, caps: TruncationCaps, pmax: int, qmax: int) -> Series:
    terms = {make_monomial(u.zero_z(), [(beta(j), 1)]): Fraction(1)}
    for k in range(1, pmax + 1):
        terms[make_monomial(u.zero_z(), [(p(k, j), 1)])] = Fraction(1)
    for k in range(1, qmax + 1):
        terms[make_monomial(u.zero_z(), [(q(k, j), 1)])] = Fraction(1)
    return Series(u, terms, caps)


def _work_caps(caps: TruncationCaps, m: int, ring: RingDescriptor):
    if caps.max_p_weight is None and caps.max_q_weight is None:
        raise CapsExceeded("Fourier expansion needs a finite p- or q-weight cap")
    if caps.max_theta_order is None:
        raise CapsExceeded("Fourier expansion needs a finite beta-order cap (max_theta_order)")
    if caps.max_z is None:
        raise CapsExceeded("Fourier expansion needs a finite max_z")
    shift = abs(m) * sum(caps.max_z)
    pmax = caps.max_p_weight if caps.max_p_weight is not None else caps.max_q_weight + shift
    qmax = caps.max_q_weight if caps.max_q_weight is not None else caps.max_p_weight + shift
    pmax = min(pmax, qmax + shift)
    qmax = min(qmax, pmax + shift)
    return TruncationCaps(caps.max_z, pmax, qmax, caps.max_theta_order, None, 0), pmax, qmax


def _substitute_poly(poly: Series, subs: dict, u: Universe, caps: TruncationCaps, cache: dict) -> Series:
    total = Series.zero(u, caps)
    for mon, c in poly.items():
        term = Series.one(u, caps).scale(c)
        for v, e in mon.factors:
            key = (v[2], e)
            if key not in cache:
                base = subs[v[2]]
                pw = Series.one(u, caps)
                for _ in range(e):
                    pw = mul(pw, base)
                cache[key] = pw
            term = mul(term, cache[key])
            if not term:
                break
        total = add(total, term)
    return total


def fourier_rubber_potential(f: GWPotential, m: int, caps: TruncationCaps) -> Series:
    """Rational rubber potential of ``(X, O(m))`` from the absolute potential ``f`` of ``X``."""
    ring = line_bundle_over(f.ring, m)
    u = Universe("rubber", ring)
    work, pmax, qmax = _work_caps(caps, m, ring)
    subs = {j: _substitution(u, j, work, pmax, qmax) for j in range(len(ring))}
    cache: dict = {}
    total = _substitute_poly(Series(u, f.classical.terms), subs, u, work, cache)
    for d, poly in f.couplings:
        if any(a > b for a, b in zip(d, work.max_z)):
            continue
        lin = Series.zero(u, work)
        for k, dk in enumerate(d):
            if dk:
                lin = add(lin, subs[f.divisor_vars[k]].scale(dk))
        e = exp_truncated(lin)
        body = mul(_substitute_poly(Series(u, poly.terms), subs, u, work, cache), e)
        zmon = Series(u, {Monomial(tuple(d), ()): 1}, work)
        total = add(total, mul(body, zmon))
    kept = {}
    hb = ((HBAR, -1),)
    for mon, c in total.terms.items():
        if fourier_mode(mon, u):
            continue
        m2 = Monomial(mon.z, hb + mon.factors)
        if caps.admits(m2):
            kept[m2] = c
    return Series(u, kept, caps)


def rubber_potential(target: str, m: int, caps: TruncationCaps, max_degree: int = 4) -> Series:
    """Rubber potential of ``(target, O(m))``; ``target`` in ``point``, ``p1``, ``p2``."""
    if target == "point":
        return point_rubber_potential(caps)
    return fourier_rubber_potential(gw_potential(target, max_degree), m, caps)


def rubber_derivative_operator(A: Series, i: int, restrict: bool = False) -> Series:
    """``dA/dbeta_i``; with ``restrict`` every ``beta`` is set to zero afterwards."""
    d = derive(A, beta(i))
    if restrict:
        d = d.substitute_zero(lambda v: v[0] == Kind.BETA)
    return d
