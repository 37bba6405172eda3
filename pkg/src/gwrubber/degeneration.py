"""Reconstruction of relative potentials from rubber data.

For a relative pair ``(Z, D)`` the relative potential ``F`` obeys

    sum_l N_jl dF/dtheta_l = sum_l M_jl (dA/dbeta_l) . F

for every ambient basis element ``e_j``.  Writing a class ``e_j`` in the image
``V`` of ``cup [D]`` as ``sum_k a_k e_k cup [D]`` isolates ``dF/dtheta_j`` and gives
an ODE in ``theta_j`` whose right-hand side is the action of a rubber operator.
We solve it order by order in ``theta_j`` starting from ``F`` at ``theta_j = 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from . import _linalg as la
from .potentials import fourier_rubber_potential, gw_potential_p1, gw_potential_p2, point_rubber_potential, rubber_derivative_operator
from .rings import RelativePairDescriptor, relative_pair
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
    log_truncated,
    make_monomial,
    pt,
    theta,
)
from .weyl import act, star

__all__ = [
    "DegenerationSystem",
    "TangencyProfile",
    "combined_operator",
    "solve_theta_ode",
    "ch_system",
    "ch_operator",
    "ch_operator_direct",
    "point_p1_system",
    "fn_system",
    "pn_system",
    "solve_system",
    "extract_invariant",
    "ch_profile",
    "rubber_degeneration_residual",
    "invariant_rows",
    "operator_weights",
    "RelativeOperator",
]


# -- systems -------------------------------------------------------------------------


@dataclass(frozen=True)
class DegenerationSystem:
    """ODE data for one relative pair.

    ``rubber_ops[l]`` is ``dA_{lambda=0}/dbeta_l`` in the divisor's rubber
    universe, ``seed`` is ``F`` with every theta in ``order`` set to zero, and
    ``retained`` lists the theta variables kept in ``F`` (the others are zero).
    """

    pair: RelativePairDescriptor
    rubber_ops: dict
    seed: Series
    caps: TruncationCaps
    retained: frozenset
    order: tuple = ()
    name: str = ""

    @property
    def universe(self) -> Universe:
        return self.seed.universe


def _unit(n, j):
    return tuple(Fraction(int(k == j)) for k in range(n))


def operator_weights(pair: RelativePairDescriptor, j: int) -> dict:
    """Coefficients ``w_l`` with ``dF/dtheta_j = (sum_l w_l dA/dbeta_l) . F``."""
    n = len(pair.ambient)
    if not pair.v_basis_mask[j]:
        raise ValueError(f"basis element {pair.ambient.label(j)!r} is not in the image of cup [D]")
    rows = pair.divisor_cup_matrix
    a = la.solve_row_combination(rows, _unit(n, j))
    if a is None:
        raise ValueError(f"cannot express {pair.ambient.label(j)!r} as a cup product with [D]")
    M = pair.restriction_matrix
    w = {}
    for l in range(len(pair.divisor)):
        c = sum((a[k] * M[k][l] for k in range(n)), Fraction(0))
        if c:
            w[l] = c
    return w


def combined_operator(sys: DegenerationSystem, j: int) -> Series:
    w = operator_weights(sys.pair, j)
    ops = [sys.rubber_ops[l].scale(c) for l, c in w.items()]
    total = ops[0]
    for o in ops[1:]:
        total = add(total, o)
    return total


def _theta_degree(m: Monomial, j: int) -> int:
    for v, e in m.factors:
        if v[0] == Kind.THETA and v[2] == j:
            return e
    return 0


def _integrate(s: Series, j: int) -> Series:
    v = theta(j)
    out = {}
    for m, c in s.terms.items():
        e = _theta_degree(m, j)
        fs = [f for f in m.factors if f[0] != v] + [(v, e + 1)]
        out[make_monomial(m.z, fs)] = c / (e + 1)
    return Series(s.universe, out, s.caps)


def _relaxed(caps: TruncationCaps) -> TruncationCaps:
    return TruncationCaps(caps.max_z, None, None, caps.max_theta_order, caps.hbar_range, caps.max_lambda)


def _apply(op, F, sys, caps):
    res = act(op, F, sys.pair, sys.retained, _relaxed(caps))
    if caps.max_p_weight is not None:
        for m in res.terms:
            if m.p_weight() > caps.max_p_weight:
                raise CapsExceeded(
                    f"operator application produced p~-weight {m.p_weight()} beyond max_p_weight="
                    f"{caps.max_p_weight}; enlarge the window"
                )
    return res


def solve_theta_ode(sys: DegenerationSystem, j: int, start: Series | None = None, on_iteration=None) -> Series:
    """Solve ``dF/dtheta_j = Op . F`` from ``F|_{theta_j=0} = start`` (default: the seed).

    ``F = sum_k F_k`` with ``F_k`` homogeneous of degree ``k`` in ``theta_j``.
    Since ``Op`` may itself carry ``theta_j`` (through ``beta``), ``F_{k+1}`` is
    the integral of the degree-``k`` part of ``sum_{i<=k} Op . F_i``; for a
    ``theta_j``-free operator this is the divided-power recursion
    ``f_{k+1} = Op(f_k)``.
    """
    F0 = sys.seed if start is None else start
    if any(_theta_degree(m, j) for m in F0.terms):
        raise ValueError("initial data must not depend on the variable being solved for")
    caps = sys.caps
    op = combined_operator(sys, j)
    slices = [Series(F0.universe, F0.terms, caps)]
    acc = Series.zero(F0.universe, _relaxed(caps))
    k = 0
    limit = caps.max_theta_order
    while True:
        acc = add(acc, _apply(op, slices[k], sys, caps))
        part = acc.filter(lambda m: _theta_degree(m, j) == k)
        acc = acc.filter(lambda m: _theta_degree(m, j) > k)
        nxt = Series(F0.universe, _integrate(part, j).terms, caps)
        if on_iteration is not None:
            on_iteration(k + 1, nxt)
        slices.append(nxt)
        k += 1
        if not nxt and not acc:
            break
        if limit is not None and k >= limit:
            break
    total = slices[0]
    for s in slices[1:]:
        total = add(total, s)
    return total


def solve_system(sys: DegenerationSystem, on_iteration=None) -> Series:
    """Solve for every theta in ``sys.order`` in turn."""
    F = sys.seed
    for j in sys.order:
        F = solve_theta_ode(sys, j, F, on_iteration)
    return F


# -- builtin systems ----------------------------------------------------------------


def _rubber_ops(A: Series, n: int) -> dict:
    return {l: rubber_derivative_operator(A, l) for l in range(n)}


def _rubber_caps(max_z, theta_order):
    return TruncationCaps((max_z,), max_z, max_z, theta_order, None, 0)


def ch_system(max_degree: int, max_theta_order: int) -> DegenerationSystem:
    """Plane relative to a line; ``F`` in ``theta_{H^2}``, ``p~_{k,0}`` (free) and ``p~_{k,1}`` (fixed)."""
    pair = relative_pair("p2_line")
    A = fourier_rubber_potential(gw_potential_p1(), 1, _rubber_caps(max_degree, 1))
    u = Universe("relative", pair)
    caps = TruncationCaps((max_degree,), None, None, max_theta_order, None, 0)
    return DegenerationSystem(pair, _rubber_ops(A, 2), Series.one(u, caps), caps, frozenset({2}), (2,), "ch")


class RelativeOperator:
    """A rubber element viewed as an operator on relative potentials."""

    def __init__(self, h: Series, pair: RelativePairDescriptor, retained=None):
        self.h = h
        self.pair = pair
        self.retained = retained

    def __call__(self, F: Series) -> Series:
        return act(self.h, F, self.pair, self.retained)


def ch_operator(caps: TruncationCaps) -> RelativeOperator:
    """``A_2`` of ``(P^1, O(1))`` acting on relative potentials of the plane relative a line."""
    max_z = caps.max_z[0] if caps.max_z is not None else None
    if max_z is None:
        raise CapsExceeded("ch_operator needs max_z")
    A = fourier_rubber_potential(gw_potential_p1(), 1, _rubber_caps(max_z, 1))
    return RelativeOperator(rubber_derivative_operator(A, 1), relative_pair("p2_line"), frozenset({2}))


def _partitions_by_weight(max_weight):
    """Multisets of positive integers as count-tuples, with their total."""
    out = []

    def rec(k, remaining, acc):
        if k > max_weight:
            out.append((tuple(acc), max_weight - remaining))
            return
        for c in range(remaining // k + 1):
            rec(k + 1, remaining - c * k, acc + [c])

    rec(1, max_weight, [])
    return out


def ch_operator_direct(F: Series, shift: int = 1, zvec=(1,)) -> Series:
    """The displayed operator written out literally, without the rubber algebra.

    ``sum_k k p~_{k,0} d/dp~_{k,2} + hbar^{-1} [exp(sum_k p~_{k,2} e^{-ikx}
    + sum_k k hbar d/dp~_{k,0} e^{ikx} + i*shift*x)]_0 z`` applied to ``F``
    (divisor basis index 1 is the point class).
    """
    u = F.universe
    caps = F.caps
    W = max((m.p_weight() for m in F.terms), default=0) + (caps.max_z[0] if caps.max_z else 0) + abs(shift) + 1
    out: dict = {}

    def emit(m, c):
        if caps.admits(m):
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)

    # first summand
    for m, c in F.terms.items():
        for v, e in m.factors:
            if v[0] == Kind.PT and v[2] == 1:
                k = v[1]
                fs = [f for f in m.factors if f[0] != v] + ([(v, e - 1)] if e > 1 else []) + [(pt(k, 0), 1)]
                emit(make_monomial(m.z, fs), c * k * e)
    # Fourier summand: choose multiplied p~_{.,2} multiset P and derivative multiset Q
    parts = _partitions_by_weight(W)
    for m, c in F.terms.items():
        avail = {v[1]: e for v, e in m.factors if v[0] == Kind.PT and v[2] == 0}
        for Qc, qw in parts:
            if any(Qc[k - 1] > avail.get(k, 0) for k in range(1, len(Qc) + 1)):
                continue
            pw_needed = qw + shift
            for Pc, pw in parts:
                if pw != pw_needed:
                    continue
                coeff = Fraction(c)
                fs = list(m.factors)
                hpow = -1
                for k, cnt in enumerate(Qc, start=1):
                    if not cnt:
                        continue
                    e = avail[k]
                    # (k hbar d/dp)^cnt / cnt!
                    coeff *= Fraction(k**cnt * factorial(e), factorial(e - cnt) * factorial(cnt))
                    hpow += cnt
                    fs = [f for f in fs if f[0] != pt(k, 0)] + ([(pt(k, 0), e - cnt)] if e > cnt else [])
                for k, cnt in enumerate(Pc, start=1):
                    if cnt:
                        coeff /= factorial(cnt)
                        fs.append((pt(k, 1), cnt))
                fs.append((HBAR, hpow))
                z = tuple(a + b for a, b in zip(m.z, zvec))
                emit(make_monomial(z, fs), coeff)
    return Series(u, out, caps)


def point_p1_system(max_degree: int, max_theta_order: int) -> DegenerationSystem:
    """``P^1`` relative a point from the rubber potential of the point."""
    pair = relative_pair("p1_point")
    W = max(max_degree, 1)
    A = point_rubber_potential(TruncationCaps(None, W, W, 3, None, 0))
    u = Universe("relative", pair)
    caps = TruncationCaps((max_degree,), None, None, max_theta_order, None, 0)
    gen = Series(u, {make_monomial((1,), [(HBAR, -1), (pt(1, 0), 1)]): 1}, caps)
    seed = exp_truncated(gen)
    return DegenerationSystem(pair, _rubber_ops(A, 1), seed, caps, frozenset({0, 1}), (1,), "p1_point")


def fn_system(n: int, max_z=(2, 2), max_theta_order: int = 6) -> DegenerationSystem:
    """Hirzebruch surface ``F_n`` relative the section ``C_0``; lattice generators ``(C_0, f)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    pair = relative_pair(f"fn({n})")
    max_z = tuple(max_z)
    A = fourier_rubber_potential(gw_potential_p1(), -n, _rubber_caps(max_z[0], 1))
    u = Universe("relative", pair)
    caps = TruncationCaps(max_z, None, None, max_theta_order, None, 0)
    gen = Series(u, {make_monomial((0, 1), [(HBAR, -1), (pt(1, 1), 1)]): 1}, caps)
    seed = exp_truncated(gen)
    return DegenerationSystem(pair, _rubber_ops(A, 2), seed, caps, frozenset({3}), (3,), f"fn({n})")


def pn_system(n: int = 3, max_degree: int = 1, max_theta_order: int = 4) -> DegenerationSystem:
    """``P^3`` relative a plane from the rational potential of ``P^2``; solves ``theta_{H^2}`` then ``theta_{H^3}``."""
    if n != 3:
        raise ValueError("only n = 3 is supported")
    pair = relative_pair("p3_plane")
    A = fourier_rubber_potential(
        gw_potential_p2(max_degree), 1, TruncationCaps((max_degree,), max_degree, max_degree, max_theta_order + 1, None, 0)
    )
    u = Universe("relative", pair)
    caps = TruncationCaps((max_degree,), None, None, max_theta_order, None, 0)
    return DegenerationSystem(pair, _rubber_ops(A, 3), Series.one(u, caps), caps, frozenset({2, 3}), (2, 3), "p3_plane")


# -- invariant extraction --------------------------------------------------------------


@dataclass(frozen=True)
class TangencyProfile:
    """Contact data along the divisor.

    ``alpha[k-1]`` / ``beta[k-1]`` count contacts of order ``k`` at fixed /
    unspecified points (``p~_{k,fixed_class}`` and ``p~_{k,free_class}``).
    ``genus`` is the arithmetic genus, so the ``hbar`` exponent is ``genus - 1``.
    """

    degree: tuple
    genus: int
    alpha: tuple = ()
    beta: tuple = ()
    theta_index: int = 0
    fixed_class: int = 1
    free_class: int = 0

    def contact_factors(self):
        fs = []
        for k, a in enumerate(self.alpha, start=1):
            if a:
                fs.append((pt(k, self.fixed_class), a))
        for k, b in enumerate(self.beta, start=1):
            if b:
                fs.append((pt(k, self.free_class), b))
        return fs

    def interior_points(self, universe: Universe) -> int:
        """Number of ``theta`` insertions forced by degree-0 homogeneity."""
        base = make_monomial(self.degree, [(HBAR, self.genus - 1)] + self.contact_factors())
        g = universe.grade(base)
        dt = universe.degree(theta(self.theta_index))
        if dt == 0 or g % dt or -g // dt < 0:
            raise ValueError("profile is incompatible with degree-0 homogeneity")
        return -g // dt

    def monomial(self, universe: Universe) -> Monomial:
        k = self.interior_points(universe)
        fs = [(HBAR, self.genus - 1)] + self.contact_factors()
        if k:
            fs.append((theta(self.theta_index), k))
        return make_monomial(self.degree, fs)

    def normalization(self, universe: Universe) -> Fraction:
        """Factor turning the series coefficient into the enumerative count."""
        k = self.interior_points(universe)
        w = Fraction(factorial(k))
        for a in self.alpha:
            w *= factorial(a)
        return w


def ch_profile(d: int, delta: int, alpha=(), beta=()) -> TangencyProfile:
    """Profile for the plane relative a line in Caporaso-Harris notation."""
    genus = (d - 1) * (d - 2) // 2 - delta
    return TangencyProfile((d,), genus, tuple(alpha), tuple(beta), theta_index=2, fixed_class=1, free_class=0)


def extract_invariant(F: Series, profile: TangencyProfile, connected: bool, integral: bool = True) -> Fraction:
    """Read the count for ``profile`` off ``F`` (or off ``log F`` when ``connected``)."""
    u = F.universe
    m = profile.monomial(u)
    if not F.caps.admits(m):
        raise CapsExceeded(f"profile {profile} lies outside the window of F")
    S = log_truncated(F) if connected else F
    value = S.terms.get(m, Fraction(0)) * profile.normalization(u)
    if integral and value.denominator != 1:
        raise ArithmeticError(f"non-integral count {value} for {profile}")
    return value


# -- diagnostics ---------------------------------------------------------------------


def rubber_degeneration_residual(A0: Series, i: int) -> Series:
    """``dA0/dbeta_i * A0 - sum_j N_ij dA0/dbeta_j`` (the ``lambda^0`` part, without the ``d/dlambda`` term)."""
    dA = derive(A0, beta(i))
    res = star(dA, A0)
    N = A0.universe.ring.bundle_matrix
    for j, c in enumerate(N[i]):
        if c:
            res = res - derive(A0, beta(j)).scale(c)
    return res


def invariant_rows(F: Series, connected: bool = False, free_class: int = 0) -> list[dict]:
    """Every nonconstant coefficient of ``F`` (or ``log F``) as a normalized count.

    The count multiplies the coefficient by the factorials of the theta
    exponents and of the exponents of contact variables at fixed classes
    (every divisor class except ``free_class``); this is the convention of
    :meth:`TangencyProfile.normalization`.
    """
    S = log_truncated(F) if connected else F
    rows = []
    for m, c in S.items():
        if not m.factors and not any(m.z):
            continue
        thetas = {}
        contacts = {}
        h = 0
        w = Fraction(1)
        for v, e in m.factors:
            if v[0] == Kind.HBAR:
                h = e
            elif v[0] == Kind.THETA:
                thetas[v[2]] = e
                w *= factorial(e)
            elif v[0] == Kind.PT:
                contacts[(v[1], v[2])] = e
                if v[2] != free_class:
                    w *= factorial(e)
        rows.append(
            {
                "degree": list(m.z),
                "genus": h + 1,
                "theta": {str(k): e for k, e in sorted(thetas.items())},
                "contacts": [[k, cls, e] for (k, cls), e in sorted(contacts.items())],
                "coefficient": c,
                "count": c * w,
            }
        )
    return rows
