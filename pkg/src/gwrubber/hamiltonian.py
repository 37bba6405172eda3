"""SFT-style Hamiltonian built from the rational rubber potential.

``H = sum_i sigma_i (d_{a_i} A)|_{beta = sum_j tau_j b_j}`` where ``a_i`` runs
over a phase-fixing basis (spanning ``ker(cup c_1(L))``) and ``b_j`` over
representatives of ``coker(cup c_1(L))``.  Each ``sigma_i`` has odd degree
``-1 - deg a_i``, so ``H`` is odd, linear in ``sigma`` and of degree ``-1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from . import _linalg as la
from .rings import RingDescriptor
from .series import (
    HBAR,
    Kind,
    Monomial,
    Series,
    TruncationCaps,
    Universe,
    Var,
    add,
    beta,
    derive,
    make_monomial,
    mul,
    sigma,
    tau,
)
from .weyl import _assemble, _contractions, _split, star

__all__ = ["PhaseBasisSplit", "phase_basis_split", "build_hamiltonian", "dh", "check_nilpotent", "NilpotencyReport"]


@dataclass(frozen=True)
class PhaseBasisSplit:
    ring: RingDescriptor
    phase_fixing: tuple
    non_phase_fixing: tuple

    def __post_init__(self):
        N = self.ring.bundle_matrix
        n = len(self.ring)
        for a in self.phase_fixing:
            img = [sum((a[i] * N[i][j] for i in range(n)), Fraction(0)) for j in range(n)]
            if any(img):
                raise ValueError("phase-fixing class is not killed by cup c_1(L)")
        if la.rank(tuple(self.phase_fixing)) != len(self.phase_fixing):
            raise ValueError("phase-fixing classes are linearly dependent")
        kernel_dim = n - la.rank(N)
        if len(self.phase_fixing) != kernel_dim:
            raise ValueError("phase-fixing classes do not span the kernel")
        image = [row for row in N if any(row)]
        r_img = la.rank(tuple(image)) if image else 0
        full = tuple(image) + tuple(self.non_phase_fixing)
        if la.rank(full) != r_img + len(self.non_phase_fixing) or r_img + len(self.non_phase_fixing) != n:
            raise ValueError("non-phase-fixing classes do not descend to a basis of the cokernel")

    def degree_of(self, vec) -> int:
        degs = {self.ring.degree(i) for i, c in enumerate(vec) if c}
        if len(degs) != 1:
            raise ValueError("split classes must be homogeneous")
        return degs.pop()

    def universe(self) -> Universe:
        return Universe(
            "hamiltonian",
            self.ring,
            tuple(-1 - self.degree_of(a) for a in self.phase_fixing),
            tuple(2 - self.degree_of(b) for b in self.non_phase_fixing),
        )


def _unit(n, i):
    return tuple(Fraction(int(k == i)) for k in range(n))


def phase_basis_split(ring: RingDescriptor) -> PhaseBasisSplit:
    """Choose basis-element representatives for kernel and cokernel of ``cup c_1(L)``."""
    n = len(ring)
    N = ring.bundle_matrix
    phase = []
    for i in range(n):
        if not any(N[i]):
            phase.append(_unit(n, i))
    if len(phase) != n - la.rank(N):
        raise ValueError("kernel of cup c_1(L) is not spanned by basis elements")
    image = [row for row in N if any(row)]
    chosen = []
    current = list(image)
    r = la.rank(tuple(current)) if current else 0
    for i in range(n):
        cand = current + [_unit(n, i)]
        if la.rank(tuple(cand)) > r:
            current = cand
            r += 1
            chosen.append(_unit(n, i))
    return PhaseBasisSplit(ring, tuple(phase), tuple(chosen))


def _substitute_betas(A: Series, split: PhaseBasisSplit, target: Universe, caps) -> Series:
    """Replace ``beta_l`` by ``sum_j tau_j (b_j)_l``; other variables carry over."""
    images = {}
    for l in range(len(split.ring)):
        images[l] = {j: b[l] for j, b in enumerate(split.non_phase_fixing) if b[l]}
    out: dict = {}
    for m, c in A.terms.items():
        rest = [(v, e) for v, e in m.factors if v[0] != Kind.BETA]
        expansions = [([], Fraction(c))]
        for v, e in m.factors:
            if v[0] != Kind.BETA:
                continue
            img = images[v[2]]
            new = []
            for fac, cc in expansions:
                for combo in itertools.combinations_with_replacement(sorted(img), e):
                    counts: dict = {}
                    for j in combo:
                        counts[j] = counts.get(j, 0) + 1
                    w = Fraction(factorial(e))
                    for j, k in counts.items():
                        w = w / factorial(k) * img[j] ** k
                    new.append((fac + [(tau(j), k) for j, k in counts.items()], cc * w))
            expansions = new
        for fac, cc in expansions:
            if target.has_odd and any(k > 1 and target.parity(v) for v, k in fac):
                continue
            mm = make_monomial(m.z, rest + fac)
            out[mm] = out.get(mm, 0) + cc
    return Series(target, {m: c for m, c in out.items() if c}, caps)


def build_hamiltonian(A: Series, split: PhaseBasisSplit | None = None, caps: TruncationCaps | None = None) -> Series:
    """Hamiltonian from the ``lambda = 0`` genus-0 connected rubber potential ``A``.

    ``H`` is kept in connected (not exponentiated) form: it is linear in the odd
    ``sigma`` variables and homogeneous of degree ``-1``.
    """
    split = split or phase_basis_split(A.universe.ring)
    if split.ring.basis != A.universe.ring.basis or split.ring.bundle_matrix != A.universe.ring.bundle_matrix:
        raise ValueError("basis split belongs to a different ring")
    caps = caps or A.caps
    target = split.universe()
    H = Series.zero(target, caps)
    for i, a in enumerate(split.phase_fixing):
        dA = Series.zero(A.universe, A.caps)
        for l, c in enumerate(a):
            if c:
                dA = add(dA, derive(A, beta(l)).scale(c))
        body = _substitute_betas(dA, split, target, caps)
        s = Series.monomial(target, [sigma(i)], 1, caps)
        H = add(H, mul(s, body))
    return H


def dh(H: Series, f: Series, caps=None) -> Series:
    """``D^H f = H*f - (-1)^{deg f} f*H`` for homogeneous ``f``."""
    degs = f.grades()
    if len(degs) > 1:
        raise ValueError("dh needs a homogeneous argument; decompose it first")
    d = degs.pop() if degs else 0
    return star(H, f, caps) - star(f, H, caps).scale((-1) ** d)


@dataclass
class NilpotencyReport:
    """Outcome of checking ``H*H`` on a window.

    ``verified`` holds determinable coefficients that vanish, ``violations``
    determinable nonzero coefficients and ``indeterminate`` coefficients that
    depend on data beyond the genus-0 input or the computed window.
    """

    verified: int = 0
    violations: dict = field(default_factory=dict)
    indeterminate: dict = field(default_factory=dict)
    checked_monomials: list = field(default_factory=list)
    identically_zero: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        text = (
            f"determinable coefficients: {self.verified + len(self.violations)}, "
            f"nonzero: {len(self.violations)}, indeterminate: {len(self.indeterminate)}"
        )
        if self.identically_zero:
            text += "; H*H has no terms in the window"
        return text


def _determinable(m: Monomial, Hcaps: TruncationCaps, mbundle: int) -> bool:
    if m.hbar_exponent != -1:
        return False
    shift = abs(mbundle) * sum(m.z)
    pw, qw = m.p_weight(), m.q_weight()
    if Hcaps.max_z is not None and any(a > b for a, b in zip(m.z, Hcaps.max_z)):
        return False
    if Hcaps.max_p_weight is not None and max(pw, qw + shift) > Hcaps.max_p_weight:
        return False
    if Hcaps.max_q_weight is not None and max(qw, pw + shift) > Hcaps.max_q_weight:
        return False
    return True


def check_nilpotent(H: Series, window: TruncationCaps | None = None) -> NilpotencyReport:
    """Compute ``H*H`` and classify every coefficient in ``window``.

    With genus-0 input, the zero-contraction part cancels identically and the
    one-contraction (``hbar^{-1}``) sector only involves genus-0 terms, so
    those coefficients are determinable when every contributing term of ``H``
    lies in its window.  Higher ``hbar`` powers are reported as indeterminate.
    The report also lists the monomials ``m`` that were checked.
    """
    window = window or H.caps
    sq = star(H, H, window)
    mb = H.universe.ring.c1_bundle[0] if H.universe.ring.c1_bundle else 0
    rep = NilpotencyReport(identically_zero=not sq.terms)
    for m, c in sq.items():
        if _determinable(m, H.caps, mb):
            rep.violations[m] = c
        else:
            rep.indeterminate[m] = c
    # zero coefficients are not stored, so enumerate the determinable monomials
    # that one-contraction products of H terms can reach
    rep.checked_monomials = sorted(_reachable_determinable(H, window, mb))
    rep.verified = len([m for m in rep.checked_monomials if m not in rep.violations])
    return rep


def _reachable_determinable(H: Series, window, mb):
    """Determinable monomials that pairs of ``H`` terms can produce with one contraction."""
    u = H.universe
    ginv = u.ring.pairing_inverse
    out = set()
    items = list(H.terms)
    for ma in items:
        Ca, Pa, Qa = _split(ma)
        for mb_ in items:
            Cb, Pb, Qb = _split(mb_)
            if not (Qa and Pb):
                continue
            for count, w, qrem, prem in _contractions(Qa, Pb, ginv, "star"):
                if count != 1:
                    continue
                r = _assemble(u, ma.z, mb_.z, (Ca, Cb, Pa, prem, qrem, Qb), count)
                if r is None:
                    continue
                m = r[1]
                if window.admits(m) and _determinable(m, H.caps, mb):
                    out.add(m)
    return out
