"""Sparse exact multigraded series over the rubber/relative variable universe.

A :class:`Monomial` is ``(z, factors)`` where ``z`` is the curve-class exponent
vector and ``factors`` is a sorted tuple of ``(Var, exponent)`` pairs.  Variables
sort by ``(kind, n, i)``; since ``P`` precedes ``Q`` this canonical order is
also the Weyl normal order (all ``p`` before all ``q``).

A :class:`Series` maps monomials to :class:`fractions.Fraction` and carries
:class:`TruncationCaps`.  The product defined here is the plain
supercommutative one; the Weyl product lives in :mod:`gwrubber.weyl`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, NamedTuple

from .rings import RelativePairDescriptor, RingDescriptor

__all__ = [
    "Kind",
    "Var",
    "Monomial",
    "Universe",
    "TruncationCaps",
    "Series",
    "CapsExceeded",
    "hbar",
    "lam",
    "theta",
    "beta",
    "sigma",
    "tau",
    "p",
    "q",
    "pt",
    "qt",
    "add",
    "mul",
    "grade",
    "is_homogeneous",
    "derive",
    "truncate",
    "exp_truncated",
    "log_truncated",
]


class Kind(IntEnum):
    HBAR = 0
    LAMBDA = 1
    THETA = 2
    BETA = 3
    SIGMA = 4
    TAU = 5
    P = 6
    Q = 7
    PT = 8
    QT = 9


class Var(NamedTuple):
    kind: int
    n: int = 0
    i: int = 0

    def __repr__(self):
        k = Kind(self.kind)
        if k in (Kind.HBAR, Kind.LAMBDA):
            return k.name.lower()
        if k in (Kind.P, Kind.Q, Kind.PT, Kind.QT):
            return f"{k.name.lower()}[{self.n},{self.i}]"
        return f"{k.name.lower()}[{self.i}]"


HBAR = Var(Kind.HBAR)
LAMBDA = Var(Kind.LAMBDA)

_THETA_LIKE = (Kind.THETA, Kind.BETA, Kind.SIGMA, Kind.TAU)
_P_LIKE = (Kind.P, Kind.PT)
_Q_LIKE = (Kind.Q, Kind.QT)


def hbar() -> Var:
    return HBAR


def lam() -> Var:
    return LAMBDA


def theta(i: int) -> Var:
    return Var(Kind.THETA, 0, i)


def beta(i: int) -> Var:
    return Var(Kind.BETA, 0, i)


def sigma(i: int) -> Var:
    return Var(Kind.SIGMA, 0, i)


def tau(i: int) -> Var:
    return Var(Kind.TAU, 0, i)


def p(n: int, i: int) -> Var:
    return Var(Kind.P, n, i)


def q(n: int, i: int) -> Var:
    return Var(Kind.Q, n, i)


def pt(n: int, i: int) -> Var:
    return Var(Kind.PT, n, i)


def qt(n: int, i: int) -> Var:
    return Var(Kind.QT, n, i)


class Monomial(NamedTuple):
    z: tuple
    factors: tuple

    def exponent(self, v: Var) -> int:
        for w, e in self.factors:
            if w == v:
                return e
        return 0

    @property
    def hbar_exponent(self) -> int:
        f = self.factors
        if f and f[0][0][0] == Kind.HBAR:
            return f[0][1]
        return 0

    def p_weight(self) -> int:
        return sum(v[1] * e for v, e in self.factors if v[0] in _P_LIKE)

    def q_weight(self) -> int:
        return sum(v[1] * e for v, e in self.factors if v[0] in _Q_LIKE)

    def theta_order(self) -> int:
        return sum(e for v, e in self.factors if v[0] in _THETA_LIKE)

    def lambda_exponent(self) -> int:
        return sum(e for v, e in self.factors if v[0] == Kind.LAMBDA)

    def has_kind(self, *kinds) -> bool:
        return any(v[0] in kinds for v, _ in self.factors)

    def __repr__(self):
        parts = []
        if any(self.z):
            parts.append("z^" + ",".join(map(str, self.z)))
        for v, e in self.factors:
            parts.append(repr(v) if e == 1 else f"{v!r}^{e}")
        return "*".join(parts) or "1"


def make_monomial(z=(), factors: Iterable = ()) -> Monomial:
    """Build a canonical monomial from an unsorted exponent record."""
    acc: dict = {}
    for v, e in factors:
        v = Var(*v)
        acc[v] = acc.get(v, 0) + e
    return Monomial(tuple(z), tuple(sorted((v, e) for v, e in acc.items() if e)))


# -- truncation caps -----------------------------------------------------------


@dataclass(frozen=True)
class TruncationCaps:
    """Window within which arithmetic is exact; ``None`` means no bound on that grading."""

    max_z: tuple | None = None
    max_p_weight: int | None = None
    max_q_weight: int | None = None
    max_theta_order: int | None = None
    hbar_range: tuple | None = None
    max_lambda: int | None = 0

    def __post_init__(self):
        if self.max_z is not None:
            object.__setattr__(self, "max_z", tuple(int(x) for x in self.max_z))
        if self.hbar_range is not None:
            lo, hi = self.hbar_range
            if lo is not None and hi is not None and lo > hi:
                raise ValueError("empty hbar range")
            object.__setattr__(self, "hbar_range", (lo, hi))
        for name in ("max_p_weight", "max_q_weight", "max_theta_order", "max_lambda"):
            val = getattr(self, name)
            if val is not None and val < 0:
                raise ValueError(f"{name} must be nonnegative")

    def admits(self, m: Monomial) -> bool:
        if self.max_z is not None:
            for a, b in zip(m.z, self.max_z):
                if a > b:
                    return False
        pw = qw = th = la = 0
        h = 0
        for v, e in m.factors:
            k = v[0]
            if k == Kind.HBAR:
                h = e
            elif k == Kind.LAMBDA:
                la = e
            elif k == Kind.P or k == Kind.PT:
                pw += v[1] * e
            elif k == Kind.Q or k == Kind.QT:
                qw += v[1] * e
            else:
                th += e
        if self.max_p_weight is not None and pw > self.max_p_weight:
            return False
        if self.max_q_weight is not None and qw > self.max_q_weight:
            return False
        if self.max_theta_order is not None and th > self.max_theta_order:
            return False
        if self.max_lambda is not None and la > self.max_lambda:
            return False
        if self.hbar_range is not None:
            lo, hi = self.hbar_range
            if (lo is not None and h < lo) or (hi is not None and h > hi):
                return False
        return True

    def intersect(self, other: "TruncationCaps") -> "TruncationCaps":
        def lo(a, b):
            if a is None:
                return b
            if b is None:
                return a
            return min(a, b)

        if self.max_z is None:
            mz = other.max_z
        elif other.max_z is None:
            mz = self.max_z
        else:
            mz = tuple(min(a, b) for a, b in zip(self.max_z, other.max_z))
        if self.hbar_range is None:
            hr = other.hbar_range
        elif other.hbar_range is None:
            hr = self.hbar_range
        else:
            a, b = self.hbar_range, other.hbar_range
            first = a[0] if b[0] is None else b[0] if a[0] is None else max(a[0], b[0])
            hr = (first, lo(a[1], b[1]))
        return TruncationCaps(
            mz,
            lo(self.max_p_weight, other.max_p_weight),
            lo(self.max_q_weight, other.max_q_weight),
            lo(self.max_theta_order, other.max_theta_order),
            hr,
            lo(self.max_lambda, other.max_lambda),
        )

    def finite_weights(self, m: Monomial) -> tuple[int, ...]:
        """Weights of ``m`` in every grading that this window bounds."""
        out = []
        if self.max_z is not None:
            out.append(sum(m.z))
        if self.max_p_weight is not None:
            out.append(m.p_weight())
        if self.max_q_weight is not None:
            out.append(m.q_weight())
        if self.max_theta_order is not None:
            out.append(m.theta_order())
        if self.max_lambda is not None:
            out.append(m.lambda_exponent())
        return tuple(out)

    def to_dict(self) -> dict:
        return {
            "max_z": list(self.max_z) if self.max_z is not None else None,
            "max_p_weight": self.max_p_weight,
            "max_q_weight": self.max_q_weight,
            "max_theta_order": self.max_theta_order,
            "hbar_range": list(self.hbar_range) if self.hbar_range is not None else None,
            "max_lambda": self.max_lambda,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TruncationCaps":
        return cls(
            tuple(d["max_z"]) if d.get("max_z") is not None else None,
            d.get("max_p_weight"),
            d.get("max_q_weight"),
            d.get("max_theta_order"),
            tuple(d["hbar_range"]) if d.get("hbar_range") is not None else None,
            d.get("max_lambda", 0),
        )


UNBOUNDED = TruncationCaps()


class CapsExceeded(ArithmeticError):
    """An operation needed monomials outside the window it was asked to be exact in."""


# -- universe ------------------------------------------------------------------


@dataclass(frozen=True)
class Universe:
    """Variable universe: which kinds exist and what degree each variable has.

    ``kind`` is one of ``rubber`` (``hbar, lambda, z, beta, p, q`` over a
    :class:`RingDescriptor` with its line bundle), ``relative`` (``hbar, z,
    theta`` over the ambient ring and ``p~`` over the divisor),
    ``hamiltonian`` (``sigma, tau`` for a phase basis split plus ``p, q``) and
    ``gw`` (absolute potential in ``t = theta`` variables and ``z``).
    """

    kind: str
    context: object
    sigma_degrees: tuple = ()
    tau_degrees: tuple = ()
    _deg_cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("rubber", "relative", "hamiltonian", "gw"):
            raise ValueError(f"unknown universe kind {self.kind!r}")
        if self.kind == "relative" and not isinstance(self.context, RelativePairDescriptor):
            raise TypeError("relative universe needs a RelativePairDescriptor")
        if self.kind != "relative" and not isinstance(self.context, RingDescriptor):
            raise TypeError(f"{self.kind} universe needs a RingDescriptor")

    @property
    def ring(self) -> RingDescriptor:
        """Ring carrying the ``p/q/beta`` (or ``p~``) indices."""
        return self.context.divisor if self.kind == "relative" else self.context

    @property
    def lattice_rank(self) -> int:
        if self.kind == "relative":
            return self.context.ambient.curve_lattice_rank
        return self.context.curve_lattice_rank

    @property
    def has_odd(self) -> bool:
        return any(d % 2 for d in self.sigma_degrees) or any(d % 2 for d in self.tau_degrees)

    def hbar_degree(self) -> int:
        if self.kind == "relative":
            return -2 * (self.context.ambient.dim - 3)
        return -2 * (self.context.dim - 2)

    def z_degree(self, z) -> int:
        if not z:
            return 0
        if self.kind == "relative":
            return 2 * self.context.ambient.c1_tangent_on(z)
        if self.kind == "gw":
            return 2 * self.context.c1_tangent_on(z)
        r = self.context
        return 2 * (r.c1_tangent_on(z) + r.c1_bundle_on(z))

    def degree(self, v: Var) -> int:
        try:
            return self._deg_cache[v]
        except KeyError:
            pass
        k, n, i = v
        if k == Kind.HBAR:
            d = self.hbar_degree()
        elif k == Kind.LAMBDA:
            d = -2
        elif k == Kind.THETA:
            ring = self.context.ambient if self.kind == "relative" else self.context
            d = 2 - ring.degree(i)
        elif k == Kind.BETA:
            d = 2 - self.ring.degree(i)
        elif k == Kind.SIGMA:
            d = self.sigma_degrees[i]
        elif k == Kind.TAU:
            d = self.tau_degrees[i]
        elif k in (Kind.P, Kind.PT):
            d = 2 - self.ring.degree(i) - 2 * n
        else:
            d = 2 - self.ring.degree(i) + 2 * n
        self._deg_cache[v] = d
        return d

    def parity(self, v: Var) -> int:
        return self.degree(v) % 2

    def grade(self, m: Monomial) -> int:
        return self.z_degree(m.z) + sum(self.degree(v) * e for v, e in m.factors)

    def zero_z(self) -> tuple:
        return (0,) * self.lattice_rank

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "context": self.context.to_dict(),
            "sigma_degrees": list(self.sigma_degrees),
            "tau_degrees": list(self.tau_degrees),
        }

    @classmethod
    def from_description(cls, d: dict) -> "Universe":
        kind = d["kind"]
        ctx_cls = RelativePairDescriptor if kind == "relative" else RingDescriptor
        return cls(kind, ctx_cls.from_dict(d["context"]), tuple(d.get("sigma_degrees", ())), tuple(d.get("tau_degrees", ())))


# -- monomial multiplication ------------------------------------------------------


def _merge(a: Monomial, b: Monomial, universe: Universe):
    """Return ``(sign, monomial)`` for the supercommutative product, or ``None`` if zero."""
    if not a.factors:
        fa = b.factors
        z = b.z if not a.z else tuple(x + y for x, y in zip(a.z, b.z))
        return 1, Monomial(z, fa)
    if not b.factors:
        z = a.z if not b.z else tuple(x + y for x, y in zip(a.z, b.z))
        return 1, Monomial(z, a.factors)
    sign = 1
    if universe.has_odd:
        odd_a = [v for v, e in a.factors if e % 2 and universe.parity(v)]
        odd_b = [v for v, e in b.factors if e % 2 and universe.parity(v)]
        if odd_a and odd_b:
            sa = set(odd_a)
            if sa.intersection(odd_b):
                return None
            swaps = sum(1 for x in odd_a for y in odd_b if y < x)
            if swaps % 2:
                sign = -1
    acc = dict(a.factors)
    for v, e in b.factors:
        s = acc.get(v, 0) + e
        if s:
            acc[v] = s
        else:
            del acc[v]
    if a.z and b.z:
        z = tuple(x + y for x, y in zip(a.z, b.z))
    else:
        z = a.z or b.z
    return sign, Monomial(z, tuple(sorted(acc.items())))


# -- series -----------------------------------------------------------------------


class Series:
    """Immutable sparse series ``{Monomial: Fraction}`` with a truncation window."""

    __slots__ = ("universe", "terms", "caps")

    def __init__(self, universe: Universe, terms=None, caps: TruncationCaps = UNBOUNDED, *, _trusted=False):
        self.universe = universe
        self.caps = caps
        if _trusted:
            self.terms = terms
            return
        clean = {}
        rank = universe.lattice_rank
        for m, c in (terms or {}).items():
            if not isinstance(m, Monomial):
                m = make_monomial(*m)
            if len(m.z) != rank:
                if not m.z:
                    m = Monomial((0,) * rank, m.factors)
                else:
                    raise ValueError("z exponent has wrong lattice rank")
            if any(x < 0 for x in m.z):
                raise ValueError("z exponent outside the effective cone")
            for v, e in m.factors:
                if e < 0 and v[0] != Kind.HBAR:
                    raise ValueError(f"negative exponent for {v!r}")
                if universe.has_odd and e > 1 and universe.parity(v):
                    raise ValueError(f"odd variable {v!r} with exponent {e}")
            c = Fraction(c)
            if c and caps.admits(m):
                clean[m] = clean.get(m, 0) + c
                if not clean[m]:
                    del clean[m]
        self.terms = clean

    # construction helpers
    @classmethod
    def zero(cls, universe, caps=UNBOUNDED) -> "Series":
        return cls(universe, {}, caps, _trusted=True)

    @classmethod
    def one(cls, universe, caps=UNBOUNDED) -> "Series":
        return cls.monomial(universe, (), 1, caps)

    @classmethod
    def monomial(cls, universe, factors=(), coeff=1, caps=UNBOUNDED, z=None) -> "Series":
        """Single term; ``factors`` is an iterable of ``(Var, exponent)`` or bare ``Var``."""
        fs = [(f, 1) if isinstance(f, Var) else f for f in factors]
        zz = tuple(z) if z is not None else universe.zero_z()
        return cls(universe, {make_monomial(zz, fs): coeff}, caps)

    @classmethod
    def var(cls, universe, v: Var, caps=UNBOUNDED) -> "Series":
        return cls.monomial(universe, [(v, 1)], 1, caps)

    # basic protocol
    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def items(self):
        return sorted(self.terms.items())

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Series.one(self.universe) * other if other else Series.zero(self.universe)
        if not isinstance(other, Series):
            return NotImplemented
        return self.universe == other.universe and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{m!r}" for m, c in self.items())

    def coefficient(self, m) -> Fraction:
        if not isinstance(m, Monomial):
            m = make_monomial(*m)
        if len(m.z) != self.universe.lattice_rank:
            m = Monomial(m.z or self.universe.zero_z(), m.factors)
        return self.terms.get(m, Fraction(0))

    def coeff_of(self, factors=(), z=None) -> Fraction:
        fs = [(f, 1) if isinstance(f, Var) else f for f in factors]
        zz = tuple(z) if z is not None else self.universe.zero_z()
        return self.terms.get(make_monomial(zz, fs), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get(Monomial(self.universe.zero_z(), ()), Fraction(0))

    def with_caps(self, caps: TruncationCaps) -> "Series":
        return truncate(self, caps)

    def _check(self, other):
        if not isinstance(other, Series):
            raise TypeError("expected a Series")
        if other.universe != self.universe:
            raise ValueError("universe mismatch")

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return Series.one(self.universe, self.caps).scale(other)
        self._check(other)
        return other

    def __add__(self, other):
        return add(self, self._coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return add(self, self._coerce(other).scale(-1))

    def __rsub__(self, other):
        return add(self._coerce(other), self.scale(-1))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        return self.scale(Fraction(1) / Fraction(other))

    def scale(self, c) -> "Series":
        c = Fraction(c)
        if not c:
            return Series.zero(self.universe, self.caps)
        return Series(self.universe, {m: v * c for m, v in self.terms.items()}, self.caps, _trusted=True)

    def map_terms(self, fn) -> "Series":
        """Apply ``fn(monomial, coeff) -> iterable of (monomial, coeff)`` termwise."""
        out: dict = {}
        for m, c in self.terms.items():
            for m2, c2 in fn(m, c):
                if self.caps.admits(m2):
                    v = out.get(m2, 0) + c2
                    if v:
                        out[m2] = v
                    else:
                        out.pop(m2, None)
        return Series(self.universe, out, self.caps, _trusted=True)

    def filter(self, pred) -> "Series":
        return Series(self.universe, {m: c for m, c in self.terms.items() if pred(m)}, self.caps, _trusted=True)

    def grades(self) -> set[int]:
        return {self.universe.grade(m) for m in self.terms}

    def homogeneous_parts(self) -> dict[int, "Series"]:
        parts: dict = {}
        for m, c in self.terms.items():
            parts.setdefault(self.universe.grade(m), {})[m] = c
        return {d: Series(self.universe, t, self.caps, _trusted=True) for d, t in sorted(parts.items())}

    def substitute_zero(self, pred) -> "Series":
        """Set every variable satisfying ``pred(var)`` to zero."""
        return self.filter(lambda m: not any(pred(v) for v, _ in m.factors))

    def derive(self, v: Var) -> "Series":
        return derive(self, v)

    def truncate(self, caps) -> "Series":
        return truncate(self, caps)

    def is_homogeneous(self, d: int) -> bool:
        return is_homogeneous(self, d)

    def exp(self) -> "Series":
        return exp_truncated(self)

    def log(self) -> "Series":
        return log_truncated(self)


# -- operations -------------------------------------------------------------------


def add(a: Series, b: Series) -> Series:
    """Coefficientwise sum; the result window is the intersection of both windows."""
    a._check(b)
    caps = a.caps if a.caps == b.caps else a.caps.intersect(b.caps)
    out = dict(a.terms) if caps == a.caps else {m: c for m, c in a.terms.items() if caps.admits(m)}
    check_b = caps != b.caps
    for m, c in b.terms.items():
        if check_b and not caps.admits(m):
            continue
        v = out.get(m, 0) + c
        if v:
            out[m] = v
        else:
            del out[m]
    return Series(a.universe, out, caps, _trusted=True)


def mul(a: Series, b: Series, caps: TruncationCaps | None = None) -> Series:
    """Plain supercommutative product with Koszul signs, truncated to ``caps``."""
    a._check(b)
    if caps is None:
        caps = a.caps if a.caps == b.caps else a.caps.intersect(b.caps)
    u = a.universe
    out: dict = {}
    admits = caps.admits
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            r = _merge(ma, mb, u)
            if r is None:
                continue
            s, m = r
            if not admits(m):
                continue
            v = out.get(m, 0) + (ca * cb if s > 0 else -ca * cb)
            if v:
                out[m] = v
            else:
                del out[m]
    return Series(u, out, caps, _trusted=True)


def grade(m: Monomial, universe: Universe) -> int:
    """Total degree ``sum(exponent * deg(var))`` plus the degree of ``z``."""
    return universe.grade(m)


def is_homogeneous(s: Series, d: int) -> bool:
    return all(s.universe.grade(m) == d for m in s.terms)


def derive(s: Series, v: Var) -> Series:
    """Formal (left) partial derivative in ``v``."""
    v = Var(*v)
    u = s.universe
    odd = u.has_odd and u.parity(v)
    out: dict = {}
    for m, c in s.terms.items():
        e = 0
        sign = 1
        pos = -1
        for k, (w, ew) in enumerate(m.factors):
            if w == v:
                e, pos = ew, k
                break
            if odd and ew % 2 and u.parity(w):
                sign = -sign
        if not e:
            continue
        fs = list(m.factors)
        if e == 1:
            del fs[pos]
        else:
            fs[pos] = (v, e - 1)
        m2 = Monomial(m.z, tuple(fs))
        out[m2] = out.get(m2, 0) + sign * e * c
    return Series(u, {m: c for m, c in out.items() if c}, s.caps, _trusted=True)


def truncate(s: Series, caps: TruncationCaps) -> Series:
    """Drop every monomial outside ``caps``; the result carries ``caps``."""
    return Series(s.universe, {m: c for m, c in s.terms.items() if caps.admits(m)}, caps, _trusted=True)


def _require_positive_weights(s: Series, what: str):
    for m in s.terms:
        w = s.caps.finite_weights(m)
        if not any(x > 0 for x in w):
            raise CapsExceeded(
                f"{what}: term {m!r} has zero weight in every bounded grading; the series would not terminate"
            )


def exp_truncated(s: Series) -> Series:
    """``exp(s)`` within the caps of ``s``; ``s`` must have zero constant term."""
    if s.constant_term():
        raise ValueError("exp_truncated needs zero constant term")
    _require_positive_weights(s, "exp_truncated")
    result = Series.one(s.universe, s.caps)
    term = result
    k = 0
    while term:
        k += 1
        term = mul(term, s).scale(Fraction(1, k))
        result = add(result, term)
    return result


def log_truncated(s: Series) -> Series:
    """Inverse of :func:`exp_truncated`; ``s`` must have constant term 1."""
    if s.constant_term() != 1:
        raise ValueError("log_truncated needs constant term 1")
    x = s - Series.one(s.universe, s.caps)
    _require_positive_weights(x, "log_truncated")
    result = Series.zero(s.universe, s.caps)
    power = Series.one(s.universe, s.caps)
    k = 0
    while True:
        k += 1
        power = mul(power, x)
        if not power:
            break
        result = add(result, power.scale(Fraction((-1) ** (k + 1), k)))
    return result


def random_series(universe: Universe, rng: random.Random, variables, caps, n_terms=4, max_exp=2, hbar_exps=(-1, 0), coeff_range=3):
    """Small random series used by the property tests and demos."""
    terms = {}
    for _ in range(n_terms):
        fs = []
        for v in variables:
            e = rng.randint(0, max_exp)
            if universe.has_odd and universe.parity(v):
                e = min(e, 1)
            if e:
                fs.append((v, e))
        h = rng.choice(hbar_exps)
        if h:
            fs.append((HBAR, h))
        z = tuple(rng.randint(0, 1) for _ in range(universe.lattice_rank))
        c = Fraction(rng.randint(-coeff_range, coeff_range), rng.randint(1, 3))
        m = make_monomial(z, fs)
        terms[m] = terms.get(m, 0) + c
    return Series(universe, terms, caps)
