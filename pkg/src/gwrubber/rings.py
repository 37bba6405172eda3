"""Cohomological context for rubber pairs ``(X, L)`` and relative pairs ``(Z, D)``.

A :class:`RingDescriptor` fixes an ordered homogeneous basis of ``H^*(X)``,
the intersection pairing, the curve lattice and the Chern data of ``TX`` and
of the line bundle ``L``.  Every variable degree and contraction coefficient
used elsewhere is read off these descriptors.

Matrix conventions (row = source basis index):

* ``bundle_matrix[i][j]``: ``c_1(L) ∪ c_i = Σ_j N_ij c_j``
* ``restriction_matrix[j][l]``: ``i^* e_j = Σ_l M_jl c_l``
* ``divisor_cup_matrix[j][l]``: ``e_j ∪ [D] = Σ_l N_jl e_l``
* ``pushforward_lattice[k]``: image in ``B_1(Z)`` of the ``k``-th generator of ``B_1(D)``
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import _linalg as la

__all__ = [
    "RingDescriptor",
    "RelativePairDescriptor",
    "builtin_ring",
    "projective_space",
    "line_bundle_over",
    "relative_pair",
    "hirzebruch_ambient",
]


@dataclass(frozen=True)
class RingDescriptor:
    name: str
    basis: tuple[tuple[str, int], ...]
    pairing: tuple[tuple[Fraction, ...], ...]
    curve_lattice_rank: int = 0
    c1_tangent: tuple[int, ...] = ()
    c1_bundle: tuple[int, ...] = ()
    bundle_matrix: tuple[tuple[Fraction, ...], ...] = ()
    dim: int | None = None

    def __post_init__(self):
        n = len(self.basis)
        object.__setattr__(self, "basis", tuple((str(lab), int(deg)) for lab, deg in self.basis))
        object.__setattr__(self, "pairing", la.frac_matrix(self.pairing))
        if not self.bundle_matrix:
            object.__setattr__(self, "bundle_matrix", la.zeros(n, n))
        else:
            object.__setattr__(self, "bundle_matrix", la.frac_matrix(self.bundle_matrix))
        if not self.c1_tangent:
            object.__setattr__(self, "c1_tangent", (0,) * self.curve_lattice_rank)
        if not self.c1_bundle:
            object.__setattr__(self, "c1_bundle", (0,) * self.curve_lattice_rank)
        object.__setattr__(self, "c1_tangent", tuple(int(x) for x in self.c1_tangent))
        object.__setattr__(self, "c1_bundle", tuple(int(x) for x in self.c1_bundle))
        if self.dim is None:
            object.__setattr__(self, "dim", max((d for _, d in self.basis), default=0) // 2)
        self._validate()

    def _validate(self):
        n = len(self.basis)
        if any(deg < 0 or deg % 2 for _, deg in self.basis):
            raise ValueError("basis degrees must be even and nonnegative")
        if len(self.pairing) != n or any(len(r) != n for r in self.pairing):
            raise ValueError("pairing must be a square matrix matching the basis")
        if la.transpose(self.pairing) != self.pairing:
            raise ValueError("pairing must be symmetric")
        if la.rank(self.pairing) != n:
            raise ValueError("pairing must be nondegenerate")
        if len(self.bundle_matrix) != n or any(len(r) != n for r in self.bundle_matrix):
            raise ValueError("bundle_matrix must be square")
        for i in range(n):
            for j in range(n):
                if self.bundle_matrix[i][j] != 0 and self.degree(j) - self.degree(i) != 2:
                    raise ValueError("bundle_matrix must raise cohomological degree by 2")
        if len(self.c1_tangent) != self.curve_lattice_rank or len(self.c1_bundle) != self.curve_lattice_rank:
            raise ValueError("Chern vectors must have the curve lattice rank")

    def __len__(self):
        return len(self.basis)

    def degree(self, i: int) -> int:
        return self.basis[i][1]

    def label(self, i: int) -> str:
        return self.basis[i][0]

    def index(self, label: str) -> int:
        for k, (lab, _) in enumerate(self.basis):
            if lab == label:
                return k
        raise KeyError(label)

    @cached_property
    def pairing_inverse(self):
        return la.inverse(self.pairing)

    def c1_bundle_on(self, d) -> int:
        return sum(a * b for a, b in zip(self.c1_bundle, d))

    def c1_tangent_on(self, d) -> int:
        return sum(a * b for a, b in zip(self.c1_tangent, d))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "basis": [[lab, deg] for lab, deg in self.basis],
            "pairing": [[str(x) for x in row] for row in self.pairing],
            "curve_lattice_rank": self.curve_lattice_rank,
            "c1_tangent": list(self.c1_tangent),
            "c1_bundle": list(self.c1_bundle),
            "bundle_matrix": [[str(x) for x in row] for row in self.bundle_matrix],
            "dim": self.dim,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RingDescriptor":
        return cls(
            name=data["name"],
            basis=tuple((lab, deg) for lab, deg in data["basis"]),
            pairing=tuple(tuple(Fraction(x) for x in row) for row in data["pairing"]),
            curve_lattice_rank=int(data.get("curve_lattice_rank", 0)),
            c1_tangent=tuple(data.get("c1_tangent", ())),
            c1_bundle=tuple(data.get("c1_bundle", ())),
            bundle_matrix=tuple(tuple(Fraction(x) for x in row) for row in data.get("bundle_matrix", ())),
            dim=data.get("dim"),
        )

    @classmethod
    def from_json(cls, path) -> "RingDescriptor":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def _cup_hyperplane(r: int):
    n = r + 1
    return tuple(tuple(Fraction(int(j == i + 1)) for j in range(n)) for i in range(n))


def projective_space(r: int) -> RingDescriptor:
    """``P^r`` with basis ``1, H, ..., H^r`` and lattice generated by a line."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    if r == 0:
        return RingDescriptor("point", (("1", 0),), ((1,),), dim=0)
    labels = ["1", "H"] + [f"H{k}" for k in range(2, r + 1)]
    basis = tuple((labels[k], 2 * k) for k in range(r + 1))
    pairing = tuple(tuple(int(i + j == r) for j in range(r + 1)) for i in range(r + 1))
    return RingDescriptor(f"p{r}", basis, pairing, 1, (r + 1,), (0,), dim=r)


def builtin_ring(name: str) -> RingDescriptor:
    """``point``, ``p1``, ``p2`` (and ``p<r>`` in general)."""
    if name == "point":
        return projective_space(0)
    if name == "p1":
        # classes labelled by degree, as in the Caporaso-Harris computation
        return RingDescriptor("p1", (("c0", 0), ("c2", 2)), ((0, 1), (1, 0)), 1, (2,), (0,), dim=1)
    m = re.fullmatch(r"p(\d+)", name)
    if m:
        return projective_space(int(m.group(1)))
    raise ValueError(f"unknown ring {name!r}")


def line_bundle_over(ring: RingDescriptor, m: int) -> RingDescriptor:
    """Attach ``O(m)`` to a projective-space descriptor (``m`` ignored on a point)."""
    if ring.curve_lattice_rank == 0:
        return ring
    if ring.curve_lattice_rank != 1:
        raise ValueError("line_bundle_over expects a projective space")
    r = len(ring) - 1
    cup = _cup_hyperplane(r)
    N = tuple(tuple(m * x for x in row) for row in cup)
    base = ring.name.split(":")[0]
    return RingDescriptor(
        f"{base}:O({m})", ring.basis, ring.pairing, 1, ring.c1_tangent, (m,), N, dim=ring.dim
    )


@dataclass(frozen=True)
class RelativePairDescriptor:
    name: str
    ambient: RingDescriptor
    divisor: RingDescriptor
    restriction_matrix: tuple
    divisor_cup_matrix: tuple
    pushforward_lattice: tuple
    v_basis_mask: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "restriction_matrix", la.frac_matrix(self.restriction_matrix))
        object.__setattr__(self, "divisor_cup_matrix", la.frac_matrix(self.divisor_cup_matrix))
        object.__setattr__(
            self, "pushforward_lattice", tuple(tuple(int(x) for x in v) for v in self.pushforward_lattice)
        )
        if not self.v_basis_mask:
            object.__setattr__(self, "v_basis_mask", self._compute_v_mask())
        self._validate()

    def _compute_v_mask(self):
        N = self.divisor_cup_matrix
        r = la.rank(N)
        mask = []
        for j in range(len(self.ambient)):
            e = tuple(Fraction(int(k == j)) for k in range(len(self.ambient)))
            mask.append(la.rank(tuple(N) + (e,)) == r)
        return tuple(mask)

    def _validate(self):
        A, D = self.ambient, self.divisor
        M, N = self.restriction_matrix, self.divisor_cup_matrix
        if len(M) != len(A) or any(len(r) != len(D) for r in M):
            raise ValueError("restriction_matrix has wrong shape")
        if len(N) != len(A) or any(len(r) != len(A) for r in N):
            raise ValueError("divisor_cup_matrix has wrong shape")
        for j in range(len(A)):
            for l in range(len(D)):
                if M[j][l] != 0 and A.degree(j) != D.degree(l):
                    raise ValueError("restriction must preserve degree")
            for l in range(len(A)):
                if N[j][l] != 0 and A.degree(l) - A.degree(j) != 2:
                    raise ValueError("cup with [D] must raise degree by 2")
        if len(self.pushforward_lattice) != D.curve_lattice_rank:
            raise ValueError("pushforward_lattice needs one image per divisor lattice generator")
        if any(len(v) != A.curve_lattice_rank for v in self.pushforward_lattice):
            raise ValueError("pushforward images must live in the ambient lattice")
        if tuple(self._compute_v_mask()) != tuple(self.v_basis_mask):
            raise ValueError("v_basis_mask does not match the image of cup with [D]")

    def pushforward(self, d) -> tuple[int, ...]:
        out = [0] * self.ambient.curve_lattice_rank
        for k, dk in enumerate(d):
            for a, x in enumerate(self.pushforward_lattice[k]):
                out[a] += dk * x
        return tuple(out)

    def beta_image(self, l: int) -> dict[int, Fraction]:
        """Ambient theta-combination that the rubber variable ``beta_l`` acts by."""
        return {j: self.restriction_matrix[j][l] for j in range(len(self.ambient)) if self.restriction_matrix[j][l]}

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "ambient": self.ambient.to_dict(),
            "divisor": self.divisor.to_dict(),
            "restriction_matrix": [[str(x) for x in r] for r in self.restriction_matrix],
            "divisor_cup_matrix": [[str(x) for x in r] for r in self.divisor_cup_matrix],
            "pushforward_lattice": [list(v) for v in self.pushforward_lattice],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RelativePairDescriptor":
        return cls(
            data["name"],
            RingDescriptor.from_dict(data["ambient"]),
            RingDescriptor.from_dict(data["divisor"]),
            tuple(tuple(Fraction(x) for x in r) for r in data["restriction_matrix"]),
            tuple(tuple(Fraction(x) for x in r) for r in data["divisor_cup_matrix"]),
            tuple(tuple(v) for v in data["pushforward_lattice"]),
        )


def hirzebruch_ambient(n: int) -> RingDescriptor:
    """``F_n`` with basis ``1, C0, f, pt`` and lattice generators ``(C0, f)``; ``C0^2 = -n``."""
    pairing = ((0, 0, 0, 1), (0, -n, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0))
    basis = (("1", 0), ("C0", 2), ("f", 2), ("pt", 4))
    return RingDescriptor(f"F{n}", basis, pairing, 2, (2 - n, 2), (0, 0), dim=2)


def _projective_hyperplane_pair(r: int, name: str) -> RelativePairDescriptor:
    ambient = projective_space(r)
    divisor = line_bundle_over(projective_space(r - 1) if r > 2 else builtin_ring("p1"), 1)
    M = tuple(tuple(int(j == l) for l in range(r)) for j in range(r + 1))
    return RelativePairDescriptor(name, ambient, divisor, M, _cup_hyperplane(r), ((1,),))


def relative_pair(name: str) -> RelativePairDescriptor:
    """``p1_point``, ``p2_line``, ``p3_plane`` or ``fn(n)``."""
    if name == "p1_point":
        ambient = builtin_ring("p1")
        divisor = projective_space(0)
        return RelativePairDescriptor(
            name, ambient, divisor, ((1,), (0,)), ((0, 1), (0, 0)), ()
        )
    if name == "p2_line":
        return _projective_hyperplane_pair(2, name)
    if name == "p3_plane":
        return _projective_hyperplane_pair(3, name)
    m = re.fullmatch(r"fn\((-?\d+)\)|f(\d+)", name)
    if m:
        n = int(m.group(1) if m.group(1) is not None else m.group(2))
        if n < 0:
            raise ValueError("fn(n) needs n >= 0")
        ambient = hirzebruch_ambient(n)
        divisor = line_bundle_over(builtin_ring("p1"), -n)
        # restriction to D = C0:  1 -> c0, C0 -> (C0.C0) c2, f -> c2, pt -> 0
        M = ((1, 0), (0, -n), (0, 1), (0, 0))
        N = ((0, 1, 0, 0), (0, 0, 0, -n), (0, 0, 0, 1), (0, 0, 0, 0))
        return RelativePairDescriptor(f"fn({n})", ambient, divisor, M, N, ((1, 0),))
    raise ValueError(f"unknown relative pair {name!r}")
