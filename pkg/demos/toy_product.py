"""Multiply two monomials in the rubber Weyl algebra of a three-class toy ring.

Each contraction of a q against a matching p costs one power of hbar, so the
product has one term per subset of contractions.
"""

from gwrubber.rings import RingDescriptor
from gwrubber.series import HBAR, Series, Universe, p, q
from gwrubber.weyl import star, star_via_operators

toy = Universe("rubber", RingDescriptor("toy", (("e1", 0), ("e2", 0), ("e3", 0)), ((1, 0, 0), (0, 1, 0), (0, 0, 1))))
a = Series.monomial(toy, [(HBAR, -1), (p(1, 0), 1), (q(1, 0), 1), (q(1, 1), 1)])
b = Series.monomial(toy, [(HBAR, -1), (p(1, 0), 1), (p(1, 1), 1), (p(1, 2), 1)])

product = star(a, b)
for m, c in product.items():
    print(f"{c}  {m!r}")
print("operator route agrees:", product == star_via_operators(a, b))
