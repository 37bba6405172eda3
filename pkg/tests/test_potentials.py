from fractions import Fraction
from math import factorial

import pytest
from fourier_reference import p1_o1_display

from gwrubber.potentials import (
    cut_and_join,
    fourier_mode,
    fourier_rubber_potential,
    gw_potential,
    gw_potential_p1,
    gw_potential_p2,
    gw_potential_point,
    point_rubber_potential,
    rubber_derivative_operator,
    rubber_potential,
)
from gwrubber.oracles import kontsevich_recursion
from gwrubber.rings import builtin_ring
from gwrubber.series import (
    HBAR,
    CapsExceeded,
    Kind,
    Series,
    TruncationCaps,
    Universe,
    beta,
    p,
    q,
    theta,
)
from gwrubber.weyl import check_balance

SMALL = TruncationCaps((2,), 3, 3, 3, None, 0)


def engine_as_reference_keys(A):
    tags = {Kind.BETA: "b", Kind.P: "p", Kind.Q: "q"}
    out = {}
    for m, c in A.items():
        assert m.hbar_exponent == -1
        fs = tuple(sorted(((tags[v[0]], v[1], v[2]), e) for v, e in m.factors if v[0] != Kind.HBAR))
        out[(m.z[0], fs)] = c
    return out


def test_p1_potential_matches_displayed_integrals():
    caps = TruncationCaps((4,), 4, 4, 3, None, 0)
    A = fourier_rubber_potential(gw_potential_p1(), 1, caps)
    assert engine_as_reference_keys(A) == p1_o1_display(4, 3)


def test_p1_potential_structure():
    A = rubber_potential("p1", 1, SMALL)
    assert A.is_homogeneous(2)
    assert check_balance(A)
    assert A.coeff_of([(HBAR, -1), (beta(1), 1), (p(1, 0), 1), (q(1, 0), 1)]) == 1
    assert A.coeff_of([(HBAR, -1), (beta(0), 2), (beta(1), 1)]) == Fraction(1, 2)
    assert A.coeff_of([(HBAR, -1), (p(1, 1), 1)], z=(1,)) == 1


@pytest.mark.parametrize("m", [-2, -1, 0, 1, 2])
def test_balance_and_homogeneity_for_all_twists(m):
    A = rubber_potential("p1", m, SMALL)
    assert check_balance(A)
    assert A.grades() <= {2}
    assert all(fourier_mode(mon, A.universe) == 0 for mon in A.terms)


def test_p2_rubber_potential_is_balanced():
    caps = TruncationCaps((1,), 2, 2, 3, None, 0)
    A = rubber_potential("p2", 1, caps, max_degree=1)
    assert A and check_balance(A)
    assert A.grades() == {2}


def test_point_potential_formula():
    caps = TruncationCaps(None, 3, 3, 3, None, 0)
    A = point_rubber_potential(caps)
    assert A.coeff_of([(HBAR, -1), (beta(0), 3)]) == Fraction(1, 6)
    assert A.coeff_of([(beta(0), 1)]) == Fraction(-1, 24)
    # cut-and-join: p_{k+l} q_k q_l and p_k p_l q_{k+l}
    assert A.coeff_of([(HBAR, -1), (p(2, 0), 1), (q(1, 0), 2)]) == Fraction(1, 2)
    assert A.coeff_of([(HBAR, -1), (p(1, 0), 1), (p(2, 0), 1), (q(3, 0), 1)]) == 1


def test_point_potential_agrees_with_fourier_of_the_cubic():
    caps = TruncationCaps((), 4, 4, 3, None, 0)
    A = point_rubber_potential(caps)
    F = fourier_rubber_potential(gw_potential_point(), 0, caps)
    assert A - F == Series.monomial(A.universe, [(beta(0), 1)], Fraction(-1, 24), caps)


def test_point_potential_needs_a_weight_cap():
    with pytest.raises(CapsExceeded):
        point_rubber_potential(TruncationCaps())


def test_fourier_needs_finite_window():
    with pytest.raises(CapsExceeded):
        fourier_rubber_potential(gw_potential_p1(), 1, TruncationCaps((2,), None, None, 3))
    with pytest.raises(CapsExceeded):
        fourier_rubber_potential(gw_potential_p1(), 1, TruncationCaps(None, 2, 2, 3))


def test_cut_and_join_terms():
    u = Universe("rubber", builtin_ring("point"))
    C = cut_and_join(u, 3)
    assert len(C) == 4
    assert C.coeff_of([(p(1, 0), 2), (q(2, 0), 1)]) == Fraction(1, 2)
    assert C.coeff_of([(p(1, 0), 1), (p(2, 0), 1), (q(3, 0), 1)]) == 1


def test_p2_absolute_potential_uses_kontsevich_numbers():
    f = gw_potential_p2(3)
    counts = dict(f.couplings)
    for d, n in zip(range(1, 4), kontsevich_recursion(3)):
        poly = counts[(d,)]
        k = 3 * d - 1
        assert poly.coeff_of([(theta(2), k)]) == Fraction(n) / factorial(k)


def test_gw_potential_names():
    assert gw_potential("point").ring.name == "point"
    with pytest.raises(ValueError):
        gw_potential("p7")


def test_rubber_derivative_operator():
    A = rubber_potential("p1", 1, SMALL)
    d = rubber_derivative_operator(A, 1)
    assert d.coeff_of([(HBAR, -1), (p(1, 0), 1), (q(1, 0), 1)]) == 1
    r = rubber_derivative_operator(A, 1, restrict=True)
    assert all(not mon.has_kind(Kind.BETA) for mon in r.terms)
