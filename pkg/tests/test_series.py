from fractions import Fraction

import pytest
from hypothesis import given, settings
from strategies import CAPS, EXP_CAPS, P1_O1, nilpotent_element, rngs, rubber_element

from gwrubber.hamiltonian import phase_basis_split
from gwrubber.rings import builtin_ring, line_bundle_over, relative_pair
from gwrubber.series import (
    HBAR,
    CapsExceeded,
    Series,
    TruncationCaps,
    Universe,
    add,
    beta,
    derive,
    exp_truncated,
    grade,
    is_homogeneous,
    log_truncated,
    make_monomial,
    mul,
    p,
    pt,
    q,
    random_series,
    sigma,
    theta,
    truncate,
)

P2 = Universe("relative", relative_pair("p2_line"))
HAM = phase_basis_split(line_bundle_over(builtin_ring("p1"), 0)).universe()
LAWS = settings(max_examples=1000, deadline=None)


def mono(u, factors, c=1, z=None):
    return Series.monomial(u, factors, c, z=z)


def test_add_identity_and_inverse():
    s = mono(P1_O1, [(HBAR, -1), (p(1, 0), 1)], 3)
    assert add(s, Series.zero(P1_O1)) == s
    assert not add(s, s.scale(-1))
    assert add(s, s) == s.scale(2)


def test_mul_adds_z_exponents():
    a = mono(P1_O1, [], z=(1,))
    b = mono(P1_O1, [], z=(2,))
    assert mul(a, b) == mono(P1_O1, [], z=(3,))


def test_odd_square_vanishes():
    s = Series.var(HAM, sigma(0))
    assert not mul(s, s)


def test_odd_variables_anticommute():
    a, b = Series.var(HAM, sigma(0)), Series.var(HAM, sigma(1))
    assert mul(a, b) == mul(b, a).scale(-1)


def test_even_product_sign():
    a = Series.var(P2, theta(1))
    b = mono(P2, [(theta(2), 1), (theta(1), 1)])
    assert mul(a, b) == mono(P2, [(theta(1), 2), (theta(2), 1)])


def test_grades_from_the_degree_table():
    # hbar^{-1} theta_2 p~_{1,1} z in the plane relative a line has degree 0
    m = make_monomial((1,), [(HBAR, -1), (theta(2), 1), (pt(1, 1), 1)])
    assert grade(m, P2) == 0
    assert grade(make_monomial((), []), P2) == 0
    m = make_monomial((0,), [(HBAR, -1), (beta(1), 1), (p(1, 0), 1), (q(1, 0), 1)])
    assert grade(m, P1_O1) == 2


def test_is_homogeneous():
    assert is_homogeneous(Series.zero(P2), 7)
    assert not is_homogeneous(mono(P2, [(HBAR, 1)]) + mono(P2, [(theta(1), 1)]), 0)


def test_derive_examples():
    s = mono(P1_O1, [(p(1, 0), 3)])
    assert derive(s, p(1, 0)) == mono(P1_O1, [(p(1, 0), 2)], 3)
    t = mono(P2, [(theta(0), 2), (theta(1), 1)], Fraction(1, 2))
    assert derive(t, theta(0)) == mono(P2, [(theta(0), 1), (theta(1), 1)])


def test_derive_exponential_series():
    caps = TruncationCaps(max_theta_order=5)
    e = exp_truncated(Series.var(P2, theta(1), caps))
    d = derive(e, theta(1))
    assert d == truncate(e, TruncationCaps(max_theta_order=4))


def test_truncate_examples():
    s = mono(P1_O1, [(beta(0), 1)], z=(2,)) + mono(P1_O1, [(beta(0), 1)])
    cut = truncate(s, TruncationCaps(max_z=(1,)))
    assert cut == mono(P1_O1, [(beta(0), 1)]).with_caps(TruncationCaps(max_z=(1,)))
    assert truncate(cut, cut.caps) == cut


def test_exp_examples():
    caps = TruncationCaps(max_theta_order=3)
    assert exp_truncated(Series.zero(P2, caps)) == Series.one(P2, caps)
    e = exp_truncated(Series.var(P2, theta(1), caps))
    assert [e.coeff_of([(theta(1), k)]) for k in range(4)] == [1, 1, Fraction(1, 2), Fraction(1, 6)]


def test_exp_reproduces_double_cover_term():
    caps = TruncationCaps(max_z=(2,), max_theta_order=2)
    g = mono(P2, [(HBAR, -1), (theta(2), 1), (pt(1, 1), 1)], z=(1,)) + mono(P2, [(pt(2, 1), 1)], z=(2,))
    e = exp_truncated(g.with_caps(caps))
    assert e.coeff_of([(HBAR, -2), (theta(2), 2), (pt(1, 1), 2)], z=(2,)) == Fraction(1, 2)
    assert e.coeff_of([(pt(2, 1), 1)], z=(2,)) == 1


def test_exp_needs_terminating_input():
    with pytest.raises(ValueError):
        exp_truncated(Series.one(P2))
    with pytest.raises(CapsExceeded):
        exp_truncated(mono(P2, [(HBAR, -1)]))


def test_log_of_one():
    assert not log_truncated(Series.one(P2, EXP_CAPS))


def test_caps_reject_negative_bounds():
    with pytest.raises(ValueError):
        TruncationCaps(max_p_weight=-1)


def test_universe_mismatch():
    with pytest.raises(ValueError):
        add(Series.one(P2), Series.one(P1_O1))


# -- laws -----------------------------------------------------------------------------


@LAWS
@given(rngs)
def test_mul_associative_commutative_distributive(rng):
    a, b, c = (rubber_element(rng) for _ in range(3))
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert mul(a, b) == mul(b, a)
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))


@LAWS
@given(rngs)
def test_supercommutativity_with_odd_variables(rng):
    vs = (sigma(0), sigma(1), p(1, 0), q(1, 0))
    a, b = (random_series(HAM, rng, vs, CAPS, n_terms=2, max_exp=1) for _ in range(2))
    for da, pa in a.homogeneous_parts().items():
        for db, pb in b.homogeneous_parts().items():
            assert mul(pa, pb) == mul(pb, pa).scale((-1) ** (da * db))


@LAWS
@given(rngs)
def test_leibniz(rng):
    a, b = rubber_element(rng), rubber_element(rng)
    v = rng.choice((p(1, 0), q(1, 1), beta(0), beta(1)))
    assert derive(mul(a, b), v) == add(mul(derive(a, v), b), mul(a, derive(b, v)))
    # odd variable: left derivative picks up (-1)^{|a|}
    vs = (sigma(0), sigma(1), p(1, 0), q(1, 1))
    a, b = (random_series(HAM, rng, vs, CAPS, n_terms=3, max_exp=1) for _ in range(2))
    s = rng.choice((sigma(0), sigma(1)))
    for da, pa in a.homogeneous_parts().items():
        assert derive(mul(pa, b), s) == add(mul(derive(pa, s), b), mul(pa, derive(b, s)).scale((-1) ** da))


@LAWS
@given(rngs)
def test_exp_log_round_trip(rng):
    x = nilpotent_element(rng)
    assert log_truncated(exp_truncated(x)) == x
    one = Series.one(P1_O1, EXP_CAPS)
    assert exp_truncated(log_truncated(add(one, x))) == add(one, x)


@LAWS
@given(rngs)
def test_truncation_soundness(rng):
    small = TruncationCaps(max_z=(1,), max_p_weight=2, max_q_weight=2, max_theta_order=2, hbar_range=None)
    a, b = rubber_element(rng, caps=EXP_CAPS), rubber_element(rng, caps=EXP_CAPS)
    assert truncate(add(a, b), small) == add(truncate(a, small), truncate(b, small))
    assert truncate(mul(a, b), small) == mul(truncate(a, small), truncate(b, small))
    x = nilpotent_element(rng)
    assert truncate(exp_truncated(x), small) == exp_truncated(truncate(x, small))


@LAWS
@given(rngs)
def test_grade_is_additive(rng):
    a, b = rubber_element(rng), rubber_element(rng)
    for da, pa in a.homogeneous_parts().items():
        for db, pb in b.homogeneous_parts().items():
            assert is_homogeneous(mul(pa, pb), da + db)
