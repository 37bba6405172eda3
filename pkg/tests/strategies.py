"""Random cap-bounded elements shared by the property tests."""

import random

from hypothesis import strategies as st

from gwrubber.rings import builtin_ring, line_bundle_over, relative_pair
from gwrubber.series import (
    HBAR,
    Series,
    TruncationCaps,
    Universe,
    beta,
    make_monomial,
    p,
    pt,
    q,
    random_series,
    theta,
)

P1_O1 = Universe("rubber", line_bundle_over(builtin_ring("p1"), 1))
CAPS = TruncationCaps(max_z=(2,), max_p_weight=None, max_q_weight=None, max_theta_order=4, hbar_range=None)
EXP_CAPS = TruncationCaps(max_z=(2,), max_p_weight=3, max_q_weight=3, max_theta_order=3, hbar_range=None)
RUBBER_VARS = (p(1, 0), p(1, 1), q(1, 0), q(1, 1), p(2, 1), q(2, 0), beta(0), beta(1))

PAIR = relative_pair("p2_line")
DIVISOR = Universe("rubber", PAIR.divisor)
REL = Universe("relative", PAIR)
REL_CAPS = TruncationCaps(max_z=(3,), max_p_weight=None, max_q_weight=None, max_theta_order=4, hbar_range=None)
REL_VARS = (pt(1, 0), pt(1, 1), pt(2, 0), theta(0), theta(2))


def rubber_element(rng, universe=P1_O1, variables=RUBBER_VARS, caps=CAPS, n_terms=3, max_exp=1):
    return random_series(universe, rng, variables, caps, n_terms=n_terms, max_exp=max_exp)


def relative_element(rng, n_terms=3):
    return random_series(REL, rng, REL_VARS, REL_CAPS, n_terms=n_terms, max_exp=1)


def nilpotent_element(rng, universe=P1_O1, caps=EXP_CAPS):
    """Random series with every term of positive weight in some capped grading."""
    s = rubber_element(rng, universe, caps=caps, n_terms=3)
    return s.filter(lambda m: any(caps.finite_weights(m)))


def homogeneous_part(s, rng):
    parts = s.homogeneous_parts()
    if not parts:
        return s
    return parts[rng.choice(sorted(parts))]


rngs = st.randoms(use_true_random=False)
