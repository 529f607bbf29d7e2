import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lossbounds.bounds import (
    _marginal_second_moment,
    epsilon_admissible,
    max_weighted_decay,
    remark1_adjusted_ell,
    rolski_bounds,
    theorem1_bound,
)
from lossbounds.dist import Deterministic, Exponential, HyperExponential, MomentClass, TwoPointGMax
from lossbounds.errors import ClassValidityError, InvalidInputError
from lossbounds.generators import random_class, random_in_class
from lossbounds.roots import ell_root, takacs_root

ELL = 0.20318786997997995  # root of z = exp(2z - 2)


def test_ell_constant():
    assert ell_root(1.0, 2.0).root == pytest.approx(ELL, abs=1e-14)


def test_rolski_degenerate():
    rb = rolski_bounds(MomentClass(1.0, 1.0), 2.0)
    assert rb.lower == rb.upper == pytest.approx(ELL, abs=1e-14)


def test_rolski_example():
    rb = rolski_bounds(MomentClass(1.0, 2.0), 2.0)
    assert rb.lower == pytest.approx(ELL, abs=1e-14)
    assert rb.upper == pytest.approx(1 + 0.5 * (ELL - 1), abs=1e-14)
    assert round(rb.upper, 6) == 0.601594
    assert rb.width == pytest.approx(0.5 * (1 - ELL), abs=1e-14)


def test_rolski_thinned_effective_moments():
    g = MomentClass(1.0, 2.0)
    rb = rolski_bounds(g, 1.0, C=2, p_k=0.5)
    g1e, g2e = 2.0, (2 * 0.5 * 1.0 + 0.5 * 2.0) / 0.25
    assert rb.lower == pytest.approx(ell_root(1.0, 1.0, C=2, p_k=0.5).root, abs=1e-15)
    assert rb.upper == pytest.approx(1 + g1e**2 / g2e * (rb.lower - 1), abs=1e-14)


def test_rolski_sandwich_randomized():
    rng = np.random.default_rng(17)
    for _ in range(300):
        g = random_class(rng, g1=float(rng.uniform(0.5, 2.0)))
        mu = float(rng.uniform(1.05, 5.0)) / g.g1
        rb = rolski_bounds(g, mu)
        r = takacs_root(random_in_class(g, rng), mu).root
        assert rb.lower - 1e-12 <= r <= rb.upper + 1e-12


def test_extremal_laws_attain_sandwich_ends():
    g = MomentClass(1.5, 4.0)
    rb = rolski_bounds(g, 1.3)
    assert takacs_root(Deterministic(1.5), 1.3).root == pytest.approx(rb.lower, abs=1e-12)
    assert takacs_root(TwoPointGMax(1.5, 4.0), 1.3).root == pytest.approx(rb.upper, abs=1e-12)


def test_perturbation_bound_examples():
    g = MomentClass(1.0, 2.0)
    assert theorem1_bound(g, 2.0, 0.0).bound == 0.0
    b = theorem1_bound(g, 2.0, 0.05)
    assert b.regime == "refined"
    assert b.bound == pytest.approx(0.05 * (1 - ELL), abs=1e-14)
    assert round(b.bound, 6) == 0.039841
    c = theorem1_bound(g, 2.0, 0.6)
    assert c.regime == "coarse"
    assert round(c.bound, 6) == 0.398406
    assert c.bound == pytest.approx(rolski_bounds(g, 2.0).width, abs=1e-15)
    with pytest.raises(InvalidInputError):
        theorem1_bound(g, 2.0, 1.5)


@settings(max_examples=60, deadline=None)
@given(ratio=st.floats(1.05, 10.0), load=st.floats(1.05, 5.0), frac=st.floats(0.01, 0.99))
def test_refined_below_coarse(ratio, load, frac):
    g = MomentClass(1.0, ratio)
    eps = frac * g.width
    assert theorem1_bound(g, load, eps).bound < theorem1_bound(g, load, g.width).bound


def test_epsilon_admissible_example():
    g = MomentClass(1.0, 2.0)
    adm = epsilon_admissible(g, 2.0, 0.5)
    lower_gap = (0.5 - ELL) / (1 - ELL)
    upper_gap = (2.0 * 0.5 - 1.0 * (1 - ELL)) / (2.0 * (1 - ELL))
    assert adm.terms["class_width"] == 0.5
    assert adm.terms["lower_gap"] == pytest.approx(lower_gap, abs=1e-14)
    assert adm.terms["upper_gap"] == pytest.approx(upper_gap, abs=1e-14)
    assert round(adm.terms["lower_gap"], 5) == 0.37250
    assert round(adm.terms["upper_gap"], 5) == 0.12750
    assert adm.epsilon_max == pytest.approx(upper_gap, abs=1e-14)
    assert adm.admits(0.1) and not adm.admits(0.13)


def test_epsilon_admissible_boundaries():
    g = MomentClass(1.0, 2.0)
    rb = rolski_bounds(g, 2.0)
    assert epsilon_admissible(g, 2.0, rb.lower).epsilon_max == pytest.approx(0.0, abs=1e-14)
    assert epsilon_admissible(g, 2.0, rb.upper).epsilon_max == pytest.approx(0.0, abs=1e-14)
    out = epsilon_admissible(g, 2.0, 0.9)
    assert out.epsilon_max == 0.0 and "outside" in out.diagnostic


def test_epsilon_admissible_interval_stays_in_sandwich():
    rng = np.random.default_rng(4)
    for _ in range(200):
        g = random_class(rng)
        mu = float(rng.uniform(1.05, 5.0))
        rb = rolski_bounds(g, mu)
        star = float(rng.uniform(rb.lower, rb.upper))
        adm = epsilon_admissible(g, mu, star)
        eps = 0.999 * adm.epsilon_max
        assert star - eps * (1 - rb.lower) >= rb.lower - 1e-12
        assert star + eps * (1 - rb.lower) <= rb.upper + 1e-12


def test_adjusted_ell_for_mean_interval():
    assert remark1_adjusted_ell(1.0, 2.0).root == pytest.approx(ell_root(1.0, 2.0).root, abs=0)
    assert remark1_adjusted_ell(1.1, 2.0).root < ell_root(1.0, 2.0).root
    with pytest.raises(ClassValidityError):
        remark1_adjusted_ell(1.1, 2.0, g2_lower=1.2)
    remark1_adjusted_ell(1.1, 2.0, g2_lower=1.3)


def test_marginal_second_moment_width():
    g1, eps1 = 1.3, 0.2
    m2 = _marginal_second_moment(g1, eps1)
    assert MomentClass(g1, m2).width == pytest.approx(eps1, abs=1e-15)


@pytest.mark.parametrize("s", [0.2, 0.7, 1.5, 4.0])
def test_max_weighted_decay_dominates_class_members(s):
    g = MomentClass(1.0, 2.5)
    bound = max_weighted_decay(g, s)
    rng = np.random.default_rng(int(s * 10))
    laws = [Deterministic(1.0), TwoPointGMax(1.0, 2.5), HyperExponential.fit(1.0, 2.5)]
    laws += [random_in_class(g, rng) for _ in range(100)]
    for d in laws:
        assert -float(d.lst_derivative(s)) <= bound + 1e-12
    assert bound <= min(1.0, 1.0 / (math.e * s)) + 1e-15


def test_max_weighted_decay_is_nearly_tight():
    # at s = 1/g1 the point mass at g1 attains the global maximum 1/(e s)
    g = MomentClass(1.0, 2.0)
    assert max_weighted_decay(g, 1.0) == pytest.approx(1 / math.e, rel=1e-12)
    assert max_weighted_decay(g, 0.0) == 1.0
