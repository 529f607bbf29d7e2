import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from lossbounds.dist import Deterministic, Erlang, Exponential, HyperExponential, MomentClass, TwoPointGMax
from lossbounds.errors import ModelAssumptionError, StabilityError
from lossbounds.generators import random_catalog
from lossbounds.roots import NEAR_CRITICAL, boundary_m, ell_root, takacs_root


def _bisect_oracle(d, mu, C=1, iters=200):
    lo, hi = 0.0, 1.0 - 1e-9
    f = lambda z: float(d.lst(mu - mu * z**C)) - z
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_exponential_quadratic_root():
    r = takacs_root(Exponential(1.0), 2.0)
    assert r.root == pytest.approx(0.5, abs=1e-15)
    assert abs(r.residual) < 1e-12
    assert r.bracket[0] <= r.root <= r.bracket[1] + 1e-14


@pytest.mark.parametrize("lam,mu", [(1.0, 2.0), (0.3, 1.0), (2.0, 2.5)])
def test_exponential_root_is_load(lam, mu):
    # z = lam / (lam + mu - mu z) has roots rho and 1
    assert takacs_root(Exponential(lam), mu).root == pytest.approx(lam / mu, abs=1e-13)


def test_deterministic_root():
    r = takacs_root(Deterministic(1.0), 2.0)
    oracle = brentq(lambda z: math.exp(2 * z - 2) - z, 0.0, 0.9, xtol=1e-15)
    assert r.root == pytest.approx(oracle, abs=1e-13)
    assert round(r.root, 6) == 0.203188


def test_unstable_raises():
    with pytest.raises(StabilityError):
        takacs_root(Exponential(1.0), 0.9)
    with pytest.raises(StabilityError):
        takacs_root(Exponential(1.0), 1.0)


def test_bad_batch_size():
    with pytest.raises(ModelAssumptionError):
        takacs_root(Exponential(1.0), 2.0, C=0)


def test_batch_root_exponential_closed_form():
    # C=2, Exp(lam): z (lam + mu - mu z^2) = lam
    lam, mu = 1.0, 0.75
    r = takacs_root(Exponential(lam), mu, C=2).root
    poly = np.roots([-mu, 0.0, lam + mu, -lam])
    interior = [p.real for p in poly if abs(p.imag) < 1e-12 and 0 < p.real < 1 - 1e-9]
    assert r == pytest.approx(min(interior), abs=1e-13)


def test_near_critical_warning():
    r = takacs_root(Deterministic(1.0), 1.0 + 5e-7)
    assert any("near-critical" in w for w in r.warnings)
    assert not takacs_root(Deterministic(1.0), 2.0).warnings
    assert NEAR_CRITICAL == 1e-6


def test_ell_root_examples():
    assert round(ell_root(1.0, 2.0).root, 6) == 0.203188
    r = ell_root(1.0, 1.0001).root
    assert 0.99 < r < 1.0
    for g1, mu in [(1.0, 2.0), (0.5, 3.0), (2.0, 0.8)]:
        assert ell_root(g1, mu).root == pytest.approx(takacs_root(Deterministic(g1), mu).root, abs=1e-12)


def test_ell_root_thinned_consistent_convention():
    g1, mu, C, pk = 1.0, 1.0, 2, 0.5
    r = ell_root(g1, mu, C=C, p_k=pk).root
    assert r == pytest.approx(math.exp(-(mu * g1 / pk) * (1 - r**C)), abs=1e-12)


def test_ell_root_printed_convention():
    g1, mu, C, pk = 1.0, 2.0, 1, 1.0
    r = ell_root(g1, mu, C=C, p_k=pk, convention="printed").root
    assert r == pytest.approx(math.exp(-(mu * g1 + mu * g1 * r**C) / pk), abs=1e-12)
    assert round(r, 6) == 0.108858
    with pytest.raises(ValueError):
        ell_root(1.0, 2.0, convention="other")


def test_root_nonincreasing_in_mu():
    for d in (Exponential(1.0), Deterministic(1.0), Erlang(3, 3.0), HyperExponential.fit(1.0, 5.0)):
        roots = [takacs_root(d, mu).root for mu in np.linspace(1.1, 6.0, 40)]
        assert all(a >= b - 1e-14 for a, b in zip(roots, roots[1:]))


def test_boundary_m_example():
    g = MomentClass(1.0, 2.0)
    b = boundary_m(g, 2.0)
    assert round(b.target, 6) == 0.601594
    assert 1 / 2.0 < b.m <= g.g1
    assert ell_root(b.m, 2.0).root == pytest.approx(b.target, abs=1e-10)
    # closed form: z = exp(-mu m (1 - z)) gives m = -ln z / (mu (1 - z))
    assert b.m == pytest.approx(-math.log(b.target) / (2.0 * (1 - b.target)), rel=1e-9)


def test_boundary_m_degenerate_limit():
    for g2 in (1.0 + 1e-3, 1.0 + 1e-6):
        b = boundary_m(MomentClass(1.0, g2), 2.0)
        assert b.m == pytest.approx(1.0, abs=5e-3)
    assert boundary_m(MomentClass(1.0, 1.0), 2.0).m == 1.0


def test_boundary_m_unstable():
    with pytest.raises(StabilityError):
        boundary_m(MomentClass(1.0, 2.0), 0.9)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_takacs_root_matches_bisection_oracle(seed):
    d, mu = random_catalog(np.random.default_rng(seed))
    r = takacs_root(d, mu)
    assert r.root == pytest.approx(_bisect_oracle(d, mu), abs=1e-10)
    assert abs(r.residual) < 1e-12


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), C=st.integers(2, 5))
def test_batch_roots_residual(seed, C):
    d, mu = random_catalog(np.random.default_rng(seed))
    r = takacs_root(d, mu, C=C)
    assert abs(r.residual) < 1e-12
    assert r.root == pytest.approx(_bisect_oracle(d, mu, C), abs=1e-10)


def test_gmax_root_is_upper_rolski_bound():
    # the extremal law attains the upper end of the sandwich
    g = MomentClass(1.0, 3.0)
    ell = ell_root(1.0, 2.0).root
    r = takacs_root(TwoPointGMax(1.0, 3.0), 2.0).root
    assert r == pytest.approx(1 + g.ratio * (ell - 1), abs=1e-12)
