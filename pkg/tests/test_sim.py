import math

import numpy as np
import pytest

from lossbounds.dist import Deterministic, Exponential, MomentClass
from lossbounds.errors import InvalidInputError
from lossbounds.models import GIM1nConfig, MGI1BufferConfig, PriorityConfig, gim1n_envelope, mm1n_exact_loss
from lossbounds.roots import takacs_root
from lossbounds.sim import (
    ALGORITHM,
    RngSpec,
    batch_size_law,
    ks_confidence_epsilon,
    remove_by_priority,
    replicate,
    simulate_gim1n,
    simulate_mgi1_buffer,
    simulate_priority,
)

MM1_10 = GIM1nConfig(Exponential(1.0), 2.0, 10)


def test_mm1_10_example():
    est = simulate_gim1n(MM1_10, 1_000_000, RngSpec(42))
    assert est.covers(4.8852e-4)
    assert est.half_width > 0
    assert est.losses <= est.arrivals


def test_determinism():
    a = simulate_gim1n(MM1_10, 50_000, RngSpec(7, "x"))
    b = simulate_gim1n(MM1_10, 50_000, RngSpec(7, "x"))
    c = simulate_gim1n(MM1_10, 50_000, RngSpec(7, "y"))
    assert a == b
    assert a.batch_rates == b.batch_rates
    assert a.batch_rates != c.batch_rates


def test_ci_calibration_over_seeds():
    exact = mm1n_exact_loss(0.5, 10)
    hits = sum(simulate_gim1n(MM1_10, 400_000, RngSpec(s, "calib")).covers(exact, k=1.0) for s in range(100))
    assert hits >= 90


def test_loss_monotone_in_capacity():
    rng = RngSpec(3, "mono")
    ests = [simulate_gim1n(GIM1nConfig(Exponential(1.0), 1.25, n), 200_000, rng) for n in (2, 4, 8, 16)]
    for small, big in zip(ests, ests[1:]):
        assert big.point <= small.point + 3 * math.hypot(big.half_width, small.half_width)


def test_single_place_matches_erlang_b():
    # n = 1 total place: an arrival is lost iff the server is busy
    rho = 0.5
    est = simulate_gim1n(GIM1nConfig(Exponential(1.0), 1 / rho, 1), 200_000, RngSpec(1))
    assert est.covers(rho / (1 + rho))


def test_deterministic_arrivals_inside_zero_epsilon_envelope():
    d, mu, n = Deterministic(1.0), 2.0, 5
    est = simulate_gim1n(GIM1nConfig(d, mu, n), 1_000_000, RngSpec(11, "det"))
    env = gim1n_envelope(MomentClass(1.0, 1.0), mu, n, takacs_root(d, mu).root, 0.0)
    assert env.contains(est.point, slack=3 * est.half_width)


def test_minimum_event_count():
    with pytest.raises(InvalidInputError):
        simulate_gim1n(MM1_10, 9_999, RngSpec(0))


def buf(**kw):
    base = dict(lam=1.0, service=Exponential(2 / 3), N=60, c=2, nu_lower=1, nu_upper=3, p=0.1)
    base.update(kw)
    return MGI1BufferConfig(**base)


def test_buffer_all_errors():
    est = simulate_mgi1_buffer(buf(p=1.0), 20_000, RngSpec(0))
    assert est.point == 1.0
    est = simulate_mgi1_buffer(buf(p=1.0), 20_000, RngSpec(0), errors="rejected")
    assert est.point == 1.0


def test_buffer_overload_limit():
    cfg = buf(p=0.0, N=400)
    est = simulate_mgi1_buffer(cfg, 400_000, RngSpec(4, "ovl"))
    assert est.covers((cfg.rho - 1) / cfg.rho)


def test_buffer_error_modes_differ():
    a = simulate_mgi1_buffer(buf(), 200_000, RngSpec(4))
    b = simulate_mgi1_buffer(buf(), 200_000, RngSpec(4), errors="rejected")
    assert b.point < a.point
    with pytest.raises(InvalidInputError):
        simulate_mgi1_buffer(buf(), 20_000, RngSpec(4), errors="other")


def test_batch_size_law():
    (lo, hi), (w_lo, w_hi) = batch_size_law(1, 3, 2.5)
    assert (lo, hi) == (1, 3)
    assert lo * w_lo + hi * w_hi == pytest.approx(2.5)
    with pytest.raises(InvalidInputError):
        batch_size_law(2, 3, 1.5)


def test_removal_rule_worked_example():
    # group of 5 leaves 3/3/1 customers of types 1/2/3 as 0/1/1
    assert remove_by_priority([3, 3, 1], 5) == [0, 1, 1]
    assert remove_by_priority([0, 2, 4], 3) == [0, 0, 3]
    assert remove_by_priority([1, 1], 10) == [0, 0]


def test_priority_single_type_reproduces_gim1n():
    cfg = PriorityConfig(Exponential(1.0), (1.0,), 1, 2.0, (10,))
    p = simulate_priority(cfg, 200_000, RngSpec(42))[0]
    g = simulate_gim1n(MM1_10, 100_000, RngSpec(42))
    assert p.arrivals == g.arrivals and p.losses == g.losses
    assert p.point == g.point


def test_priority_separation():
    cfg = PriorityConfig(Exponential(1.0), (0.5, 0.5), 2, 0.6, (40, 3))
    e1, e2 = simulate_priority(cfg, 300_000, RngSpec(5, "sep"))
    assert e1.point + 3 * e1.half_width < e2.point
    assert e1.stream != e2.stream


def test_priority_capacity_length_check():
    cfg = PriorityConfig(Exponential(1.0), (1.0,), 1, 2.0, (10,))
    object.__setattr__(cfg, "capacities", (10, 5))
    with pytest.raises(InvalidInputError):
        simulate_priority(cfg, 20_000, RngSpec(0))


def test_ks_confidence_epsilon():
    eps = ks_confidence_epsilon(10_000, 0.95)
    assert 0.01357 <= eps <= 0.01359
    assert ks_confidence_epsilon(40_000, 0.95) == pytest.approx(eps / 2, rel=1e-12)
    assert ks_confidence_epsilon(10_000, 1e-6) < 0.003
    for bad in ((10, 0.95), (10_000, 0.0), (10_000, 1.0)):
        with pytest.raises(InvalidInputError):
            ks_confidence_epsilon(*bad)


def test_merge_is_associative_and_adds_counts():
    parts = [simulate_gim1n(MM1_10, 20_000, RngSpec(s)) for s in range(3)]
    left = parts[0].merge(parts[1]).merge(parts[2])
    right = parts[0].merge(parts[1].merge(parts[2]))
    assert left.arrivals == right.arrivals == sum(p.arrivals for p in parts)
    assert left.losses == right.losses
    assert left.point == right.point
    assert left.half_width == pytest.approx(right.half_width, rel=1e-12)


def test_replicate_threads_match_sequential():
    seq = replicate(simulate_gim1n, MM1_10, 20_000, RngSpec(8), 4, workers=1)
    par = replicate(simulate_gim1n, MM1_10, 20_000, RngSpec(8), 4, workers=4)
    assert seq == par
    assert seq.arrivals == 4 * simulate_gim1n(MM1_10, 20_000, RngSpec(8, "main/rep0")).arrivals


def test_report_fields():
    d = simulate_gim1n(MM1_10, 20_000, RngSpec(1, "r")).to_dict()
    assert {"point", "half_width", "arrivals", "losses", "seed", "stream", "algorithm"} <= set(d)
    assert d["algorithm"] == ALGORITHM
