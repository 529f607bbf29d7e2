"""Random distributions for property tests and acceptance runs."""

from __future__ import annotations

import numpy as np

from .dist import (
    Deterministic,
    Distribution,
    Erlang,
    Exponential,
    HyperExponential,
    Mixture,
    MomentClass,
    TwoPointGMax,
    in_class_mixture,
)

__all__ = ["random_catalog", "random_class", "random_in_class", "random_mixture_pair"]

CATALOG_KINDS = ("exponential", "deterministic", "erlang", "hyperexponential", "gmax")


def random_catalog(rng: np.random.Generator, load: tuple[float, float] = (1.05, 5.0)) -> tuple[Distribution, float]:
    """A random catalog law and a rate ``mu`` with ``mu * mean`` uniform on ``load``."""
    g1 = float(np.exp(rng.uniform(-1.0, 1.0)))
    kind = CATALOG_KINDS[rng.integers(len(CATALOG_KINDS))]
    if kind == "exponential":
        d = Exponential(1.0 / g1)
    elif kind == "deterministic":
        d = Deterministic(g1)
    elif kind == "erlang":
        k = int(rng.integers(2, 9))
        d = Erlang(k, k / g1)
    elif kind == "hyperexponential":
        d = HyperExponential.fit(g1, g1**2 * rng.uniform(2.2, 8.0), balance=rng.uniform(0.2, 0.8))
    else:
        d = TwoPointGMax(g1, g1**2 * rng.uniform(1.05, 6.0))
    mu = rng.uniform(*load) / d.mean()
    return d, float(mu)


def random_class(rng: np.random.Generator, g1: float = 1.0) -> MomentClass:
    """Class (g1, g2) with ``g2 / g1^2`` log-uniform on [1.1, 6]."""
    return MomentClass(g1, g1**2 * float(np.exp(rng.uniform(np.log(1.1), np.log(6.0)))))


def _component(rng: np.random.Generator, g1: float) -> Distribution:
    kind = rng.integers(4)
    scale = g1 * rng.uniform(0.4, 2.5)
    if kind == 0:
        return Deterministic(scale)
    if kind == 1:
        return Exponential(1.0 / scale)
    if kind == 2:
        k = int(rng.integers(2, 6))
        return Erlang(k, k / scale)
    return HyperExponential.fit(scale, scale**2 * rng.uniform(2.2, 5.0), balance=rng.uniform(0.3, 0.7))


def random_in_class(g: MomentClass, rng: np.random.Generator, attempts: int = 100) -> Distribution:
    """A random law with mean ``g.g1`` and second moment ``g.g2``.

    Besides the extremal law and fitted hyperexponentials, a random
    component ``X`` is mixed with an atom or with the extremal law of a
    residual class, with weights solving the two moment equations.
    """
    g1, g2 = g.g1, g.g2
    for _ in range(attempts):
        choice = rng.integers(4)
        if choice == 0:
            return TwoPointGMax(g1, g2)
        if choice == 1 and g2 > 2.0 * g1**2 * 1.02:
            return HyperExponential.fit(g1, g2, balance=rng.uniform(0.2, 0.8))
        if choice == 2:
            x = _component(rng, g1)
            m1, m2 = x.mean(), x.second_moment()
            # q X + (1 - q) GMax(r1, r2) with residual moments in-class
            q = rng.uniform(0.05, 0.95)
            r1 = (g1 - q * m1) / (1.0 - q)
            r2 = (g2 - q * m2) / (1.0 - q)
            if r1 > 0 and r2 > r1**2 * (1.0 + 1e-6):
                return Mixture(q, x, TwoPointGMax(r1, r2))
            continue
        if choice == 3:
            # (1 - q) Det(g1) + q Y with mean(Y) = g1 and E[Y^2] > g2 fixes q
            y = HyperExponential.fit(g1, g1**2 * rng.uniform(1.0, 4.0) + g2, balance=rng.uniform(0.2, 0.8))
            q = (g2 - g1**2) / (y.second_moment() - g1**2)
            return Mixture(q, y, Deterministic(g1))
    return TwoPointGMax(g1, g2)


def random_mixture_pair(
    g: MomentClass, rng: np.random.Generator, p_range: tuple[float, float] = (0.01, 0.5)
) -> tuple[Distribution, Distribution, float]:
    """Base law and its in-class perturbation ``p f + (1 - p) base``."""
    base = random_in_class(g, rng)
    f = random_in_class(g, rng)
    p = float(rng.uniform(*p_range))
    return base, in_class_mixture(g, f, base, p), p
