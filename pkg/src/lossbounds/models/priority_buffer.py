"""Buffers with priorities and group departures of up to ``C`` customers.

Types are numbered from 1 (highest priority).  The losses of type ``k`` are
governed by the arrival stream of the first ``k`` types, a geometric
thinning of the total renewal stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..bounds import epsilon_admissible
from ..dist import Distribution, MomentClass
from ..errors import AdmissibilityError, InvalidInputError, StabilityError
from ..roots import takacs_root
from ._envelope import BoundEnvelope, finish


@dataclass(frozen=True)
class PriorityConfig:
    interarrival: Distribution
    type_probs: tuple[float, ...]
    C: int
    mu: float
    capacities: tuple[int, ...]

    def __post_init__(self):
        probs = tuple(float(v) for v in self.type_probs)
        caps = tuple(int(v) for v in self.capacities)
        object.__setattr__(self, "type_probs", probs)
        object.__setattr__(self, "capacities", caps)
        if not probs or any(v <= 0 for v in probs) or abs(sum(probs) - 1.0) > 1e-12:
            raise InvalidInputError("type probabilities must be positive and sum to 1")
        if len(caps) != len(probs):
            raise InvalidInputError(
                f"{len(caps)} capacities given for {len(probs)} customer types"
            )
        if any(v < 1 for v in caps):
            raise InvalidInputError("buffer capacities must be positive")
        if int(self.C) != self.C or self.C < 1:
            raise InvalidInputError(f"group size C must be a positive integer, got {self.C}")
        if not self.mu > 0:
            raise InvalidInputError(f"departure rate must be positive, got {self.mu}")
        if not self.lam / (self.C * self.mu) < 1:
            raise StabilityError(f"lambda/(C mu) = {self.lam / (self.C * self.mu):.6g} must be below 1")

    @property
    def lam(self) -> float:
        return 1.0 / self.interarrival.mean()

    @property
    def types(self) -> int:
        return len(self.type_probs)

    def p_cum(self, k: int) -> float:
        self._check(k)
        return min(1.0, sum(self.type_probs[:k]))

    def N_cum(self, k: int) -> int:
        self._check(k)
        return sum(self.capacities[:k])

    def rho(self, k: int) -> float:
        return self.lam * self.p_cum(k) / (self.C * self.mu)

    def _check(self, k: int) -> None:
        if not 1 <= k <= self.types:
            raise InvalidInputError(f"type index {k} outside 1..{self.types}")


def priority_composite_lst(base: Distribution, p_k: float, s):
    """LST of a geometric(p_k) number of ``base`` interarrival times."""
    if not 0.0 < p_k <= 1.0:
        raise InvalidInputError(f"p_k must lie in (0, 1], got {p_k}")
    a = np.asarray(base.lst(s), dtype=float)
    out = p_k * a / (1.0 - (1.0 - p_k) * a)
    return float(out) if np.ndim(s) == 0 else out


@dataclass(frozen=True)
class ThinnedArrival(Distribution):
    """Interarrival law of the customers of the first ``k`` types.

    Only the transform side is available; the CDF of a geometric sum has no
    closed form and is not needed by the loss formulas.
    """

    base: Distribution
    p_k: float
    kind = "thinned"

    def cdf(self, x):
        raise NotImplementedError("thinned arrival CDF is not available in closed form")

    def lst(self, s):
        return priority_composite_lst(self.base, self.p_k, s)

    def lst_derivative(self, s):
        a = np.asarray(self.base.lst(s), dtype=float)
        da = np.asarray(self.base.lst_derivative(s), dtype=float)
        out = self.p_k * da / (1.0 - (1.0 - self.p_k) * a) ** 2
        return float(out) if np.ndim(s) == 0 else out

    def mean(self) -> float:
        return self.base.mean() / self.p_k

    def second_moment(self) -> float:
        g1, g2, p = self.base.mean(), self.base.second_moment(), self.p_k
        return (2 * (1 - p) * g1**2 + p * g2) / p**2

    def sample(self, rng, size):
        counts = rng.geometric(self.p_k, size)
        draws = self.base.sample(rng, int(counts.sum()))
        return np.add.reduceat(draws, np.concatenate([[0], np.cumsum(counts)[:-1]]))

    def to_dict(self):
        return {"kind": self.kind, "p_k": self.p_k, "base": self.base.to_dict()}


def _geometric_sum(a: float, terms: int) -> float:
    return sum(a**i for i in range(terms))


def priority_loss(cfg: PriorityConfig, k: int) -> float:
    """Leading-order loss probability of type ``k`` customers."""
    p_k = cfg.p_cum(k)
    thinned = ThinnedArrival(cfg.interarrival, p_k)
    a = takacs_root(thinned, cfg.mu, cfg.C).root
    rho_k = cfg.rho(k)
    D = 1.0 + cfg.C * cfg.mu * float(thinned.lst_derivative(cfg.mu - cfg.mu * a**cfg.C))
    t = D * a ** cfg.N_cum(k)
    return (1.0 - rho_k) * t / ((1.0 - rho_k) * _geometric_sum(a, cfg.C) - rho_k * t)


def priority_root(cfg: PriorityConfig, k: int) -> float:
    return takacs_root(ThinnedArrival(cfg.interarrival, cfg.p_cum(k)), cfg.mu, cfg.C).root


def priority_envelope(
    cfg: PriorityConfig,
    k: int,
    alpha_k_star: float,
    epsilon: float,
    denominator: str = "consistent",
    convention: str = "consistent",
) -> BoundEnvelope:
    """Bounds on the type-``k`` loss probability.

    ``denominator="consistent"`` sums ``C`` powers of the root, matching the
    point formula; ``"printed"`` sums ``C + 1`` powers.
    """
    terms_count = {"consistent": cfg.C, "printed": cfg.C + 1}.get(denominator)
    if terms_count is None:
        raise InvalidInputError(f"unknown denominator {denominator!r}")
    g = cfg.interarrival.moment_class()
    p_k = cfg.p_cum(k)
    adm = epsilon_admissible(g, cfg.mu, alpha_k_star, C=cfg.C, p_k=p_k, convention=convention)
    if not epsilon < adm.epsilon_max:
        raise AdmissibilityError(
            f"epsilon {epsilon} violates the admissibility bound {adm.epsilon_max}", adm.terms
        )
    ell = adm.ell
    a_minus = alpha_k_star - epsilon + epsilon * ell
    a_plus = alpha_k_star + epsilon - epsilon * ell
    rho_k = cfg.rho(k)
    e = math.exp(-cfg.mu * g.g1 / p_k)
    Nk = cfg.N_cum(k)
    tm = e * a_minus**Nk
    lower = (1.0 - rho_k) * tm / ((1.0 - rho_k) * _geometric_sum(a_plus, terms_count) - rho_k * tm)
    tp = a_plus**Nk
    upper = (1.0 - rho_k) * tp / ((1.0 - rho_k) * _geometric_sum(a_minus, terms_count) - rho_k * tp)
    return finish(
        lower, upper, "refined", adm.terms, (),
        {"ell": ell, "alpha_minus": a_minus, "alpha_plus": a_plus, "rho_k": rho_k,
         "p_k": p_k, "N_k": Nk, "denominator": denominator, "convention": convention,
         "epsilon_max": adm.epsilon_max},
    )
