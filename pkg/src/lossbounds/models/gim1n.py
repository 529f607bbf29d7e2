"""Loss probability of the GI/M/1/n queue for large capacity ``n``.

``n`` is the total number of places (server included): an arrival that
finds ``n`` customers is lost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..bounds import epsilon_admissible, max_weighted_decay, rolski_bounds
from ..dist import Distribution, MomentClass
from ..errors import InvalidInputError, ModelAssumptionError, StabilityError
from ..roots import takacs_root
from ._envelope import BoundEnvelope, finish


@dataclass(frozen=True)
class GIM1nConfig:
    arrival: Distribution
    mu: float
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidInputError(f"capacity n must be a positive integer, got {self.n}")
        if not self.mu > 0:
            raise InvalidInputError(f"service rate must be positive, got {self.mu}")
        if not self.rho < 1:
            raise StabilityError(f"load rho = {self.rho:.6g} must be below 1")

    @property
    def rho(self) -> float:
        return 1.0 / (self.mu * self.arrival.mean())


@dataclass(frozen=True)
class DerivativeSandwich:
    """The factor ``1 + mu A'(mu - mu alpha)`` and the bounds printed for it."""

    value: float
    lower: float
    upper: float

    @property
    def holds(self) -> bool:
        return self.lower <= self.value <= self.upper


def _alpha(cfg: GIM1nConfig, alpha: float | None) -> float:
    return takacs_root(cfg.arrival, cfg.mu).root if alpha is None else alpha


def derivative_factor(d: Distribution, mu: float, alpha: float, C: int = 1) -> float:
    return 1.0 + C * mu * float(d.lst_derivative(mu - mu * alpha**C))


def gim1n_loss_asymptotic(cfg: GIM1nConfig, alpha: float | None = None) -> float:
    """Leading-order loss probability ``(1-rho) D a^n / (1 - rho - rho D a^n)``."""
    a = _alpha(cfg, alpha)
    rho = cfg.rho
    D = derivative_factor(cfg.arrival, cfg.mu, a)
    t = D * a**cfg.n
    return (1.0 - rho) * t / (1.0 - rho - rho * t)


def gim1n_derivative_sandwich(
    cfg: GIM1nConfig, alpha: float | None = None, strict: bool = False
) -> DerivativeSandwich:
    """Evaluate ``A(mu)/alpha <= 1 + mu A'(mu - mu alpha) <= 1``.

    The left inequality does not hold in general (exponential arrivals
    violate it for every load); ``strict=True`` raises when it fails.
    """
    a = _alpha(cfg, alpha)
    s = DerivativeSandwich(
        value=derivative_factor(cfg.arrival, cfg.mu, a),
        lower=float(cfg.arrival.lst(cfg.mu)) / a,
        upper=1.0,
    )
    if strict and not s.holds:
        raise ModelAssumptionError(
            f"derivative sandwich violated: {s.lower:.6g} <= {s.value:.6g} <= {s.upper:.6g} fails"
        )
    return s


def loss_bounds_from_roots(
    rho: float, numerator_factor: float, a_minus: float, a_plus: float, n: int
) -> tuple[float, float]:
    """Lower and upper asymptotic loss levels from a root interval."""
    tm = numerator_factor * a_minus**n
    lower = (1.0 - rho) * tm / ((1.0 - rho) * a_plus - rho * tm)
    tp = a_plus**n
    upper = (1.0 - rho) * tp / (1.0 - rho - rho * tp)
    return lower, upper


def gim1n_envelope(
    g: MomentClass,
    mu: float,
    n: int,
    root_star: float,
    epsilon: float,
    lower_factor: str = "moment",
) -> BoundEnvelope:
    """Bounds on the loss probability for an arrival law known only up to ``epsilon``.

    ``root_star`` is the root for the reference (e.g. empirical) law.
    If ``epsilon`` fails the admissibility condition the root interval
    falls back to the full moment-class range.

    The upper level always uses the factor bound ``1 + mu A'(.) <= 1``.
    For the lower level, ``lower_factor="moment"`` bounds the factor from
    below by ``1 - mu sup E[X exp(-s X)]`` over the class, taken at the
    smallest admissible ``s``; this is valid for every law in the class.
    ``lower_factor="printed"`` uses ``exp(-mu g1) / alpha_plus`` instead,
    which rests on the inequality ``A(mu)/alpha <= 1 + mu A'(.)``; that
    inequality is false in general (exponential arrivals break it), so the
    resulting lower level can exceed the true loss.
    """
    if not mu * g.g1 > 1:
        raise StabilityError(f"load 1/(mu g1) = {1 / (mu * g.g1):.6g} must be below 1")
    rho = 1.0 / (mu * g.g1)
    rb = rolski_bounds(g, mu)
    ell = rb.lower
    adm = epsilon_admissible(g, mu, root_star)
    notes = []
    if adm.diagnostic:
        notes.append(adm.diagnostic)
    if epsilon < adm.epsilon_max:
        regime = "refined"
        a_minus = root_star - epsilon + epsilon * ell
        a_plus = root_star + epsilon - epsilon * ell
    else:
        regime = "fallback"
        notes.append(f"epsilon {epsilon} not admissible (max {adm.epsilon_max}); using class range")
        a_minus, a_plus = ell, rb.upper
    if lower_factor == "printed":
        factor = math.exp(-mu * g.g1)
        lower, upper = loss_bounds_from_roots(rho, factor, a_minus, a_plus, n)
        notes.append("lower level uses the printed factor exp(-mu g1)/alpha_plus, which is not a valid bound in general")
    elif lower_factor == "moment":
        factor = max(0.0, 1.0 - mu * max_weighted_decay(g, mu * (1.0 - a_plus)))
        tm = factor * a_minus**n
        lower = (1.0 - rho) * tm / (1.0 - rho - rho * tm)
        _, upper = loss_bounds_from_roots(rho, factor, a_minus, a_plus, n)
    else:
        raise InvalidInputError(f"unknown lower_factor {lower_factor!r}")
    return finish(
        lower, upper, regime, adm.terms, notes,
        {"ell": ell, "alpha_minus": a_minus, "alpha_plus": a_plus, "rho": rho,
         "numerator_factor": factor, "lower_factor": lower_factor, "epsilon_max": adm.epsilon_max},
    )
