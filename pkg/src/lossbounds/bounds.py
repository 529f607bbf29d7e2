"""Bounds on the least root over a moment class.

Over all laws with moments (g1, g2) the root lies between the deterministic
root ``ell`` and ``1 + (g1^2/g2)(ell - 1)``.  When two laws are within
Kolmogorov distance ``eps`` the gap between their roots is bounded by
``eps (1 - ell)`` as long as ``eps < 1 - g1^2/g2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import linprog

from .dist import MomentClass
from .errors import ClassValidityError, InvalidInputError, NumericalError
from .roots import RootReport, ell_root

__all__ = [
    "RootBounds",
    "RootDistanceBound",
    "Admissibility",
    "rolski_bounds",
    "theorem1_bound",
    "epsilon_admissible",
    "remark1_adjusted_ell",
    "max_weighted_decay",
]


@dataclass(frozen=True)
class RootBounds:
    lower: float
    upper: float
    moments: MomentClass
    mu: float
    C: int = 1
    p_k: float = 1.0
    convention: str = "consistent"

    @property
    def ell(self) -> float:
        return self.lower

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, z: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= z <= self.upper + slack

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "g1": self.moments.g1,
            "g2": self.moments.g2,
            "mu": self.mu,
            "C": self.C,
            "p_k": self.p_k,
            "convention": self.convention,
        }


@dataclass(frozen=True)
class RootDistanceBound:
    epsilon: float
    bound: float
    regime: str  # "refined" or "coarse"
    ell: float

    def to_dict(self) -> dict:
        return {"epsilon": self.epsilon, "bound": self.bound, "regime": self.regime, "ell": self.ell}


@dataclass(frozen=True)
class Admissibility:
    """Largest admissible Kolmogorov distance and the terms it is the minimum of."""

    epsilon_max: float
    terms: dict
    ell: float
    diagnostic: str | None = None

    def admits(self, epsilon: float) -> bool:
        return epsilon < self.epsilon_max

    def to_dict(self) -> dict:
        return {
            "epsilon_max": self.epsilon_max,
            "terms": dict(self.terms),
            "ell": self.ell,
            "diagnostic": self.diagnostic,
        }


def rolski_bounds(
    g: MomentClass,
    mu: float,
    C: int = 1,
    p_k: float = 1.0,
    convention: str = "consistent",
) -> RootBounds:
    """Range of the least root over the class, for the thinned class when ``p_k < 1``."""
    eff = g.effective(p_k)
    ell = ell_root(g.g1, mu, C=C, p_k=p_k, convention=convention).root
    upper = ell + eff.width * (1.0 - ell)  # = 1 + (g1^2/g2)(ell - 1)
    return RootBounds(ell, upper, g, mu, C, p_k, convention)


def theorem1_bound(g: MomentClass, mu: float, epsilon: float) -> RootDistanceBound:
    if not 0.0 <= epsilon <= 1.0:
        raise InvalidInputError(f"epsilon must lie in [0, 1], got {epsilon}")
    ell = ell_root(g.g1, mu).root
    if epsilon < g.width:
        return RootDistanceBound(epsilon, epsilon * (1.0 - ell), "refined", ell)
    return RootDistanceBound(epsilon, 1.0 + g.ratio * (ell - 1.0) - ell, "coarse", ell)


def epsilon_admissible(
    g: MomentClass,
    mu: float,
    root_star: float,
    C: int = 1,
    p_k: float = 1.0,
    convention: str = "consistent",
) -> Admissibility:
    """Largest ``eps`` for which ``root_star -/+ eps (1 - ell)`` stays inside the root range."""
    rb = rolski_bounds(g, mu, C=C, p_k=p_k, convention=convention)
    eff = g.effective(p_k)
    ell = rb.lower
    terms = {
        "class_width": eff.width,
        "lower_gap": (root_star - ell) / (1.0 - ell),
        "upper_gap": (eff.g2 * (1.0 - root_star) - eff.g1**2 * (1.0 - ell)) / (eff.g2 * (1.0 - ell)),
    }
    diagnostic = None
    if not ell <= root_star <= rb.upper:
        diagnostic = f"root_star {root_star} outside the root range [{ell}, {rb.upper}]"
        return Admissibility(0.0, terms, ell, diagnostic)
    return Admissibility(max(0.0, min(terms.values())), terms, ell, diagnostic)


def remark1_adjusted_ell(
    g1_upper: float, mu: float, g2_lower: float | None = None
) -> RootReport:
    """Lower root bound when only an upper confidence limit on the mean is known."""
    if g2_lower is not None and not g2_lower > g1_upper**2:
        raise ClassValidityError(
            f"g2_lower = {g2_lower} must exceed g1_upper^2 = {g1_upper**2}"
        )
    return ell_root(g1_upper, mu)


def _marginal_second_moment(g1: float, eps1: float) -> float:
    """Second moment of the marginal class whose LST width equals ``eps1``."""
    return g1**2 / (1.0 - eps1)


def max_weighted_decay(g: MomentClass, s: float, grid: int = 1500) -> float:
    """Upper bound on ``E[X exp(-s X)]`` over laws with mean ``g1`` and second moment ``g2``.

    Solved as a linear program over point masses on a grid.  Mass escaping
    to infinity can carry second moment without mean, so the second-moment
    constraint is relaxed to ``<=``; that closure has the same supremum.
    The grid optimum is padded by the largest jump of ``x exp(-s x)``
    between neighbouring nodes.
    """
    return _max_weighted_decay(g.g1, g.g2, float(s), int(grid))


@lru_cache(maxsize=1024)
def _max_weighted_decay(g1: float, g2: float, s: float, grid: int) -> float:
    if not s > 0:
        return g1
    scale = max(1.0 / s, g2 / g1)
    x = np.unique(np.concatenate([
        np.linspace(0.0, 4.0 * scale, grid),
        np.geomspace(4.0 * scale, 1e3 * scale, grid // 5),
        [g1],  # keeps the point mass at g1 feasible
    ]))
    h = x * np.exp(-s * x)
    res = linprog(
        -h,
        A_ub=(x**2)[None, :],
        b_ub=[g2],
        A_eq=np.vstack([np.ones_like(x), x]),
        b_eq=[1.0, g1],
        bounds=(0, None),
        method="highs",
    )
    if not res.success:
        raise NumericalError(f"moment LP failed: {res.message}")
    pad = float(np.max(np.abs(np.diff(h))))
    return min(g1, 1.0 / (np.e * s), -res.fun + pad)
