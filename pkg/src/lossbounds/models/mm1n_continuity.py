"""Continuity of the M/M/1/n loss probability under perturbed interarrival laws.

The interarrival law is ``p F + (1 - p) Exp(lam)`` with ``F`` close to
memoryless in the sense that the residual-life CDFs of ``F`` stay within
``epsilon`` of ``F`` itself.  Under condition "A" that puts ``F`` within
``2 epsilon`` of ``Exp(lam)``; under "B" (``F`` NBU or NWU) within ``epsilon``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import InvalidInputError, ModelAssumptionError
from ..roots import ell_root
from ._envelope import BoundEnvelope, finish


@dataclass(frozen=True)
class ContinuityConfig:
    lam: float
    mu: float
    n: int
    p: float
    epsilon: float
    sigma2: float
    condition: str = "A"

    def __post_init__(self):
        if self.condition not in ("A", "B"):
            raise InvalidInputError(f"condition must be 'A' or 'B', got {self.condition!r}")
        if not (self.lam > 0 and self.mu > 0):
            raise InvalidInputError("rates must be positive")
        if int(self.n) != self.n or self.n < 1:
            raise InvalidInputError(f"capacity n must be a positive integer, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise InvalidInputError(f"mixture weight must lie in [0, 1], got {self.p}")
        if not self.epsilon >= 0:
            raise InvalidInputError(f"epsilon must be nonnegative, got {self.epsilon}")
        if not self.sigma2 > 1.0 / self.lam**2:
            raise ModelAssumptionError(
                f"sigma^2 = {self.sigma2} must exceed 1/lambda^2 = {1.0 / self.lam**2}"
            )
        if not self.rho < 1:
            raise ModelAssumptionError(f"rho = lambda/mu = {self.rho:.6g} must be below 1")

    @property
    def rho(self) -> float:
        return self.lam / self.mu

    @property
    def distance_factor(self) -> float:
        """Multiplier turning ``epsilon`` into a Kolmogorov distance from ``Exp(lam)``."""
        return (2.0 if self.condition == "A" else 1.0) * self.p


def mm1n_exact_loss(rho: float, n: int) -> float:
    """Exact M/M/1/n loss probability (``n`` places in total)."""
    if rho == 1.0:
        return 1.0 / (n + 1)
    return (1.0 - rho) * rho**n / (1.0 - rho ** (n + 1))


def mm1n_continuity_envelope(cfg: ContinuityConfig, shift: str = "printed") -> BoundEnvelope:
    """Lower and upper large-``n`` loss levels around the M/M/1/n value.

    ``shift="printed"`` moves the root by ``q eps_i (1 - ell)`` with
    ``q = 2p`` (condition A) or ``p`` (B) and the clipped distances
    ``eps_i``; ``shift="direct"`` moves it by ``eps_i`` itself.
    """
    ell = ell_root(1.0 / cfg.lam, cfg.mu).root
    rho = cfg.rho
    if not rho - ell >= -1e-12:
        raise ModelAssumptionError(f"rho = {rho} below the deterministic root {ell}")
    q = cfg.distance_factor
    base = q * cfg.epsilon * (1.0 - ell)
    upper_room = 1.0 + (ell - 1.0) / (1.0 + cfg.lam**2 * cfg.sigma2) - rho
    down = min(rho - ell, base)
    up = min(upper_room, base)
    if shift == "printed":
        r_minus = rho - q * down * (1.0 - ell)
        r_plus_low = rho + q * down * (1.0 - ell)
        r_plus = rho + q * up * (1.0 - ell)
    elif shift == "direct":
        r_minus, r_plus_low, r_plus = rho - down, rho + down, rho + up
    else:
        raise InvalidInputError(f"unknown shift {shift!r}")
    e = math.exp(-1.0 / rho)
    n = cfg.n
    tm = e * r_minus**n
    lower = (1.0 - rho) * tm / ((1.0 - rho) * r_plus_low - rho * tm)
    tp = r_plus**n
    upper = (1.0 - rho) * tp / (1.0 - rho - rho * tp)
    label = "eps1/eps2" if cfg.condition == "A" else "eps3/eps4"
    return finish(
        lower, upper, f"condition {cfg.condition}",
        {"down": down, "up": up, "rho_minus_ell": rho - ell, "upper_room": upper_room},
        (),
        {"ell": ell, "rho": rho, "root_minus": r_minus, "root_plus": r_plus,
         "distances": label, "shift": shift},
    )
