"""Least roots of Takacs-type fixed-point equations.

The central equation is ``z = G(mu - mu z**C)`` with ``G`` the LST of a
positive law.  For ``mu * C * mean > 1`` the map ``Psi(z) = G(mu - mu z**C) - z``
is convex on [0, 1] with ``Psi(0) > 0`` and ``Psi(1) = 0``, so it has exactly
one root in (0, 1) and bisection on the sign of ``Psi`` is safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .dist import Deterministic, Distribution, MomentClass
from .errors import ModelAssumptionError, NumericalError, StabilityError

__all__ = [
    "RootReport",
    "BoundaryM",
    "takacs_root",
    "ell_root",
    "boundary_m",
    "NEAR_CRITICAL",
]

BRACKET_WIDTH = 1e-14
RESIDUAL_TOL = 1e-12
NEWTON_STEPS = 3
HI_START = 1.0 - 1e-9
NEAR_CRITICAL = 1e-6
MAX_BISECTIONS = 200


@dataclass(frozen=True)
class RootReport:
    root: float
    residual: float
    iterations: int
    bracket: tuple[float, float]
    warnings: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "root": self.root,
            "residual": self.residual,
            "iterations": self.iterations,
            "bracket": list(self.bracket),
            "warnings": list(self.warnings),
        }


@dataclass(frozen=True)
class BoundaryM:
    """Mean ``m`` whose deterministic root equals the class's upper root bound."""

    m: float
    target: float
    report: RootReport

    def to_dict(self) -> dict:
        return {"m": self.m, "target": self.target, "root": self.report.to_dict()}


def _solve(
    psi: Callable[[float], float],
    dpsi: Callable[[float], float] | None,
    label: str,
) -> RootReport:
    """Root of a function positive at 0 and negative just below 1."""
    lo, hi = 0.0, HI_START
    if not psi(lo) > 0:
        raise NumericalError(f"{label}: Psi(0) = {psi(lo)} is not positive")
    # shrink hi away from the trivial root at 1 until Psi(hi) < 0
    step = 1e-9
    while psi(hi) >= 0:
        step *= 2.0
        hi = 1.0 - step
        if hi <= lo:
            raise StabilityError(f"{label}: no interior root in (0, 1)")
    iterations = 0
    while hi - lo > BRACKET_WIDTH and iterations < MAX_BISECTIONS:
        mid = 0.5 * (lo + hi)
        if psi(mid) > 0:
            lo = mid
        else:
            hi = mid
        iterations += 1
    z = 0.5 * (lo + hi)
    if dpsi is not None:
        for _ in range(NEWTON_STEPS):
            slope = dpsi(z)
            if slope == 0 or not math.isfinite(slope):
                break
            nz = z - psi(z) / slope
            if not lo - BRACKET_WIDTH <= nz <= hi + BRACKET_WIDTH:
                break
            z = nz
            iterations += 1
    residual = psi(z)
    if not abs(residual) < RESIDUAL_TOL:
        raise NumericalError(f"{label}: residual {residual:.3e} after {iterations} iterations")
    return RootReport(root=z, residual=residual, iterations=iterations, bracket=(lo, hi))


def takacs_root(d: Distribution, mu: float, C: int = 1) -> RootReport:
    """Least root in (0, 1) of ``z = lst(d, mu - mu z**C)``."""
    if not mu > 0:
        raise ModelAssumptionError(f"rate must be positive, got {mu}")
    if int(C) != C or C < 1:
        raise ModelAssumptionError(f"batch size C must be a positive integer, got {C}")
    load = mu * d.mean() * C
    if not load > 1:
        raise StabilityError(f"stability requires mu*C*mean > 1, got {load:.6g}")

    def psi(z):
        return float(d.lst(mu - mu * z**C)) - z

    def dpsi(z):
        return -mu * C * z ** (C - 1) * float(d.lst_derivative(mu - mu * z**C)) - 1.0

    report = _solve(psi, dpsi, "takacs_root")
    if load - 1 < NEAR_CRITICAL:
        msg = f"near-critical load mu*C*mean - 1 = {load - 1:.3e}; root is ill-conditioned"
        report = RootReport(report.root, report.residual, report.iterations, report.bracket, (msg,))
    return report


def ell_root(
    g1: float,
    mu: float,
    C: int = 1,
    p_k: float = 1.0,
    convention: str = "consistent",
) -> RootReport:
    """Root of the extremal (deterministic-law) equation.

    ``convention="consistent"`` solves ``z = exp(-(mu g1/p_k)(1 - z**C))``,
    i.e. the Takacs equation of a point mass at ``g1/p_k``.
    ``convention="printed"`` solves ``z = exp(-(mu g1 + mu g1 z**C)/p_k)``,
    whose right-hand side is decreasing, so its unique fixed point is found
    by plain bisection.
    """
    if not 0.0 < p_k <= 1.0:
        raise ModelAssumptionError(f"p_k must lie in (0, 1], got {p_k}")
    if convention == "consistent":
        return takacs_root(Deterministic(g1 / p_k), mu, C)
    if convention != "printed":
        raise ValueError(f"unknown convention {convention!r}")
    a = mu * g1 / p_k

    def psi(z):
        return math.exp(-a * (1.0 + z**C)) - z

    def dpsi(z):
        return -a * C * z ** (C - 1) * math.exp(-a * (1.0 + z**C)) - 1.0

    return _solve(psi, dpsi, "ell_root(printed)")


def boundary_m(g: MomentClass, mu: float) -> BoundaryM:
    """Find ``m`` in (1/mu, g1] with ``ell_root(m, mu) = 1 + (g1^2/g2)(ell - 1)``.

    The deterministic root decreases in ``m``, so an outer bisection on
    ``m`` converges.
    """
    if not mu * g.g1 > 1:
        raise StabilityError(f"mu*g1 must exceed 1, got {mu * g.g1:.6g}")
    ell = ell_root(g.g1, mu).root
    target = 1.0 + g.ratio * (ell - 1.0)
    if not ell <= target < 1.0:
        raise ModelAssumptionError(f"infeasible target root {target} (ell = {ell})")
    if g.trivial or target - ell < 1e-15:
        return BoundaryM(g.g1, target, ell_root(g.g1, mu))
    lo, hi = 1.0 / mu, g.g1  # ell(lo) -> 1 > target, ell(hi) = ell <= target
    m = 0.5 * (lo + hi)
    for _ in range(200):
        m = 0.5 * (lo + hi)
        if m * mu - 1 < 1e-14:
            lo = m
            continue
        r = ell_root(m, mu).root
        if abs(r - target) < 1e-13 or hi - lo < 1e-15 * hi:
            break
        if r > target:
            lo = m
        else:
            hi = m
    report = ell_root(m, mu)
    if abs(report.root - target) > 1e-10:
        raise NumericalError(f"boundary_m: |ell(m) - target| = {abs(report.root - target):.3e}")
    return BoundaryM(m, target, report)
