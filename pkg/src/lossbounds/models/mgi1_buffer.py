"""Overloaded M/GI/1 batch buffer with overflow and transmission-error losses."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..bounds import epsilon_admissible
from ..dist import Distribution, MomentClass
from ..errors import AdmissibilityError, InvalidInputError, ModelAssumptionError
from ..roots import takacs_root
from ._envelope import BoundEnvelope, finish


@dataclass(frozen=True)
class MGI1BufferConfig:
    lam: float
    service: Distribution
    N: float
    c: float
    nu_lower: int
    nu_upper: int
    p: float

    def __post_init__(self):
        if not self.lam > 0:
            raise InvalidInputError(f"batch arrival rate must be positive, got {self.lam}")
        if not self.N > 0:
            raise InvalidInputError(f"buffer capacity must be positive, got {self.N}")
        if not 1 <= self.nu_lower <= self.c <= self.nu_upper:
            raise InvalidInputError(
                f"batch sizes need 1 <= nu_lower <= c <= nu_upper, got "
                f"{self.nu_lower}, {self.c}, {self.nu_upper}"
            )
        if not 0.0 <= self.p <= 1.0:
            raise InvalidInputError(f"error probability must lie in [0, 1], got {self.p}")
        if not self.rho > 1:
            raise ModelAssumptionError(f"the buffer model assumes rho = lambda b > 1, got {self.rho:.6g}")

    @property
    def rho(self) -> float:
        return self.lam * self.service.mean()


def _loss_form(rho: float, p: float, y: float) -> float:
    return (p + rho - 1.0) / rho * ((rho - 1.0) + p * y) / ((rho - 1.0) + y)


def mgi1_buffer_loss(cfg: MGI1BufferConfig, form: str = "derivative", beta: float | None = None) -> float:
    """Large-``N`` batch loss probability.

    ``form="derivative"`` weights ``beta**(N/c)`` with ``1 + lam B'(lam - lam beta)``;
    ``form="printed"`` uses ``1 + lam B(lam - lam beta)`` instead.
    """
    b = takacs_root(cfg.service, cfg.lam).root if beta is None else beta
    s = cfg.lam - cfg.lam * b
    if form == "derivative":
        X = 1.0 + cfg.lam * float(cfg.service.lst_derivative(s))
    elif form == "printed":
        X = 1.0 + cfg.lam * float(cfg.service.lst(s))
    else:
        raise InvalidInputError(f"unknown form {form!r}")
    return _loss_form(cfg.rho, cfg.p, X * b ** (cfg.N / cfg.c))


def mgi1_buffer_envelope(
    g: MomentClass,
    lam: float,
    p: float,
    N: float,
    c: float,
    beta_star: float,
    epsilon: float,
) -> BoundEnvelope:
    """Bounds on the batch loss probability when the service law is known up to ``epsilon``."""
    rho = lam * g.g1
    if not rho > 1:
        raise ModelAssumptionError(f"the buffer model assumes rho = lambda g1 > 1, got {rho:.6g}")
    adm = epsilon_admissible(g, lam, beta_star)
    if not epsilon < adm.epsilon_max:
        raise AdmissibilityError(
            f"epsilon {epsilon} violates the admissibility bound {adm.epsilon_max}", adm.terms
        )
    ell = adm.ell
    b_minus = beta_star - epsilon + epsilon * ell
    b_plus = beta_star + epsilon - epsilon * ell
    e = math.exp(-lam * g.g1)
    pref = (p + rho - 1.0) / rho
    base = (rho - 1.0) * b_plus
    k = N / c
    lower = pref * (base + p * e * b_minus**k) / (base + b_plus ** (k + 1))
    upper = pref * (base + p * b_plus ** (k + 1)) / (base + e * b_minus**k)
    return finish(
        lower, upper, "refined", adm.terms, (),
        {"ell": ell, "beta_minus": b_minus, "beta_plus": b_plus, "rho": rho, "epsilon_max": adm.epsilon_max},
    )
