"""Distributions of positive random variables and the Kolmogorov metric.

Every distribution exposes its CDF, Laplace-Stieltjes transform (LST) and
LST derivative, the first two raw moments, and enough structure (atoms and
the density of the absolutely continuous part) to compute the uniform
distance between two laws exactly up to root-finding tolerance.

All evaluation methods accept scalars or numpy arrays and return the same
shape.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import optimize, special

from .errors import InvalidInputError

__all__ = [
    "Distribution",
    "Exponential",
    "Deterministic",
    "Erlang",
    "HyperExponential",
    "TwoPointGMax",
    "Empirical",
    "Mixture",
    "MomentClass",
    "cdf",
    "lst",
    "lst_derivative",
    "kolmogorov_distance",
    "kolmogorov_limit_cdf",
    "in_class_mixture",
    "empirical_from_samples",
]

_MOMENT_RTOL = 1e-9


def _shaped(x, values):
    """Return a Python float for scalar input, the array otherwise."""
    if np.ndim(x) == 0:
        return float(values)
    return values


class Distribution(ABC):
    """A probability law on the positive half-line."""

    kind: str = "abstract"

    @abstractmethod
    def cdf(self, x):
        """P{X <= x}; right-continuous."""

    @abstractmethod
    def lst(self, s):
        """E exp(-sX)."""

    @abstractmethod
    def lst_derivative(self, s):
        """d/ds E exp(-sX) = -E X exp(-sX)."""

    @abstractmethod
    def mean(self) -> float: ...

    @abstractmethod
    def second_moment(self) -> float: ...

    @abstractmethod
    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray: ...

    @abstractmethod
    def to_dict(self) -> dict: ...

    def density(self, x):
        """Density of the absolutely continuous part (zero for atomic laws)."""
        return _shaped(x, np.zeros(np.shape(x)))

    def atoms(self) -> tuple[np.ndarray, np.ndarray]:
        """Locations and masses of the point masses."""
        return np.empty(0), np.empty(0)

    @property
    def has_density(self) -> bool:
        return False

    def tail_point(self) -> float:
        """A point beyond which the continuous part carries negligible mass."""
        return 0.0

    def moment_class(self) -> "MomentClass":
        return MomentClass(self.mean(), self.second_moment())

    def cdf_left(self, x):
        """Left limit P{X < x}."""
        x = np.asarray(x, dtype=float)
        return self.cdf(np.nextafter(x, -np.inf))


@dataclass(frozen=True)
class Exponential(Distribution):
    rate: float
    kind = "exponential"

    def __post_init__(self):
        if not self.rate > 0:
            raise InvalidInputError(f"exponential rate must be positive, got {self.rate}")

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return _shaped(x, np.where(x < 0, 0.0, -np.expm1(-self.rate * np.maximum(x, 0.0))))

    def density(self, x):
        x = np.asarray(x, dtype=float)
        return _shaped(x, np.where(x < 0, 0.0, self.rate * np.exp(-self.rate * np.maximum(x, 0.0))))

    def lst(self, s):
        s = np.asarray(s, dtype=float)
        return _shaped(s, self.rate / (self.rate + s))

    def lst_derivative(self, s):
        s = np.asarray(s, dtype=float)
        return _shaped(s, -self.rate / (self.rate + s) ** 2)

    def mean(self) -> float:
        return 1.0 / self.rate

    def second_moment(self) -> float:
        return 2.0 / self.rate**2

    @property
    def has_density(self) -> bool:
        return True

    def tail_point(self) -> float:
        return 50.0 / self.rate

    def sample(self, rng, size):
        return rng.exponential(1.0 / self.rate, size)

    def to_dict(self):
        return {"kind": self.kind, "rate": self.rate}


@dataclass(frozen=True)
class Deterministic(Distribution):
    value: float
    kind = "deterministic"

    def __post_init__(self):
        if not self.value > 0:
            raise InvalidInputError(f"deterministic value must be positive, got {self.value}")

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return _shaped(x, (x >= self.value).astype(float))

    def lst(self, s):
        s = np.asarray(s, dtype=float)
        return _shaped(s, np.exp(-s * self.value))

    def lst_derivative(self, s):
        s = np.asarray(s, dtype=float)
        return _shaped(s, -self.value * np.exp(-s * self.value))

    def mean(self) -> float:
        return self.value

    def second_moment(self) -> float:
        return self.value**2

    def atoms(self):
        return np.array([self.value]), np.array([1.0])

    def sample(self, rng, size):
        return np.full(size, self.value)

    def to_dict(self):
        return {"kind": self.kind, "value": self.value}


@dataclass(frozen=True)
class Erlang(Distribution):
    shape: int
    rate: float
    kind = "erlang"

    def __post_init__(self):
        if int(self.shape) != self.shape or self.shape < 1:
            raise InvalidInputError(f"erlang shape must be a positive integer, got {self.shape}")
        if not self.rate > 0:
            raise InvalidInputError(f"erlang rate must be positive, got {self.rate}")
        object.__setattr__(self, "shape", int(self.shape))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return _shaped(x, special.gammainc(self.shape, self.rate * np.maximum(x, 0.0)))

    def density(self, x):
        x = np.asarray(x, dtype=float)
        xp = np.maximum(x, 0.0)
        k = self.shape
        with np.errstate(divide="ignore"):
            logd = (
                k * math.log(self.rate)
                + (k - 1) * np.log(np.where(xp > 0, xp, 1.0))
                - self.rate * xp
                - math.lgamma(k)
            )
        d = np.exp(logd)
        if k > 1:
            d = np.where(xp > 0, d, 0.0)
        return _shaped(x, np.where(x < 0, 0.0, d))

    def lst(self, s):
        s = np.asarray(s, dtype=float)
        return _shaped(s, (self.rate / (self.rate + s)) ** self.shape)

    def lst_derivative(self, s):
        s = np.asarray(s, dtype=float)
        k, r = self.shape, self.rate
        return _shaped(s, -k * r**k / (r + s) ** (k + 1))

    def mean(self) -> float:
        return self.shape / self.rate

    def second_moment(self) -> float:
        return self.shape * (self.shape + 1) / self.rate**2

    @property
    def has_density(self) -> bool:
        return True

    def tail_point(self) -> float:
        return (self.shape + 10.0 * math.sqrt(self.shape) + 40.0) / self.rate

    def sample(self, rng, size):
        return rng.gamma(self.shape, 1.0 / self.rate, size)

    def to_dict(self):
        return {"kind": self.kind, "shape": self.shape, "rate": self.rate}


@dataclass(frozen=True)
class HyperExponential(Distribution):
    weights: tuple[float, ...]
    rates: tuple[float, ...]
    kind = "hyperexponential"

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        r = tuple(float(v) for v in self.rates)
        if len(w) != len(r) or not w:
            raise InvalidInputError("hyperexponential needs equally many weights and rates")
        if any(v <= 0 for v in w) or any(v <= 0 for v in r):
            raise InvalidInputError("hyperexponential weights and rates must be positive")
        if abs(sum(w) - 1.0) > 1e-12:
            raise InvalidInputError(f"hyperexponential weights sum to {sum(w)}, not 1")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "rates", r)

    @classmethod
    def fit(cls, g1: float, g2: float, balance: float = 0.5) -> "HyperExponential":
        """Two-phase law with moments (g1, g2); needs g2 > 2 g1**2.

        ``balance`` in (0, 1) is the share of the mean carried by phase one;
        0.5 gives the usual balanced-means fit.
        """
        if not g2 > 2 * g1**2:
            raise InvalidInputError("two-phase hyperexponential fit requires g2 > 2 g1^2")
        # phase means m_i, weights w_i with w1 m1 = balance g1, w2 m2 = (1-balance) g1,
        # and 2 (w1 m1^2 + w2 m2^2) = g2; solve for w1.
        b = balance
        wants = g2 / (2 * g1**2)
        # b^2/w1 + (1-b)^2/(1-w1) = wants
        f = lambda w1: b**2 / w1 + (1 - b) ** 2 / (1 - w1) - wants
        w1 = optimize.brentq(f, 1e-15, b, xtol=1e-15) if f(1e-15) * f(b) < 0 else b
        m1, m2 = b * g1 / w1, (1 - b) * g1 / (1 - w1)
        return cls((w1, 1 - w1), (1 / m1, 1 / m2))

    def _terms(self, s):
        s = np.asarray(s, dtype=float)
        return s, np.asarray(self.weights), np.asarray(self.rates)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        xp = np.maximum(x, 0.0)[..., None]
        w, r = np.asarray(self.weights), np.asarray(self.rates)
        return _shaped(x, np.where(x < 0, 0.0, -np.expm1(-r * xp) @ w))

    def density(self, x):
        x = np.asarray(x, dtype=float)
        xp = np.maximum(x, 0.0)[..., None]
        w, r = np.asarray(self.weights), np.asarray(self.rates)
        return _shaped(x, np.where(x < 0, 0.0, (r * np.exp(-r * xp)) @ w))

    def lst(self, s):
        s, w, r = self._terms(s)
        return _shaped(s, (r / (r + s[..., None])) @ w)

    def lst_derivative(self, s):
        s, w, r = self._terms(s)
        return _shaped(s, (-r / (r + s[..., None]) ** 2) @ w)

    def mean(self) -> float:
        return float(sum(w / r for w, r in zip(self.weights, self.rates)))

    def second_moment(self) -> float:
        return float(sum(2 * w / r**2 for w, r in zip(self.weights, self.rates)))

    @property
    def has_density(self) -> bool:
        return True

    def tail_point(self) -> float:
        return 50.0 / min(self.rates)

    def sample(self, rng, size):
        phase = rng.choice(len(self.weights), size=size, p=self.weights)
        return rng.exponential(1.0, size) / np.asarray(self.rates)[phase]

    def to_dict(self):
        return {"kind": self.kind, "weights": list(self.weights), "rates": list(self.rates)}


@dataclass(frozen=True)
class TwoPointGMax(Distribution):
    """Extremal law of the class (g1, g2) maximising the LST.

    Mass ``1 - g1**2/g2`` sits at 0 and mass ``g1**2/g2`` at ``g2/g1``.
    """

    g1: float
    g2: float
    kind = "gmax"

    def __post_init__(self):
        MomentClass(self.g1, self.g2)

    @property
    def _a(self) -> float:
        return self.g1**2 / self.g2

    @property
    def _far(self) -> float:
        return self.g2 / self.g1

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        a = self._a
        return _shaped(x, np.where(x < 0, 0.0, np.where(x < self._far, 1.0 - a, 1.0)))

    def lst(self, s):
        s = np.asarray(s, dtype=float)
        a = self._a
        return _shaped(s, 1.0 - a + a * np.exp(-self._far * s))

    def lst_derivative(self, s):
        s = np.asarray(s, dtype=float)
        a = self._a
        return _shaped(s, -a * self._far * np.exp(-self._far * s))

    def mean(self) -> float:
        return self.g1

    def second_moment(self) -> float:
        return self.g2

    def atoms(self):
        a = self._a
        if a >= 1.0:
            return np.array([self._far]), np.array([1.0])
        return np.array([0.0, self._far]), np.array([1.0 - a, a])

    def sample(self, rng, size):
        return np.where(rng.random(size) < self._a, self._far, 0.0)

    def to_dict(self):
        return {"kind": self.kind, "g1": self.g1, "g2": self.g2}


@dataclass(frozen=True, eq=False)
class Empirical(Distribution):
    """Empirical measure of a positive sample."""

    samples: np.ndarray = field(repr=False)
    kind = "empirical"

    def __post_init__(self):
        x = np.sort(np.asarray(self.samples, dtype=float).ravel())
        if x.size == 0:
            raise InvalidInputError("empirical distribution needs at least one sample")
        if not np.all(np.isfinite(x)) or x[0] <= 0:
            raise InvalidInputError("empirical samples must be finite and strictly positive")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)

    def __len__(self):
        return self.samples.size

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return _shaped(x, np.searchsorted(self.samples, x, side="right") / self.samples.size)

    def _average(self, s, fn):
        s = np.asarray(s, dtype=float)
        flat = s.ravel()
        out = np.empty(flat.size)
        step = max(1, 4_000_000 // self.samples.size)
        for i in range(0, flat.size, step):
            out[i : i + step] = fn(np.outer(flat[i : i + step], self.samples)).mean(axis=1)
        return _shaped(s, out.reshape(s.shape))

    def lst(self, s):
        return self._average(s, lambda sx: np.exp(-sx))

    def lst_derivative(self, s):
        x = self.samples
        return self._average(s, lambda sx: -x * np.exp(-sx))

    def mean(self) -> float:
        return float(self.samples.mean())

    def second_moment(self) -> float:
        return float(np.mean(self.samples**2))

    def atoms(self):
        loc, counts = np.unique(self.samples, return_counts=True)
        return loc, counts / self.samples.size

    def sample(self, rng, size):
        return rng.choice(self.samples, size=size, replace=True)

    def to_dict(self):
        return {"kind": self.kind, "n": int(self.samples.size), "mean": self.mean(),
                "second_moment": self.second_moment()}


@dataclass(frozen=True)
class Mixture(Distribution):
    """``p * left + (1 - p) * right``."""

    p: float
    left: Distribution
    right: Distribution
    kind = "mixture"

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise InvalidInputError(f"mixture weight must lie in [0, 1], got {self.p}")

    def _mix(self, a, b):
        return self.p * np.asarray(a) + (1.0 - self.p) * np.asarray(b)

    def cdf(self, x):
        return _shaped(x, self._mix(self.left.cdf(x), self.right.cdf(x)))

    def density(self, x):
        return _shaped(x, self._mix(self.left.density(x), self.right.density(x)))

    def lst(self, s):
        return _shaped(s, self._mix(self.left.lst(s), self.right.lst(s)))

    def lst_derivative(self, s):
        return _shaped(s, self._mix(self.left.lst_derivative(s), self.right.lst_derivative(s)))

    def mean(self) -> float:
        return float(self._mix(self.left.mean(), self.right.mean()))

    def second_moment(self) -> float:
        return float(self._mix(self.left.second_moment(), self.right.second_moment()))

    def atoms(self):
        la, lm = self.left.atoms()
        ra, rm = self.right.atoms()
        loc = np.concatenate([la, ra])
        mass = np.concatenate([self.p * lm, (1.0 - self.p) * rm])
        if loc.size == 0:
            return loc, mass
        uniq, inv = np.unique(loc, return_inverse=True)
        return uniq, np.bincount(inv, weights=mass)

    @property
    def has_density(self) -> bool:
        return self.left.has_density or self.right.has_density

    def tail_point(self) -> float:
        return max(self.left.tail_point(), self.right.tail_point())

    def sample(self, rng, size):
        pick = rng.random(size) < self.p
        out = np.empty(size)
        k = int(pick.sum())
        out[pick] = self.left.sample(rng, k)
        out[~pick] = self.right.sample(rng, size - k)
        return out

    def to_dict(self):
        return {"kind": self.kind, "p": self.p, "left": self.left.to_dict(),
                "right": self.right.to_dict()}


@dataclass(frozen=True)
class MomentClass:
    """The class of positive laws with first moment g1 and second moment g2."""

    g1: float
    g2: float

    def __post_init__(self):
        if not self.g1 > 0:
            raise InvalidInputError(f"first moment must be positive, got {self.g1}")
        if not self.g2 >= self.g1**2 * (1.0 - 1e-12):
            raise InvalidInputError(
                f"second moment {self.g2} is below the squared mean {self.g1**2}"
            )

    @property
    def ratio(self) -> float:
        """g1**2 / g2, in (0, 1]."""
        return min(1.0, self.g1**2 / self.g2)

    @property
    def width(self) -> float:
        """Largest possible LST gap inside the class, 1 - g1**2/g2."""
        return 1.0 - self.ratio

    @property
    def trivial(self) -> bool:
        return self.g2 <= self.g1**2

    def effective(self, p_k: float) -> "MomentClass":
        """Moments of the geometric thinning with retention probability ``p_k``."""
        if not 0.0 < p_k <= 1.0:
            raise InvalidInputError(f"thinning probability must lie in (0, 1], got {p_k}")
        return MomentClass(self.g1 / p_k, (2 * (1 - p_k) * self.g1**2 + p_k * self.g2) / p_k**2)

    def contains(self, d: Distribution, rtol: float = _MOMENT_RTOL) -> bool:
        return math.isclose(d.mean(), self.g1, rel_tol=rtol) and math.isclose(
            d.second_moment(), self.g2, rel_tol=rtol
        )


def cdf(d: Distribution, x):
    return d.cdf(x)


def lst(d: Distribution, s):
    return d.lst(s)


def lst_derivative(d: Distribution, s):
    return d.lst_derivative(s)


def _distance_candidates(a: Distribution, b: Distribution) -> np.ndarray:
    la, _ = a.atoms()
    lb, _ = b.atoms()
    return np.unique(np.concatenate([[0.0], la, lb]))


def kolmogorov_distance(a: Distribution, b: Distribution, tol: float = 1e-10) -> float:
    """sup over x > 0 of |A(x) - B(x)|.

    The supremum of a difference of right-continuous CDFs is attained either
    at an atom (from the right or from the left) or at a stationary point of
    the continuous part, where the density difference changes sign.  Atoms
    are checked exactly; stationary points are bracketed on a grid and
    located with Brent's method.
    """
    if a is b:
        return 0.0
    pts = _distance_candidates(a, b)
    best = float(np.max(np.abs(a.cdf(pts) - b.cdf(pts))))
    inner = pts[pts > 0]
    if inner.size:
        best = max(best, float(np.max(np.abs(a.cdf_left(inner) - b.cdf_left(inner)))))

    if a.has_density or b.has_density:
        top = max(a.tail_point(), b.tail_point(), float(pts[-1]))
        grid = np.unique(
            np.concatenate([pts, np.linspace(0.0, top, 4001), np.geomspace(top * 1e-9, top, 2001)])
        )
        best = max(best, float(np.max(np.abs(a.cdf(grid) - b.cdf(grid)))))
        dd = lambda x: a.density(x) - b.density(x)
        g = dd(grid)
        idx = np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0)[0]
        for i in idx:
            x = optimize.brentq(dd, grid[i], grid[i + 1], xtol=tol, rtol=4 * np.finfo(float).eps)
            best = max(best, abs(float(a.cdf(x) - b.cdf(x))))
    return min(1.0, best)


def kolmogorov_limit_cdf(z: float) -> float:
    """Limiting law of sqrt(N) * sup |G_emp - G|.

    Uses the alternating series for moderate and large ``z`` and its
    theta-function dual for small ``z``, where the alternating form
    suffers from cancellation.
    """
    if z <= 0:
        return 0.0
    if z < 0.5:
        total = 0.0
        c = math.pi**2 / (8.0 * z * z)
        j = 1
        while True:
            term = math.exp(-((2 * j - 1) ** 2) * c)
            total += term
            if term < 1e-16 * max(total, 1e-300) or term == 0.0:
                break
            j += 1
        return min(1.0, math.sqrt(2.0 * math.pi) / z * total)
    total = 1.0
    j = 1
    while True:
        term = math.exp(-2.0 * j * j * z * z)
        if term < 1e-16:
            break
        total += 2.0 * (-1) ** j * term
        j += 1
    return min(1.0, total)


def in_class_mixture(g: MomentClass, f: Distribution, base: Distribution, p: float) -> Mixture:
    """Mixture ``p f + (1 - p) base`` of two members of the class ``g``.

    Both components must carry the moments of ``g``; the result then does
    too, and lies within Kolmogorov distance ``p`` of ``base``.
    """
    if not 0.0 < p < 1.0:
        raise InvalidInputError(f"mixture weight must lie in (0, 1), got {p}")
    for name, d in (("f", f), ("base", base)):
        if not g.contains(d):
            raise InvalidInputError(
                f"{name} has moments ({d.mean()}, {d.second_moment()}), expected ({g.g1}, {g.g2})"
            )
    return Mixture(p, f, base)


def empirical_from_samples(samples: Iterable[float] | Sequence[float]) -> tuple[Empirical, MomentClass]:
    x = np.asarray(list(samples) if not isinstance(samples, np.ndarray) else samples, dtype=float)
    if x.size < 2:
        raise InvalidInputError("at least two samples are required")
    emp = Empirical(x)
    return emp, MomentClass(emp.mean(), emp.second_moment())
