"""Discrete-event simulators for the loss models, used as empirical oracles.

Every run draws from a numpy ``PCG64`` stream derived from
``SeedSequence(seed, spawn_key=(crc32(stream),))`` so that a given
``RngSpec`` reproduces the same event sequence bit for bit.

Loss fractions are estimated after discarding the first 5% of arrivals,
with a 95% confidence half-width from 32 batch means.
"""

from __future__ import annotations

import math
import zlib
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from .dist import kolmogorov_limit_cdf
from .errors import InvalidInputError
from .models.gim1n import GIM1nConfig
from .models.mgi1_buffer import MGI1BufferConfig
from .models.priority_buffer import PriorityConfig

__all__ = [
    "ALGORITHM",
    "RngSpec",
    "SimEstimate",
    "simulate_gim1n",
    "simulate_mgi1_buffer",
    "simulate_priority",
    "ks_confidence_epsilon",
    "replicate",
]

ALGORITHM = "numpy.random.PCG64 via SeedSequence(seed, spawn_key=(crc32(stream),))"
WARMUP_FRACTION = 0.05
N_BATCHES = 32
MIN_EVENTS = 10_000


@dataclass(frozen=True)
class RngSpec:
    seed: int
    stream: str = "main"

    def generator(self) -> np.random.Generator:
        key = zlib.crc32(self.stream.encode("utf-8"))
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=(key,))))

    def child(self, label: str) -> "RngSpec":
        return RngSpec(self.seed, f"{self.stream}/{label}")


@dataclass(frozen=True)
class SimEstimate:
    point: float
    half_width: float
    arrivals: int
    losses: int
    seed: int
    stream: str = "main"
    batch_rates: tuple[float, ...] = field(default=(), repr=False)

    def merge(self, other: "SimEstimate") -> "SimEstimate":
        """Pool two estimates; counts add and batch means are concatenated."""
        rates = self.batch_rates + other.batch_rates
        arrivals = self.arrivals + other.arrivals
        losses = self.losses + other.losses
        return SimEstimate(
            point=losses / arrivals if arrivals else 0.0,
            half_width=_half_width(np.asarray(rates)),
            arrivals=arrivals,
            losses=losses,
            seed=self.seed,
            stream=self.stream if self.stream == other.stream else f"{self.stream}+{other.stream}",
            batch_rates=rates,
        )

    def covers(self, value: float, k: float = 3.0) -> bool:
        """Whether ``value`` lies within ``k`` half-widths of the point estimate."""
        return abs(self.point - value) <= k * self.half_width

    def to_dict(self) -> dict:
        return {
            "point": self.point,
            "half_width": self.half_width,
            "arrivals": self.arrivals,
            "losses": self.losses,
            "seed": self.seed,
            "stream": self.stream,
            "algorithm": ALGORITHM,
        }


def _half_width(rates: np.ndarray) -> float:
    if rates.size < 2:
        return math.inf
    sd = float(np.std(rates, ddof=1))
    return float(stats.t.ppf(0.975, rates.size - 1)) * sd / math.sqrt(rates.size)


def _estimate(lost: np.ndarray, rng: RngSpec) -> SimEstimate:
    """Batch-means estimate from a 0/1 loss indicator per arrival."""
    start = int(math.ceil(WARMUP_FRACTION * lost.size))
    kept = lost[start:]
    usable = kept.size - kept.size % N_BATCHES
    kept = kept[:usable]
    rates = kept.reshape(N_BATCHES, -1).mean(axis=1) if usable else np.empty(0)
    losses = int(kept.sum())
    return SimEstimate(
        point=losses / usable if usable else 0.0,
        half_width=_half_width(rates),
        arrivals=int(usable),
        losses=losses,
        seed=rng.seed,
        stream=rng.stream,
        batch_rates=tuple(float(r) for r in rates),
    )


def _require_events(count: int, what: str) -> None:
    if int(count) != count or count < MIN_EVENTS:
        raise InvalidInputError(f"need at least {MIN_EVENTS} {what}, got {count}")


def simulate_gim1n(cfg: GIM1nConfig, arrivals: int, rng: RngSpec) -> SimEstimate:
    """Renewal arrivals, exponential service, ``cfg.n`` places in total.

    While the server is busy, completions form a Poisson(mu) stream, so the
    number of departures in an interarrival gap ``T`` with ``q`` customers
    present is ``min(q, Poisson(mu T))``.
    """
    _require_events(arrivals, "arrivals")
    gen = rng.generator()
    gaps = cfg.arrival.sample(gen, arrivals)
    served = gen.poisson(cfg.mu * gaps)
    return _estimate(_gim1n_losses(served.tolist(), cfg.n), rng)


def _gim1n_losses(served: Sequence[int], n: int) -> np.ndarray:
    lost = bytearray(len(served))
    q = 0
    for i, d in enumerate(served):
        q = q - d if q > d else 0
        if q >= n:
            lost[i] = 1
        else:
            q += 1
    return np.frombuffer(bytes(lost), dtype=np.uint8)


def batch_size_law(nu_lower: int, nu_upper: int, c: float) -> tuple[tuple[int, int], tuple[float, float]]:
    """Two-point batch-size law on {nu_lower, nu_upper} with mean ``c``."""
    if not nu_lower <= c <= nu_upper:
        raise InvalidInputError(f"mean batch size {c} outside [{nu_lower}, {nu_upper}]")
    if nu_lower == nu_upper:
        return (nu_lower, nu_upper), (1.0, 0.0)
    w_up = (c - nu_lower) / (nu_upper - nu_lower)
    return (nu_lower, nu_upper), (1.0 - w_up, w_up)


def simulate_mgi1_buffer(
    cfg: MGI1BufferConfig, batches: int, rng: RngSpec, errors: str = "served"
) -> SimEstimate:
    """Poisson batch arrivals into a unit-capacity-``N`` buffer with FIFO batch service.

    A batch is admitted when the units already present plus its own size
    fit into ``N``.  With ``errors="served"`` a batch hit by a transmission
    error (probability ``p``) still occupies buffer and server and is
    counted as lost; with ``errors="rejected"`` it never joins.
    """
    _require_events(batches, "batches")
    if errors not in ("served", "rejected"):
        raise InvalidInputError(f"unknown error handling {errors!r}")
    gen = rng.generator()
    (lo, hi), (_, w_up) = batch_size_law(cfg.nu_lower, cfg.nu_upper, cfg.c)
    gaps = gen.exponential(1.0 / cfg.lam, batches)
    sizes = np.where(gen.random(batches) < w_up, hi, lo)
    service = cfg.service.sample(gen, batches)
    faulty = gen.random(batches) < cfg.p

    lost = bytearray(batches)
    inside: deque[tuple[float, int]] = deque()
    units = 0
    t = 0.0
    last_departure = 0.0
    N = cfg.N
    served_mode = errors == "served"
    for i, (gap, size, s, bad) in enumerate(
        zip(gaps.tolist(), sizes.tolist(), service.tolist(), faulty.tolist())
    ):
        t += gap
        while inside and inside[0][0] <= t:
            units -= inside.popleft()[1]
        if bad and not served_mode:
            lost[i] = 1
            continue
        if units + size > N:
            lost[i] = 1
            continue
        last_departure = (last_departure if last_departure > t else t) + s
        inside.append((last_departure, size))
        units += size
        if bad:
            lost[i] = 1
    return _estimate(np.frombuffer(bytes(lost), dtype=np.uint8), rng)


def remove_by_priority(counts: list[int], capacity: int) -> list[int]:
    """Let up to ``capacity`` customers leave, highest priority (index 0) first."""
    left = list(counts)
    for j, c in enumerate(left):
        if capacity <= 0:
            break
        take = c if c < capacity else capacity
        left[j] = c - take
        capacity -= take
    return left


def simulate_priority(cfg: PriorityConfig, departures: int, rng: RngSpec) -> list[SimEstimate]:
    """Typed renewal arrivals and Poisson(mu) group departures of up to ``C`` customers.

    The run covers ``ceil(departures * lam / mu)`` arrivals, i.e. the horizon
    over which ``departures`` departure epochs are expected.  Random numbers
    are drawn in the same order as :func:`simulate_gim1n`, so a single-type
    system with ``C = 1`` reproduces it exactly.
    """
    _require_events(departures, "departures")
    if len(cfg.capacities) != cfg.types:
        raise InvalidInputError("capacity vector length differs from the number of types")
    arrivals = int(math.ceil(departures * cfg.lam / cfg.mu))
    gen = rng.generator()
    gaps = cfg.interarrival.sample(gen, arrivals)
    epochs = gen.poisson(cfg.mu * gaps)
    if cfg.types == 1:
        kinds = np.zeros(arrivals, dtype=np.int64)
    else:
        kinds = gen.choice(cfg.types, size=arrivals, p=cfg.type_probs)

    l, C = cfg.types, cfg.C
    caps = cfg.capacities
    counts = [0] * l
    total = 0
    lost = bytearray(arrivals)
    for i, (m, j) in enumerate(zip(epochs.tolist(), kinds.tolist())):
        if m and total:
            room = m * C
            if room >= total:
                counts = [0] * l
                total = 0
            else:
                counts = remove_by_priority(counts, room)
                total -= room
        if counts[j] >= caps[j]:
            lost[i] = 1
        else:
            counts[j] += 1
            total += 1
    flags = np.frombuffer(bytes(lost), dtype=np.uint8)
    out = []
    for j in range(l):
        sub = rng.child(f"type{j + 1}")
        est = _estimate(flags[kinds == j], sub)
        out.append(replace(est, seed=rng.seed, stream=rng.stream if l == 1 else sub.stream))
    return out


def ks_confidence_epsilon(N: int, coverage: float) -> float:
    """Distance ``z/sqrt(N)`` with ``K(z) = coverage`` for the limiting KS law."""
    if N < 30:
        raise InvalidInputError(f"sample size {N} is too small for the limiting law (need >= 30)")
    if not 0.0 < coverage < 1.0:
        raise InvalidInputError(f"coverage must lie in (0, 1), got {coverage}")
    lo, hi = 0.0, 10.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if kolmogorov_limit_cdf(mid) < coverage:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    return 0.5 * (lo + hi) / math.sqrt(N)


def replicate(
    simulate: Callable[..., SimEstimate],
    cfg,
    count: int,
    rng: RngSpec,
    replications: int,
    workers: int = 1,
) -> SimEstimate:
    """Run independent replications on child streams and pool them."""
    specs = [rng.child(f"rep{r}") for r in range(replications)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda s: simulate(cfg, count, s), specs))
    else:
        results = [simulate(cfg, count, s) for s in specs]
    pooled = results[0]
    for r in results[1:]:
        pooled = pooled.merge(r)
    return pooled
