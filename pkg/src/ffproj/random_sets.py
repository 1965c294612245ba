"""Percolation on F_p^n: seeded random subsets and projection statistics.

The model Omega(F_p^n, delta) keeps each point independently with
probability delta.  Sampling is counter-based: trial t of a model with seed
s draws its per-point uniforms from a Philox stream keyed by (s, t), so any
trial can be regenerated bit-for-bit without replaying earlier trials.

With delta = p^(s-n) the sample has ~p^s points, and the image of a sample
along W in G(n, n-m) is binomially distributed over the p^m cosets with
per-coset hit probability delta' = 1 - (1-delta)^(p^(n-m)).  The regime
sweeps record, per trial, the size window p^s/2 <= |E| <= 2 p^s and either
min_W |image| >= |E|/24 (s <= m) or "every projection full" (s > m).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import AmbientSpace, PointSet
from .projections import projection_sizes
from .subspaces import Subspace, enumerate_grassmannian

__all__ = [
    "PercolationModel",
    "percolation_sample",
    "chernoff_bound",
    "MuChain",
    "mu_lower_bound",
    "smallest_prime_with_chain",
    "PercolationReport",
    "verify_small_regime",
    "verify_large_regime",
    "SizeConcentration",
    "chebyshev_size_check",
]


@dataclass(frozen=True)
class PercolationModel:
    """Independent site percolation with density delta and a 64-bit seed."""

    space: AmbientSpace
    delta: float
    seed: int
    s: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must lie in [0, 1], got {self.delta}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit nonnegative integer")
        if self.s is not None:
            target = float(self.space.p) ** (self.s - self.space.n)
            if abs(self.delta - target) > 1e-12:
                raise ValueError(
                    f"delta={self.delta} does not match p^(s-n)={target}"
                )

    @classmethod
    def from_exponent(
        cls, space: AmbientSpace, s: float, seed: int
    ) -> "PercolationModel":
        return cls(space, float(space.p) ** (s - space.n), seed, s)


def percolation_sample(model: PercolationModel, trial: int = 0) -> PointSet:
    """Sample one random subset; reproducible per (seed, trial index)."""
    key = np.array([model.seed, trial], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    mask = rng.random(model.space.point_count) < model.delta
    return PointSet(model.space, mask)


def chernoff_bound(N: int, delta_prime: float) -> float:
    """exp(-N delta'/16): tail bound for a binomial falling below half its mean."""
    if N < 1:
        raise ValueError("need N >= 1")
    if not 0.0 <= delta_prime <= 1.0:
        raise ValueError("delta' must lie in [0, 1]")
    return math.exp(-N * delta_prime / 16.0)


@dataclass
class MuChain:
    """The chain of estimates putting the per-direction image mean above p^s/6."""

    p: int
    n: int
    m: int
    s: float
    delta: float
    delta_prime: float
    mu: float
    exp_step: float  # p^m (1 - exp(-p^(s-m)))
    poly_step: float  # p^m (p^(s-m) - 5 p^(2(s-m))/6)
    floor: float  # p^s / 6
    holds: bool


def mu_lower_bound(p: int, n: int, m: int, s: float) -> MuChain:
    """Evaluate mu = p^m delta' and the chain mu >= ... >= p^s/6 numerically.

    Requires 0 < s <= m, where p^(s-m) <= 1 makes every link in the chain
    valid for all primes.
    """
    if not 0 < s <= m:
        raise ValueError(f"need 0 < s <= m, got s={s}, m={m}")
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got m={m}, n={n}")
    delta = float(p) ** (s - n)
    delta_prime = 1.0 - (1.0 - delta) ** (p ** (n - m))
    mu = p**m * delta_prime
    x = float(p) ** (s - m)
    exp_step = p**m * (1.0 - math.exp(-x))
    poly_step = p**m * (x - 5.0 * x**2 / 6.0)
    floor = float(p) ** s / 6.0
    # links compared with relative slack; at s = m the last two tie exactly
    eps = 1e-12
    holds = (
        mu >= floor
        and mu >= exp_step * (1.0 - eps)
        and exp_step >= poly_step * (1.0 - eps)
        and poly_step >= floor * (1.0 - eps)
    )
    return MuChain(p, n, m, s, delta, delta_prime, mu, exp_step, poly_step, floor, holds)


def smallest_prime_with_chain(
    n: int, m: int, s: float, primes: Sequence[int]
) -> tuple[int | None, list[MuChain]]:
    """First prime in the grid where the whole chain holds, plus all evaluations."""
    chains = [mu_lower_bound(p, n, m, s) for p in primes]
    first = next((c.p for c in chains if c.holds), None)
    return first, chains


@dataclass
class PercolationReport:
    """Per-trial projection statistics for one percolation configuration."""

    regime: str
    p: int
    n: int
    m: int
    s: float
    delta: float
    seed: int
    trials: int
    sizes: list[int]
    min_images: list[int]
    full_flags: list[bool]
    size_window_pass: float
    success_rate: float
    mu: float | None = None
    mu_half_rate: float | None = None
    plane_miss_rate: float | None = None
    plane_miss_bound: float | None = None

    def min_projection_stats(self) -> dict:
        if not self.min_images:
            return {"min": None, "mean": None}
        return {
            "min": int(min(self.min_images)),
            "mean": float(np.mean(self.min_images)),
        }

    def to_json_dict(self) -> dict:
        out = {
            "theorem": self.regime,
            "p": self.p,
            "n": self.n,
            "m": self.m,
            "s": self.s,
            "delta": self.delta,
            "seed": self.seed,
            "trials": self.trials,
            "size_window_pass": self.size_window_pass,
            "min_projection_stats": self.min_projection_stats(),
            "success_rate": self.success_rate,
        }
        if self.mu is not None:
            out["mu"] = self.mu
            out["mu_half_rate"] = self.mu_half_rate
        if self.plane_miss_rate is not None:
            out["plane_miss_rate"] = self.plane_miss_rate
            out["plane_miss_bound"] = self.plane_miss_bound
        return out


def _size_window(p: int, s: float, size: int) -> bool:
    return p**s / 2.0 <= size <= 2.0 * p**s


def _sweep(
    model: PercolationModel,
    m: int,
    trials: int,
    directions: list[Subspace],
    threads: int = 1,
) -> tuple[list[int], list[int], list[bool], int]:
    """Per-trial (|E|, min image, all-full flag) plus total empty-coset count.

    Trials may run on a thread pool; results reduce by trial index either way.
    """
    p_m = model.space.p**m

    def one_trial(t: int) -> tuple[int, int, bool, int]:
        E = percolation_sample(model, t)
        _, image_sizes = projection_sizes(E, m, directions=directions)
        return (
            E.cardinality,
            int(image_sizes.min()),
            bool((image_sizes == p_m).all()),
            int((p_m - image_sizes).sum()),
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one_trial, range(trials)))
    else:
        rows = [one_trial(t) for t in range(trials)]
    sizes = [r[0] for r in rows]
    mins = [r[1] for r in rows]
    fulls = [r[2] for r in rows]
    empty = sum(r[3] for r in rows)
    return sizes, mins, fulls, empty


def verify_small_regime(
    p: int, n: int, m: int, s: float, trials: int, seed: int = 0, threads: int = 1
) -> PercolationReport:
    """Sample sets of exponent s <= m; success = size window and min image >= |E|/24."""
    if not 0 < s <= m:
        raise ValueError(f"small regime needs 0 < s <= m, got s={s}, m={m}")
    space = AmbientSpace(p, n)
    model = PercolationModel.from_exponent(space, s, seed)
    directions = list(enumerate_grassmannian(space, n - m))
    sizes, mins, fulls, _ = _sweep(model, m, trials, directions, threads=threads)
    chain = mu_lower_bound(p, n, m, s)
    window = [_size_window(p, s, sz) for sz in sizes]
    success = [
        w and 24 * mn >= sz for w, mn, sz in zip(window, mins, sizes)
    ]
    mu_half = [2 * mn >= chain.mu for mn in mins]
    return PercolationReport(
        regime="small",
        p=p,
        n=n,
        m=m,
        s=s,
        delta=model.delta,
        seed=seed,
        trials=trials,
        sizes=sizes,
        min_images=mins,
        full_flags=fulls,
        size_window_pass=float(np.mean(window)) if trials else 0.0,
        success_rate=float(np.mean(success)) if trials else 0.0,
        mu=chain.mu,
        mu_half_rate=float(np.mean(mu_half)) if trials else 0.0,
    )


def verify_large_regime(
    p: int, n: int, m: int, s: float, trials: int, seed: int = 0, threads: int = 1
) -> PercolationReport:
    """Sample sets of exponent s > m; success = every projection image is full."""
    if not m < s <= n:
        raise ValueError(f"large regime needs m < s <= n, got s={s}, m={m}")
    space = AmbientSpace(p, n)
    model = PercolationModel.from_exponent(space, s, seed)
    directions = list(enumerate_grassmannian(space, n - m))
    p_m = p**m
    sizes, mins, fulls, empty_cosets = _sweep(
        model, m, trials, directions, threads=threads
    )
    window = [_size_window(p, s, sz) for sz in sizes]
    total_planes = trials * len(directions) * p_m
    return PercolationReport(
        regime="large",
        p=p,
        n=n,
        m=m,
        s=s,
        delta=model.delta,
        seed=seed,
        trials=trials,
        sizes=sizes,
        min_images=mins,
        full_flags=fulls,
        size_window_pass=float(np.mean(window)) if trials else 0.0,
        success_rate=float(np.mean(fulls)) if trials else 0.0,
        plane_miss_rate=empty_cosets / total_planes if total_planes else 0.0,
        plane_miss_bound=math.exp(-float(p) ** (s - m)),
    )


@dataclass
class SizeConcentration:
    """Empirical fluctuation rate of |E| against the Chebyshev tail bound."""

    trials: int
    expected_size: float
    mean_size: float
    empirical_rate: float
    bound: float
    slack: float
    ok: bool

    def to_json_dict(self) -> dict:
        return {
            "trials": self.trials,
            "expected_size": self.expected_size,
            "mean_size": self.mean_size,
            "empirical_rate": self.empirical_rate,
            "bound": self.bound,
            "slack": self.slack,
            "ok": self.ok,
        }


def chebyshev_size_check(model: PercolationModel, trials: int) -> SizeConcentration:
    """Fraction of trials with ||E| - p^n delta| > p^n delta / 2.

    Must not exceed 4 p^n delta (1-delta) / (p^n delta)^2 plus three standard
    deviations of the frequency estimator.
    """
    if not 0.0 < model.delta <= 1.0:
        raise ValueError("need delta in (0, 1]")
    mean = model.space.point_count * model.delta
    sizes = np.array(
        [percolation_sample(model, t).cardinality for t in range(trials)]
    )
    rate = float((np.abs(sizes - mean) > mean / 2.0).mean())
    if model.delta == 1.0:
        bound = 0.0
    else:
        bound = 4.0 * (1.0 - model.delta) / mean
    b = min(bound, 1.0)
    slack = 3.0 * math.sqrt(b * (1.0 - b) / trials) if trials else 0.0
    return SizeConcentration(
        trials=trials,
        expected_size=mean,
        mean_size=float(sizes.mean()) if trials else 0.0,
        empirical_rate=rate,
        bound=bound,
        slack=slack,
        ok=rate <= bound + slack,
    )
