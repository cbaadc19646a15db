"""Classical measurement and correlated selection over two biased coins.

A system coin shows heads with probability ``p_s`` and an observer coin with
``p_o``. Correlated selection keeps only the trials where the coins agree and
reports the frequency of double heads among the survivors::

    CS(p_s, p_o) = p_s p_o / (p_s p_o + (1 - p_s)(1 - p_o))

Outcome pairs are always listed in the fixed order
``(0_s,0_o), (1_s,0_o), (0_s,1_o), (1_s,1_o)``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegeneratePostSelection,
    EmptyBatch,
    NoRetainedTrials,
    ProbabilityOutOfRange,
    ResolutionTooSmall,
)

OUTCOME_ORDER = ((0, 0), (1, 0), (0, 1), (1, 1))

# flips drawn per vectorised block; bounds peak memory independently of trials
_CHUNK = 1 << 20


def _check_probability(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or not 0.0 <= value <= 1.0:
        raise ProbabilityOutOfRange(f"{name}={value!r} is not a probability in [0, 1]")
    return value


@dataclass(frozen=True)
class UnitSquarePoint:
    """Heads-probabilities of the system coin and the observer coin."""

    p_s: float
    p_o: float

    def __post_init__(self):
        object.__setattr__(self, "p_s", _check_probability("p_s", self.p_s))
        object.__setattr__(self, "p_o", _check_probability("p_o", self.p_o))

    @property
    def is_degenerate(self) -> bool:
        """True at the corners (1, 0) and (0, 1) where no trial survives."""
        return self.concordant_mass == 0.0

    @property
    def concordant_mass(self) -> float:
        return self.p_s * self.p_o + (1.0 - self.p_s) * (1.0 - self.p_o)


@dataclass(frozen=True)
class JointDistribution:
    p00: float
    p10: float
    p01: float
    p11: float

    def __post_init__(self):
        for name in ("p00", "p10", "p01", "p11"):
            object.__setattr__(self, name, _check_probability(name, getattr(self, name)))
        total = self.p00 + self.p10 + self.p01 + self.p11
        if abs(total - 1.0) > 1e-12:
            raise ProbabilityOutOfRange(f"joint distribution sums to {total!r}, not 1")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p00, self.p10, self.p01, self.p11)

    def __getitem__(self, outcome: tuple[int, int]) -> float:
        return self.as_tuple()[OUTCOME_ORDER.index(tuple(outcome))]


@dataclass(frozen=True)
class CSEstimate:
    """Tallies from a Monte Carlo run of correlated selection."""

    trials_total: int
    trials_retained: int
    count_00: int
    count_11: int
    frequency_heads: float
    standard_error: float
    seed: int

    @property
    def retained_fraction(self) -> float:
        return self.trials_retained / self.trials_total

    def to_dict(self) -> dict:
        return {
            "trials_total": self.trials_total,
            "trials_retained": self.trials_retained,
            "count_00": self.count_00,
            "count_11": self.count_11,
            "frequency_heads": self.frequency_heads,
            "standard_error": self.standard_error,
            "seed": self.seed,
        }


def cs_probability(point: UnitSquarePoint) -> float:
    """Probability of double heads given that the two coins agree.

    Raises
    ------
    DegeneratePostSelection
        At the corners (1, 0) and (0, 1), where the coins never agree.
    """
    heads = point.p_s * point.p_o
    denom = heads + (1.0 - point.p_s) * (1.0 - point.p_o)
    if denom == 0.0:
        raise DegeneratePostSelection(
            f"no concordant mass at (p_s={point.p_s}, p_o={point.p_o})"
        )
    return heads / denom


def classical_measure(system: int, memory: int) -> tuple[int, int]:
    """Memory is flipped iff the system is 1; the system is untouched."""
    if system not in (0, 1) or memory not in (0, 1):
        raise ValueError(f"expected bits, got ({system!r}, {memory!r})")
    return system, memory ^ system


def joint_distribution(point: UnitSquarePoint) -> JointDistribution:
    ps, po = point.p_s, point.p_o
    qs, qo = 1.0 - ps, 1.0 - po
    return JointDistribution(qs * qo, ps * qo, qs * po, ps * po)


def postselect(joint: JointDistribution) -> JointDistribution:
    """Drop the discordant outcomes and renormalise the concordant ones."""
    kept = joint.p00 + joint.p11
    if kept == 0.0:
        raise DegeneratePostSelection("joint distribution has no concordant mass")
    p11 = joint.p11 / kept
    # complement rather than a second division keeps the sum exactly 1
    return JointDistribution(1.0 - p11, 0.0, 0.0, p11)


def shard_seed_sequence(seed: int, shard: int) -> np.random.SeedSequence:
    """Seed sequence for one shard, a pure function of (seed, shard index)."""
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return np.random.SeedSequence(entropy=seed, spawn_key=(shard,))


def _run_shard(p_s: float, p_o: float, trials: int, seq: np.random.SeedSequence):
    rng = np.random.default_rng(seq)
    c00 = c11 = 0
    remaining = trials
    while remaining:
        n = min(remaining, _CHUNK)
        system = rng.random(n) < p_s
        observer = rng.random(n) < p_o
        c11 += int(np.count_nonzero(system & observer))
        c00 += int(np.count_nonzero(~(system | observer)))
        remaining -= n
    return c00, c11


def simulate_correlated_selection(
    point: UnitSquarePoint,
    trials: int,
    seed: int = 0,
    shards: int = 1,
    workers: int = 1,
) -> CSEstimate:
    """Flip both coins ``trials`` times and keep only the agreeing trials.

    Trials are split into ``shards`` blocks, each driven by its own generator
    derived from ``(seed, shard index)``. Tallies are summed, so the result
    depends on ``(point, trials, seed, shards)`` only, never on ``workers``.
    """
    if trials < 1:
        raise EmptyBatch(f"trials must be at least 1, got {trials}")
    if shards < 1:
        raise ValueError(f"shards must be at least 1, got {shards}")
    base, extra = divmod(trials, shards)
    sizes = [base + (1 if i < extra else 0) for i in range(shards)]
    jobs = [
        (point.p_s, point.p_o, n, shard_seed_sequence(seed, i))
        for i, n in enumerate(sizes)
        if n
    ]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            tallies = list(pool.map(lambda job: _run_shard(*job), jobs))
    else:
        tallies = [_run_shard(*job) for job in jobs]

    c00 = sum(t[0] for t in tallies)
    c11 = sum(t[1] for t in tallies)
    retained = c00 + c11
    if retained == 0:
        raise NoRetainedTrials(f"all {trials} trials were discordant")
    freq = c11 / retained
    return CSEstimate(
        trials_total=trials,
        trials_retained=retained,
        count_00=c00,
        count_11=c11,
        frequency_heads=freq,
        standard_error=math.sqrt(freq * (1.0 - freq) / retained),
        seed=seed,
    )


def grid_axis(resolution: int) -> np.ndarray:
    """Uniform coordinates 0, 1/(r-1), ..., 1 shared by both grid axes."""
    if resolution < 2:
        raise ResolutionTooSmall(f"resolution must be at least 2, got {resolution}")
    return np.linspace(0.0, 1.0, resolution)


def cs_contour_grid(resolution: int) -> np.ndarray:
    """CS on a ``resolution x resolution`` grid; ``grid[i, j]`` is at
    ``p_o = axis[i]``, ``p_s = axis[j]``. Degenerate corners hold NaN.
    """
    axis = grid_axis(resolution)
    ps = axis[np.newaxis, :]
    po = axis[:, np.newaxis]
    heads = ps * po
    denom = heads + (1.0 - ps) * (1.0 - po)
    grid = np.full((resolution, resolution), np.nan)
    np.divide(heads, denom, out=grid, where=denom != 0.0)
    return grid
