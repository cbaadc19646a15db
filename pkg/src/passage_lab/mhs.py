"""Probes of the "mixtures have state" property for candidate probability laws.

A law passes when every ensemble's response (its predicted outcome
probability as a function of measurement direction) is pinned down by a
3-parameter statistic. Two probes are used: the affine dimension of the set
of response vectors of many random ensembles, and an explicit pair of
ensembles with equal Bloch means that the law may or may not tell apart.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    EmptyEnsemble,
    InconsistentFrequencies,
    InsufficientSamples,
    UnderdeterminedFit,
)
from .qubit import BlochVector, Ensemble
from .sphere import (
    EAST,
    NORTH,
    SOUTH,
    WEST,
    ProbabilityLaw,
    SpherePoint,
    fibonacci_directions,
    random_sphere_points,
    unit_vectors,
)

WITNESS_THRESHOLD = 1e-9
RANK_RTOL = 1e-6
MAX_ENSEMBLE_SIZE = 6


@dataclass(frozen=True)
class ResponseVector:
    law_tag: str
    ensemble: Ensemble
    samples: tuple[tuple[SpherePoint, float], ...]

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([p for _, p in self.samples])


@dataclass(frozen=True)
class Witness:
    ensemble_a: Ensemble
    ensemble_b: Ensemble
    direction: SpherePoint
    gap: float

    def to_dict(self) -> dict:
        return {
            "direction_theta_deg": self.direction.theta_deg,
            "direction_phi_deg": self.direction.phi_deg,
            "direction_theta_rad": self.direction.theta,
            "direction_phi_rad": self.direction.phi,
            "gap": self.gap,
        }


@dataclass(frozen=True)
class MHSVerdict:
    law_tag: str
    affine_dimension: int
    holds_at_quantum_dimension: bool
    witness: Optional[Witness] = None

    def to_dict(self) -> dict:
        return {
            "law": self.law_tag,
            "affine_dimension": self.affine_dimension,
            "holds_at_quantum_dimension": self.holds_at_quantum_dimension,
            "witness": None if self.witness is None else self.witness.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _distances(points: Sequence[SpherePoint], directions: Sequence[SpherePoint]) -> np.ndarray:
    cosines = unit_vectors(points) @ unit_vectors(directions).T
    return np.arccos(np.clip(cosines, -1.0, 1.0))


def response_probability(law: ProbabilityLaw, ensemble: Ensemble, direction: SpherePoint) -> float:
    """Weighted mean of the law applied to each member's distance from ``direction``."""
    return float(response_row(law, ensemble, [direction])[0])


def response_row(law: ProbabilityLaw, ensemble: Ensemble, directions) -> np.ndarray:
    if not len(ensemble):
        raise EmptyEnsemble("an ensemble needs at least one member")
    return ensemble.weights @ law(_distances(ensemble.points, directions))


def response_vector(law: ProbabilityLaw, ensemble: Ensemble, directions) -> ResponseVector:
    probs = response_row(law, ensemble, directions)
    return ResponseVector(law.tag, ensemble, tuple(zip(directions, map(float, probs))))


def response_matrix(law: ProbabilityLaw, ensembles, directions) -> np.ndarray:
    """Rows are ensembles in the given order, columns are directions."""
    return np.array([response_row(law, e, directions) for e in ensembles])


def affine_dimension(rows: np.ndarray, rtol: float = RANK_RTOL) -> int:
    """Dimension of the affine hull of the rows of ``rows``.

    Counts singular values of the mean-centred matrix above ``rtol`` times the
    largest one. Values at the rounding level of the uncentred matrix never
    count, so a single repeated point has dimension 0.
    """
    rows = np.asarray(rows, dtype=float)
    centred = rows - rows.mean(axis=0)
    sv = np.linalg.svd(centred, compute_uv=False)
    floor = max(rows.shape) * np.finfo(float).eps * np.linalg.norm(rows)
    if sv.size == 0 or sv[0] <= floor:
        return 0
    return int(np.count_nonzero(sv > max(rtol * sv[0], floor)))


def random_ensemble(rng: np.random.Generator, max_size: int = MAX_ENSEMBLE_SIZE) -> Ensemble:
    size = int(rng.integers(1, max_size + 1))
    points = random_sphere_points(rng, size)
    weights = rng.dirichlet(np.ones(size))
    # absorb rounding into the last weight so the sum is 1 to within an ulp
    weights[-1] = max(0.0, 1.0 - weights[:-1].sum())
    return Ensemble.of(weights, points)


def sample_ensembles(rng: np.random.Generator, n: int) -> list[Ensemble]:
    return [random_ensemble(rng) for _ in range(n)]


def affine_span_dimension(
    law: ProbabilityLaw,
    n_ensembles: int = 50,
    n_directions: int = 100,
    seed: int = 0,
    tolerance: float = RANK_RTOL,
) -> int:
    """Affine dimension of the responses of random ensembles to shared random
    directions. Directions are drawn first, then ensembles, from one
    generator seeded with ``seed``.
    """
    matrix = sampled_response_matrix(law, n_ensembles, n_directions, seed)
    return affine_dimension(matrix, tolerance)


def sampled_response_matrix(
    law: ProbabilityLaw, n_ensembles: int = 50, n_directions: int = 100, seed: int = 0
) -> np.ndarray:
    if n_ensembles < 10 or n_directions < 20:
        raise InsufficientSamples(
            f"need >= 10 ensembles and >= 20 directions, got {n_ensembles} and {n_directions}"
        )
    rng = np.random.default_rng(seed)
    directions = random_sphere_points(rng, n_directions)
    ensembles = sample_ensembles(rng, n_ensembles)
    return response_matrix(law, ensembles, directions)


def _response_at(law: ProbabilityLaw, theta: float, phi: float, dirs: np.ndarray) -> np.ndarray:
    # raw parametrisation so finite differences may step past a pole
    v = np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])
    return law(np.arccos(np.clip(dirs @ v, -1.0, 1.0)))


def response_jacobian(
    law: ProbabilityLaw, point: SpherePoint, directions, step: float = 1e-5
) -> np.ndarray:
    """Central-difference Jacobian of (theta, phi) -> pure-state response vector."""
    dirs = unit_vectors(directions)
    t, p = point.theta, point.phi
    d_theta = (_response_at(law, t + step, p, dirs) - _response_at(law, t - step, p, dirs)) / (2 * step)
    d_phi = (_response_at(law, t, p + step, dirs) - _response_at(law, t, p - step, dirs)) / (2 * step)
    return np.column_stack([d_theta, d_phi])


def numerical_rank(matrix: np.ndarray, rtol: float = RANK_RTOL) -> int:
    sv = np.linalg.svd(np.asarray(matrix, dtype=float), compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > rtol * sv[0]))


def pure_manifold_dimension(
    law: ProbabilityLaw,
    seed: int = 0,
    n_states: int = 20,
    n_directions: int = 100,
    step: float = 1e-5,
) -> int:
    """Largest Jacobian rank of the pure-state response map over random states.

    Points sampled at a pole are skipped: the longitude derivative vanishes
    there and the rank drop is a coordinate artefact.
    """
    rng = np.random.default_rng(seed)
    directions = random_sphere_points(rng, n_directions)
    states = random_sphere_points(rng, n_states)
    ranks = [
        numerical_rank(response_jacobian(law, s, directions, step))
        for s in states
        if 0.0 < s.theta < math.pi
    ]
    return max(ranks, default=0)


def equal_mean_ensembles() -> tuple[Ensemble, Ensemble]:
    """Poles versus east/west: both have Bloch mean zero."""
    return (
        Ensemble.of([0.5, 0.5], [NORTH, SOUTH]),
        Ensemble.of([0.5, 0.5], [EAST, WEST]),
    )


def witness_directions(n: int) -> list[SpherePoint]:
    """Coordinate axes first (north, south, +x, -x, east, west), then a
    Fibonacci covering, so ties resolve toward the polar axis.
    """
    axes = [NORTH, SOUTH, SpherePoint(math.pi / 2, 0.0), SpherePoint(math.pi / 2, math.pi), EAST, WEST]
    return axes + fibonacci_directions(max(0, n - len(axes)))


def equal_mean_witness(law: ProbabilityLaw, n_directions: int = 2000) -> Optional[Witness]:
    """Direction where two equal-mean ensembles respond most differently,
    or ``None`` when the largest gap is below ``WITNESS_THRESHOLD``.
    """
    ens_a, ens_b = equal_mean_ensembles()
    directions = witness_directions(n_directions)
    gaps = np.abs(response_row(law, ens_a, directions) - response_row(law, ens_b, directions))
    best = float(gaps.max())
    if best < WITNESS_THRESHOLD:
        return None
    # first direction within rounding of the maximum, so exact ties are stable
    idx = int(np.flatnonzero(gaps >= best - 1e-12)[0])
    return Witness(ens_a, ens_b, directions[idx], float(gaps[idx]))


def mhs_check(law: ProbabilityLaw, seed: int = 0) -> MHSVerdict:
    dim = affine_span_dimension(law, seed=seed)
    witness = equal_mean_witness(law)
    return MHSVerdict(
        law_tag=law.tag,
        affine_dimension=dim,
        holds_at_quantum_dimension=dim <= 3 and witness is None,
        witness=witness,
    )


@dataclass(frozen=True)
class TomographyResult:
    vector: BlochVector
    raw: np.ndarray
    standard_errors: np.ndarray
    residual_norm: float
    clipped: bool


def fit_bloch_vector(frequencies) -> TomographyResult:
    """Least-squares Bloch vector from (direction, frequency, trials) triples.

    Each triple says the state was found along ``direction`` a fraction
    ``frequency`` of ``trials`` times; under the quantum law that fraction is
    ``(1 + v . n) / 2``. Rows are weighted by their trial counts.
    """
    entries = list(frequencies)
    if len(entries) < 3:
        raise UnderdeterminedFit(f"need at least 3 directions, got {len(entries)}")
    n = unit_vectors([d for d, _, _ in entries])
    f = np.array([float(fr) for _, fr, _ in entries])
    trials = np.array([int(t) for _, _, t in entries], dtype=float)
    if np.any(trials < 1):
        raise ValueError("every direction needs at least one trial")
    if np.any((f < 0) | (f > 1)):
        raise ValueError("frequencies must lie in [0, 1]")

    w = np.sqrt(trials / trials.max())
    a = n * w[:, None]
    gram = a.T @ a
    if np.linalg.matrix_rank(gram) < 3 or np.linalg.cond(gram) >= 1e6:
        raise UnderdeterminedFit("measurement directions do not span three dimensions")
    b = (2.0 * f - 1.0) * w
    v, *_ = np.linalg.lstsq(a, b, rcond=None)

    # binomial spread of 2f - 1 at the fitted probabilities
    p_fit = np.clip(0.5 * (1.0 + n @ v), 0.0, 1.0)
    var = 4.0 * p_fit * (1.0 - p_fit) / trials
    residual = (2.0 * f - 1.0) - n @ v
    residual_norm = float(np.linalg.norm(residual))
    if residual_norm > 5.0 * math.sqrt(var.sum()) + 1e-9:
        raise InconsistentFrequencies(
            f"residual {residual_norm:.3e} is beyond 5x the binomial expectation"
        )

    pinv = np.linalg.pinv(a)
    stderr = np.sqrt((pinv**2) @ (w**2 * var))

    norm = float(np.linalg.norm(v))
    clipped = norm > 1.0
    vec = v / norm if clipped else v
    return TomographyResult(BlochVector.from_array(vec), v, stderr, residual_norm, clipped)


def tomography_fit(frequencies) -> BlochVector:
    return fit_bloch_vector(frequencies).vector


def simulate_frequencies(
    bloch, directions, trials: int, rng: np.random.Generator
) -> list[tuple[SpherePoint, float, int]]:
    """Binomial outcome frequencies of measuring a Bloch vector along each direction."""
    v = np.asarray(bloch.array if isinstance(bloch, BlochVector) else bloch, dtype=float)
    probs = np.clip(0.5 * (1.0 + unit_vectors(directions) @ v), 0.0, 1.0)
    hits = rng.binomial(trials, probs)
    return [(d, h / trials, trials) for d, h in zip(directions, hits)]


def response_matrix_csv(matrix: np.ndarray) -> str:
    """CSV text with header ``ensemble,d0,d1,...`` and one row per ensemble."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["ensemble"] + [f"d{j}" for j in range(matrix.shape[1])])
    for i, row in enumerate(matrix):
        writer.writerow([i] + [repr(float(x)) for x in row])
    return buf.getvalue()
