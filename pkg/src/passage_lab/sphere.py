"""Geometrizing the unit square onto the sphere.

The colatitude of a square point is fixed by its CS value through the inverse
of the quantum law ``QM(theta) = cos^2(theta/2)``, and its longitude is a
linear function of ``p_s``. CS contours therefore land on circles of latitude,
and the angular distance from the north pole (the image of (1, 1)) turns back
into the CS value under ``QM``.

Angles are radians throughout; conversion to degrees happens only at the CLI.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    AngleOutOfRange,
    DegenerateLongitude,
    InvalidProbabilityLaw,
    NonInvertiblePole,
    ProbabilityOutOfRange,
)
from .selection import UnitSquarePoint, cs_probability

TWO_PI = 2.0 * math.pi


def normalize_longitude(phi: float) -> float:
    """Wrap ``phi`` into (-pi, pi]."""
    wrapped = math.remainder(phi, TWO_PI)
    return math.pi if wrapped <= -math.pi else wrapped


@dataclass(frozen=True)
class SpherePoint:
    """Colatitude ``theta`` in [0, pi] (0 at the north pole) and longitude
    ``phi`` wrapped into (-pi, pi]. At the poles ``phi`` is forced to 0 so
    that equal points compare equal.
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta, phi = float(self.theta), float(self.phi)
        if not math.isfinite(theta) or not 0.0 <= theta <= math.pi:
            raise AngleOutOfRange(f"colatitude {theta!r} outside [0, pi]")
        if not math.isfinite(phi):
            raise AngleOutOfRange(f"longitude {phi!r} is not finite")
        phi = 0.0 if theta in (0.0, math.pi) else normalize_longitude(phi)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_degrees(cls, theta_deg: float, phi_deg: float = 0.0) -> "SpherePoint":
        return cls(math.radians(theta_deg), math.radians(phi_deg))

    @classmethod
    def from_vector(cls, v) -> "SpherePoint":
        x, y, z = (float(c) for c in v)
        rho = math.hypot(x, y)
        if rho == 0.0 and z == 0.0:
            raise ValueError("zero vector has no direction")
        # atan2 stays accurate near the poles where acos(z) does not
        return cls(math.atan2(rho, z), math.atan2(y, x))

    @property
    def theta_deg(self) -> float:
        return math.degrees(self.theta)

    @property
    def phi_deg(self) -> float:
        return math.degrees(self.phi)

    def unit_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array(
            [st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)]
        )

    def antipode(self) -> "SpherePoint":
        return SpherePoint(math.pi - self.theta, self.phi + math.pi)


NORTH = SpherePoint(0.0, 0.0)
SOUTH = SpherePoint(math.pi, 0.0)
EAST = SpherePoint(math.pi / 2, math.pi / 2)
WEST = SpherePoint(math.pi / 2, -math.pi / 2)
PLUS_X = SpherePoint(math.pi / 2, 0.0)
MINUS_X = SpherePoint(math.pi / 2, math.pi)

_LAW_GRID = np.linspace(0.0, math.pi, 181)
_LAW_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ProbabilityLaw:
    """Candidate map from angular distance to outcome probability.

    ``evaluator`` must accept a numpy array of angles in [0, pi]. Construction
    fails unless the law sends 0 to 1, pi to 0, and stays inside [0, 1] on a
    181-point grid.
    """

    tag: str
    evaluator: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    name: str = ""

    def __post_init__(self):
        if self.tag not in ("QM", "COS4", "CUSTOM"):
            raise InvalidProbabilityLaw(f"unknown law tag {self.tag!r}")
        if not self.name:
            object.__setattr__(self, "name", self.tag.lower())
        try:
            values = np.asarray(self(_LAW_GRID), dtype=float)
        except Exception as exc:  # noqa: BLE001 - any evaluator failure is a bad law
            raise InvalidProbabilityLaw(f"law evaluator failed: {exc}") from exc
        if values.shape != _LAW_GRID.shape or not np.all(np.isfinite(values)):
            raise InvalidProbabilityLaw("law must return one finite value per angle")
        if abs(values[0] - 1.0) > _LAW_TOL or abs(values[-1]) > _LAW_TOL:
            raise InvalidProbabilityLaw(
                f"law must map 0 to 1 and pi to 0, got {values[0]!r} and {values[-1]!r}"
            )
        if values.min() < -_LAW_TOL or values.max() > 1.0 + _LAW_TOL:
            raise InvalidProbabilityLaw("law leaves [0, 1] on the check grid")

    def __call__(self, theta):
        return self.evaluator(np.asarray(theta, dtype=float))

    @classmethod
    def custom(cls, func, name: str = "custom") -> "ProbabilityLaw":
        return cls("CUSTOM", func, name)

    @classmethod
    def from_table(cls, angles_deg, probabilities, name: str = "custom") -> "ProbabilityLaw":
        """Piecewise-linear law through (angle in degrees, probability) knots."""
        x = np.asarray(angles_deg, dtype=float)
        y = np.asarray(probabilities, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or x.size < 2:
            raise InvalidProbabilityLaw("law table needs two equal-length columns, >= 2 rows")
        if np.any(np.diff(x) <= 0):
            raise InvalidProbabilityLaw("law table angles must be strictly increasing")
        if x[0] != 0.0 or x[-1] != 180.0:
            raise InvalidProbabilityLaw("law table must span exactly 0 to 180 degrees")
        xr = np.radians(x)
        return cls("CUSTOM", lambda t: np.interp(t, xr, y), name)


def _qm(theta):
    return np.cos(theta / 2.0) ** 2


def _cos4(theta):
    return np.cos(theta / 2.0) ** 4


QM_LAW = ProbabilityLaw("QM", _qm, "qm")
COS4_LAW = ProbabilityLaw("COS4", _cos4, "cos4")


def _check_angle(theta: float) -> float:
    theta = float(theta)
    if not math.isfinite(theta) or not 0.0 <= theta <= math.pi:
        raise AngleOutOfRange(f"angle {theta!r} outside [0, pi]")
    return theta


def qm_probability(theta: float) -> float:
    """``cos^2(theta/2)``: probability of projecting across angle ``theta``."""
    return math.cos(_check_angle(theta) / 2.0) ** 2


def qm_inverse(p: float) -> float:
    """Angle ``2 arccos(sqrt(p))`` in [0, pi] whose QM probability is ``p``."""
    p = float(p)
    if not math.isfinite(p) or not 0.0 <= p <= 1.0:
        raise ProbabilityOutOfRange(f"{p!r} is not a probability in [0, 1]")
    return 2.0 * math.acos(math.sqrt(p))


def square_to_sphere(point: UnitSquarePoint) -> SpherePoint:
    """Colatitude from the CS value, longitude linear in ``p_s``."""
    theta = qm_inverse(cs_probability(point))
    return SpherePoint(theta, (point.p_s - 0.5) * TWO_PI)


def sphere_to_square(point: SpherePoint) -> UnitSquarePoint:
    """Analytic inverse of :func:`square_to_sphere` off the poles."""
    if not 0.0 < point.theta < math.pi:
        raise NonInvertiblePole(
            f"colatitude {point.theta!r} is a pole; its preimage is a whole edge"
        )
    p_s = point.phi / TWO_PI + 0.5
    if p_s <= 0.0 or p_s >= 1.0:
        raise DegenerateLongitude(f"longitude {point.phi!r} maps to p_s={p_s!r}")
    c = qm_probability(point.theta)
    q_s = 1.0 - p_s
    p_o = c * q_s / (p_s * (1.0 - c) + c * q_s)
    return UnitSquarePoint(p_s, min(1.0, max(0.0, p_o)))


def great_circle_distance(a: SpherePoint, b: SpherePoint) -> float:
    """Central angle between two sphere points, in [0, pi].

    Uses ``atan2(|a x b|, a . b)``, which equals ``arccos(a . b)`` but keeps
    full precision for nearly coincident or antipodal points.
    """
    u, v = a.unit_vector(), b.unit_vector()
    return math.atan2(float(np.linalg.norm(np.cross(u, v))), float(np.dot(u, v)))


def law_probability(law: ProbabilityLaw, a: SpherePoint, b: SpherePoint) -> float:
    """Probability that ``a`` projects onto ``b`` under ``law`` (law after distance)."""
    return float(law(great_circle_distance(a, b)))


def semicircle_height(theta: float) -> float:
    """Height of a point ``theta`` along a unit-diameter circle centred at
    (0.5, 0.5), measured from its top point (0.5, 1).
    """
    return 0.5 + 0.5 * math.cos(_check_angle(theta))


def unit_vectors(points) -> np.ndarray:
    """Stack the unit vectors of a sequence of sphere points as rows."""
    return np.array([p.unit_vector() for p in points]).reshape(-1, 3)


def random_sphere_points(rng: np.random.Generator, n: int) -> list[SpherePoint]:
    """Area-uniform points: uniform height z, uniform longitude."""
    z = rng.uniform(-1.0, 1.0, n)
    phi = rng.uniform(-math.pi, math.pi, n)
    return [SpherePoint(math.acos(zi), ph) for zi, ph in zip(z, phi)]


def fibonacci_directions(n: int) -> list[SpherePoint]:
    """Deterministic, nearly even covering of the sphere by ``n`` points."""
    golden = math.pi * (3.0 - math.sqrt(5.0))
    k = np.arange(n) + 0.5
    z = 1.0 - 2.0 * k / n
    return [SpherePoint(math.acos(zi), golden * i) for i, zi in enumerate(z)]
