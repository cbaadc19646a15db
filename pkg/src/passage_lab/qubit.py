"""Qubit states, density matrices and the Wigner's-friend reversal.

Two-qubit amplitudes are indexed ``|system, memory>`` so the flat index is
``2 * system + memory``. Alice's measurement along an axis is the classical
copy rule (memory flipped iff system is 1) lifted to a CNOT, conjugated by
the rotation that carries the north pole to the axis along its meridian.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import EmptyEnsemble, InvalidState, NotInMeasurementImage
from .sphere import SpherePoint, great_circle_distance

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)

NORM_TOL = 1e-12
# off-image amplitude norm above which a state is not a measurement record
IMAGE_TOL = 1e-9


@dataclass(frozen=True)
class PureQubit:
    """Normalised amplitudes with the global phase chosen so that
    ``amplitude_0`` is real and non-negative.
    """

    amplitude_0: complex
    amplitude_1: complex

    def __post_init__(self):
        a0, a1 = complex(self.amplitude_0), complex(self.amplitude_1)
        norm2 = abs(a0) ** 2 + abs(a1) ** 2
        if not math.isfinite(norm2) or abs(norm2 - 1.0) > NORM_TOL:
            raise InvalidState(f"amplitudes have squared norm {norm2!r}, not 1")
        if a0 != 0:
            phase = a0.conjugate() / abs(a0)
            a0, a1 = complex(abs(a0), 0.0), a1 * phase
        else:
            a1 = complex(abs(a1), 0.0)
        object.__setattr__(self, "amplitude_0", a0)
        object.__setattr__(self, "amplitude_1", a1)

    @classmethod
    def from_vector(cls, vec, normalize: bool = False) -> "PureQubit":
        v = np.asarray(vec, dtype=complex).reshape(2)
        if normalize:
            n = np.linalg.norm(v)
            if n == 0:
                raise InvalidState("cannot normalise the zero vector")
            v = v / n
        return cls(v[0], v[1])

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.amplitude_0, self.amplitude_1], dtype=complex)

    def projector(self) -> np.ndarray:
        v = self.vector
        return np.outer(v, v.conj())

    def to_sphere(self) -> SpherePoint:
        return SpherePoint.from_vector(bloch_vector(self).array)


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.norm > 1.0 + NORM_TOL:
            raise InvalidState(f"Bloch vector norm {self.norm!r} exceeds 1")

    @classmethod
    def from_array(cls, v) -> "BlochVector":
        x, y, z = (float(c) for c in np.asarray(v, dtype=float).reshape(3))
        return cls(x, y, z)

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def norm(self) -> float:
        return math.sqrt(self.x**2 + self.y**2 + self.z**2)

    @property
    def is_pure(self) -> bool:
        return abs(self.norm - 1.0) <= 1e-9


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise InvalidState(f"density matrix must be 2x2, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > NORM_TOL:
            raise InvalidState("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > NORM_TOL:
            raise InvalidState(f"density matrix trace is {np.trace(m)!r}, not 1")
        if np.linalg.eigvalsh(m).min() < -NORM_TOL:
            raise InvalidState("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_bloch(cls, v: Union[BlochVector, Sequence[float]]) -> "DensityMatrix":
        x, y, z = v.array if isinstance(v, BlochVector) else np.asarray(v, dtype=float)
        return cls(0.5 * (IDENTITY + x * PAULI_X + y * PAULI_Y + z * PAULI_Z))

    @classmethod
    def maximally_mixed(cls) -> "DensityMatrix":
        return cls(0.5 * IDENTITY)


@dataclass(frozen=True)
class Ensemble:
    """Finite mixture of pure states given as (weight, sphere point) pairs."""

    members: tuple[tuple[float, SpherePoint], ...]

    def __post_init__(self):
        members = tuple((float(w), p) for w, p in self.members)
        if not members:
            raise EmptyEnsemble("an ensemble needs at least one member")
        weights = np.array([w for w, _ in members])
        if np.any(weights < 0) or not np.all(np.isfinite(weights)):
            raise InvalidState("ensemble weights must be non-negative")
        if abs(weights.sum() - 1.0) > NORM_TOL:
            raise InvalidState(f"ensemble weights sum to {weights.sum()!r}, not 1")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, weights, points) -> "Ensemble":
        return cls(tuple(zip(weights, points)))

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.members])

    @property
    def points(self) -> list[SpherePoint]:
        return [p for _, p in self.members]

    def mean_bloch(self) -> np.ndarray:
        """Centre of mass of the members on the unit sphere."""
        vecs = np.array([p.unit_vector() for p in self.points])
        return self.weights @ vecs

    def __len__(self):
        return len(self.members)


def two_point_ensemble(mean, chord) -> Ensemble:
    """Two pure states on the line through ``mean`` along ``chord`` whose
    centre of mass is ``mean``. Needs ``|mean| < 1`` and a non-zero chord.
    """
    m = np.asarray(mean, dtype=float)
    u = np.asarray(chord, dtype=float)
    u = u / np.linalg.norm(u)
    if np.linalg.norm(m) >= 1.0:
        raise InvalidState("mean must lie strictly inside the unit ball")
    # |m + t u| = 1  ->  t^2 + 2 (m.u) t + |m|^2 - 1 = 0, roots of opposite sign
    b = float(m @ u)
    disc = math.sqrt(b * b - (m @ m - 1.0))
    t_hi, t_lo = -b + disc, -b - disc
    w_hi = -t_lo / (t_hi - t_lo)
    return Ensemble.of(
        [w_hi, 1.0 - w_hi],
        [SpherePoint.from_vector(m + t_hi * u), SpherePoint.from_vector(m + t_lo * u)],
    )


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex).reshape(4)
        norm2 = float(np.vdot(a, a).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise InvalidState(f"two-qubit amplitudes have squared norm {norm2!r}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @classmethod
    def product(cls, system: PureQubit, memory: PureQubit) -> "TwoQubitState":
        return cls(np.kron(system.vector, memory.vector))

    def as_matrix(self) -> np.ndarray:
        """Amplitudes as ``M[system, memory]``."""
        return self.amplitudes.reshape(2, 2)

    def reduced_system(self) -> np.ndarray:
        m = self.as_matrix()
        return m @ m.conj().T

    def reduced_memory(self) -> np.ndarray:
        m = self.as_matrix()
        return m.T @ m.conj()


def pure_from_sphere(point: SpherePoint) -> PureQubit:
    return PureQubit(
        math.cos(point.theta / 2.0),
        complex(math.cos(point.phi), math.sin(point.phi)) * math.sin(point.theta / 2.0),
    )


def bloch_vector(state: Union[PureQubit, DensityMatrix]) -> BlochVector:
    """Pauli expectations ``(tr(rho X), tr(rho Y), tr(rho Z))``."""
    rho = state.projector() if isinstance(state, PureQubit) else state.matrix
    return BlochVector.from_array(
        [np.trace(rho @ p).real for p in (PAULI_X, PAULI_Y, PAULI_Z)]
    )


def density_from_ensemble(ensemble: Ensemble) -> DensityMatrix:
    """Weighted sum of the members' pure-state projectors."""
    if not len(ensemble):
        raise EmptyEnsemble("an ensemble needs at least one member")
    rho = sum(w * pure_from_sphere(p).projector() for w, p in ensemble.members)
    # symmetrise away rounding so the Hermiticity check is exact
    return DensityMatrix(0.5 * (rho + rho.conj().T))


def born_probability(preparation: SpherePoint, measurement: SpherePoint) -> float:
    """``|<measurement|preparation>|^2``."""
    amp = np.vdot(pure_from_sphere(measurement).vector, pure_from_sphere(preparation).vector)
    return float(abs(amp) ** 2)


def mixed_probability(rho: DensityMatrix, measurement: SpherePoint) -> float:
    return 0.5 * (1.0 + float(bloch_vector(rho).array @ measurement.unit_vector()))


def axis_rotation(axis: SpherePoint) -> np.ndarray:
    """Unitary taking |0> to the axis state by rotating along its meridian.

    Its second column is the antipodal state in the same gauge, so the pair
    of columns is the measurement basis for ``axis``.
    """
    c = math.cos(axis.theta / 2.0)
    s = math.sin(axis.theta / 2.0)
    e = complex(math.cos(axis.phi), math.sin(axis.phi))
    return np.array([[c, -s * e.conjugate()], [s * e, c]], dtype=complex)


def axis_entangler(axis: SpherePoint) -> np.ndarray:
    """CNOT with the system control read in the ``axis`` basis."""
    u = np.kron(axis_rotation(axis), IDENTITY)
    return u @ CNOT @ u.conj().T


def measure_and_entangle(system: PureQubit, axis: SpherePoint) -> TwoQubitState:
    """Alice copies the system's axis-basis value into a fresh |0> memory."""
    start = np.kron(system.vector, np.array([1, 0], dtype=complex))
    return TwoQubitState(axis_entangler(axis) @ start)


def alice_marginal(state: TwoQubitState, axis: SpherePoint) -> tuple[float, float]:
    """Probabilities of finding the system at ``axis`` and at its antipode.

    For states produced by :func:`measure_and_entangle` these are exactly the
    probabilities of Alice's two memory records.
    """
    u = axis_rotation(axis)
    rho = u.conj().T @ state.reduced_system() @ u
    return float(rho[0, 0].real), float(rho[1, 1].real)


def reverse_measurement(state: TwoQubitState, axis: SpherePoint) -> tuple[PureQubit, PureQubit]:
    """Bob undoes Alice's measurement, returning (system, memory).

    Raises
    ------
    NotInMeasurementImage
        If undoing the entangler leaves more than ``IMAGE_TOL`` of amplitude
        norm on the memory's |1> component.
    """
    # the axis entangler is an involution, so it is its own inverse
    undone = (axis_entangler(axis) @ state.amplitudes).reshape(2, 2)
    residual = float(np.linalg.norm(undone[:, 1]))
    if residual > IMAGE_TOL:
        raise NotInMeasurementImage(
            f"residual memory |1> amplitude {residual:.3e} exceeds {IMAGE_TOL:g}"
        )
    # undone ~ sigma * outer(u0, vh0): the state factors as u0 (x) vh0
    u, _, vh = np.linalg.svd(undone)
    return PureQubit.from_vector(u[:, 0], normalize=True), PureQubit.from_vector(
        vh[0], normalize=True
    )


def concurrence(state: TwoQubitState) -> float:
    a, b, c, d = state.amplitudes
    return float(2.0 * abs(a * d - b * c))


def fidelity(a: PureQubit, b: PureQubit) -> float:
    return min(1.0, float(abs(np.vdot(a.vector, b.vector)) ** 2))


@dataclass(frozen=True)
class CDPRecord:
    recovery_fidelity: float
    record_erased: bool
    longitude_lost_before_reversal: bool

    def to_dict(self) -> dict:
        return {
            "recovery_fidelity": self.recovery_fidelity,
            "record_erased": self.record_erased,
            "longitude_lost_before_reversal": self.longitude_lost_before_reversal,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def cdp_report(system: SpherePoint, axis: SpherePoint) -> CDPRecord:
    """Measure, check what Alice's side lost, then reverse and check the erasure."""
    original = pure_from_sphere(system)
    entangled = measure_and_entangle(original, axis)

    u = axis_rotation(axis)
    rho_axis = u.conj().T @ entangled.reduced_system() @ u
    lost = abs(rho_axis[0, 1]) <= 1e-9

    recovered, memory = reverse_measurement(entangled, axis)
    erased = bool(np.linalg.norm(memory.vector - np.array([1, 0])) <= 1e-9)
    return CDPRecord(
        recovery_fidelity=fidelity(original, recovered),
        record_erased=erased,
        longitude_lost_before_reversal=bool(lost),
    )


def angle_between_states(a: PureQubit, b: PureQubit) -> float:
    """Bloch-sphere angle between two pure states."""
    return great_circle_distance(a.to_sphere(), b.to_sphere())
