"""Correspondence between one-qubit pulse sequences and Ising circuits.

For any angle ``omega`` the operators

    X = sz (x) sz,   Y = sz (x) (u . s),   Z = 1 (x) (v . s)

with ``u = (sin w, -cos w, 0)`` and ``v = (cos w, sin w, 0)`` obey the
Pauli commutation relations. A pulse ``R(a, phi)`` maps to
``exp(-i a (cos phi X + sin phi Y) / 2)``, which is ``S(2 a)`` conjugated by
``R(phi, omega)`` on qubit 2. A pulse-length error ``a -> (1 + eps) a``
therefore becomes exactly a coupling error ``2a -> (1 + eps) 2a``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import (
    LocalLayer,
    Pulse,
    PulseCircuit,
    all_pulses,
    coupling,
    evaluate,
    is_trivial_angle,
    rot,
)
from .matcore import I2, SX, SY, SZ, dagger
from .synth import SolutionN3, SynthesisError, build_v_gate


@dataclass(frozen=True)
class SubalgebraFrame:
    omega: float = 0.0

    @property
    def u(self) -> np.ndarray:
        return np.array([math.sin(self.omega), -math.cos(self.omega), 0.0])

    @property
    def v(self) -> np.ndarray:
        return np.array([math.cos(self.omega), math.sin(self.omega), 0.0])

    def generators(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        u, v = self.u, self.v
        x = np.kron(SZ, SZ)
        y = np.kron(SZ, u[0] * SX + u[1] * SY)
        z = np.kron(I2, v[0] * SX + v[1] * SY)
        return x, y, z


def _expm_involution(angle: float, g: np.ndarray) -> np.ndarray:
    # exp(-i angle g / 2) for g with g @ g = 1
    return math.cos(angle / 2) * np.eye(g.shape[0]) - 1j * math.sin(angle / 2) * g


def lifted_rotation_exp(angle: float, phi: float, frame: SubalgebraFrame) -> np.ndarray:
    """Image of ``R(angle, phi)`` built from the generators directly."""
    x, y, _ = frame.generators()
    return _expm_involution(angle, math.cos(phi) * x + math.sin(phi) * y)


def lifted_rotation(angle: float, phi: float, frame: SubalgebraFrame) -> np.ndarray:
    """Image of ``R(angle, phi)`` as a dressed coupling ``S(2 angle)``."""
    d = np.kron(I2, rot(phi, frame.omega))
    return d @ coupling(2 * angle) @ dagger(d)


@dataclass(frozen=True)
class OneQubitSequence:
    """Pulse train in application order; ``pulses[0]`` acts first."""

    pulses: tuple[Pulse, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "pulses", tuple(p if isinstance(p, Pulse) else Pulse(*p) for p in self.pulses)
        )

    def evaluate(self, epsilon: float = 0.0) -> np.ndarray:
        u = I2
        for p in self.pulses:
            u = rot((1.0 + epsilon) * p.theta, p.phi) @ u
        return u

    def first_order(self) -> np.ndarray:
        """Derivative of :meth:`evaluate` with respect to the error at zero."""
        mats = [p.matrix() for p in self.pulses]
        total = np.zeros((2, 2), dtype=complex)
        for j, p in enumerate(self.pulses):
            gen = -0.5j * p.theta * (math.cos(p.phi) * SX + math.sin(p.phi) * SY)
            before = I2
            for m in mats[:j]:
                before = m @ before
            after = I2
            for m in mats[j + 1:]:
                after = m @ after
            total += after @ gen @ mats[j] @ before
        return total

    def to_dict(self) -> dict:
        return {"pulses": [{"angle": p.theta, "phi": p.phi} for p in self.pulses]}

    @classmethod
    def from_dict(cls, obj: dict) -> "OneQubitSequence":
        if not isinstance(obj, dict) or not isinstance(obj.get("pulses"), list):
            raise ValueError("one-qubit sequence JSON needs a 'pulses' list")
        out = []
        for i, p in enumerate(obj["pulses"]):
            if not isinstance(p, dict) or "angle" not in p:
                raise ValueError(f"pulses[{i}]: needs an 'angle' field")
            out.append(Pulse(float(p["angle"]), float(p.get("phi", 0.0))))
        return cls(tuple(out))

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def one_qubit_fidelity(reference: np.ndarray, actual: np.ndarray) -> float:
    return abs(np.trace(dagger(reference) @ actual)) / 2


def lift_sequence(seq: OneQubitSequence, frame: SubalgebraFrame = SubalgebraFrame()) -> PulseCircuit:
    """Two-qubit circuit whose dressed value is the product of lifted pulses.

    Consecutive dressings ``R(phi_j, w)^dag R(phi_{j-1}, w)`` merge into a
    single ``R(phi_{j-1} - phi_j, w)`` on qubit 2; the outermost ones become
    the boundary layers.
    """
    if not seq.pulses:
        raise ValueError("cannot lift an empty sequence")
    w = frame.omega
    ps = seq.pulses
    couplings = tuple(2 * p.theta for p in ps)
    layers = tuple(
        LocalLayer(qubit2=(Pulse(a.phi - b.phi, w),)) for a, b in zip(ps, ps[1:])
    )
    pre = LocalLayer(qubit2=(Pulse(-ps[0].phi, w),))
    post = LocalLayer(qubit2=(Pulse(ps[-1].phi, w),))
    return PulseCircuit(couplings, layers, pre, post)


def project_circuit(circuit: PulseCircuit, phi1: float = 0.0) -> tuple[OneQubitSequence, SubalgebraFrame]:
    """Inverse of :func:`lift_sequence` for circuits with a single dressing axis.

    Every local layer must leave qubit 1 alone and rotate qubit 2 about one
    common axis ``w``; the boundary layers are ignored. Pulse phases follow
    ``Phi_{j+1} = Phi_j - t_j`` from the free starting phase ``phi1``.
    """
    axes = set()
    nets = []
    for layer in circuit.locals:
        if any(not is_trivial_angle(p.theta) for p in layer.qubit1):
            raise SynthesisError("qubit-1 pulses present; simplify to the minimal form first")
        for p in layer.qubit2:
            axes.add(_axis(p))
        nets.append(layer.qubit2)
    if len(axes) > 1:
        raise SynthesisError(f"local layers use {len(axes)} distinct axes; no single frame")
    w = axes.pop() if axes else 0.0
    phases = [phi1]
    for train in nets:
        net = 0.0
        for p in train:
            # R(t, w + pi) = R(-t, w)
            net += p.theta if abs(math.remainder(p.phi - w, 2 * math.pi)) < 1e-9 else -p.theta
        phases.append(phases[-1] - net)
    pulses = tuple(Pulse(t / 2, ph) for t, ph in zip(circuit.couplings, phases))
    return OneQubitSequence(pulses), SubalgebraFrame(w)


def project_to_one_qubit(s: SolutionN3, phi1: float = 0.0) -> OneQubitSequence:
    """One-qubit sequence ``R(T1/2, Phi1), R(T2/2, Phi2), R(T3/2, Phi3)`` (application order)."""
    if not s.is_minimal():
        raise SynthesisError("solution is not minimal; apply minimal_record first")
    return project_circuit(s.circuit(), phi1)[0]


def _axis(p: Pulse) -> float:
    """Rotation axis of ``p`` as an angle in ``[0, pi)``."""
    a = math.fmod(p.phi, math.pi)
    if a < 0:
        a += math.pi
    return 0.0 if math.pi - a < 1e-12 else a


@dataclass(frozen=True)
class AxisReport:
    axes: tuple[float, ...]
    qubit1_pulses: int
    single_frame: bool


def axis_report(circuit: PulseCircuit, include_boundary: bool = True, tol: float = 1e-9) -> AxisReport:
    """Distinct rotation axes among the nontrivial pulses of ``circuit``.

    A circuit factors into lifted rotations of one frame only if its pulses
    all act on qubit 2 about a single axis.
    """
    axes: list[float] = []
    q1 = 0
    for qubit, p in all_pulses(circuit, include_boundary):
        if is_trivial_angle(p.theta):
            continue
        if qubit == 1:
            q1 += 1
        a = _axis(p)
        if not any(abs(a - b) <= tol for b in axes):
            axes.append(a)
    axes.sort()
    return AxisReport(tuple(axes), q1, len(axes) <= 1 and q1 == 0)


def no_map_witness_v() -> AxisReport:
    """Axis report for the six-coupling robust V gate."""
    return axis_report(build_v_gate())


def scrofulous(theta: float, phi1: float = 0.0) -> OneQubitSequence:
    """Image of the simplest family at parameter ``theta``."""
    a = -math.pi / math.cos(theta) / 2
    return OneQubitSequence((Pulse(a, phi1), Pulse(math.pi, phi1 + theta), Pulse(a, phi1)))


def fidelity_pair(
    circuit: PulseCircuit, seq: OneQubitSequence, epsilons: Sequence[float]
) -> list[tuple[float, float, float]]:
    """``(eps, two-qubit fidelity, one-qubit fidelity)`` against the error-free values."""
    u0 = evaluate(circuit)
    v0 = seq.evaluate()
    out = []
    for e in epsilons:
        f2 = abs(np.trace(dagger(u0) @ evaluate(circuit, e))) / 4
        out.append((e, f2, one_qubit_fidelity(v0, seq.evaluate(e))))
    return out


def frames_agree(angle: float, phi: float, frame: SubalgebraFrame) -> float:
    """Distance between the two constructions of a lifted rotation."""
    return float(np.linalg.norm(lifted_rotation(angle, phi, frame) - lifted_rotation_exp(angle, phi, frame)))

