"""Gate constructors and the interleaved pulse-circuit representation.

A :class:`PulseCircuit` describes

    U = S(T_N) L_{N-1} S(T_{N-1}) ... L_1 S(T_1)

where ``S(T) = exp(-i T sz(x)sz / 4)`` is a free Ising evolution and each
``L_j`` is a layer of error-free rf pulses on the two qubits. Sequences are
stored in application order: ``couplings[0]`` is ``T_1``, the first gate to
act on the state. Optional ``pre``/``post`` layers dress the circuit on the
outside; they do not take part in the first-order error analysis.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .matcore import I2, SX, SY, TOL

_ZZ_DIAG = np.array([1.0, -1.0, -1.0, 1.0])


def rot(theta: float, phi: float) -> np.ndarray:
    """rf rotation ``R(theta, phi) = exp(-i theta (cos phi sx + sin phi sy) / 2)``."""
    c = math.cos(theta / 2)
    s = math.sin(theta / 2)
    return c * I2 - 1j * s * (math.cos(phi) * SX + math.sin(phi) * SY)


def coupling(theta: float) -> np.ndarray:
    """Ising evolution ``S(Theta) = exp(-i Theta sz(x)sz / 4)`` (diagonal)."""
    return np.diag(np.exp(-1j * theta / 4 * _ZZ_DIAG))


@dataclass(frozen=True)
class Pulse:
    """One rf pulse ``R(theta, phi)``; angles in radians."""

    theta: float
    phi: float = 0.0

    def matrix(self) -> np.ndarray:
        return rot(self.theta, self.phi)


def _pulses(spec) -> tuple[Pulse, ...]:
    if spec is None:
        return ()
    if isinstance(spec, Pulse):
        return (spec,)
    return tuple(p if isinstance(p, Pulse) else Pulse(*p) for p in spec)


def pulse_product(pulses: Sequence[Pulse]) -> np.ndarray:
    """Matrix of a pulse train; ``pulses[0]`` acts first."""
    out = I2
    for p in pulses:
        out = p.matrix() @ out
    return out


@dataclass(frozen=True)
class LocalLayer:
    """Simultaneous pulse trains on qubit 1 and qubit 2 (each in application order)."""

    qubit1: tuple[Pulse, ...] = ()
    qubit2: tuple[Pulse, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "qubit1", _pulses(self.qubit1))
        object.__setattr__(self, "qubit2", _pulses(self.qubit2))

    @classmethod
    def single(cls, q1: Pulse | None = None, q2: Pulse | None = None) -> "LocalLayer":
        return cls(_pulses(q1), _pulses(q2))

    def matrix(self) -> np.ndarray:
        return np.kron(pulse_product(self.qubit1), pulse_product(self.qubit2))

    def then(self, other: "LocalLayer") -> "LocalLayer":
        """Layer that applies ``self`` first and ``other`` afterwards."""
        return LocalLayer(self.qubit1 + other.qubit1, self.qubit2 + other.qubit2)

    def inverse(self) -> "LocalLayer":
        return LocalLayer(
            tuple(Pulse(-p.theta, p.phi) for p in reversed(self.qubit1)),
            tuple(Pulse(-p.theta, p.phi) for p in reversed(self.qubit2)),
        )

    def swapped(self) -> "LocalLayer":
        return LocalLayer(self.qubit2, self.qubit1)

    @property
    def is_empty(self) -> bool:
        return not self.qubit1 and not self.qubit2


IDENTITY_LAYER = LocalLayer()


@dataclass(frozen=True)
class PulseCircuit:
    couplings: tuple[float, ...]
    locals: tuple[LocalLayer, ...] = ()
    pre: LocalLayer = field(default=IDENTITY_LAYER)
    post: LocalLayer = field(default=IDENTITY_LAYER)

    def __post_init__(self):
        couplings = tuple(float(t) for t in self.couplings)
        layers = tuple(self.locals)
        if not couplings:
            raise ValueError("a pulse circuit needs at least one coupling")
        if not all(math.isfinite(t) for t in couplings):
            raise ValueError("coupling angles must be finite")
        if not layers and len(couplings) > 1:
            layers = (IDENTITY_LAYER,) * (len(couplings) - 1)
        if len(layers) != len(couplings) - 1:
            raise ValueError(
                f"{len(couplings)} couplings need {len(couplings) - 1} local layers, got {len(layers)}"
            )
        object.__setattr__(self, "couplings", couplings)
        object.__setattr__(self, "locals", layers)

    @property
    def n(self) -> int:
        return len(self.couplings)

    def core(self) -> "PulseCircuit":
        """The same circuit with the boundary dressing removed."""
        return PulseCircuit(self.couplings, self.locals)

    def dressed(self, pre: LocalLayer = IDENTITY_LAYER, post: LocalLayer = IDENTITY_LAYER) -> "PulseCircuit":
        """Add ``pre`` before and ``post`` after the existing boundary layers."""
        return PulseCircuit(self.couplings, self.locals, pre.then(self.pre), self.post.then(post))

    def then(self, other: "PulseCircuit", middle: LocalLayer = IDENTITY_LAYER) -> "PulseCircuit":
        """Concatenate: ``self`` first, then ``middle``, then ``other``."""
        joint = self.post.then(middle).then(other.pre)
        return PulseCircuit(
            self.couplings + other.couplings,
            self.locals + (joint,) + other.locals,
            self.pre,
            other.post,
        )


def evaluate(circuit: PulseCircuit, epsilon: float = 0.0, *, dressed: bool = False) -> np.ndarray:
    """Unitary of ``circuit`` when every coupling runs as ``S((1 + epsilon) T)``.

    With ``dressed=True`` the boundary layers are included.
    """
    u = coupling((1.0 + epsilon) * circuit.couplings[0])
    for layer, theta in zip(circuit.locals, circuit.couplings[1:]):
        u = coupling((1.0 + epsilon) * theta) @ (layer.matrix() @ u)
    if dressed:
        u = circuit.post.matrix() @ u @ circuit.pre.matrix()
    return u


def subproduct(circuit: PulseCircuit, first: int, last: int) -> np.ndarray:
    """Error-free unitary from coupling ``first`` to coupling ``last`` (1-based, inclusive)."""
    if not 1 <= first <= last <= circuit.n:
        raise ValueError(f"invalid coupling range {first}..{last} for N={circuit.n}")
    sub = PulseCircuit(circuit.couplings[first - 1:last], circuit.locals[first - 1:last - 1])
    return evaluate(sub)


def execution_time(circuit: PulseCircuit) -> float:
    """Total coupling angle ``sum |T_j|``; rf pulses are taken as instantaneous."""
    return float(sum(abs(t) for t in circuit.couplings))


def is_physical(circuit: PulseCircuit) -> bool:
    """True when every coupling angle is non-negative (``T = J t`` with ``J > 0``)."""
    return all(t >= 0 for t in circuit.couplings)


def make_physical(circuit: PulseCircuit) -> PulseCircuit:
    """Replace each negative coupling by its positive counterpart wrapped in x pulses.

    ``(sx (x) 1) S(T) (sx (x) 1) = S(-T)`` holds for every ``T``, so the
    returned circuit agrees with the input for all error strengths, up to a
    global phase.
    """
    flip = LocalLayer(qubit1=(Pulse(math.pi, 0.0),))
    couplings = []
    before = [IDENTITY_LAYER] * circuit.n
    after = [IDENTITY_LAYER] * circuit.n
    for j, t in enumerate(circuit.couplings):
        couplings.append(abs(t))
        if t < 0:
            before[j] = flip
            after[j] = flip
    layers = tuple(
        after[j].then(layer).then(before[j + 1]) for j, layer in enumerate(circuit.locals)
    )
    return PulseCircuit(
        tuple(couplings),
        layers,
        circuit.pre.then(before[0]),
        after[-1].then(circuit.post),
    )


def swap_qubits(circuit: PulseCircuit) -> PulseCircuit:
    """Relabel qubits 1 <-> 2; the coupling is symmetric so only local layers move."""
    return PulseCircuit(
        circuit.couplings,
        tuple(layer.swapped() for layer in circuit.locals),
        circuit.pre.swapped(),
        circuit.post.swapped(),
    )


# --- JSON ---------------------------------------------------------------

def _train_to_json(pulses: tuple[Pulse, ...]):
    items = [{"theta": p.theta, "phi": p.phi} for p in pulses]
    return items[0] if len(items) == 1 else items


def _train_from_json(obj, where: str) -> tuple[Pulse, ...]:
    if isinstance(obj, dict):
        obj = [obj]
    if not isinstance(obj, list):
        raise ValueError(f"{where}: expected a pulse object or a list of pulses")
    out = []
    for i, p in enumerate(obj):
        if not isinstance(p, dict) or "theta" not in p:
            raise ValueError(f"{where}[{i}]: pulse needs a 'theta' field")
        out.append(Pulse(float(p["theta"]), float(p.get("phi", 0.0))))
    return tuple(out)


def _layer_to_json(layer: LocalLayer):
    return [_train_to_json(layer.qubit1), _train_to_json(layer.qubit2)]


def _layer_from_json(obj, where: str) -> LocalLayer:
    if not isinstance(obj, list) or len(obj) != 2:
        raise ValueError(f"{where}: a local layer is a two-element list [qubit1, qubit2]")
    return LocalLayer(_train_from_json(obj[0], f"{where}[0]"), _train_from_json(obj[1], f"{where}[1]"))


def circuit_to_dict(circuit: PulseCircuit) -> dict:
    out = {
        "n": circuit.n,
        "couplings": list(circuit.couplings),
        "locals": [_layer_to_json(layer) for layer in circuit.locals],
    }
    if not (circuit.pre.is_empty and circuit.post.is_empty):
        out["boundary"] = {"pre": _layer_to_json(circuit.pre), "post": _layer_to_json(circuit.post)}
    return out


def circuit_from_dict(obj: dict) -> PulseCircuit:
    if not isinstance(obj, dict):
        raise ValueError("circuit JSON must be an object")
    try:
        couplings = [float(t) for t in obj["couplings"]]
    except (KeyError, TypeError) as exc:
        raise ValueError("circuit JSON needs a 'couplings' list of numbers") from exc
    if "n" in obj and int(obj["n"]) != len(couplings):
        raise ValueError(f"'n' is {obj['n']} but {len(couplings)} couplings are listed")
    layers = tuple(_layer_from_json(l, f"locals[{i}]") for i, l in enumerate(obj.get("locals", [])))
    pre = post = IDENTITY_LAYER
    boundary = obj.get("boundary")
    if boundary is not None:
        if "pre" in boundary:
            pre = _layer_from_json(boundary["pre"], "boundary.pre")
        if "post" in boundary:
            post = _layer_from_json(boundary["post"], "boundary.post")
    return PulseCircuit(tuple(couplings), layers, pre, post)


def dumps(circuit: PulseCircuit, **extra) -> str:
    """Serialise to the circuit JSON format; ``extra`` keys are appended verbatim."""
    return json.dumps({**circuit_to_dict(circuit), **extra}, indent=2) + "\n"


def loads(text: str) -> PulseCircuit:
    return circuit_from_dict(json.loads(text))


def all_pulses(circuit: PulseCircuit, include_boundary: bool = True) -> Iterable[tuple[int, Pulse]]:
    """Yield ``(qubit, pulse)`` for every rf pulse in the circuit."""
    layers = list(circuit.locals)
    if include_boundary:
        layers = [circuit.pre, *layers, circuit.post]
    for layer in layers:
        for p in layer.qubit1:
            yield 1, p
        for p in layer.qubit2:
            yield 2, p


def is_trivial_angle(theta: float, tol: float = TOL.singular) -> bool:
    """Whether ``R(theta, .)`` is the identity up to sign (``theta`` a multiple of 2 pi)."""
    r = math.remainder(theta, 2 * math.pi)
    return abs(r) <= tol
