"""First-order sensitivity of a pulse circuit to a fractional coupling error.

Writing ``U(eps) = U - i eps dU + O(eps^2)``, the circuit is robust when
``dU = 0``. The analytic operator is a sum over couplings of
``(T_j / 4) * (gates after j) @ ZZ @ (S_j and gates before j)``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import PulseCircuit, coupling, evaluate
from .matcore import TOL, ZZ, dist_up_to_phase, I4

# infidelities below this are treated as numerically zero in the slope fit
INFIDELITY_FLOOR = 1e-15


@dataclass(frozen=True)
class FirstOrderReport:
    delta_u: np.ndarray
    norm: float
    is_robust: bool


def _first_order(circuit: PulseCircuit) -> np.ndarray:
    n = circuit.n
    gates = [coupling(circuit.couplings[0])]
    for layer, theta in zip(circuit.locals, circuit.couplings[1:]):
        gates.append(layer.matrix())
        gates.append(coupling(theta))
    # prefix[i] = gates[i-1] @ ... @ gates[0]; suffix[i] = gates[-1] @ ... @ gates[i]
    prefix = [I4]
    for g in gates:
        prefix.append(g @ prefix[-1])
    suffix = [I4] * (len(gates) + 1)
    for i in range(len(gates) - 1, -1, -1):
        suffix[i] = suffix[i + 1] @ gates[i]
    total = np.zeros((4, 4), dtype=complex)
    for j in range(n):
        idx = 2 * j
        total += (circuit.couplings[j] / 4) * (suffix[idx + 1] @ ZZ @ prefix[idx + 1])
    return total


def delta_u(circuit: PulseCircuit, tol: float = TOL.robust) -> FirstOrderReport:
    """Analytic first-order error operator of the undressed circuit."""
    d = _first_order(circuit)
    norm = float(np.linalg.norm(d))
    return FirstOrderReport(d, norm, norm <= tol)


def delta_u_oracle(circuit: PulseCircuit, h: float = 1e-4) -> np.ndarray:
    """Central-difference estimate ``i (U(h) - U(-h)) / (2h)`` of the first-order term."""
    if not 1e-6 <= h <= 1e-3:
        raise ValueError("step h must lie in [1e-6, 1e-3]")
    core = circuit.core()
    return 1j * (evaluate(core, h) - evaluate(core, -h)) / (2 * h)


def check_robust(circuit: PulseCircuit, tol: float = TOL.robust) -> bool:
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    return delta_u(circuit, tol).is_robust


@dataclass(frozen=True)
class ScanSample:
    epsilon: float
    infidelity: float
    distance: float


@dataclass(frozen=True)
class ErrorScan:
    samples: tuple[ScanSample, ...]
    slope_fit: float

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["epsilon", "infidelity", "distance"])
        for s in self.samples:
            writer.writerow([repr(s.epsilon), repr(s.infidelity), repr(s.distance)])
        return buf.getvalue()


def infidelity(target: np.ndarray, actual: np.ndarray) -> float:
    """``1 - |Tr(target^dag actual)| / d``, evaluated as ``dist^2 / (2d)`` for accuracy."""
    d = target.shape[0]
    return min(1.0, dist_up_to_phase(actual, target) ** 2 / (2 * d))


def fit_slope(epsilons: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares exponent of ``values ~ eps^p``.

    Returns ``nan`` when fewer than two grid points are given and ``inf``
    when fewer than two values clear the numerical floor.
    """
    if len(epsilons) < 2:
        return math.nan
    pts = [(math.log(e), math.log(v)) for e, v in zip(epsilons, values) if v > INFIDELITY_FLOOR]
    if len(pts) < 2:
        return math.inf
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    return float(np.polyfit(x, y, 1)[0])


def scan(circuit: PulseCircuit, target: np.ndarray, eps_grid: Sequence[float]) -> ErrorScan:
    """Infidelity and phase-free distance to ``target`` of the dressed circuit across ``eps_grid``."""
    grid = [float(e) for e in eps_grid]
    if not grid:
        raise ValueError("epsilon grid is empty")
    if any(e <= 0 for e in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("epsilon grid must be positive and strictly increasing")
    target = np.asarray(target, dtype=complex)
    samples = []
    for e in grid:
        u = evaluate(circuit, e, dressed=True)
        samples.append(ScanSample(e, infidelity(target, u), dist_up_to_phase(u, target)))
    slope = fit_slope(grid, [s.infidelity for s in samples])
    return ErrorScan(tuple(samples), slope)


def log_grid(lo: float, hi: float, n: int) -> list[float]:
    if lo <= 0 or hi <= lo or n < 1:
        raise ValueError("log grid needs 0 < lo < hi and n >= 1")
    if n == 1:
        return [lo]
    return [float(x) for x in np.logspace(math.log10(lo), math.log10(hi), n)]
