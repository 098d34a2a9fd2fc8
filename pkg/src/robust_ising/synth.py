"""Construction of robust composite Ising gates.

Three-coupling circuits

    U = S(T3) [Rb2 (x) R2] S(T2) [Rb1 (x) R1] S(T1)

are first-order insensitive to a fractional error in every coupling angle
exactly when ``T2 = 2 pi k`` (``k != 0``), all pulses share the x axis,
the qubit-1 pulses ``Rb_i`` are 0 or pi rotations and

    T1 = alpha T2 sin(t2) / sin(gamma t1 + t2)
    T3 = beta  T2 sin(t1) / sin(gamma t1 + t2)

with ``gamma = (-1)^k``, ``alpha = +1`` iff ``Rb1`` is an odd multiple of
pi and ``beta = gamma`` iff ``Rb2`` is an odd multiple of pi. Odd
qubit-1 rotations are x flips, which only change the sign of the adjacent
coupling, so ``alpha = -1, beta = -gamma`` (no qubit-1 pulses) loses nothing.

The most useful member takes ``k = 1`` and ``-t1 = t2 = theta`` in
``[pi/2, pi]``, giving ``T1 = T3 = -pi sec(theta)``; dressed with
``R(eta, 0)`` on qubit 2 it equals ``S(4 zeta)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from typing import Callable

import numpy as np

from .circuit import (
    IDENTITY_LAYER,
    LocalLayer,
    Pulse,
    PulseCircuit,
    evaluate,
    execution_time,
)
from .matcore import TOL
from .robustness import delta_u
from .schmidt import schmidt_decompose

TWO_PI = 2.0 * math.pi

# largest -sec(theta) searched when enumerating family roots; caps T1 = T3 at 64 pi
MAX_SEC = 64.0
_ROOT_GRID_STEP = 1e-3


class SynthesisError(ValueError):
    """Requested parameters do not define a valid robust circuit."""


class SingularParameters(SynthesisError):
    """A denominator of the closed-form solution vanishes."""


class UnreachableTarget(SynthesisError):
    """No member of the three-coupling family realises the requested gate."""


def _parity_sign(n: int) -> int:
    return -1 if n % 2 else 1


def _multiple_of_pi(x: float, tol: float = TOL.singular) -> int | None:
    n = round(x / math.pi)
    return n if abs(x - n * math.pi) <= tol else None


@dataclass(frozen=True)
class SolutionBranch:
    case: str  # "case2" (also covers case 3) or "case4a"
    k: int
    l: int = 0
    m: int = 0
    p: int = 0
    q: int = 0


@dataclass(frozen=True)
class SolutionN3:
    """Parameters of one robust three-coupling circuit.

    ``theta*``/``phi1`` are qubit-2 pulses, ``thetabar*``/``phibar1`` qubit-1
    pulses; the second pulse pair always has phase 0. ``alpha``, ``beta`` and
    ``gamma`` are ``None`` for solutions outside the x-flip family.
    """

    theta1: float
    theta2: float
    thetabar1: float
    thetabar2: float
    coupling1: float
    coupling2: float
    coupling3: float
    alpha: int | None = None
    beta: int | None = None
    gamma: int | None = None
    phi1: float = 0.0
    phibar1: float = 0.0
    branch: SolutionBranch | None = None

    @property
    def k(self) -> int:
        return round(self.coupling2 / TWO_PI)

    def circuit(self) -> PulseCircuit:
        def train(theta, phi=0.0):
            return () if theta == 0 else (Pulse(theta, phi),)

        first = LocalLayer(train(self.thetabar1, self.phibar1), train(self.theta1, self.phi1))
        second = LocalLayer(train(self.thetabar2), train(self.theta2))
        return PulseCircuit((self.coupling1, self.coupling2, self.coupling3), (first, second))

    def is_minimal(self) -> bool:
        return (
            self.thetabar1 == 0
            and self.thetabar2 == 0
            and self.phi1 == 0
            and self.phibar1 == 0
        )

    def to_dict(self) -> dict:
        out = asdict(self)
        if self.branch is None:
            out.pop("branch")
        return out


def _ratio(numerator_sign: int, two_pi_k: float, s: float, denom: float) -> float:
    return numerator_sign * two_pi_k * s / denom


def general_solution(
    theta1: float, theta2: float, k: int, alpha: int = -1, beta: int | None = None
) -> tuple[SolutionN3, PulseCircuit]:
    """Member of the x-flip family for qubit-2 angles ``theta1``, ``theta2``.

    ``beta`` defaults to ``-gamma`` so that the default emission has no
    qubit-1 pulses. Negative ``k`` is accepted (``T2 < 0``); such circuits
    need :func:`~robust_ising.circuit.make_physical` before execution.
    """
    k = int(k)
    if k == 0:
        raise SynthesisError("k = 0 leaves no entangling coupling (the circuit collapses to N <= 2)")
    gamma = _parity_sign(k)
    if beta is None:
        beta = -gamma
    if alpha not in (1, -1) or beta not in (1, -1):
        raise ValueError("alpha and beta must be +1 or -1")
    denom = math.sin(gamma * theta1 + theta2)
    if abs(denom) < TOL.singular:
        raise SingularParameters(
            f"sin(gamma*theta1 + theta2) = {denom:.3e} vanishes for theta1={theta1!r}, theta2={theta2!r}, k={k}"
        )
    two_pi_k = TWO_PI * k
    sol = SolutionN3(
        theta1=theta1,
        theta2=theta2,
        thetabar1=0.0 if alpha == -1 else math.pi,
        thetabar2=0.0 if beta == -gamma else math.pi,
        coupling1=_ratio(alpha, two_pi_k, math.sin(theta2), denom),
        coupling2=two_pi_k,
        coupling3=_ratio(beta, two_pi_k, math.sin(theta1), denom),
        alpha=alpha,
        beta=beta,
        gamma=gamma,
    )
    return sol, sol.circuit()


def canonical_record(s: SolutionN3) -> SolutionN3:
    """Fold phases into angles and reduce qubit-1 rotations to 0 or pi.

    ``R(theta, l pi) = R((-1)^l theta, 0)``, and ``R(n pi, 0)`` equals
    ``R(0, 0)`` or ``R(pi, 0)`` up to sign.
    """
    nb1 = _multiple_of_pi(s.thetabar1)
    nb2 = _multiple_of_pi(s.thetabar2)
    if nb1 is None or nb2 is None:
        raise SynthesisError("qubit-1 rotations are not multiples of pi; not in the x-flip family")
    m = _multiple_of_pi(s.phi1)
    l = _multiple_of_pi(s.phibar1)
    if m is None or l is None:
        raise SynthesisError("pulse phases must be multiples of pi")
    gamma = _parity_sign(s.k)
    alpha = 1 if nb1 % 2 else -1
    beta = gamma if nb2 % 2 else -gamma
    return SolutionN3(
        theta1=_parity_sign(m) * s.theta1,
        theta2=s.theta2,
        thetabar1=math.pi * (nb1 % 2),
        thetabar2=math.pi * (nb2 % 2),
        coupling1=s.coupling1,
        coupling2=s.coupling2,
        coupling3=s.coupling3,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
    )


def minimal_record(s: SolutionN3) -> SolutionN3:
    """Equivalent record with ``alpha = -1`` and ``beta = -gamma``."""
    c = canonical_record(s)
    return replace(
        c,
        thetabar1=0.0,
        thetabar2=0.0,
        coupling1=-c.coupling1 if c.alpha == 1 else c.coupling1,
        coupling3=-c.coupling3 if c.beta == c.gamma else c.coupling3,
        alpha=-1,
        beta=-c.gamma,
    )


def simplify_to_minimal(s: SolutionN3) -> PulseCircuit:
    """Minimal circuit for ``s`` plus the boundary x flips that restore the original.

    An odd qubit-1 pulse before ``T2`` is pushed through ``S(T1)`` to the
    input side, flipping the sign of ``T1``; one after ``T2`` is pushed
    through ``S(T3)`` to the output side. The dressed result equals
    ``s.circuit()`` up to a global phase.
    """
    c = canonical_record(s)
    mini = minimal_record(s)
    flip = LocalLayer(qubit1=(Pulse(math.pi, 0.0),))
    pre = flip if c.alpha == 1 else IDENTITY_LAYER
    post = flip if c.beta == c.gamma else IDENTITY_LAYER
    return mini.circuit().dressed(pre=pre, post=post)


# --- the simplest family ----------------------------------------------------

def family_value(theta: float) -> float:
    return math.cos(theta) * math.sin(0.5 * math.pi / math.cos(theta))


@dataclass(frozen=True)
class CnotFamilyPoint:
    """Simplest family member ``-t1 = t2 = theta``, ``k = 1``, no qubit-1 pulses."""

    theta: float
    eta: float
    zeta: float

    @property
    def coupling_angle(self) -> float:
        return -math.pi / math.cos(self.theta)

    def solution(self) -> SolutionN3:
        return general_solution(-self.theta, self.theta, 1)[0]

    def circuit(self) -> PulseCircuit:
        t = self.coupling_angle
        layers = (LocalLayer(qubit2=(Pulse(-self.theta),)), LocalLayer(qubit2=(Pulse(self.theta),)))
        return PulseCircuit((t, TWO_PI, t), layers)

    def dressed_circuit(self, flip: bool = False) -> PulseCircuit:
        """Circuit conjugated by ``R(eta, 0)`` on qubit 2; equals ``S(4 zeta)``.

        With ``flip`` the dressing uses ``eta + pi`` and the result is
        ``S(-4 zeta)`` instead.
        """
        eta = self.eta + math.pi if flip else self.eta
        return self.circuit().dressed(
            pre=LocalLayer(qubit2=(Pulse(-eta),)), post=LocalLayer(qubit2=(Pulse(eta),))
        )


def family_point(theta: float) -> CnotFamilyPoint:
    """Dressing angle ``eta`` and rotation ``zeta`` for family parameter ``theta``.

    ``cos(zeta) = cos(theta) sin((pi/2) sec(theta))`` with ``zeta`` in
    ``[0, pi]``; ``eta`` solves ``tan(eta) = -tan(theta) sec((pi/2) sec(theta))``
    on the branch that yields ``S(+4 zeta)`` for circuits stored in
    application order.
    """
    if not math.pi / 2 < theta <= math.pi:
        raise SynthesisError(f"family parameter theta={theta!r} must lie in (pi/2, pi]")
    a = 0.5 * math.pi / math.cos(theta)
    eta = math.atan2(-math.sin(theta), math.cos(theta) * math.cos(a))
    zeta = math.acos(max(-1.0, min(1.0, math.cos(theta) * math.sin(a))))
    return CnotFamilyPoint(theta, eta, zeta)


def bisect(f: Callable[[float], float], lo: float, hi: float) -> float:
    """Bisection to machine precision; ``f(lo)`` and ``f(hi)`` must differ in sign."""
    flo = f(lo)
    fhi = f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError("bracket does not straddle a root")
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo if abs(flo) <= abs(f(hi)) else hi


THETA_STAR_BRACKET = (math.pi / 2 + 1e-6, math.pi - 1e-6)


def solve_theta_star() -> float:
    """``theta*`` such that ``theta = pi - theta*`` gives ``zeta = pi/4``.

    The residual ``cos(theta) sin((pi/2) sec theta) - cos(pi/4)`` changes
    sign exactly once on :data:`THETA_STAR_BRACKET`.
    """
    target = math.cos(math.pi / 4)
    root = bisect(lambda t: family_value(t) - target, *THETA_STAR_BRACKET)
    return math.pi - root


def family_roots(cos_zeta: float, max_sec: float = MAX_SEC) -> list[float]:
    """All ``theta`` in ``(pi/2, pi)`` with ``cos(theta) sin((pi/2) sec theta) = cos_zeta``.

    With ``u = -sec(theta)`` the left side is ``sin(pi u / 2) / u``; sign
    changes are located on a uniform ``u`` grid over ``[1, max_sec]`` and
    refined by bisection in ``theta``. Sorted by increasing ``u``, i.e. by
    execution time.
    """
    u = np.arange(1.0, max_sec + _ROOT_GRID_STEP, _ROOT_GRID_STEP)
    g = np.sin(0.5 * math.pi * u) / u - cos_zeta
    roots = []
    for i in np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0)[0]:
        lo = math.acos(-1.0 / u[i + 1])
        hi = math.acos(-1.0 / u[i])
        lo, hi = min(lo, hi), max(lo, hi)
        roots.append(bisect(lambda t: family_value(t) - cos_zeta, lo, hi))
    for i in np.nonzero(g[1:] == 0)[0]:
        roots.append(math.acos(-1.0 / u[i + 1]))
    return sorted(set(roots), key=lambda t: -1.0 / math.cos(t))


def robust_s_candidates(theta_target: float) -> list[tuple[CnotFamilyPoint, bool]]:
    """Family members whose dressed circuit equals ``S(theta_target)`` up to phase.

    Each entry is ``(point, flip)`` for use with
    :meth:`CnotFamilyPoint.dressed_circuit`, ordered by execution time.
    ``S(T + 4 pi) = -S(T)``, so only ``T mod 4 pi`` matters.
    """
    r = math.fmod(theta_target, 4 * math.pi)
    if r < 0:
        r += 4 * math.pi
    if min(r, 4 * math.pi - r) < 1e-12:
        raise UnreachableTarget(
            "target S(0) is the identity; the family reaches it only at the theta = pi endpoint"
        )
    zeta = r / 4
    candidates = [(family_point(t), False) for t in family_roots(math.cos(zeta))]
    # S(-4 (pi - zeta)) = -S(4 zeta)
    candidates += [(family_point(t), True) for t in family_roots(-math.cos(zeta))]
    candidates.sort(key=lambda c: c[0].coupling_angle)
    return candidates


def robust_s_point(theta_target: float, branch: int = 0) -> tuple[CnotFamilyPoint, bool]:
    """The ``branch``-th entry of :func:`robust_s_candidates`, 0 being the fastest."""
    candidates = robust_s_candidates(theta_target)
    if not candidates:
        raise UnreachableTarget(f"no family member with -sec(theta) <= {MAX_SEC} realises S({theta_target!r})")
    if not 0 <= branch < len(candidates):
        raise UnreachableTarget(f"branch {branch} requested but only {len(candidates)} roots exist")
    return candidates[branch]


def robust_s(theta_target: float, branch: int = 0) -> PulseCircuit:
    """Robust three-coupling circuit equal to ``S(theta_target)`` once dressed."""
    point, flip = robust_s_point(theta_target, branch)
    return point.dressed_circuit(flip)


# --- CNOT and V ---------------------------------------------------------------

def _rz_train(angle: float) -> tuple[Pulse, ...]:
    # R(pi/2, 0) R(angle, pi/2) R(-pi/2, 0) = exp(-i angle sz / 2)
    return (Pulse(-math.pi / 2, 0.0), Pulse(angle, math.pi / 2), Pulse(math.pi / 2, 0.0))


# Hadamard up to phase: R(pi, 0) R(pi/2, pi/2)
_H_TRAIN = (Pulse(math.pi / 2, math.pi / 2), Pulse(math.pi, 0.0))
_X_TRAIN = (Pulse(math.pi, 0.0),)

# CNOT = (1 (x) H) (Rz(pi/2) (x) Rz(pi/2)) (X (x) 1) S(pi) (X (x) 1) (1 (x) H), up to phase
CNOT_PRE = LocalLayer(_X_TRAIN, _H_TRAIN)
CNOT_POST = LocalLayer(_X_TRAIN + _rz_train(math.pi / 2), _rz_train(math.pi / 2) + _H_TRAIN)

CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
V_GATE = np.array([[1, 0, 0, 0], [0, 0, -1j, 0], [0, -1j, 0, 0], [0, 0, 0, 1]], dtype=complex)


def bare_cnot() -> PulseCircuit:
    """CNOT from a single ``S(pi)`` with the same local dressing as :func:`build_cnot`."""
    return PulseCircuit((math.pi,), pre=CNOT_PRE, post=CNOT_POST)


def build_cnot() -> PulseCircuit:
    """Robust CNOT (control qubit 1): the fastest robust ``S(pi)`` in Cartan dressing."""
    return robust_s(math.pi).dressed(pre=CNOT_PRE, post=CNOT_POST)


_X_HALF = (Pulse(math.pi / 2, 0.0),)
_Y_HALF = (Pulse(math.pi / 2, math.pi / 2),)
_X_HALF_INV = (Pulse(-math.pi / 2, 0.0),)
_Y_HALF_INV = (Pulse(-math.pi / 2, math.pi / 2),)


def build_v_gate() -> PulseCircuit:
    """Six-coupling robust V gate.

    ``V = A S(pi) A^dag B S(pi) B^dag`` with ``A = R(pi/2, pi/2)^{(x)2}`` and
    ``B = R(pi/2, 0)^{(x)2}``; each ``S(pi)`` is the robust three-coupling block.
    """
    block = robust_s(math.pi)
    first = block.dressed(pre=LocalLayer(_X_HALF_INV, _X_HALF_INV), post=LocalLayer(_X_HALF, _X_HALF))
    second = block.dressed(pre=LocalLayer(_Y_HALF_INV, _Y_HALF_INV), post=LocalLayer(_Y_HALF, _Y_HALF))
    return first.then(second)


# --- two-coupling no-go ------------------------------------------------------

@dataclass(frozen=True)
class NoGoReport:
    trials: int
    max_delta_norm: float
    max_second_coefficient: float
    all_local: bool


def robust_n2_circuit(
    coupling2: float, nbar: int, n: int, phibar: float, phi: float
) -> PulseCircuit:
    """Two-coupling circuit meeting ``T2 (Rb (x) R)^2 + T1 = 0``.

    ``R(n pi, phi)^2 = (-1)^n``, so the squared layer is ``(-1)^(nbar + n)``
    and ``T1 = -(-1)^(nbar + n) T2``.
    """
    layer = LocalLayer((Pulse(nbar * math.pi, phibar),), (Pulse(n * math.pi, phi),))
    coupling1 = -_parity_sign(nbar + n) * coupling2
    return PulseCircuit((coupling1, coupling2), (layer,))


def no_go_n2_witness(trials: int = 1000, seed: int = 0) -> NoGoReport:
    """Sample robust two-coupling circuits; each must be a local gate."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    max_norm = 0.0
    max_c2 = 0.0
    for _ in range(trials):
        c = robust_n2_circuit(
            float(rng.uniform(0.1, 4 * math.pi)),
            int(rng.integers(-3, 4)),
            int(rng.integers(-3, 4)),
            float(rng.uniform(0, TWO_PI)),
            float(rng.uniform(0, TWO_PI)),
        )
        max_norm = max(max_norm, delta_u(c).norm)
        max_c2 = max(max_c2, float(schmidt_decompose(evaluate(c)).coefficients[1]))
    return NoGoReport(trials, max_norm, max_c2, max_c2 <= TOL.robust)


# --- pi-multiple branches ----------------------------------------------------

def case2_solution(
    thetabar1: float, thetabar2: float, k: int, l: int = 0, m: int = 0, p: int = 0, q: int = 0
) -> SolutionN3:
    """Solution with qubit-2 pulses ``R(p pi, m pi)`` and ``R(q pi, 0)``.

    Qubit-1 angles are free; ``phibar1 = l pi``.
    """
    if k == 0:
        raise SynthesisError("k = 0 gives no entangler")
    denom = math.sin(thetabar2 + _parity_sign(k + l) * thetabar1)
    if abs(denom) < TOL.singular:
        raise SingularParameters("csc(thetabar2 + (-1)^(k+l) thetabar1) is singular")
    two_pi_k = TWO_PI * k
    c1 = _ratio(-_parity_sign(p), two_pi_k, math.sin(thetabar2), denom)
    c3 = _ratio(-_parity_sign(k + l + q), two_pi_k, math.sin(thetabar1), denom)
    if abs(c1) < TOL.singular or abs(c3) < TOL.singular:
        raise SynthesisError("a vanishing outer coupling reduces the circuit to N <= 2")
    return SolutionN3(
        theta1=p * math.pi,
        theta2=q * math.pi,
        thetabar1=thetabar1,
        thetabar2=thetabar2,
        coupling1=c1,
        coupling2=two_pi_k,
        coupling3=c3,
        phi1=m * math.pi,
        phibar1=l * math.pi,
        branch=SolutionBranch("case2", k, l, m, p, q),
    )


def case4a_solution(
    theta1: float, theta2: float, k: int, l: int = 0, m: int = 0, p: int = 0, q: int = 0
) -> SolutionN3:
    """Solution with qubit-1 pulses ``R((p - (-1)^(k+l) q) pi, l pi)`` and ``R(q pi, 0)``.

    Qubit-2 angles are free (not multiples of pi); ``phi1 = m pi``.
    """
    if k == 0:
        raise SynthesisError("k = 0 gives no entangler")
    if abs(math.sin(theta1)) < TOL.singular or abs(math.sin(theta2)) < TOL.singular:
        raise SynthesisError("sin(theta1) sin(theta2) = 0 belongs to case 2")
    denom = math.sin(theta2 + _parity_sign(k + m) * theta1)
    if abs(denom) < TOL.singular:
        raise SingularParameters("csc(theta2 + (-1)^(k+m) theta1) is singular")
    two_pi_k = TWO_PI * k
    c1 = _ratio(-_parity_sign(p + q), two_pi_k, math.sin(theta2), denom)
    c3 = _ratio(-_parity_sign(k + m + q), two_pi_k, math.sin(theta1), denom)
    gamma = _parity_sign(k)
    return SolutionN3(
        theta1=theta1,
        theta2=theta2,
        thetabar1=(p - _parity_sign(k + l) * q) * math.pi,
        thetabar2=q * math.pi,
        coupling1=c1,
        coupling2=two_pi_k,
        coupling3=c3,
        alpha=-_parity_sign(p + q),
        beta=-gamma * _parity_sign(q),
        gamma=gamma,
        phi1=m * math.pi,
        phibar1=l * math.pi,
        branch=SolutionBranch("case4a", k, l, m, p, q),
    )


def enumerate_appendix_branches(n_per_case: int = 100, seed: int = 0) -> list[SolutionN3]:
    """Random valid solutions from both nontrivial branches, ``n_per_case`` each.

    Draws with a singular denominator or vanishing coupling are skipped.
    """
    rng = np.random.default_rng(seed)
    out: list[SolutionN3] = []
    for case, build in (("case2", case2_solution), ("case4a", case4a_solution)):
        found = 0
        while found < n_per_case:
            a, b = (float(x) for x in rng.uniform(-math.pi, math.pi, 2))
            k = int(rng.integers(1, 4))
            l, m, p, q = (int(x) for x in rng.integers(-2, 3, 4))
            try:
                out.append(build(a, b, k, l, m, p, q))
            except SynthesisError:
                continue
            found += 1
    return out


def minimal_execution_time(k: int) -> float:
    """Lower bound ``4 pi |k|`` on ``sum |T_j|`` over the whole family at fixed ``k``.

    ``|sin(gamma t1 + t2)| <= |sin t1| + |sin t2|`` makes ``|T1| + |T3| >= |T2|``.
    """
    return 4 * math.pi * abs(k)


def family_execution_time(theta1: float, theta2: float, k: int) -> float:
    return execution_time(general_solution(theta1, theta2, k)[1])

