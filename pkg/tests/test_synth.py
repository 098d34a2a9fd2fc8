import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from robust_ising.circuit import (
    LocalLayer,
    Pulse,
    PulseCircuit,
    coupling,
    evaluate,
    execution_time,
    is_physical,
    make_physical,
    subproduct,
    swap_qubits,
)
from robust_ising.matcore import dist_up_to_phase, haar_unitary, kron
from robust_ising.robustness import check_robust, delta_u, infidelity
from robust_ising.schmidt import osn
from robust_ising.synth import (
    CNOT,
    V_GATE,
    SingularParameters,
    SynthesisError,
    UnreachableTarget,
    bare_cnot,
    build_cnot,
    build_v_gate,
    canonical_record,
    case2_solution,
    case4a_solution,
    enumerate_appendix_branches,
    family_point,
    family_roots,
    family_value,
    general_solution,
    minimal_execution_time,
    minimal_record,
    no_go_n2_witness,
    robust_n2_circuit,
    robust_s,
    robust_s_candidates,
    simplify_to_minimal,
    solve_theta_star,
)

# frozen before the solver was written: bisection of cos(t) sin(pi/(2 cos t)) = 1/sqrt(2)
THETA_STAR = 0.6739388153681785

angle = st.floats(-math.pi, math.pi, allow_nan=False)


def test_general_solution_example():
    sol, c = general_solution(-2.0, 2.0, 1)
    t = 2 * math.pi * math.sin(2.0) / math.sin(4.0)
    assert sol.gamma == -1 and sol.alpha == -1 and sol.beta == 1
    assert sol.coupling1 == pytest.approx(-t, rel=1e-15)
    assert sol.coupling3 == pytest.approx(-t, rel=1e-15)
    assert sol.coupling1 == pytest.approx(-math.pi / math.cos(2.0), rel=1e-14)
    assert c.couplings[1] == 2 * math.pi
    assert check_robust(c)


@pytest.mark.parametrize("k", [1, -1, 2, 3, -2])
@pytest.mark.parametrize("alpha", [1, -1])
@pytest.mark.parametrize("beta", [1, -1])
def test_all_parity_combinations_robust(k, alpha, beta, rng):
    for _ in range(20):
        t1, t2 = rng.uniform(-math.pi, math.pi, 2)
        try:
            sol, c = general_solution(float(t1), float(t2), k, alpha, beta)
        except SingularParameters:
            continue
        assert delta_u(c).norm <= 1e-10
        assert sol.gamma == (-1) ** k
        assert (sol.thetabar1 == math.pi) == (alpha == 1)
        assert (sol.thetabar2 == math.pi) == (beta == sol.gamma)


@settings(max_examples=200, deadline=None)
@given(angle, angle, st.sampled_from([1, -1, 2, -2, 3]))
def test_general_solution_property(t1, t2, k):
    gamma = (-1) ** k
    assume(abs(math.sin(gamma * t1 + t2)) > 1e-3)
    sol, c = general_solution(t1, t2, k)
    assert delta_u(c).norm <= 1e-10 * max(1.0, execution_time(c))
    assert execution_time(c) >= minimal_execution_time(k) - 1e-9


def test_singular_and_degenerate_inputs():
    with pytest.raises(SingularParameters):
        general_solution(0.5, -0.5, 2)
    with pytest.raises(SingularParameters):
        general_solution(0.5, 0.5, 1)
    with pytest.raises(SynthesisError):
        general_solution(0.5, 1.0, 0)
    with pytest.raises(ValueError):
        general_solution(0.5, 1.0, 1, alpha=0)


def test_perturbed_solution_is_not_robust():
    sol, c = general_solution(0.8, 1.7, 1)
    bad = PulseCircuit((c.couplings[0] + 0.1, *c.couplings[1:]), c.locals)
    assert delta_u(bad).norm > 1e-3


def test_simplify_to_minimal(rng):
    for alpha in (1, -1):
        for beta in (1, -1):
            sol, c = general_solution(0.9, -2.1, 3, alpha, beta)
            mini = minimal_record(sol)
            assert mini.is_minimal()
            simple = simplify_to_minimal(sol)
            assert dist_up_to_phase(evaluate(simple, 0.03, dressed=True), evaluate(c, 0.03)) < 1e-12
            assert check_robust(mini.circuit())


def test_canonical_record_folds_phases():
    sol = case4a_solution(0.7, 1.9, 1, l=0, m=1, p=0, q=0)
    canon = canonical_record(sol)
    assert canon.theta1 == -0.7 and canon.phi1 == 0.0
    assert dist_up_to_phase(evaluate(canon.circuit()), evaluate(sol.circuit())) < 1e-12


def test_theta_star():
    ts = solve_theta_star()
    assert ts == pytest.approx(THETA_STAR, abs=1e-15)
    assert abs(family_value(math.pi - ts) - math.cos(math.pi / 4)) < 1e-12
    assert family_point(math.pi - ts).zeta == pytest.approx(math.pi / 4, abs=1e-12)


def test_family_identity_grid():
    for theta in np.linspace(math.pi / 2 + 1e-3, math.pi, 50):
        p = family_point(float(theta))
        assert dist_up_to_phase(evaluate(p.dressed_circuit(), dressed=True), coupling(4 * p.zeta)) <= 1e-10
        assert dist_up_to_phase(evaluate(p.dressed_circuit(True), dressed=True), coupling(-4 * p.zeta)) <= 1e-10
        assert check_robust(p.circuit())


def test_family_point_domain():
    for bad in (math.pi / 2, 0.3, 3.2):
        with pytest.raises(SynthesisError):
            family_point(bad)


def test_family_endpoint_is_identity():
    p = family_point(math.pi)
    assert p.zeta == pytest.approx(0.0, abs=1e-7)
    assert dist_up_to_phase(evaluate(p.circuit()), np.eye(4)) < 1e-12


@pytest.mark.parametrize("target", [math.pi / 3, math.pi / 2, math.pi, 3 * math.pi / 2, 2 * math.pi, 3.7, -1.0])
def test_robust_s_targets(target):
    c = robust_s(target)
    assert dist_up_to_phase(evaluate(c, dressed=True), coupling(target)) <= 1e-10
    assert check_robust(c)


def test_robust_s_branches_ordered_by_time():
    cands = robust_s_candidates(2 * math.pi)
    assert len(cands) >= 3
    times = [abs(p.coupling_angle) for p, _ in cands]
    assert times == sorted(times)
    for i in range(3):
        c = robust_s(2 * math.pi, i)
        assert dist_up_to_phase(evaluate(c, dressed=True), coupling(2 * math.pi)) <= 1e-10
    # u = 2 root: theta = 2 pi / 3
    assert any(abs(p.theta - 2 * math.pi / 3) < 1e-12 for p, _ in cands)


def test_robust_s_pi_has_single_root():
    roots = family_roots(math.cos(math.pi / 4))
    assert len(roots) == 1
    with pytest.raises(UnreachableTarget):
        robust_s(math.pi, 1)


def test_robust_s_identity_unreachable():
    for t in (0.0, 4 * math.pi, -8 * math.pi):
        with pytest.raises(UnreachableTarget):
            robust_s(t)


def test_cnot():
    c = build_cnot()
    u = evaluate(c, dressed=True)
    assert dist_up_to_phase(u, CNOT) <= 1e-10
    assert check_robust(c)
    state = np.zeros(4)
    state[2] = 1.0
    out = u @ state
    assert abs(abs(out[3]) - 1) < 1e-12
    assert infidelity(CNOT, evaluate(bare_cnot(), 0.05, dressed=True)) >= 10 * infidelity(
        CNOT, evaluate(c, 0.05, dressed=True)
    )
    assert dist_up_to_phase(evaluate(bare_cnot(), dressed=True), CNOT) <= 1e-12


def test_v_gate():
    c = build_v_gate()
    assert c.n == 6
    assert dist_up_to_phase(evaluate(c, dressed=True), V_GATE) <= 1e-10
    assert check_robust(c)
    for first, last in ((3, 4), (2, 4)):
        assert osn(subproduct(c, first, last)) == 4


def test_n2_no_go():
    rep = no_go_n2_witness(1000, seed=0)
    assert rep.max_delta_norm <= 1e-10
    assert rep.all_local
    c = robust_n2_circuit(2.0, 1, 0, 0.3, 1.2)
    bumped = PulseCircuit((c.couplings[0] + 0.1, c.couplings[1]), c.locals)
    assert delta_u(bumped).norm > 1e-3


def test_n2_random_locals_not_robust(rng):
    # generic two-coupling circuits: robust only on the n pi branches
    for _ in range(100):
        t = rng.uniform(0.5, 6, 2)
        layer = LocalLayer((Pulse(float(rng.uniform(0.2, 2.9)), 0.0),), (Pulse(float(rng.uniform(0.2, 2.9)), 0.0),))
        assert delta_u(PulseCircuit(tuple(t), (layer,))).norm > 1e-3


def test_case2_example():
    sol = case2_solution(math.pi / 3, math.pi / 4, 1)
    d = math.sin(math.pi / 4 - math.pi / 3)
    assert sol.coupling1 == pytest.approx(-2 * math.pi * math.sin(math.pi / 4) / d, rel=1e-14)
    assert sol.coupling3 == pytest.approx(2 * math.pi * math.sin(math.pi / 3) / d, rel=1e-14)
    assert check_robust(sol.circuit())


def test_case_errors():
    with pytest.raises(SynthesisError):
        case2_solution(0.3, 0.4, 0)
    with pytest.raises(SingularParameters):
        case2_solution(0.3, 0.3, 1)
    with pytest.raises(SynthesisError):
        case4a_solution(math.pi, 0.4, 1)


def test_case4a_matches_general_solution(rng):
    count = 0
    while count < 200:
        t1, t2 = (float(x) for x in rng.uniform(-math.pi, math.pi, 2))
        k = int(rng.choice([1, 2, 3, -1]))
        p, q = (int(x) for x in rng.integers(-2, 3, 2))
        try:
            s4 = case4a_solution(t1, t2, k, 0, 0, p, q)
        except SynthesisError:
            continue
        canon = canonical_record(s4)
        gen, _ = general_solution(canon.theta1, canon.theta2, k, canon.alpha, canon.beta)
        assert (canon.coupling1, canon.coupling2, canon.coupling3) == (gen.coupling1, gen.coupling2, gen.coupling3)
        assert (canon.thetabar1, canon.thetabar2) == (gen.thetabar1, gen.thetabar2)
        count += 1


def test_enumerate_branches():
    sols = enumerate_appendix_branches(100, seed=0)
    assert sum(s.branch.case == "case2" for s in sols) == 100
    assert sum(s.branch.case == "case4a" for s in sols) == 100
    assert all(check_robust(s.circuit()) for s in sols)
    again = enumerate_appendix_branches(100, seed=0)
    assert [s.to_dict() for s in sols] == [s.to_dict() for s in again]


def test_qubit_swap_symmetry(rng):
    for _ in range(20):
        sol, c = general_solution(*(float(x) for x in rng.uniform(-3, 3, 2)), 1, int(rng.choice([1, -1])), -1)
        assert check_robust(swap_qubits(c))


def test_two_pi_coupling_osn_invariance(rng):
    for _ in range(200):
        a = kron(haar_unitary(2, rng), haar_unitary(2, rng))
        b = kron(haar_unitary(2, rng), haar_unitary(2, rng))
        u = haar_unitary(4, rng)
        assert osn(u @ a @ coupling(2 * math.pi) @ b) == osn(u @ a @ b)


def test_execution_time_grows_with_k():
    for t1, t2 in ((0.6, 1.3), (-2.2, 0.4), (1.0, -2.5)):
        times = {k: execution_time(general_solution(t1, t2, k)[1]) for k in (1, 2, 3, 4)}
        assert times[3] > times[1]
        assert times[4] > times[2]
        for k, t in times.items():
            assert t >= minimal_execution_time(k) - 1e-9


def test_make_physical_general_solution():
    sol, c = general_solution(2.0, -0.4, -1)
    p = make_physical(c)
    assert is_physical(p) and check_robust(p)
    assert dist_up_to_phase(evaluate(p, 0.02, dressed=True), evaluate(c, 0.02)) < 1e-12
