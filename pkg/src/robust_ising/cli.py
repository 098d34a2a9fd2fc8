"""Command-line front end.

Exit status: 0 on success, 1 for invalid input, 2 when the requested
target is unreachable or the parameters are singular.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from collections import Counter
from pathlib import Path

import numpy as np

from . import circuit as circ
from .qmap import OneQubitSequence, SubalgebraFrame, lift_sequence, project_circuit
from .matcore import TOL
from .robustness import check_robust, delta_u, log_grid, scan
from .schmidt import schmidt_decompose
from .synth import (
    CNOT,
    SWAP,
    V_GATE,
    SingularParameters,
    UnreachableTarget,
    build_cnot,
    build_v_gate,
    enumerate_appendix_branches,
    family_point,
    general_solution,
    robust_s_point,
    solve_theta_star,
    family_value,
)

GATES = {"cnot": CNOT, "swap": SWAP, "v": V_GATE, "identity": np.eye(4, dtype=complex)}


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_json(path: str):
    try:
        text = Path(path).read_text() if path != "-" else sys.stdin.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _read_circuit(path: str) -> circ.PulseCircuit:
    try:
        return circ.circuit_from_dict(_read_json(path))
    except (ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_grid(spec: str) -> list[float]:
    try:
        lo, hi, n = spec.split(":")
        return log_grid(float(lo), float(hi), int(n))
    except ValueError as exc:
        raise InputError(f"--epsilon-grid expects lo:hi:n with 0 < lo < hi, got {spec!r}") from exc


def cmd_solve_theta_star(args) -> None:
    ts = solve_theta_star()
    resid = family_value(math.pi - ts) - math.cos(math.pi / 4)
    print(f"theta* = {ts:.12f}")
    print(f"residual = {resid:.3e}")


def cmd_synth_cnot(args) -> None:
    point, _ = robust_s_point(math.pi)
    c = build_cnot()
    family = {"theta": point.theta, "eta": point.eta, "zeta": point.zeta}
    _emit(circ.dumps(c, solution=point.solution().to_dict(), family=family), args.out)


def cmd_synth_s(args) -> None:
    if (args.target_theta is None) == (args.theta is None):
        raise InputError("synth-s needs exactly one of --target-theta or --theta")
    if args.theta is not None:
        point, flip = family_point(args.theta), False
    else:
        point, flip = robust_s_point(args.target_theta, args.branch)
    family = {"theta": point.theta, "eta": point.eta, "zeta": point.zeta, "flip": flip}
    c = point.dressed_circuit(flip)
    _emit(circ.dumps(c, solution=point.solution().to_dict(), family=family), args.out)


def cmd_synth_v(args) -> None:
    _emit(circ.dumps(build_v_gate()), args.out)


def cmd_synth_general(args) -> None:
    sol, c = general_solution(args.theta1, args.theta2, args.k, args.alpha, args.beta)
    if args.physical:
        c = circ.make_physical(c)
    _emit(circ.dumps(c, solution=sol.to_dict()), args.out)


def cmd_verify(args) -> None:
    c = _read_circuit(args.file)
    rep = delta_u(c, args.tol)
    print(f"couplings: {c.n}")
    print(f"norm: {rep.norm:.6e}")
    print(f"robust: {'true' if rep.is_robust else 'false'} (tol {args.tol:g})")
    print(f"physical: {'true' if circ.is_physical(c) else 'false'}")


def cmd_scan(args) -> None:
    c = _read_circuit(args.file)
    grid = _parse_grid(args.epsilon_grid)
    target = circ.evaluate(c, dressed=True) if args.target == "self" else GATES[args.target]
    result = scan(c, target, grid)
    _emit(result.to_csv(), args.out)
    print(f"slope: {result.slope_fit:.6g}", file=sys.stderr)


def cmd_schmidt(args) -> None:
    if (args.file is None) == (args.gate is None):
        raise InputError("schmidt needs either a circuit FILE or --gate")
    if args.gate is not None:
        u = GATES[args.gate]
    else:
        c = _read_circuit(args.file)
        if args.couplings:
            try:
                first, last = (int(x) for x in args.couplings.split(":"))
                u = circ.subproduct(c, first, last)
            except ValueError as exc:
                raise InputError(f"--couplings: {exc}") from exc
        else:
            u = circ.evaluate(c, dressed=True)
    data = schmidt_decompose(u)
    print("OSC: " + " ".join(f"{x:.12g}" for x in data.coefficients))
    print(f"OSN: {data.osn}")


def cmd_map(args) -> None:
    obj = _read_json(args.file)
    try:
        if isinstance(obj, dict) and "pulses" in obj:
            seq = OneQubitSequence.from_dict(obj)
            _emit(circ.dumps(lift_sequence(seq, SubalgebraFrame(args.omega))), args.out)
        else:
            seq, frame = project_circuit(circ.circuit_from_dict(obj), args.phi1)
            _emit(json.dumps({**seq.to_dict(), "omega": frame.omega}, indent=2) + "\n", args.out)
    except (ValueError, TypeError) as exc:
        raise InputError(f"{args.file}: {exc}") from exc


def cmd_enumerate(args) -> None:
    sols = enumerate_appendix_branches(args.trials, args.seed)
    passed: Counter = Counter()
    failed: Counter = Counter()
    for s in sols:
        ok = check_robust(s.circuit(), args.tol)
        (passed if ok else failed)[s.branch.case] += 1
    for case in ("case2", "case4a"):
        print(f"{case}: {passed[case]} passed, {failed[case]} failed")
    if sum(failed.values()):
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="robust-ising", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("solve-theta-star", help="solve for the CNOT family parameter")
    s.set_defaults(func=cmd_solve_theta_star)

    s = sub.add_parser("synth-cnot", help="robust CNOT circuit as JSON")
    s.add_argument("--out")
    s.set_defaults(func=cmd_synth_cnot)

    s = sub.add_parser("synth-s", help="robust S(theta) circuit as JSON")
    s.add_argument("--target-theta", type=float)
    s.add_argument("--theta", type=float, help="family parameter in (pi/2, pi]")
    s.add_argument("--branch", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_synth_s)

    s = sub.add_parser("synth-v", help="six-coupling robust V gate as JSON")
    s.add_argument("--out")
    s.set_defaults(func=cmd_synth_v)

    s = sub.add_parser("synth-general", help="member of the three-coupling solution family")
    s.add_argument("--theta1", type=float, required=True)
    s.add_argument("--theta2", type=float, required=True)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--alpha", type=int, default=-1, choices=(-1, 1))
    s.add_argument("--beta", type=int, choices=(-1, 1))
    s.add_argument("--physical", action="store_true", help="flip negative couplings with x pulses")
    s.add_argument("--out")
    s.set_defaults(func=cmd_synth_general)

    s = sub.add_parser("verify", help="first-order robustness of a circuit")
    s.add_argument("file")
    s.add_argument("--tol", type=float, default=TOL.robust)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("scan", help="infidelity versus coupling error, CSV")
    s.add_argument("file")
    s.add_argument("--epsilon-grid", default="1e-3:1e-1:9")
    s.add_argument("--target", choices=("self", *GATES), default="self")
    s.add_argument("--out")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("schmidt", help="operator Schmidt coefficients")
    s.add_argument("file", nargs="?")
    s.add_argument("--gate", choices=tuple(GATES))
    s.add_argument("--couplings", help="first:last coupling subproduct (1-based)")
    s.set_defaults(func=cmd_schmidt)

    s = sub.add_parser("map", help="convert between one-qubit and two-qubit JSON")
    s.add_argument("file")
    s.add_argument("--omega", type=float, default=0.0)
    s.add_argument("--phi1", type=float, default=0.0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_map)

    s = sub.add_parser("enumerate", help="sweep the case2 and case4a solution branches")
    s.add_argument("--trials", type=int, default=100, help="solutions per branch")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", type=float, default=TOL.robust)
    s.set_defaults(func=cmd_enumerate)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except (SingularParameters, UnreachableTarget) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    return 0


if __name__ == "__main__":
    sys.exit(main())
