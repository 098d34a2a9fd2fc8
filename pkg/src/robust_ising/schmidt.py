"""Operator Schmidt decomposition of two-qubit operators.

An operator ``U`` on qubit 1 (x) qubit 2 is written as

    U = scale * sum_i c_i A_i (x) B_i

with ``{A_i}`` and ``{B_i}`` orthonormal in the Hilbert-Schmidt inner
product, ``scale = ||U||_F`` (2 for unitaries) and ``sum c_i^2 = 1``. The
coefficients and their count (the operator Schmidt number) are unchanged
by local unitaries on either side.

The decomposition is the SVD of the realigned matrix
``M[(i, j), (k, l)] = U[2 i + k, 2 j + l]``: rows index the qubit-1 matrix
element ``(i, j)`` and columns the qubit-2 element ``(k, l)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matcore import TOL, svd4


@dataclass(frozen=True)
class SchmidtData:
    coefficients: np.ndarray
    factors: tuple[tuple[np.ndarray, np.ndarray], ...]
    scale: float
    osn: int

    def reconstruct(self) -> np.ndarray:
        out = np.zeros((4, 4), dtype=complex)
        for c, (a, b) in zip(self.coefficients, self.factors):
            out += c * np.kron(a, b)
        return self.scale * out


def realign(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    return u.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)


def schmidt_decompose(u: np.ndarray, threshold: float = TOL.osn) -> SchmidtData:
    left, s, right = svd4(realign(u))
    scale = float(np.sqrt(np.sum(s**2)))
    if scale == 0:
        raise ValueError("the zero operator has no Schmidt decomposition")
    coeffs = s / scale
    factors = tuple(
        (left[:, i].reshape(2, 2), np.conj(right[:, i]).reshape(2, 2)) for i in range(4)
    )
    return SchmidtData(coeffs, factors, scale, int(np.sum(coeffs > threshold)))


def osc(u: np.ndarray) -> np.ndarray:
    """Normalised operator Schmidt coefficients, descending."""
    return schmidt_decompose(u).coefficients


def osn(u: np.ndarray, threshold: float = TOL.osn) -> int:
    return schmidt_decompose(u, threshold).osn


def lu_invariant_equal(a: np.ndarray, b: np.ndarray, tol: float = TOL.lu) -> bool:
    """Compare Schmidt coefficients of two gates.

    Equal coefficients are necessary for local equivalence but not
    sufficient: SWAP and iSWAP share the coefficients ``(1/2,) * 4`` yet are
    not related by local unitaries.
    """
    return bool(np.max(np.abs(osc(a) - osc(b))) <= tol)
