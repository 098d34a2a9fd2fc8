"""Small dense complex linear algebra for one- and two-qubit operators.

All matrices are ``numpy`` arrays of dtype ``complex128``. Two-qubit
operators use the row-major Kronecker convention with qubit 1 as the left
tensor factor, so ``kron(a, b)[2*i + k, 2*j + l] == a[i, j] * b[k, l]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
ZZ = np.kron(SZ, SZ)

PAULIS = (I2, SX, SY, SZ)


@dataclass(frozen=True)
class Tolerances:
    unitarity: float = 1e-12
    svd: float = 1e-10
    robust: float = 1e-10
    osn: float = 1e-8
    lu: float = 1e-8
    singular: float = 1e-9


TOL = Tolerances()


def as_matrix(m, dim: int | None = None) -> np.ndarray:
    """Coerce ``m`` to a finite complex square matrix, optionally of size ``dim``."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"expected a {dim}x{dim} matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two 2x2 operators (``a`` acts on qubit 1)."""
    return np.kron(as_matrix(a, 2), as_matrix(b, 2))


def is_unitary(m: np.ndarray, tol: float = TOL.unitarity) -> bool:
    m = np.asarray(m, dtype=complex)
    return bool(np.max(np.abs(dagger(m) @ m - np.eye(m.shape[0]))) <= tol)


def dist_up_to_phase(a: np.ndarray, b: np.ndarray) -> float:
    """Phase-insensitive Frobenius distance ``min_phi ||a - exp(i phi) b||_F``.

    For unitaries this equals ``sqrt(2 d - 2 |Tr(a^dag b)|)``; the minimising
    phase is applied explicitly instead, because the closed form loses about
    eight digits to cancellation when the two operators nearly coincide.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    overlap = np.trace(dagger(b) @ a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(a - phase * b))


def svd4(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Singular value decomposition ``m = left @ diag(s) @ right^dag``.

    Singular values are returned in descending order.
    """
    m = as_matrix(m, 4)
    u, s, vh = np.linalg.svd(m)
    return u, s, dagger(vh)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
