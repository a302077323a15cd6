"""Dense complex linear algebra for few-qubit operators and pure states.

Matrices and kets are plain ``numpy`` arrays of dtype ``complex128``. The
constructors here validate and freeze them (``writeable=False``) so values
can be shared freely between threads.
"""

from __future__ import annotations

from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .constants import ARITH_TOL, JACOBI_MAX_SWEEPS, JACOBI_OFF_TOL, STRUCT_TOL
from .errors import DimensionError, NotHermitianError, NotObservableError

MAX_DIM = 8


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def matrix(data) -> np.ndarray:
    """Validate ``data`` as a finite 2-D complex matrix and return a frozen copy."""
    m = np.array(data, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return _freeze(m)


def _raw_ket(amplitudes) -> np.ndarray:
    return np.asarray(amplitudes, dtype=np.complex128).reshape(-1)


def ket(amplitudes) -> np.ndarray:
    """Normalized state vector from (possibly unnormalized) amplitudes."""
    v = np.array(amplitudes, dtype=np.complex128).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise ValueError("amplitudes must be finite")
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return _freeze(v / norm)


def basis_ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return _freeze(v)


I2 = matrix(np.eye(2))
SX = matrix([[0, 1], [1, 0]])
SY = matrix([[0, -1j], [1j, 0]])
SZ = matrix([[1, 0], [0, -1]])
PAULIS = (I2, SX, SY, SZ)


def is_hermitian(m: np.ndarray, tol: float = STRUCT_TOL) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return float(np.max(np.abs(m - m.conj().T), initial=0.0)) <= tol


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product ``a ⊗ b``."""
    return _freeze(np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128)))


def tensor_all(ops: Iterable[np.ndarray]) -> np.ndarray:
    return reduce(tensor, ops)


def expectation(op: np.ndarray, psi: np.ndarray) -> float:
    """Real expectation value ``<psi|op|psi>`` of a Hermitian operator."""
    op = np.asarray(op)
    psi = np.asarray(psi)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise DimensionError(f"operator must be square, got {op.shape}")
    if psi.ndim != 1 or psi.shape[0] != op.shape[0]:
        raise DimensionError(f"operator of dim {op.shape[0]} vs ket of shape {psi.shape}")
    if not is_hermitian(op):
        raise NotHermitianError("expectation requires a Hermitian operator")
    val = np.vdot(psi, op @ psi)
    if abs(val.imag) > STRUCT_TOL:
        raise NotHermitianError(f"imaginary residual {val.imag:.3e} in expectation value")
    return float(val.real)


def _jacobi_symmetric(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a real symmetric matrix.

    Returns (eigenvalues, eigenvectors as columns), unsorted.
    """
    a = np.array(a, dtype=np.float64)
    n = a.shape[0]
    v = np.eye(n)
    # absolute threshold scaled by the matrix norm, rounding floor is ~eps*|A|
    tol = JACOBI_OFF_TOL * max(1.0, float(np.linalg.norm(a)))
    for _ in range(JACOBI_MAX_SWEEPS):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off < tol:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q]
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :]
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    raise RuntimeError("Jacobi iteration did not converge")


def hermitian_eigen(h: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Eigen-decomposition of a Hermitian matrix of dimension at most 8.

    The matrix ``H = A + iB`` is embedded as the real symmetric
    ``[[A, -B], [B, A]]``, diagonalized with cyclic Jacobi, and each doubled
    real eigenvalue is folded back into one complex eigenvector. Within a
    cluster of equal eigenvalues, complex vectors ``x + iy`` are picked by
    pivoted Gram-Schmidt so the returned basis is orthonormal.

    Returns eigenvalues in ascending order and the matching eigenvectors.
    """
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionError(f"expected a square matrix, got {h.shape}")
    n = h.shape[0]
    if n > MAX_DIM:
        raise DimensionError(f"dimension {n} exceeds {MAX_DIM}")
    if not is_hermitian(h):
        raise NotHermitianError("hermitian_eigen requires a Hermitian matrix")
    h = 0.5 * (h + h.conj().T)
    re, im = h.real, h.imag
    emb = np.block([[re, -im], [im, re]])
    lam, vecs = _jacobi_symmetric(emb)
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    cvecs = vecs[:n, order] + 1j * vecs[n:, order]

    cluster_tol = 1e-11 * max(1.0, float(np.max(np.abs(lam))))
    values: list[float] = []
    vectors: list[np.ndarray] = []
    start = 0
    while start < 2 * n:
        stop = start + 1
        while stop < 2 * n and lam[stop] - lam[stop - 1] <= cluster_tol:
            stop += 1
        size = stop - start
        if size % 2:
            raise RuntimeError("unpaired eigenvalue in the real embedding")
        cands = [cvecs[:, k] for k in range(start, stop)]
        picked: list[np.ndarray] = []
        for _ in range(size // 2):
            best, best_norm = None, -1.0
            for w in cands:
                r = w.copy()
                for u in picked:
                    r -= np.vdot(u, r) * u
                nr = float(np.linalg.norm(r))
                if nr > best_norm:
                    best, best_norm = r, nr
            picked.append(best / best_norm)
        for u in picked:
            values.append(float(np.vdot(u, h @ u).real))
            vectors.append(_freeze(u))
        start = stop

    order = np.argsort(values, kind="stable")
    return _freeze(np.array(values)[order]), [vectors[k] for k in order]


def max_eigenpair(h: np.ndarray) -> tuple[float, np.ndarray]:
    vals, vecs = hermitian_eigen(h)
    return float(vals[-1]), vecs[-1]


def bloch_vector(theta: float, phi: float) -> np.ndarray:
    st = np.sin(theta)
    return np.array([st * np.cos(phi), st * np.sin(phi), np.cos(theta)])


def bloch_observable(theta: float, phi: float) -> np.ndarray:
    """Spin observable ``n·σ`` along the direction with polar angle ``theta`` and azimuth ``phi``."""
    nx, ny, nz = bloch_vector(theta, phi)
    return matrix(nx * SX + ny * SY + nz * SZ)


def outcome_projector(obs: np.ndarray, outcome: int) -> np.ndarray:
    """Projector ``(I + (-1)^outcome obs) / 2`` onto one eigenspace of a ±1 observable."""
    obs = np.asarray(obs, dtype=np.complex128)
    if obs.ndim != 2 or obs.shape[0] != obs.shape[1]:
        raise DimensionError(f"observable must be square, got {obs.shape}")
    if not is_hermitian(obs):
        raise NotHermitianError("observable must be Hermitian")
    eye = np.eye(obs.shape[0])
    if np.max(np.abs(obs @ obs - eye)) > STRUCT_TOL:
        raise NotObservableError("observable must square to the identity")
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome!r}")
    sign = 1.0 if outcome == 0 else -1.0
    return matrix((eye + sign * obs) / 2)


def is_normalized(psi: np.ndarray, tol: float = ARITH_TOL) -> bool:
    return abs(float(np.vdot(psi, psi).real) - 1.0) <= tol


def product_observable(observables: Sequence[np.ndarray]) -> np.ndarray:
    return tensor_all(observables)
