"""Small dense complex linear algebra used throughout the package.

Everything here operates on plain ``numpy`` arrays of dtype ``complex128``.
Dimensions are tiny (at most a few tens), so the algorithms favour accuracy
and transparency over speed: cyclic Jacobi rotations for Hermitian
eigenproblems and partial-pivot LU for linear solves.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, NotHermitianError, SingularMatrixError

HERMITIAN_RTOL = 1e-12
JACOBI_RTOL = 1e-13
DEGENERACY_GAP = 1e-9  # MHz
MAX_SWEEPS = 100
PIVOT_RTOL = 1e-12


@dataclass(frozen=True)
class Eigensystem:
    """Eigenvalues (ascending) and phase-fixed orthonormal eigenvectors.

    ``vectors[:, k]`` is the eigenvector belonging to ``values[k]``.
    """

    values: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)
        self.vectors.setflags(write=False)

    def __len__(self):
        return self.values.size


def as_matrix(m) -> np.ndarray:
    a = np.array(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def check_hermitian(m: np.ndarray, rtol: float = HERMITIAN_RTOL) -> None:
    """Raise :class:`NotHermitianError` naming the worst offending entry pair."""
    if m.shape[0] != m.shape[1]:
        raise NotHermitianError(f"matrix is not square: shape {m.shape}")
    scale = np.abs(m).max() if m.size else 0.0
    dev = np.abs(m - m.conj().T)
    i, j = np.unravel_index(np.argmax(dev), dev.shape) if m.size else (0, 0)
    if m.size and dev[i, j] > rtol * scale:
        raise NotHermitianError(
            f"entries ({i},{j})={m[i, j]!r} and ({j},{i})={m[j, i]!r} violate "
            f"Hermitian symmetry by {dev[i, j]:.3e} (> {rtol:g} * max|M| = {rtol * scale:.3e})"
        )


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-modulus entry is real and positive."""
    v = np.array(v, dtype=complex)
    if v.ndim == 1:
        k = np.argmax(np.abs(v))
        if v[k] == 0:
            return v
        mag = abs(v[k])
        v = v * (mag / v[k])
        v[k] = mag  # exactly real, not real up to rounding
        return v
    for col in range(v.shape[1]):
        v[:, col] = fix_phase(v[:, col])
    return v


def _gram_schmidt(v: np.ndarray) -> np.ndarray:
    out = np.empty_like(v)
    for k in range(v.shape[1]):
        w = v[:, k].copy()
        for _ in range(2):  # twice is enough (Kahan)
            for j in range(k):
                w -= (out[:, j].conj() @ w) * out[:, j]
        out[:, k] = w / np.linalg.norm(w)
    return out


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Zero a[p, q] in place with a 2x2 unitary acting on rows/cols p, q."""
    z = a[p, q]
    mod = abs(z)
    phase = z / mod  # e^{i phi}
    app, aqq = a[p, p].real, a[q, q].real
    tau = (aqq - app) / (2.0 * mod)
    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
    idx = [p, q]
    a[:, idx] = a[:, idx] @ g
    a[idx, :] = g.conj().T @ a[idx, :]
    a[p, q] = a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    v[:, idx] = v[:, idx] @ g


def hermitian_eigendecompose(m, rtol: float = JACOBI_RTOL) -> Eigensystem:
    """Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.

    Iterates sweeps over all (p, q) pairs until the off-diagonal Frobenius
    norm drops below ``rtol * ||M||_F``. Eigenvalues come back ascending,
    vectors are orthonormal (degenerate clusters re-orthonormalized by
    Gram-Schmidt in index order) and phase-fixed via :func:`fix_phase`.
    """
    a = as_matrix(m)
    check_hermitian(a)
    n = a.shape[0]
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    norm = np.linalg.norm(a)
    if n == 0 or norm == 0.0:
        return Eigensystem(np.zeros(n), v)

    target = rtol * norm
    skip = 1e-3 * target / n
    for _ in range(MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off < target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > skip:
                    _rotate(a, v, p, q)
    else:
        raise ConvergenceError(f"Jacobi did not converge in {MAX_SWEEPS} sweeps (off-norm {off:.3e})")

    values = np.diag(a).real
    order = np.argsort(values, kind="stable")
    values = values[order]
    v = v[:, order]

    # re-orthonormalize inside degenerate clusters
    start = 0
    for k in range(1, n + 1):
        if k == n or values[k] - values[k - 1] >= DEGENERACY_GAP:
            if k - start > 1:
                v[:, start:k] = _gram_schmidt(v[:, start:k])
            start = k
    return Eigensystem(values, fix_phase(v))


def lu_factor(a) -> tuple[np.ndarray, np.ndarray]:
    """Partial-pivot LU. Returns the packed LU matrix and the row permutation."""
    lu = as_matrix(a).copy()
    n = lu.shape[0]
    if lu.shape != (n, n):
        raise ValueError(f"matrix is not square: shape {lu.shape}")
    perm = np.arange(n)
    scale = np.abs(lu).max() if n else 0.0
    for k in range(n):
        piv = k + int(np.argmax(np.abs(lu[k:, k])))
        if piv != k:
            lu[[k, piv]] = lu[[piv, k]]
            perm[[k, piv]] = perm[[piv, k]]
        pivot = lu[k, k]
        if abs(pivot) <= PIVOT_RTOL * scale:
            raise SingularMatrixError(
                f"matrix is singular to working precision: pivot {abs(pivot):.3e} at step {k} "
                f"(max|A| = {scale:.3e})",
                pivot=abs(pivot),
            )
        lu[k + 1:, k] /= pivot
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm


def lu_solve(lu: np.ndarray, perm: np.ndarray, b) -> np.ndarray:
    n = lu.shape[0]
    x = np.array(b, dtype=complex)[perm]
    for i in range(1, n):
        x[i] -= lu[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - lu[i, i + 1:] @ x[i + 1:]) / lu[i, i]
    return x


def solve_linear(a, b) -> np.ndarray:
    """Solve ``A x = b`` by partial-pivot LU.

    Raises :class:`SingularMatrixError` (carrying the offending pivot) when
    a pivot falls below ``1e-12 * max|A|``.
    """
    a = as_matrix(a)
    b = np.asarray(b, dtype=complex)
    if b.shape[0] != a.shape[0]:
        raise ValueError(f"shape mismatch: A is {a.shape}, b has {b.shape[0]} rows")
    lu, perm = lu_factor(a)
    return lu_solve(lu, perm, b)


def kronecker(a, b) -> np.ndarray:
    """Kronecker product ``A (x) B``."""
    a = as_matrix(a)
    b = as_matrix(b)
    (ra, ca), (rb, cb) = a.shape, b.shape
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(ra * rb, ca * cb)
