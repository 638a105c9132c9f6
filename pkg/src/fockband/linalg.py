"""Dense complex linear algebra with explicit tolerance reporting.

All matrices are numpy arrays with dtype complex128.  Hermitian inputs are
symmetrized on entry via ``hermitize`` so that eigenvalue routines see an
exactly Hermitian matrix.  Every positivity decision goes through
``psd_margin`` which reports the minimal eigenvalue together with the
tolerance that was used, so callers never compare against an implicit zero.

Large sparse operators (scipy.sparse) are accepted by the extremal
eigenvalue helpers ``lam_min`` / ``lam_max`` and by ``op_norm``, which
switch to Lanczos iterations above a dense size threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceError, InputError, SolveError

#: Largest dimension for which extremal eigenvalues are computed densely.
DENSE_EIG_LIMIT = 1024

#: Condition-number ceiling for the direct solver.
COND_LIMIT = 1e12

#: Default relative cutoff for pseudo-inverse singular values.
PINV_CUTOFF = 1e-10


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and convert input to a 2d complex128 array.

    Raises InputError on non-2d shapes or non-finite entries.
    """
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise InputError(f"{name} must be 2-dimensional, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise InputError(f"{name} contains non-finite entries")
    return m


def hermitize(a, name: str = "matrix") -> np.ndarray:
    """Return the Hermitian part (A + A*)/2 of a square matrix."""
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise InputError(f"{name} must be square, got shape {m.shape}")
    return 0.5 * (m + m.conj().T)


@dataclass(frozen=True)
class PsdReport:
    """Outcome of a positive-semidefiniteness test."""

    min_eigenvalue: float
    dim: int
    tolerance_used: float

    @property
    def is_psd(self) -> bool:
        return self.min_eigenvalue >= -self.tolerance_used


def herm_eig(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues, eigenvectors) with eigenvalues ascending and
    eigenvectors as columns, so that ``h == V @ diag(w) @ V.conj().T`` up
    to the backward error of the solver.
    """
    h = hermitize(h)
    w, v = np.linalg.eigh(h)
    return w, v


def psd_margin(h, tol: float | None = None) -> PsdReport:
    """Minimal eigenvalue of the Hermitian part of ``h`` with tolerance.

    The default tolerance is ``1e-8 * max(1, ||h||)`` where the norm is the
    spectral norm, read off from the same eigendecomposition.
    """
    h = hermitize(h)
    if h.shape[0] == 0:
        return PsdReport(min_eigenvalue=0.0, dim=0, tolerance_used=tol if tol is not None else 1e-8)
    w = np.linalg.eigvalsh(h)
    if tol is None:
        tol = 1e-8 * max(1.0, float(np.max(np.abs(w))))
    return PsdReport(min_eigenvalue=float(w[0]), dim=h.shape[0], tolerance_used=float(tol))


def kron(a, b) -> np.ndarray:
    """Kronecker product with block (i, j) equal to ``a[i, j] * b``."""
    return np.kron(as_matrix(a, "kron left factor"), as_matrix(b, "kron right factor"))


def solve(a, y, method: str = "direct", cond_limit: float = COND_LIMIT) -> np.ndarray:
    """Solve ``a @ x = y`` for a square well-conditioned matrix.

    method="direct" uses an LU solve and raises SolveError with the
    condition estimate when cond(a) exceeds ``cond_limit``.

    method="neumann" sums the series x = sum_k (I - a)^k y, which is the
    slow but independent route; it requires ||I - a|| < 1 and exists to
    cross-validate the direct solver on diagonally dominant systems.
    """
    a = as_matrix(a, "solve matrix")
    if a.shape[0] != a.shape[1]:
        raise InputError(f"solve requires a square matrix, got shape {a.shape}")
    y = np.asarray(y, dtype=np.complex128)
    if y.shape[0] != a.shape[0]:
        raise InputError(f"right-hand side has {y.shape[0]} rows, expected {a.shape[0]}")
    if method == "direct":
        cond = float(np.linalg.cond(a)) if a.size else 1.0
        if not np.isfinite(cond) or cond > cond_limit:
            raise SolveError(f"matrix condition {cond:.3e} exceeds limit {cond_limit:.1e}", condition=cond)
        return np.linalg.solve(a, y)
    if method == "neumann":
        return _neumann_solve(a, y)
    raise InputError(f"unknown solve method {method!r}")


def _neumann_solve(a: np.ndarray, y: np.ndarray, max_terms: int = 100000) -> np.ndarray:
    residual_op = np.eye(a.shape[0], dtype=np.complex128) - a
    rho = op_norm(residual_op)
    if rho >= 1.0:
        raise ConvergenceError(f"Neumann series requires ||I - A|| < 1, got {rho:.6f}")
    x = y.copy()
    term = y.copy()
    scale = max(1.0, float(np.linalg.norm(y)))
    for _ in range(max_terms):
        term = residual_op @ term
        x += term
        if np.linalg.norm(term) <= 1e-16 * scale / max(1e-300, 1.0 - rho):
            return x
    raise ConvergenceError(f"Neumann series did not converge in {max_terms} terms (||I - A|| = {rho:.6f})")


def pinv(a, cutoff: float = PINV_CUTOFF) -> np.ndarray:
    """Moore-Penrose pseudo-inverse, discarding singular values below
    ``cutoff`` times the largest singular value."""
    return np.linalg.pinv(as_matrix(a, "pinv matrix"), rcond=cutoff)


def op_norm(a) -> float:
    """Operator (spectral) norm; accepts dense arrays and sparse matrices."""
    if sp.issparse(a):
        n = min(a.shape)
        if a.nnz == 0:
            return 0.0
        if n <= DENSE_EIG_LIMIT:
            return float(np.linalg.norm(a.toarray(), 2))
        try:
            s = spla.svds(a.astype(np.complex128), k=1, return_singular_vectors=False,
                          v0=_start_vector(a.shape[1]))
            return float(s[0])
        except spla.ArpackError:
            if max(a.shape) <= 4 * DENSE_EIG_LIMIT:
                return float(np.linalg.norm(a.toarray(), 2))
            raise ConvergenceError("singular value iteration failed for op_norm")
    a = as_matrix(a, "op_norm matrix")
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def _start_vector(n: int) -> np.ndarray:
    # Fixed start vector keeps iterative eigensolvers bit-reproducible.
    v = np.cos(np.arange(n) + 1.0)
    return v / np.linalg.norm(v)


def _lanczos_top(h, start: np.ndarray) -> tuple[float, np.ndarray | None]:
    """Top eigenpair of a large sparse Hermitian operator.

    A failed default Lanczos run is retried once with a larger subspace;
    a still-failing problem of moderate size falls back to the dense
    solver rather than surfacing solver internals to the caller.
    """
    n = h.shape[0]
    last: Exception | None = None
    for ncv in (None, min(64, n - 1)):
        try:
            w, v = spla.eigsh(h, k=1, which="LA", v0=start, ncv=ncv)
            return float(w[0]), v[:, 0]
        except spla.ArpackNoConvergence as exc:
            if len(exc.eigenvalues):
                return float(np.max(exc.eigenvalues)), None
            last = exc
        except spla.ArpackError as exc:
            last = exc
    if n <= 4 * DENSE_EIG_LIMIT:
        return float(np.linalg.eigvalsh(hermitize(h.toarray()))[-1]), None
    raise ConvergenceError("Lanczos iteration failed to converge for lam_max") from last


def lam_max(h, v0: np.ndarray | None = None) -> float:
    """Largest eigenvalue of a Hermitian operator, dense or sparse."""
    if sp.issparse(h):
        n = h.shape[0]
        if n <= DENSE_EIG_LIMIT:
            return float(np.linalg.eigvalsh(hermitize(h.toarray()))[-1])
        start = v0 if v0 is not None else _start_vector(n)
        return _lanczos_top(h, start)[0]
    h = hermitize(h)
    if h.shape[0] == 0:
        raise InputError("lam_max of an empty matrix")
    return float(np.linalg.eigvalsh(h)[-1])


def lam_max_vec(h, v0: np.ndarray | None = None) -> tuple[float, np.ndarray | None]:
    """Largest eigenvalue together with an eigenvector for warm starts."""
    if sp.issparse(h) and h.shape[0] > DENSE_EIG_LIMIT:
        start = v0 if v0 is not None else _start_vector(h.shape[0])
        return _lanczos_top(h, start)
    return lam_max(h), None


def lam_min(h) -> float:
    """Smallest eigenvalue of a Hermitian operator, dense or sparse."""
    if sp.issparse(h):
        return -lam_max(-h)
    h = hermitize(h)
    if h.shape[0] == 0:
        raise InputError("lam_min of an empty matrix")
    return float(np.linalg.eigvalsh(h)[0])
