"""Truncated Fock space and the isometries that generate the band operator.

The space for ``n`` letters truncated at depth ``d`` is spanned by the
words of length at most ``d``, enumerated in level order with the empty
word (vacuum) at index 0.  The flat index of the word ``w . i`` (word w
followed by letter i, with i in 1..n) is ``k*n + i`` where ``k`` is the
index of ``w``.  For n >= 2 the dimension is (n^(d+1) - 1)/(n - 1); for
n = 1 it is d + 1.

The generator ``S_i`` maps basis vector ``e_k`` to ``e_{k n + i}``.  At the
truncation, columns whose image would leave the space (the top level) are
zero, so each ``S_i`` is an exact 0/1 matrix and the compression of the
deeper operator.  Products of these matrices are exact in floating point,
which the relation tests rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import CapacityError, InputError
from .linalg import as_matrix

#: Default cap on the truncated dimension.
DIM_CAP = 200_000


def fock_dim(n: int, depth: int) -> int:
    """Dimension of the depth-``depth`` truncation on ``n`` letters."""
    if n < 1:
        raise InputError(f"number of letters must be >= 1, got {n}")
    if depth < 0:
        raise InputError(f"depth must be >= 0, got {depth}")
    if n == 1:
        return depth + 1
    return (n ** (depth + 1) - 1) // (n - 1)


@dataclass(frozen=True)
class TruncatedFock:
    """A depth-truncated word space on ``n`` letters."""

    n: int
    depth: int
    dim: int
    levels: np.ndarray = field(repr=False, compare=False)

    def level_indices(self, level: int) -> np.ndarray:
        """Flat indices of the words of the given length."""
        if not 0 <= level <= self.depth:
            raise InputError(f"level {level} outside 0..{self.depth}")
        return np.nonzero(self.levels == level)[0]

    def inner_dim(self) -> int:
        """Number of words strictly below the top level."""
        return fock_dim(self.n, self.depth - 1) if self.depth > 0 else 0


def make_fock(n: int, depth: int, cap: int = DIM_CAP) -> TruncatedFock:
    """Build the truncated word space, guarding against oversized requests."""
    dim = fock_dim(n, depth)
    if dim > cap:
        raise CapacityError(f"truncated dimension {dim} exceeds cap {cap}")
    levels = np.zeros(dim, dtype=np.int64)
    for k in range(1, dim):
        levels[k] = levels[(k - 1) // n] + 1
    return TruncatedFock(n=n, depth=depth, dim=dim, levels=levels)


@dataclass(frozen=True)
class CuntzIsometries:
    """The n generator matrices on a truncated word space.

    Each ``ops[i]`` is an exact 0/1 sparse matrix.  Columns indexed by
    top-level words are zero, so ``S_i* S_j = delta_ij P`` with P the
    projection onto words below the top level, exactly.
    """

    fock: TruncatedFock
    ops: tuple[sp.csr_matrix, ...]

    def dense(self) -> list[np.ndarray]:
        return [s.toarray() for s in self.ops]


def cuntz_isometries(f: TruncatedFock) -> CuntzIsometries:
    """Generator matrices ``S_i : e_k -> e_{k n + i}`` at the truncation."""
    ops = []
    for i in range(1, f.n + 1):
        cols = np.arange(f.dim, dtype=np.int64)
        rows = cols * f.n + i
        keep = rows < f.dim
        data = np.ones(int(keep.sum()))
        s = sp.csr_matrix((data, (rows[keep], cols[keep])), shape=(f.dim, f.dim))
        ops.append(s)
    return CuntzIsometries(fock=f, ops=tuple(ops))


def _coerce_arms(arms, n: int) -> list[np.ndarray]:
    """Accept a matrix tuple object or a plain sequence of square arrays."""
    seq = getattr(arms, "a", arms)
    mats = [as_matrix(a, f"arm {i + 1}") for i, a in enumerate(seq)]
    if len(mats) != n:
        raise InputError(f"expected {n} arms, got {len(mats)}")
    p = mats[0].shape[0]
    for i, m in enumerate(mats):
        if m.shape != (p, p):
            raise InputError(f"arm {i + 1} has shape {m.shape}, expected ({p}, {p})")
    return mats


def band_operator(f: TruncatedFock, arms) -> np.ndarray:
    """Dense band operator ``I + sum_j S_j (x) a_j* + sum_j S_j* (x) a_j``.

    The coefficient block at position (k, k n + j) is ``a_j`` and its
    adjoint sits at the mirrored position, so the matrix is Hermitian by
    construction.  The word-space factor is the first Kronecker leg.
    """
    return band_operator_sparse(f, arms).toarray()


def band_operator_sparse(f: TruncatedFock, arms) -> sp.csr_matrix:
    """Sparse version of ``band_operator`` for large truncations."""
    mats = _coerce_arms(arms, f.n)
    p = mats[0].shape[0]
    iso = cuntz_isometries(f)
    band = sp.identity(f.dim * p, dtype=np.complex128, format="csr")
    for s, a in zip(iso.ops, mats):
        band = band + sp.kron(s, a.conj().T, format="csr") + sp.kron(s.T, a, format="csr")
    return band.tocsr()


def coupling_operator_sparse(f: TruncatedFock, arms) -> sp.csr_matrix:
    """Sparse ``sum_j S_j (x) a_j*``, the lower half of the band."""
    mats = _coerce_arms(arms, f.n)
    p = mats[0].shape[0]
    iso = cuntz_isometries(f)
    op = sp.csr_matrix((f.dim * p, f.dim * p), dtype=np.complex128)
    for s, a in zip(iso.ops, mats):
        op = op + sp.kron(s, a.conj().T, format="csr")
    return op.tocsr()


def compress(a, f: TruncatedFock, depth: int):
    """Principal submatrix of a word-space operator on levels <= depth.

    The basis is level ordered, so the compression is the leading block of
    size ``fock_dim(n, depth) * p`` where ``p`` is the coefficient size
    inferred from the shape of ``a``.  Entries are copied verbatim.
    """
    if not 0 <= depth <= f.depth:
        raise InputError(f"compression depth {depth} outside 0..{f.depth}")
    size = a.shape[0]
    if a.shape[0] != a.shape[1]:
        raise InputError(f"compress requires a square matrix, got shape {a.shape}")
    if size % f.dim != 0:
        raise InputError(f"matrix size {size} is not a multiple of the word-space dimension {f.dim}")
    p = size // f.dim
    cut = fock_dim(f.n, depth) * p
    if sp.issparse(a):
        return a.tocsr()[:cut, :cut]
    return np.asarray(a)[:cut, :cut]
