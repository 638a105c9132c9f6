"""Shorted operators, the variational identity, and arrowhead completion.

The shorted operator of a psd block matrix onto its leading block is the
largest psd operator supported there that stays below the whole matrix.
For finite matrices it is the (generalized) Schur complement
``A11 - A12 A22^+ A21``, and it obeys a variational identity: the
quadratic form of the short at x is the infimum of the full form over all
tail completions y, attained at ``y* = -A22^+ A21 x``.

Completion turns that machinery into a positivity certificate for a
matrix tuple.  Short the epsilon-shrunk truncated band operator onto the
vacuum block to get b, set a = 1 - b, and assemble the arrowhead

    [[a,    a_1, ..., a_n],
     [a_1*, b,        0  ],
     [ .. ,      .,      ],
     [a_n*, 0,        b  ]].

A nonnegative arrowhead spectrum with a, b both strictly positive
certifies the tuple as a strict dual row contraction; the certificate is
finite and re-checkable by a single eigensolve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceError, DomainError, InputError
from .fock import band_operator_sparse, fock_dim, make_fock
from .linalg import PINV_CUTOFF, as_matrix, hermitize, lam_min, op_norm, pinv, psd_margin
from .radius import EIG_CAP, MatrixTuple


@dataclass(frozen=True)
class BlockSplit:
    """A Hermitian matrix with a cut separating the leading block."""

    matrix: np.ndarray
    cut: int


def block_split(a, cut: int) -> BlockSplit:
    m = hermitize(as_matrix(a, "matrix"), "matrix")
    if not 0 < cut < m.shape[0]:
        raise InputError(f"cut must lie strictly inside [0, {m.shape[0]}], got {cut}")
    return BlockSplit(matrix=m, cut=cut)


@dataclass(frozen=True)
class ShortResult:
    """Schur complement onto the leading block.

    ``schur_used`` records whether the tail block was inverted directly;
    False means the generalized (pseudo-inverse) complement was taken.
    """

    shorted: np.ndarray
    schur_used: bool


@dataclass(frozen=True)
class AndoCertificate:
    """Finite positivity certificate (a, b) with a + b = 1 exactly.

    ``margin`` is the least eigenvalue of the assembled arrowhead.  The
    arms are carried along so the certificate is self-contained: checking
    it needs only eigensolves, not the construction that produced it.
    """

    a: np.ndarray
    b: np.ndarray
    arrowhead: np.ndarray
    margin: float
    epsilon_used: float
    depth_used: int
    arms: MatrixTuple

    def strictly_valid(self, tol: float = 1e-8) -> bool:
        """Certificate semantics: arrowhead psd and a, b strictly positive."""
        if self.margin < -tol:
            return False
        a_min = float(np.linalg.eigvalsh(self.a)[0])
        b_min = float(np.linalg.eigvalsh(self.b)[0])
        return a_min > 0.0 and b_min > 0.0


def short(split: BlockSplit, cutoff: float = PINV_CUTOFF, tol: float = 1e-8) -> ShortResult:
    """Shorted operator of a psd matrix onto its leading block."""
    a = split.matrix
    report = psd_margin(a)
    if not report.is_psd:
        raise DomainError(
            f"shorted operator requires a psd matrix; min eigenvalue {report.min_eigenvalue:.3e}")
    k = split.cut
    a11, a12, a22 = a[:k, :k], a[:k, k:], a[k:, k:]
    # Prefer the exact complement; fall back to pinv when the tail block
    # is singular (rank-deficient psd inputs are legitimate here).
    schur_used = True
    try:
        w = np.linalg.eigvalsh(a22)
        if w[0] <= cutoff * max(1.0, w[-1]):
            raise np.linalg.LinAlgError("tail block numerically singular")
        x = np.linalg.solve(a22, a12.conj().T)
    except np.linalg.LinAlgError:
        schur_used = False
        x = pinv(a22, cutoff=cutoff) @ a12.conj().T
    return ShortResult(shorted=hermitize(a11 - a12 @ x, "shorted"), schur_used=schur_used)


@dataclass(frozen=True)
class VariationalReport:
    """Outcome of checking the shorted-operator variational identity at one x."""

    short_value: float
    closed_form_min: float
    best_sampled: float
    minimizer: np.ndarray
    trials: int

    def consistent(self, tol: float = 1e-8) -> bool:
        scale = max(1.0, abs(self.short_value))
        if abs(self.short_value - self.closed_form_min) > tol * scale:
            return False
        return self.best_sampled >= self.short_value - tol * scale


def variational_check(split: BlockSplit, x, trials: int = 200,
                      rng: np.random.Generator | None = None,
                      cutoff: float = PINV_CUTOFF, tol: float = 1e-8) -> VariationalReport:
    """Check <short(A) x, x> = inf_y <A (x, y), (x, y)> with its closed-form minimizer."""
    a = split.matrix
    k = split.cut
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    if x.shape[0] != k:
        raise InputError(f"x must have length {k}, got {x.shape[0]}")
    if rng is None:
        rng = np.random.default_rng(0)
    s = short(split, cutoff=cutoff, tol=tol).shorted
    short_value = float(np.real(np.vdot(x, s @ x)))

    a21 = a[k:, :k]
    y_star = -pinv(a[k:, k:], cutoff=cutoff) @ (a21 @ x)

    def form(y: np.ndarray) -> float:
        v = np.concatenate([x, y])
        return float(np.real(np.vdot(v, a @ v)))

    closed_form_min = form(y_star)
    best = np.inf
    m = a.shape[0] - k
    scale = max(1.0, float(np.linalg.norm(y_star)))
    for _ in range(trials):
        step = scale * 10.0 ** rng.uniform(-3, 1)
        y = y_star + step * (rng.standard_normal(m) + 1j * rng.standard_normal(m))
        best = min(best, form(y))
    if trials == 0:
        best = closed_form_min
    return VariationalReport(short_value=short_value, closed_form_min=closed_form_min,
                             best_sampled=float(best), minimizer=y_star, trials=trials)


def arrowhead_matrix(a0: np.ndarray, arms, diag: np.ndarray) -> np.ndarray:
    """Assemble [[a0, arms],[arms*, diag(diag, ..)]] in M_{n+1} (x) M_p."""
    arms = [np.asarray(m, dtype=np.complex128) for m in arms]
    p = a0.shape[0]
    n = len(arms)
    out = np.zeros(((n + 1) * p, (n + 1) * p), dtype=np.complex128)
    out[:p, :p] = a0
    for i, m in enumerate(arms, start=1):
        out[:p, i * p:(i + 1) * p] = m
        out[i * p:(i + 1) * p, :p] = m.conj().T
        out[i * p:(i + 1) * p, i * p:(i + 1) * p] = diag
    return out


def _short_vacuum(band: sp.spmatrix, p: int) -> np.ndarray:
    """Schur complement of a truncated band operator onto the vacuum block."""
    a = band.tocsc()
    a11 = a[:p, :p].toarray()
    a12 = a[:p, p:].toarray()
    a21 = a[p:, :p].toarray()
    a22 = a[p:, p:].tocsc()
    try:
        x = spla.splu(a22).solve(a21)
    except RuntimeError as exc:
        if a22.shape[0] > 4096:
            raise ConvergenceError(f"tail solve failed on block of size {a22.shape[0]}: {exc}")
        x = pinv(a22.toarray()) @ a21
    return hermitize(a11 - a12 @ x, "short")


#: Iteration budget for the deep peeling continuation of ando_complete.
PEEL_BUDGET = 200_000


def _peel_step(x: np.ndarray, base: np.ndarray, arms: tuple[np.ndarray, ...],
               stacked_adj: np.ndarray) -> np.ndarray:
    """One level of bottom-up elimination: x -> base - sum a_i x^{-1} a_i*.

    Raises LinAlgError when x stops being positive definite, which is
    exactly the event that the band operator at the current depth has a
    nonpositive pivot.
    """
    chol = np.linalg.cholesky(x)
    cols = np.linalg.solve(chol.conj().T, np.linalg.solve(chol, stacked_adj))
    p = base.shape[0]
    out = base.copy()
    for i, m in enumerate(arms):
        out -= m @ cols[:, i * p:(i + 1) * p]
    return 0.5 * (out + out.conj().T)


def _arrowhead_margin(a0: np.ndarray, arms, diag: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(arrowhead_matrix(a0, arms, diag))[0])


def ando_complete(t: MatrixTuple, depth: int = 6, epsilon: float | None = None,
                  tol: float = 1e-8, cap: int = EIG_CAP) -> AndoCertificate:
    """Completion certificate for a dual row contraction.

    Shorts the epsilon-shrunk depth-``depth`` band operator onto the
    vacuum block, takes b as that short and a = 1 - b, and returns the
    arrowhead together with its eigenvalue margin.  ``epsilon`` defaults
    to half the measured truncation margin; it must stay below the margin
    so the shrunk band remains positive.

    Boundary tuples defeat any fixed shallow truncation: their only valid
    pair sits at the fixed point of the level-peeling recursion, which
    the depth-L short reaches only as L grows.  Since that short equals
    the L-th recursion iterate exactly, the automatic-epsilon path keeps
    iterating in p x p arithmetic with the shift removed until the
    arrowhead margin clears -tol, the recursion refutes band positivity,
    or the budget runs out.  An explicit epsilon is honored literally and
    never extended.
    """
    size = fock_dim(t.n, depth) * t.p
    if size > cap:
        from .errors import CapacityError
        raise CapacityError(f"truncation size {size} = dim * p exceeds cap {cap}")
    f = make_fock(t.n, depth)
    band = band_operator_sparse(f, t)
    band_margin = lam_min(band)
    if band_margin <= tol:
        raise DomainError(
            f"band operator not strictly positive at depth {depth} "
            f"(min eigenvalue {band_margin:.3e}); no completion exists on this truncation")
    auto = epsilon is None
    if auto:
        epsilon = 0.5 * band_margin
    if not 0.0 < epsilon < band_margin:
        raise DomainError(
            f"epsilon must lie in (0, {band_margin:.3e}), got {epsilon:.3e}")

    shrunk = (band - epsilon * sp.identity(band.shape[0], format="csr")).tocsr()
    p = t.p
    tail = shrunk[p:, p:]
    tail_gap = op_norm(sp.identity(tail.shape[0], format="csr") - tail)
    if tail_gap >= 1.0:
        raise ConvergenceError(
            f"tail block drifts from the identity by {tail_gap:.6f} >= 1; "
            f"tuple too close to the boundary for epsilon={epsilon:.3e} at depth {depth}")
    b = _short_vacuum(shrunk, p)
    margin = _arrowhead_margin(np.eye(p) - b, t.a, b)
    depth_used = depth
    epsilon_used = float(epsilon)
    if auto and margin < -tol:
        b, margin, depth_used = _peel_to_margin(t, tol, start_depth=depth)
        epsilon_used = 0.0
    a = np.eye(p, dtype=np.complex128) - b
    head = arrowhead_matrix(a, t.a, b)
    return AndoCertificate(a=a, b=b, arrowhead=head, margin=margin,
                          epsilon_used=epsilon_used, depth_used=depth_used, arms=t)


def _peel_to_margin(t: MatrixTuple, tol: float, start_depth: int) -> tuple[np.ndarray, float, int]:
    """Run the shift-free peeling recursion until the arrowhead margin clears -tol."""
    p = t.p
    base = np.eye(p, dtype=np.complex128)
    stacked_adj = np.hstack([m.conj().T for m in t.a])
    x = base.copy()
    step = 0
    checkpoint = max(16, start_depth)
    best = -np.inf
    while step < PEEL_BUDGET:
        try:
            x = _peel_step(x, base, t.a, stacked_adj)
        except np.linalg.LinAlgError:
            raise DomainError(
                f"band operator is not positive definite at depth {step + 1}; "
                "no strict completion exists")
        step += 1
        if step >= checkpoint:
            margin = _arrowhead_margin(base - x, t.a, x)
            best = max(best, margin)
            if margin >= -tol:
                return x, margin, step
            checkpoint *= 2
    raise ConvergenceError(
        f"arrowhead margin still {best:.3e} after {PEEL_BUDGET} peeling steps; "
        "tuple sits too close to the boundary for this tolerance")


@dataclass(frozen=True)
class SelfSimilarityReport:
    """Depthwise shorts of the band operator and their successive drifts."""

    depths: tuple[int, ...]
    shorts: tuple[np.ndarray, ...]
    drifts: tuple[float, ...]

    @property
    def final_drift(self) -> float:
        return self.drifts[-1] if self.drifts else 0.0


def self_similarity_check(t: MatrixTuple, depth: int, tol: float = 1e-8,
                          cap: int = EIG_CAP) -> SelfSimilarityReport:
    """Track how the vacuum-block short stabilizes as the truncation deepens.

    The tail of the band operator repeats the band one level down, so the
    depth-L short should converge; the report carries the successive
    differences rather than asserting any rate.
    """
    size = fock_dim(t.n, depth) * t.p
    if size > cap:
        from .errors import CapacityError
        raise CapacityError(f"truncation size {size} = dim * p exceeds cap {cap}")
    shorts: list[np.ndarray] = []
    drifts: list[float] = []
    depths = tuple(range(1, depth + 1))
    for d in depths:
        f = make_fock(t.n, d)
        band = band_operator_sparse(f, t)
        if lam_min(band) < -tol:
            raise DomainError(f"band operator not positive at depth {d}")
        shorts.append(_short_vacuum(band, t.p))
        if len(shorts) > 1:
            drifts.append(float(np.linalg.norm(shorts[-1] - shorts[-2], 2)))
    return SelfSimilarityReport(depths=depths, shorts=tuple(shorts), drifts=tuple(drifts))
