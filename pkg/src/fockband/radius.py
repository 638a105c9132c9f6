"""Numerical radius estimation and the two contraction predicates.

The numerical radius of an operator T is estimated from below by sweeping
``max_theta lam_max(Re(e^{i theta} T))`` over a uniform angle grid and
refining the best grid lobes by golden-section search.  The sweep value is
always a certified lower bound; the matching upper bound adds the
Lipschitz slack ``||T|| * pi / theta_points``.

The joint radius of a matrix tuple (a_1, .., a_n) at truncation depth d is
the numerical radius of ``sum_j S_j (x) a_j*`` on the depth-d word space.
It is nondecreasing in d, so each evaluation lower-bounds the limit.

Two predicates return three-valued verdicts:

* ``is_row_contraction``: decided exactly by the norm of sum a_i a_i*.
* ``is_dual_row_contraction``: positivity of the band operator at every
  depth.  A negative band eigenvalue at some truncation refutes it; only a
  completion certificate (see the shorted module) can confirm it, since
  band positivity at finitely many depths proves nothing about deeper
  truncations.  Anything else stays undecided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import scipy.sparse as sp

from .errors import CapacityError, InputError
from .fock import band_operator_sparse, coupling_operator_sparse, fock_dim, make_fock
from .linalg import as_matrix, lam_max_vec, lam_min, op_norm

if TYPE_CHECKING:
    from .shorted import AndoCertificate

CERTIFIED_YES = "certified_yes"
CERTIFIED_NO = "certified_no"
UNDECIDED = "undecided"

#: Default number of grid angles for the radius sweep.
THETA_POINTS = 720

#: Default deepest truncation tried by the dual predicate.
MAX_DEPTH = 6

#: Default cap on (word-space dimension) * (coefficient size) for eigenvalue work.
EIG_CAP = 20_000


@dataclass(frozen=True)
class MatrixTuple:
    """An n-tuple of p x p complex matrices."""

    n: int
    p: int
    a: tuple[np.ndarray, ...]

    @staticmethod
    def from_arrays(arrays) -> "MatrixTuple":
        mats = tuple(as_matrix(m, f"tuple entry {i + 1}") for i, m in enumerate(arrays))
        if not mats:
            raise InputError("matrix tuple must have at least one entry")
        p = mats[0].shape[0]
        for i, m in enumerate(mats):
            if m.shape != (p, p):
                raise InputError(f"tuple entry {i + 1} has shape {m.shape}, expected ({p}, {p})")
        return MatrixTuple(n=len(mats), p=p, a=mats)

    def adjoint(self) -> "MatrixTuple":
        return MatrixTuple(self.n, self.p, tuple(m.conj().T for m in self.a))

    def scale(self, s: complex) -> "MatrixTuple":
        return MatrixTuple(self.n, self.p, tuple(s * m for m in self.a))

    def row_gram(self) -> np.ndarray:
        """The Hermitian sum ``sum_i a_i a_i*`` whose norm decides row contractivity."""
        g = np.zeros((self.p, self.p), dtype=np.complex128)
        for m in self.a:
            g += m @ m.conj().T
        return g


@dataclass(frozen=True)
class RadiusEstimate:
    """Certified bracket for a numerical radius sweep."""

    lower: float
    grid_upper: float
    depth: int | None
    theta_points: int


@dataclass(frozen=True)
class ContractionVerdict:
    """Three-valued outcome of a contraction predicate.

    ``margin`` is the decisive eigenvalue gap: for a refutation it is the
    negative band eigenvalue that witnesses failure, otherwise the margin
    at the deepest truncation examined.
    """

    status: str
    margin: float
    depth: int | None = None
    certificate: "AndoCertificate | None" = None


def _angle_sweep(t_mat, theta_points: int, refine: bool) -> float:
    """Best lower bound for max_theta lam_max(Re(e^{i theta} T))."""
    if theta_points < 8:
        raise InputError(f"theta_points must be >= 8, got {theta_points}")
    if sp.issparse(t_mat):
        t_adj = t_mat.conj().T.tocsr()
    else:
        t_adj = t_mat.conj().T
    warm = {"v0": None}

    def f(theta: float) -> float:
        z = np.exp(1j * theta)
        h = 0.5 * (z * t_mat + np.conj(z) * t_adj)
        val, vec = lam_max_vec(h, v0=warm["v0"])
        if vec is not None:
            warm["v0"] = vec
        return val

    step = 2.0 * math.pi / theta_points
    vals = np.array([f(k * step) for k in range(theta_points)])
    best = float(vals.max())
    if not refine:
        return best
    # Refine the two strongest circular-grid lobes; a single lobe can lose
    # the true maximum when two lobes nearly tie at grid resolution.
    is_peak = (vals >= np.roll(vals, 1)) & (vals >= np.roll(vals, -1))
    peaks = np.nonzero(is_peak)[0]
    if len(peaks) == 0:
        peaks = np.array([int(vals.argmax())])
    order = peaks[np.argsort(vals[peaks])[::-1]]
    for k in order[:2]:
        center = k * step
        best = max(best, _golden_max(f, center - step, center + step))
    return best


def _golden_max(f, lo: float, hi: float, interval_tol: float = 1e-7) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = f(x1), f(x2)
    best = max(f1, f2)
    while hi - lo > interval_tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = f(x1)
        best = max(best, f1, f2)
    return best


def numerical_radius(t, theta_points: int = THETA_POINTS, refine: bool = True) -> RadiusEstimate:
    """Angle-grid bracket for the numerical radius of a single operator."""
    if not sp.issparse(t):
        t = as_matrix(t, "operator")
        if t.shape[0] != t.shape[1]:
            raise InputError(f"numerical radius requires a square matrix, got shape {t.shape}")
    lower = _angle_sweep(t, theta_points, refine)
    slack = op_norm(t) * math.pi / theta_points
    return RadiusEstimate(lower=float(lower), grid_upper=float(lower + slack),
                          depth=None, theta_points=theta_points)


def joint_numerical_radius(t: MatrixTuple, depth: int, theta_points: int = THETA_POINTS,
                           refine: bool = True, cap: int = EIG_CAP) -> RadiusEstimate:
    """Joint radius of a tuple at truncation depth ``depth``."""
    _check_capacity(t, depth, cap)
    f = make_fock(t.n, depth)
    op = coupling_operator_sparse(f, t)
    lower = _angle_sweep(op, theta_points, refine)
    slack = op_norm(op) * math.pi / theta_points
    return RadiusEstimate(lower=float(lower), grid_upper=float(lower + slack),
                          depth=depth, theta_points=theta_points)


def _check_capacity(t: MatrixTuple, depth: int, cap: int) -> None:
    size = fock_dim(t.n, depth) * t.p
    if size > cap:
        raise CapacityError(f"truncation size {size} = dim * p exceeds cap {cap}")


def is_row_contraction(t: MatrixTuple, tol: float = 1e-8) -> ContractionVerdict:
    """Decide ``||sum a_i a_i*|| <= 1`` exactly up to ``tol``.

    The margin is ``1 - ||sum a_i a_i*||``; no truncation is involved, so
    the verdict is never undecided.
    """
    norm = float(np.linalg.eigvalsh(0.5 * (t.row_gram() + t.row_gram().conj().T))[-1])
    margin = 1.0 - norm
    status = CERTIFIED_YES if norm <= 1.0 + tol else CERTIFIED_NO
    return ContractionVerdict(status=status, margin=margin)


def is_dual_row_contraction(t: MatrixTuple, max_depth: int = MAX_DEPTH, tol: float = 1e-8,
                            cap: int = EIG_CAP) -> ContractionVerdict:
    """Three-valued band positivity check across truncation depths.

    Sweeps depths 0..max_depth.  A band eigenvalue below ``-tol`` refutes
    the claim at that depth (compressions of a positive operator stay
    positive, so the refutation is sound for the untruncated statement).
    If no depth refutes, a completion certificate is attempted at the
    deepest truncation; only a strictly valid certificate upgrades the
    verdict to certified_yes.
    """
    _check_capacity(t, max_depth, cap)
    margin = 1.0
    for d in range(max_depth + 1):
        f = make_fock(t.n, d)
        band = band_operator_sparse(f, t)
        margin = lam_min(band)
        if margin < -tol:
            return ContractionVerdict(status=CERTIFIED_NO, margin=float(margin), depth=d)
    from .shorted import ando_complete  # deferred to avoid an import cycle
    from .errors import ConvergenceError, DomainError, SolveError
    try:
        cert = ando_complete(t, depth=max_depth, tol=tol, cap=cap)
    except (ConvergenceError, DomainError, SolveError):
        cert = None
    if cert is not None and cert.strictly_valid(tol):
        return ContractionVerdict(status=CERTIFIED_YES, margin=float(margin),
                                  depth=max_depth, certificate=cert)
    return ContractionVerdict(status=UNDECIDED, margin=float(margin), depth=max_depth)


@dataclass(frozen=True)
class DualRowReport:
    """Joint outcome of the dual and plain row-contraction checks."""

    dual: ContractionVerdict
    row: ContractionVerdict

    @property
    def implication_ok(self) -> bool:
        """A certified dual row contraction must be a row contraction."""
        if self.dual.status != CERTIFIED_YES:
            return True
        return self.row.status == CERTIFIED_YES


def dual_implies_row(t: MatrixTuple, max_depth: int = MAX_DEPTH, tol: float = 1e-8,
                     cap: int = EIG_CAP) -> DualRowReport:
    """Run both contraction predicates and report them side by side."""
    return DualRowReport(dual=is_dual_row_contraction(t, max_depth=max_depth, tol=tol, cap=cap),
                         row=is_row_contraction(t, tol=tol))
