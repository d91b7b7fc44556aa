"""Dense complex operator algebra and metric-weighted Hermitian conjugations.

All values live in a fixed working basis (the standard coordinate basis),
which pins down the antilinear time reversal as plain entrywise
conjugation.  Every function is pure and never mutates its arguments.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NonHermitianMetric, SingularMetric

# Relative Frobenius drift accepted before a metric is rejected as
# non-Hermitian; accepted metrics are symmetrized to remove roundoff.
METRIC_HERMITICITY_RTOL = 1e-12

# Condition-number cap for metric inversion; beyond it the weighted
# adjoint would be numerically meaningless.
METRIC_CONDITION_CAP = 1e12

DEFAULT_RTOL = 1e-10


def as_operator(a) -> np.ndarray:
    """Coerce to a finite square complex matrix (always a fresh copy)."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError("operator entries must be finite")
    return m


def as_state(v, dim: int | None = None) -> np.ndarray:
    """Coerce to a finite complex vector, optionally of fixed dimension."""
    w = np.array(v, dtype=complex).ravel()
    if w.size < 1:
        raise DimensionMismatch("state vector must not be empty")
    if dim is not None and w.size != dim:
        raise DimensionMismatch(f"state has dimension {w.size}, expected {dim}")
    if not np.isfinite(w).all():
        raise ValueError("state entries must be finite")
    return w


def frobenius(a) -> float:
    return float(np.linalg.norm(a))


def adjoint(a) -> np.ndarray:
    """Conjugate transpose in the working basis."""
    return as_operator(a).conj().T


def time_reversal(a) -> np.ndarray:
    """Entrywise complex conjugation; an involution, basis-dependent by
    construction."""
    return as_operator(a).conj()


def require_metric(m, rtol: float = METRIC_HERMITICITY_RTOL) -> np.ndarray:
    """Validate Hermiticity of a metric and return its symmetrized form."""
    mm = as_operator(m)
    scale = max(np.linalg.norm(mm), np.finfo(float).tiny)
    drift = np.linalg.norm(mm - mm.conj().T)
    if drift > rtol * scale:
        raise NonHermitianMetric(
            f"metric deviates from Hermiticity by {drift:.3e} "
            f"(relative cap {rtol:g})"
        )
    return 0.5 * (mm + mm.conj().T)


def adjoint_wrt(a, m, *, hermiticity_rtol: float = METRIC_HERMITICITY_RTOL,
                cond_cap: float = METRIC_CONDITION_CAP) -> np.ndarray:
    """Hermitian conjugate of ``a`` in the inner product weighted by ``m``.

    Returns M^-1 A^dagger M.  Reduces to the plain adjoint for M = I and is
    an involution for any admissible metric.
    """
    aa = as_operator(a)
    mm = require_metric(m, hermiticity_rtol)
    if aa.shape != mm.shape:
        raise DimensionMismatch(
            f"operator {aa.shape} incompatible with metric {mm.shape}")
    w = np.abs(np.linalg.eigvalsh(mm))
    if w.min() == 0.0 or w.max() / w.min() > cond_cap:
        raise SingularMetric(
            f"metric condition number exceeds cap {cond_cap:g}")
    return np.linalg.solve(mm, aa.conj().T @ mm)


def inner(m, v1, v2) -> complex:
    """Metric-weighted inner product v1^dagger M v2 (antilinear in v1)."""
    mm = as_operator(m)
    a = as_state(v1, mm.shape[0])
    b = as_state(v2, mm.shape[0])
    return complex(a.conj() @ (mm @ b))


def parity_matrix(n: int) -> np.ndarray:
    """Index-reversal permutation matrix: Hermitian, real, involutory."""
    if int(n) != n or n < 1:
        raise DimensionMismatch("parity needs a positive integer dimension")
    return np.fliplr(np.eye(int(n), dtype=complex)).copy()
