"""Shared machinery for weighted covariance matching.

Both estimators minimize the weighted Frobenius cost
``|| W^(1/2) (Rbar - Rhat(theta)) W^(1/2) ||_F^2`` over models of the form
``Rhat = Phi(z) (sum_i alpha_i H_i) Phi(z)^H`` with ``Phi(z) = diag a(z)``,
real coefficients alpha and a fixed stack of Hermitian basis matrices H_i.
The linear coefficients concentrate in closed form through the quantities

    y_i(z) = tr(H_i^H Phi^H W Rbar W Phi)      (weighted data correlations)
    Y_ik(z) = tr(H_i^H G H_k G), G = Phi^H W Phi

which are assembled directly from M x M products; the M^2 x M^2 Kronecker
forms are never materialized.  For Hermitian inputs both are exactly real.
"""

from __future__ import annotations

import math

import numpy as np

from .profiles import CovarianceModel

__all__ = [
    "WEIGHTINGS",
    "DegenerateCovarianceError",
    "weighting",
    "vec",
    "unvec",
    "fit_terms",
    "fit_terms_grid",
    "solve_quadratic",
    "cost_constant",
    "golden_section_max",
]

WEIGHTINGS = ("identity", "inverse_sample")

_CONDITION_LIMIT = 1e12
_LOADING_FACTOR = 1e-8
_PINV_CUTOFF = 1e-12
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class DegenerateCovarianceError(ValueError):
    """Raised when a covariance input is numerically zero or unusable."""


def weighting(R_bar: CovarianceModel, choice: str) -> np.ndarray:
    """Weighting matrix for the covariance-matching cost.

    ``"identity"`` returns I; ``"inverse_sample"`` returns the inverse of
    ``R_bar``, applying diagonal loading first when the matrix is singular
    or has a 2-norm condition number above 1e12.
    """
    W, _ = _weighting_flagged(R_bar, choice)
    return W


def _weighting_flagged(R_bar: CovarianceModel, choice: str) -> tuple[np.ndarray, bool]:
    if choice not in WEIGHTINGS:
        raise ValueError(f"weighting must be one of {WEIGHTINGS}")
    M = R_bar.M
    if choice == "identity":
        return np.eye(M), False
    R = np.asarray(R_bar.matrix)
    eigenvalues = np.linalg.eigvalsh(R)
    loaded = bool(eigenvalues[0] <= 0.0 or eigenvalues[-1] / eigenvalues[0] > _CONDITION_LIMIT)
    if loaded:
        trace = float(np.real(np.trace(R)))
        if trace <= 0.0:
            raise DegenerateCovarianceError("covariance has nonpositive trace; cannot weight")
        R = R + (_LOADING_FACTOR * trace / M) * np.eye(M)
    eigenvalues, vectors = np.linalg.eigh(R)
    if eigenvalues[0] <= 0.0:
        raise DegenerateCovarianceError("covariance is singular even after diagonal loading")
    W = (vectors / eigenvalues) @ vectors.conj().T
    return 0.5 * (W + W.conj().T), loaded


def vec(A: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(A).reshape(-1, order="F")


def unvec(v: np.ndarray, M: int) -> np.ndarray:
    """Inverse of :func:`vec` for an M x M matrix."""
    return np.asarray(v).reshape((M, M), order="F")


def fit_terms(
    stack: np.ndarray,
    a: np.ndarray,
    W: np.ndarray,
    WRW: np.ndarray,
    real_cast: bool = True,
):
    """Concentration terms y (K,) and Y (K, K) at one steering vector.

    ``stack`` holds the K Hermitian basis matrices, ``a`` the steering
    vector at the candidate height, ``WRW`` the precomputed ``W Rbar W``.
    With ``real_cast`` the exactly-real outputs are returned as floats.
    """
    ac = a.conj()
    G = ac[:, None] * W * a[None, :]
    T = ac[:, None] * WRW * a[None, :]
    y = np.einsum("imn,mn->i", stack.conj(), T)
    GHG = np.einsum("mp,kpq,qn->kmn", G, stack, G, optimize=True)
    Y = np.einsum("imn,kmn->ik", stack.conj(), GHG, optimize=True)
    if real_cast:
        return y.real.copy(), 0.5 * (Y.real + Y.real.T)
    return y, Y


def fit_terms_grid(
    stack: np.ndarray,
    A: np.ndarray,
    W: np.ndarray,
    WRW: np.ndarray,
):
    """Batched :func:`fit_terms` over a grid of steering vectors (rows of A)."""
    Ac = A.conj()
    G = Ac[:, :, None] * W[None, :, :] * A[:, None, :]
    T = Ac[:, :, None] * WRW[None, :, :] * A[:, None, :]
    y = np.einsum("imn,zmn->zi", stack.conj(), T).real
    GHG = np.einsum("zmp,kpq,zqn->zkmn", G, stack, G, optimize=True)
    Y = np.einsum("imn,zkmn->zik", stack.conj(), GHG, optimize=True).real
    return y.copy(), 0.5 * (Y + np.swapaxes(Y, -1, -2))


def solve_quadratic(y: np.ndarray, Y: np.ndarray):
    """Solve ``Y alpha = y`` and evaluate the concentrated quadratic form.

    Accepts a single system (1-d y) or a leading batch dimension.  Each
    system is diagonally equilibrated to unit diagonal before solving, so
    the conditioning screen reflects collinearity rather than column
    scale; high-order regressor columns are orders of magnitude smaller
    than the leading ones.  Systems whose smallest equilibrated
    eigenvalue falls below 1e-12 of the largest fall back to a
    pseudo-inverse and are flagged.  Returns ``(alpha, objective,
    used_pinv)`` with the objective ``y^T alpha`` clipped at zero.
    """
    y = np.asarray(y, dtype=float)
    Y = np.asarray(Y, dtype=float)
    single = y.ndim == 1
    if single:
        y = y[None]
        Y = Y[None]
    diag = np.einsum("zkk->zk", Y)
    scale = np.sqrt(np.where(np.isfinite(diag) & (diag > 0.0), diag, 1.0))
    Ys = Y / (scale[:, :, None] * scale[:, None, :])
    ys = y / scale
    eigenvalues = np.linalg.eigvalsh(Ys)
    bad = (eigenvalues[:, 0] <= eigenvalues[:, -1] * _PINV_CUTOFF) | ~np.all(
        np.isfinite(eigenvalues), axis=-1
    )
    beta = np.empty_like(ys)
    good = ~bad
    if np.any(good):
        beta[good] = np.linalg.solve(Ys[good], ys[good][..., None])[..., 0]
    for (i,) in np.argwhere(bad):
        beta[i] = np.linalg.pinv(Ys[i], rcond=_PINV_CUTOFF) @ ys[i]
    alpha = beta / scale
    objective = np.clip(np.einsum("zk,zk->z", ys, beta), 0.0, None)
    used_pinv = bool(np.any(bad))
    if single:
        return alpha[0], float(objective[0]), used_pinv
    return alpha, objective, used_pinv


def cost_constant(R: np.ndarray, W: np.ndarray) -> float:
    """Model-independent cost term ``tr(Rbar W Rbar W)``."""
    X = W @ R
    return float(np.real(np.einsum("nm,mn->", X, X)))


def golden_section_max(f, lo: float, hi: float, tol: float) -> float:
    """Golden-section maximizer of a unimodal function on [lo, hi]."""
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)
