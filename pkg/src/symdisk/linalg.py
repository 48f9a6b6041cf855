"""Dense complex linear algebra used by every other module.

The general eigenvalue solver is a hand-written Hessenberg + implicitly
shifted QR iteration (single Wilkinson shift, ad-hoc exceptional shifts).
Matrices in this artifact stay small (d <= ~16), so the implementation is
tuned for robustness rather than speed.  Hermitian eigensolves, SVD-based
null spaces, and PSD square roots are delegated to numpy behind the same
contracts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import IllPlacedContour, InputError, NumericalError

_EPS = np.finfo(float).eps


def as_complex_matrix(A, square: bool = False) -> np.ndarray:
    """Validate and return a 2-D complex ndarray with finite entries."""
    M = np.asarray(A, dtype=complex)
    if M.ndim != 2:
        raise InputError(f"expected a matrix, got array of ndim {M.ndim}")
    if square and M.shape[0] != M.shape[1]:
        raise InputError(f"expected a square matrix, got shape {M.shape}")
    if M.size and not np.all(np.isfinite(M.view(float))):
        raise InputError("matrix has non-finite entries")
    return M


def _givens(a: complex, b: complex):
    """Rotation [[c, s], [-conj(s), c]] with c real sending (a, b) to (r, 0)."""
    if b == 0:
        return 1.0, 0.0 + 0.0j
    if a == 0:
        return 0.0, 1.0 + 0.0j
    rho = np.hypot(abs(a), abs(b))
    c = abs(a) / rho
    s = (a / abs(a)) * np.conj(b) / rho
    return c, s


def _hessenberg(A: np.ndarray) -> np.ndarray:
    """Reduce to upper Hessenberg form by Householder similarity."""
    H = np.array(A, dtype=complex, copy=True)
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1:, k]
        normx = np.linalg.norm(x)
        if normx <= _EPS * max(1.0, np.linalg.norm(H)):
            H[k + 2:, k] = 0.0
            continue
        v = x.copy()
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v[0] += phase * normx
        v /= np.linalg.norm(v)
        H[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ H[k + 1:, k:])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v.conj())
        H[k + 2:, k] = 0.0
    return H


def _trailing_eigs(a, b, c, d):
    """Eigenvalues of [[a, b], [c, d]], larger-|.| root first for stability."""
    t = 0.5 * (a + d)
    disc = np.sqrt(0.25 * (a - d) ** 2 + b * c)
    l1 = t + disc if abs(t + disc) >= abs(t - disc) else t - disc
    det = a * d - b * c
    l2 = det / l1 if l1 != 0 else t - disc
    return l1, l2


def _qr_sweep(H: np.ndarray, lo: int, hi: int, mu: complex) -> None:
    """One implicit single-shift QR step on the active window [lo, hi]."""
    n = H.shape[0]
    x = H[lo, lo] - mu
    y = H[lo + 1, lo]
    for k in range(lo, hi):
        c, s = _givens(x, y)
        G = np.array([[c, s], [-np.conj(s), c]], dtype=complex)
        left = max(0, k - 1)
        H[k:k + 2, left:] = G @ H[k:k + 2, left:]
        top = min(hi, k + 2) + 1
        H[:top, k:k + 2] = H[:top, k:k + 2] @ G.conj().T
        if k < hi - 1:
            x = H[k + 1, k]
            y = H[k + 2, k]


def spectrum(A, cfg: Tolerances = DEFAULT) -> np.ndarray:
    """All eigenvalues of a square complex matrix, with multiplicity.

    Hessenberg reduction followed by implicitly shifted QR with Wilkinson
    shifts; every 12 stalled iterations an exceptional shift is injected.
    The order of the returned eigenvalues is the deflation order.
    """
    A = as_complex_matrix(A, square=True)
    n = A.shape[0]
    if n == 0:
        return np.zeros(0, dtype=complex)
    if n == 1:
        return A[0, 0:1].copy()
    H = _hessenberg(A)
    anorm = max(np.linalg.norm(H), _EPS)
    eigs: list[complex] = []
    hi = n - 1
    stall = 0
    budget = 200 * n
    while hi >= 0:
        if budget <= 0:
            raise NumericalError("QR iteration failed to converge")
        for k in range(1, hi + 1):
            thresh = _EPS * (abs(H[k - 1, k - 1]) + abs(H[k, k]))
            if abs(H[k, k - 1]) <= max(thresh, _EPS * _EPS * anorm):
                H[k, k - 1] = 0.0
        if hi == 0 or H[hi, hi - 1] == 0:
            eigs.append(H[hi, hi])
            hi -= 1
            stall = 0
            continue
        lo = hi
        while lo > 0 and H[lo, lo - 1] != 0:
            lo -= 1
        if hi - lo == 1:
            l1, l2 = _trailing_eigs(H[lo, lo], H[lo, hi], H[hi, lo], H[hi, hi])
            eigs.extend([l1, l2])
            hi -= 2
            stall = 0
            continue
        stall += 1
        budget -= 1
        if stall % 12 == 0:
            mu = H[hi, hi] + 0.75 * abs(H[hi, hi - 1])
        else:
            l1, l2 = _trailing_eigs(H[hi - 1, hi - 1], H[hi - 1, hi],
                                    H[hi, hi - 1], H[hi, hi])
            mu = l1 if abs(l1 - H[hi, hi]) <= abs(l2 - H[hi, hi]) else l2
        _qr_sweep(H, lo, hi, mu)
    return np.array(eigs[::-1], dtype=complex)


def cluster_eigenvalues(eigs, scale: float, cfg: Tolerances = DEFAULT):
    """Group eigenvalues within tol_cluster*scale; returns (mean, count) pairs."""
    eigs = np.asarray(eigs, dtype=complex)
    tol = cfg.tol_cluster * max(scale, 1.0)
    groups: list[list[complex]] = []
    for ev in sorted(eigs, key=lambda z: (z.real, z.imag)):
        for g in groups:
            if abs(ev - np.mean(g)) <= tol:
                g.append(ev)
                break
        else:
            groups.append([ev])
    return [(complex(np.mean(g)), len(g)) for g in groups]


def hermitian_eig(H, cfg: Tolerances = DEFAULT):
    """Eigendecomposition of a Hermitian matrix: ascending values, orthonormal vectors."""
    H = as_complex_matrix(H, square=True)
    scale = max(np.linalg.norm(H), 1.0)
    if np.linalg.norm(H - H.conj().T) > cfg.tol_herm * scale:
        raise InputError("matrix is not Hermitian to tolerance")
    vals, vecs = np.linalg.eigh((H + H.conj().T) / 2)
    return vals, vecs


def null_space(A, rank_tol: float | None = None, cfg: Tolerances = DEFAULT):
    """Orthonormal basis of the numerical null space (right singular vectors)."""
    A = as_complex_matrix(A)
    if rank_tol is None:
        rank_tol = cfg.rank_tol
    if A.shape[1] == 0:
        return []
    if A.shape[0] == 0:
        return [np.eye(A.shape[1], dtype=complex)[:, j] for j in range(A.shape[1])]
    _, sv, Vh = np.linalg.svd(A)
    smax = sv[0] if len(sv) else 0.0
    basis = []
    for i in range(A.shape[1]):
        s_i = sv[i] if i < len(sv) else 0.0
        if s_i <= rank_tol * max(smax, _EPS):
            basis.append(Vh[i].conj())
    return basis


def psd_sqrt(M, cfg: Tolerances = DEFAULT) -> np.ndarray:
    """Hermitian PSD square root; rejects matrices indefinite beyond tol_psd."""
    M = as_complex_matrix(M, square=True)
    scale = max(np.linalg.norm(M), 1.0)
    if np.linalg.norm(M - M.conj().T) > cfg.tol_herm * scale:
        raise InputError("matrix is not Hermitian to tolerance")
    vals, vecs = np.linalg.eigh((M + M.conj().T) / 2)
    if len(vals) and vals[0] < -cfg.tol_psd * scale:
        raise InputError(f"matrix is indefinite: min eigenvalue {vals[0]:.3e}")
    root = (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T
    return (root + root.conj().T) / 2


@dataclass(frozen=True)
class SpectralProjection:
    """Contour-integral spectral projection of a matrix."""
    matrix: np.ndarray
    enclosed_count: int
    center: complex
    radius: float
    idempotency_defect: float


def spectral_projection(A, center: complex, radius: float, n_quad: int | None = None,
                        cfg: Tolerances = DEFAULT) -> SpectralProjection:
    """Riesz projection (2*pi*i)^-1 * integral of the resolvent over a circle.

    Trapezoid quadrature with ``n_quad`` nodes is spectrally accurate for the
    (analytic) resolvent.  Raises :class:`IllPlacedContour` when an eigenvalue
    comes within ``dist_guard * radius`` of the contour.
    """
    A = as_complex_matrix(A, square=True)
    if radius <= 0:
        raise InputError("contour radius must be positive")
    if n_quad is None:
        n_quad = cfg.n_quad
    eigs = spectrum(A, cfg)
    dist = np.abs(np.abs(eigs - center) - radius)
    if len(eigs) and dist.min() < cfg.dist_guard * radius:
        raise IllPlacedContour(
            f"eigenvalue within {dist.min():.3e} of the contour (radius {radius:.3e})")
    enclosed = int(np.sum(np.abs(eigs - center) < radius))
    n = A.shape[0]
    t = 2 * np.pi * np.arange(n_quad) / n_quad
    zeta = center + radius * np.exp(1j * t)
    shifted = zeta[:, None, None] * np.eye(n) - A[None, :, :]
    resolvents = np.linalg.solve(shifted, np.broadcast_to(np.eye(n, dtype=complex),
                                                          (n_quad, n, n)))
    P = (radius / n_quad) * np.einsum("k,kij->ij", np.exp(1j * t), resolvents)
    defect = float(np.linalg.norm(P @ P - P))
    # non-orthogonal projections near branch points have large norm; the
    # idempotency contract is relative to that intrinsic scale
    pnorm = np.linalg.norm(P, 2) if n else 0.0
    if defect > cfg.tol_proj * max(1.0, pnorm ** 2):
        raise NumericalError(f"projection not idempotent: ||P^2-P|| = {defect:.3e}")
    tr = np.trace(P)
    if abs(tr - round(tr.real)) > 0.01 or round(tr.real) != enclosed:
        raise NumericalError(
            f"projection rank {tr:.6f} disagrees with enclosed count {enclosed}")
    return SpectralProjection(P, enclosed, complex(center), float(radius), defect)


def complete_to_unitary(dom_basis, ran_basis, dim: int | None = None,
                        cfg: Tolerances = DEFAULT) -> np.ndarray:
    """Extend the isometry dom_basis[i] -> ran_basis[i] to a full unitary.

    The prescribed map must be isometric on spans: the two Gram matrices have
    to agree to tol_gram (relative).  Rank deficiency in the spans is fine.
    """
    dom = [np.asarray(v, dtype=complex).ravel() for v in dom_basis]
    ran = [np.asarray(v, dtype=complex).ravel() for v in ran_basis]
    if len(dom) != len(ran):
        raise InputError("domain and range lists must have equal length")
    if not dom:
        if dim is None:
            raise InputError("empty input needs an explicit ambient dimension")
        return np.eye(dim, dtype=complex)
    n = len(dom[0])
    if any(len(v) != n for v in dom + ran):
        raise InputError("all vectors must share one ambient dimension")
    X = np.column_stack(dom)
    Y = np.column_stack(ran)
    gx = X.conj().T @ X
    gy = Y.conj().T @ Y
    scale = max(np.linalg.norm(gx), 1.0)
    if np.linalg.norm(gx - gy) > cfg.tol_gram * scale:
        raise InputError("prescribed map is not isometric: Gram matrices differ")
    U_, sv, Vh = np.linalg.svd(X)
    r = int(np.sum(sv > cfg.rank_tol * max(sv[0], _EPS)))
    Qd = U_[:, :r]
    Qr = (Y @ Vh[:r].conj().T) / sv[:r]
    # polar correction: orthonormalizes near-isometric columns without
    # re-phasing them (QR would), so the prescribed images are preserved
    gw, gv = np.linalg.eigh(Qr.conj().T @ Qr)
    Qr = Qr @ (gv * (1.0 / np.sqrt(np.clip(gw, _EPS, None)))) @ gv.conj().T
    Qd_perp = _orthogonal_complement(Qd)
    Qr_perp = _orthogonal_complement(Qr)
    U = np.hstack([Qr, Qr_perp]) @ np.hstack([Qd, Qd_perp]).conj().T
    err = max(np.linalg.norm(U @ X[:, j] - Y[:, j]) for j in range(X.shape[1]))
    if err > np.sqrt(cfg.tol_gram) * max(1.0, np.linalg.norm(Y)):
        raise NumericalError(f"unitary completion maps with residual {err:.3e}")
    return U


def _orthogonal_complement(Q: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the complement of the column span of Q."""
    n, r = Q.shape
    if r >= n:
        return np.zeros((n, 0), dtype=complex)
    M = np.eye(n, dtype=complex) - Q @ Q.conj().T
    U_, sv, _ = np.linalg.svd(M)
    return U_[:, :n - r]
