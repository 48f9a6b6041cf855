"""Numerical range and radius, unitary (+) c.n.u. splitting, and the PU family.

For a numerical contraction the unitary part is spanned by joint eigenvectors
of F and F* at unimodular eigenvalues; peeling those off leaves a block with
no spectrum on the circle.  The family PU + U*(I-P) (P a projection, U a
unitary) consists of numerical contractions and is handled by the same tools.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import InputError, NumericalError
from .linalg import as_complex_matrix, hermitian_eig, null_space, spectrum

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def support_function(F, theta: float, cfg: Tolerances = DEFAULT) -> float:
    """Largest eigenvalue of Re(e^{-i*theta} F), the support function of W(F)."""
    F = as_complex_matrix(F, square=True)
    if F.shape[0] == 0:
        return 0.0
    H = (np.exp(-1j * theta) * F + np.exp(1j * theta) * F.conj().T) / 2
    vals, _ = hermitian_eig(H, cfg)
    return float(vals[-1])


def numerical_radius(F, cfg: Tolerances = DEFAULT) -> float:
    """max_theta of the support function, by coarse grid + golden-section refine.

    The support function is smooth away from eigenvalue crossings; a 257-point
    grid brackets the maximum well enough at this scale, and golden-section
    narrows the bracket until the value is resolved to tol_nu.
    """
    F = as_complex_matrix(F, square=True)
    if F.shape[0] == 0:
        return 0.0
    thetas = 2 * np.pi * np.arange(cfg.n_theta) / cfg.n_theta
    vals = np.array([support_function(F, t, cfg) for t in thetas])
    k = int(np.argmax(vals))
    best = float(vals[k])
    step = 2 * np.pi / cfg.n_theta
    a = thetas[k] - step
    b = thetas[k] + step
    # golden-section on the bracket; crossings at the max only flatten it
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1 = support_function(F, x1, cfg)
    f2 = support_function(F, x2, cfg)
    while (b - a) > 1e-7:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = support_function(F, x2, cfg)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = support_function(F, x1, cfg)
    return max(best, f1, f2)


@dataclass(frozen=True)
class CnuVerdict:
    """Outcome of the c.n.u. test with unimodular-eigenvalue witnesses."""
    is_cnu: bool
    witnesses: tuple[complex, ...]

    def __bool__(self) -> bool:
        return self.is_cnu


def is_cnu(F, cfg: Tolerances = DEFAULT) -> CnuVerdict:
    """True iff no eigenvalue lies within tol_mod of the unit circle.

    The spectral criterion characterizes complete non-unitarity only for
    numerical contractions, so nu(F) <= 1 + tol_nu is enforced first.
    """
    F = as_complex_matrix(F, square=True)
    nu = numerical_radius(F, cfg)
    if nu > 1.0 + cfg.tol_nu:
        raise InputError(f"not a numerical contraction: nu = {nu:.12f}")
    eigs = spectrum(F, cfg)
    witnesses = tuple(complex(ev) for ev in eigs if abs(abs(ev) - 1.0) <= cfg.tol_mod)
    return CnuVerdict(len(witnesses) == 0, witnesses)


@dataclass(frozen=True)
class CnuDecomposition:
    """Unitary (+) c.n.u. splitting: transform* F transform = diag(unitary, cnu)."""
    transform: np.ndarray
    unitary_eigenvalues: tuple[tuple[complex, int], ...]
    cnu_block: np.ndarray


def _joint_eigenspace(F: np.ndarray, beta: complex, cfg: Tolerances) -> list[np.ndarray]:
    """Orthonormal basis of ker(F - beta I) \\cap ker(F* - conj(beta) I)."""
    n = F.shape[0]
    stacked = np.vstack([F - beta * np.eye(n), F.conj().T - np.conj(beta) * np.eye(n)])
    return null_space(stacked, cfg=cfg)


def _unimodular_reps(eigs, scale: float, cfg: Tolerances) -> list[complex]:
    """One raw representative per cluster of unimodular eigenvalues.

    Raw values (not cluster means) keep the null-space cutoff sharp: unimodular
    eigenvalues of numerical contractions are semisimple, so the computed
    copies agree to near machine precision.
    """
    uni = sorted((ev for ev in eigs if abs(abs(ev) - 1.0) <= cfg.tol_mod),
                 key=lambda z: (z.real, z.imag))
    reps: list[complex] = []
    tol = cfg.tol_cluster * max(scale, 1.0)
    for ev in uni:
        if not any(abs(ev - r) <= tol for r in reps):
            reps.append(complex(ev))
    return reps


def cnu_decompose(F, cfg: Tolerances = DEFAULT) -> CnuDecomposition:
    """Peel unimodular eigenvalues off a numerical contraction.

    Each unimodular eigenvalue of a numerical contraction sits on the boundary
    of the numerical range and therefore carries a reducing joint eigenvector;
    the peeling repeats until the remaining block is c.n.u.
    """
    F = as_complex_matrix(F, square=True)
    nu = numerical_radius(F, cfg)
    if nu > 1.0 + cfg.tol_nu:
        raise InputError(f"not a numerical contraction: nu = {nu:.12f}")
    n = F.shape[0]
    transform = np.eye(n, dtype=complex)
    block = F.copy()
    peeled: list[tuple[complex, int]] = []
    while block.shape[0]:
        scale = max(np.linalg.norm(block), 1.0)
        reps = _unimodular_reps(spectrum(block, cfg), scale, cfg)
        if not reps:
            break
        beta = reps[0]
        basis = _joint_eigenspace(block, beta, cfg)
        if not basis:
            raise NumericalError(
                f"unimodular eigenvalue {beta:.6f} has no reducing eigenvector")
        Q = np.column_stack(basis)
        m = Q.shape[1]
        rest = _complement(Q)
        W = np.hstack([rest, Q])  # keep c.n.u. candidates in the leading block
        block_new = W.conj().T @ block @ W
        off = np.linalg.norm(block_new[: block.shape[0] - m, block.shape[0] - m:]) + \
            np.linalg.norm(block_new[block.shape[0] - m:, : block.shape[0] - m])
        if off > 1e-9 * scale:
            raise NumericalError("joint eigenspace failed to reduce the matrix")
        transform = transform @ _embed_tail(W, n)
        peeled.append((complex(beta), m))
        block = block_new[: block.shape[0] - m, : block.shape[0] - m]
    # assemble with the unitary part leading, per the decomposition convention
    k = block.shape[0]
    perm = np.zeros((n, n), dtype=complex)
    perm[:, :n - k] = np.eye(n)[:, k:]
    perm[:, n - k:] = np.eye(n)[:, :k]
    transform = transform @ perm
    dec = CnuDecomposition(transform, tuple(reversed(peeled)), block)
    _check_reassembly(F, dec)
    return dec


def _embed_tail(W: np.ndarray, n: int) -> np.ndarray:
    """Embed a k x k unitary into the leading k coordinates of C^n."""
    k = W.shape[0]
    out = np.eye(n, dtype=complex)
    out[:k, :k] = W
    return out


def _complement(Q: np.ndarray) -> np.ndarray:
    n, r = Q.shape
    if r >= n:
        return np.zeros((n, 0), dtype=complex)
    M = np.eye(n, dtype=complex) - Q @ Q.conj().T
    U_, _, _ = np.linalg.svd(M)
    return U_[:, :n - r]


def _check_reassembly(F: np.ndarray, dec: CnuDecomposition) -> None:
    n = F.shape[0]
    blocks = [beta * np.eye(m, dtype=complex) for beta, m in dec.unitary_eigenvalues]
    blocks.append(dec.cnu_block)
    D = np.zeros((n, n), dtype=complex)
    at = 0
    for b in blocks:
        k = b.shape[0]
        D[at:at + k, at:at + k] = b
        at += k
    err = np.linalg.norm(dec.transform @ D @ dec.transform.conj().T - F)
    if err > 1e-9 * max(1.0, np.linalg.norm(F)):
        raise NumericalError(f"c.n.u. decomposition reassembly residual {err:.3e}")


def pu_compress(P, U, cfg: Tolerances = DEFAULT) -> np.ndarray:
    """The numerical contraction PU + U*(I - P) for a projection P, unitary U."""
    P = as_complex_matrix(P, square=True)
    U = as_complex_matrix(U, square=True)
    if P.shape != U.shape:
        raise InputError("P and U must have the same dimension")
    n = P.shape[0]
    scale = max(1.0, np.linalg.norm(P))
    if np.linalg.norm(P @ P - P) > cfg.tol_op * scale or \
            np.linalg.norm(P - P.conj().T) > cfg.tol_op * scale:
        raise InputError("P is not an orthogonal projection to tolerance")
    if np.linalg.norm(U.conj().T @ U - np.eye(n)) > cfg.tol_op:
        raise InputError("U is not unitary to tolerance")
    T = P @ U + U.conj().T @ (np.eye(n) - P)
    nu = numerical_radius(T, cfg)
    if nu > 1.0 + cfg.tol_nu:
        raise NumericalError(f"PU compression has nu = {nu:.12f} > 1")
    return T


def verify_pu_reducing(P, U, H_basis, cfg: Tolerances = DEFAULT) -> bool:
    """Check a candidate witness subspace H for the block splitting of U.

    True iff H reduces P, is invariant for U and U*, and U maps P.H into P.H
    and (I-P).H into (I-P).H.  Such an H certifies that PU + U*(I-P) has a
    unitary reducing piece, i.e. is not completely non-unitary.
    """
    P = as_complex_matrix(P, square=True)
    U = as_complex_matrix(U, square=True)
    cols = [np.asarray(v, dtype=complex).ravel() for v in H_basis]
    if not cols:
        return False
    H = np.column_stack(cols)
    gram = H.conj().T @ H
    if np.linalg.norm(gram - np.eye(H.shape[1])) > cfg.tol_gram * max(1.0, np.linalg.norm(gram)):
        raise InputError("H_basis is not orthonormal")

    proj_H = H @ H.conj().T

    def stays_inside(X: np.ndarray) -> bool:
        if X.size == 0:
            return True
        return np.linalg.norm(X - proj_H @ X) <= cfg.tol_op * max(1.0, np.linalg.norm(X))

    if not stays_inside(P @ H):
        return False
    if not (stays_inside(U @ H) and stays_inside(U.conj().T @ H)):
        return False
    for piece in (P @ H, (np.eye(P.shape[0]) - P) @ H):
        Q = _col_basis(piece, cfg)
        if Q.shape[1] == 0:
            continue
        img = U @ Q
        if np.linalg.norm(img - Q @ (Q.conj().T @ img)) > cfg.tol_op * max(1.0, np.linalg.norm(img)):
            return False
    return True


def _col_basis(X: np.ndarray, cfg: Tolerances) -> np.ndarray:
    """Orthonormal basis of the column span of X (unit-scale inputs).

    The cutoff keeps an absolute floor so an all-roundoff column (e.g. P.H
    when H sits inside ker P) counts as empty rather than as a noise basis.
    """
    if X.size == 0:
        return np.zeros((X.shape[0], 0), dtype=complex)
    U_, sv, _ = np.linalg.svd(X)
    r = int(np.sum(sv > cfg.rank_tol * max(sv[0], 1.0)))
    return U_[:, :r]


def pu_witness_search(P, U, cfg: Tolerances = DEFAULT):
    """Search sums of unimodular joint eigenspaces of PU + U*(I-P) for a witness.

    Enumerates subspaces spanned by subsets of the computed joint eigenvectors
    only; this suffices at desk scale but is not a complete reducing-subspace
    search.  Returns an orthonormal witness basis, or None.
    """
    from itertools import combinations

    T = pu_compress(P, U, cfg)
    scale = max(np.linalg.norm(T), 1.0)
    basis: list[np.ndarray] = []
    for ev in _unimodular_reps(spectrum(T, cfg), scale, cfg):
        basis.extend(_joint_eigenspace(T, ev, cfg))
    for r in range(1, len(basis) + 1):
        for comb in combinations(range(len(basis)), r):
            cand = [basis[i] for i in comb]
            Q = _col_basis(np.column_stack(cand), cfg)
            cand_on = [Q[:, j] for j in range(Q.shape[1])]
            if cand_on and verify_pu_reducing(P, U, cand_on, cfg):
                return cand_on
    return None
