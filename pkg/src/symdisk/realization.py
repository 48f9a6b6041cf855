"""Realization formula for rational inner functions on the domain.

A model is a unitary tau together with a unitary block matrix [[A, B], [C, D]];
it evaluates as

    Psi(s, p) = A + B phi(tau, s, p) (I - D phi(tau, s, p))^{-1} C

with phi the operator-valued rational map of the domain.  Unitarity of the
blocks forces Psi inner: the defect I - Psi* Psi equals

    C* (I - phi* D*)^{-1} (I - phi* phi) (I - D phi)^{-1} C,

which vanishes on the distinguished boundary.  Interpolants are produced from
certified node data by a lurking-isometry completion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._parallel import pmap
from .config import DEFAULT, Tolerances
from .errors import InputError, NumericalError
from .gamma import GammaPoint, phi_operator, symmetrize
from .linalg import as_complex_matrix, complete_to_unitary
from .pick import PickData


@dataclass(frozen=True)
class RealizationModel:
    """State-space data (tau, A, B, C, D) of a rational inner function."""
    tau: np.ndarray
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        for name in ("tau", "A", "B", "C", "D"):
            object.__setattr__(self, name, as_complex_matrix(getattr(self, name)))
        d, h = self.A.shape[0], self.tau.shape[0]
        if self.A.shape != (d, d) or self.B.shape != (d, h) or \
                self.C.shape != (h, d) or self.D.shape != (h, h) or \
                self.tau.shape != (h, h):
            raise InputError("inconsistent block shapes in realization model")

    @property
    def block(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.C, self.D]])

    def validate(self, cfg: Tolerances = DEFAULT) -> None:
        h = self.tau.shape[0]
        if np.linalg.norm(self.tau.conj().T @ self.tau - np.eye(h)) > cfg.tol_op:
            raise InputError("tau is not unitary to tolerance")
        U = self.block
        if np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0])) > cfg.tol_op:
            raise InputError("realization block matrix is not unitary to tolerance")


def eval_model(m: RealizationModel, x: GammaPoint, cfg: Tolerances = DEFAULT,
               validate: bool = True) -> np.ndarray:
    """Psi(x) = A + B phi (I - D phi)^{-1} C."""
    if validate:
        m.validate(cfg)
    phi = phi_operator(m.tau, x, cfg)
    h = phi.shape[0]
    M = np.eye(h) - m.D @ phi
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[-1] <= 1e-12 * max(sv[0], 1.0):
        raise NumericalError("I - D phi is singular at the requested point")
    return m.A + m.B @ phi @ np.linalg.solve(M, m.C)


def inner_defect(m: RealizationModel, x: GammaPoint, cfg: Tolerances = DEFAULT):
    """Both computations of I - Psi(x)* Psi(x); they must agree to tol_id.

    The second form is the algebraic identity available for unitary models, so
    a mismatch flags an inconsistent model (e.g. a perturbed block).
    """
    psi = eval_model(m, x, cfg, validate=False)
    phi = phi_operator(m.tau, x, cfg)
    h = phi.shape[0]
    d = m.A.shape[0]
    direct = np.eye(d) - psi.conj().T @ psi
    inv = np.linalg.solve(np.eye(h) - m.D @ phi, m.C)
    middle = np.eye(h) - phi.conj().T @ phi
    identity_form = inv.conj().T @ middle @ inv
    if np.linalg.norm(direct - identity_form) > cfg.tol_id:
        raise NumericalError(
            f"inner-defect mismatch {np.linalg.norm(direct - identity_form):.3e}: "
            "model is inconsistent")
    return direct, identity_form


def boundary_unitarity_audit(m: RealizationModel, n_per_axis: int = 64,
                             cfg: Tolerances = DEFAULT) -> float:
    """Max of ||I - Psi* Psi|| over a midpoint grid on the distinguished boundary.

    The grid is offset by half a step so torus corners (potential pencil
    singularities, e.g. s = 2 for tau = [1]) are never sampled exactly.  The
    model is not validated here: a non-unitary block simply shows up as a
    large defect, which is the audit's verdict to report.
    """
    d = m.A.shape[0]

    def row_worst(a: int) -> float:
        t1 = 2 * np.pi * (a + 0.5) / n_per_axis
        worst = 0.0
        for b in range(n_per_axis):
            t2 = 2 * np.pi * (b + 0.5) / n_per_axis
            x = symmetrize(np.exp(1j * t1), np.exp(1j * t2))
            psi = eval_model(m, x, cfg, validate=False)
            worst = max(worst, float(np.linalg.norm(np.eye(d) - psi.conj().T @ psi, 2)))
        return worst

    return max(pmap(row_worst, range(n_per_axis)))


def lurking_isometry_interpolant(tau, f_values, data, targets=None,
                                 cfg: Tolerances = DEFAULT) -> RealizationModel:
    """Build an interpolating model from certified (tau, F-value) data.

    ``data`` is a PickData (scalar targets), or a node list when matrix
    ``targets`` are passed separately.  The solvability certificate

        I + F_i* phi_i* phi_j F_j = M_i* M_j + F_i* F_j

    is checked on all node pairs; the isometry [I; phi_j F_j] xi -> [M_j; F_j] xi
    is completed to the unitary block, and the resulting model is verified to
    reproduce the targets.
    """
    tau = as_complex_matrix(tau, square=True)
    if isinstance(data, PickData):
        nodes = list(data.nodes)
        mats = [np.array([[w]], dtype=complex) for w in data.targets]
    else:
        if targets is None:
            raise InputError("matrix targets required when data is a node list")
        nodes = [GammaPoint(complex(x.s), complex(x.p)) for x in data]
        mats = [as_complex_matrix(M, square=True) for M in targets]
    if len(nodes) != len(mats) or not nodes:
        raise InputError("node and target counts differ or are empty")
    d = mats[0].shape[0]
    h = tau.shape[0]
    fvals = []
    for F in f_values:
        F = np.asarray(F, dtype=complex)
        if F.ndim == 1:
            F = F.reshape(h, -1)
        if F.shape != (h, d):
            raise InputError(f"F-value shape {F.shape} does not match ({h}, {d})")
        fvals.append(F)
    if len(fvals) != len(nodes):
        raise InputError("one F-value per node is required")

    phis = [phi_operator(tau, x, cfg) for x in nodes]
    doms, rans = [], []
    for j, x in enumerate(nodes):
        X = np.vstack([np.eye(d, dtype=complex), phis[j] @ fvals[j]])
        Y = np.vstack([mats[j], fvals[j]])
        doms.extend(X[:, c] for c in range(d))
        rans.extend(Y[:, c] for c in range(d))
    Xm = np.column_stack(doms)
    Ym = np.column_stack(rans)
    gx = Xm.conj().T @ Xm
    gy = Ym.conj().T @ Ym
    if np.linalg.norm(gx - gy) > cfg.tol_gram * max(1.0, np.linalg.norm(gx)):
        raise InputError("solvability certificate violated: "
                         "the lurking-isometry Gram identity fails")
    U = complete_to_unitary(doms, rans, dim=d + h, cfg=cfg)
    model = RealizationModel(tau, U[:d, :d], U[:d, d:], U[d:, :d], U[d:, d:])
    model.validate(cfg)
    for j, x in enumerate(nodes):
        err = np.linalg.norm(eval_model(model, x, cfg, validate=False) - mats[j])
        if err > cfg.tol_interp:
            raise NumericalError(f"model misses node {j} by {err:.3e}")
    return model
