"""Extension of an admissible kernel to a distinguished variety.

Pipeline: from a kernel Gram on nodes, take the fundamental operator of the
multiplication pair, keep its completely non-unitary block F, and carry the
vectors u_j = D k_j.  The nodes then satisfy (F + conj(p_j) F* - conj(s_j)) u_j = 0,
so they sit on the pencil variety of F, and

    K(x, y) = <u(y), u(x)> / (1 - p conj(q))

extends the original kernel to the variety's intersection with the domain.
Eigenvalue branches through a node are traced with contour-integral spectral
projections of the pencil F + z F*, and the closed-form uniqueness value

    w = sum_j K(x, node_j) gamma_j / sum_j conj(w_j) K(x, node_j) gamma_j

is evaluated along the variety (gamma a Pick-matrix null vector).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import IllPlacedContour, InputError, NumericalError
from .gamma import GammaPoint
from .linalg import spectrum, spectral_projection
from .numrange import cnu_decompose, is_cnu
from .pick import KernelMatrix, _fundamental_model, admissibility_audit
from .variety import PencilVariety, membership_residual

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ExtensionModel:
    """A c.n.u. pencil together with kernel vectors at the nodes."""
    F: np.ndarray
    nodes: tuple
    u_nodes: tuple

    @property
    def variety(self) -> PencilVariety:
        return PencilVariety(self.F)


def build_extension(K: KernelMatrix, cfg: Tolerances = DEFAULT) -> ExtensionModel:
    """Construct the extension data (F, u_j) from an audited kernel.

    The kernel must pass the admissibility audit.  The u_j may not leak into
    the unitary block of the fundamental operator (nodes come from the open
    domain), and each must be annihilated by the node's pencil.
    """
    report = admissibility_audit(K, cfg=cfg)
    if not report.passed:
        raise InputError(
            f"kernel failed the admissibility audit: {', '.join(report.failures)}")
    model = _fundamental_model(K, cfg)
    dec = cnu_decompose(model.F, cfg)
    m_uni = model.F.shape[0] - dec.cnu_block.shape[0]
    F = dec.cnu_block
    if F.shape[0] == 0:
        raise InputError("fundamental operator is entirely unitary; "
                         "no c.n.u. block to extend along")
    nodes = K.nodes
    us = []
    proj = model.range_basis @ model.range_basis.conj().T
    for j, x in enumerate(nodes):
        # D k_j lies in Ran(D) up to noise scaled by discarded sqrt-eigenvalues;
        # project it back onto the numerical range before changing basis
        u_full = proj @ (model.ops.D @ model.ops.coord_vectors[j])
        norm_u = np.linalg.norm(u_full)
        if norm_u <= cfg.tol_ext:
            raise NumericalError(f"kernel vector at node {j} collapsed")
        tilted = dec.transform.conj().T @ u_full
        leak = np.linalg.norm(tilted[:m_uni])
        if leak > cfg.tol_ext * norm_u:
            raise NumericalError(
                f"node {j} leaks into the unitary block: {leak:.3e}")
        u = tilted[m_uni:]
        pencil = F + np.conj(x.p) * F.conj().T - np.conj(x.s) * np.eye(F.shape[0])
        resid = np.linalg.norm(pencil @ u)
        if resid > cfg.tol_ext * max(1.0, norm_u):
            raise NumericalError(
                f"node {j} violates the pencil equation: residual {resid:.3e}")
        us.append(u)
    verdict = is_cnu(F, cfg)
    if not verdict:
        raise NumericalError("extension block is not completely non-unitary")
    return ExtensionModel(F, tuple(nodes), tuple(us))


def kernel_vector_at(model: ExtensionModel, x: GammaPoint,
                     cfg: Tolerances = DEFAULT) -> np.ndarray:
    """u(x) in ker(F + conj(p) F* - conj(s) I); stored u_j at the nodes.

    Off the nodes the smallest right singular vector is returned (unit norm,
    deterministic phase).  When the null space has dimension > 1 this is one
    choice among many; the uniqueness-value ratio does not depend on it.
    """
    for j, nd in enumerate(model.nodes):
        if abs(complex(x.s) - nd.s) + abs(complex(x.p) - nd.p) <= cfg.tol_node:
            return model.u_nodes[j]
    F = model.F
    M = F + np.conj(complex(x.p)) * F.conj().T - np.conj(complex(x.s)) * np.eye(F.shape[0])
    _, sv, Vh = np.linalg.svd(M)
    scale = max(1.0, sv[0]) if len(sv) else 1.0
    if len(sv) == 0 or sv[-1] > cfg.tol_memb * scale:
        raise InputError(f"point ({x.s}, {x.p}) is off the variety")
    v = Vh[-1].conj()
    k = int(np.argmax(np.abs(v)))
    return v * (np.conj(v[k]) / abs(v[k]))


def extended_kernel(model: ExtensionModel, x: GammaPoint, y: GammaPoint,
                    cfg: Tolerances = DEFAULT) -> complex:
    """K(x, y) = <u(y), u(x)> / (1 - p conj(q)) on the variety."""
    ux = kernel_vector_at(model, x, cfg)
    uy = kernel_vector_at(model, y, cfg)
    den = 1.0 - complex(x.p) * np.conj(complex(y.p))
    if abs(den) <= 1e-14:
        raise InputError("extended kernel denominator vanishes")
    return complex(np.vdot(ux, uy) / den)


@dataclass(frozen=True)
class SheetTrace:
    """Eigenvalue branches of F + z F* along a path into a node."""
    node_index: int
    z_path: tuple
    branch_values: tuple     # per path point: tuple of cluster means
    branch_vectors: tuple    # per path point: tuple of projected vectors
    branch_count: int        # stable cluster count at the path end
    alpha_errors: tuple      # per path point: max |alpha_l(z) - conj(s_j)|
    sum_errors: tuple        # per path point: ||sum_l v_l(z) - u_j||
    membership_residuals: tuple  # per path point: worst residual of (conj a, conj z)
    projection_defects: tuple    # per path point: ||P^2 - P|| of the enclosing P(z)
    contour_radius: float


def _cluster_indices(values: np.ndarray, tol: float) -> list[list[int]]:
    order = sorted(range(len(values)), key=lambda i: (values[i].real, values[i].imag))
    groups: list[list[int]] = []
    for i in order:
        for g in groups:
            if abs(values[i] - np.mean([values[k] for k in g])) <= tol:
                g.append(i)
                break
        else:
            groups.append([i])
    return groups


def branch_trace(model: ExtensionModel, node_index: int, radius: float | None = None,
                 n_steps: int | None = None, cfg: Tolerances = DEFAULT) -> SheetTrace:
    """Trace the branches alpha_l(z) -> conj(s_j) as z -> conj(p_j).

    The path is radial with geometric step 1/2.  At each z the eigenvalues of
    F + z F* inside the contour disk around conj(s_j) are clustered; branch
    vectors are v_l(z) = P_l(z) u_j with P_l the spectral projection of the
    cluster.  The contour auto-shrinks up to 3 times when an eigenvalue lands
    too close to it.
    """
    if n_steps is None:
        n_steps = cfg.n_steps
    if not (0 <= node_index < len(model.nodes)):
        raise InputError("node index out of range")
    nd = model.nodes[node_index]
    u_j = model.u_nodes[node_index]
    F = model.F
    d = F.shape[0]
    pbar = np.conj(complex(nd.p))
    sbar = np.conj(complex(nd.s))
    V = model.variety

    base = spectrum(F + pbar * F.conj().T, cfg)
    scale = max(np.linalg.norm(F + pbar * F.conj().T), 1.0)
    others = [ev for ev in base if abs(ev - sbar) > cfg.tol_cluster * scale]
    if others:
        eps0 = 0.5 * min(abs(ev - sbar) for ev in others)
    else:
        eps0 = 0.5 * max(1.0, scale)

    if radius is None:
        radius = min(0.01, 0.5 * (1.0 - abs(pbar)))
    direction = pbar / abs(pbar) if abs(pbar) > 1e-14 else 1.0 + 0.0j
    if abs(pbar) + radius >= 1.0 - 1e-12:
        direction = -direction
    z_path = [pbar + direction * radius * 0.5 ** k for k in range(n_steps)]

    branch_values, branch_vectors = [], []
    alpha_errors, sum_errors, memb, proj_defects = [], [], [], []
    eps_used = eps0
    for z in z_path:
        pencil = F + z * F.conj().T
        evs = spectrum(pencil, cfg)
        proj = None
        eps = eps_used
        for _ in range(4):
            try:
                proj = spectral_projection(pencil, sbar, eps, cfg.n_quad, cfg)
                break
            except IllPlacedContour:
                eps *= 0.7
        if proj is None:
            raise IllPlacedContour(
                f"no admissible contour around {sbar} at z = {z}")
        eps_used = eps
        inside = [i for i in range(d) if abs(evs[i] - sbar) < eps]
        vsum = proj.matrix @ u_j
        proj_defects.append(proj.idempotency_defect)
        sum_errors.append(float(np.linalg.norm(vsum - u_j)))
        ctol = cfg.tol_cluster * max(1.0, np.linalg.norm(pencil))
        groups = _cluster_indices(np.array([evs[i] for i in inside]), ctol)
        means, vecs = [], []
        for g in groups:
            mean = complex(np.mean([evs[inside[i]] for i in g]))
            means.append(mean)
            if len(groups) == 1:
                vecs.append(vsum)
                continue
            gap = min(abs(mean - evs[k]) for k in range(d)
                      if k not in [inside[i] for i in g])
            sub = spectral_projection(pencil, mean, 0.5 * gap, cfg.n_quad, cfg)
            vecs.append(sub.matrix @ u_j)
        branch_values.append(tuple(means))
        branch_vectors.append(tuple(vecs))
        alpha_errors.append(max(abs(m - sbar) for m in means) if means else float("nan"))
        worst = 0.0
        for m in means:
            worst = max(worst, membership_residual(V, GammaPoint(np.conj(m), np.conj(z))))
        memb.append(float(worst) if means else float("nan"))
    return SheetTrace(
        node_index=node_index,
        z_path=tuple(z_path),
        branch_values=tuple(branch_values),
        branch_vectors=tuple(branch_vectors),
        branch_count=len(branch_values[-1]),
        alpha_errors=tuple(alpha_errors),
        sum_errors=tuple(sum_errors),
        membership_residuals=tuple(memb),
        projection_defects=tuple(proj_defects),
        contour_radius=float(eps_used),
    )


def unique_value(model: ExtensionModel, K: KernelMatrix, gamma, targets,
                 x: GammaPoint, cfg: Tolerances = DEFAULT) -> complex:
    """The closed-form value forced at x by an active kernel.

    gamma must annihilate the Pick matrix of (K, targets); the value is the
    ratio of extended-kernel sums and is exactly invariant under rescaling
    gamma.  Raises when the denominator vanishes ("sheet inconclusive") and
    when the result escapes the closed unit disk.
    """
    gamma = np.asarray(gamma, dtype=complex).ravel()
    w = np.asarray(targets, dtype=complex).ravel()
    n = len(K)
    if len(gamma) != n or len(w) != n:
        raise InputError("gamma and targets must match the node count")
    pick = (1.0 - np.outer(w, w.conj())) * K.gram
    resid = np.linalg.norm(pick @ gamma)
    if resid > 1e-7 * max(1.0, np.linalg.norm(pick)) * np.linalg.norm(gamma):
        raise InputError(f"gamma is not a Pick-matrix null vector: residual {resid:.3e}")
    col = np.array([extended_kernel(model, x, nd, cfg) for nd in K.nodes])
    num = col @ gamma
    den = (w.conj() * col) @ gamma
    scale = float(np.abs(col) @ np.abs(gamma))
    if abs(den) <= cfg.tol_den * max(scale, _EPS):
        raise NumericalError("denominator vanishes - sheet inconclusive")
    val = num / den
    if abs(val) > 1.0 + cfg.tol_op:
        raise NumericalError(f"uniqueness value |w| = {abs(val):.6f} > 1; "
                             "inconsistent inputs")
    return complex(val)
