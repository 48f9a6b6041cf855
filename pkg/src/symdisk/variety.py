"""Determinantal varieties det(F* + p F - s I) = 0 of numerical contractions.

The variety of a d x d numerical contraction F is an algebraic curve that
always meets the closed symmetrized bidisk; it is a distinguished variety
exactly when F is completely non-unitary.  This module provides the defining
polynomial, slicing, membership residuals, the distinguished classification,
region audits, and containment of boundary sheets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._parallel import pmap
from .config import DEFAULT, Tolerances
from .errors import InputError
from .gamma import GammaPoint, Region, classify_region, fibers
from .linalg import as_complex_matrix, spectrum
from .numrange import CnuVerdict, cnu_decompose, is_cnu, numerical_radius


@dataclass(frozen=True)
class BivarPoly:
    """Bivariate polynomial sum_{i,j} c[i][j] s^i p^j with trimmed coefficients."""
    coeffs: np.ndarray

    @staticmethod
    def from_coeffs(coeffs) -> "BivarPoly":
        C = np.atleast_2d(np.asarray(coeffs, dtype=complex))
        C = _trim(C)
        return BivarPoly(C)

    @property
    def deg_s(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def deg_p(self) -> int:
        return self.coeffs.shape[1] - 1

    def __call__(self, s: complex, p: complex) -> complex:
        # Horner in s of Horner-in-p rows
        acc = 0.0 + 0.0j
        for row in self.coeffs[::-1]:
            racc = 0.0 + 0.0j
            for c in row[::-1]:
                racc = racc * p + c
            acc = acc * s + racc
        return complex(acc)

    def normalized(self) -> np.ndarray:
        """Unit-Frobenius coefficients with the largest entry made positive real."""
        C = self.coeffs.copy()
        nrm = np.linalg.norm(C)
        if nrm == 0:
            return C
        C = C / nrm
        k = np.argmax(np.abs(C))
        pivot = C.flat[k]
        C = C * (np.conj(pivot) / abs(pivot))
        return C


def _trim(C: np.ndarray) -> np.ndarray:
    tol = 1e-13 * max(np.abs(C).max(), 1.0) if C.size else 0.0
    rows = np.where(np.abs(C).max(axis=1) > tol)[0]
    cols = np.where(np.abs(C).max(axis=0) > tol)[0]
    if len(rows) == 0 or len(cols) == 0:
        return np.zeros((1, 1), dtype=complex)
    return C[: rows[-1] + 1, : cols[-1] + 1]


@dataclass(frozen=True)
class PencilVariety:
    """The zero set of det(F* + p F - s I) for a numerical contraction F."""
    F: np.ndarray
    nu: float = field(init=False)

    def __post_init__(self):
        F = as_complex_matrix(self.F, square=True)
        object.__setattr__(self, "F", F)
        nu = numerical_radius(F)
        if nu > 1.0 + DEFAULT.tol_nu:
            raise InputError(f"not a numerical contraction: nu = {nu:.12f}")
        object.__setattr__(self, "nu", float(nu))

    @property
    def dim(self) -> int:
        return self.F.shape[0]


def defining_poly(V: PencilVariety) -> BivarPoly:
    """Coefficients of det(F* + p F - s I) via 2-D DFT interpolation.

    The determinant has degree d in s (leading coefficient (-1)^d) and at most
    d in p, so evaluating on a (d+1) x (d+1) tensor grid of scaled roots of
    unity (s-radius 2, p-radius 1) determines it exactly up to roundoff.
    """
    F = V.F
    d = V.dim
    n = d + 1
    Fs = F.conj().T
    omega = np.exp(2j * np.pi * np.arange(n) / n)
    s_nodes = 2.0 * omega
    p_nodes = 1.0 * omega
    vals = np.empty((n, n), dtype=complex)
    eye = np.eye(d)
    for a in range(n):
        for b in range(n):
            vals[a, b] = np.linalg.det(Fs + p_nodes[b] * F - s_nodes[a] * eye)
    hatc = np.fft.fft2(vals) / (n * n)
    powers_s = 2.0 ** np.arange(n)
    powers_p = 1.0 ** np.arange(n)
    coeffs = hatc / np.outer(powers_s, powers_p)
    return BivarPoly.from_coeffs(coeffs)


def slice_points(V: PencilVariety, p: complex, cfg: Tolerances = DEFAULT) -> list[complex]:
    """All s with (s, p) on the variety: the spectrum of F* + p F, sorted."""
    pencil = V.F.conj().T + complex(p) * V.F
    eigs = spectrum(pencil, cfg)
    return sorted((complex(ev) for ev in eigs), key=lambda z: (z.real, z.imag))


def membership_residual(V: PencilVariety, x: GammaPoint) -> float:
    """sigma_min(F* + p F - s I); zero exactly on the variety."""
    if V.dim == 0:
        return float("inf")  # det of the empty pencil is 1: the variety is empty
    s, p = complex(x.s), complex(x.p)
    M = V.F.conj().T + p * V.F - s * np.eye(V.dim)
    return float(np.linalg.svd(M, compute_uv=False)[-1])


def is_member(V: PencilVariety, x: GammaPoint, cfg: Tolerances = DEFAULT) -> bool:
    """Membership at the tol_memb scale (relative to the pencil norm)."""
    s, p = complex(x.s), complex(x.p)
    M = V.F.conj().T + p * V.F - s * np.eye(V.dim)
    scale = max(1.0, np.linalg.norm(M, 2)) if V.dim else 1.0
    return membership_residual(V, x) <= cfg.tol_memb * scale


def is_distinguished(V: PencilVariety, cfg: Tolerances = DEFAULT) -> CnuVerdict:
    """Distinguished iff F is c.n.u.; witnesses are unimodular eigenvalues."""
    return is_cnu(V.F, cfg)


@dataclass(frozen=True)
class RegionAuditReport:
    """Classification census of sampled variety points."""
    counts: dict
    offenders: tuple
    samples: tuple
    strict_pass: bool   # no R1 and no R2 hits (the c.n.u. criterion)
    r2_free: bool       # no R2 hits (holds for every numerical contraction)


def default_p_grid(radii=(0.15, 0.35, 0.55, 0.75, 0.92, 1.08, 1.35),
                   n_angles: int = 16) -> list[complex]:
    """Slice grid avoiding the |p| = 1 band, inside and outside the disk."""
    return [r * np.exp(2j * np.pi * k / n_angles)
            for r in radii for k in range(n_angles)]


def region_audit(V: PencilVariety, p_grid=None, cfg: Tolerances = DEFAULT) -> RegionAuditReport:
    """Classify every sampled variety point and count region hits.

    A c.n.u. pencil avoids both R1 and R2 (strict PASS); a general numerical
    contraction still never meets R2.
    """
    if p_grid is None:
        p_grid = default_p_grid()
    counts = {label: 0 for label in Region}
    offenders = []
    samples = []
    slices = pmap(lambda p: slice_points(V, p, cfg), p_grid)
    for p, svals in zip(p_grid, slices):
        for s in svals:
            x = GammaPoint(s, p)
            label = classify_region(x, cfg=cfg)
            counts[label] += 1
            samples.append(x)
            if label in (Region.R1, Region.R2):
                offenders.append((x, label))
    return RegionAuditReport(
        counts={label.value: n for label, n in counts.items()},
        offenders=tuple(offenders),
        samples=tuple(samples),
        strict_pass=(counts[Region.R1] == 0 and counts[Region.R2] == 0),
        r2_free=(counts[Region.R2] == 0),
    )


def royal_containment(V: PencilVariety, beta: complex, cfg: Tolerances = DEFAULT) -> bool:
    """Does the sheet {(beta + conj(beta) p, p)} lie inside the variety?

    For |beta| = 1 the verdict is certified by the block form: the sheet is
    contained iff ker(F - conj(beta) I) \\cap ker(F* - beta I) is non-zero.
    For |beta| != 1 only the sampled pencil check is reported (the block form
    is not claimed in that regime).
    """
    from .numrange import _joint_eigenspace  # shared kernel helper

    beta = complex(beta)
    d = V.dim
    # sampled check: the degree-<=d polynomial p -> det((F*-beta) + p(F-conj(beta)))
    # vanishes identically iff it vanishes at d+1 points
    p_samples = 0.6 * np.exp(2j * np.pi * np.arange(d + 1) / (d + 1))
    sampled = all(
        is_member(V, GammaPoint(beta + np.conj(beta) * p, p), cfg) for p in p_samples)
    if abs(abs(beta) - 1.0) > cfg.tol_mod:
        return sampled
    joint = len(_joint_eigenspace(V.F, np.conj(beta), cfg)) > 0
    if joint != sampled:
        raise InputError(
            f"inconsistent royal-containment verdicts for beta={beta}: "
            f"block form {joint}, sampled pencil {sampled}")
    return joint


def distinguished_property_check(V: PencilVariety, samples, g_closure_only: bool = False,
                                 cfg: Tolerances = DEFAULT) -> bool:
    """Sampled boundary constraint: Gamma-boundary hits must be bG hits.

    Among samples whose larger fiber modulus sits in the tol_mod band around 1
    (with the other not outside the closed disk), both moduli must be in the
    band.  With ``g_closure_only`` the check is restricted to the closure of
    the intersection with the open domain, which equals the c.n.u. part's
    variety; samples off that part are skipped.
    """
    sub = None
    if g_closure_only:
        dec = cnu_decompose(V.F, cfg)
        if dec.cnu_block.shape[0] == 0:
            return True
        sub = PencilVariety(dec.cnu_block)
    for x in samples:
        if sub is not None and not is_member(sub, x, cfg):
            continue
        z1, z2 = fibers(x)
        m_lo, m_hi = sorted((abs(z1), abs(z2)))
        if abs(m_hi - 1.0) <= cfg.tol_mod and m_lo <= 1.0 + cfg.tol_mod:
            if abs(m_lo - 1.0) > cfg.tol_mod:
                return False
    return True
