"""Geometry of the symmetrized bidisk.

Points are written in the sum/product coordinates (s, p) = (z1+z2, z1*z2).
The open domain G is the image of the open bidisk; its closure is Gamma and
its distinguished boundary bG is the image of the torus.  Region labels
partition C^2 by the moduli of the two fiber roots of  l^2 - s*l + p.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import InputError
from .linalg import as_complex_matrix


@dataclass(frozen=True)
class GammaPoint:
    """A point of C^2 in symmetrized coordinates."""
    s: complex
    p: complex

    def __iter__(self):
        return iter((self.s, self.p))


class Region(enum.Enum):
    OPEN_G = "open_G"                 # both fibers in the open disk
    DIST_BOUNDARY = "dist_boundary"   # both fibers on the circle
    R1 = "R1"                         # exactly one fiber on the circle
    R2 = "R2"                         # one fiber inside, one outside
    SYM_EXTERIOR = "sym_exterior"     # both fibers outside the closed disk


def symmetrize(z1: complex, z2: complex) -> GammaPoint:
    """The symmetrization map (z1, z2) -> (z1+z2, z1*z2)."""
    return GammaPoint(complex(z1) + complex(z2), complex(z1) * complex(z2))


def fibers(x: GammaPoint) -> tuple[complex, complex]:
    """The unordered root pair of l^2 - s*l + p (preimages under symmetrize).

    Uses the cancellation-free quadratic formula: the sign of the square root
    is chosen to enlarge |s + sqrt|, the second root comes from p / root.
    """
    s, p = complex(x.s), complex(x.p)
    disc = np.sqrt(s * s - 4.0 * p + 0j)
    if abs(s + disc) < abs(s - disc):
        disc = -disc
    r1 = (s + disc) / 2.0
    # companion division is unsafe near the subnormal range (complex division
    # can produce nan there); cancellation is a non-issue at that scale anyway
    r2 = p / r1 if abs(r1) > 1e-150 else (s - disc) / 2.0
    return complex(r1), complex(r2)


def beta_of(x: GammaPoint, cfg: Tolerances = DEFAULT) -> complex:
    """The disk coordinate beta = (s - conj(s)p) / (1 - |p|^2); needs |p| != 1."""
    s, p = complex(x.s), complex(x.p)
    if abs(abs(p) - 1.0) <= cfg.tol_mod:
        raise InputError("beta is undefined when |p| = 1")
    return (s - np.conj(s) * p) / (1.0 - abs(p) ** 2)


def classify_region(x: GammaPoint, tol: float | None = None,
                    cfg: Tolerances = DEFAULT) -> Region:
    """Label a point by fiber moduli, with a tolerance band around modulus 1.

    Points whose fiber modulus lands inside the band count as boundary.
    Membership in the open domain is decided by the strict inequality
    |s - conj(s) p| < 1 - |p|^2.
    """
    if tol is None:
        tol = cfg.tol_mod
    z1, z2 = fibers(x)
    m1, m2 = abs(z1), abs(z2)
    on1 = abs(m1 - 1.0) <= tol
    on2 = abs(m2 - 1.0) <= tol
    if on1 and on2:
        return Region.DIST_BOUNDARY
    if on1 or on2:
        return Region.R1
    s, p = complex(x.s), complex(x.p)
    if abs(s - np.conj(s) * p) < 1.0 - abs(p) ** 2:
        return Region.OPEN_G
    if m1 > 1.0 and m2 > 1.0:
        return Region.SYM_EXTERIOR
    return Region.R2


def in_closed_gamma(x: GammaPoint, tol: float | None = None,
                    cfg: Tolerances = DEFAULT) -> bool:
    """True when both fibers lie in the closed disk (up to the band)."""
    if tol is None:
        tol = cfg.tol_mod
    z1, z2 = fibers(x)
    return abs(z1) <= 1.0 + tol and abs(z2) <= 1.0 + tol


def phi_scalar(alpha: complex, x: GammaPoint) -> complex:
    """The rational map (2*alpha*p - s) / (2 - alpha*s)."""
    s, p = complex(x.s), complex(x.p)
    alpha = complex(alpha)
    den = 2.0 - alpha * s
    if abs(den) <= 1e-13 * max(1.0, abs(alpha * s)):
        raise InputError("pole of phi: 2 - alpha*s vanishes")
    return (2.0 * alpha * p - s) / den


def phi_operator(tau, x: GammaPoint, cfg: Tolerances = DEFAULT) -> np.ndarray:
    """Operator version (2*tau*p - s*I)(2*I - s*tau)^{-1} for a contraction tau."""
    tau = as_complex_matrix(tau, square=True)
    s, p = complex(x.s), complex(x.p)
    if np.linalg.norm(tau, 2) > 1.0 + cfg.tol_op:
        raise InputError("tau must be a contraction")
    n = tau.shape[0]
    pencil = 2.0 * np.eye(n) - s * tau
    sv = np.linalg.svd(pencil, compute_uv=False)
    if sv[-1] <= 1e-13 * max(sv[0], 1.0):
        raise InputError("singular pencil 2*I - s*tau")
    return np.linalg.solve(pencil.T, (2.0 * p * tau - s * np.eye(n)).T).T


def szego_kernel(x: GammaPoint, y: GammaPoint) -> complex:
    """Szego-type kernel of the domain,

        k(x, y) = 1 / ((1 - p*conj(q))^2 - (s - conj(t)*p)(conj(t) - s*conj(q)))

    for x = (s, p), y = (t, q).  Hermitian: k(x, y) = conj(k(y, x)).
    """
    s, p = complex(x.s), complex(x.p)
    t, q = complex(y.s), complex(y.p)
    den = (1.0 - p * np.conj(q)) ** 2 - (s - np.conj(t) * p) * (np.conj(t) - s * np.conj(q))
    if abs(den) <= 1e-14:
        raise InputError("Szego kernel denominator vanishes")
    return 1.0 / den
