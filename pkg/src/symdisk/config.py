"""Named numerical tolerances and algorithm knobs.

Every module takes a ``Tolerances`` instance (default ``DEFAULT``) so a whole
run can be tightened or loosened coherently, e.g. from the CLI via
``--tol-<name>=<value>``.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

from .errors import InputError


@dataclass(frozen=True)
class Tolerances:
    # dense linear algebra
    tol_eig: float = 1e-10        # eigenvalue residual, relative to ||A||
    tol_herm: float = 1e-12       # Hermitian symmetry defect, relative
    tol_psd: float = 1e-10        # PSD defect, relative to norm
    tol_recon: float = 1e-10      # reconstruction residual (eigh, sqrt)
    tol_proj: float = 1e-8        # idempotency defect of spectral projections
    tol_gram: float = 1e-10       # Gram-matrix equality for isometric maps
    rank_tol: float = 1e-10       # singular values below rank_tol*sigma_max are zero
    tol_cluster: float = 1e-8     # eigenvalue clustering, relative to ||A||
    # geometry of the symmetrized bidisk
    tol_mod: float = 1e-9         # band around modulus 1 for boundary classification
    # numerical range
    tol_nu: float = 1e-10         # absolute accuracy of the numerical radius
    tol_op: float = 1e-8          # operator-norm slack for contractivity checks
    # varieties and membership
    tol_memb: float = 1e-8        # membership residual on a pencil variety
    tol_node: float = 1e-9        # two nodes closer than this coincide
    # kernel extension pipeline
    tol_ext: float = 1e-8         # extension residuals (kernel restriction, pencil)
    tol_den: float = 1e-10        # vanishing-denominator guard in the uniqueness formula
    tol_active: float = 1e-9      # a Pick matrix this singular is "active"
    tol_dil: float = 1e-8         # dilation isometry / intertwining residual
    tol_fund_rel: float = 1e-8    # fundamental-equation residual, relative to ||Ms||
    # realization formula
    tol_id: float = 1e-9          # agreement of the two inner-defect computations
    tol_inner: float = 1e-9       # max boundary unitarity defect for PASS
    tol_interp: float = 1e-8      # node reproduction of interpolants
    # discretization knobs
    n_quad: int = 64              # trapezoid nodes for contour integrals
    dist_guard: float = 0.1       # min eigenvalue-to-contour distance, relative to radius
    n_theta: int = 257            # coarse grid for the numerical radius
    trunc: int = 200              # truncation order of the dilation isometry
    n_steps: int = 20             # samples along a branch-trace path


DEFAULT = Tolerances()

_FIELD_NAMES = {f.name for f in dataclasses.fields(Tolerances)}


def with_overrides(cfg: Tolerances, **overrides) -> Tolerances:
    """Return a copy of ``cfg`` with the given fields replaced.

    Unknown field names are rejected so that CLI typos fail loudly.
    """
    unknown = set(overrides) - _FIELD_NAMES
    if unknown:
        raise InputError(f"unknown tolerance name(s): {sorted(unknown)}")
    return dataclasses.replace(cfg, **overrides)


def thread_count() -> int:
    """Parallelism cap from SYMDISK_THREADS (default 1, i.e. sequential)."""
    raw = os.environ.get("SYMDISK_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"SYMDISK_THREADS must be an integer, got {raw!r}")
    return max(1, n)
