"""Cyclic Jacobi eigensolver for small complex Hermitian matrices."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import NoConvergence, NotHermitian

OFF_TOL = 1e-13
MAX_SWEEPS = 100
HERMITIAN_TOL = 1e-10


class EigenDecomposition(NamedTuple):
    """Eigenvalues in descending order; column k of ``eigenvectors`` pairs with ``eigenvalues[k]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def _fix_phases(v: np.ndarray) -> np.ndarray:
    # largest-modulus entry of each column made real and nonnegative; argmax takes the lowest row on ties
    rows = np.argmax(np.abs(v), axis=0)
    pivots = v[rows, np.arange(v.shape[1])]
    phases = np.ones_like(pivots)
    nz = np.abs(pivots) > 0
    phases[nz] = np.abs(pivots[nz]) / pivots[nz]
    v = v * phases
    v[rows, np.arange(v.shape[1])] = np.abs(pivots)
    return v


def jacobi_eigh(a, tol: float = OFF_TOL, max_sweeps: int = MAX_SWEEPS) -> EigenDecomposition:
    """Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of a[p, q] with a diagonal unitary,
    then applies the real symmetric Jacobi rotation that zeroes the entry.
    Iterates until the off-diagonal Frobenius norm is at most ``tol`` times the
    full Frobenius norm.

    Raises
    ------
    NotHermitian
        If ``a`` deviates from its conjugate transpose by more than 1e-10
        (relative to its largest entry).
    NoConvergence
        If ``max_sweeps`` sweeps do not reach the tolerance.
    """
    a = np.array(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    scale = max(float(np.max(np.abs(a))) if a.size else 0.0, 1.0)
    if np.max(np.abs(a - a.conj().T), initial=0.0) > HERMITIAN_TOL * scale:
        raise NotHermitian("matrix is not Hermitian")
    a = (a + a.conj().T) / 2
    v = np.eye(n, dtype=np.complex128)
    total = float(np.linalg.norm(a))

    for _ in range(max_sweeps + 1):
        if _off_norm(a) <= tol * total:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = complex(a[p, q])
                beta = abs(apq)
                alpha = a[p, p].real
                gamma = a[q, q].real
                if beta < 1e-290 or (
                    abs(alpha) + 100.0 * beta == abs(alpha) and abs(gamma) + 100.0 * beta == abs(gamma)
                ):
                    # negligible at working precision
                    a[p, q] = a[q, p] = 0.0
                    continue
                tau = (gamma - alpha) / (2.0 * beta)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                ph = apq.conjugate() / beta  # exp(-i arg a[p, q])
                # columns: A <- A G with G = [[c, s], [-s ph, c ph]] on (p, q)
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - (s * ph) * cq
                a[:, q] = s * cp + (c * ph) * cq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                phc = ph.conjugate()
                a[p, :] = c * rp - (s * phc) * rq
                a[q, :] = s * rp + (c * phc) * rq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - (s * ph) * vq
                v[:, q] = s * vp + (c * ph) * vq
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    else:
        raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")

    w = np.diag(a).real.copy()
    order = np.argsort(-w, kind="stable")
    return EigenDecomposition(w[order], _fix_phases(v[:, order]))
