"""Reduced density matrices and the purity-based measures built on them.

For an M-level party with reduced density matrix rho:

    purity          tr(rho^2)                         in [1/M, 1]
    Schmidt weight  1 / tr(rho^2)                     in [1, M]
    Q               sqrt((M tr(rho^2) - 1) / (M - 1))  in [0, 1]
    Y               1 - Q

Density matrices use the convention rho[j, k] = sum c_j c_k^* over traced
indices. The batch helpers at the bottom work on stacks of state vectors and
are what the Monte Carlo campaigns use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BadPartyIndex, EmptyKeepSet, NegativeRadicand, OutOfRange
from .linalg import jacobi_eigh
from .state import PureState

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
RADICAND_TOL = 1e-12
ENTROPY_CUTOFF = 1e-14


def _keep_axes(n_parties: int, keep: Iterable[int]) -> tuple[int, ...]:
    keep = tuple(sorted(set(int(k) for k in keep)))
    if not keep:
        raise EmptyKeepSet("keep set must name at least one party")
    bad = [k for k in keep if not 0 <= k < n_parties]
    if bad:
        raise BadPartyIndex(f"parties {bad} not in [0, {n_parties})")
    return keep


def partial_trace(state: PureState, keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix of the parties in ``keep`` (ordered ascending).

    The kept axes are moved to the front and the state reshaped into a
    (d_keep, d_rest) matrix X, so that rho = X X^dagger.
    """
    keep = _keep_axes(state.n_parties, keep)
    rest = [k for k in range(state.n_parties) if k not in keep]
    t = np.transpose(state.tensor, list(keep) + rest)
    d_keep = math.prod(state.dims[k] for k in keep)
    x = t.reshape(d_keep, -1)
    return x @ x.conj().T


def check_density_matrix(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise OutOfRange(f"density matrix must be square, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
        raise OutOfRange("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > TRACE_TOL:
        raise OutOfRange(f"density matrix trace {np.trace(rho).real!r} != 1")
    return rho


def purity(rho) -> float:
    rho = np.asarray(rho, dtype=np.complex128)
    return float(np.vdot(rho, rho).real)


def q_from_purity(p, m: int):
    """Q for purity ``p`` of an m-level party; vectorized over ``p``.

    Radicands within 1e-12 outside [0, 1] are clamped; anything further out
    means the input was not a density matrix.
    """
    if m < 2:
        raise OutOfRange(f"Q needs M >= 2, got {m}")
    return q_from_radicand((m * np.asarray(p, dtype=np.float64) - 1.0) / (m - 1))


def q_from_radicand(r):
    r = np.asarray(r, dtype=np.float64)
    if np.any(r < -RADICAND_TOL):
        raise NegativeRadicand(f"radicand {np.min(r):.3e} < 0")
    if np.any(r > 1.0 + RADICAND_TOL):
        raise NegativeRadicand(f"radicand {np.max(r):.3e} > 1")
    q = np.sqrt(np.clip(r, 0.0, 1.0))
    return float(q) if q.ndim == 0 else q


def _radicand(rho: np.ndarray) -> np.ndarray:
    """(M tr rho^2 - 1) / (M - 1), written as M |rho - I/M|_F^2 / (M - 1).

    The two agree for unit trace, but the second form has no cancellation
    near Q = 0, where the square root would otherwise amplify roundoff in
    the purity to ~1e-8 in Q. Works on stacks (..., M, M).
    """
    m = rho.shape[-1]
    tr = np.trace(rho, axis1=-2, axis2=-1).real
    dev = rho / tr[..., None, None] - np.eye(m) / m
    return m * np.einsum("...ij,...ij->...", dev, dev.conj()).real / (m - 1)


def q_measure(rho) -> float:
    rho = check_density_matrix(rho)
    if rho.shape[0] < 2:
        raise OutOfRange(f"Q needs M >= 2, got {rho.shape[0]}")
    return q_from_radicand(_radicand(rho))


def schmidt_weight(rho) -> float:
    return 1.0 / purity(rho)


def entropy_from_y(y: float) -> float:
    """Von Neumann entropy (bits) of a qubit party as a function of its Y.

    S = 1 - [(2 - y) log2(2 - y) + y log2(y)] / 2, with y log2 y -> 0 at y = 0.
    """
    if not -RADICAND_TOL <= y <= 1.0 + RADICAND_TOL:
        raise OutOfRange(f"y = {y} outside [0, 1]")
    y = min(max(float(y), 0.0), 1.0)
    ylog = y * math.log2(y) if y > 0.0 else 0.0
    return 1.0 - ((2.0 - y) * math.log2(2.0 - y) + ylog) / 2.0


def von_neumann_entropy(eigenvalues) -> float:
    lam = np.asarray(eigenvalues, dtype=np.float64)
    lam = lam[lam > ENTROPY_CUTOFF]
    return float(-np.sum(lam * np.log2(lam))) + 0.0  # no -0.0


@dataclass(frozen=True)
class EntanglementProfile:
    """Per-party measures of one pure state.

    ``entropy_closed_form`` holds the qubit formula evaluated at Y for
    two-level parties and ``None`` elsewhere.
    """

    dims: tuple[int, ...]
    q: tuple[float, ...]
    y: tuple[float, ...]
    schmidt_weight: tuple[float, ...]
    entropy: tuple[float, ...]
    entropy_closed_form: tuple[float | None, ...]

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "q": list(self.q),
            "y": list(self.y),
            "schmidt_weight": list(self.schmidt_weight),
            "entropy": list(self.entropy),
            "entropy_closed_form": list(self.entropy_closed_form),
        }


def profile(state: PureState) -> EntanglementProfile:
    qs, ys, ks, ss, sc = [], [], [], [], []
    for n, m in enumerate(state.dims):
        rho = partial_trace(state, [n])
        q = q_measure(rho)
        y = 1.0 - q
        qs.append(q)
        ys.append(y)
        ks.append(schmidt_weight(rho))
        ss.append(von_neumann_entropy(jacobi_eigh(rho).eigenvalues))
        sc.append(entropy_from_y(y) if m == 2 else None)
    return EntanglementProfile(state.dims, tuple(qs), tuple(ys), tuple(ks), tuple(ss), tuple(sc))


def group_y(state: PureState, group: Sequence[int]) -> float:
    """Y of a merged group of parties against the rest."""
    rho = partial_trace(state, group)
    return 1.0 - q_measure(rho)


# --- batched versions: psi has shape (batch, D) ---


def batch_purity(psi: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    dims = tuple(dims)
    keep = _keep_axes(len(dims), keep)
    rest = [k for k in range(len(dims)) if k not in keep]
    t = psi.reshape((psi.shape[0],) + dims)
    t = np.transpose(t, [0] + [k + 1 for k in keep] + [k + 1 for k in rest])
    d_keep = math.prod(dims[k] for k in keep)
    d_rest = psi.shape[1] // d_keep
    x = t.reshape(psi.shape[0], d_keep, d_rest)
    # Gram on the smaller side; the two reduced matrices share their purity
    if d_keep <= d_rest:
        rho = np.matmul(x, np.conj(np.swapaxes(x, 1, 2)))
    else:
        rho = np.matmul(np.conj(np.swapaxes(x, 1, 2)), x)
    return np.einsum("bij,bij->b", rho, rho.conj()).real


def batch_y(psi: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    dims = tuple(dims)
    keep = _keep_axes(len(dims), keep)
    m = math.prod(dims[k] for k in keep)
    if m <= psi.shape[1] // m:
        # kept side is the small one: use the cancellation-free radicand
        rest = [k for k in range(len(dims)) if k not in keep]
        t = np.transpose(psi.reshape((psi.shape[0],) + dims), [0] + [k + 1 for k in keep] + [k + 1 for k in rest])
        x = t.reshape(psi.shape[0], m, -1)
        rho = np.matmul(x, np.conj(np.swapaxes(x, 1, 2)))
        return 1.0 - q_from_radicand(_radicand(rho))
    # rank of rho is below m here, so Q is bounded away from 0
    return 1.0 - q_from_purity(batch_purity(psi, dims, keep), m)
