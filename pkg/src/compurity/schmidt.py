"""Schmidt representation: local frames in which every one-party reduced
density matrix is diagonal with descending eigenvalues."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotQubits
from .linalg import EigenDecomposition, jacobi_eigh
from .reduction import partial_trace
from .state import PureState, apply_local_unitary

__all__ = ["EigenDecomposition", "SchmidtForm", "eigh", "to_schmidt", "signed_mass_q", "max_off_diagonal"]


def eigh(rho) -> EigenDecomposition:
    return jacobi_eigh(rho)


@dataclass(frozen=True, eq=False)
class SchmidtForm:
    """Transformed state plus the per-party unitaries that produced it.

    ``unitaries[n]`` is V_n^dagger, where V_n holds the eigenvectors of the
    original rho_n, so the new rho_n equals diag(eigenvalues[n]).
    """

    state: PureState
    unitaries: tuple[np.ndarray, ...]
    eigenvalues: tuple[np.ndarray, ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return self.state.dims

    def masses(self) -> np.ndarray:
        """|c_i|^2 as a tensor of shape ``dims``."""
        return np.abs(self.state.tensor) ** 2


def to_schmidt(state: PureState) -> SchmidtForm:
    # unitaries on different parties commute, so each rho_n can be diagonalized
    # from the original state independently
    unitaries, eigvals = [], []
    for n in range(state.n_parties):
        dec = eigh(partial_trace(state, [n]))
        unitaries.append(dec.eigenvectors.conj().T)
        eigvals.append(dec.eigenvalues)
    out = state
    for n, u in enumerate(unitaries):
        out = apply_local_unitary(out, n, u)
    return SchmidtForm(out, tuple(unitaries), tuple(eigvals))


def max_off_diagonal(state: PureState) -> float:
    """Largest off-diagonal modulus over all single-party reduced matrices."""
    worst = 0.0
    for n in range(state.n_parties):
        rho = partial_trace(state, [n])
        off = rho - np.diag(np.diag(rho))
        worst = max(worst, float(np.max(np.abs(off))))
    return worst


def require_qubits(dims) -> None:
    if any(m != 2 for m in dims):
        raise NotQubits(f"all parties must be qubits, got dims {list(dims)}")


def signed_mass_q(schmidt: SchmidtForm, party: int) -> float:
    """sum_i (-1)^{i_party} |c_i|^2 in the Schmidt frame."""
    require_qubits(schmidt.dims)
    m = np.moveaxis(schmidt.masses(), party, 0)
    return float(m[0].sum() - m[1].sum())
