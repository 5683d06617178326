"""Center-of-mass constructions.

A single M-level party: masses lambda_m sit on the vertices of a regular
simplex inscribed in the unit sphere of R^(M-1); the distance from the origin
to their center of mass is Q. N qubits: masses |c_i|^2 of the Schmidt-frame
coefficients sit on the corners (+-1, ..., +-1) of a hypercube and their
center of mass is the vector (Q_1, ..., Q_N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadDimension, NotProbabilityVector, NotQubits, NotThreeQubits
from .schmidt import SchmidtForm, require_qubits

MASS_TOL = 1e-10
NEG_MASS_TOL = 1e-12
KAPPA_MIN_NORM = 1e-8

# regular tetrahedron inscribed in the unit sphere
TETRA_CORNERS = np.array(
    [[1, 1, 1], [-1, -1, 1], [-1, 1, -1], [1, -1, -1]], dtype=np.float64
) / math.sqrt(3.0)

# cube corners ((-1)^i1, (-1)^i2, (-1)^i3) split by parity of i1+i2+i3
EVEN_CORNERS = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=np.float64)
ODD_CORNERS = -EVEN_CORNERS


def check_probabilities(p) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise NotProbabilityVector("expected a non-empty 1-d vector")
    if np.any(p < -NEG_MASS_TOL) or abs(p.sum() - 1.0) > MASS_TOL:
        raise NotProbabilityVector(f"masses must be >= 0 and sum to 1, got sum {p.sum()!r}")
    return np.clip(p, 0.0, None)


def simplex_vertices(m: int) -> np.ndarray:
    """Vertices of a regular simplex on the unit sphere of R^(m-1), shape (m, m-1).

    Vertex 0 is the first axis; vertex k is fixed by unit norm and dot product
    -1/(m-1) with every earlier vertex, which gives a lower-triangular layout.
    """
    if m < 2:
        raise BadDimension(f"simplex needs M >= 2, got {m}")
    d = m - 1
    c = -1.0 / d
    v = np.zeros((m, d))
    v[0, 0] = 1.0
    for k in range(1, m):
        for j in range(min(k, d)):
            v[k, j] = (c - v[k, :j] @ v[j, :j]) / v[j, j]
        if k < d:
            v[k, k] = math.sqrt(max(1.0 - v[k, :k] @ v[k, :k], 0.0))
    return v


def single_party_com(eigenvalues) -> np.ndarray:
    lam = check_probabilities(eigenvalues)
    if lam.size < 2:
        raise NotProbabilityVector("need at least two masses")
    return lam @ simplex_vertices(lam.size)


def _masses(schmidt) -> np.ndarray:
    if isinstance(schmidt, SchmidtForm):
        return schmidt.masses()
    return np.abs(schmidt.tensor) ** 2


def hypercube_com(schmidt: SchmidtForm) -> np.ndarray:
    """Center of mass of |c_i|^2 placed at hypercube corners ((-1)^i_1, ...)."""
    require_qubits(schmidt.dims)
    m = _masses(schmidt)
    n = m.ndim
    q = np.empty(n)
    for k in range(n):
        mk = np.moveaxis(m, k, 0)
        q[k] = mk[0].sum() - mk[1].sum()
    return q


@dataclass(frozen=True)
class PartialCom:
    """Centers of mass of the even-parity (g, v) and odd-parity (G, V) masses of three qubits.

    A vector whose total mass vanishes is reported as zeros with its
    ``*_defined`` flag False. ``kappa`` solves G V = kappa g v and is only set
    when both |v| and |V| exceed 1e-8.
    """

    g: float
    G: float
    v: np.ndarray
    V: np.ndarray
    v_defined: bool
    V_defined: bool
    kappa: float | None
    q: np.ndarray

    def cross_norm(self) -> float:
        return float(np.linalg.norm(np.cross(self.v, self.V)))

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "G": self.G,
            "v": self.v.tolist(),
            "V": self.V.tolist(),
            "v_defined": self.v_defined,
            "V_defined": self.V_defined,
            "kappa": self.kappa,
            "q": self.q.tolist(),
            "cross_norm": self.cross_norm(),
        }


def partial_coms(schmidt: SchmidtForm) -> PartialCom:
    if tuple(schmidt.dims) != (2, 2, 2):
        raise NotThreeQubits(f"need dims [2, 2, 2], got {list(schmidt.dims)}")
    m = _masses(schmidt)
    # masses in the same order as EVEN_CORNERS / ODD_CORNERS
    even = np.array([m[0, 0, 0], m[0, 1, 1], m[1, 0, 1], m[1, 1, 0]])
    odd = np.array([m[1, 1, 1], m[1, 0, 0], m[0, 1, 0], m[0, 0, 1]])
    g, G = float(even.sum()), float(odd.sum())
    v_defined, V_defined = g > 0.0, G > 0.0
    v = even @ EVEN_CORNERS / g if v_defined else np.zeros(3)
    V = odd @ ODD_CORNERS / G if V_defined else np.zeros(3)
    kappa = None
    if np.linalg.norm(v) > KAPPA_MIN_NORM and np.linalg.norm(V) > KAPPA_MIN_NORM:
        gv = g * v
        kappa = float(G * V @ gv / (gv @ gv))
    return PartialCom(g, G, v, V, v_defined, V_defined, kappa, g * v + G * V)


def barycentric(point, corners) -> np.ndarray:
    """Barycentric coordinates of a 3-vector in a tetrahedron given by 4 corners."""
    a = np.vstack([np.asarray(corners, dtype=np.float64).T, np.ones(4)])
    return np.linalg.solve(a, np.append(np.asarray(point, dtype=np.float64), 1.0))


def in_tetrahedra_union(q, tol: float = 1e-9) -> bool:
    """Is q inside the even-corner or the odd-corner tetrahedron of the cube?"""
    return bool(
        np.all(barycentric(q, EVEN_CORNERS) >= -tol) or np.all(barycentric(q, ODD_CORNERS) >= -tol)
    )


def i1_margin(schmidt: SchmidtForm, party: int) -> float:
    """(N - 2 + Q_n - sum_{n' != n} Q_n') / 2, nonnegative for every pure qubit state."""
    q = hypercube_com(schmidt)
    return float(i1_margins(q)[party])


def i1_margins(q) -> np.ndarray:
    """Vectorized I_n for Q-vectors along the last axis."""
    q = np.asarray(q, dtype=np.float64)
    n = q.shape[-1]
    return (n - 2 + 2 * q - q.sum(axis=-1, keepdims=True)) / 2


def tetra_com(masses) -> np.ndarray:
    p = check_probabilities(masses)
    if p.size != 4:
        raise NotProbabilityVector("tetrahedron needs exactly four masses")
    return p @ TETRA_CORNERS


def pair_projection(schmidt: SchmidtForm, parties: tuple[int, int]) -> tuple[float, float, float]:
    """(Q_n, Q_m, Q_v) for two qubit parties n, m of a Schmidt-frame state.

    Q_v = sum_i (-1)^{i_n + i_m} |c_i|^2 is the third coordinate of the merged
    pair's tetrahedron picture scaled by sqrt(3).
    """
    n, k = parties
    if n == k:
        raise NotQubits("pair_projection needs two distinct parties")
    dims = schmidt.dims
    if dims[n] != 2 or dims[k] != 2:
        raise NotQubits(f"parties {n} and {k} must both be qubits")
    require_qubits(dims)
    m = _masses(schmidt)
    axes = [a for a in range(m.ndim) if a not in (n, k)]
    p = m.transpose([n, k] + axes).reshape(2, 2, -1).sum(axis=2)
    qn = p[0].sum() - p[1].sum()
    qk = p[:, 0].sum() - p[:, 1].sum()
    qv = p[0, 0] + p[1, 1] - p[0, 1] - p[1, 0]
    return float(qn), float(qk), float(qv)


def pair_masses_tetra_order(p2: np.ndarray) -> np.ndarray:
    """Reorder 2x2 masses p[j, k] to the corner order of ``TETRA_CORNERS``.

    Scaling that tetrahedron by sqrt(3) sends corner (j, k) to
    ((-1)^j, (-1)^k, (-1)^(j+k)).
    """
    p2 = np.asarray(p2)
    return np.array([p2[0, 0], p2[1, 1], p2[1, 0], p2[0, 1]])
