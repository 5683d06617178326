"""Shared classical resource model ("ownership entanglement").

N owners each hold one unit of property. ``solo[n]`` is owned by n alone;
``shared[n, m]`` is co-owned in equal halves by n and m, so each owner's
total is solo[n] + sum_m shared[n, m] / 2 = 1. The fraction of an owner's
property that is co-owned plays the role of Y.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadGroup, InvalidAllocation, OutOfRange
from .reduction import group_y, profile
from .state import PureState

TOTAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class OwnershipAllocation:
    solo: np.ndarray
    shared: np.ndarray

    def __post_init__(self):
        solo = np.array(self.solo, dtype=np.float64)
        shared = np.array(self.shared, dtype=np.float64)
        n = solo.size
        if n < 2 or solo.ndim != 1 or shared.shape != (n, n):
            raise InvalidAllocation("need solo of length N >= 2 and an N x N shared matrix")
        if np.any(np.diag(shared) != 0.0):
            raise InvalidAllocation("shared matrix must have a zero diagonal")
        if not np.allclose(shared, shared.T, rtol=0.0, atol=TOTAL_TOL):
            raise InvalidAllocation("shared matrix must be symmetric")
        if np.any(solo < 0.0) or np.any(shared < 0.0):
            raise InvalidAllocation("property amounts must be nonnegative")
        totals = solo + shared.sum(axis=1) / 2.0
        if np.max(np.abs(totals - 1.0)) > TOTAL_TOL:
            raise InvalidAllocation(f"every owner must hold 1 in total, got {totals.tolist()}")
        for a in (solo, shared):
            a.setflags(write=False)
        object.__setattr__(self, "solo", solo)
        object.__setattr__(self, "shared", shared)

    @property
    def n(self) -> int:
        return self.solo.size

    @classmethod
    def from_pairs(cls, n: int, pairs: dict[tuple[int, int], float]) -> "OwnershipAllocation":
        """Build from {(n, m): P_nm}; solo parts fill each owner up to 1."""
        shared = np.zeros((n, n))
        for (a, b), amount in pairs.items():
            shared[a, b] = shared[b, a] = amount
        return cls(1.0 - shared.sum(axis=1) / 2.0, shared)


def ownership_y(alloc: OwnershipAllocation) -> np.ndarray:
    return alloc.shared.sum(axis=1) / 2.0


def ownership_pair_y(alloc: OwnershipAllocation, group: Sequence[int]) -> float:
    """Co-owned fraction of a merged group: cross-group shares / (2 |group|)."""
    group = sorted(set(int(k) for k in group))
    if not group or len(group) >= alloc.n or not all(0 <= k < alloc.n for k in group):
        raise BadGroup(f"group {group} must be a proper subset of [0, {alloc.n})")
    rest = [k for k in range(alloc.n) if k not in group]
    return float(alloc.shared[np.ix_(group, rest)].sum() / (2.0 * len(group)))


def pair_sharing(alloc: OwnershipAllocation, n: int, m: int) -> float:
    """p_nm = (Y_n + Y_m) / 2 - Y_nm, which equals P_nm / 2."""
    y = ownership_y(alloc)
    return pair_sharing_from_y(y[n], y[m], ownership_pair_y(alloc, (n, m)))


def pair_sharing_from_y(yn: float, ym: float, ynm: float) -> float:
    if not all(-TOTAL_TOL <= v <= 1 + TOTAL_TOL for v in (yn, ym, ynm)):
        raise OutOfRange("Y values must lie in [0, 1]")
    return (yn + ym) / 2.0 - ynm


def quantum_pair_sharing(state: PureState, n: int, m: int) -> float:
    """The same combination evaluated on a quantum state.

    Heuristic only: it misbehaves when rho_nm is strongly mixed and carries
    no monotonicity guarantee.
    """
    y = profile(state).y
    return (y[n] + y[m]) / 2.0 - group_y(state, (n, m))


def random_allocation(n: int, seed: int) -> OwnershipAllocation:
    """Random valid allocation, deterministic per seed.

    Each owner splits its unit budget with a flat Dirichlet over (solo, one
    share per partner); the pair amount is twice the smaller of the two
    owners' offers, and any shortfall goes back to solo. Not uniform over the
    allocation polytope.
    """
    if n < 2:
        raise InvalidAllocation("need at least two owners")
    rng = np.random.default_rng(seed)
    while True:
        split = rng.dirichlet(np.ones(n), size=n)  # column 0 solo, then partners
        offer = np.zeros((n, n))
        for a in range(n):
            partners = [b for b in range(n) if b != a]
            offer[a, partners] = split[a, 1:]
        shared = 2.0 * np.minimum(offer, offer.T)
        solo = 1.0 - shared.sum(axis=1) / 2.0
        if np.all(solo >= 0.0):
            return OwnershipAllocation(solo, shared)
