"""Dense pure states of N parties with arbitrary local dimensions.

Amplitudes are stored row-major over the party axes, party 0 slowest and the
last party fastest, so ``coeffs.reshape(dims)`` is the coefficient tensor.
Party indices in the Python API are 0-based.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from os import PathLike
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadDimension,
    BadPartyIndex,
    DimensionMismatch,
    IncompatibleDims,
    NotNormalized,
    NotUnitary,
    StateFormatError,
    UnknownName,
)

NORM_TOL = 1e-9
UNITARY_TOL = 1e-12


def check_dims(dims: Iterable[int]) -> tuple[int, ...]:
    dims = tuple(int(m) for m in dims)
    if not dims:
        raise BadDimension("at least one party is required")
    if any(m < 2 for m in dims):
        raise BadDimension(f"every party needs dimension >= 2, got {list(dims)}")
    return dims


@dataclass(frozen=True, eq=False)
class PureState:
    """Immutable pure state.

    Construction coerces ``coeffs`` to a read-only complex128 vector but does
    not check the norm; use :func:`validate` or :func:`from_coefficients`.
    """

    dims: tuple[int, ...]
    coeffs: np.ndarray

    def __post_init__(self):
        dims = check_dims(self.dims)
        coeffs = np.array(self.coeffs, dtype=np.complex128).reshape(-1)
        coeffs.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    @property
    def tensor(self) -> np.ndarray:
        return self.coeffs.reshape(self.dims)

    def norm_squared(self) -> float:
        return float(np.vdot(self.coeffs, self.coeffs).real)

    def __repr__(self):
        return f"PureState(dims={list(self.dims)})"


def validate(state: PureState) -> PureState:
    """Check amplitude count and normalization; returns the state unchanged."""
    if state.coeffs.size != state.total_dim:
        raise DimensionMismatch(
            f"dims {list(state.dims)} need {state.total_dim} coefficients, "
            f"got {state.coeffs.size}"
        )
    if not np.all(np.isfinite(state.coeffs)):
        raise StateFormatError("coefficients must be finite")
    deviation = abs(state.norm_squared() - 1.0)
    if deviation > NORM_TOL:
        raise NotNormalized(deviation)
    return state


def renormalize(state: PureState) -> PureState:
    norm = math.sqrt(state.norm_squared())
    if norm == 0.0:
        raise NotNormalized(1.0)
    return PureState(state.dims, state.coeffs / norm)


def from_coefficients(dims: Sequence[int], coeffs, renorm: bool = False) -> PureState:
    state = PureState(tuple(dims), coeffs)
    if state.coeffs.size != state.total_dim:
        validate(state)
    if renorm:
        state = renormalize(state)
    return validate(state)


def flat_index(multi_index: Sequence[int], dims: Sequence[int]) -> int:
    return int(np.ravel_multi_index(tuple(multi_index), tuple(dims)))


def multi_index(k: int, dims: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(i) for i in np.unravel_index(k, tuple(dims)))


def _check_party(state: PureState, party: int) -> int:
    if not 0 <= party < state.n_parties:
        raise BadPartyIndex(f"party {party} not in [0, {state.n_parties})")
    return party


def check_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise NotUnitary(f"expected a square matrix, got shape {u.shape}")
    deviation = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if deviation > tol:
        raise NotUnitary(f"max |U^dag U - I| = {deviation:.3e}")
    return u


def apply_local_unitary(state: PureState, party: int, u) -> PureState:
    """Act with ``u`` on one party: c'[.., j, ..] = sum_k u[j, k] c[.., k, ..]."""
    _check_party(state, party)
    u = check_unitary(u)
    if u.shape[0] != state.dims[party]:
        raise DimensionMismatch(
            f"party {party} has dimension {state.dims[party]}, unitary is {u.shape[0]}x{u.shape[0]}"
        )
    t = np.tensordot(u, state.tensor, axes=([1], [party]))
    t = np.moveaxis(t, 0, party)
    return PureState(state.dims, t.reshape(-1))


def merge_parties(state: PureState, party: int) -> PureState:
    """Merge ``party`` and ``party + 1`` into one party of the product dimension.

    Row-major ordering makes this a relabeling: coefficients are untouched.
    """
    if not 0 <= party < state.n_parties - 1:
        raise BadPartyIndex(f"cannot merge parties {party} and {party + 1} of {state.n_parties}")
    d = state.dims
    dims = d[:party] + (d[party] * d[party + 1],) + d[party + 2:]
    return PureState(dims, state.coeffs)


def permute_parties(state: PureState, order: Sequence[int]) -> PureState:
    """Reorder parties; new party k is old party ``order[k]``."""
    order = tuple(int(k) for k in order)
    if sorted(order) != list(range(state.n_parties)):
        raise BadPartyIndex(f"{list(order)} is not a permutation of {state.n_parties} parties")
    t = np.transpose(state.tensor, order)
    return PureState(tuple(state.dims[k] for k in order), np.ascontiguousarray(t).reshape(-1))


def basis_state(dims: Sequence[int], index: Sequence[int]) -> PureState:
    dims = check_dims(dims)
    c = np.zeros(math.prod(dims), dtype=np.complex128)
    c[flat_index(index, dims)] = 1.0
    return PureState(dims, c)


def product_state(factors: Sequence) -> PureState:
    """Tensor product of single-party state vectors (each normalized here)."""
    c = np.ones(1, dtype=np.complex128)
    for f in factors:
        f = np.asarray(f, dtype=np.complex128)
        c = np.kron(c, f / np.linalg.norm(f))
    return PureState(tuple(len(f) for f in factors), c)


NAMED_STATES = ("ghz", "w", "product", "bell")


def named_state(name: str, dims: Sequence[int]) -> PureState:
    """Canonical fixtures: ghz, w, product (|0...0>) and bell (two parties).

    ghz and bell use levels 0 and 1 of every party, so any dims >= 2 work;
    a Bell pair in ``[2, 3]`` is the embedded Bell state.
    """
    dims = check_dims(dims)
    n = len(dims)
    name = name.lower()
    if name not in NAMED_STATES:
        raise UnknownName(f"unknown state {name!r}; choose from {', '.join(NAMED_STATES)}")
    c = np.zeros(math.prod(dims), dtype=np.complex128)
    if name == "product":
        c[0] = 1.0
    elif name in ("ghz", "bell"):
        if name == "bell" and n != 2:
            raise IncompatibleDims("bell needs exactly two parties")
        if name == "ghz" and n < 2:
            raise IncompatibleDims("ghz needs at least two parties")
        c[0] = c[flat_index([1] * n, dims)] = 1 / math.sqrt(2)
    else:
        if n < 2:
            raise IncompatibleDims("w needs at least two parties")
        for k in range(n):
            idx = [0] * n
            idx[k] = 1
            c[flat_index(idx, dims)] = 1 / math.sqrt(n)
    return PureState(dims, c)


def _reject_constant(token):
    raise StateFormatError(f"non-finite number {token} in state file")


def state_from_dict(data: dict, renorm: bool = False) -> PureState:
    try:
        dims = data["dims"]
        raw = data["coefficients"]
    except (KeyError, TypeError) as exc:
        raise StateFormatError("state JSON needs 'dims' and 'coefficients'") from exc
    try:
        arr = np.array(raw, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise StateFormatError("coefficients must be [re, im] pairs") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise StateFormatError("coefficients must be a list of [re, im] pairs")
    if not np.all(np.isfinite(arr)):
        raise StateFormatError("coefficients must be finite")
    return from_coefficients(dims, arr[:, 0] + 1j * arr[:, 1], renorm=renorm)


def loads_state(text: str, renorm: bool = False) -> PureState:
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"invalid JSON: {exc}") from exc
    return state_from_dict(data, renorm=renorm)


def load_state(path: str | PathLike, renorm: bool = False) -> PureState:
    with open(path, encoding="utf-8") as fh:
        return loads_state(fh.read(), renorm=renorm)


def state_to_dict(state: PureState) -> dict:
    return {
        "dims": list(state.dims),
        "coefficients": [[float(z.real), float(z.imag)] for z in state.coeffs],
    }


def dump_state(state: PureState, path: str | PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(state), fh)
