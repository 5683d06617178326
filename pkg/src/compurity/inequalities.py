"""Constraint predicates on entanglement vectors, reported as signed margins.

Every ``*_margins`` function is vectorized with numpy broadcasting and is the
kernel shared by the state campaigns and the volume scans; the ``*_check``
wrappers validate scalar inputs and return :class:`ConstraintReport` objects.
A margin >= -1e-9 counts as satisfied.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OutOfRange

TOL = 1e-9
RANGE_TOL = 1e-12


@dataclass(frozen=True)
class ConstraintReport:
    name: str
    margin: float

    @property
    def satisfied(self) -> bool:
        return self.margin >= -TOL

    def to_dict(self) -> dict:
        return {"name": self.name, "margin": self.margin, "satisfied": self.satisfied}


def _unit_interval(*values) -> None:
    for v in values:
        arr = np.asarray(v, dtype=np.float64)
        if np.any(~np.isfinite(arr)) or np.any(arr < -RANGE_TOL) or np.any(arr > 1 + RANGE_TOL):
            raise OutOfRange(f"values must lie in [0, 1], got {arr.tolist()}")


def heaviside_ramp(x):
    """H(x) = max(0, x)."""
    r = np.maximum(0.0, x)
    return float(r) if np.ndim(r) == 0 else r


def polygon_margins(y) -> np.ndarray:
    """sum_{n' != n} Y_n' - Y_n for every n (last axis)."""
    y = np.asarray(y, dtype=np.float64)
    return y.sum(axis=-1, keepdims=True) - 2.0 * y


def polygon_check(y) -> list[ConstraintReport]:
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1:
        raise OutOfRange("polygon_check takes a single Y-vector")
    _unit_interval(y)
    return [ConstraintReport(f"polygon[{n + 1}]", float(m)) for n, m in enumerate(polygon_margins(y))]


def qutetrit_margins(y1, y2, y34):
    """Margins of the two tight relations for two qubits and a four-level party.

    a: 1 - sqrt(H[3(1 - y34)^2 - 1] / 2) - |y1 - y2|
    b: 1 - sqrt([(1 - y1)^2 + (1 - y2)^2 + H(1 - y1 - y2)^2] / 3) - y34
    """
    y1, y2, y34 = (np.asarray(v, dtype=np.float64) for v in (y1, y2, y34))
    a = 1.0 - np.sqrt(np.maximum(0.0, 3.0 * (1.0 - y34) ** 2 - 1.0) / 2.0) - np.abs(y1 - y2)
    h = np.maximum(0.0, 1.0 - y1 - y2)
    b = 1.0 - np.sqrt(((1.0 - y1) ** 2 + (1.0 - y2) ** 2 + h**2) / 3.0) - y34
    return a, b


def qutetrit_check(y1: float, y2: float, y34: float) -> tuple[ConstraintReport, ConstraintReport]:
    _unit_interval(y1, y2, y34)
    a, b = qutetrit_margins(y1, y2, y34)
    return ConstraintReport("qutetrit[a]", float(a)), ConstraintReport("qutetrit[b]", float(b))


def qubit_qutrit_curve_residual(y1, y2):
    """[(1 - y1)^2 + 1] / 2 - [2 (1 - y2)^2 + 1] / 3 for a qubit (y1) and a qutrit (y2)."""
    _unit_interval(y1, y2)
    y1, y2 = np.asarray(y1, dtype=np.float64), np.asarray(y2, dtype=np.float64)
    r = ((1.0 - y1) ** 2 + 1.0) / 2.0 - (2.0 * (1.0 - y2) ** 2 + 1.0) / 3.0
    return float(r) if r.ndim == 0 else r


def classical_pair_margin(y1, y2, y34):
    """min(y34 - |y1 - y2| / 2, (y1 + y2) / 2 - y34)."""
    y1, y2, y34 = (np.asarray(v, dtype=np.float64) for v in (y1, y2, y34))
    return np.minimum(y34 - np.abs(y1 - y2) / 2.0, (y1 + y2) / 2.0 - y34)


def classical_pair_check(y1: float, y2: float, y34: float) -> ConstraintReport:
    _unit_interval(y1, y2, y34)
    return ConstraintReport("classical_pair", float(classical_pair_margin(y1, y2, y34)))


def tetra_section_margins(q3, q4, qv):
    """Cross-section bounds of the tetrahedron for Q3, Q4, Qv >= 0.

    Returns (1 + qv - q3 - q4, 1 - qv - |q3 - q4|).
    """
    q3, q4, qv = (np.asarray(v, dtype=np.float64) for v in (q3, q4, qv))
    return 1.0 + qv - q3 - q4, 1.0 - qv - np.abs(q3 - q4)


# boundary surfaces: allowed third coordinate for given (y1, y2)


def polygon3_bounds(y1, y2):
    y1, y2 = np.asarray(y1, dtype=np.float64), np.asarray(y2, dtype=np.float64)
    return np.abs(y1 - y2), np.minimum(y1 + y2, 1.0)


def qutetrit_bounds(y1, y2):
    """Range of y34 allowed by both qutetrit relations.

    The first relation inverts to y34 >= 1 - sqrt([1 + 2(1 - |y1 - y2|)^2] / 3).
    """
    y1, y2 = np.asarray(y1, dtype=np.float64), np.asarray(y2, dtype=np.float64)
    d = np.abs(y1 - y2)
    lower = np.maximum(1.0 - np.sqrt((1.0 + 2.0 * (1.0 - d) ** 2) / 3.0), 0.0)
    h = np.maximum(0.0, 1.0 - y1 - y2)
    upper = 1.0 - np.sqrt(((1.0 - y1) ** 2 + (1.0 - y2) ** 2 + h**2) / 3.0)
    return lower, upper


def classical_pair_bounds(y1, y2):
    y1, y2 = np.asarray(y1, dtype=np.float64), np.asarray(y2, dtype=np.float64)
    return np.abs(y1 - y2) / 2.0, (y1 + y2) / 2.0
