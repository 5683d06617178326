"""Seeded Monte Carlo campaigns: random-state violation searches and
hit-or-miss volumes of the allowed regions in the unit Y-cube.

Random states are Haar distributed (i.i.d. complex Gaussian amplitudes,
normalized). Samples are cut into fixed-size chunks; chunk k draws from
PCG64 seeded by ``SeedSequence(seed, spawn_key=(k,))``, so the result does
not depend on how many worker threads process the chunks.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence, TextIO

import numpy as np

from . import __version__
from .errors import IncompatibleConstraintSet, UnknownRegion
from .geometry import i1_margins
from .inequalities import (
    TOL,
    classical_pair_bounds,
    classical_pair_margin,
    polygon3_bounds,
    polygon_margins,
    qubit_qutrit_curve_residual,
    qutetrit_bounds,
    qutetrit_margins,
)
from .reduction import batch_y
from .state import PureState, check_dims

CHUNK_SIZE = 1 << 16
GENERATOR = f"numpy.random.PCG64 (numpy {np.__version__}), SeedSequence(seed, spawn_key=(chunk,)), chunk={CHUNK_SIZE}"

# values quoted for the allowed regions; polygon-N has the closed form 1 - 1/(N-1)!
REFERENCE_VOLUMES = {
    "qutetrit": 0.3457,
    "classical-pair": 1.0 / 3.0,
    "qutetrit∩classical": 0.3024,
}


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def haar_batch(rng: np.random.Generator, n: int, total_dim: int) -> np.ndarray:
    z = rng.standard_normal((n, total_dim, 2))
    psi = z[..., 0] + 1j * z[..., 1]
    psi /= np.linalg.norm(psi, axis=1, keepdims=True)
    return psi


def haar_random_state(dims: Sequence[int], seed: int) -> PureState:
    dims = check_dims(dims)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    return PureState(dims, haar_batch(rng, 1, math.prod(dims))[0])


def _chunks(n_samples: int) -> list[tuple[int, int, int]]:
    return [
        (k, start, min(CHUNK_SIZE, n_samples - start))
        for k, start in enumerate(range(0, n_samples, CHUNK_SIZE))
    ]


def _run_chunks(fn: Callable, n_samples: int, threads: int) -> Iterator:
    chunks = _chunks(n_samples)
    if threads <= 1:
        return map(fn, chunks)
    pool = ThreadPoolExecutor(max_workers=threads)
    try:
        # map preserves chunk order, so aggregation is identical to the serial run
        return iter(list(pool.map(fn, chunks)))
    finally:
        pool.shutdown()


@dataclass
class CampaignReport:
    seed: int
    sample_count: int
    violation_count: int
    min_margin: float | None
    volume_estimate: float | None
    standard_error: float | None
    wall_time: float
    meta: dict = field(default_factory=dict)

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "seed": self.seed,
            "sample_count": self.sample_count,
            "violation_count": self.violation_count,
            "min_margin": self.min_margin,
            "volume_estimate": self.volume_estimate,
            "standard_error": self.standard_error,
        }
        if timing:
            d["wall_time"] = self.wall_time
        d["meta"] = self.meta
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing=timing), indent=2, ensure_ascii=False) + "\n"


def _meta(**extra) -> dict:
    return {"generator": GENERATOR, "version": __version__, **extra}


# --- violation campaigns ---


CONSTRAINT_SETS = ("polygon", "i1", "pairs", "qutetrit", "curve")


def default_constraints(dims: Sequence[int]) -> tuple[str, ...]:
    dims = tuple(dims)
    if dims == (2, 2, 4):
        return ("qutetrit",)
    if dims in ((2, 3), (3, 2)):
        return ("curve",)
    if all(m == 2 for m in dims) and len(dims) == 4:
        return ("polygon", "pairs")
    if len(set(dims)) == 1:
        return ("polygon",)
    raise IncompatibleConstraintSet(f"no default constraint set for dims {list(dims)}")


def _check_constraints(dims: tuple[int, ...], constraints: Iterable[str]) -> tuple[str, ...]:
    constraints = tuple(constraints)
    for c in constraints:
        if c not in CONSTRAINT_SETS:
            raise IncompatibleConstraintSet(f"unknown constraint set {c!r}")
        ok = {
            "polygon": len(set(dims)) == 1 and len(dims) >= 2,
            "i1": all(m == 2 for m in dims) and len(dims) >= 2,
            "pairs": dims == (2, 2, 2, 2),
            "qutetrit": dims == (2, 2, 4),
            "curve": dims in ((2, 3), (3, 2)),
        }[c]
        if not ok:
            raise IncompatibleConstraintSet(f"constraint set {c!r} does not apply to dims {list(dims)}")
    if not constraints:
        raise IncompatibleConstraintSet("empty constraint set")
    return constraints


def _pair_partitions(n: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(n) for b in range(a + 1, n)]


def feature_columns(dims: Sequence[int], constraints: Sequence[str]) -> list[str]:
    """Names of the Y-components a campaign computes per sample."""
    cols = [f"y{n + 1}" for n in range(len(dims))]
    if "pairs" in constraints:
        cols += [f"y{a + 1}{b + 1}" for a, b in _pair_partitions(len(dims)) if a == 0]
    return cols


def evaluate_batch(psi: np.ndarray, dims: tuple[int, ...], constraints: Sequence[str]):
    """Y-features and per-constraint margins for a batch of states.

    Returns (features, margins) where ``margins`` maps constraint-set name to
    an array of shape (batch, k).
    """
    n = len(dims)
    ys = [batch_y(psi, dims, [k]) for k in range(n)]
    feats = list(ys)
    margins = {}
    y = np.stack(ys, axis=1)
    if "polygon" in constraints:
        margins["polygon"] = polygon_margins(y)
    if "i1" in constraints:
        # written in Q; equals half the polygon margins
        margins["i1"] = i1_margins(1.0 - y)
    if "pairs" in constraints:
        # Y_ab = Y_cd for two-vs-two cuts; apply both relations to every (a, b | c, d) relabeling
        pair_y = {}
        for a, b in _pair_partitions(n):
            if a == 0:
                pair_y[(a, b)] = batch_y(psi, dims, [a, b])
                feats.append(pair_y[(a, b)])
        cols = []
        for a, b in _pair_partitions(n):
            key = (a, b) if a == 0 else tuple(k for k in range(n) if k not in (a, b))
            ma, mb = qutetrit_margins(ys[a], ys[b], pair_y[key])
            cols += [ma, mb]
        margins["pairs"] = np.stack(cols, axis=1)
    if "qutetrit" in constraints:
        ma, mb = qutetrit_margins(ys[0], ys[1], ys[2])
        margins["qutetrit"] = np.stack([ma, mb], axis=1)
    if "curve" in constraints:
        qubit, qutrit = (0, 1) if dims[0] == 2 else (1, 0)
        r = qubit_qutrit_curve_residual(ys[qubit], ys[qutrit])
        margins["curve"] = -np.abs(r)[:, None]
    return np.stack(feats, axis=1), margins


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def violation_campaign(
    dims: Sequence[int],
    n_samples: int,
    seed: int,
    constraints: Sequence[str] | None = None,
    threads: int = 1,
    stream: TextIO | None = None,
) -> CampaignReport:
    """Sample Haar-random states and evaluate constraint margins.

    A sample is a violation when its smallest margin is below -1e-9. With
    ``stream`` set, one CSV row per sample is written: sample_index, the
    Y-components, min_margin.
    """
    t0 = time.perf_counter()
    dims = check_dims(dims)
    constraints = _check_constraints(dims, constraints or default_constraints(dims))
    total_dim = math.prod(dims)

    def work(chunk):
        k, start, size = chunk
        psi = haar_batch(chunk_rng(seed, k), size, total_dim)
        feats, margins = evaluate_batch(psi, dims, constraints)
        per_set = {c: float(margins[c].min()) for c in constraints}
        row_min = np.min(np.concatenate([margins[c] for c in constraints], axis=1), axis=1)
        return start, feats if stream is not None else None, row_min, per_set

    violations = 0
    min_margin = math.inf
    set_min = {c: math.inf for c in constraints}
    if stream is not None:
        stream.write(",".join(["sample_index", *feature_columns(dims, constraints), "min_margin"]) + "\n")
    for start, feats, row_min, per_set in _run_chunks(work, n_samples, threads):
        violations += int(np.count_nonzero(row_min < -TOL))
        min_margin = min(min_margin, float(row_min.min()))
        for c, v in per_set.items():
            set_min[c] = min(set_min[c], v)
        if stream is not None:
            for i in range(row_min.size):
                stream.write(
                    ",".join([str(start + i), *(_fmt(v) for v in feats[i]), _fmt(row_min[i])]) + "\n"
                )
    return CampaignReport(
        seed=seed,
        sample_count=n_samples,
        violation_count=violations,
        min_margin=min_margin if n_samples else None,
        volume_estimate=None,
        standard_error=None,
        wall_time=time.perf_counter() - t0,
        meta=_meta(
            kind="violation_campaign",
            dims=list(dims),
            constraints=list(constraints),
            constraint_min_margins=set_min if n_samples else {},
            ensemble="haar",
            tolerance=TOL,
        ),
    )


# --- volumes of allowed regions ---


def _parse_region(region: str) -> tuple[str, int]:
    """Canonical region name and the dimension of its Y-cube."""
    r = region.strip().lower()
    if r.startswith("polygon-"):
        try:
            n = int(r.split("-", 1)[1])
        except ValueError:
            raise UnknownRegion(f"bad polygon region {region!r}") from None
        if n < 2:
            raise UnknownRegion("polygon-N needs N >= 2")
        return f"polygon-{n}", n
    aliases = {
        "qutetrit": "qutetrit",
        "classical-pair": "classical-pair",
        "classical": "classical-pair",
        "qutetrit∩classical": "qutetrit∩classical",
        "qutetrit-classical": "qutetrit∩classical",
        "qutetrit+classical": "qutetrit∩classical",
        "intersection": "qutetrit∩classical",
    }
    if r not in aliases:
        raise UnknownRegion(f"unknown region {region!r}")
    return aliases[r], 3


def region_margin(region: str, y: np.ndarray) -> np.ndarray:
    """Smallest constraint margin of each point (rows of ``y``) for a region."""
    name, k = _parse_region(region)
    if y.shape[-1] != k:
        raise UnknownRegion(f"region {name} lives in a {k}-cube, got points of length {y.shape[-1]}")
    if name.startswith("polygon-"):
        return polygon_margins(y).min(axis=-1)
    y1, y2, y34 = y[..., 0], y[..., 1], y[..., 2]
    parts = []
    if name in ("qutetrit", "qutetrit∩classical"):
        parts += list(qutetrit_margins(y1, y2, y34))
    if name in ("classical-pair", "qutetrit∩classical"):
        parts.append(classical_pair_margin(y1, y2, y34))
    return np.min(np.stack(parts, axis=-1), axis=-1)


def reference_volume(region: str) -> float:
    name, n = _parse_region(region)
    if name.startswith("polygon-"):
        return 1.0 - 1.0 / math.factorial(n - 1)
    return REFERENCE_VOLUMES[name]


def region_volume(region: str, n_samples: int, seed: int, threads: int = 1) -> CampaignReport:
    """Hit-or-miss volume of a region of the unit Y-cube."""
    t0 = time.perf_counter()
    name, k = _parse_region(region)

    def work(chunk):
        c, _, size = chunk
        y = chunk_rng(seed, c).random((size, k))
        return int(np.count_nonzero(region_margin(name, y) >= 0.0))

    hits = sum(_run_chunks(work, n_samples, threads))
    p = hits / n_samples if n_samples else 0.0
    se = math.sqrt(p * (1.0 - p) / n_samples) if n_samples else 0.0
    return CampaignReport(
        seed=seed,
        sample_count=n_samples,
        violation_count=n_samples - hits,
        min_margin=None,
        volume_estimate=p,
        standard_error=se,
        wall_time=time.perf_counter() - t0,
        meta=_meta(kind="region_volume", region=name, reference_volume=reference_volume(name), hits=hits),
    )


# --- boundary surfaces ---

BOUNDARY_REGIONS = ("polygon-3", "qutetrit", "classical-pair", "qutetrit∩classical")


def boundary_scan(region: str, resolution: int) -> dict[str, np.ndarray]:
    """Allowed range of the third coordinate on a (y1, y2) grid over [0, 1]^2.

    Rows run with y1 slowest. Grid points whose range is empty get NaN.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    name, k = _parse_region(region)
    if name not in BOUNDARY_REGIONS:
        raise UnknownRegion(f"boundary scan supports {', '.join(BOUNDARY_REGIONS)}; got {region!r}")
    t = np.linspace(0.0, 1.0, resolution)
    y1, y2 = (a.ravel() for a in np.meshgrid(t, t, indexing="ij"))
    if name == "polygon-3":
        lo, hi = polygon3_bounds(y1, y2)
    elif name == "qutetrit":
        lo, hi = qutetrit_bounds(y1, y2)
    elif name == "classical-pair":
        lo, hi = classical_pair_bounds(y1, y2)
    else:
        qlo, qhi = qutetrit_bounds(y1, y2)
        clo, chi = classical_pair_bounds(y1, y2)
        lo, hi = np.maximum(qlo, clo), np.minimum(qhi, chi)
    empty = lo > hi + TOL
    lo = np.where(empty, np.nan, lo)
    hi = np.where(empty, np.nan, hi)
    return {"y1": y1, "y2": y2, "y3_lower": lo, "y3_upper": hi}
