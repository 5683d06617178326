"""Acceptance criteria, each at its stated tolerance.

Every test prints one [PASS]/[FAIL] line through the ``record`` fixture; the
lines are repeated in the terminal summary. Run with ``-s`` to see them inline.
"""

import itertools
import math
import time

import numpy as np
import pytest

from compurity.cli import main
from compurity.geometry import (
    hypercube_com,
    i1_margin,
    in_tetrahedra_union,
    partial_coms,
    single_party_com,
)
from compurity.linalg import jacobi_eigh
from compurity.montecarlo import haar_random_state, reference_volume, region_volume, violation_campaign
from compurity.reduction import partial_trace, profile, q_measure
from compurity.schmidt import to_schmidt
from compurity.state import PureState, named_state, product_state

from oracles import naive_partial_trace, random_probabilities, random_state_vector

N_VOLUME = 10_000_000


# 1. volumes of the allowed regions
@pytest.mark.parametrize(
    "region, expected",
    [("polygon-3", 0.5), ("qutetrit", 0.3457), ("classical-pair", 1 / 3), ("qutetrit∩classical", 0.3024)],
)
def test_c1_region_volumes(region, expected, record):
    t0 = time.perf_counter()
    r = region_volume(region, N_VOLUME, seed=2)
    elapsed = time.perf_counter() - t0
    dev = abs(r.volume_estimate - expected)
    ok = dev <= 4 * r.standard_error and elapsed <= 60
    record(
        f"C1 volume {region}",
        ok,
        f"estimate {r.volume_estimate:.6f} vs {expected:.6f}, |dev| {dev:.2e} = {dev / r.standard_error:.2f} se "
        f"(limit 4), {elapsed:.1f} s",
    )
    assert ok


# 2. hypervolume of the N-party polygon region
@pytest.mark.parametrize("n", [3, 4, 5])
def test_c2_polygon_hypervolume(n, record):
    r = region_volume(f"polygon-{n}", N_VOLUME, seed=3)
    exact = 1 - 1 / math.factorial(n - 1)
    assert reference_volume(f"polygon-{n}") == exact
    dev = abs(r.volume_estimate - exact)
    ok = dev <= 4 * r.standard_error
    record(f"C2 polygon-{n} hypervolume", ok, f"{r.volume_estimate:.6f} vs {exact:.6f}, {dev / r.standard_error:.2f} se")
    assert ok


# 3. no violations over Haar-random states
_C3_TIME = {}


@pytest.mark.parametrize("dims", [(2, 2, 2), (2, 2, 2, 2), (2, 2, 4)])
def test_c3_violation_free(dims, record):
    r = violation_campaign(dims, 1_000_000, seed=1)
    _C3_TIME[dims] = r.wall_time
    total = sum(_C3_TIME.values())
    ok = r.violation_count == 0 and r.min_margin >= -1e-9 and total <= 300
    record(
        f"C3 campaign {list(dims)} {'+'.join(r.meta['constraints'])}",
        ok,
        f"{r.violation_count} violations, min margin {r.min_margin:.3e}, cumulative {total:.1f} s (limit 300)",
    )
    assert ok


# 4. qubit-qutrit curve
def test_c4_curve_exact(record):
    r = violation_campaign([2, 3], 100_000, seed=1, constraints=["curve"])
    worst = -r.min_margin
    ok = worst <= 1e-9
    record("C4 qubit-qutrit curve", ok, f"max |residual| {worst:.3e} over 1e5 states (limit 1e-9)")
    assert ok


# 5. simplex center of mass has length Q
def test_c5_center_of_mass_norm(rng, record):
    worst = 0.0
    for m in range(2, 9):
        for _ in range(1000):
            lam = random_probabilities(rng, m)
            err = abs(np.linalg.norm(single_party_com(lam)) - q_measure(np.diag(lam)))
            worst = max(worst, err)
    ok = worst <= 1e-10
    record("C5 |single_party_com| = Q", ok, f"max error {worst:.3e} over 1e3 vectors per M = 2..8 (limit 1e-10)")
    assert ok


# 6. collinearity of the partial centers of mass and tetrahedra containment
def test_c6_collinearity_and_containment(record):
    worst, outside = 0.0, 0
    for seed in range(1000):
        pc = partial_coms(to_schmidt(haar_random_state([2, 2, 2], seed)))
        scale = max(1.0, float(np.linalg.norm(pc.v) * np.linalg.norm(pc.V)))
        worst = max(worst, pc.cross_norm() / scale)
        outside += not in_tetrahedra_union(pc.q, tol=1e-9)
    ok = worst <= 1e-9 and outside == 0
    record("C6 collinearity + containment", ok, f"max |v x V|/scale {worst:.3e}, {outside} outside of 1000")
    assert ok


# 7. I1 nonnegativity and equality on product states
@pytest.mark.parametrize("n", [3, 4, 5])
def test_c7_i1(n, rng, record):
    r = violation_campaign((2,) * n, 1_000_000, seed=7, constraints=["i1"])
    i1_min = r.meta["constraint_min_margins"]["i1"]
    # cross-check the batched purity path against the Schmidt-frame signed mass sums
    for seed in range(50):
        sf = to_schmidt(haar_random_state((2,) * n, seed))
        q = hypercube_com(sf)
        np.testing.assert_allclose(q, profile(sf.state).q, atol=1e-10)
    prod_worst = 0.0
    for _ in range(100):
        factors = [random_state_vector(rng, 2) for _ in range(n)]
        sf = to_schmidt(product_state(factors))
        prod_worst = max(prod_worst, max(abs(i1_margin(sf, k)) for k in range(n)))
    sf = to_schmidt(named_state("product", (2,) * n))
    prod_worst = max(prod_worst, max(abs(i1_margin(sf, k)) for k in range(n)))
    ok = i1_min >= -1e-10 and prod_worst <= 1e-12
    record(f"C7 I1 N={n}", ok, f"min I1 {i1_min:.3e} over 1e6 states, product |I1| max {prod_worst:.1e}")
    assert ok


# 8. oracle equivalence of partial trace and eigensolver
def _profiles(limit=64):
    out = []

    def grow(prefix, prod):
        if prefix:
            out.append(tuple(prefix))
        for d in range(2, limit // prod + 1):
            grow(prefix + [d], prod * d)

    grow([], 1)
    return out


def test_c8_partial_trace_oracle(rng, record):
    worst, cases = 0.0, 0
    for dims in _profiles():
        s = PureState(dims, random_state_vector(rng, math.prod(dims)))
        for k in range(1, len(dims) + 1):
            for keep in itertools.combinations(range(len(dims)), k):
                worst = max(worst, float(np.max(np.abs(partial_trace(s, keep) - naive_partial_trace(s.coeffs, dims, keep)))))
                cases += 1
    ok = worst <= 1e-12
    record("C8 partial_trace oracle", ok, f"max entry error {worst:.3e} over {cases} (profile, keep) cases, D <= 64")
    assert ok


def test_c8_eigh_reconstruction(rng, record):
    worst = 0.0
    for i in range(1000):
        n = 1 + i % 16
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        a = (a + a.conj().T) / 2
        lam, v = jacobi_eigh(a)
        worst = max(worst, float(np.max(np.abs(v @ np.diag(lam) @ v.conj().T - a))))
    ok = worst <= 1e-10
    record("C8 eigh reconstruction", ok, f"max entry error {worst:.3e} over 1000 matrices of size 1..16")
    assert ok


# 9. fixture table
def test_c9_fixtures(record):
    cases = [(("ghz", d), [1.0] * len(d)) for d in [(2, 2), (2, 2, 2), (2,) * 4, (2,) * 5]]
    cases += [(("w", (2, 2, 2)), [2 / 3] * 3)]
    cases += [(("product", d), [0.0] * len(d)) for d in [(2, 2), (2, 2, 2), (3, 4, 2)]]
    cases += [(("bell", (2, 3)), [1.0, 0.5])]
    worst = 0.0
    for (name, dims), expected in cases:
        worst = max(worst, float(np.max(np.abs(np.array(profile(named_state(name, dims)).y) - expected))))
    ok = worst <= 1e-10
    record("C9 fixture table", ok, f"max |Y - expected| {worst:.3e} over {len(cases)} fixtures")
    assert ok


# 10. byte-identical CLI output
def test_c10_cli_determinism(tmp_path, record, capsys):
    commands = [
        ["analyze", "--state", "w", "--dims", "2,2,2"],
        ["analyze", "--state", "ghz", "--dims", "2,2,4", "--format", "csv"],
        ["campaign", "--dims", "2,2,2", "--samples", "1000", "--seed", "1", "--no-timing"],
        ["campaign", "--dims", "2,2,2,2", "--samples", "150000", "--seed", "5", "--no-timing", "--threads", "{t}"],
        ["campaign", "--dims", "2,2,4", "--samples", "140000", "--seed", "5", "--format", "csv", "--threads", "{t}"],
        ["volume", "--region", "qutetrit", "--samples", "300000", "--seed", "2", "--no-timing", "--threads", "{t}"],
        ["volume", "--region", "polygon-4", "--samples", "200000", "--seed", "2", "--format", "csv", "--no-timing"],
        ["boundary", "--region", "qutetrit", "--resolution", "101"],
        ["boundary", "--region", "qutetrit∩classical", "--resolution", "21", "--format", "json"],
    ]
    mismatched = []
    for i, cmd in enumerate(commands):
        outputs = []
        for run, threads in enumerate(["1", "4", "3"]):
            path = tmp_path / f"{i}-{run}.out"
            argv = [a.replace("{t}", threads) for a in cmd] + ["--out", str(path)]
            assert main(argv) in (0, 2)
            stdout = capsys.readouterr().out
            if "campaign" in cmd and "csv" in cmd:
                # csv campaigns stream rows to --out and print the report; drop the timing field
                stdout = "\n".join(l for l in stdout.splitlines() if "wall_time" not in l)
            outputs.append((path.read_bytes(), stdout))
        if len(set(outputs)) != 1:
            mismatched.append(" ".join(cmd))
    ok = not mismatched
    record("C10 CLI determinism", ok, f"{len(commands)} commands x 3 runs (threads 1/4/3), mismatches: {mismatched or 'none'}")
    assert ok
