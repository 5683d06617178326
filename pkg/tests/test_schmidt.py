import math

import numpy as np
import pytest

from compurity.errors import NoConvergence, NotHermitian, NotQubits
from compurity.linalg import jacobi_eigh
from compurity.reduction import partial_trace, q_measure
from compurity.schmidt import eigh, max_off_diagonal, signed_mass_q, to_schmidt
from compurity.state import PureState, apply_local_unitary, basis_state, named_state

from oracles import random_state_vector


def random_hermitian(rng, n):
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (x + x.conj().T) / 2


def test_eigh_diagonal_input_sorted():
    dec = eigh(np.diag([0.3, 0.7]))
    np.testing.assert_allclose(dec.eigenvalues, [0.7, 0.3])
    np.testing.assert_allclose(np.abs(dec.eigenvectors), [[0, 1], [1, 0]])


def test_eigh_projector():
    dec = eigh([[0.5, 0.5], [0.5, 0.5]])
    np.testing.assert_allclose(dec.eigenvalues, [1, 0], atol=1e-15)


def test_eigh_reconstruction(rng):
    for n in (1, 2, 3, 4, 7, 16):
        h = random_hermitian(rng, n)
        w, v = eigh(h)
        assert np.all(np.diff(w) <= 0)
        np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, h, atol=1e-10, rtol=0)
        np.testing.assert_allclose(v.conj().T @ v, np.eye(n), atol=1e-10, rtol=0)
        np.testing.assert_allclose(h @ v, v * w, atol=1e-10, rtol=0)


def test_eigh_is_deterministic_with_phase_convention(rng):
    h = random_hermitian(rng, 5)
    a, b = eigh(h), eigh(h.copy())
    np.testing.assert_array_equal(a.eigenvalues, b.eigenvalues)
    np.testing.assert_array_equal(a.eigenvectors, b.eigenvectors)
    v = a.eigenvectors
    pivots = v[np.argmax(np.abs(v), axis=0), np.arange(5)]
    assert np.all(pivots.real >= 0) and np.all(np.abs(pivots.imag) == 0)


def test_eigh_degenerate_and_zero():
    w, v = eigh(np.eye(3) / 3)
    np.testing.assert_allclose(w, [1 / 3] * 3)
    np.testing.assert_array_equal(v, np.eye(3))
    w, _ = eigh(np.zeros((2, 2)))
    np.testing.assert_array_equal(w, [0, 0])


def test_eigh_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        eigh([[1, 2], [0, 1]])


def test_eigh_sweep_cap():
    h = np.array([[1, 0.5, 0.2], [0.5, 2, 0.1], [0.2, 0.1, 3]])
    with pytest.raises(NoConvergence):
        jacobi_eigh(h, max_sweeps=0)


def test_to_schmidt_keeps_already_diagonal_states():
    for s in (named_state("w", [2, 2, 2]), named_state("ghz", [2, 2, 2]), basis_state([2, 2, 2], [0, 0, 0])):
        sf = to_schmidt(s)
        np.testing.assert_allclose(sf.state.coeffs, s.coeffs, atol=1e-15)


def test_to_schmidt_hadamard_bell():
    h = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    s = apply_local_unitary(named_state("bell", [2, 2]), 0, h)
    sf = to_schmidt(s)
    for n in range(2):
        np.testing.assert_allclose(partial_trace(sf.state, [n]), np.eye(2) / 2, atol=1e-12)


@pytest.mark.parametrize("dims", [(2, 2, 2), (2, 3), (2, 2, 4)])
def test_to_schmidt_diagonalizes_every_party(rng, dims):
    worst_off = worst_q = 0.0
    for _ in range(1000):
        s = PureState(dims, random_state_vector(rng, math.prod(dims)))
        sf = to_schmidt(s)
        worst_off = max(worst_off, max_off_diagonal(sf.state))
        for n in range(len(dims)):
            d = np.diag(partial_trace(sf.state, [n])).real
            assert np.all(np.diff(d) <= 1e-12)
            np.testing.assert_allclose(d, sf.eigenvalues[n], atol=1e-10)
            worst_q = max(worst_q, abs(q_measure(partial_trace(s, [n])) - q_measure(partial_trace(sf.state, [n]))))
    assert worst_off <= 1e-10
    assert worst_q <= 1e-10


def test_signed_mass_examples():
    for n in range(3):
        assert signed_mass_q(to_schmidt(named_state("ghz", [2, 2, 2])), n) == pytest.approx(0.0, abs=1e-15)
        assert signed_mass_q(to_schmidt(basis_state([2, 2, 2], [0, 0, 0])), n) == 1.0
        assert signed_mass_q(to_schmidt(named_state("w", [2, 2, 2])), n) == pytest.approx(1 / 3, abs=1e-15)


def test_signed_mass_equals_q_for_qubits(rng):
    worst = 0.0
    for nq in (2, 3, 4, 5):
        for _ in range(100):
            s = PureState((2,) * nq, random_state_vector(rng, 2**nq))
            sf = to_schmidt(s)
            for n in range(nq):
                worst = max(worst, abs(signed_mass_q(sf, n) - q_measure(partial_trace(s, [n]))))
    assert worst <= 1e-10


def test_signed_mass_needs_qubits():
    with pytest.raises(NotQubits):
        signed_mass_q(to_schmidt(named_state("bell", [2, 3])), 0)
