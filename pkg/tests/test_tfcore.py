import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pulseshape.tfcore import TFCell, cross_ambiguity, inner, shift_matrix, symplectic_dft, tf_shift, tf_shift_adjoint

from conftest import brute_ambiguity, random_signal


def test_zero_shift_is_identity(rng):
    x = random_signal(rng, 8)
    np.testing.assert_array_equal(tf_shift(x, (0, 0)), x)


def test_pure_delay_moves_impulse():
    x = np.zeros(8)
    x[0] = 1
    expected = np.zeros(8)
    expected[3] = 1
    np.testing.assert_allclose(tf_shift(x, (3, 0)), expected)


def test_composition_phase(rng):
    L, k, l = 8, 3, 5
    x = random_signal(rng, L)
    lhs = tf_shift(tf_shift(x, (k, 0)), (0, l))
    rhs = tf_shift(x, (k, l))
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)
    # delay after modulation picks up the commutation phase
    other = tf_shift(tf_shift(x, (0, l)), (k, 0))
    np.testing.assert_allclose(other, np.exp(-2j * np.pi * l * k / L) * rhs, atol=1e-12)


def test_adjoint_matches_matrix(rng):
    x = random_signal(rng, 12)
    for mu in [(1, 2), (5, 11), (0, 7)]:
        np.testing.assert_allclose(tf_shift_adjoint(x, mu), shift_matrix(mu, 12).conj().T @ x, atol=1e-12)
        np.testing.assert_allclose(tf_shift(x, mu), shift_matrix(mu, 12) @ x, atol=1e-12)


def test_tfcell_reduction():
    c = TFCell(-1, 9, 8)
    assert (c.k, c.l) == (7, 1)
    assert (-c).k == 1 and (-c).l == 7
    assert TFCell(7, 7, 8).signed() == (-1, -1)


def test_ambiguity_matches_brute_force(rng):
    g, gam = random_signal(rng, 8), random_signal(rng, 8)
    np.testing.assert_allclose(cross_ambiguity(g, gam), brute_ambiguity(g, gam), atol=1e-12)


def test_ambiguity_origin(rng):
    g, gam = random_signal(rng, 8), random_signal(rng, 8)
    A = cross_ambiguity(g, gam)
    assert A[0, 0] == pytest.approx(inner(g, gam), abs=1e-14)
    assert cross_ambiguity(g, g)[0, 0] == pytest.approx(1.0, abs=1e-14)


def test_constant_signal_ambiguity():
    L = 8
    c = np.full(L, 1 / np.sqrt(L))
    A = cross_ambiguity(c, c)
    np.testing.assert_allclose(np.abs(A[:, 0]), 1.0, atol=1e-12)
    np.testing.assert_allclose(A[:, 1:], 0.0, atol=1e-12)


def test_length_mismatch():
    with pytest.raises(ValueError):
        cross_ambiguity(np.ones(4), np.ones(5))


@pytest.mark.parametrize("L", [4, 8, 16])
def test_moyal(L, rng):
    g = random_signal(rng, L, unit=False)
    gam = random_signal(rng, L, unit=False)
    lhs = np.sum(np.abs(cross_ambiguity(g, gam)) ** 2)
    rhs = L * np.linalg.norm(g) ** 2 * np.linalg.norm(gam) ** 2
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_shift_isometry_exhaustive(rng):
    L = 16
    for _ in range(100):
        x = random_signal(rng, L, unit=False)
        n = np.linalg.norm(x)
        norms = [np.linalg.norm(tf_shift(x, (k, l))) for k in range(L) for l in range(L)]
        np.testing.assert_allclose(norms, n, rtol=1e-13)


signals = st.integers(0, 2**32 - 1).map(lambda s: np.random.default_rng(s))


@settings(max_examples=40, deadline=None)
@given(seed=signals, k=st.integers(0, 15), l=st.integers(0, 15))
def test_cauchy_schwarz_and_covariance(seed, k, l):
    g = random_signal(seed, 16, unit=False)
    gam = random_signal(seed, 16, unit=False)
    A = cross_ambiguity(g, gam)
    assert np.all(np.abs(A) <= np.linalg.norm(g) * np.linalg.norm(gam) * (1 + 1e-12))
    A2 = cross_ambiguity(tf_shift(g, (k, l)), tf_shift(gam, (k, l)))
    np.testing.assert_allclose(np.abs(A2), np.abs(A), atol=1e-10)


def brute_symplectic(F):
    L = F.shape[0]
    out = np.zeros((L, L), dtype=complex)
    for m1 in range(L):
        for m2 in range(L):
            for n1 in range(L):
                for n2 in range(L):
                    out[m1, m2] += np.exp(-2j * np.pi * (n1 * m2 - n2 * m1) / L) * F[n1, n2]
    return out / L


def test_symplectic_ones_to_delta():
    L = 4
    F = np.ones((L, L))
    expected = np.zeros((L, L))
    expected[0, 0] = L
    np.testing.assert_allclose(brute_symplectic(F), expected, atol=1e-12)
    np.testing.assert_allclose(symplectic_dft(F), expected, atol=1e-12)


def test_symplectic_delta_to_constant():
    F = np.zeros((8, 8))
    F[0, 0] = 1
    np.testing.assert_allclose(symplectic_dft(F), 1 / 8, atol=1e-15)


def test_symplectic_matches_brute(rng):
    F = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    np.testing.assert_allclose(symplectic_dft(F), brute_symplectic(F), atol=1e-12)


def test_symplectic_involution(rng):
    F = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    np.testing.assert_allclose(symplectic_dft(symplectic_dft(F)), F, atol=1e-12)


def test_conjugate_kernel_reflects(rng):
    # applying the forward map then its complex conjugate yields F(-mu)
    F = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    back = np.conj(symplectic_dft(np.conj(symplectic_dft(F))))
    idx = (-np.arange(8)) % 8
    np.testing.assert_allclose(back, F[np.ix_(idx, idx)], atol=1e-12)
