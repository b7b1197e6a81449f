from fractions import Fraction

import numpy as np
import pytest

from pulseshape.gabor import (Lattice, NotAFrame, adjoint_lattice, condition_number, cp_ofdm_lattice,
                              frame_operator, frame_quality, make_cp_ofdm, make_gaussian, make_lattice, tighten)
from pulseshape.tfcore import cross_ambiguity, dft_unitary, shift_matrix, shifted_copies

from conftest import random_signal


def enumerate_pairs(L, product):
    return [(a, product // a) for a in range(1, L + 1)
            if L % a == 0 and product % a == 0 and L % (product // a) == 0]


def test_divisor_enumeration_oracle():
    assert sorted(enumerate_pairs(512, 256)) == [(2**k, 2**(8 - k)) for k in range(9)]


@pytest.mark.parametrize("L,density,ratio,expected", [
    (512, 2, 1, (16, 16)),
    (512, 2, 150, (256, 1)),
    (512, 1, 1, (32, 16)),
    (512, 2, 1 / 149, (1, 256)),
    (512, 2, 10 / 15, (16, 16)),
    (512, 2, 6, (32, 8)),
])
def test_make_lattice(L, density, ratio, expected):
    lat = make_lattice(L, density, ratio)
    assert (lat.a, lat.b) == expected
    assert lat.a * lat.b * density == L


def test_make_lattice_errors():
    with pytest.raises(ValueError):
        make_lattice(12, Fraction(5), 1)
    with pytest.raises(ValueError):
        make_lattice(16, 2, -1)


def test_lattice_properties():
    lat = Lattice(16, 16, 512)
    assert lat.density == 2 and lat.point_count == 1024 and lat.periodic
    assert not Lattice(20, 4, 64).periodic
    with pytest.raises(ValueError):
        Lattice(0, 1, 8)


@pytest.mark.parametrize("ab,expected", [((16, 16), (32, 32)), ((256, 1), (512, 2))])
def test_adjoint_lattice(ab, expected):
    lat = Lattice(*ab, 512)
    adj = adjoint_lattice(lat)
    assert (adj.a, adj.b) == expected
    assert adj.density == pytest.approx(1 / lat.density)
    assert adjoint_lattice(adj) == lat


def test_full_grid_frame_is_scaled_identity(rng):
    g = random_signal(rng, 8)
    np.testing.assert_allclose(frame_operator(g, Lattice(1, 1, 8)), 8 * np.eye(8), atol=1e-12)


def test_impulse_orthonormal_basis():
    # delays of an impulse (a=1, b=L) and modulations of a constant (a=L, b=1)
    L = 8
    d = np.zeros(L)
    d[0] = 1
    for x, lat in [(d, Lattice(1, L, L)), (np.full(L, L ** -0.5), Lattice(L, 1, L))]:
        np.testing.assert_allclose(frame_operator(x, lat), np.eye(L), atol=1e-14)
        A, B = frame_quality(x, lat)
        assert A == pytest.approx(1) and B == pytest.approx(1)


def test_frame_operator_matches_rank_one_sum(rng):
    L = 12
    g = random_signal(rng, L)
    lat = Lattice(3, 4, L)
    V = shifted_copies(g, lat.points())
    np.testing.assert_allclose(frame_operator(g, lat), V.T @ V.conj(), atol=1e-12)


def test_frame_operator_psd_and_commutes(rng):
    L = 16
    for a, b in [(2, 4), (4, 2), (2, 2), (4, 4)]:
        lat = Lattice(a, b, L)
        for _ in range(20 if (a, b) == (2, 4) else 3):
            S = frame_operator(random_signal(rng, L), lat)
            assert np.linalg.eigvalsh(S)[0] >= -1e-12
            np.testing.assert_allclose(S, S.conj().T, atol=1e-13)
        for p in lat.points():
            M = shift_matrix(p, L)
            assert np.max(np.abs(S @ M - M @ S)) < 1e-9


@pytest.mark.parametrize("ab", [(2, 4), (4, 2), (2, 2), (1, 4), (4, 4), (8, 2)])
def test_b_gamma_lower_bound(ab, rng):
    lat = Lattice(*ab, 16)
    floor = max(lat.density, 1.0)
    for _ in range(100):
        _, B = frame_quality(random_signal(rng, 16), lat)
        assert B >= floor - 1e-9


def test_tight_frame_b_gamma():
    lat = Lattice(4, 2, 16)
    g = tighten(make_gaussian(16, 2), lat)
    A, B = frame_quality(g, lat)
    assert B == pytest.approx(2, abs=1e-8)
    assert A == pytest.approx(2, abs=1e-8)


def test_tighten_gaussian_512():
    lat = Lattice(16, 16, 512)
    g = tighten(make_gaussian(512, 1), lat)
    assert np.linalg.norm(g) == pytest.approx(1, abs=1e-12)
    assert np.max(np.abs(frame_operator(g, lat) - 2 * np.eye(512))) < 1e-6


def test_tighten_on_tight_input_is_noop():
    L = 8
    d = np.zeros(L, dtype=complex)
    d[0] = 1
    out = tighten(d, Lattice(1, L, L))
    assert abs(np.vdot(out, d)) == pytest.approx(1, abs=1e-12)


def test_tighten_idempotent(rng):
    lat = Lattice(2, 4, 16)
    once = tighten(random_signal(rng, 16), lat)
    twice = tighten(once, lat)
    assert abs(np.vdot(once, twice)) == pytest.approx(1, abs=1e-8)
    np.testing.assert_allclose(twice, once, atol=1e-8)


def test_critical_lattice_is_worse_conditioned():
    # on an 8 x 8 critical grid the symmetric Gaussian's Zak zero is sampled; 5 x 8 avoids it
    L = 40
    crit = Lattice(5, 8, L)
    dense = make_lattice(L, 2, 1)
    k_crit = condition_number(make_gaussian(L, crit.a / crit.b), crit)
    k_dense = condition_number(make_gaussian(L, dense.a / dense.b), dense)
    assert k_crit > 10 * k_dense
    g = tighten(make_gaussian(L, crit.a / crit.b), crit)
    np.testing.assert_allclose(frame_operator(g, crit), np.eye(L), atol=1e-9)


def test_zak_zero_on_even_critical_grid():
    with pytest.raises(NotAFrame):
        tighten(make_gaussian(64, 1), Lattice(8, 8, 64))


def test_not_a_frame():
    g = np.zeros(16, dtype=complex)
    g[:2] = 1
    with pytest.raises(NotAFrame):
        tighten(g, Lattice(4, 2, 16))


def test_below_density_one_orthonormalizes(rng):
    L = 16
    lat = Lattice(4, 8, L)  # density 1/2
    g = tighten(make_gaussian(L, 0.5), lat)
    V = shifted_copies(g, lat.points())
    np.testing.assert_allclose(V.conj() @ V.T, np.eye(lat.point_count), atol=1e-10)
    _, B = frame_quality(g, lat)
    assert B == pytest.approx(1, abs=1e-9)


def test_ron_shen_duality(rng):
    # gamma gives a frame on lat iff its Gram matrix on the adjoint lattice is invertible
    L = 16
    lat = Lattice(2, 4, L)
    adj = adjoint_lattice(lat)
    for g in [random_signal(rng, L), make_gaussian(L, 0.5)]:
        A, _ = frame_quality(g, lat)
        V = shifted_copies(g, adj.points())
        gram_min = np.linalg.eigvalsh(V.conj() @ V.T)[0]
        assert (A > 1e-10) == (gram_min > 1e-10)
        assert A == pytest.approx(lat.density * gram_min, rel=1e-8)


def test_gaussian_self_dual():
    g = make_gaussian(512, 1)
    assert np.linalg.norm(g) == pytest.approx(1, abs=1e-14)
    np.testing.assert_allclose(dft_unitary(g), g, atol=1e-8)
    np.testing.assert_allclose(g, np.roll(g[::-1], 1), atol=1e-15)


@pytest.mark.parametrize("r", [2.0, 4.0, 16.0, 0.3])
def test_gaussian_duality(r):
    np.testing.assert_allclose(dft_unitary(make_gaussian(512, r)), make_gaussian(512, 1 / r), atol=1e-8)


def _spread(p):
    L = p.size
    t = np.arange(L)
    t = np.where(t >= L / 2, t - L, t)
    return np.sqrt(np.sum(t ** 2 * p) / np.sum(p))


@pytest.mark.parametrize("r", [1, 4, 16])
def test_gaussian_moment_ratio(r):
    g = make_gaussian(512, r)
    ratio = _spread(np.abs(g) ** 2) / _spread(np.abs(dft_unitary(g)) ** 2)
    assert ratio == pytest.approx(r, rel=0.02)


def test_cp_ofdm_biorthogonal():
    pair = make_cp_ofdm(64, 16, 4)
    lat = cp_ofdm_lattice(pair)
    assert (lat.a, lat.b) == (20, 4)
    G = shifted_copies(pair.g, lat.points())
    Gam = shifted_copies(pair.gamma, lat.points())
    gram = G.conj() @ Gam.T
    off = gram - np.diag(np.diag(gram))
    assert np.max(np.abs(off)) < 1e-12
    np.testing.assert_allclose(np.abs(np.diag(gram)), np.sqrt(16 / 20), atol=1e-12)
    assert pair.meta["efficiency"] == pytest.approx(0.8)
    assert pair.meta["efficiency"] < 1


def test_cp_ofdm_ambiguity_constant_over_prefix():
    pair = make_cp_ofdm(64, 16, 4)
    A = cross_ambiguity(pair.g, pair.gamma)
    np.testing.assert_allclose(np.abs(A[:5, 0]), np.sqrt(16 / 20), atol=1e-12)
    assert abs(A[5, 0]) < abs(A[0, 0])


def test_cp_ofdm_divisibility():
    with pytest.raises(ValueError):
        make_cp_ofdm(64, 12, 4)
