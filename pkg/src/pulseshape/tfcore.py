"""Cyclic time-frequency algebra on Z_L.

Conventions used throughout the package:

* ``S_(k,l) x (t) = exp(2 pi i l t / L) x(t - k)`` (modulate after delay).
* Inner products are conjugate-linear in the first argument.
* A time-frequency cell ``(k, l)`` has continuous area ``1 / L``.
* The symplectic transform carries a ``1 / L`` factor so that an impulse
  at the origin maps to the constant ``1 / L`` and the transform is an
  involution.
"""
from dataclasses import dataclass

import numpy as np

from . import _kernels


@dataclass(frozen=True)
class TFCell:
    k: int
    l: int
    L: int

    def __post_init__(self):
        object.__setattr__(self, "k", int(self.k) % self.L)
        object.__setattr__(self, "l", int(self.l) % self.L)

    def __neg__(self):
        return TFCell(-self.k, -self.l, self.L)

    def __add__(self, other):
        return TFCell(self.k + other.k, self.l + other.l, self.L)

    def signed(self):
        """(k, l) mapped to the symmetric range ``[-L/2, L/2)``."""
        half = self.L // 2
        return ((self.k + half) % self.L - half, (self.l + half) % self.L - half)


def as_signal(x):
    return np.asarray(x, dtype=np.complex128).reshape(-1)


def inner(x, y):
    """<x, y>, conjugate-linear in ``x``."""
    return np.vdot(x, y)


def normalize(x):
    x = as_signal(x)
    n = np.linalg.norm(x)
    if n == 0:
        raise ValueError("cannot normalize the zero signal")
    return x / n


def tf_shift(x, mu):
    """Apply the time-frequency shift ``S_mu`` with ``mu = (k, l)``."""
    x = as_signal(x)
    L = x.shape[0]
    k, l = (mu.k, mu.l) if isinstance(mu, TFCell) else mu
    t = np.arange(L)
    return np.exp(2j * np.pi * ((int(l) * t) % L) / L) * np.roll(x, int(k) % L)


def tf_shift_adjoint(x, mu):
    """``S_mu^* x``; equals ``exp(-2 pi i k l / L) S_(-mu) x``."""
    x = as_signal(x)
    L = x.shape[0]
    k, l = (mu.k, mu.l) if isinstance(mu, TFCell) else mu
    t = np.arange(L)
    return np.roll(np.exp(-2j * np.pi * ((int(l) * t) % L) / L) * x, -(int(k) % L))


def shift_matrix(mu, L):
    """Dense unitary matrix of ``S_mu``."""
    k, l = (mu.k, mu.l) if isinstance(mu, TFCell) else mu
    k, l = int(k), int(l)
    t = np.arange(L)
    M = np.zeros((L, L), dtype=np.complex128)
    M[t, (t - k) % L] = np.exp(2j * np.pi * ((l * t) % L) / L)
    return M


def cross_ambiguity(g, gamma):
    """Cross-ambiguity grid ``A[k, l] = <g, S_(k,l) gamma>`` over all ``L^2`` cells.

    Row ``k`` is ``L * ifft(conj(g) * roll(gamma, k))``.
    """
    g = as_signal(g)
    gamma = as_signal(gamma)
    if g.shape != gamma.shape:
        raise ValueError(f"length mismatch: {g.shape[0]} vs {gamma.shape[0]}")
    L = g.shape[0]
    t = np.arange(L)
    rolled = gamma[(t[None, :] - t[:, None]) % L]  # [k, t] -> gamma(t - k)
    return L * np.fft.ifft(np.conj(g)[None, :] * rolled, axis=1)


def symplectic_dft(F):
    """Discrete symplectic Fourier transform on ``Z_L x Z_L``.

    ``(F_s F)(mu) = (1/L) sum_nu exp(-2 pi i (nu_1 mu_2 - nu_2 mu_1) / L) F(nu)``.
    The map is its own inverse.
    """
    F = np.asarray(F, dtype=np.complex128)
    L = F.shape[0]
    if F.shape != (L, L):
        raise ValueError("expected a square L x L grid")
    # exp(-i2pi nu1 mu2 / L): DFT over nu1; exp(+i2pi nu2 mu1 / L): inverse DFT over nu2
    G = np.fft.fft(F, axis=0)
    G = np.fft.ifft(G, axis=1) * L
    return G.T / L


def shifted_copies(x, cells):
    """Rows are ``S_mu x`` for each ``(k, l)`` in ``cells`` (``n x 2`` int array)."""
    cells = np.asarray(cells, dtype=np.int64).reshape(-1, 2)
    return _kernels.shift_stack(as_signal(x), cells[:, 0], cells[:, 1])


def dft_unitary(x):
    x = as_signal(x)
    return np.fft.fft(x) / np.sqrt(x.shape[0])
