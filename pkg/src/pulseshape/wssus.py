"""WSSUS scattering statistics, channel realizations and SINR analytics.

A channel realization is ``H = sum_mu c_mu S_mu`` with ``E|c_mu|^2 = p(mu)``.
With cell area ``1/L`` the corresponding continuous spreading density is
``L * c_mu``; this is what ``spreading_grid`` and the Lp norms in
:mod:`pulseshape.bounds` use.
"""
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .gabor import PulsePair
from .tfcore import as_signal, cross_ambiguity, shifted_copies, symplectic_dft


@dataclass
class ScatteringMass:
    """Probability masses ``p`` on distinct cells ``support`` (``N x 2``, reduced mod L)."""

    support: np.ndarray
    mass: np.ndarray
    L: int

    def __post_init__(self):
        self.support = np.asarray(self.support, dtype=np.int64).reshape(-1, 2) % self.L
        self.mass = np.asarray(self.mass, dtype=np.float64).reshape(-1)
        if self.support.shape[0] != self.mass.shape[0]:
            raise ValueError("support and mass sizes differ")
        if np.any(self.mass < 0):
            raise ValueError("masses must be nonnegative")
        if abs(self.mass.sum() - 1.0) > 1e-12:
            raise ValueError(f"masses sum to {self.mass.sum()!r}, expected 1")
        keys = self.support[:, 0] * self.L + self.support[:, 1]
        if np.unique(keys).size != keys.size:
            raise ValueError("support cells must be distinct")

    @property
    def area(self):
        """Continuous measure ``|U| = N / L``."""
        return self.support.shape[0] / self.L

    def __len__(self):
        return self.support.shape[0]

    def reflected(self):
        """``C~(mu) = C(-mu)``."""
        return ScatteringMass(-self.support, self.mass.copy(), self.L)

    def translated(self, k, l):
        return ScatteringMass(self.support + np.array([k, l]), self.mass.copy(), self.L)

    @classmethod
    def delta(cls, L, k=0, l=0):
        return cls([[k, l]], [1.0], L)


@dataclass
class ChannelRealization:
    """Spreading coefficients ``coeffs`` on ``support``; ``H = sum c_mu S_mu``."""

    support: np.ndarray
    coeffs: np.ndarray
    L: int

    def __post_init__(self):
        self.support = np.asarray(self.support, dtype=np.int64).reshape(-1, 2) % self.L
        self.coeffs = np.asarray(self.coeffs, dtype=np.complex128).reshape(-1)
        if self.support.shape[0] != self.coeffs.shape[0]:
            raise ValueError("support and coeffs sizes differ")

    @classmethod
    def identity(cls, L):
        return cls([[0, 0]], [1.0], L)

    def spreading_density(self):
        return self.L * self.coeffs


def make_brick_scattering(tau_d, B_D, L):
    """Uniform mass on ``{0..tau_d} x {-B_D..B_D}`` (Doppler reduced mod L)."""
    if tau_d < 0 or B_D < 0:
        raise ValueError("extents must be nonnegative")
    if tau_d + 1 > L or 2 * B_D + 1 > L:
        raise ValueError(f"brick {tau_d + 1} x {2 * B_D + 1} does not fit on Z_{L}^2")
    k, l = np.meshgrid(np.arange(tau_d + 1), np.arange(-B_D, B_D + 1), indexing="ij")
    cells = np.stack([k.ravel(), l.ravel()], axis=1)
    n = cells.shape[0]
    return ScatteringMass(cells, np.full(n, 1.0 / n), L)


def _cell_values(g, gamma, cells):
    # <g, S_mu gamma> for each mu in cells
    return shifted_copies(gamma, cells) @ np.conj(as_signal(g))


def localization_gain(g, gamma, C):
    """``sum_mu p(mu) |A_{g gamma}(mu)|^2``."""
    vals = _cell_values(g, gamma, C.support)
    return float(np.dot(C.mass, np.abs(vals) ** 2))


def localization_operator(C, g):
    """``L_{C,g} = sum_mu p(mu) (S_mu^* g)(S_mu^* g)^*``.

    ``S_mu^* g`` equals ``S_{-mu} g`` up to a unimodular factor, which
    cancels in the rank-one terms.
    """
    H = shifted_copies(g, -C.support)
    return (H.T * C.mass) @ H.conj()


def q_operator(C):
    """``Q = sum_mu p(mu) S_mu`` as a dense matrix."""
    L = C.L
    t = np.arange(L)
    Q = np.zeros((L, L), dtype=np.complex128)
    for (k, l), p in zip(C.support, C.mass):
        Q[t, (t - k) % L] += p * np.exp(2j * np.pi * ((l * t) % L) / L)
    return Q


def draw_channel(C, rng):
    """Circular complex Gaussian coefficients with ``E|c_mu|^2 = p(mu)``."""
    n = len(C)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return ChannelRealization(C.support.copy(), np.sqrt(C.mass / 2) * z, C.L)


def draw_coefficients(C, rng, trials):
    """``trials x N`` matrix of independent realizations' coefficients."""
    n = len(C)
    z = rng.standard_normal((trials, n)) + 1j * rng.standard_normal((trials, n))
    return np.sqrt(C.mass / 2)[None, :] * z


def apply_channel(h, x):
    """``sum_mu c_mu S_mu x``."""
    x = as_signal(x)
    if x.shape[0] != h.L:
        raise ValueError("signal length does not match channel")
    return _kernels.apply_shifts(x, h.support[:, 0], h.support[:, 1], h.coeffs)


def channel_operator(h):
    """Dense matrix of ``H``."""
    L = h.L
    t = np.arange(L)
    M = np.zeros((L, L), dtype=np.complex128)
    for (k, l), c in zip(h.support, h.coeffs):
        M[t, (t - k) % L] += c * np.exp(2j * np.pi * ((l * t) % L) / L)
    return M


def spreading_grid(h):
    """``L x L`` grid of the spreading density ``L * c_mu``."""
    G = np.zeros((h.L, h.L), dtype=np.complex128)
    np.add.at(G, (h.support[:, 0], h.support[:, 1]), h.spreading_density())
    return G


def channel_symbol(h):
    """Symplectic transform of the spreading density (identity channel -> 1)."""
    return symplectic_dft(spreading_grid(h))


def oqam_phase(slots):
    """Default phase map ``i^(n1 + n2)``."""
    slots = np.asarray(slots, dtype=np.int64).reshape(-1, 2)
    return 1j ** ((slots[:, 0] + slots[:, 1]) % 4)


def full_slots(lat):
    n1, n2 = lat.shape
    return np.stack(np.meshgrid(np.arange(n1), np.arange(n2), indexing="ij"), -1).reshape(-1, 2)


def _slot_pulses(x, lat, slots):
    return shifted_copies(x, lat.points(slots))


def channel_matrix(h, pair, lat, slots=None, real_mode=False, phase_map=oqam_phase):
    """``H[m, n] = <S_{Lam m} g, H S_{Lam n} gamma>``; real mode gives ``Re(i^{n-m} H[m, n])``."""
    if slots is None:
        slots = full_slots(lat)
    slots = np.asarray(slots, dtype=np.int64).reshape(-1, 2)
    n1, n2 = lat.shape
    if np.any(slots < 0) or np.any(slots[:, 0] >= n1) or np.any(slots[:, 1] >= n2):
        raise ValueError("slot outside lattice grid")
    G = _slot_pulses(pair.g, lat, slots)
    Gam = _slot_pulses(pair.gamma, lat, slots)
    HGam = channel_operator(h) @ Gam.T
    Hmn = G.conj() @ HGam
    if real_mode:
        ph = phase_map(slots)
        Hmn = np.real(np.conj(ph)[:, None] * ph[None, :] * Hmn)
    return Hmn


@dataclass
class OqamResult:
    estimates: np.ndarray
    signal: np.ndarray
    interference: np.ndarray
    noise: np.ndarray
    slots: np.ndarray = field(repr=False)


def oqam_roundtrip(x_R, pair, lat, h, noise_var, rng, slots=None, phase_map=oqam_phase):
    """Real-symbol OQAM chain: modulate, pass ``h`` plus white noise, demodulate.

    Returns per-slot real estimates split into signal, interference and
    noise contributions (``estimates = signal + interference + noise``).
    """
    if abs(lat.density - 2.0) > 1e-12:
        raise ValueError(f"OQAM requires density 2, got {lat.density}")
    if slots is None:
        slots = full_slots(lat)
    slots = np.asarray(slots, dtype=np.int64).reshape(-1, 2)
    x_R = np.asarray(x_R, dtype=np.float64).reshape(-1)
    if x_R.shape[0] != slots.shape[0]:
        raise ValueError("one real symbol per slot required")
    ph = phase_map(slots)
    G = _slot_pulses(pair.g, lat, slots)
    Gam = _slot_pulses(pair.gamma, lat, slots)
    s = (ph * x_R) @ Gam
    L = pair.L
    noise = np.sqrt(noise_var / 2) * (rng.standard_normal(L) + 1j * rng.standard_normal(L))
    r = apply_channel(h, s) + noise
    est = np.real(np.conj(ph) * (G.conj() @ r))
    HR = channel_matrix(h, pair, lat, slots, real_mode=True, phase_map=phase_map)
    signal = np.diag(HR) * x_R
    interference = HR @ x_R - signal
    noise_part = np.real(np.conj(ph) * (G.conj() @ noise))
    return OqamResult(est, signal, interference, noise_part, slots)


def sinr_terms(pair, lat, C):
    """``(gain, interference)`` with the interference summed over every nonzero lattice point."""
    A2 = np.abs(cross_ambiguity(pair.g, pair.gamma)) ** 2
    gain = float(np.dot(C.mass, A2[C.support[:, 0], C.support[:, 1]]))
    lat._require_periodic()
    folded = _kernels.lattice_fold(A2, lat.a, lat.b)
    total = float(np.dot(C.mass, folded[C.support[:, 0] % lat.a, C.support[:, 1] % lat.b]))
    return gain, max(total - gain, 0.0)


def analytic_sinr(pair, lat, C, noise_var):
    """WSSUS-averaged SINR, exact cyclic lattice sum, unit symbol variance."""
    gain, interf = sinr_terms(pair, lat, C)
    return gain / (noise_var + interf)


def sinr_lower_bound(gain, B_gamma, noise_var):
    """``gain / (noise_var + B_gamma - gain)``."""
    den = noise_var + B_gamma - gain
    if den <= 0:
        raise ValueError(f"invalid regime: denominator {den!r} <= 0")
    return gain / den


@dataclass
class MonteCarloSinr:
    sinr: float
    signal: float
    interference: float
    noise: float
    trials: int
    signal_se: float = 0.0
    interference_se: float = 0.0


def monte_carlo_sinr(pair, lat, C, noise_var, trials, rng, real_mode=True, phase_map=oqam_phase):
    """Sample-average SINR of slot 0 over random channel and noise draws."""
    lat._require_periodic()
    L = pair.L
    A = cross_ambiguity(pair.g, pair.gamma)
    slots = full_slots(lat)
    pts = lat.points(slots)
    mu = C.support
    kk = (mu[None, :, 0] + pts[:, None, 0]) % L
    ll = (mu[None, :, 1] + pts[:, None, 1]) % L
    phase = np.exp(-2j * np.pi * ((pts[:, None, 1] * mu[None, :, 0]) % L) / L)
    M = phase * A[kk, ll]  # [n, mu]: <g, S_mu S_{Lam n} gamma>
    coeffs = draw_coefficients(C, rng, trials)
    H0 = coeffs @ M.T  # [trial, n]
    if real_mode:
        H0 = np.real(phase_map(slots)[None, :] * H0)
        nz = np.sqrt(noise_var / 2) * rng.standard_normal(trials)
        pw = H0 ** 2
    else:
        nz = np.sqrt(noise_var / 2) * (rng.standard_normal(trials) + 1j * rng.standard_normal(trials))
        pw = np.abs(H0) ** 2
    sig_s = pw[:, 0]
    intf_s = pw[:, 1:].sum(axis=1)
    sig, intf = float(sig_s.mean()), float(intf_s.mean())
    nv = float(np.mean(np.abs(nz) ** 2))
    se = (lambda v: float(v.std(ddof=1) / np.sqrt(trials))) if trials > 1 else (lambda v: 0.0)
    return MonteCarloSinr(sig / (nv + intf), sig, intf, nv, trials, se(sig_s), se(intf_s))
