"""Signaling lattices, Gabor frame operators and prototype pulses."""
from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np

from . import _kernels
from .tfcore import as_signal, normalize

FRAME_EPS = 1e-10


class NotAFrame(ValueError):
    """The shifted pulse family does not span the signal space."""


@dataclass(frozen=True)
class Lattice:
    """Separable lattice ``aZ x bZ`` on the ``L x L`` time-frequency grid.

    ``a`` is the time step in samples, ``b`` the frequency step in bins.
    A lattice is *periodic* when both steps divide ``L``; only periodic
    lattices have a cyclic frame operator. The cp-OFDM time step
    ``T_u + T_cp`` generally is not a divisor and is used over a finite
    slot grid instead.
    """

    a: int
    b: int
    L: int

    def __post_init__(self):
        if not (1 <= self.a <= self.L and 1 <= self.b <= self.L):
            raise ValueError(f"lattice steps out of range: a={self.a}, b={self.b}, L={self.L}")

    @property
    def periodic(self):
        return self.L % self.a == 0 and self.L % self.b == 0

    @property
    def density_fraction(self):
        return Fraction(self.L, self.a * self.b)

    @property
    def density(self):
        """Symbols per unit area, ``|Lambda|^-1 = L / (a b)``."""
        return self.L / (self.a * self.b)

    @property
    def shape(self):
        """Number of (time, frequency) slots."""
        return self.L // self.a, self.L // self.b

    @property
    def point_count(self):
        n1, n2 = self.shape
        return n1 * n2

    def points(self, slots=None):
        """Integer cells ``(a n1, b n2)`` for every slot (default: full grid)."""
        if slots is None:
            n1, n2 = self.shape
            slots = np.stack(np.meshgrid(np.arange(n1), np.arange(n2), indexing="ij"), -1).reshape(-1, 2)
        slots = np.asarray(slots, dtype=np.int64).reshape(-1, 2)
        return np.stack([slots[:, 0] * self.a, slots[:, 1] * self.b], axis=1)

    def _require_periodic(self):
        if not self.periodic:
            raise ValueError(f"lattice (a={self.a}, b={self.b}) does not tile Z_{self.L}")


@dataclass
class PulsePair:
    """Receive filter ``g`` and transmit filter ``gamma``."""

    g: np.ndarray
    gamma: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.g = as_signal(self.g)
        self.gamma = as_signal(self.gamma)
        if self.g.shape != self.gamma.shape:
            raise ValueError("g and gamma must have equal length")

    @property
    def L(self):
        return self.g.shape[0]


def make_lattice(L, density, ratio_target):
    """Pick ``(a, b)`` dividing ``L`` with ``a b = L / density`` and ``a/b`` closest to ``ratio_target``.

    Closeness is measured on a log scale; ties go to the larger ``a``.
    """
    density = Fraction(density).limit_denominator(10**6)
    if density <= 0:
        raise ValueError("density must be positive")
    product = Fraction(L) / density
    if product.denominator != 1:
        raise ValueError(f"L/density = {product} is not an integer")
    product = int(product)
    if ratio_target <= 0:
        raise ValueError("ratio_target must be positive")
    target = math.log(ratio_target)
    best = None
    for a in range(1, L + 1):
        if L % a or product % a:
            continue
        b = product // a
        if L % b:
            continue
        key = (abs(math.log(a / b) - target), -a)
        if best is None or key < best[0]:
            best = (key, a, b)
    if best is None:
        raise ValueError(f"no divisor pair of L={L} has product {product}")
    return Lattice(best[1], best[2], L)


def adjoint_lattice(lat):
    """``Lambda° = |Lambda|^-1 Lambda``, i.e. ``(L/b, L/a)``."""
    lat._require_periodic()
    return Lattice(lat.L // lat.b, lat.L // lat.a, lat.L)


def frame_operator(gamma, lat):
    """Dense frame operator ``sum_lam (S_lam gamma)(S_lam gamma)^*``."""
    lat._require_periodic()
    gamma = as_signal(gamma)
    return _kernels.lattice_periodize(np.outer(gamma, gamma.conj()), lat.a, lat.b)


def frame_quality(gamma, lat):
    """Return ``(A_frame, B_gamma)``: extreme eigenvalues of the frame operator."""
    w = np.linalg.eigvalsh(frame_operator(gamma, lat))
    return float(w[0]), float(w[-1])


def inverse_sqrt(M, eps=FRAME_EPS):
    """``M^{-1/2}`` for Hermitian positive definite ``M``."""
    w, V = np.linalg.eigh(M)
    if w[0] <= eps:
        raise NotAFrame(f"smallest eigenvalue {w[0]:.3e} <= {eps:.1e}")
    return (V / np.sqrt(w)) @ V.conj().T


def tighten(gamma, lat, eps=FRAME_EPS):
    """Canonical tight window ``normalize((|Lambda| S)^{-1/2} gamma)``.

    Below density one the adjoint lattice is tightened instead, which
    yields an orthonormal system on ``lat``.
    """
    if lat.density < 1:
        lat = adjoint_lattice(lat)
    S = frame_operator(gamma, lat)
    w, V = np.linalg.eigh(S)
    if w[0] <= eps:
        raise NotAFrame(f"A_frame = {w[0]:.3e} <= {eps:.1e} on lattice (a={lat.a}, b={lat.b})")
    w = w / lat.density
    out = V @ ((V.conj().T @ as_signal(gamma)) / np.sqrt(w))
    return normalize(out)


def condition_number(gamma, lat):
    A, B = frame_quality(gamma, lat)
    return B / A if A > 0 else math.inf


def make_gaussian(L, spread_ratio=1.0):
    """Unit-norm periodized Gaussian with time/frequency spread ratio ``spread_ratio``.

    ``exp(-pi t^2 / (r L))`` summed over all periods; its unitary DFT is the
    same construction with ``1/r``.
    """
    r = float(spread_ratio)
    if r <= 0:
        raise ValueError("spread_ratio must be positive")
    t = np.arange(L, dtype=np.float64)
    t = np.where(t >= L / 2, t - L, t)
    reach = int(math.ceil(math.sqrt(45.0 * r / (math.pi * L)))) + 1
    n = np.arange(-reach, reach + 1)
    x = np.exp(-np.pi * (t[:, None] + n[None, :] * L) ** 2 / (r * L)).sum(axis=1)
    return normalize(x)


def make_cp_ofdm(L, T_u, T_cp):
    """cp-OFDM pair: ``gamma ~ 1[-T_cp, T_u)``, ``g ~ 1[0, T_u)``.

    The intended lattice is ``a = T_u + T_cp``, ``b = L / T_u`` and is
    stored in ``meta`` along with the efficiency ``T_u / (T_u + T_cp)``.
    """
    if T_u <= 0 or T_cp < 0 or T_u + T_cp > L:
        raise ValueError("invalid cp-OFDM durations")
    if L % T_u:
        raise ValueError(f"T_u={T_u} must divide L={L}")
    t = np.arange(L)
    g = np.zeros(L, dtype=np.complex128)
    g[:T_u] = 1.0
    gamma = np.zeros(L, dtype=np.complex128)
    gamma[(t[:T_u + T_cp] - T_cp) % L] = 1.0
    T = T_u + T_cp
    meta = {
        "constructor": "make_cp_ofdm",
        "params": {"L": L, "T_u": T_u, "T_cp": T_cp},
        "lattice": {"a": T, "b": L // T_u},
        "efficiency": T_u / T,
    }
    return PulsePair(normalize(g), normalize(gamma), meta)


def cp_ofdm_lattice(pair):
    lat = pair.meta["lattice"]
    return Lattice(lat["a"], lat["b"], pair.L)
