"""Closed-form localization/SINR bounds and approximate-eigenstructure errors."""
from dataclasses import dataclass
import math

import numpy as np

from .tfcore import as_signal, shifted_copies, tf_shift
from .wssus import apply_channel


@dataclass(frozen=True)
class HoelderPair:
    """Conjugate exponents ``1/a + 1/b = 1`` with ``1 < a <= inf``."""

    a: float

    def __post_init__(self):
        if not self.a > 1:
            raise ValueError("need a > 1")

    @property
    def b(self):
        return 1.0 if math.isinf(self.a) else self.a / (self.a - 1.0)

    @property
    def exponent(self):
        return 1.0 / max(self.b, 2.0)


def to_db(x):
    return 10.0 * math.log10(x) if x > 0 else -math.inf


def lambda_max_bounds(area):
    """``(erf(sqrt(pi A / 4))^4 / A^2, min(exp(-A/e), 1/A))`` for support area ``A``."""
    if area <= 0:
        raise ValueError("area must be positive")
    lower = math.erf(math.sqrt(math.pi * area / 4.0)) ** 4 / area ** 2
    upper = min(math.exp(-area / math.e), 1.0 / area)
    return lower, upper


def sinr_star_bounds(noise_var, density, area):
    """Upper bound and no-BLT estimate of the optimal tight-frame SINR (linear).

    The upper bound needs ``area <= e``; otherwise it is ``None``.
    """
    upper = None
    if area <= math.e:
        upper = 1.0 / ((noise_var + density) * math.exp(area / math.e) - 1.0)
    lower = 1.0 / ((noise_var + density) * area / math.erf(math.sqrt(math.pi * area / 4.0)) ** 4 - 1.0)
    return upper, lower


def bounds_record(area, density, noise_var):
    """JSON-ready record of every bound for one operating point."""
    lo, up = lambda_max_bounds(area)
    s_up, s_lo = sinr_star_bounds(noise_var, density, area)
    return {
        "area": area,
        "density": density,
        "sigma2": noise_var,
        "lower": lo,
        "upper": up,
        "sinr_upper": s_up,
        "sinr_lower_noBLT": s_lo,
        "lower_noBLT_db": to_db(s_lo),
        "upper_db": None if s_up is None else to_db(s_up),
    }


def e2_error(h, pair, mu, return_lambda=False):
    """``||H S_mu gamma - lam S_mu g||_2`` with ``lam = <S_mu g, H S_mu gamma>``."""
    sg = tf_shift(pair.g, mu)
    hsgam = apply_channel(h, tf_shift(pair.gamma, mu))
    lam = np.vdot(sg, hsgam)
    err = float(np.linalg.norm(hsgam - lam * sg))
    return (err, lam) if return_lambda else err


def spreading_norm(h, a):
    """Lp norm of the spreading density ``L c`` with cell measure ``1/L``."""
    dens = np.abs(h.spreading_density())
    if math.isinf(a):
        return float(dens.max(initial=0.0))
    return float((np.sum(dens ** a) / h.L) ** (1.0 / a))


@dataclass
class E2Report:
    ratio: float
    rhs: float
    passed: bool
    quotient: float


def e2_lemma1_check(h, pair, U, hp, mus, slack=1e-9):
    """Compare ``max_mu E2 / ||Sigma||_a`` with ``(|U| - int_U |A|^2)^(1/max(b,2))``.

    ``U`` is a :class:`~pulseshape.wssus.ScatteringMass` (only its support is used).
    """
    L = h.L
    if U.area > 1:
        raise ValueError(f"|U| = {U.area} > 1")
    g = as_signal(pair.g)
    A_U = shifted_copies(pair.gamma, U.support) @ np.conj(g)
    loc = float(np.sum(np.abs(A_U) ** 2)) / L
    rhs = max(U.area - loc, 0.0) ** hp.exponent
    norm = spreading_norm(h, hp.a)
    if norm == 0:
        ratio = 0.0
    else:
        ratio = max(e2_error(h, pair, mu) for mu in mus) / norm
    quotient = ratio / rhs if rhs > 0 else (0.0 if ratio == 0 else math.inf)
    return E2Report(ratio, rhs, ratio <= rhs + slack, quotient)
