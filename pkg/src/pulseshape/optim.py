"""Pulse design: eigen-localization, mountain climbing, SVD bound, SINR iteration."""
from dataclasses import dataclass, field
import math

import numpy as np
import scipy.linalg

from . import _kernels
from .gabor import PulsePair, tighten
from .tfcore import normalize
from .wssus import localization_operator, q_operator

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 50
GAP_WARN = 1e-8


@dataclass
class ClimbTrace:
    method: str
    objective: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "method": self.method,
            "iterations": self.iterations,
            "converged": self.converged,
            "objective": [float(v) for v in self.objective],
            "notes": list(self.notes),
        }


def fix_phase(v):
    """Rotate so the largest-magnitude sample is real positive."""
    i = int(np.argmax(np.abs(v)))
    return v * (np.conj(v[i]) / abs(v[i]))


def _top_eigvec(A, B=None):
    n = A.shape[0]
    lo = max(n - 2, 0)
    w, V = scipy.linalg.eigh(A, B, subset_by_index=[lo, n - 1])
    gap = float(w[-1] - w[0]) if w.size > 1 else math.inf
    return float(w[-1]), fix_phase(normalize(V[:, -1])), gap


def max_eig_pulse(C, g, trace=None):
    """Top eigenpair of ``L_{C,g}``: the transmit pulse maximizing the gain for receive filter ``g``."""
    lam, v, gap = _top_eigvec(localization_operator(C, normalize(g)))
    if trace is not None and gap < GAP_WARN:
        trace.notes.append(f"spectral gap {gap:.2e} at step {len(trace.objective)}")
    return v, lam


def mountain_climb(C, g0, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Alternate ``gamma <- argmax L_{C,g}`` and ``g <- argmax L_{C~,gamma}``.

    Stops when the receive-side half step gains less than ``tol``. With
    ``tol=inf`` only the first transmit-side half step is taken.
    """
    Ct = C.reflected()
    g = normalize(g0)
    trace = ClimbTrace("mountain_climb")
    gamma = None
    for it in range(1, max_iter + 1):
        gamma, lam1 = max_eig_pulse(C, g, trace)
        trace.objective.append(lam1)
        trace.iterations = it
        if math.isinf(tol):
            trace.converged = True
            break
        g, lam2 = max_eig_pulse(Ct, gamma, trace)
        trace.objective.append(lam2)
        if lam2 - lam1 < tol:
            trace.converged = True
            break
    return PulsePair(g, gamma, {"method": "mountain_climb", "tol": tol, "max_iter": max_iter}), trace


def svd_pulses(C):
    """Top singular pair of ``Q = sum p(mu) S_mu``; returns the pair and ``sigma_max^2``.

    ``g = Q gamma / sigma_max`` so that ``<g, Q gamma>`` is real positive.
    """
    Q = q_operator(C)
    U, s, Vh = np.linalg.svd(Q)
    gamma = fix_phase(Vh[0].conj())
    g = Q @ gamma / s[0]
    return PulsePair(g, gamma, {"method": "svd"}), float(s[0] ** 2)


def interference_operator(C, fixed, lat):
    """``sum_{d != 0} L_{C + Lam d, fixed}`` via lattice periodization of ``L_{C,fixed}``."""
    A = localization_operator(C, fixed)
    F = _kernels.lattice_periodize(A, lat.a, lat.b)
    return A, F - A


def _sinr_step(C, fixed, lat, noise_var):
    A, I = interference_operator(C, normalize(fixed), lat)
    N = I + noise_var * np.eye(A.shape[0])
    val, v, gap = _top_eigvec(A, N)
    return v, val, gap


def sinr_iteration(C, lat, noise_var, g0, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Alternating generalized-eigenvector ascent of the lattice SINR.

    Transmit step: ``gamma`` maximizes ``<gamma, A gamma> / <gamma, N gamma>`` with
    ``A = L_{C,g}`` and ``N = noise_var I + sum_{d != 0} L_{C + Lam d, g}``.
    Receive step: the same with ``C~`` and the roles of ``g``/``gamma`` swapped.
    The Rayleigh quotient equals the analytic SINR of the unit-norm pair.
    """
    if lat.density < 1:
        raise ValueError("pass the adjoint lattice for density < 1")
    if noise_var <= 0:
        raise ValueError("noise_var must be positive")
    lat._require_periodic()
    Ct = C.reflected()
    g = normalize(g0)
    trace = ClimbTrace("sinr_iteration")
    trace.notes.append("reconstructed update order: transmit then receive generalized eigenvector")
    gamma = None
    for it in range(1, max_iter + 1):
        gamma, s1, gap1 = _sinr_step(C, g, lat, noise_var)
        trace.objective.append(s1)
        g, s2, gap2 = _sinr_step(Ct, gamma, lat, noise_var)
        trace.objective.append(s2)
        trace.iterations = it
        for gap in (gap1, gap2):
            if gap < GAP_WARN * max(s2, 1.0):
                trace.notes.append(f"spectral gap {gap:.2e} in iteration {it}")
        if s2 - s1 < tol * max(1.0, abs(s2)):
            trace.converged = True
            break
    meta = {"method": "sinr_iteration", "tol": tol, "max_iter": max_iter, "noise_var": noise_var}
    return PulsePair(g, gamma, meta), trace


def localize_then_tighten(C, lat, g0, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, climb=True):
    """Mountain-climb, tighten the transmit pulse on ``lat``, then re-optimize ``g``.

    ``climb=False`` tightens ``g0`` directly and uses it on both sides, which
    is the IOTA construction when ``g0`` is a grid-matched Gaussian.
    """
    if not climb:
        gamma_t = tighten(g0, lat)
        trace = ClimbTrace("tighten", [], 0, True)
        return PulsePair(gamma_t, gamma_t, {"method": "iota"}), trace
    pair, trace = mountain_climb(C, g0, tol, max_iter)
    gamma_t = tighten(pair.gamma, lat)
    g, lam = max_eig_pulse(C.reflected(), gamma_t, trace)
    trace.notes.append(f"gain after tightening {lam:.12g}")
    return PulsePair(g, gamma_t, {"method": "localize_then_tighten"}), trace
