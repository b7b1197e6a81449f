"""Hot inner loops with a numba path and a pure-numpy fallback.

The backend is chosen once at import time. Set ``PULSESHAPE_NUMBA=0`` to
force the numpy path (also used automatically when numba is missing).
Both implementations are always importable as ``numba_impl`` / ``numpy_impl``
so they can be compared directly.
"""
import os
from types import SimpleNamespace

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("PULSESHAPE_NUMBA", "1").lower() not in ("0", "false", "no", "off")


# ---------------------------------------------------------------- numpy path

def _shift_stack_np(x, ks, ls):
    L = x.shape[0]
    t = np.arange(L)
    ks = np.asarray(ks, dtype=np.int64)
    ls = np.asarray(ls, dtype=np.int64)
    idx = (t[None, :] - ks[:, None]) % L
    ph = np.exp(2j * np.pi * ((ls[:, None] * t[None, :]) % L) / L)
    return ph * x[idx]


def _lattice_periodize_np(R, a, b):
    # S[t, t+d] = (L/b) * sum_j R[t - j a, t - j a + d]  for d = 0 mod L/b
    L = R.shape[0]
    t = np.arange(L)
    D = R[t[:, None], (t[:, None] + t[None, :]) % L]  # D[t, d] = R[t, t+d]
    fold = D.reshape(L // a, a, L).sum(axis=0)  # [t mod a, d]
    mask = (t % (L // b)) == 0
    fold[:, ~mask] = 0.0
    S = np.zeros_like(R)
    rows = np.arange(L)
    S[rows[:, None], (rows[:, None] + t[None, :]) % L] = (L / b) * fold[rows % a]
    return S


def _lattice_fold_np(P, a, b):
    L = P.shape[0]
    return P.reshape(L // a, a, L // b, b).sum(axis=(0, 2))


def _apply_shifts_np(x, ks, ls, coeffs):
    return coeffs @ _shift_stack_np(x, ks, ls)


numpy_impl = SimpleNamespace(
    shift_stack=_shift_stack_np,
    lattice_periodize=_lattice_periodize_np,
    lattice_fold=_lattice_fold_np,
    apply_shifts=_apply_shifts_np,
)


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _unit_roots(L):
        w = np.empty(L, dtype=np.complex128)
        for n in range(L):
            w[n] = np.exp(2j * np.pi * n / L)
        return w

    @numba.njit(cache=True)
    def _shift_stack_nb(x, ks, ls):
        L = x.shape[0]
        n = ks.shape[0]
        w = _unit_roots(L)
        out = np.empty((n, L), dtype=np.complex128)
        for i in range(n):
            k = ks[i] % L
            l = ls[i] % L
            for t in range(L):
                out[i, t] = w[(l * t) % L] * x[(t - k) % L]
        return out

    @numba.njit(cache=True)
    def _lattice_periodize_nb(R, a, b):
        L = R.shape[0]
        step = L // b
        scale = L / b
        fold = np.zeros((a, L), dtype=np.complex128)
        for t in range(L):
            r = t % a
            for d in range(0, L, step):
                fold[r, d] += R[t, (t + d) % L]
        S = np.zeros((L, L), dtype=np.complex128)
        for t in range(L):
            r = t % a
            for d in range(0, L, step):
                S[t, (t + d) % L] = scale * fold[r, d]
        return S

    @numba.njit(cache=True)
    def _lattice_fold_nb(P, a, b):
        L = P.shape[0]
        out = np.zeros((a, b))
        # block walk avoids a modulo per sample
        for k0 in range(0, L, a):
            for i in range(a):
                row = P[k0 + i]
                for l0 in range(0, L, b):
                    for j in range(b):
                        out[i, j] += row[l0 + j]
        return out

    @numba.njit(cache=True)
    def _apply_shifts_nb(x, ks, ls, coeffs):
        L = x.shape[0]
        w = _unit_roots(L)
        out = np.zeros(L, dtype=np.complex128)
        for i in range(ks.shape[0]):
            k = ks[i] % L
            l = ls[i] % L
            c = coeffs[i]
            for t in range(L):
                out[t] += c * w[(l * t) % L] * x[(t - k) % L]
        return out

    def _periodize_nb_entry(R, a, b):
        return _lattice_periodize_nb(np.ascontiguousarray(R, dtype=np.complex128), int(a), int(b))

    numba_impl = SimpleNamespace(
        shift_stack=lambda x, ks, ls: _shift_stack_nb(
            np.ascontiguousarray(x, dtype=np.complex128),
            np.asarray(ks, dtype=np.int64), np.asarray(ls, dtype=np.int64)),
        lattice_periodize=_periodize_nb_entry,
        lattice_fold=lambda P, a, b: _lattice_fold_nb(np.ascontiguousarray(P, dtype=np.float64), int(a), int(b)),
        apply_shifts=lambda x, ks, ls, c: _apply_shifts_nb(
            np.ascontiguousarray(x, dtype=np.complex128),
            np.asarray(ks, dtype=np.int64), np.asarray(ls, dtype=np.int64),
            np.ascontiguousarray(c, dtype=np.complex128)),
    )
else:  # pragma: no cover
    numba_impl = None

_active = numba_impl if USE_NUMBA else numpy_impl

BACKEND = "numba" if USE_NUMBA else "numpy"


def shift_stack(x, ks, ls):
    """Rows ``i`` hold ``S_{(ks[i], ls[i])} x``."""
    return _active.shift_stack(x, ks, ls)


def lattice_periodize(R, a, b):
    """Sum ``S_lam R S_lam^*`` over the cyclic lattice ``aZ x bZ``."""
    return _active.lattice_periodize(R, a, b)


def lattice_fold(P, a, b):
    """Fold an ``L x L`` real grid onto ``a x b`` cosets of the lattice."""
    return _active.lattice_fold(P, a, b)


def apply_shifts(x, ks, ls, coeffs):
    return _active.apply_shifts(x, ks, ls, coeffs)
