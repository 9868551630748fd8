"""Numpy statevector kernels (fallback for :mod:`qseal._ckernels`).

Every kernel works in place on a contiguous complex128 amplitude vector.
Qubit ``q`` is bit ``q`` of the basis-state index (qubit 0 is the least
significant bit).
"""
from functools import lru_cache

import numpy as np

BACKEND = "numpy"


@lru_cache(maxsize=64)
def _indices(dim):
    idx = np.arange(dim, dtype=np.int64)
    idx.setflags(write=False)
    return idx


@lru_cache(maxsize=256)
def _popcount_parity(dim, mask):
    par = np.bitwise_count(_indices(dim) & mask) & 1
    signs = 1.0 - 2.0 * par
    signs.setflags(write=False)
    return signs


@lru_cache(maxsize=256)
def _popcount(dim, mask):
    counts = np.bitwise_count(_indices(dim) & mask)
    counts.setflags(write=False)
    return counts


@lru_cache(maxsize=256)
def _cnot_pairs(dim, c, t):
    idx = _indices(dim)
    j = idx[(((idx >> c) & 1) == 1) & (((idx >> t) & 1) == 0)]
    return j, j | (1 << t)


@lru_cache(maxsize=256)
def _cswap_pairs(dim, c, a, b):
    idx = _indices(dim)
    sel = (((idx >> c) & 1) == 1) & (((idx >> a) & 1) == 1) & (((idx >> b) & 1) == 0)
    j = idx[sel]
    return j, j ^ (1 << a) ^ (1 << b)


_IPOW = (1.0 + 0j, 1j, -1.0 + 0j, -1j)


def apply_1q(psi, q, u00, u01, u10, u11):
    view = psi.reshape(-1, 2, 1 << q)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = u00 * a0 + u01 * a1
    view[:, 1, :] = u10 * a0 + u11 * a1


def apply_cnot(psi, c, t):
    j, k = _cnot_pairs(psi.shape[0], c, t)
    psi[j], psi[k] = psi[k], psi[j].copy()


def apply_cswap(psi, c, a, b):
    j, k = _cswap_pairs(psi.shape[0], c, a, b)
    psi[j], psi[k] = psi[k], psi[j].copy()


def apply_pauli(psi, out, xmask, zmask, ny):
    dim = psi.shape[0]
    out[_indices(dim) ^ xmask] = (_IPOW[ny & 3] * _popcount_parity(dim, zmask)) * psi


def pauli_expectation(psi, xmask, zmask, ny):
    dim = psi.shape[0]
    flipped = psi[_indices(dim) ^ xmask]
    val = _IPOW[ny & 3] * np.vdot(flipped, _popcount_parity(dim, zmask) * psi)
    return float(val.real)


def prob_one(psi, q):
    hi = psi.reshape(-1, 2, 1 << q)[:, 1, :]
    return float(np.sum(hi.real ** 2 + hi.imag ** 2))


def marginal(psi, qubits):
    idx = _indices(psi.shape[0])
    outcome = np.zeros(psi.shape[0], dtype=np.int64)
    for j, q in enumerate(qubits):
        outcome |= ((idx >> int(q)) & 1) << j
    w = psi.real ** 2 + psi.imag ** 2
    return np.bincount(outcome, weights=w, minlength=1 << len(qubits))


def collapse(psi, mask, value):
    drop = (_indices(psi.shape[0]) & mask) != value
    psi[drop] = 0.0
    norm2 = float(np.sum(psi.real ** 2 + psi.imag ** 2))
    if norm2 > 0.0:
        psi /= np.sqrt(norm2)
    return norm2


def masked_weight(psi, mask, threshold):
    above = _popcount(psi.shape[0], mask) > threshold
    sel = psi[above]
    return float(np.sum(sel.real ** 2 + sel.imag ** 2))


def majority_project(psi, mask, threshold, upper):
    above = _popcount(psi.shape[0], mask) > threshold
    psi[~above if upper else above] = 0.0
    norm2 = float(np.sum(psi.real ** 2 + psi.imag ** 2))
    if norm2 > 0.0:
        psi /= np.sqrt(norm2)
    return norm2
